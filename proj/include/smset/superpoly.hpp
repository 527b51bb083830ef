#pragma once

#include "smset/scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace smset {

struct Ambient;
using AmbientPtr = std::shared_ptr<const Ambient>;

/// Generator universe a SuperPolynomial lives over: commuting coordinates,
/// anticommuting generators, and nilpotent even generators truncated at total
/// degree `weil_order`.
struct Ambient {
    std::vector<Sym> evens;
    std::vector<Sym> odds;
    std::vector<Sym> weils;
    std::uint32_t weil_order = 0; // r; weils empty iff r == 0

    enum class GenKind { Even, Odd, Weil, None };

    static AmbientPtr make(std::vector<Sym> evens, std::vector<Sym> odds,
                           std::vector<Sym> weils = {}, std::uint32_t weil_order = 0);

    GenKind kind_of(Sym s) const;
    int odd_index(Sym s) const;  // -1 if absent
    int weil_index(Sym s) const; // -1 if absent
    bool has_generator(Sym s) const { return kind_of(s) != GenKind::None; }

    /// Maximal total degree a product of nilpotent generators can carry.
    std::uint32_t nilpotent_bound() const {
        return static_cast<std::uint32_t>(odds.size()) +
               static_cast<std::uint32_t>(weils.size()) * weil_order;
    }

    std::string str() const;
};

bool same_signature(const Ambient& a, const Ambient& b);
bool same_signature(const AmbientPtr& a, const AmbientPtr& b);

using GrMono = std::vector<std::uint16_t>;   // strictly increasing indices into odds
using WeilMono = std::vector<std::uint16_t>; // exponent per weil generator

struct SPTerm {
    ScalarExpr coeff;
    GrMono gr;
    WeilMono wl; // empty means all exponents zero
};

int spkey_cmp(const GrMono& ga, const WeilMono& wa, const GrMono& gb, const WeilMono& wb);

/// Element of the free graded-commutative algebra
///   C^inf(evens) (x) Lambda[odds] (x) R[weils]/(total degree > r)
/// in canonical normal form. Immutable after construction.
class SuperPolynomial {
public:
    SuperPolynomial() = default;
    explicit SuperPolynomial(AmbientPtr amb) : amb_(std::move(amb)) {}

    static SuperPolynomial zero(AmbientPtr amb) { return SuperPolynomial(std::move(amb)); }
    static SuperPolynomial scalar(AmbientPtr amb, const ScalarExpr& c);
    static SuperPolynomial constant(AmbientPtr amb, const Rational& q);
    static SuperPolynomial generator(AmbientPtr amb, Sym g);
    static SuperPolynomial from_terms(AmbientPtr amb, std::vector<SPTerm> ts);

    const AmbientPtr& ambient() const { return amb_; }
    const std::vector<SPTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// 0 = even, 1 = odd, nullopt = inhomogeneous. Zero counts as even.
    std::optional<int> parity() const;

    SuperPolynomial operator-() const;
    SuperPolynomial scaled(const Rational& q) const;
    friend SuperPolynomial operator+(const SuperPolynomial& a, const SuperPolynomial& b);
    friend SuperPolynomial operator-(const SuperPolynomial& a, const SuperPolynomial& b);
    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b);
    SuperPolynomial& operator+=(const SuperPolynomial& o);
    SuperPolynomial& operator-=(const SuperPolynomial& o);
    SuperPolynomial& operator*=(const SuperPolynomial& o);
    SuperPolynomial pow(int e) const;
    SuperPolynomial inverse() const; // requires invertible scalar part

    /// Graded derivative by any ambient generator. Odd generators use the
    /// left-derivative convention.
    SuperPolynomial partial_derivative(Sym gen) const;

    /// Unique algebra-homomorphism extension of a parity-preserving generator
    /// assignment into the target ambient. Unassigned generators must exist in
    /// the target and map to themselves. Elementary functions and opaque
    /// function symbols compose via finite Taylor expansion in the nilpotent
    /// part of the assigned images.
    SuperPolynomial substitute(const std::map<Sym, SuperPolynomial>& images,
                               AmbientPtr target) const;

    /// Collapse scalar coefficients to exact rationals at a point (all even
    /// variables occurring in coefficients must be assigned); the graded
    /// structure passes through.
    SuperPolynomial evaluate_numeric(const std::map<Sym, Rational>& point) const;

    /// Re-express this element over another ambient containing (by name, with
    /// matching kind and truncation order) every generator it uses.
    SuperPolynomial transport(const AmbientPtr& into) const;

    ScalarExpr scalar_part() const;       // coefficient of the empty monomial
    SuperPolynomial nilpotent_part() const;
    ScalarExpr coefficient(const GrMono& gr, const WeilMono& wl) const;
    SuperPolynomial scalar_multiple(const ScalarExpr& c) const;

    std::string str() const;

private:
    AmbientPtr amb_;
    std::vector<SPTerm> terms_;

    void require_same_ambient(const SuperPolynomial& o, const char* op) const;
};

/// Validate and complete a parity-preserving generator assignment from `src`
/// into `target`: unassigned generators must exist in the target and map to
/// themselves; odd/weil images are checked for the source nilpotency
/// relations, then all images for parity.
std::map<Sym, SuperPolynomial> complete_homomorphism(const AmbientPtr& src,
                                                     const std::map<Sym, SuperPolynomial>& images,
                                                     const AmbientPtr& target);

int superpoly_cmp(const SuperPolynomial& a, const SuperPolynomial& b);
inline bool operator==(const SuperPolynomial& a, const SuperPolynomial& b) {
    return superpoly_cmp(a, b) == 0;
}
inline bool operator!=(const SuperPolynomial& a, const SuperPolynomial& b) {
    return superpoly_cmp(a, b) != 0;
}

std::ostream& operator<<(std::ostream& os, const SuperPolynomial& p);

} // namespace smset
