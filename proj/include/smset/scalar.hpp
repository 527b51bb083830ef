#pragma once

#include "smset/error.hpp"
#include "smset/rational.hpp"
#include "smset/symbols.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace smset {

class ScalarExpr;
using ScalarPtr = std::shared_ptr<const ScalarExpr>;

enum class ElemFn : std::uint8_t { Sin, Cos, Exp, Log };
const char* elem_fn_name(ElemFn fn);

/// A multiplicative atom of a normalized scalar monomial.
///
///   Var   plain (even) variable or parameter symbol
///   Func  opaque smooth function symbol, e.g. f(t), with a formal
///         derivative multi-index per argument
///   Elem  elementary function applied to a normalized subexpression
///   Quot  a non-monomial subexpression kept as a base for negative powers
struct Atom {
    enum class Kind : std::uint8_t { Var, Func, Elem, Quot };

    Kind kind = Kind::Var;
    Sym name = 0;
    std::vector<Sym> args;
    std::vector<std::uint32_t> derivs;
    ElemFn fn = ElemFn::Sin;
    ScalarPtr sub;

    static Atom var(Sym v);
    static Atom func(Sym name, std::vector<Sym> args, std::vector<std::uint32_t> derivs = {});
    static Atom elem(ElemFn fn, const ScalarExpr& arg);
    static Atom quot(const ScalarExpr& base);

    std::string str() const;
};

int atom_cmp(const Atom& a, const Atom& b);

struct Monomial {
    Rational coeff = 0;
    std::vector<std::pair<Atom, int>> powers; // sorted by atom_cmp, exponents nonzero
    int total_degree() const;
};

int mono_cmp(const Monomial& a, const Monomial& b); // ignores coefficients

/// Exact symbolic scalar in normal form: a sum of monomials, flattened,
/// sorted by graded-lex term order, like terms merged, zero terms dropped.
/// Values are immutable; all operations return new values.
class ScalarExpr {
public:
    ScalarExpr() = default; // zero

    static ScalarExpr constant(const Rational& q);
    static ScalarExpr integer(long n);
    static ScalarExpr one() { return integer(1); }
    static ScalarExpr variable(Sym v);
    static ScalarExpr variable(const std::string& name);
    static ScalarExpr func(Sym name, std::vector<Sym> args, std::vector<std::uint32_t> derivs = {});
    static ScalarExpr from_atom(const Atom& a, int exp = 1);
    static ScalarExpr from_monomials(std::vector<Monomial> ms);

    const std::vector<Monomial>& monomials() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::optional<Rational> as_constant() const;
    bool is_variable(Sym v) const;

    ScalarExpr operator-() const;
    ScalarExpr scaled(const Rational& q) const;
    ScalarExpr pow(int e) const;

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    ScalarExpr& operator+=(const ScalarExpr& o);
    ScalarExpr& operator-=(const ScalarExpr& o);
    ScalarExpr& operator*=(const ScalarExpr& o);

    ScalarExpr derivative(Sym var) const;

    ScalarExpr substitute_var(Sym var, const ScalarExpr& image) const;
    ScalarExpr substitute_vars(const std::map<Sym, ScalarExpr>& images) const;
    /// Replace an opaque function symbol (and all of its formal derivatives)
    /// by a concrete body expressed in `params`.
    ScalarExpr substitute_func(Sym fname, const std::vector<Sym>& params,
                               const ScalarExpr& body) const;

    bool depends_on(Sym var) const;
    void collect_vars(std::set<Sym>& out) const;
    void collect_funcs(std::set<Sym>& out) const;

    /// True when, restricted to `vars`, the expression is a plain polynomial:
    /// those variables occur only as nonnegative powers of Var atoms.
    bool is_polynomial_in(const std::vector<Sym>& vars) const;
    int degree_in(Sym var) const;

    Rational eval_rational(const std::function<std::optional<Rational>(Sym)>& point) const;
    double eval_double(const std::function<double(Sym)>& point) const;

    std::string str() const;
    void print(std::ostream& os) const;

private:
    std::vector<Monomial> terms_;
};

int scalar_cmp(const ScalarExpr& a, const ScalarExpr& b);
inline bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return scalar_cmp(a, b) == 0; }
inline bool operator!=(const ScalarExpr& a, const ScalarExpr& b) { return scalar_cmp(a, b) != 0; }

std::ostream& operator<<(std::ostream& os, const ScalarExpr& e);

ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr log(const ScalarExpr& a);
ScalarExpr elem_apply(ElemFn fn, const ScalarExpr& arg);

/// j-th derivative of the elementary function itself, evaluated at `arg`
/// (no chain rule). Needed for nilpotent Taylor expansion.
ScalarExpr elem_derivative(ElemFn fn, const ScalarExpr& arg, int j);

Rational rational_pow(const Rational& q, int e);

} // namespace smset
