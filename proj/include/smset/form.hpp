#pragma once

#include "smset/probe.hpp"

#include <optional>

namespace smset {

/// Differential form with SuperPolynomial coefficients over a distinguished
/// list of base coordinates (a subset of the ambient's even generators).
/// Everything outside the base is carried along as a constant.
struct DifferentialForm {
    AmbientPtr amb;
    std::vector<Sym> base;
    int degree = 0;
    // strictly increasing index vectors into `base`, sorted; nonzero coeffs
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> terms;

    static DifferentialForm zero(AmbientPtr amb, std::vector<Sym> base, int degree);
    static DifferentialForm scalar(AmbientPtr amb, std::vector<Sym> base,
                                   const SuperPolynomial& c);
    static DifferentialForm monomial(AmbientPtr amb, std::vector<Sym> base,
                                     const SuperPolynomial& c,
                                     std::vector<std::uint8_t> wedge);
    static DifferentialForm from_terms(
        AmbientPtr amb, std::vector<Sym> base, int degree,
        std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts);

    bool is_zero() const { return terms.empty(); }
    DifferentialForm operator-() const;
    DifferentialForm scalar_multiple(const SuperPolynomial& c) const;
    std::string str() const;
};

bool operator==(const DifferentialForm& a, const DifferentialForm& b);
inline bool operator!=(const DifferentialForm& a, const DifferentialForm& b) {
    return !(a == b);
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// d along the base coordinates only; everything else is constant.
DifferentialForm exterior_derivative(const DifferentialForm& w);

/// Pullback along a map of even probes whose coordinates are the form's base.
DifferentialForm pullback_form(const DifferentialForm& w, const ProbeMap& f);

/// Iterated exact integration of a top-degree form over a rational box. The
/// base coordinates must appear polynomially (or through the closed-form rule
/// table); the rest of the ambient passes through into the result.
SuperPolynomial integrate_over_box(const DifferentialForm& w, const Box& box);

/// Exact scalar antiderivative in `var`; polynomial powers plus the rule
/// table (exp/sin/cos with an affine argument). With `allow_opaque_usub`,
/// also c * f^n * f' -> c f^(n+1)/(n+1) for an opaque f. Throws
/// UnsupportedIntegrand otherwise.
ScalarExpr antiderivative(const ScalarExpr& e, Sym var, bool allow_opaque_usub = false);

struct ExactnessResult {
    bool exact = false;
    std::optional<DifferentialForm> witness; // primitive with d(witness) == form
};

/// Absolute exactness on the whole coordinate space (star-shaped): for degree
/// >= 1 a closed form with polynomial coefficients is exact with an explicit
/// primitive; in one dimension the rule table (including the opaque-function
/// pattern) is also tried.
ExactnessResult is_exact_polynomial(const DifferentialForm& w);

struct RelativeExactness {
    bool exact = false;
    SuperPolynomial integral;                // the obstruction
    std::optional<DifferentialForm> witness; // vanishing at the lower boundary (1D)
};

/// Exactness of a top-degree form relative to boundary-fixed data on a box:
/// decided by the vanishing of the integral.
RelativeExactness is_exact_rel_boundary(const DifferentialForm& w, const Box& box);

/// Plot set of the degree-n form moduli at an even probe: a singleton zero
/// for k < n, otherwise the basis of wedge monomials with free smooth
/// coefficients.
struct ModuliFormPlots {
    ProbeSpace probe;
    int degree = 0;
    bool singleton = false;
    std::vector<std::vector<std::uint8_t>> basis;
    std::string str() const;
};

ModuliFormPlots moduli_form_plot(const ProbeSpace& probe, int degree);

/// Seed-reproducible random polynomial form (coefficients polynomial in the
/// base coordinates).
DifferentialForm random_polynomial_form(Rng& rng, const AmbientPtr& amb,
                                        const std::vector<Sym>& base, int degree,
                                        int max_coeff_degree = 2);

} // namespace smset
