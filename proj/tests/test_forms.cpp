#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smset/form.hpp"
#include "smset/sampling.hpp"

using namespace smset;

namespace {

AmbientPtr plane() { return Ambient::make({intern("x"), intern("y")}, {}); }

std::vector<Sym> xy() { return {intern("x"), intern("y")}; }

} // namespace

TEST_CASE("exterior derivative basics") {
    // d(t dt) = 0 at top degree
    auto line = Ambient::make({intern("t")}, {});
    auto tdt = DifferentialForm::monomial(
        line, {intern("t")}, SuperPolynomial::scalar(line, ScalarExpr::variable(intern("t"))),
        {0});
    CHECK(exterior_derivative(tdt).is_zero());

    // d(x dy) = dx ^ dy
    auto amb = plane();
    auto xdy = DifferentialForm::monomial(
        amb, xy(), SuperPolynomial::scalar(amb, ScalarExpr::variable(intern("x"))), {1});
    auto d = exterior_derivative(xdy);
    auto dxdy = DifferentialForm::monomial(amb, xy(), SuperPolynomial::constant(amb, 1), {0, 1});
    CHECK(d == dxdy);
}

TEST_CASE("d after d vanishes on random polynomial forms") {
    auto amb = Ambient::make({intern("x"), intern("y"), intern("z")}, {});
    std::vector<Sym> base = amb->evens;
    Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        int deg = static_cast<int>(rng.below(3));
        auto w = random_polynomial_form(rng, amb, base, deg);
        CHECK(exterior_derivative(exterior_derivative(w)).is_zero());
    }
}

TEST_CASE("integration over boxes") {
    auto line = Ambient::make({intern("t")}, {});
    Sym t = intern("t");
    Box unit = Box::make({rat(0)}, {rat(1)});

    auto tdt = DifferentialForm::monomial(
        line, {t}, SuperPolynomial::scalar(line, ScalarExpr::variable(t)), {0});
    CHECK(integrate_over_box(tdt, unit).str() == "1/2");

    // probe parameter passes through
    auto amb = Ambient::make({intern("u"), t}, {});
    auto ut = DifferentialForm::monomial(
        amb, {t},
        SuperPolynomial::scalar(amb, ScalarExpr::variable(intern("u")) * ScalarExpr::variable(t)),
        {0});
    CHECK(integrate_over_box(ut, unit).str() == "1/2*u");

    // wronskian density with f1 = t, f2 = t^2: integral (1/3) theta1 theta2
    auto amb2 = Ambient::make({t}, {intern("theta1"), intern("theta2")});
    ScalarExpr f1 = ScalarExpr::variable(t);
    ScalarExpr f2 = f1 * f1;
    ScalarExpr wr = f1 * f2.derivative(t) - f2 * f1.derivative(t);
    auto dens = DifferentialForm::monomial(
        amb2, {t},
        (SuperPolynomial::generator(amb2, intern("theta1")) *
         SuperPolynomial::generator(amb2, intern("theta2")))
            .scalar_multiple(wr),
        {0});
    CHECK(integrate_over_box(dens, unit).str() == "1/3*theta1*theta2");
}

TEST_CASE("rule-table integration of elementary factors") {
    auto line = Ambient::make({intern("t")}, {});
    Sym t = intern("t");
    ScalarExpr x = ScalarExpr::variable(t);
    Box unit = Box::make({rat(0)}, {rat(1)});

    // integral of t e^t over [0,1] is 1 (by parts)
    auto te = DifferentialForm::monomial(line, {t},
                                         SuperPolynomial::scalar(line, x * smset::exp(x)), {0});
    CHECK(integrate_over_box(te, unit).str() == "1");

    // non-integrable integrand is rejected
    auto lg =
        DifferentialForm::monomial(line, {t}, SuperPolynomial::scalar(line, smset::log(x)), {0});
    bool threw = false;
    try {
        integrate_over_box(lg, unit);
    } catch (const Error& e) {
        threw = e.code() == Errc::UnsupportedIntegrand;
    }
    CHECK(threw);
}

TEST_CASE("degree errors") {
    auto amb = plane();
    auto dx = DifferentialForm::monomial(amb, xy(), SuperPolynomial::constant(amb, 1), {0});
    bool threw = false;
    try {
        integrate_over_box(dx, Box::make({rat(0), rat(0)}, {rat(1), rat(1)}));
    } catch (const Error& e) {
        threw = e.code() == Errc::DegreeError;
    }
    CHECK(threw);
}

TEST_CASE("absolute exactness with explicit primitives") {
    auto amb = Ambient::make({intern("x"), intern("y"), intern("z")}, {});
    std::vector<Sym> base = amb->evens;
    Rng rng(5150);
    for (int i = 0; i < 30; ++i) {
        int deg = static_cast<int>(rng.below(2));
        auto a = random_polynomial_form(rng, amb, base, deg);
        auto da = exterior_derivative(a);
        if (da.is_zero()) continue;
        auto res = is_exact_polynomial(da);
        CHECK(res.exact);
        REQUIRE(res.witness.has_value());
        CHECK(exterior_derivative(*res.witness) == da);
    }

    // a non-closed form is not exact
    auto xdy = DifferentialForm::monomial(
        amb, base, SuperPolynomial::scalar(amb, ScalarExpr::variable(intern("x"))), {1});
    CHECK_FALSE(is_exact_polynomial(xdy).exact);
}

TEST_CASE("opaque total-derivative pattern has a primitive") {
    // 2 d/dt(psi^2) dt = 4 psi psi' dt with an opaque even psi(t)
    auto line = Ambient::make({intern("t")}, {});
    Sym t = intern("t");
    ScalarExpr psi = ScalarExpr::func(intern("psi"), {t});
    ScalarExpr dens = (psi * psi).derivative(t).scaled(rat(2));
    auto w = DifferentialForm::monomial(line, {t}, SuperPolynomial::scalar(line, dens), {0});
    auto res = is_exact_polynomial(w);
    CHECK(res.exact);
    REQUIRE(res.witness.has_value());
    CHECK(exterior_derivative(*res.witness) == w);
}

TEST_CASE("relative exactness is decided by the integral") {
    auto amb2 = Ambient::make({intern("t")}, {intern("theta1"), intern("theta2")});
    Sym t = intern("t");
    Box unit = Box::make({rat(0)}, {rat(1)});
    ScalarExpr f1 = ScalarExpr::variable(t);
    ScalarExpr f2 = f1 * f1;
    ScalarExpr wr = f1 * f2.derivative(t) - f2 * f1.derivative(t);
    auto dens = DifferentialForm::monomial(
        amb2, {t},
        (SuperPolynomial::generator(amb2, intern("theta1")) *
         SuperPolynomial::generator(amb2, intern("theta2")))
            .scalar_multiple(wr),
        {0});
    auto res = is_exact_rel_boundary(dens, unit);
    CHECK_FALSE(res.exact);
    CHECK(res.integral.str() == "1/3*theta1*theta2");

    // a derivative of something vanishing at the boundary is relatively exact
    ScalarExpr g = f1 * (ScalarExpr::one() - f1); // t(1-t)
    ScalarExpr dg = (g * g).derivative(t);
    auto wg = DifferentialForm::monomial(amb2, {t}, SuperPolynomial::scalar(amb2, dg), {0});
    CHECK(is_exact_rel_boundary(wg, unit).exact);
}

TEST_CASE("moduli of forms over even probes") {
    auto r1 = ProbeSpace::with_names({intern("x")}, {});
    auto m12 = moduli_form_plot(r1, 2);
    CHECK(m12.singleton);

    auto r2 = ProbeSpace::with_names({intern("x"), intern("y")}, {});
    auto m22 = moduli_form_plot(r2, 2);
    CHECK_FALSE(m22.singleton);
    CHECK(m22.basis.size() == 1);

    bool threw = false;
    try {
        moduli_form_plot(ProbeSpace::make(1, 1), 1);
    } catch (const Error& e) {
        threw = e.code() == Errc::Unsupported;
    }
    CHECK(threw);
}

TEST_CASE("pullback of forms along even probe maps") {
    // (w,v) -> (w,w) kills dx ^ dy
    auto r2 = ProbeSpace::with_names({intern("x"), intern("y")}, {});
    auto amb2 = r2.ambient;
    auto dxdy =
        DifferentialForm::monomial(amb2, amb2->evens, SuperPolynomial::constant(amb2, 1), {0, 1});

    auto rdiag = ProbeSpace::with_names({intern("w"), intern("v")}, {});
    std::map<Sym, SuperPolynomial> diag;
    diag.emplace(intern("x"),
                 SuperPolynomial::scalar(rdiag.ambient, ScalarExpr::variable(intern("w"))));
    diag.emplace(intern("y"),
                 SuperPolynomial::scalar(rdiag.ambient, ScalarExpr::variable(intern("w"))));
    ProbeMap f = ProbeMap::make(rdiag, r2, diag);
    CHECK(pullback_form(dxdy, f).is_zero());

    // pullback commutes with d on random forms along a curve in the plane
    auto r1 = ProbeSpace::with_names({intern("s")}, {});
    std::map<Sym, SuperPolynomial> incl;
    ScalarExpr s = ScalarExpr::variable(intern("s"));
    incl.emplace(intern("x"), SuperPolynomial::scalar(r1.ambient, s * s));
    incl.emplace(intern("y"), SuperPolynomial::scalar(r1.ambient, s.scaled(rat(3))));
    ProbeMap g = ProbeMap::make(r1, r2, incl);
    Rng rng(808);
    for (int i = 0; i < 30; ++i) {
        int deg = static_cast<int>(rng.below(2));
        auto w = random_polynomial_form(rng, amb2, amb2->evens, deg);
        CHECK(pullback_form(exterior_derivative(w), g) ==
              exterior_derivative(pullback_form(w, g)));
    }
}

TEST_CASE("integration is linear and satisfies the interval Stokes identity") {
    auto line = Ambient::make({intern("t")}, {});
    Sym t = intern("t");
    Box unit = Box::make({rat(0)}, {rat(1)});
    Rng rng(4242);
    for (int i = 0; i < 30; ++i) {
        ScalarExpr a = random_polynomial(rng, {t}, 4, 3);
        ScalarExpr b = random_polynomial(rng, {t}, 4, 3);
        auto fa = DifferentialForm::monomial(line, {t}, SuperPolynomial::scalar(line, a), {0});
        auto fb = DifferentialForm::monomial(line, {t}, SuperPolynomial::scalar(line, b), {0});
        auto sum = integrate_over_box(fa + fb, unit);
        CHECK(sum == integrate_over_box(fa, unit) + integrate_over_box(fb, unit));

        // Stokes: integral of df over [0,1] equals f(1) - f(0)
        auto df = exterior_derivative(
            DifferentialForm::scalar(line, {t}, SuperPolynomial::scalar(line, a)));
        ScalarExpr boundary = a.substitute_var(t, ScalarExpr::one()) -
                              a.substitute_var(t, ScalarExpr::constant(rat(0)));
        auto val = integrate_over_box(df, unit);
        CHECK(val == SuperPolynomial::scalar(val.ambient(), boundary));
    }
}

TEST_CASE("wedge graded commutativity with the combined sign") {
    auto amb = Ambient::make({intern("x"), intern("y"), intern("z")},
                             {intern("theta1"), intern("theta2")});
    std::vector<Sym> base = amb->evens;
    Rng rng(777);
    for (int i = 0; i < 40; ++i) {
        int pa = static_cast<int>(rng.below(2));
        int pb = static_cast<int>(rng.below(2));
        int da = static_cast<int>(rng.below(3));
        int db = static_cast<int>(rng.below(3));
        auto ca = random_superpoly(rng, amb, pa, 1, 2);
        auto cb = random_superpoly(rng, amb, pb, 1, 2);
        std::vector<std::uint8_t> ia, ib;
        for (int j = 0; j < da; ++j) ia.push_back(static_cast<std::uint8_t>(j));
        for (int j = 0; j < db; ++j) ib.push_back(static_cast<std::uint8_t>(2 - j));
        auto wa = DifferentialForm::monomial(amb, base, ca, ia);
        auto wb = DifferentialForm::monomial(amb, base, cb, ib);
        auto lhs = wedge(wa, wb);
        auto rhs = wedge(wb, wa);
        int sign = ((da * db + pa * pb) % 2) ? -1 : 1;
        if (sign < 0)
            CHECK(lhs == -rhs);
        else
            CHECK(lhs == rhs);
    }
}
