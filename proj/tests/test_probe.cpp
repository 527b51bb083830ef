#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smset/probe.hpp"
#include "smset/sampling.hpp"

using namespace smset;

namespace {

FieldSpaceDescriptor boson() {
    return FieldSpaceDescriptor::make({intern("t")}, {{intern("u"), 0}});
}

FieldSpaceDescriptor fermion() {
    return FieldSpaceDescriptor::make({intern("t")}, {{intern("psi"), 1}});
}

FieldSpaceDescriptor mixed() {
    return FieldSpaceDescriptor::make({intern("t")}, {{intern("u"), 0}, {intern("psi"), 1}});
}

} // namespace

TEST_CASE("pullback along the identity is the identity") {
    Rng rng(5);
    auto d = mixed();
    for (int i = 0; i < 10; ++i) {
        ProbeSpace probe = random_probe(rng, 2, 2, 1, 1, "s");
        PlotHom plot = random_plot(rng, d, probe);
        CHECK(pullback_plot(plot, ProbeMap::identity(probe)) == plot);
    }
}

TEST_CASE("pullback of an odd plot along theta1 -> theta, theta2 -> 0") {
    auto d = fermion();
    ProbeSpace two = ProbeSpace::with_names({}, {intern("theta1"), intern("theta2")});
    ProbeSpace one = ProbeSpace::with_names({}, {intern("theta")});

    AmbientPtr amb2 = plot_ambient(two, d);
    Sym t = intern("t");
    ScalarExpr f1 = ScalarExpr::func(intern("f1"), {t});
    ScalarExpr f2 = ScalarExpr::func(intern("f2"), {t});
    SuperPolynomial psi = SuperPolynomial::generator(amb2, intern("theta1")).scalar_multiple(f1) +
                          SuperPolynomial::generator(amb2, intern("theta2")).scalar_multiple(f2);
    PlotHom plot = PlotHom::make(two, d, {{intern("psi"), psi}});

    std::map<Sym, SuperPolynomial> a;
    a.emplace(intern("theta1"), SuperPolynomial::generator(one.ambient, intern("theta")));
    a.emplace(intern("theta2"), SuperPolynomial::zero(one.ambient));
    ProbeMap f = ProbeMap::make(one, two, a);

    PlotHom pulled = pullback_plot(plot, f);
    CHECK(pulled.components.at(intern("psi")).str() == "f1*theta");

    // cross-check against a direct substitution over the plot ambient
    AmbientPtr amb1 = plot_ambient(one, d);
    std::map<Sym, SuperPolynomial> degree_images;
    degree_images.emplace(intern("theta1"), SuperPolynomial::generator(amb1, intern("theta")));
    degree_images.emplace(intern("theta2"), SuperPolynomial::zero(amb1));
    CHECK(pulled.components.at(intern("psi")) == psi.substitute(degree_images, amb1));
}

TEST_CASE("pullback functoriality on sampled chains") {
    Rng rng(17);
    auto d = mixed();
    for (int i = 0; i < 10; ++i) {
        ProbeSpace outer = random_probe(rng, 2, 2, 1, 1, "a");
        ProbeSpace midp = random_probe(rng, 2, 2, 1, 1, "b");
        ProbeSpace inner = random_probe(rng, 2, 2, 1, 1, "c");
        PlotHom plot = random_plot(rng, d, outer);
        ProbeMap f = random_probe_map(rng, midp, outer);
        ProbeMap g = random_probe_map(rng, inner, midp);
        CHECK(pullback_plot(pullback_plot(plot, f), g) == pullback_plot(plot, compose(f, g)));
    }
}

TEST_CASE("pullback preserves component parity") {
    Rng rng(23);
    auto d = mixed();
    for (int i = 0; i < 10; ++i) {
        ProbeSpace outer = random_probe(rng, 1, 2, 1, 1, "a");
        ProbeSpace inner = random_probe(rng, 1, 2, 1, 1, "b");
        PlotHom plot = random_plot(rng, d, outer);
        ProbeMap f = random_probe_map(rng, inner, outer);
        PlotHom pulled = pullback_plot(plot, f);
        for (const auto& fc : d.fields) {
            const auto& v = pulled.components.at(fc.name);
            auto par = v.parity();
            CHECK((v.is_zero() || (par && *par == fc.parity)));
        }
    }
}

TEST_CASE("check_functoriality passes and reports injected faults") {
    auto rep = check_functoriality(mixed(), 100, 42);
    CHECK(rep.samples == 100);
    CHECK(rep.ok());

    auto rep0 = check_functoriality(mixed(), 0, 42);
    CHECK(rep0.samples == 0);
    CHECK(rep0.ok());

    // corrupted pullback: scales one even component, breaking the identity law
    auto corrupted = [](const PlotHom& p, const ProbeMap& f) {
        PlotHom q = pullback_plot(p, f);
        auto it = q.components.find(intern("u"));
        if (it != q.components.end() && !it->second.is_zero())
            it->second = it->second.scaled(Rational(2));
        return q;
    };
    auto bad = check_functoriality_with(mixed(), 50, 42, corrupted);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.failures.empty());
    CHECK(bad.failures.front().law != "");
}

TEST_CASE("gluing: identical restrictions glue to the global plot") {
    auto d = boson();
    ProbeSpace probe = ProbeSpace::with_names({intern("a")}, {});
    AmbientPtr amb = plot_ambient(probe, d);
    ScalarExpr a = ScalarExpr::variable(intern("a"));
    ScalarExpr t = ScalarExpr::variable(intern("t"));
    PlotHom plot = PlotHom::make(
        probe, d, {{intern("u"), SuperPolynomial::scalar(amb, a * a + t.scaled(rat(3)))}});

    Box ref = Box::make({rat(0)}, {rat(2)});
    Box b1 = Box::make({rat(-1)}, {rat(3, 2)});
    Box b2 = Box::make({rat(1)}, {rat(5, 2)});
    PlotHom glued = glue_plots({restrict_plot(plot, b1), restrict_plot(plot, b2)}, ref);
    CHECK(glued == plot);

    // single box covering itself
    CHECK(glue_plots({restrict_plot(plot, ref)}, ref) == plot);
}

TEST_CASE("gluing: overlap disagreement is an obstruction naming the pair") {
    auto d = boson();
    ProbeSpace probe = ProbeSpace::with_names({intern("a")}, {});
    AmbientPtr amb = plot_ambient(probe, d);
    ScalarExpr a = ScalarExpr::variable(intern("a"));
    PlotHom p1 = PlotHom::make(probe, d, {{intern("u"), SuperPolynomial::scalar(amb, a)}});
    PlotHom p2 = PlotHom::make(probe, d, {{intern("u"), SuperPolynomial::scalar(amb, a + ScalarExpr::one())}});

    Box ref = Box::make({rat(0)}, {rat(2)});
    Box b1 = Box::make({rat(-1)}, {rat(3, 2)});
    Box b2 = Box::make({rat(1)}, {rat(5, 2)});
    try {
        glue_plots({restrict_plot(p1, b1), restrict_plot(p2, b2)}, ref);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::GluingObstruction);
        CHECK(std::string(e.what()).find("0") != std::string::npos);
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}

TEST_CASE("gluing: non-covering boxes raise a coverage error") {
    auto d = boson();
    ProbeSpace probe = ProbeSpace::with_names({intern("a")}, {});
    AmbientPtr amb = plot_ambient(probe, d);
    ScalarExpr a = ScalarExpr::variable(intern("a"));
    PlotHom plot = PlotHom::make(probe, d, {{intern("u"), SuperPolynomial::scalar(amb, a)}});

    Box ref = Box::make({rat(0)}, {rat(2)});
    // meeting exactly at the interior point 1, which stays uncovered
    Box b1 = Box::make({rat(-1)}, {rat(1)});
    Box b2 = Box::make({rat(1)}, {rat(5, 2)});
    try {
        glue_plots({restrict_plot(plot, b1), restrict_plot(plot, b2)}, ref);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CoverageError);
    }
}

TEST_CASE("gluing: restrict-then-glue and glue-then-restrict round trips") {
    Rng rng(77);
    auto d = boson();
    ProbeSpace probe = ProbeSpace::with_names({intern("a")}, {});
    AmbientPtr amb = plot_ambient(probe, d);
    for (int i = 0; i < 20; ++i) {
        ScalarExpr poly = random_polynomial(rng, amb->evens, 3, 3);
        PlotHom plot = PlotHom::make(probe, d, {{intern("u"), SuperPolynomial::scalar(amb, poly)}});
        Rational mid = rat(rng.int_in(1, 3), 2);
        Box ref = Box::make({rat(0)}, {rat(2)});
        Box b1 = Box::make({rat(-1, 2)}, {mid + rat(1, 4)});
        Box b2 = Box::make({mid - rat(1, 4)}, {rat(5, 2)});
        PlotHom glued = glue_plots({restrict_plot(plot, b1), restrict_plot(plot, b2)}, ref);
        CHECK(glued == plot);
        CHECK(restrict_plot(glued, b1).plot == plot);
    }
}

TEST_CASE("yoneda round trips") {
    Rng rng(101);
    auto d = mixed();
    for (int i = 0; i < 10; ++i) {
        ProbeSpace probe = random_probe(rng, 2, 2, 1, 1, "y");
        PlotHom plot = random_plot(rng, d, probe);
        CHECK(yoneda_roundtrip(plot) == plot);
    }
    // zero plot
    ProbeSpace probe = ProbeSpace::make(1, 1);
    CHECK(yoneda_roundtrip(PlotHom::zero(probe, d)) == PlotHom::zero(probe, d));

    // representable case: both readings of a probe map agree
    ProbeSpace s = ProbeSpace::make(1, 1, 0, 0, "s");
    ProbeSpace t2 = ProbeSpace::make(1, 1, 0, 0, "t");
    ProbeMap f = random_probe_map(rng, s, t2);
    ProbeMap rt = yoneda_roundtrip_representable(f);
    CHECK(rt.source.same_shape(f.source));
    CHECK(rt.target.same_shape(f.target));
    for (const auto& [g, img] : f.assignment) CHECK(rt.assignment.at(g) == img);
}

TEST_CASE("purely bosonic plots reduce to the reduced-probe plots") {
    Rng rng(131);
    auto d = boson();
    ProbeSpace probe = ProbeSpace::make(0, 2); // two odd directions, no even ones
    ProbeMap incl = ProbeMap::reduced_inclusion(probe);
    for (int i = 0; i < 20; ++i) {
        PlotHom plot = random_plot(rng, d, probe);
        PlotHom red = pullback_plot(plot, incl);
        // the reduced component is the theta-degree-0 part of the original
        const auto& v = plot.components.at(intern("u"));
        ScalarExpr expected = v.coefficient({}, {});
        CHECK(red.components.at(intern("u")) ==
              SuperPolynomial::scalar(red.ambient, expected));
        // and every reduced plot extends trivially back
        PlotHom lifted = PlotHom::make(
            probe, d, {{intern("u"), red.components.at(intern("u")).transport(plot.ambient)}});
        CHECK(pullback_plot(lifted, incl) == red);
    }
}

TEST_CASE("constrained descriptors verify their constraints") {
    Sym x = intern("x"), y = intern("y");
    ScalarExpr cx = ScalarExpr::variable(x), cy = ScalarExpr::variable(y);
    auto circle = FieldSpaceDescriptor::make(
        {intern("t")}, {{x, 0}, {y, 0}}, {cx * cx + cy * cy - ScalarExpr::one()});
    ProbeSpace pt = ProbeSpace::make(0, 0);
    AmbientPtr amb = plot_ambient(pt, circle);
    // (1, 0) lies on the circle
    PlotHom ok = PlotHom::make(pt, circle,
                               {{x, SuperPolynomial::constant(amb, 1)},
                                {y, SuperPolynomial::zero(amb)}});
    CHECK(ok.components.at(x).str() == "1");
    // (1, 1) does not
    try {
        PlotHom::make(pt, circle,
                      {{x, SuperPolynomial::constant(amb, 1)},
                       {y, SuperPolynomial::constant(amb, 1)}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConstraintViolated);
    }
}
