#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smset/jet.hpp"
#include "smset/sampling.hpp"

using namespace smset;

namespace {

struct Theory {
    FieldSpaceDescriptor d;
    JetSpace js;
    LagrangianSpec spec;
};

Theory harmonic() {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    ScalarExpr dens = ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2)) -
                      ScalarExpr::variable(u).pow(2).scaled(rat(1, 2));
    return {d, js, LagrangianSpec::make(d, js, SuperPolynomial::scalar(js.ambient, dens))};
}

Theory fermion_particle() {
    Sym t = intern("t"), psi = intern("psi");
    auto d = FieldSpaceDescriptor::make({t}, {{psi, 1}});
    JetSpace js = JetSpace::make(d, 1);
    Sym psit = js.jet_sym(psi, {0});
    JetExpr dens = SuperPolynomial::generator(js.ambient, psi) *
                   SuperPolynomial::generator(js.ambient, psit);
    return {d, js, LagrangianSpec::make(d, js, dens)};
}

} // namespace

TEST_CASE("prolongation of plots") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 2);
    ProbeSpace point = ProbeSpace::make(0, 0);
    AmbientPtr amb = plot_ambient(point, d);
    ScalarExpr tt = ScalarExpr::variable(t);
    PlotHom plot = PlotHom::make(point, d, {{u, SuperPolynomial::scalar(amb, tt * tt)}});

    auto pr = prolong(js, plot);
    CHECK(pr.at(js.jet_sym(u, {})).str() == "t^2");
    CHECK(pr.at(js.jet_sym(u, {0})).str() == "2*t");
    CHECK(pr.at(js.jet_sym(u, {0, 0})).str() == "2");

    // constant plot: all positive-order coordinates vanish
    PlotHom cst = PlotHom::make(point, d, {{u, SuperPolynomial::constant(amb, 5)}});
    auto prc = prolong(js, cst);
    CHECK(prc.at(js.jet_sym(u, {0})).is_zero());
    CHECK(prc.at(js.jet_sym(u, {0, 0})).is_zero());
}

TEST_CASE("prolongation of an odd plot and order compatibility") {
    Sym t = intern("t"), psi = intern("psi");
    auto d = FieldSpaceDescriptor::make({t}, {{psi, 1}});
    ProbeSpace two = ProbeSpace::with_names({}, {intern("theta1"), intern("theta2")});
    AmbientPtr amb = plot_ambient(two, d);
    ScalarExpr f1 = ScalarExpr::func(intern("f1"), {t});
    ScalarExpr f2 = ScalarExpr::func(intern("f2"), {t});
    SuperPolynomial v = SuperPolynomial::generator(amb, intern("theta1")).scalar_multiple(f1) +
                        SuperPolynomial::generator(amb, intern("theta2")).scalar_multiple(f2);
    PlotHom plot = PlotHom::make(two, d, {{psi, v}});

    JetSpace js1 = JetSpace::make(d, 1);
    auto pr = prolong(js1, plot);
    CHECK(pr.at(js1.jet_sym(psi, {})) == v);
    CHECK(pr.at(js1.jet_sym(psi, {0})).str() == "D[f1,t]*theta1 + D[f2,t]*theta2");

    // dropping order agrees with prolonging at the smaller order
    JetSpace js2 = JetSpace::make(d, 2);
    auto pr2 = prolong(js2, plot);
    for (const auto& jc : js1.coords) CHECK(pr2.at(jc.sym) == pr.at(jc.sym));
}

TEST_CASE("total derivative basics") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 2);
    Sym ut = js.jet_sym(u, {0});
    Sym utt = js.jet_sym(u, {0, 0});

    JetExpr uu = SuperPolynomial::generator(js.ambient, u);
    CHECK(total_derivative(js, uu, t) == SuperPolynomial::generator(js.ambient, ut));

    JetExpr kin = SuperPolynomial::scalar(js.ambient,
                                          ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2)));
    CHECK(total_derivative(js, kin, t) ==
          SuperPolynomial::scalar(js.ambient,
                                  ScalarExpr::variable(ut) * ScalarExpr::variable(utt)));

    // order overflow and the raising variant
    JetExpr top = SuperPolynomial::scalar(js.ambient, ScalarExpr::variable(utt));
    bool threw = false;
    try {
        total_derivative(js, top, t);
    } catch (const Error& e) {
        threw = e.code() == Errc::OrderBoundExceeded;
    }
    CHECK(threw);
    auto [big, val] = total_derivative_raising(js, top, t);
    CHECK(big.order == 3);
    CHECK(val == SuperPolynomial::generator(big.ambient, big.jet_sym(u, {0, 0, 0})));
}

TEST_CASE("graded chain rule: D_t(psi psi_t) = psi psi_tt") {
    Sym t = intern("t"), psi = intern("psi");
    auto d = FieldSpaceDescriptor::make({t}, {{psi, 1}});
    JetSpace js = JetSpace::make(d, 2);
    JetExpr e = SuperPolynomial::generator(js.ambient, psi) *
                SuperPolynomial::generator(js.ambient, js.jet_sym(psi, {0}));
    JetExpr expect = SuperPolynomial::generator(js.ambient, psi) *
                     SuperPolynomial::generator(js.ambient, js.jet_sym(psi, {0, 0}));
    CHECK(total_derivative(js, e, t) == expect);
}

TEST_CASE("euler-lagrange: harmonic oscillator") {
    auto H = harmonic();
    ELDensity el = euler_lagrange(H.spec);
    CHECK(el.components.at(intern("u")).str() == "-D[u,t,t] - u");
}

TEST_CASE("euler-lagrange: free fermionic particle") {
    auto F = fermion_particle();
    ELDensity el = euler_lagrange(F.spec);
    CHECK(el.components.at(intern("psi")).str() == "2*D[psi,t]");
}

TEST_CASE("euler-lagrange annihilates total derivatives") {
    Sym t = intern("t"), u = intern("u"), psi = intern("psi");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}, {psi, 1}});
    Rng rng(1312);
    for (int i = 0; i < 40; ++i) {
        JetSpace js = JetSpace::make(d, 2);
        JetExpr F = random_superpoly(rng, js.ambient, 0, 2, 3);
        auto [big, dF] = total_derivative_raising(js, F, t);
        LagrangianSpec spec = LagrangianSpec::make(d, big, dF);
        ELDensity el = euler_lagrange(spec);
        for (const auto& [comp, e] : el.components) {
            (void)comp;
            CHECK(e.is_zero());
        }
    }
}

TEST_CASE("action of the free Lagrangian on a linear plot") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    LagrangianSpec spec = LagrangianSpec::make(
        d, js,
        SuperPolynomial::scalar(js.ambient, ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2))));

    ProbeSpace point = ProbeSpace::make(0, 0);
    AmbientPtr amb = plot_ambient(point, d);
    PlotHom plot =
        PlotHom::make(point, d, {{u, SuperPolynomial::scalar(amb, ScalarExpr::variable(t))}});
    Box unit = Box::make({rat(0)}, {rat(1)});
    CHECK(action_on_plot(spec, plot, unit).str() == "1/2");

    // zero plot gives zero action for this homogeneous density
    CHECK(action_on_plot(spec, PlotHom::zero(point, d), unit).is_zero());
}

TEST_CASE("fermionic action equals the forms-module integral") {
    auto F = fermion_particle();
    Sym t = intern("t"), psi = intern("psi");
    ProbeSpace two = ProbeSpace::with_names({}, {intern("theta1"), intern("theta2")});
    AmbientPtr amb = plot_ambient(two, F.d);
    ScalarExpr tt = ScalarExpr::variable(t);
    SuperPolynomial v = SuperPolynomial::generator(amb, intern("theta1")).scalar_multiple(tt) +
                        SuperPolynomial::generator(amb, intern("theta2")).scalar_multiple(tt * tt);
    PlotHom plot = PlotHom::make(two, F.d, {{psi, v}});
    Box unit = Box::make({rat(0)}, {rat(1)});
    CHECK(action_on_plot(F.spec, plot, unit).str() == "1/3*theta1*theta2");
}

TEST_CASE("criticality") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    LagrangianSpec free = LagrangianSpec::make(
        d, js,
        SuperPolynomial::scalar(js.ambient, ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2))));

    // straight lines with probe-parameter coefficients extremize the free action
    ProbeSpace params = ProbeSpace::with_names({intern("a"), intern("b")}, {});
    AmbientPtr amb = plot_ambient(params, d);
    SuperPolynomial line = SuperPolynomial::scalar(
        amb, ScalarExpr::variable(intern("a")) +
                 ScalarExpr::variable(intern("b")) * ScalarExpr::variable(t));
    CHECK(is_critical_plot(free, PlotHom::make(params, d, {{u, line}})).critical);

    // u = t^2 has residual -2
    ProbeSpace point = ProbeSpace::make(0, 0);
    AmbientPtr amb0 = plot_ambient(point, d);
    ScalarExpr tt = ScalarExpr::variable(t);
    auto res = is_critical_plot(
        free, PlotHom::make(point, d, {{u, SuperPolynomial::scalar(amb0, tt * tt)}}));
    CHECK_FALSE(res.critical);
    CHECK(res.residual.at(u).str() == "-2");

    // constant fermionic plot is critical
    auto F = fermion_particle();
    ProbeSpace one = ProbeSpace::with_names({}, {intern("theta1")});
    AmbientPtr amb1 = plot_ambient(one, F.d);
    PlotHom cpsi =
        PlotHom::make(one, F.d,
                      {{intern("psi"), SuperPolynomial::generator(amb1, intern("theta1"))
                                           .scalar_multiple(ScalarExpr::constant(rat(3)))}});
    CHECK(is_critical_plot(F.spec, cpsi).critical);
}

TEST_CASE("criticality is stable under pullback") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    LagrangianSpec free = LagrangianSpec::make(
        d, js,
        SuperPolynomial::scalar(js.ambient, ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2))));

    ProbeSpace params = ProbeSpace::with_names({intern("a"), intern("b")}, {});
    AmbientPtr amb = plot_ambient(params, d);
    SuperPolynomial line = SuperPolynomial::scalar(
        amb, ScalarExpr::variable(intern("a")) +
                 ScalarExpr::variable(intern("b")) * ScalarExpr::variable(t));
    PlotHom crit = PlotHom::make(params, d, {{u, line}});

    Rng rng(99);
    for (int i = 0; i < 10; ++i) {
        ProbeSpace src = random_probe(rng, 2, 2, 1, 1, "w");
        ProbeMap f = random_probe_map(rng, src, params);
        CHECK(is_critical_plot(free, pullback_plot(crit, f)).critical);
    }
}

TEST_CASE("first variation: on-shell plots annihilate compact variations") {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    LagrangianSpec free = LagrangianSpec::make(
        d, js,
        SuperPolynomial::scalar(js.ambient, ScalarExpr::variable(ut).pow(2).scaled(rat(1, 2))));

    ProbeSpace point = ProbeSpace::make(0, 0);
    AmbientPtr amb = plot_ambient(point, d);
    ScalarExpr tt = ScalarExpr::variable(t);
    SuperPolynomial del = SuperPolynomial::scalar(amb, tt * (ScalarExpr::one() - tt));
    PlotHom onshell = PlotHom::make(point, d, {{u, SuperPolynomial::scalar(amb, tt)}});

    auto var = first_variation(free, VariationPlot::make(onshell, {{u, del}}),
                               Box::make({rat(0)}, {rat(1)}));
    CHECK(var.value.is_zero());

    auto var0 =
        first_variation(free, VariationPlot::make(onshell, {{u, SuperPolynomial::zero(amb)}}),
                        Box::make({rat(0)}, {rat(1)}));
    CHECK(var0.value.is_zero());
    CHECK(var0.boundary.is_zero());
}

TEST_CASE("first variation equals the derivative of the action along the path") {
    Sym t = intern("t"), u = intern("u"), psi = intern("psi");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}, {psi, 1}});
    Rng rng(246);
    Box unit = Box::make({rat(0)}, {rat(1)});
    ProbeSpace probe =
        ProbeSpace::with_names({intern("a")}, {intern("theta1"), intern("theta2")});
    AmbientPtr amb = plot_ambient(probe, d);

    for (int i = 0; i < 12; ++i) {
        JetSpace js = JetSpace::make(d, 1);
        JetExpr dens = random_superpoly(rng, js.ambient, 0, 2, 3);
        LagrangianSpec spec = LagrangianSpec::make(d, js, dens);

        PlotHom base = random_plot(rng, d, probe, 2);
        std::map<Sym, SuperPolynomial> vel;
        vel.emplace(u, random_superpoly(rng, amb, 0, 2, 2));
        vel.emplace(psi, random_superpoly(rng, amb, 1, 2, 2));
        VariationPlot vp = VariationPlot::make(base, vel);

        auto var = first_variation(spec, vp, unit);

        // path u + s delta over an ambient extended by a square-zero even s
        std::vector<Sym> evens = amb->evens;
        AmbientPtr ambs = Ambient::make(evens, amb->odds, {intern("s")}, 1);
        std::map<Sym, SuperPolynomial> comps;
        for (const auto& f : d.fields) {
            SuperPolynomial moved = base.components.at(f.name).transport(ambs) +
                                    SuperPolynomial::generator(ambs, intern("s")) *
                                        vp.velocity.at(f.name).transport(ambs);
            comps.emplace(f.name, moved);
        }
        ProbeSpace probes =
            ProbeSpace::with_names(probe.ambient->evens, probe.ambient->odds, {intern("s")}, 1);
        PlotHom path = PlotHom::make(probes, d, comps);
        SuperPolynomial action = action_on_plot(spec, path, unit);
        SuperPolynomial dds = action.partial_derivative(intern("s"));
        SuperPolynomial total = (var.value + var.boundary).transport(dds.ambient());
        CHECK(dds == total);
    }
}

TEST_CASE("finite-difference oracle matches the symbolic EL density") {
    ElOracleOptions opt;
    opt.samples = 6;
    opt.seed = 11;
    auto rep = run_el_oracle(opt);
    CHECK(rep.ok());
    CHECK(rep.rows.size() == 6);
    CHECK(rep.worst() <= opt.tolerance);
}
