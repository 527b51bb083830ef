#include "smset/jet.hpp"

#include "smset/sampling.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace smset {

// ---------------------------------------------------------------------------
// JetSpace

static std::string jet_name(Sym component, const MultiIndex& index,
                            const std::vector<Sym>& coords) {
    if (index.empty()) return sym_name(component);
    std::ostringstream os;
    os << "D[" << sym_name(component);
    for (std::uint8_t c : index) os << "," << sym_name(coords[c]);
    os << "]";
    return os.str();
}

static void enumerate_multiindices(std::size_t ncoords, int max_order,
                                   std::vector<MultiIndex>& out) {
    out.push_back({});
    std::vector<MultiIndex> frontier{{}};
    for (int n = 1; n <= max_order; ++n) {
        std::vector<MultiIndex> next;
        for (const auto& idx : frontier) {
            std::uint8_t start = idx.empty() ? 0 : idx.back();
            for (std::uint8_t c = start; c < ncoords; ++c) {
                MultiIndex ni = idx;
                ni.push_back(c);
                next.push_back(ni);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
}

JetSpace JetSpace::make(const FieldSpaceDescriptor& descriptor, int order) {
    if (order < 0) fail(Errc::OrderBoundExceeded, "negative jet order");
    JetSpace js;
    js.descriptor = descriptor;
    js.order = order;

    std::vector<MultiIndex> idxs;
    enumerate_multiindices(descriptor.coords.size(), order, idxs);

    std::vector<Sym> evens = descriptor.coords;
    std::vector<Sym> odds;
    for (const auto& f : descriptor.fields) {
        for (const auto& I : idxs) {
            JetCoord jc;
            jc.component = f.name;
            jc.index = I;
            jc.parity = f.parity;
            jc.sym = intern(jet_name(f.name, I, descriptor.coords));
            js.coords.push_back(jc);
            if (f.parity)
                odds.push_back(jc.sym);
            else
                evens.push_back(jc.sym);
        }
    }
    js.ambient = Ambient::make(std::move(evens), std::move(odds));
    return js;
}

Sym JetSpace::jet_sym(Sym component, const MultiIndex& index) const {
    for (const auto& jc : coords)
        if (jc.component == component && jc.index == index) return jc.sym;
    fail(Errc::OrderBoundExceeded,
         "jet coordinate of order " + std::to_string(index.size()) + " for '" +
             sym_name(component) + "' is outside the order-" + std::to_string(order) + " space");
}

const JetSpace::JetCoord* JetSpace::find(Sym generator) const {
    for (const auto& jc : coords)
        if (jc.sym == generator) return &jc;
    return nullptr;
}

bool JetSpace::is_base_coord(Sym s) const {
    return std::find(descriptor.coords.begin(), descriptor.coords.end(), s) !=
           descriptor.coords.end();
}

std::string JetSpace::str() const {
    std::ostringstream os;
    os << "jets(order " << order << " of " << descriptor.str() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Total derivative

static MultiIndex raise_index(const MultiIndex& I, std::uint8_t mu) {
    MultiIndex r = I;
    r.insert(std::upper_bound(r.begin(), r.end(), mu), mu);
    return r;
}

JetExpr total_derivative(const JetSpace& js, const JetExpr& e, Sym mu) {
    auto it = std::find(js.descriptor.coords.begin(), js.descriptor.coords.end(), mu);
    if (it == js.descriptor.coords.end())
        fail(Errc::UnknownGenerator, "'" + sym_name(mu) + "' is not a base coordinate");
    std::uint8_t mu_idx = static_cast<std::uint8_t>(it - js.descriptor.coords.begin());

    JetExpr out = e.partial_derivative(mu);
    for (const auto& jc : js.coords) {
        JetExpr pd = e.partial_derivative(jc.sym);
        if (pd.is_zero()) continue;
        if (static_cast<int>(jc.index.size()) + 1 > js.order)
            fail(Errc::OrderBoundExceeded,
                 "total derivative needs order " + std::to_string(jc.index.size() + 1) +
                     " but the space is truncated at " + std::to_string(js.order));
        Sym up = js.jet_sym(jc.component, raise_index(jc.index, mu_idx));
        out += SuperPolynomial::generator(js.ambient, up) * pd;
    }
    return out;
}

std::pair<JetSpace, JetExpr> total_derivative_raising(const JetSpace& js, const JetExpr& e,
                                                      Sym mu) {
    try {
        return {js, total_derivative(js, e, mu)};
    } catch (const Error& err) {
        if (err.code() != Errc::OrderBoundExceeded) throw;
    }
    JetSpace big = JetSpace::make(js.descriptor, js.order + 1);
    return {big, total_derivative(big, e.transport(big.ambient), mu)};
}

// ---------------------------------------------------------------------------
// LagrangianSpec

static int density_order(const JetSpace& js, const JetExpr& density) {
    int order = 0;
    for (const auto& jc : js.coords)
        if (!density.partial_derivative(jc.sym).is_zero())
            order = std::max(order, static_cast<int>(jc.index.size()));
    return order;
}

LagrangianSpec LagrangianSpec::make(const FieldSpaceDescriptor& descriptor, const JetSpace& space,
                                    const JetExpr& density) {
    LagrangianSpec spec;
    spec.descriptor = descriptor;
    spec.space = space;
    spec.density = density;
    auto p = density.parity();
    if (!density.is_zero() && (!p || *p != 0))
        fail(Errc::NotAHomomorphism, "a Lagrangian density must be even");
    spec.order = density_order(space, density);
    return spec;
}

// ---------------------------------------------------------------------------
// Euler-Lagrange operator

std::string ELDensity::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [comp, e] : components) {
        if (!first) os << "; ";
        os << "EL[" << sym_name(comp) << "] = " << e.str();
        first = false;
    }
    return os.str();
}

ELDensity euler_lagrange(const LagrangianSpec& spec) {
    const int n = spec.order;
    JetSpace big = JetSpace::make(spec.descriptor, 2 * n);
    JetExpr dens = spec.density.transport(big.ambient);

    ELDensity el;
    el.space = big;
    for (const auto& f : spec.descriptor.fields) {
        JetExpr acc(big.ambient);
        for (const auto& jc : big.coords) {
            if (jc.component != f.name || static_cast<int>(jc.index.size()) > n) continue;
            JetExpr term = dens.partial_derivative(jc.sym);
            if (term.is_zero()) continue;
            for (std::uint8_t mu : jc.index)
                term = total_derivative(big, term, spec.descriptor.coords[mu]);
            if (jc.index.size() % 2) term = -term;
            acc += term;
        }
        el.components.emplace(f.name, std::move(acc));
    }
    return el;
}

// ---------------------------------------------------------------------------
// Prolongation and evaluation on plots

std::map<Sym, SuperPolynomial> prolong(const JetSpace& js, const PlotHom& plot) {
    if (!same_descriptor(plot.descriptor, js.descriptor))
        fail(Errc::ProbeMismatch, "plot and jet space have different descriptors");
    std::map<Sym, SuperPolynomial> out;
    for (const auto& jc : js.coords) {
        SuperPolynomial v = plot.components.at(jc.component);
        for (std::uint8_t mu : jc.index)
            v = v.partial_derivative(js.descriptor.coords[mu]);
        out.emplace(jc.sym, std::move(v));
    }
    return out;
}

SuperPolynomial apply_on_plot(const JetSpace& js, const JetExpr& e, const PlotHom& plot) {
    std::map<Sym, SuperPolynomial> images = prolong(js, plot);
    return e.substitute(images, plot.ambient);
}

SuperPolynomial action_on_plot(const LagrangianSpec& spec, const PlotHom& plot, const Box& box) {
    SuperPolynomial dens = apply_on_plot(spec.space, spec.density, plot);
    std::vector<std::uint8_t> top;
    for (std::size_t i = 0; i < spec.descriptor.coords.size(); ++i)
        top.push_back(static_cast<std::uint8_t>(i));
    DifferentialForm form =
        DifferentialForm::monomial(plot.ambient, spec.descriptor.coords, dens, top);
    return integrate_over_box(form, box);
}

// ---------------------------------------------------------------------------
// First variation by symbolic integration by parts

VariationPlot VariationPlot::make(PlotHom base, std::map<Sym, SuperPolynomial> velocity) {
    VariationPlot vp;
    vp.base = std::move(base);
    for (const auto& f : vp.base.descriptor.fields) {
        auto it = velocity.find(f.name);
        if (it == velocity.end())
            fail(Errc::UnknownGenerator,
                 "variation lacks a velocity for component '" + sym_name(f.name) + "'");
        SuperPolynomial v = it->second.transport(vp.base.ambient);
        auto p = v.parity();
        if (!v.is_zero() && (!p || *p != f.parity))
            fail(Errc::NotAHomomorphism,
                 "velocity of '" + sym_name(f.name) + "' violates its parity");
        vp.velocity.emplace(f.name, std::move(v));
    }
    return vp;
}

namespace {

// right derivative: move the generator to the end of each odd monomial
SuperPolynomial right_derivative(const SuperPolynomial& e, Sym gen) {
    const AmbientPtr& amb = e.ambient();
    switch (amb->kind_of(gen)) {
        case Ambient::GenKind::Even:
            return e.partial_derivative(gen);
        case Ambient::GenKind::Odd: {
            int idx = amb->odd_index(gen);
            std::vector<SPTerm> ts;
            for (const auto& t : e.terms()) {
                auto it = std::find(t.gr.begin(), t.gr.end(), static_cast<std::uint16_t>(idx));
                if (it == t.gr.end()) continue;
                std::size_t pos = static_cast<std::size_t>(it - t.gr.begin());
                std::size_t tail = t.gr.size() - 1 - pos;
                SPTerm nt;
                nt.coeff = (tail % 2) ? -t.coeff : t.coeff;
                nt.gr = t.gr;
                nt.gr.erase(nt.gr.begin() + static_cast<long>(pos));
                nt.wl = t.wl;
                ts.push_back(std::move(nt));
            }
            return SuperPolynomial::from_terms(amb, std::move(ts));
        }
        default:
            fail(Errc::UnknownGenerator, "right derivative by a non-generator");
    }
}

struct DeltaSpace {
    FieldSpaceDescriptor extended;     // original fields plus delta partners
    std::map<Sym, Sym> delta_of;       // component -> delta component name
    JetSpace space;                    // order 2n over the extended descriptor
};

DeltaSpace make_delta_space(const FieldSpaceDescriptor& d, int order) {
    DeltaSpace ds;
    std::vector<FieldComponent> fields = d.fields;
    for (const auto& f : d.fields) {
        Sym dn = intern("@d:" + sym_name(f.name));
        fields.push_back({dn, f.parity});
        ds.delta_of.emplace(f.name, dn);
    }
    ds.extended = FieldSpaceDescriptor::make(d.coords, fields, {});
    ds.space = JetSpace::make(ds.extended, order);
    return ds;
}

} // namespace

FirstVariation first_variation(const LagrangianSpec& spec, const VariationPlot& vp,
                               const Box& box) {
    const int n = spec.order;
    DeltaSpace ds =
        make_delta_space(spec.descriptor, std::max(2 * std::max(n, 1), spec.space.order));
    const AmbientPtr& amb = ds.space.ambient;

    // delta L = coefficient of s in density(u + s * delta u)
    std::vector<Sym> evens = amb->evens;
    AmbientPtr with_s =
        Ambient::make(evens, amb->odds, {intern("@s")}, 1);
    std::map<Sym, SuperPolynomial> shift;
    for (const auto& jc : spec.space.coords) {
        Sym here = ds.space.jet_sym(jc.component, jc.index);
        Sym delta = ds.space.jet_sym(ds.delta_of.at(jc.component), jc.index);
        SuperPolynomial val = SuperPolynomial::generator(with_s, here) +
                              SuperPolynomial::generator(with_s, intern("@s")) *
                                  SuperPolynomial::generator(with_s, delta);
        shift.emplace(jc.sym, std::move(val));
    }
    SuperPolynomial shifted = spec.density.substitute(shift, with_s);
    // extract the s-coefficient
    SuperPolynomial deltaL = shifted.partial_derivative(intern("@s")).transport(amb);

    // integrate by parts until every delta coordinate has order zero
    std::map<Sym, JetExpr> boundary_currents; // per base coordinate
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& jc : ds.space.coords) {
            const JetSpace::JetCoord* info = &jc;
            bool is_delta = false;
            for (const auto& [orig, dn] : ds.delta_of)
                if (info->component == dn) is_delta = true;
            if (!is_delta || info->index.empty()) continue;
            JetExpr coeff = right_derivative(deltaL, info->sym);
            if (coeff.is_zero()) continue;
            // E * du_I = D_mu(E * du_{I-mu}) - D_mu(E) * du_{I-mu}
            std::uint8_t mu = info->index.back();
            MultiIndex lower = info->index;
            lower.pop_back();
            Sym low_sym = ds.space.jet_sym(info->component, lower);
            Sym mu_coord = spec.descriptor.coords[mu];
            SuperPolynomial low = SuperPolynomial::generator(amb, low_sym);
            JetExpr current = coeff * low;
            auto itb = boundary_currents.find(mu_coord);
            if (itb == boundary_currents.end())
                boundary_currents.emplace(mu_coord, current);
            else
                itb->second += current;
            deltaL += -(coeff * SuperPolynomial::generator(amb, info->sym)) -
                      total_derivative(ds.space, coeff, mu_coord) * low;
            changed = true;
            break;
        }
    }

    // substitute the plot and velocities
    PlotHom ext_base = [&] {
        std::map<Sym, SuperPolynomial> comps = vp.base.components;
        AmbientPtr pamb = vp.base.ambient;
        for (const auto& [orig, dn] : ds.delta_of) comps.emplace(dn, vp.velocity.at(orig));
        return PlotHom::make(vp.base.probe, ds.extended, comps);
    }();

    FirstVariation out;
    {
        SuperPolynomial interior = apply_on_plot(ds.space, deltaL, ext_base);
        std::vector<std::uint8_t> top;
        for (std::size_t i = 0; i < spec.descriptor.coords.size(); ++i)
            top.push_back(static_cast<std::uint8_t>(i));
        DifferentialForm form =
            DifferentialForm::monomial(ext_base.ambient, spec.descriptor.coords, interior, top);
        out.value = integrate_over_box(form, box);

        // boundary term as the integral of the divergence of the currents
        JetExpr divergence(amb);
        for (const auto& [mu_coord, current] : boundary_currents)
            divergence += total_derivative(ds.space, current, mu_coord);
        SuperPolynomial bnd = apply_on_plot(ds.space, divergence, ext_base);
        DifferentialForm bform =
            DifferentialForm::monomial(ext_base.ambient, spec.descriptor.coords, bnd, top);
        out.boundary = integrate_over_box(bform, box);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criticality

CriticalityResult is_critical_plot(const LagrangianSpec& spec, const PlotHom& plot) {
    ELDensity el = euler_lagrange(spec);
    CriticalityResult res;
    res.critical = true;
    for (const auto& [comp, e] : el.components) {
        SuperPolynomial v = apply_on_plot(el.space, e, plot);
        if (!v.is_zero()) res.critical = false;
        res.residual.emplace(comp, std::move(v));
    }
    return res;
}

// ---------------------------------------------------------------------------
// Discretization oracle

LagrangianSpec random_lagrangian_1d(Rng& rng) {
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    JetSpace js = JetSpace::make(d, 1);
    Sym ut = js.jet_sym(u, {0});
    // polynomial in (t, u, u_t), degree <= 3, small rational coefficients
    ScalarExpr dens = random_polynomial(rng, {t, u, ut}, 3, 4);
    return LagrangianSpec::make(d, js, SuperPolynomial::scalar(js.ambient, dens));
}

ElOracleReport run_el_oracle(const ElOracleOptions& options) {
    ElOracleReport rep;
    rep.options = options;
    Sym t = intern("t"), u = intern("u");
    auto d = FieldSpaceDescriptor::make({t}, {{u, 0}});
    ProbeSpace point = ProbeSpace::make(0, 0);

    const double h = options.grid_h;
    const double step = options.step;
    const long N = static_cast<long>(1.0 / h + 0.5);

    for (std::size_t s = 0; s < options.samples; ++s) {
        Rng rng = sample_rng(options.seed, s);
        LagrangianSpec spec = random_lagrangian_1d(rng);
        ScalarExpr phi = random_polynomial(rng, {t}, 3, 3);
        PlotHom plot = PlotHom::make(
            point, d, {{u, SuperPolynomial::scalar(plot_ambient(point, d), phi)}});

        // symbolic EL density evaluated along the plot
        ELDensity el = euler_lagrange(spec);
        SuperPolynomial el_on_plot = apply_on_plot(el.space, el.components.at(u), plot);
        ScalarExpr el_scalar = el_on_plot.scalar_part();

        // numeric field samples
        std::vector<double> nodes(static_cast<std::size_t>(N) + 1);
        auto phi_at = [&](double x) {
            return phi.eval_double([&](Sym v) {
                (void)v;
                return x;
            });
        };
        for (long i = 0; i <= N; ++i) nodes[static_cast<std::size_t>(i)] = phi_at(i * h);

        Sym ut = spec.space.jet_sym(u, {0});
        auto discrete_action = [&](const std::vector<double>& vals) {
            double acc = 0;
            for (long i = 0; i < N; ++i) {
                double x = i * h;
                double uu = vals[static_cast<std::size_t>(i)];
                double du = (vals[static_cast<std::size_t>(i) + 1] -
                             vals[static_cast<std::size_t>(i)]) /
                            h;
                double L = spec.density.scalar_part().eval_double([&](Sym v) -> double {
                    if (v == t) return x;
                    if (v == u) return uu;
                    if (v == ut) return du;
                    return 0;
                });
                acc += L * h;
            }
            return acc;
        };

        ElOracleRow row;
        row.sample = s;
        row.lagrangian = spec.density.str();
        row.plot = phi.str();
        for (long i = 1; i < N; ++i) {
            std::vector<double> up = nodes, dn = nodes;
            up[static_cast<std::size_t>(i)] += step;
            dn[static_cast<std::size_t>(i)] -= step;
            double grad = (discrete_action(up) - discrete_action(dn)) / (2 * step);
            double oracle = grad / h; // density per unit length at node i
            double x = i * h;
            double symbolic = el_scalar.eval_double([&](Sym v) {
                (void)v;
                return x;
            });
            double scale = std::max({std::abs(oracle), std::abs(symbolic), 1.0});
            double dev = std::abs(oracle - symbolic) / scale;
            row.max_deviation = std::max(row.max_deviation, dev);
        }
        row.ok = row.max_deviation <= options.tolerance;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace smset
