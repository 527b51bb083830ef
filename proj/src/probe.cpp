#include "smset/probe.hpp"

#include "smset/parallel.hpp"
#include "smset/sampling.hpp"

#include <algorithm>
#include <sstream>

namespace smset {

// ---------------------------------------------------------------------------
// ProbeSpace

ProbeSpace ProbeSpace::make(std::uint32_t k, std::uint32_t q, std::uint32_t m, std::uint32_t r,
                            const std::string& prefix) {
    std::vector<Sym> evens, odds, weils;
    auto name = [&](const char* base, std::uint32_t i) {
        std::ostringstream os;
        if (!prefix.empty()) os << prefix << "_";
        os << base << (i + 1);
        return intern(os.str());
    };
    for (std::uint32_t i = 0; i < k; ++i) evens.push_back(name("p", i));
    for (std::uint32_t i = 0; i < q; ++i) odds.push_back(name("theta", i));
    for (std::uint32_t i = 0; i < m; ++i) weils.push_back(name("eps", i));
    return with_names(std::move(evens), std::move(odds), std::move(weils), m ? r : 0);
}

ProbeSpace ProbeSpace::with_names(std::vector<Sym> evens, std::vector<Sym> odds,
                                  std::vector<Sym> weils, std::uint32_t r) {
    ProbeSpace p;
    p.k = static_cast<std::uint32_t>(evens.size());
    p.q = static_cast<std::uint32_t>(odds.size());
    p.m = static_cast<std::uint32_t>(weils.size());
    p.r = p.m ? r : 0;
    p.ambient = Ambient::make(std::move(evens), std::move(odds), std::move(weils), p.r);
    return p;
}

ProbeSpace ProbeSpace::reduced() const {
    return with_names(ambient->evens, {}, {}, 0);
}

std::string ProbeSpace::str() const {
    std::ostringstream os;
    os << "R(" << k << "|" << q << ")";
    if (m) os << " x D(" << m << "," << r << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// ProbeMap

ProbeMap ProbeMap::make(const ProbeSpace& source, const ProbeSpace& target,
                        const std::map<Sym, SuperPolynomial>& assignment) {
    ProbeMap f;
    f.source = source;
    f.target = target;
    f.assignment = complete_homomorphism(target.ambient, assignment, source.ambient);
    return f;
}

ProbeMap ProbeMap::identity(const ProbeSpace& p) { return make(p, p, {}); }

ProbeMap ProbeMap::reduced_inclusion(const ProbeSpace& p) {
    ProbeSpace red = p.reduced();
    std::map<Sym, SuperPolynomial> a;
    for (Sym g : p.ambient->odds) a.emplace(g, SuperPolynomial::zero(red.ambient));
    for (Sym g : p.ambient->weils) a.emplace(g, SuperPolynomial::zero(red.ambient));
    return make(red, p, a);
}

ProbeMap compose(const ProbeMap& f, const ProbeMap& g) {
    if (!f.source.same_shape(g.target))
        fail(Errc::ProbeMismatch, "compose: inner probe shapes differ (" + f.source.str() +
                                      " vs " + g.target.str() + ")");
    std::map<Sym, SuperPolynomial> a;
    for (const auto& [gen, img] : f.assignment)
        a.emplace(gen, img.substitute(g.assignment, g.source.ambient));
    return ProbeMap::make(g.source, f.target, a);
}

// ---------------------------------------------------------------------------
// FieldSpaceDescriptor

FieldSpaceDescriptor FieldSpaceDescriptor::make(std::vector<Sym> coords,
                                                std::vector<FieldComponent> fields,
                                                std::vector<ScalarExpr> constraints) {
    FieldSpaceDescriptor d;
    d.coords = std::move(coords);
    d.fields = std::move(fields);
    d.constraints = std::move(constraints);

    std::vector<Sym> names;
    for (const auto& f : d.fields) names.push_back(f.name);
    std::vector<Sym> all = names;
    all.insert(all.end(), d.coords.begin(), d.coords.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        fail(Errc::IncompatibleAmbient, "field component and coordinate names must be unique");

    for (const auto& c : d.constraints) {
        std::set<Sym> vars;
        c.collect_vars(vars);
        for (Sym v : vars)
            if (std::find(names.begin(), names.end(), v) == names.end())
                fail(Errc::ConstraintViolated,
                     "constraint mentions '" + sym_name(v) + "' which is not a field component");
        if (!c.is_polynomial_in(names))
            fail(Errc::Unsupported, "constraints must be polynomial in the field components");
    }
    return d;
}

const FieldComponent* FieldSpaceDescriptor::find(Sym name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f;
    return nullptr;
}

std::string FieldSpaceDescriptor::str() const {
    std::ostringstream os;
    os << "fields(";
    for (std::size_t i = 0; i < fields.size(); ++i)
        os << (i ? ", " : "") << sym_name(fields[i].name) << ":"
           << (fields[i].parity ? "odd" : "even");
    os << ") over (";
    for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << sym_name(coords[i]);
    os << ")";
    return os.str();
}

bool same_descriptor(const FieldSpaceDescriptor& a, const FieldSpaceDescriptor& b) {
    if (a.coords != b.coords || a.fields.size() != b.fields.size() ||
        a.constraints.size() != b.constraints.size())
        return false;
    for (std::size_t i = 0; i < a.fields.size(); ++i)
        if (a.fields[i].name != b.fields[i].name || a.fields[i].parity != b.fields[i].parity)
            return false;
    for (std::size_t i = 0; i < a.constraints.size(); ++i)
        if (a.constraints[i] != b.constraints[i]) return false;
    return true;
}

AmbientPtr plot_ambient(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor) {
    std::vector<Sym> evens = probe.ambient->evens;
    evens.insert(evens.end(), descriptor.coords.begin(), descriptor.coords.end());
    return Ambient::make(std::move(evens), probe.ambient->odds, probe.ambient->weils, probe.r);
}

// ---------------------------------------------------------------------------
// PlotHom

static SuperPolynomial eval_in_components(const ScalarExpr& c,
                                          const std::map<Sym, SuperPolynomial>& comps,
                                          const AmbientPtr& amb) {
    SuperPolynomial out(amb);
    for (const auto& m : c.monomials()) {
        SuperPolynomial term = SuperPolynomial::constant(amb, m.coeff);
        for (const auto& [a, e] : m.powers) {
            if (a.kind == Atom::Kind::Var && comps.count(a.name))
                term *= comps.at(a.name).pow(e);
            else
                term *= SuperPolynomial::scalar(amb, ScalarExpr::from_atom(a, e));
        }
        out += term;
    }
    return out;
}

PlotHom PlotHom::make(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor,
                      std::map<Sym, SuperPolynomial> components) {
    PlotHom p;
    p.probe = probe;
    p.descriptor = descriptor;
    p.ambient = plot_ambient(probe, descriptor);
    for (const auto& f : descriptor.fields) {
        auto it = components.find(f.name);
        if (it == components.end())
            fail(Errc::UnknownGenerator,
                 "plot lacks a value for component '" + sym_name(f.name) + "'");
        SuperPolynomial v = it->second.transport(p.ambient);
        auto par = v.parity();
        if (!v.is_zero() && (!par || *par != f.parity))
            fail(Errc::NotAHomomorphism,
                 "component '" + sym_name(f.name) + "' violates its parity tag");
        p.components.emplace(f.name, std::move(v));
    }
    for (const auto& c : descriptor.constraints) {
        SuperPolynomial v = eval_in_components(c, p.components, p.ambient);
        if (!v.is_zero())
            fail(Errc::ConstraintViolated,
                 "constraint " + c.str() + " = 0 fails; residue " + v.str());
    }
    return p;
}

PlotHom PlotHom::zero(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor) {
    std::map<Sym, SuperPolynomial> comps;
    AmbientPtr amb = plot_ambient(probe, descriptor);
    for (const auto& f : descriptor.fields) comps.emplace(f.name, SuperPolynomial::zero(amb));
    return make(probe, descriptor, std::move(comps));
}

std::string PlotHom::str() const {
    std::ostringstream os;
    os << "plot over " << probe.str() << " {";
    bool first = true;
    for (const auto& [n, v] : components) {
        os << (first ? " " : "; ") << sym_name(n) << " = " << v.str();
        first = false;
    }
    os << " }";
    return os.str();
}

bool operator==(const PlotHom& a, const PlotHom& b) {
    if (!a.probe.same_shape(b.probe) || !same_descriptor(a.descriptor, b.descriptor))
        return false;
    for (const auto& [n, v] : a.components) {
        auto it = b.components.find(n);
        if (it == b.components.end() || !(v == it->second)) return false;
    }
    return true;
}

PlotHom pullback_plot(const PlotHom& plot, const ProbeMap& f) {
    if (!f.target.same_shape(plot.probe))
        fail(Errc::ProbeMismatch, "pullback: map targets " + f.target.str() +
                                      " but the plot is shaped over " + plot.probe.str());
    AmbientPtr amb = plot_ambient(f.source, plot.descriptor);
    std::map<Sym, SuperPolynomial> images;
    for (const auto& [gen, img] : f.assignment) images.emplace(gen, img.transport(amb));
    std::map<Sym, SuperPolynomial> comps;
    for (const auto& [n, v] : plot.components) comps.emplace(n, v.substitute(images, amb));
    return PlotHom::make(f.source, plot.descriptor, std::move(comps));
}

// ---------------------------------------------------------------------------
// Functor laws

FunctorReport check_functoriality(const FieldSpaceDescriptor& descriptor, std::size_t samples,
                                  std::uint64_t seed) {
    return check_functoriality_with(
        descriptor, samples, seed,
        [](const PlotHom& p, const ProbeMap& f) { return pullback_plot(p, f); });
}

FunctorReport check_functoriality_with(const FieldSpaceDescriptor& descriptor,
                                       std::size_t samples, std::uint64_t seed,
                                       const PullbackFn& pullback) {
    struct Row {
        bool id_ok = true;
        bool comp_ok = true;
        std::string detail;
    };
    auto rows = map_samples<Row>(samples, [&](std::size_t i) {
        Rng rng = sample_rng(seed, i);
        ProbeSpace outer = random_probe(rng, 2, 2, 1, 1, "a");
        ProbeSpace mid = random_probe(rng, 2, 2, 1, 1, "b");
        ProbeSpace inner = random_probe(rng, 2, 2, 1, 1, "c");
        PlotHom plot = random_plot(rng, descriptor, outer);
        ProbeMap f = random_probe_map(rng, mid, outer);
        ProbeMap g = random_probe_map(rng, inner, mid);

        Row row;
        PlotHom via_id = pullback(plot, ProbeMap::identity(outer));
        if (!(via_id == plot)) {
            row.id_ok = false;
            row.detail = "identity law failed over " + outer.str();
        }
        PlotHom lhs = pullback(pullback(plot, f), g);
        PlotHom rhs = pullback(plot, compose(f, g));
        if (!(lhs == rhs)) {
            row.comp_ok = false;
            row.detail += std::string(row.detail.empty() ? "" : "; ") +
                          "composition law failed: " + inner.str() + " -> " + mid.str() + " -> " +
                          outer.str();
        }
        return row;
    });

    FunctorReport rep;
    rep.samples = samples;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].id_ok) rep.failures.push_back({i, "identity", rows[i].detail});
        if (!rows[i].comp_ok) rep.failures.push_back({i, "composition", rows[i].detail});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Boxes and gluing

Box Box::make(std::vector<Rational> lo, std::vector<Rational> hi) {
    if (lo.size() != hi.size()) fail(Errc::CoverageError, "box endpoint dimensions differ");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (rat_cmp(lo[i], hi[i]) >= 0) fail(Errc::CoverageError, "box is empty on some axis");
    Box b;
    b.lo = std::move(lo);
    b.hi = std::move(hi);
    return b;
}

bool Box::contains(const std::vector<Rational>& p) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(rat_cmp(lo[i], p[i]) < 0 && rat_cmp(p[i], hi[i]) < 0)) return false;
    return true;
}

std::optional<Box> Box::intersect(const Box& o) const {
    if (o.dim() != dim()) return std::nullopt;
    Box r;
    for (std::size_t i = 0; i < dim(); ++i) {
        Rational l = rat_cmp(lo[i], o.lo[i]) >= 0 ? lo[i] : o.lo[i];
        Rational h = rat_cmp(hi[i], o.hi[i]) <= 0 ? hi[i] : o.hi[i];
        if (rat_cmp(l, h) >= 0) return std::nullopt;
        r.lo.push_back(l);
        r.hi.push_back(h);
    }
    return r;
}

std::string Box::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < lo.size(); ++i)
        os << (i ? "x" : "") << "(" << rat_to_string(lo[i]) << "," << rat_to_string(hi[i]) << ")";
    return os.str();
}

PlotPiece restrict_plot(const PlotHom& plot, const Box& box) {
    if (box.dim() != plot.probe.k)
        fail(Errc::CoverageError, "restriction box dimension differs from the probe dimension");
    return PlotPiece{box, plot};
}

PlotHom glue_plots(const std::vector<PlotPiece>& pieces, const Box& reference) {
    if (pieces.empty()) fail(Errc::CoverageError, "no pieces to glue");
    const ProbeSpace& probe = pieces[0].plot.probe;
    if (reference.dim() != probe.k)
        fail(Errc::CoverageError, "reference box dimension differs from the probe dimension");
    for (const auto& pc : pieces) {
        if (!pc.plot.probe.same_shape(probe) ||
            !same_descriptor(pc.plot.descriptor, pieces[0].plot.descriptor))
            fail(Errc::ProbeMismatch, "pieces are plots of different shape");
        if (pc.box.dim() != probe.k)
            fail(Errc::CoverageError, "piece box dimension differs from the probe dimension");
        for (const auto& [n, v] : pc.plot.components) {
            (void)n;
            for (const auto& t : v.terms())
                if (!t.coeff.is_polynomial_in(probe.ambient->evens))
                    fail(Errc::Unsupported, "gluing handles polynomial-coefficient plots only");
        }
    }

    // pairwise agreement on overlaps; for polynomial data, agreement on an
    // open overlap is normal-form equality
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            if (pieces[i].box.intersect(pieces[j].box)) {
                if (!(pieces[i].plot == pieces[j].plot))
                    fail(Errc::GluingObstruction, "pieces " + std::to_string(i) + " and " +
                                                      std::to_string(j) +
                                                      " disagree on their overlap");
            }

    // coverage: test one interior point of every cell and every face of the
    // endpoint arrangement inside the reference box
    const std::size_t d = reference.dim();
    if (d > 0) {
        std::vector<std::vector<Rational>> candidates(d);
        for (std::size_t ax = 0; ax < d; ++ax) {
            std::vector<Rational> cuts{reference.lo[ax], reference.hi[ax]};
            for (const auto& pc : pieces)
                for (const Rational& v : {pc.box.lo[ax], pc.box.hi[ax]})
                    if (rat_cmp(reference.lo[ax], v) < 0 && rat_cmp(v, reference.hi[ax]) < 0)
                        cuts.push_back(v);
            std::sort(cuts.begin(), cuts.end(),
                      [](const Rational& a, const Rational& b) { return rat_cmp(a, b) < 0; });
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            std::vector<Rational> pts;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                pts.push_back((cuts[i] + cuts[i + 1]) / 2);
                if (i > 0) pts.push_back(cuts[i]);
            }
            candidates[ax] = std::move(pts);
        }
        std::vector<std::size_t> idx(d, 0);
        std::vector<Rational> point(d);
        while (true) {
            for (std::size_t ax = 0; ax < d; ++ax) point[ax] = candidates[ax][idx[ax]];
            bool covered = false;
            for (const auto& pc : pieces)
                if (pc.box.contains(point)) {
                    covered = true;
                    break;
                }
            if (!covered) {
                std::ostringstream os;
                os << "reference box not covered near (";
                for (std::size_t ax = 0; ax < d; ++ax)
                    os << (ax ? "," : "") << rat_to_string(point[ax]);
                os << ")";
                fail(Errc::CoverageError, os.str());
            }
            std::size_t ax = 0;
            while (ax < d && ++idx[ax] == candidates[ax].size()) idx[ax++] = 0;
            if (ax == d) break;
        }
    }

    // all pieces meeting the reference agree through overlap chains; any of
    // them carries the glued polynomial data
    for (const auto& pc : pieces)
        if (pc.box.intersect(reference)) return pc.plot;
    return pieces[0].plot;
}

// ---------------------------------------------------------------------------
// Yoneda round trips

PlotHom yoneda_roundtrip(const PlotHom& plot) {
    // the induced transformation sends g : S' -> S to the pulled-back plot;
    // evaluated at the identity it must recover the plot itself
    return pullback_plot(plot, ProbeMap::identity(plot.probe));
}

ProbeMap yoneda_roundtrip_representable(const ProbeMap& f) {
    return compose(f, ProbeMap::identity(f.source));
}

// ---------------------------------------------------------------------------
// Random generation

ProbeSpace random_probe(Rng& rng, std::uint32_t max_k, std::uint32_t max_q, std::uint32_t max_m,
                        std::uint32_t weil_order, const std::string& prefix) {
    std::uint32_t k = static_cast<std::uint32_t>(rng.below(max_k + 1));
    std::uint32_t q = static_cast<std::uint32_t>(rng.below(max_q + 1));
    std::uint32_t m = static_cast<std::uint32_t>(rng.below(max_m + 1));
    return ProbeSpace::make(k, q, m, weil_order, prefix);
}

ProbeMap random_probe_map(Rng& rng, const ProbeSpace& source, const ProbeSpace& target) {
    std::map<Sym, SuperPolynomial> a;
    const AmbientPtr& samb = source.ambient;
    for (Sym g : target.ambient->evens) a.emplace(g, random_superpoly(rng, samb, 0, 2, 3));
    for (Sym g : target.ambient->odds) a.emplace(g, random_superpoly(rng, samb, 1, 1, 2));
    for (Sym g : target.ambient->weils) {
        // linear in the source weil generators, so the truncation relation
        // holds degree by degree
        SuperPolynomial img(samb);
        for (Sym e : samb->weils)
            img += SuperPolynomial::generator(samb, e)
                       .scalar_multiple(random_polynomial(rng, samb->evens, 1, 2));
        a.emplace(g, img);
    }
    return ProbeMap::make(source, target, a);
}

PlotHom random_plot(Rng& rng, const FieldSpaceDescriptor& descriptor, const ProbeSpace& probe,
                    int max_degree) {
    if (!descriptor.constraints.empty())
        fail(Errc::Unsupported, "random plots are generated for unconstrained descriptors only");
    AmbientPtr amb = plot_ambient(probe, descriptor);
    std::map<Sym, SuperPolynomial> comps;
    for (const auto& f : descriptor.fields)
        comps.emplace(f.name, random_superpoly(rng, amb, f.parity, max_degree, 3));
    return PlotHom::make(probe, descriptor, comps);
}

} // namespace smset
