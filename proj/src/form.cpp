#include "smset/form.hpp"

#include "smset/sampling.hpp"

#include <algorithm>
#include <sstream>

namespace smset {

// ---------------------------------------------------------------------------
// Construction

static int sort_wedge(std::vector<std::uint8_t>& w) {
    int sign = 1;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && w[j - 1] > w[j]) {
            std::swap(w[j - 1], w[j]);
            sign = -sign;
            --j;
        }
        if (j > 0 && w[j - 1] == w[j]) return 0;
    }
    return sign;
}

DifferentialForm DifferentialForm::zero(AmbientPtr amb, std::vector<Sym> base, int degree) {
    DifferentialForm w;
    w.amb = std::move(amb);
    w.base = std::move(base);
    w.degree = degree;
    for (Sym b : w.base)
        if (w.amb->kind_of(b) != Ambient::GenKind::Even)
            fail(Errc::IncompatibleAmbient,
                 "base coordinate '" + sym_name(b) + "' is not an even generator");
    if (degree < 0) fail(Errc::DegreeError, "negative form degree");
    // degree may exceed the base dimension; only the zero form lives there
    return w;
}

DifferentialForm DifferentialForm::scalar(AmbientPtr amb, std::vector<Sym> base,
                                          const SuperPolynomial& c) {
    return from_terms(std::move(amb), std::move(base), 0, {{{}, c}});
}

DifferentialForm DifferentialForm::monomial(AmbientPtr amb, std::vector<Sym> base,
                                            const SuperPolynomial& c,
                                            std::vector<std::uint8_t> wedge) {
    int deg = static_cast<int>(wedge.size());
    return from_terms(std::move(amb), std::move(base), deg, {{std::move(wedge), c}});
}

DifferentialForm DifferentialForm::from_terms(
    AmbientPtr amb, std::vector<Sym> base, int degree,
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts) {
    DifferentialForm w = zero(std::move(amb), std::move(base), degree);
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> clean;
    for (auto& [idx, c] : ts) {
        if (c.is_zero()) continue;
        if (!same_signature(c.ambient(), w.amb))
            fail(Errc::IncompatibleAmbient, "form coefficient over a different ambient");
        if (static_cast<int>(idx.size()) != degree)
            fail(Errc::DegreeError, "wedge monomial degree differs from the form degree");
        std::vector<std::uint8_t> v = idx;
        int sign = sort_wedge(v);
        if (sign == 0) continue;
        for (std::uint8_t i : v)
            if (i >= w.base.size()) fail(Errc::DegreeError, "wedge index out of range");
        clean.emplace_back(std::move(v), sign < 0 ? -c : c);
    }
    std::sort(clean.begin(), clean.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, c] : clean) {
        if (!w.terms.empty() && w.terms.back().first == idx)
            w.terms.back().second += c;
        else
            w.terms.emplace_back(idx, c);
    }
    w.terms.erase(std::remove_if(w.terms.begin(), w.terms.end(),
                                 [](const auto& t) { return t.second.is_zero(); }),
                  w.terms.end());
    return w;
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm w = *this;
    for (auto& [idx, c] : w.terms) {
        (void)idx;
        c = -c;
    }
    return w;
}

DifferentialForm DifferentialForm::scalar_multiple(const SuperPolynomial& c) const {
    auto ts = terms;
    for (auto& [idx, v] : ts) {
        (void)idx;
        v = c * v;
    }
    return from_terms(amb, base, degree, std::move(ts));
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    if (!same_signature(a.amb, b.amb) || a.base != b.base || a.degree != b.degree)
        return false;
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (a.terms[i].first != b.terms[i].first || !(a.terms[i].second == b.terms[i].second))
            return false;
    return true;
}

static void require_compatible(const DifferentialForm& a, const DifferentialForm& b,
                               const char* op) {
    if (!same_signature(a.amb, b.amb) || a.base != b.base)
        fail(Errc::IncompatibleAmbient, std::string(op) + ": forms live over different bases");
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
    require_compatible(a, b, "add");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.degree != b.degree) fail(Errc::DegreeError, "adding forms of different degree");
    auto ts = a.terms;
    ts.insert(ts.end(), b.terms.begin(), b.terms.end());
    return DifferentialForm::from_terms(a.amb, a.base, a.degree, std::move(ts));
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
    return a + (-b);
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    require_compatible(a, b, "wedge");
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts;
    for (const auto& [ia, ca] : a.terms)
        for (const auto& [ib, cb] : b.terms) {
            std::vector<std::uint8_t> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            ts.emplace_back(std::move(idx), ca * cb);
        }
    return DifferentialForm::from_terms(a.amb, a.base, a.degree + b.degree, std::move(ts));
}

// ---------------------------------------------------------------------------
// Exterior derivative and pullback

DifferentialForm exterior_derivative(const DifferentialForm& w) {
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts;
    for (const auto& [idx, c] : w.terms) {
        for (std::size_t mu = 0; mu < w.base.size(); ++mu) {
            SuperPolynomial dc = c.partial_derivative(w.base[mu]);
            if (dc.is_zero()) continue;
            std::vector<std::uint8_t> nidx;
            nidx.push_back(static_cast<std::uint8_t>(mu));
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            ts.emplace_back(std::move(nidx), dc);
        }
    }
    return DifferentialForm::from_terms(w.amb, w.base, w.degree + 1, std::move(ts));
}

DifferentialForm pullback_form(const DifferentialForm& w, const ProbeMap& f) {
    if (f.target.q != 0 || f.target.m != 0 || f.source.q != 0 || f.source.m != 0)
        fail(Errc::Unsupported, "form pullback is defined along maps of even probes");
    if (w.base != f.target.ambient->evens)
        fail(Errc::ProbeMismatch, "form base does not match the map's target probe");
    const AmbientPtr& samb = f.source.ambient;
    const std::vector<Sym>& sbase = samb->evens;

    DifferentialForm out = DifferentialForm::zero(samb, sbase, w.degree);
    for (const auto& [idx, c] : w.terms) {
        SuperPolynomial cc = c.substitute(f.assignment, samb);
        DifferentialForm part = DifferentialForm::scalar(samb, sbase, cc);
        for (std::uint8_t j : idx) {
            // d(phi_j) expanded over the source coordinates
            const SuperPolynomial& phi = f.assignment.at(w.base[j]);
            std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> dphi;
            for (std::size_t i = 0; i < sbase.size(); ++i) {
                SuperPolynomial d = phi.partial_derivative(sbase[i]);
                if (!d.is_zero()) dphi.push_back({{static_cast<std::uint8_t>(i)}, d});
            }
            part = wedge(part, DifferentialForm::from_terms(samb, sbase, 1, std::move(dphi)));
            if (part.is_zero()) break;
        }
        if (w.degree == 0) {
            out = out + part;
        } else if (!part.is_zero()) {
            out = out + part;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Antiderivative rule table

namespace {

bool affine_in(const ScalarExpr& e, Sym var, Rational& slope) {
    ScalarExpr d = e.derivative(var);
    auto c = d.as_constant();
    if (!c) return false;
    slope = *c;
    return true;
}

struct MonoSplit {
    Rational coeff;
    std::vector<std::pair<Atom, int>> rest; // atoms independent of var
    int var_power = 0;
    std::optional<Atom> elem;               // single elementary factor in var
    // opaque u-substitution pattern
    std::optional<Sym> func_name;
    std::vector<Sym> func_args;
    int func_power = 0;        // power of f itself
    bool has_func_prime = false;
};

ScalarExpr rebuild(const std::vector<std::pair<Atom, int>>& rest, const Rational& c) {
    Monomial m;
    m.coeff = c;
    m.powers = rest;
    return ScalarExpr::from_monomials({m});
}

// integral of var^k * elem(arg) dvar with affine arg (slope a != 0)
ScalarExpr integrate_power_elem(Sym var, int k, const Atom& elem, const Rational& a) {
    ScalarExpr x = ScalarExpr::variable(var);
    ScalarExpr xe = k > 0 ? x.pow(k) : ScalarExpr::one();
    ScalarExpr E = ScalarExpr::from_atom(elem);
    Rational inva = Rational(1) / a;
    switch (elem.fn) {
        case ElemFn::Exp: {
            // t^k e / a - (k/a) I(t^(k-1) e)
            ScalarExpr r = (xe * E).scaled(inva);
            if (k > 0)
                r = r - integrate_power_elem(var, k - 1, elem, a).scaled(Rational(k) * inva);
            return r;
        }
        case ElemFn::Sin: {
            Atom cosA = Atom::elem(ElemFn::Cos, *elem.sub);
            ScalarExpr r = (xe * ScalarExpr::from_atom(cosA)).scaled(-inva);
            if (k > 0) {
                // + (k/a) I(t^(k-1) cos)
                r = r + integrate_power_elem(var, k - 1, cosA, a).scaled(Rational(k) * inva);
            }
            return r;
        }
        case ElemFn::Cos: {
            Atom sinA = Atom::elem(ElemFn::Sin, *elem.sub);
            ScalarExpr r = (xe * ScalarExpr::from_atom(sinA)).scaled(inva);
            if (k > 0) r = r - integrate_power_elem(var, k - 1, sinA, a).scaled(Rational(k) * inva);
            return r;
        }
        case ElemFn::Log:
            break;
    }
    fail(Errc::UnsupportedIntegrand, "no closed-form rule for this integrand");
}

} // namespace

ScalarExpr antiderivative(const ScalarExpr& e, Sym var, bool allow_opaque_usub) {
    ScalarExpr out;
    for (const auto& m : e.monomials()) {
        MonoSplit s;
        s.coeff = m.coeff;
        for (const auto& [a, k] : m.powers) {
            bool dep = false;
            switch (a.kind) {
                case Atom::Kind::Var:
                    dep = a.name == var;
                    break;
                case Atom::Kind::Func:
                    dep = std::find(a.args.begin(), a.args.end(), var) != a.args.end();
                    break;
                case Atom::Kind::Elem:
                case Atom::Kind::Quot:
                    dep = a.sub->depends_on(var);
                    break;
            }
            if (!dep) {
                s.rest.emplace_back(a, k);
                continue;
            }
            if (a.kind == Atom::Kind::Var) {
                if (k < 0)
                    fail(Errc::UnsupportedIntegrand,
                         "negative power of the integration variable");
                s.var_power = k;
            } else if (a.kind == Atom::Kind::Elem) {
                if (s.elem || k != 1)
                    fail(Errc::UnsupportedIntegrand,
                         "at most one elementary factor of the integration variable");
                s.elem = a;
            } else if (a.kind == Atom::Kind::Func && allow_opaque_usub) {
                std::uint32_t total = 0;
                for (auto dv : a.derivs) total += dv;
                if (total == 0) {
                    if (s.func_name && *s.func_name != a.name)
                        fail(Errc::UnsupportedIntegrand, "mixed opaque functions");
                    if (k < 0) fail(Errc::UnsupportedIntegrand, "negative opaque power");
                    s.func_name = a.name;
                    s.func_args = a.args;
                    s.func_power = k;
                } else if (total == 1) {
                    if (s.has_func_prime || k != 1)
                        fail(Errc::UnsupportedIntegrand, "opaque pattern not integrable");
                    if (s.func_name && *s.func_name != a.name)
                        fail(Errc::UnsupportedIntegrand, "mixed opaque functions");
                    s.func_name = a.name;
                    s.func_args = a.args;
                    s.has_func_prime = true;
                } else {
                    fail(Errc::UnsupportedIntegrand, "higher opaque derivative");
                }
            } else {
                fail(Errc::UnsupportedIntegrand,
                     "integrand depends on the variable through an unsupported factor");
            }
        }

        ScalarExpr restpart = rebuild(s.rest, s.coeff);
        if (s.func_name) {
            // c * f^n * f'  ->  c f^(n+1)/(n+1); requires no other var factors
            if (!s.has_func_prime || s.elem || s.var_power != 0)
                fail(Errc::UnsupportedIntegrand, "opaque pattern not integrable");
            ScalarExpr f = ScalarExpr::func(*s.func_name, s.func_args);
            out += restpart * f.pow(s.func_power + 1).scaled(Rational(1, s.func_power + 1));
        } else if (s.elem) {
            Rational slope;
            if (!affine_in(*s.elem->sub, var, slope) || rat_is_zero(slope))
                fail(Errc::UnsupportedIntegrand,
                     "elementary factor without an affine argument");
            if (s.elem->fn == ElemFn::Log)
                fail(Errc::UnsupportedIntegrand, "logarithmic integrand");
            out += restpart * integrate_power_elem(var, s.var_power, *s.elem, slope);
        } else {
            ScalarExpr x = ScalarExpr::variable(var);
            out += restpart * x.pow(s.var_power + 1).scaled(Rational(1, s.var_power + 1));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integration over boxes

static AmbientPtr drop_base(const AmbientPtr& amb, const std::vector<Sym>& base) {
    std::vector<Sym> evens;
    for (Sym e : amb->evens)
        if (std::find(base.begin(), base.end(), e) == base.end()) evens.push_back(e);
    return Ambient::make(std::move(evens), amb->odds, amb->weils, amb->weil_order);
}

SuperPolynomial integrate_over_box(const DifferentialForm& w, const Box& box) {
    const std::size_t d = w.base.size();
    if (w.degree != static_cast<int>(d))
        fail(Errc::DegreeError, "integration requires a top-degree form");
    if (box.dim() != d) fail(Errc::CoverageError, "box dimension differs from the base");
    AmbientPtr target = drop_base(w.amb, w.base);
    if (w.terms.empty()) return SuperPolynomial::zero(target);

    // single coefficient of dx_0 ^ ... ^ dx_(d-1), in canonical orientation
    const SuperPolynomial& c = w.terms[0].second;
    std::vector<SPTerm> out;
    for (const auto& t : c.terms()) {
        ScalarExpr v = t.coeff;
        for (std::size_t ax = 0; ax < d; ++ax) {
            ScalarExpr F = antiderivative(v, w.base[ax], false);
            ScalarExpr hi = F.substitute_var(w.base[ax], ScalarExpr::constant(box.hi[ax]));
            ScalarExpr lo = F.substitute_var(w.base[ax], ScalarExpr::constant(box.lo[ax]));
            v = hi - lo;
        }
        SPTerm nt;
        nt.coeff = v;
        nt.gr = t.gr;
        nt.wl = t.wl;
        out.push_back(std::move(nt));
    }
    SuperPolynomial res = SuperPolynomial::from_terms(w.amb, std::move(out));
    return res.transport(target);
}

// ---------------------------------------------------------------------------
// Exactness

static int base_degree(const Monomial& m, const std::vector<Sym>& base) {
    int deg = 0;
    for (const auto& [a, e] : m.powers)
        if (a.kind == Atom::Kind::Var &&
            std::find(base.begin(), base.end(), a.name) != base.end())
            deg += e;
    return deg;
}

static bool polynomial_in_base(const DifferentialForm& w) {
    for (const auto& [idx, c] : w.terms) {
        (void)idx;
        for (const auto& t : c.terms())
            if (!t.coeff.is_polynomial_in(w.base)) return false;
    }
    return true;
}

// dilation homotopy about the origin for polynomial coefficients
static DifferentialForm poincare_primitive(const DifferentialForm& w) {
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts;
    const int n = w.degree;
    for (const auto& [idx, c] : w.terms) {
        for (const auto& spt : c.terms()) {
            for (const auto& m : spt.coeff.monomials()) {
                int K = base_degree(m, w.base);
                Rational scale = Rational(1, n + K);
                for (std::size_t j = 0; j < idx.size(); ++j) {
                    std::vector<std::uint8_t> nidx;
                    for (std::size_t l = 0; l < idx.size(); ++l)
                        if (l != j) nidx.push_back(idx[l]);
                    Monomial mm = m;
                    mm.coeff *= ((j % 2) ? -scale : scale);
                    ScalarExpr coeff =
                        ScalarExpr::from_monomials({mm}) * ScalarExpr::variable(w.base[idx[j]]);
                    SPTerm nt;
                    nt.coeff = coeff;
                    nt.gr = spt.gr;
                    nt.wl = spt.wl;
                    ts.emplace_back(std::move(nidx),
                                    SuperPolynomial::from_terms(w.amb, {std::move(nt)}));
                }
            }
        }
    }
    return DifferentialForm::from_terms(w.amb, w.base, n - 1, std::move(ts));
}

ExactnessResult is_exact_polynomial(const DifferentialForm& w) {
    if (w.degree < 1) fail(Errc::DegreeError, "exactness test requires degree >= 1");
    if (w.is_zero()) {
        return {true, DifferentialForm::zero(w.amb, w.base, w.degree - 1)};
    }
    if (w.base.size() == 1) {
        // try the rule table, including the opaque-function pattern
        const SuperPolynomial& c = w.terms[0].second;
        std::vector<SPTerm> prim;
        for (const auto& t : c.terms()) {
            SPTerm nt;
            nt.coeff = antiderivative(t.coeff, w.base[0], true);
            nt.gr = t.gr;
            nt.wl = t.wl;
            prim.push_back(std::move(nt));
        }
        DifferentialForm eta = DifferentialForm::scalar(
            w.amb, w.base, SuperPolynomial::from_terms(w.amb, std::move(prim)));
        return {true, eta};
    }
    if (!polynomial_in_base(w))
        fail(Errc::Unsupported, "exactness decision requires polynomial coefficients");
    DifferentialForm dw = exterior_derivative(w);
    if (!dw.is_zero()) return {false, std::nullopt};
    DifferentialForm eta = poincare_primitive(w);
    if (!(exterior_derivative(eta) == w))
        fail(Errc::DomainError, "primitive reconstruction failed"); // unreachable for closed input
    return {true, eta};
}

RelativeExactness is_exact_rel_boundary(const DifferentialForm& w, const Box& box) {
    if (w.degree != static_cast<int>(w.base.size()))
        fail(Errc::DegreeError, "relative exactness applies to top-degree forms");
    RelativeExactness r;
    r.integral = integrate_over_box(w, box);
    r.exact = r.integral.is_zero();
    if (w.base.size() == 1 && !w.is_zero()) {
        // primitive vanishing at the lower endpoint
        const SuperPolynomial& c = w.terms[0].second;
        try {
            std::vector<SPTerm> prim;
            for (const auto& t : c.terms()) {
                ScalarExpr F = antiderivative(t.coeff, w.base[0], true);
                F = F - F.substitute_var(w.base[0], ScalarExpr::constant(box.lo[0]));
                SPTerm nt;
                nt.coeff = F;
                nt.gr = t.gr;
                nt.wl = t.wl;
                prim.push_back(std::move(nt));
            }
            r.witness = DifferentialForm::scalar(
                w.amb, w.base, SuperPolynomial::from_terms(w.amb, std::move(prim)));
        } catch (const Error&) {
            // no closed-form primitive; the integral criterion already decided
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Moduli of forms

ModuliFormPlots moduli_form_plot(const ProbeSpace& probe, int degree) {
    if (probe.q != 0 || probe.m != 0)
        fail(Errc::Unsupported, "form moduli are probed by even Cartesian spaces only");
    if (degree < 0) fail(Errc::DegreeError, "negative form degree");
    ModuliFormPlots m;
    m.probe = probe;
    m.degree = degree;
    const int k = static_cast<int>(probe.k);
    if (k < degree) {
        m.singleton = true;
        return m;
    }
    // all strictly increasing index vectors of length `degree` in [0, k)
    std::vector<std::uint8_t> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == degree) {
            m.basis.push_back(cur);
            return;
        }
        for (int i = start; i < k; ++i) {
            cur.push_back(static_cast<std::uint8_t>(i));
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    m.singleton = m.basis.empty() && degree > 0;
    return m;
}

std::string ModuliFormPlots::str() const {
    std::ostringstream os;
    if (singleton) {
        os << "{0}";
        return os.str();
    }
    os << "free coefficients on {";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        os << (i ? ", " : " ");
        if (basis[i].empty()) os << "1";
        for (std::size_t j = 0; j < basis[i].size(); ++j)
            os << (j ? "*" : "") << "d[" << sym_name(probe.ambient->evens[basis[i][j]]) << "]";
    }
    os << " }";
    return os.str();
}

DifferentialForm random_polynomial_form(Rng& rng, const AmbientPtr& amb,
                                        const std::vector<Sym>& base, int degree,
                                        int max_coeff_degree) {
    const int k = static_cast<int>(base.size());
    std::vector<std::pair<std::vector<std::uint8_t>, SuperPolynomial>> ts;
    std::vector<std::uint8_t> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == degree) {
            if (rng.chance(2, 3)) {
                ScalarExpr c = random_polynomial(rng, base, max_coeff_degree, 2);
                ts.emplace_back(cur, SuperPolynomial::scalar(amb, c));
            }
            return;
        }
        for (int i = start; i < k; ++i) {
            cur.push_back(static_cast<std::uint8_t>(i));
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return DifferentialForm::from_terms(amb, base, degree, std::move(ts));
}

// ---------------------------------------------------------------------------
// Printing

std::string DifferentialForm::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms) {
        std::string dpart;
        {
            std::ostringstream ds;
            for (std::size_t j = 0; j < idx.size(); ++j)
                ds << (j ? "*" : "") << "d[" << sym_name(base[idx[j]]) << "]";
            dpart = ds.str();
        }
        std::string cs = c.str();
        bool neg = false;
        std::string body;
        if (c.terms().size() == 1) {
            if (!cs.empty() && cs[0] == '-') {
                neg = true;
                cs = cs.substr(1);
            }
            if (dpart.empty())
                body = cs;
            else if (cs == "1")
                body = dpart;
            else
                body = cs + "*" + dpart;
        } else {
            body = dpart.empty() ? cs : "(" + cs + ")*" + dpart;
        }
        if (first)
            os << (neg ? "-" : "") << body;
        else
            os << (neg ? " - " : " + ") << body;
        first = false;
    }
    return os.str();
}

} // namespace smset
