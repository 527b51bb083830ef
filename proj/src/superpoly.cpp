#include "smset/superpoly.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace smset {

// ---------------------------------------------------------------------------
// Ambient

AmbientPtr Ambient::make(std::vector<Sym> evens, std::vector<Sym> odds, std::vector<Sym> weils,
                         std::uint32_t weil_order) {
    if (weils.empty() != (weil_order == 0))
        fail(Errc::IncompatibleAmbient, "weil generators present iff truncation order > 0");
    auto a = std::make_shared<Ambient>();
    a->evens = std::move(evens);
    a->odds = std::move(odds);
    a->weils = std::move(weils);
    a->weil_order = weil_order;
    std::vector<Sym> all;
    all.insert(all.end(), a->evens.begin(), a->evens.end());
    all.insert(all.end(), a->odds.begin(), a->odds.end());
    all.insert(all.end(), a->weils.begin(), a->weils.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        fail(Errc::IncompatibleAmbient, "duplicate generator name in ambient");
    return a;
}

Ambient::GenKind Ambient::kind_of(Sym s) const {
    for (Sym g : evens)
        if (g == s) return GenKind::Even;
    for (Sym g : odds)
        if (g == s) return GenKind::Odd;
    for (Sym g : weils)
        if (g == s) return GenKind::Weil;
    return GenKind::None;
}

int Ambient::odd_index(Sym s) const {
    for (std::size_t i = 0; i < odds.size(); ++i)
        if (odds[i] == s) return static_cast<int>(i);
    return -1;
}

int Ambient::weil_index(Sym s) const {
    for (std::size_t i = 0; i < weils.size(); ++i)
        if (weils[i] == s) return static_cast<int>(i);
    return -1;
}

std::string Ambient::str() const {
    std::ostringstream os;
    os << "ambient(evens=[";
    for (std::size_t i = 0; i < evens.size(); ++i) os << (i ? "," : "") << sym_name(evens[i]);
    os << "], odds=[";
    for (std::size_t i = 0; i < odds.size(); ++i) os << (i ? "," : "") << sym_name(odds[i]);
    os << "], weils=[";
    for (std::size_t i = 0; i < weils.size(); ++i) os << (i ? "," : "") << sym_name(weils[i]);
    os << "], r=" << weil_order << ")";
    return os.str();
}

bool same_signature(const Ambient& a, const Ambient& b) {
    return a.evens == b.evens && a.odds == b.odds && a.weils == b.weils &&
           a.weil_order == b.weil_order;
}

bool same_signature(const AmbientPtr& a, const AmbientPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return same_signature(*a, *b);
}

// ---------------------------------------------------------------------------
// Term keys

static std::uint32_t weil_total(const WeilMono& w) {
    return std::accumulate(w.begin(), w.end(), 0u);
}

int spkey_cmp(const GrMono& ga, const WeilMono& wa, const GrMono& gb, const WeilMono& wb) {
    if (ga.size() != gb.size()) return ga.size() < gb.size() ? -1 : 1;
    if (ga != gb) return ga < gb ? -1 : 1;
    std::uint32_t ta = weil_total(wa), tb = weil_total(wb);
    if (ta != tb) return ta < tb ? -1 : 1;
    // compare as padded exponent vectors
    std::size_t n = std::max(wa.size(), wb.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t x = i < wa.size() ? wa[i] : 0;
        std::uint16_t y = i < wb.size() ? wb[i] : 0;
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

static void trim_weil(WeilMono& w) {
    while (!w.empty() && w.back() == 0) w.pop_back();
}

// Sort an arbitrary odd index list into strictly increasing order, tracking
// the anticommutation sign. Returns 0 if an index repeats.
static int sort_odd_indices(GrMono& g) {
    int sign = 1;
    for (std::size_t i = 1; i < g.size(); ++i) {
        std::size_t j = i;
        while (j > 0 && g[j - 1] > g[j]) {
            std::swap(g[j - 1], g[j]);
            sign = -sign;
            --j;
        }
        if (j > 0 && g[j - 1] == g[j]) return 0;
    }
    return sign;
}

// ---------------------------------------------------------------------------
// Construction / normalization

SuperPolynomial SuperPolynomial::from_terms(AmbientPtr amb, std::vector<SPTerm> ts) {
    if (!amb) throw std::logic_error("superpoly: null ambient");
    std::vector<SPTerm> clean;
    clean.reserve(ts.size());
    for (auto& t : ts) {
        if (t.coeff.is_zero()) continue;
        GrMono g = t.gr;
        int sign = sort_odd_indices(g);
        if (sign == 0) continue;
        for (std::uint16_t idx : g)
            if (idx >= amb->odds.size())
                fail(Errc::UnknownGenerator, "odd generator index out of range");
        WeilMono w = t.wl;
        if (w.size() > amb->weils.size())
            fail(Errc::UnknownGenerator, "weil exponent vector too long");
        trim_weil(w);
        if (weil_total(w) > amb->weil_order) continue; // truncated away
        SPTerm nt;
        nt.coeff = sign < 0 ? -t.coeff : t.coeff;
        nt.gr = std::move(g);
        nt.wl = std::move(w);
        clean.push_back(std::move(nt));
    }
    std::sort(clean.begin(), clean.end(), [](const SPTerm& a, const SPTerm& b) {
        return spkey_cmp(a.gr, a.wl, b.gr, b.wl) < 0;
    });
    std::vector<SPTerm> merged;
    for (auto& t : clean) {
        if (!merged.empty() && spkey_cmp(merged.back().gr, merged.back().wl, t.gr, t.wl) == 0)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const SPTerm& t) { return t.coeff.is_zero(); }),
                 merged.end());
    SuperPolynomial p(amb);
    p.terms_ = std::move(merged);
    return p;
}

SuperPolynomial SuperPolynomial::scalar(AmbientPtr amb, const ScalarExpr& c) {
    SPTerm t;
    t.coeff = c;
    return from_terms(std::move(amb), {std::move(t)});
}

SuperPolynomial SuperPolynomial::constant(AmbientPtr amb, const Rational& q) {
    return scalar(std::move(amb), ScalarExpr::constant(q));
}

SuperPolynomial SuperPolynomial::generator(AmbientPtr amb, Sym g) {
    switch (amb->kind_of(g)) {
        case Ambient::GenKind::Even:
            return scalar(amb, ScalarExpr::variable(g));
        case Ambient::GenKind::Odd: {
            SPTerm t;
            t.coeff = ScalarExpr::one();
            t.gr = {static_cast<std::uint16_t>(amb->odd_index(g))};
            return from_terms(amb, {std::move(t)});
        }
        case Ambient::GenKind::Weil: {
            SPTerm t;
            t.coeff = ScalarExpr::one();
            t.wl.assign(amb->weils.size(), 0);
            t.wl[amb->weil_index(g)] = 1;
            return from_terms(amb, {std::move(t)});
        }
        case Ambient::GenKind::None:
            break;
    }
    fail(Errc::UnknownGenerator, "'" + sym_name(g) + "' is not a generator of " + amb->str());
}

void SuperPolynomial::require_same_ambient(const SuperPolynomial& o, const char* op) const {
    if (!same_signature(amb_, o.amb_))
        fail(Errc::IncompatibleAmbient, std::string(op) + ": operands live over different ambients");
}

// ---------------------------------------------------------------------------
// Arithmetic

std::optional<int> SuperPolynomial::parity() const {
    std::optional<int> p;
    for (const auto& t : terms_) {
        int tp = static_cast<int>(t.gr.size() % 2);
        if (!p)
            p = tp;
        else if (*p != tp)
            return std::nullopt;
    }
    if (!p) return 0;
    return p;
}

SuperPolynomial SuperPolynomial::operator-() const { return scaled(Rational(-1)); }

SuperPolynomial SuperPolynomial::scaled(const Rational& q) const {
    SuperPolynomial r(amb_);
    if (rat_is_zero(q)) return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_) t.coeff = t.coeff.scaled(q);
    return r;
}

SuperPolynomial SuperPolynomial::scalar_multiple(const ScalarExpr& c) const {
    std::vector<SPTerm> ts = terms_;
    for (auto& t : ts) t.coeff = t.coeff * c;
    return from_terms(amb_, std::move(ts));
}

SuperPolynomial operator+(const SuperPolynomial& a, const SuperPolynomial& b) {
    a.require_same_ambient(b, "add");
    std::vector<SPTerm> ts;
    ts.reserve(a.terms_.size() + b.terms_.size());
    ts.insert(ts.end(), a.terms_.begin(), a.terms_.end());
    ts.insert(ts.end(), b.terms_.begin(), b.terms_.end());
    return SuperPolynomial::from_terms(a.amb_, std::move(ts));
}

SuperPolynomial operator-(const SuperPolynomial& a, const SuperPolynomial& b) { return a + (-b); }

// Graded product of two terms; sign counts transpositions needed to merge the
// two strictly increasing odd monomials.
SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
    a.require_same_ambient(b, "mul");
    std::vector<SPTerm> ts;
    const std::uint32_t r = a.amb_ ? a.amb_->weil_order : 0;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            // odd part
            bool dup = false;
            long swaps = 0;
            GrMono g;
            g.reserve(x.gr.size() + y.gr.size());
            std::size_t i = 0, j = 0;
            while (i < x.gr.size() && j < y.gr.size()) {
                if (x.gr[i] == y.gr[j]) {
                    dup = true;
                    break;
                }
                if (x.gr[i] < y.gr[j]) {
                    g.push_back(x.gr[i++]);
                } else {
                    swaps += static_cast<long>(x.gr.size() - i);
                    g.push_back(y.gr[j++]);
                }
            }
            if (dup) continue;
            while (i < x.gr.size()) g.push_back(x.gr[i++]);
            while (j < y.gr.size()) g.push_back(y.gr[j++]);

            // weil part with truncation
            WeilMono w(std::max(x.wl.size(), y.wl.size()), 0);
            for (std::size_t k = 0; k < w.size(); ++k) {
                std::uint16_t xa = k < x.wl.size() ? x.wl[k] : 0;
                std::uint16_t ya = k < y.wl.size() ? y.wl[k] : 0;
                w[k] = static_cast<std::uint16_t>(xa + ya);
            }
            if (weil_total(w) > r) continue;

            SPTerm t;
            t.coeff = x.coeff * y.coeff;
            if (swaps % 2) t.coeff = -t.coeff;
            t.gr = std::move(g);
            t.wl = std::move(w);
            ts.push_back(std::move(t));
        }
    }
    return SuperPolynomial::from_terms(a.amb_, std::move(ts));
}

SuperPolynomial& SuperPolynomial::operator+=(const SuperPolynomial& o) { return *this = *this + o; }
SuperPolynomial& SuperPolynomial::operator-=(const SuperPolynomial& o) { return *this = *this - o; }
SuperPolynomial& SuperPolynomial::operator*=(const SuperPolynomial& o) { return *this = *this * o; }

SuperPolynomial SuperPolynomial::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    SuperPolynomial acc = constant(amb_, 1);
    SuperPolynomial base = *this;
    unsigned n = static_cast<unsigned>(e);
    while (n) {
        if (n & 1) acc *= base;
        if (n >>= 1) base *= base;
    }
    return acc;
}

SuperPolynomial SuperPolynomial::transport(const AmbientPtr& into) const {
    if (same_signature(amb_, into)) {
        SuperPolynomial p = *this;
        return from_terms(into, p.terms());
    }
    std::vector<SPTerm> ts;
    for (const auto& t : terms_) {
        SPTerm nt;
        nt.coeff = t.coeff;
        for (std::uint16_t idx : t.gr) {
            int ni = into->odd_index(amb_->odds[idx]);
            if (ni < 0)
                fail(Errc::IncompatibleAmbient, "transport target lacks odd generator '" +
                                                    sym_name(amb_->odds[idx]) + "'");
            nt.gr.push_back(static_cast<std::uint16_t>(ni));
        }
        nt.wl.assign(into->weils.size(), 0);
        for (std::size_t k = 0; k < t.wl.size(); ++k) {
            if (t.wl[k] == 0) continue;
            int ni = into->weil_index(amb_->weils[k]);
            if (ni < 0)
                fail(Errc::IncompatibleAmbient, "transport target lacks weil generator '" +
                                                    sym_name(amb_->weils[k]) + "'");
            nt.wl[static_cast<std::size_t>(ni)] = t.wl[k];
        }
        ts.push_back(std::move(nt));
    }
    return from_terms(into, std::move(ts));
}

ScalarExpr SuperPolynomial::scalar_part() const {
    for (const auto& t : terms_)
        if (t.gr.empty() && weil_total(t.wl) == 0) return t.coeff;
    return ScalarExpr();
}

SuperPolynomial SuperPolynomial::nilpotent_part() const {
    std::vector<SPTerm> ts;
    for (const auto& t : terms_)
        if (!(t.gr.empty() && weil_total(t.wl) == 0)) ts.push_back(t);
    return from_terms(amb_, std::move(ts));
}

ScalarExpr SuperPolynomial::coefficient(const GrMono& gr, const WeilMono& wl) const {
    GrMono g = gr;
    WeilMono w = wl;
    trim_weil(w);
    int sign = sort_odd_indices(g);
    if (sign == 0) return ScalarExpr();
    for (const auto& t : terms_)
        if (spkey_cmp(t.gr, t.wl, g, w) == 0)
            return sign < 0 ? -t.coeff : t.coeff;
    return ScalarExpr();
}

SuperPolynomial SuperPolynomial::inverse() const {
    ScalarExpr s0 = scalar_part();
    if (s0.is_zero())
        fail(Errc::DomainError, "element with vanishing scalar part is not invertible");
    SuperPolynomial n = nilpotent_part();
    SuperPolynomial inv0 = scalar(amb_, s0.pow(-1));
    // (s0 + n)^-1 = s0^-1 sum_j (-n s0^-1)^j, finite by nilpotency
    SuperPolynomial acc = inv0;
    SuperPolynomial factor = (-n) * inv0;
    SuperPolynomial powterm = factor;
    std::uint32_t bound = amb_->nilpotent_bound();
    for (std::uint32_t j = 1; j <= bound && !powterm.is_zero(); ++j) {
        acc += inv0 * powterm;
        powterm = powterm * factor;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Derivative

SuperPolynomial SuperPolynomial::partial_derivative(Sym gen) const {
    switch (amb_->kind_of(gen)) {
        case Ambient::GenKind::Even: {
            std::vector<SPTerm> ts;
            for (const auto& t : terms_) {
                SPTerm nt = t;
                nt.coeff = t.coeff.derivative(gen);
                ts.push_back(std::move(nt));
            }
            return from_terms(amb_, std::move(ts));
        }
        case Ambient::GenKind::Odd: {
            const int idx = amb_->odd_index(gen);
            std::vector<SPTerm> ts;
            for (const auto& t : terms_) {
                auto it = std::find(t.gr.begin(), t.gr.end(), static_cast<std::uint16_t>(idx));
                if (it == t.gr.end()) continue;
                std::size_t pos = static_cast<std::size_t>(it - t.gr.begin());
                SPTerm nt;
                nt.coeff = (pos % 2) ? -t.coeff : t.coeff; // move the generator to the front
                nt.gr = t.gr;
                nt.gr.erase(nt.gr.begin() + static_cast<long>(pos));
                nt.wl = t.wl;
                ts.push_back(std::move(nt));
            }
            return from_terms(amb_, std::move(ts));
        }
        case Ambient::GenKind::Weil: {
            const std::size_t idx = static_cast<std::size_t>(amb_->weil_index(gen));
            std::vector<SPTerm> ts;
            for (const auto& t : terms_) {
                if (idx >= t.wl.size() || t.wl[idx] == 0) continue;
                SPTerm nt = t;
                nt.coeff = t.coeff.scaled(Rational(t.wl[idx]));
                nt.wl[idx] -= 1;
                ts.push_back(std::move(nt));
            }
            return from_terms(amb_, std::move(ts));
        }
        case Ambient::GenKind::None:
            break;
    }
    fail(Errc::UnknownGenerator,
         "'" + sym_name(gen) + "' is not a generator of " + amb_->str());
}

// ---------------------------------------------------------------------------
// Substitution (homomorphism extension)

namespace {

struct HomContext {
    AmbientPtr target;
    const std::map<Sym, SuperPolynomial>* gen_images; // complete, validated
};

SuperPolynomial subst_scalar(const ScalarExpr& c, const HomContext& ctx);

SuperPolynomial subst_atom(const Atom& a, int exp, const HomContext& ctx) {
    switch (a.kind) {
        case Atom::Kind::Var: {
            auto it = ctx.gen_images->find(a.name);
            if (it != ctx.gen_images->end()) return it->second.pow(exp);
            return SuperPolynomial::scalar(ctx.target, ScalarExpr::from_atom(a, exp));
        }
        case Atom::Kind::Func: {
            // Each argument must land on a plain variable plus a nilpotent
            // remainder; compose by finite Taylor expansion.
            std::vector<Sym> new_args = a.args;
            std::vector<SuperPolynomial> nils;
            bool any_nil = false;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                auto it = ctx.gen_images->find(a.args[i]);
                if (it == ctx.gen_images->end()) {
                    nils.emplace_back(SuperPolynomial::zero(ctx.target));
                    continue;
                }
                const SuperPolynomial& img = it->second;
                ScalarExpr base = img.scalar_part();
                SuperPolynomial nil = img.nilpotent_part();
                Sym base_var = 0;
                bool base_is_var = false;
                if (base.monomials().size() == 1) {
                    const Monomial& m = base.monomials()[0];
                    if (rat_is_one(m.coeff) && m.powers.size() == 1 && m.powers[0].second == 1 &&
                        m.powers[0].first.kind == Atom::Kind::Var) {
                        base_var = m.powers[0].first.name;
                        base_is_var = true;
                    }
                }
                if (!base_is_var)
                    fail(Errc::Unsupported,
                         "argument of opaque function '" + sym_name(a.name) +
                             "' must map to a variable plus a nilpotent part");
                new_args[i] = base_var;
                if (!nil.is_zero()) any_nil = true;
                nils.push_back(std::move(nil));
            }
            SuperPolynomial value(ctx.target);
            if (!any_nil) {
                value = SuperPolynomial::scalar(
                    ctx.target, ScalarExpr::func(a.name, new_args, a.derivs));
            } else {
                // sum over derivative multi-indices J: f^(derivs+J)(args) prod nil_i^J_i / J_i!
                std::uint32_t bound = ctx.target->nilpotent_bound();
                std::vector<std::uint32_t> J(a.args.size(), 0);
                std::vector<SuperPolynomial> nilpows; // running prod for current J
                std::function<void(std::size_t, std::uint32_t, SuperPolynomial, Rational)> rec =
                    [&](std::size_t i, std::uint32_t used, SuperPolynomial acc, Rational fact) {
                        if (i == a.args.size()) {
                            std::vector<std::uint32_t> derivs = a.derivs;
                            for (std::size_t k = 0; k < derivs.size(); ++k) derivs[k] += J[k];
                            ScalarExpr fd = ScalarExpr::func(a.name, new_args, derivs);
                            value += acc.scalar_multiple(fd).scaled(Rational(1) / fact);
                            return;
                        }
                        SuperPolynomial p = SuperPolynomial::constant(ctx.target, 1);
                        Rational f(1);
                        for (std::uint32_t j = 0;; ++j) {
                            if (j > 0) {
                                if (nils[i].is_zero()) break;
                                p = p * nils[i];
                                if (p.is_zero()) break;
                                f *= Rational(j);
                            }
                            if (used + j > bound) break;
                            J[i] = j;
                            rec(i + 1, used + j, acc * p, fact * f);
                            if (j >= bound) break;
                        }
                        J[i] = 0;
                    };
                rec(0, 0, SuperPolynomial::constant(ctx.target, 1), Rational(1));
            }
            return value.pow(exp);
        }
        case Atom::Kind::Elem: {
            SuperPolynomial arg = subst_scalar(*a.sub, ctx);
            ScalarExpr base = arg.scalar_part();
            SuperPolynomial nil = arg.nilpotent_part();
            if (nil.is_zero())
                return SuperPolynomial::scalar(ctx.target, elem_apply(a.fn, base)).pow(exp);
            SuperPolynomial value(ctx.target);
            SuperPolynomial nilpow = SuperPolynomial::constant(ctx.target, 1);
            Rational fact(1);
            std::uint32_t bound = ctx.target->nilpotent_bound();
            for (std::uint32_t j = 0; j <= bound; ++j) {
                if (j > 0) {
                    nilpow = nilpow * nil;
                    if (nilpow.is_zero()) break;
                    fact *= Rational(j);
                }
                value += nilpow.scalar_multiple(elem_derivative(a.fn, base, static_cast<int>(j)))
                             .scaled(Rational(1) / fact);
            }
            return value.pow(exp);
        }
        case Atom::Kind::Quot: {
            SuperPolynomial base = subst_scalar(*a.sub, ctx);
            return base.pow(exp);
        }
    }
    return SuperPolynomial(ctx.target);
}

SuperPolynomial subst_scalar(const ScalarExpr& c, const HomContext& ctx) {
    SuperPolynomial out(ctx.target);
    for (const auto& m : c.monomials()) {
        SuperPolynomial term = SuperPolynomial::constant(ctx.target, m.coeff);
        for (const auto& [a, e] : m.powers) term *= subst_atom(a, e, ctx);
        out += term;
    }
    return out;
}

} // namespace

std::map<Sym, SuperPolynomial> complete_homomorphism(const AmbientPtr& src,
                                                     const std::map<Sym, SuperPolynomial>& images,
                                                     const AmbientPtr& target) {
    if (!src || !target) throw std::logic_error("complete_homomorphism: null ambient");
    std::map<Sym, SuperPolynomial> full;
    for (const auto& [g, img] : images) {
        if (src->kind_of(g) == Ambient::GenKind::None)
            fail(Errc::UnknownGenerator, "assignment names '" + sym_name(g) +
                                             "' which is not a generator of the source ambient");
        if (!same_signature(img.ambient(), target))
            fail(Errc::IncompatibleAmbient, "image of '" + sym_name(g) +
                                                "' lives over a different ambient than the target");
        full.emplace(g, img);
    }
    auto identity_image = [&](Sym g) -> SuperPolynomial {
        if (target->kind_of(g) == Ambient::GenKind::None)
            fail(Errc::UnknownGenerator, "generator '" + sym_name(g) +
                                             "' has no assigned image and is absent from the "
                                             "target ambient");
        return SuperPolynomial::generator(target, g);
    };
    for (Sym g : src->evens)
        if (!full.count(g)) full.emplace(g, identity_image(g));
    for (Sym g : src->odds)
        if (!full.count(g)) full.emplace(g, identity_image(g));
    for (Sym g : src->weils)
        if (!full.count(g)) full.emplace(g, identity_image(g));

    // nilpotency before parity: a non-nilpotent image of a nilpotent
    // generator is reported as such even when the parity is also wrong
    for (Sym g : src->odds) {
        const SuperPolynomial& img = full.at(g);
        if (!(img * img).is_zero())
            fail(Errc::NilpotencyViolation,
                 "image of odd generator '" + sym_name(g) + "' does not square to zero");
        auto p = img.parity();
        if (!img.is_zero() && (!p || *p != 1))
            fail(Errc::NotAHomomorphism,
                 "image of odd generator '" + sym_name(g) + "' is not homogeneous odd");
    }
    if (!src->weils.empty()) {
        // all products of images of total degree r+1 must vanish
        const std::uint32_t r = src->weil_order;
        std::vector<const SuperPolynomial*> imgs;
        for (Sym g : src->weils) imgs.push_back(&full.at(g));
        std::function<bool(std::size_t, std::uint32_t, const SuperPolynomial&)> check =
            [&](std::size_t i, std::uint32_t remaining, const SuperPolynomial& acc) -> bool {
            if (acc.is_zero()) return true;
            if (remaining == 0) return acc.is_zero();
            if (i + 1 == imgs.size()) {
                SuperPolynomial p = acc;
                for (std::uint32_t j = 0; j < remaining && !p.is_zero(); ++j) p = p * (*imgs[i]);
                return p.is_zero();
            }
            SuperPolynomial p = acc;
            for (std::uint32_t j = 0; j <= remaining; ++j) {
                if (!check(i + 1, remaining - j, p)) return false;
                if (j < remaining) {
                    p = p * (*imgs[i]);
                    if (p.is_zero()) return true;
                }
            }
            return true;
        };
        if (!check(0, r + 1, SuperPolynomial::constant(target, 1)))
            fail(Errc::NilpotencyViolation,
                 "weil generator images violate the truncation relation");
        for (Sym g : src->weils) {
            auto p = full.at(g).parity();
            if (!p || *p != 0)
                fail(Errc::NotAHomomorphism,
                     "image of weil generator '" + sym_name(g) + "' is not even");
        }
    }
    for (Sym g : src->evens) {
        auto p = full.at(g).parity();
        if (!p || *p != 0)
            fail(Errc::NotAHomomorphism,
                 "image of even generator '" + sym_name(g) + "' is not even");
    }
    return full;
}

SuperPolynomial SuperPolynomial::substitute(const std::map<Sym, SuperPolynomial>& images,
                                            AmbientPtr target) const {
    if (!target) throw std::logic_error("substitute: null target ambient");
    std::map<Sym, SuperPolynomial> full = complete_homomorphism(amb_, images, target);

    HomContext ctx{target, &full};
    SuperPolynomial out(target);
    for (const auto& t : terms_) {
        SuperPolynomial v = subst_scalar(t.coeff, ctx);
        for (std::uint16_t idx : t.gr) v *= full.at(amb_->odds[idx]);
        for (std::size_t k = 0; k < t.wl.size(); ++k)
            for (std::uint16_t j = 0; j < t.wl[k]; ++j) v *= full.at(amb_->weils[k]);
        out += v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

SuperPolynomial SuperPolynomial::evaluate_numeric(const std::map<Sym, Rational>& point) const {
    std::vector<SPTerm> ts;
    for (const auto& t : terms_) {
        Rational v = t.coeff.eval_rational([&](Sym s) -> std::optional<Rational> {
            auto it = point.find(s);
            if (it == point.end()) return std::nullopt;
            return it->second;
        });
        SPTerm nt;
        nt.coeff = ScalarExpr::constant(v);
        nt.gr = t.gr;
        nt.wl = t.wl;
        ts.push_back(std::move(nt));
    }
    return from_terms(amb_, std::move(ts));
}

// ---------------------------------------------------------------------------
// Comparison and printing

int superpoly_cmp(const SuperPolynomial& a, const SuperPolynomial& b) {
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = spkey_cmp(x[i].gr, x[i].wl, y[i].gr, y[i].wl);
        if (c) return c;
        c = scalar_cmp(x[i].coeff, y[i].coeff);
        if (c) return c;
    }
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
}

std::string SuperPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        std::string mono;
        {
            std::ostringstream ms;
            bool started = false;
            for (std::uint16_t idx : t.gr) {
                if (started) ms << "*";
                ms << sym_name(amb_->odds[idx]);
                started = true;
            }
            for (std::size_t k = 0; k < t.wl.size(); ++k) {
                if (t.wl[k] == 0) continue;
                if (started) ms << "*";
                ms << sym_name(amb_->weils[k]);
                if (t.wl[k] > 1) ms << "^" << t.wl[k];
                started = true;
            }
            mono = ms.str();
        }
        if (mono.empty()) {
            // scalar component sorts first; print inline
            os << t.coeff.str();
            first = false;
            continue;
        }
        const auto& ms = t.coeff.monomials();
        bool single = ms.size() == 1;
        if (single) {
            const Monomial& m = ms[0];
            bool neg = sgn(m.coeff) < 0;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            Rational c = neg ? Rational(-m.coeff) : m.coeff;
            std::ostringstream body;
            bool printed = false;
            if (!rat_is_one(c)) {
                body << rat_to_string(c);
                printed = true;
            }
            for (const auto& [atom, e] : m.powers) {
                if (printed) body << "*";
                body << atom.str();
                if (e != 1) body << "^" << e;
                printed = true;
            }
            if (printed) body << "*";
            body << mono;
            os << body.str();
        } else {
            if (!first) os << " + ";
            os << "(" << t.coeff.str() << ")*" << mono;
        }
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const SuperPolynomial& p) {
    os << p.str();
    return os;
}

} // namespace smset
