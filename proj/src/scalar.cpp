#include "smset/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace smset {

const char* elem_fn_name(ElemFn fn) {
    switch (fn) {
        case ElemFn::Sin: return "sin";
        case ElemFn::Cos: return "cos";
        case ElemFn::Exp: return "exp";
        case ElemFn::Log: return "log";
    }
    return "?";
}

Rational rational_pow(const Rational& q, int e) {
    if (e == 0) return Rational(1);
    Rational base = q;
    bool inv = e < 0;
    unsigned n = inv ? static_cast<unsigned>(-(long)e) : static_cast<unsigned>(e);
    if (inv) {
        if (rat_is_zero(base)) fail(Errc::DomainError, "division by zero");
        base = Rational(1) / base;
    }
    Rational acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    acc.canonicalize();
    return acc;
}

// ---------------------------------------------------------------------------
// Atom

Atom Atom::var(Sym v) {
    Atom a;
    a.kind = Kind::Var;
    a.name = v;
    return a;
}

Atom Atom::func(Sym name, std::vector<Sym> args, std::vector<std::uint32_t> derivs) {
    Atom a;
    a.kind = Kind::Func;
    a.name = name;
    a.args = std::move(args);
    if (derivs.empty()) derivs.assign(a.args.size(), 0);
    if (derivs.size() != a.args.size())
        throw std::logic_error("func atom: derivative index length mismatch");
    a.derivs = std::move(derivs);
    return a;
}

Atom Atom::elem(ElemFn fn, const ScalarExpr& arg) {
    Atom a;
    a.kind = Kind::Elem;
    a.fn = fn;
    a.sub = std::make_shared<ScalarExpr>(arg);
    return a;
}

Atom Atom::quot(const ScalarExpr& base) {
    Atom a;
    a.kind = Kind::Quot;
    a.sub = std::make_shared<ScalarExpr>(base);
    return a;
}

std::string Atom::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Var:
            os << sym_name(name);
            break;
        case Kind::Func: {
            bool plain = true;
            for (auto d : derivs)
                if (d != 0) plain = false;
            if (plain) {
                os << sym_name(name);
            } else {
                os << "D[" << sym_name(name);
                for (std::size_t i = 0; i < args.size(); ++i)
                    for (std::uint32_t j = 0; j < derivs[i]; ++j) os << "," << sym_name(args[i]);
                os << "]";
            }
            break;
        }
        case Kind::Elem:
            os << elem_fn_name(fn) << "(" << sub->str() << ")";
            break;
        case Kind::Quot:
            os << "(" << sub->str() << ")";
            break;
    }
    return os.str();
}

static int vec_sym_cmp(const std::vector<Sym>& a, const std::vector<Sym>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = sym_name(a[i]).compare(sym_name(b[i]));
        if (c) return c < 0 ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int atom_cmp(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case Atom::Kind::Var: {
            int c = sym_name(a.name).compare(sym_name(b.name));
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Atom::Kind::Func: {
            int c = sym_name(a.name).compare(sym_name(b.name));
            if (c) return c < 0 ? -1 : 1;
            c = vec_sym_cmp(a.args, b.args);
            if (c) return c;
            if (a.derivs != b.derivs) return a.derivs < b.derivs ? -1 : 1;
            return 0;
        }
        case Atom::Kind::Elem:
            if (a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
            return scalar_cmp(*a.sub, *b.sub);
        case Atom::Kind::Quot:
            return scalar_cmp(*a.sub, *b.sub);
    }
    return 0;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [a, e] : powers) {
        (void)a;
        d += e;
    }
    return d;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    std::size_t n = std::min(a.powers.size(), b.powers.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = atom_cmp(a.powers[i].first, b.powers[i].first);
        if (c) return c;
        if (a.powers[i].second != b.powers[i].second)
            return a.powers[i].second < b.powers[i].second ? -1 : 1;
    }
    if (a.powers.size() != b.powers.size()) return a.powers.size() < b.powers.size() ? -1 : 1;
    return 0;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Sort and merge a raw power list; returns false if the monomial vanished
// (never happens here) — fixups that change the sum shape are handled by the
// caller via expand requests.
void sort_merge_powers(std::vector<std::pair<Atom, int>>& ps) {
    std::sort(ps.begin(), ps.end(),
              [](const auto& x, const auto& y) { return atom_cmp(x.first, y.first) < 0; });
    std::vector<std::pair<Atom, int>> out;
    out.reserve(ps.size());
    for (auto& p : ps) {
        if (!out.empty() && atom_cmp(out.back().first, p.first) == 0)
            out.back().second += p.second;
        else
            out.push_back(std::move(p));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }),
              out.end());
    ps = std::move(out);
}

} // namespace

ScalarExpr ScalarExpr::from_monomials(std::vector<Monomial> ms) {
    // Fixups that keep every monomial a genuine monomial: exp-product merge
    // and expansion of positive powers of Quot bases.
    std::vector<Monomial> pending = std::move(ms);
    ScalarExpr acc;
    std::vector<Monomial> clean;
    for (auto& m : pending) {
        if (rat_is_zero(m.coeff)) continue;
        sort_merge_powers(m.powers);

        // exp(a)^j * exp(b)^k  ->  exp(j*a + k*b)
        ScalarExpr exp_arg;
        bool has_exp = false;
        std::vector<std::pair<Atom, int>> rest;
        std::vector<std::pair<ScalarExpr, int>> expand; // positive powers of Quot bases
        for (auto& p : m.powers) {
            if (p.first.kind == Atom::Kind::Elem && p.first.fn == ElemFn::Exp) {
                exp_arg += p.first.sub->scaled(Rational(p.second));
                has_exp = true;
            } else if (p.first.kind == Atom::Kind::Quot && p.second > 0) {
                expand.emplace_back(*p.first.sub, p.second);
            } else {
                rest.push_back(p);
            }
        }
        if (has_exp && !exp_arg.is_zero())
            rest.emplace_back(Atom::elem(ElemFn::Exp, exp_arg), 1);
        m.powers = std::move(rest);
        sort_merge_powers(m.powers);
        if (!expand.empty()) {
            Monomial base_m;
            base_m.coeff = m.coeff;
            base_m.powers = m.powers;
            ScalarExpr partial = ScalarExpr::from_monomials({base_m});
            for (const auto& [base, e] : expand) partial *= base.pow(e);
            acc += partial;
            continue;
        }
        clean.push_back(std::move(m));
    }

    std::sort(clean.begin(), clean.end(),
              [](const Monomial& x, const Monomial& y) { return mono_cmp(x, y) < 0; });
    std::vector<Monomial> merged;
    merged.reserve(clean.size());
    for (auto& m : clean) {
        if (!merged.empty() && mono_cmp(merged.back(), m) == 0)
            merged.back().coeff += m.coeff;
        else
            merged.push_back(std::move(m));
    }
    merged.erase(
        std::remove_if(merged.begin(), merged.end(),
                       [](const Monomial& m) { return rat_is_zero(m.coeff); }),
        merged.end());

    ScalarExpr r;
    r.terms_ = std::move(merged);
    if (!acc.is_zero()) r += acc;
    return r;
}

// ---------------------------------------------------------------------------
// Constructors

ScalarExpr ScalarExpr::constant(const Rational& q) {
    ScalarExpr e;
    if (!rat_is_zero(q)) {
        Monomial m;
        m.coeff = q;
        e.terms_.push_back(std::move(m));
    }
    return e;
}

ScalarExpr ScalarExpr::integer(long n) { return constant(Rational(n)); }

ScalarExpr ScalarExpr::variable(Sym v) { return from_atom(Atom::var(v)); }

ScalarExpr ScalarExpr::variable(const std::string& name) { return variable(intern(name)); }

ScalarExpr ScalarExpr::func(Sym name, std::vector<Sym> args, std::vector<std::uint32_t> derivs) {
    return from_atom(Atom::func(name, std::move(args), std::move(derivs)));
}

ScalarExpr ScalarExpr::from_atom(const Atom& a, int exp) {
    if (exp == 0) return one();
    Monomial m;
    m.coeff = 1;
    m.powers.emplace_back(a, exp);
    return from_monomials({std::move(m)});
}

// ---------------------------------------------------------------------------
// Queries

bool ScalarExpr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].powers.empty());
}

std::optional<Rational> ScalarExpr::as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].powers.empty()) return terms_[0].coeff;
    return std::nullopt;
}

bool ScalarExpr::is_variable(Sym v) const {
    return terms_.size() == 1 && rat_is_one(terms_[0].coeff) && terms_[0].powers.size() == 1 &&
           terms_[0].powers[0].second == 1 && terms_[0].powers[0].first.kind == Atom::Kind::Var &&
           terms_[0].powers[0].first.name == v;
}

// ---------------------------------------------------------------------------
// Arithmetic

ScalarExpr ScalarExpr::operator-() const { return scaled(Rational(-1)); }

ScalarExpr ScalarExpr::scaled(const Rational& q) const {
    if (rat_is_zero(q)) return ScalarExpr();
    ScalarExpr r = *this;
    for (auto& m : r.terms_) m.coeff *= q;
    return r;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    std::vector<Monomial> ms;
    ms.reserve(a.terms_.size() + b.terms_.size());
    ms.insert(ms.end(), a.terms_.begin(), a.terms_.end());
    ms.insert(ms.end(), b.terms_.begin(), b.terms_.end());
    return ScalarExpr::from_monomials(std::move(ms));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    std::vector<Monomial> ms;
    ms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) {
            Monomial m;
            m.coeff = x.coeff * y.coeff;
            m.powers.reserve(x.powers.size() + y.powers.size());
            m.powers.insert(m.powers.end(), x.powers.begin(), x.powers.end());
            m.powers.insert(m.powers.end(), y.powers.begin(), y.powers.end());
            ms.push_back(std::move(m));
        }
    return ScalarExpr::from_monomials(std::move(ms));
}

ScalarExpr& ScalarExpr::operator+=(const ScalarExpr& o) { return *this = *this + o; }
ScalarExpr& ScalarExpr::operator-=(const ScalarExpr& o) { return *this = *this - o; }
ScalarExpr& ScalarExpr::operator*=(const ScalarExpr& o) { return *this = *this * o; }

ScalarExpr ScalarExpr::pow(int e) const {
    if (e == 0) return one();
    if (e > 0) {
        ScalarExpr acc = one();
        ScalarExpr base = *this;
        unsigned n = static_cast<unsigned>(e);
        while (n) {
            if (n & 1) acc *= base;
            if (n >>= 1) base *= base;
        }
        return acc;
    }
    // negative exponent: invert
    if (is_zero()) fail(Errc::DomainError, "division by zero expression");
    if (terms_.size() == 1) {
        const Monomial& m = terms_[0];
        Monomial r;
        r.coeff = rational_pow(m.coeff, e);
        for (const auto& [a, k] : m.powers) r.powers.emplace_back(a, k * e);
        return from_monomials({std::move(r)});
    }
    return from_atom(Atom::quot(*this), e);
}

// ---------------------------------------------------------------------------
// Derivative

static ScalarExpr atom_derivative(const Atom& a, Sym var);

ScalarExpr ScalarExpr::derivative(Sym var) const {
    ScalarExpr out;
    for (const auto& m : terms_) {
        for (std::size_t i = 0; i < m.powers.size(); ++i) {
            const auto& [atom, e] = m.powers[i];
            ScalarExpr da = atom_derivative(atom, var);
            if (da.is_zero()) continue;
            Monomial rest;
            rest.coeff = m.coeff * Rational(e);
            for (std::size_t j = 0; j < m.powers.size(); ++j) {
                if (j == i) {
                    if (e != 1) rest.powers.emplace_back(atom, e - 1);
                } else {
                    rest.powers.push_back(m.powers[j]);
                }
            }
            out += from_monomials({std::move(rest)}) * da;
        }
    }
    return out;
}

static ScalarExpr atom_derivative(const Atom& a, Sym var) {
    switch (a.kind) {
        case Atom::Kind::Var:
            return a.name == var ? ScalarExpr::one() : ScalarExpr();
        case Atom::Kind::Func: {
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                if (a.args[i] == var) {
                    Atom d = a;
                    d.derivs[i] += 1;
                    return ScalarExpr::from_atom(d);
                }
            }
            return ScalarExpr();
        }
        case Atom::Kind::Elem: {
            ScalarExpr inner = a.sub->derivative(var);
            if (inner.is_zero()) return ScalarExpr();
            return elem_derivative(a.fn, *a.sub, 1) * inner;
        }
        case Atom::Kind::Quot:
            return a.sub->derivative(var);
    }
    return ScalarExpr();
}

// ---------------------------------------------------------------------------
// Elementary functions

ScalarExpr elem_apply(ElemFn fn, const ScalarExpr& arg) {
    if (auto c = arg.as_constant()) {
        if (rat_is_zero(*c)) {
            switch (fn) {
                case ElemFn::Sin: return ScalarExpr();
                case ElemFn::Cos: return ScalarExpr::one();
                case ElemFn::Exp: return ScalarExpr::one();
                case ElemFn::Log: fail(Errc::DomainError, "log(0)");
            }
        }
        if (rat_is_one(*c) && fn == ElemFn::Log) return ScalarExpr();
    }
    return ScalarExpr::from_atom(Atom::elem(fn, arg));
}

ScalarExpr sin(const ScalarExpr& a) { return elem_apply(ElemFn::Sin, a); }
ScalarExpr cos(const ScalarExpr& a) { return elem_apply(ElemFn::Cos, a); }
ScalarExpr exp(const ScalarExpr& a) { return elem_apply(ElemFn::Exp, a); }
ScalarExpr log(const ScalarExpr& a) { return elem_apply(ElemFn::Log, a); }

ScalarExpr elem_derivative(ElemFn fn, const ScalarExpr& arg, int j) {
    if (j < 0) throw std::logic_error("elem_derivative: negative order");
    switch (fn) {
        case ElemFn::Sin: {
            static const int sign[4] = {1, 1, -1, -1};
            bool use_sin = (j % 2) == 0;
            ScalarExpr e = use_sin ? sin(arg) : cos(arg);
            return sign[j % 4] > 0 ? e : -e;
        }
        case ElemFn::Cos: {
            static const int sign[4] = {1, -1, -1, 1};
            bool use_cos = (j % 2) == 0;
            ScalarExpr e = use_cos ? cos(arg) : sin(arg);
            return sign[j % 4] > 0 ? e : -e;
        }
        case ElemFn::Exp:
            return exp(arg);
        case ElemFn::Log: {
            if (j == 0) return log(arg);
            // (-1)^(j-1) (j-1)! arg^(-j)
            Rational c(1);
            for (int i = 1; i < j; ++i) c *= Rational(i);
            if (((j - 1) % 2) == 1) c = -c;
            return arg.pow(-j).scaled(c);
        }
    }
    return ScalarExpr();
}

// ---------------------------------------------------------------------------
// Substitution

ScalarExpr ScalarExpr::substitute_var(Sym var, const ScalarExpr& image) const {
    std::map<Sym, ScalarExpr> m;
    m.emplace(var, image);
    return substitute_vars(m);
}

static ScalarExpr atom_substituted(const Atom& a, const std::map<Sym, ScalarExpr>& images, int exp);

ScalarExpr ScalarExpr::substitute_vars(const std::map<Sym, ScalarExpr>& images) const {
    ScalarExpr out;
    for (const auto& m : terms_) {
        ScalarExpr term = constant(m.coeff);
        for (const auto& [a, e] : m.powers) term *= atom_substituted(a, images, e);
        out += term;
    }
    return out;
}

static ScalarExpr atom_substituted(const Atom& a, const std::map<Sym, ScalarExpr>& images,
                                   int exp) {
    switch (a.kind) {
        case Atom::Kind::Var: {
            auto it = images.find(a.name);
            if (it == images.end()) return ScalarExpr::from_atom(a, exp);
            return it->second.pow(exp);
        }
        case Atom::Kind::Func: {
            Atom na = a;
            bool touched = false;
            for (std::size_t i = 0; i < na.args.size(); ++i) {
                auto it = images.find(na.args[i]);
                if (it == images.end()) continue;
                const ScalarExpr& img = it->second;
                // Only a plain renaming keeps an opaque application meaningful.
                bool renamed = false;
                if (img.monomials().size() == 1) {
                    const Monomial& m = img.monomials()[0];
                    if (rat_is_one(m.coeff) && m.powers.size() == 1 &&
                        m.powers[0].second == 1 &&
                        m.powers[0].first.kind == Atom::Kind::Var) {
                        na.args[i] = m.powers[0].first.name;
                        renamed = true;
                    }
                }
                if (!renamed)
                    fail(Errc::Unsupported,
                         "cannot substitute a non-variable expression into argument '" +
                             sym_name(na.args[i]) + "' of opaque function '" + sym_name(na.name) +
                             "'");
                touched = true;
            }
            (void)touched;
            return ScalarExpr::from_atom(na, exp);
        }
        case Atom::Kind::Elem: {
            ScalarExpr arg = a.sub->substitute_vars(images);
            return elem_apply(a.fn, arg).pow(exp);
        }
        case Atom::Kind::Quot: {
            ScalarExpr base = a.sub->substitute_vars(images);
            return base.pow(exp);
        }
    }
    return ScalarExpr();
}

ScalarExpr ScalarExpr::substitute_func(Sym fname, const std::vector<Sym>& params,
                                       const ScalarExpr& body) const {
    ScalarExpr out;
    for (const auto& m : terms_) {
        ScalarExpr term = constant(m.coeff);
        for (const auto& [a, e] : m.powers) {
            if (a.kind == Atom::Kind::Func && a.name == fname) {
                if (a.args.size() != params.size())
                    fail(Errc::Unsupported, "arity mismatch replacing function '" +
                                                sym_name(fname) + "'");
                ScalarExpr val = body;
                for (std::size_t i = 0; i < params.size(); ++i)
                    for (std::uint32_t j = 0; j < a.derivs[i]; ++j)
                        val = val.derivative(params[i]);
                std::map<Sym, ScalarExpr> rename;
                for (std::size_t i = 0; i < params.size(); ++i)
                    if (params[i] != a.args[i]) rename.emplace(params[i], variable(a.args[i]));
                if (!rename.empty()) val = val.substitute_vars(rename);
                term *= val.pow(e);
            } else if (a.kind == Atom::Kind::Elem) {
                ScalarExpr arg = a.sub->substitute_func(fname, params, body);
                term *= elem_apply(a.fn, arg).pow(e);
            } else if (a.kind == Atom::Kind::Quot) {
                ScalarExpr base = a.sub->substitute_func(fname, params, body);
                term *= base.pow(e);
            } else {
                term *= from_atom(a, e);
            }
        }
        out += term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Variable bookkeeping

bool ScalarExpr::depends_on(Sym var) const {
    for (const auto& m : terms_)
        for (const auto& [a, e] : m.powers) {
            (void)e;
            switch (a.kind) {
                case Atom::Kind::Var:
                    if (a.name == var) return true;
                    break;
                case Atom::Kind::Func:
                    for (Sym s : a.args)
                        if (s == var) return true;
                    break;
                case Atom::Kind::Elem:
                case Atom::Kind::Quot:
                    if (a.sub->depends_on(var)) return true;
                    break;
            }
        }
    return false;
}

void ScalarExpr::collect_vars(std::set<Sym>& out) const {
    for (const auto& m : terms_)
        for (const auto& [a, e] : m.powers) {
            (void)e;
            switch (a.kind) {
                case Atom::Kind::Var:
                    out.insert(a.name);
                    break;
                case Atom::Kind::Func:
                    out.insert(a.args.begin(), a.args.end());
                    break;
                case Atom::Kind::Elem:
                case Atom::Kind::Quot:
                    a.sub->collect_vars(out);
                    break;
            }
        }
}

void ScalarExpr::collect_funcs(std::set<Sym>& out) const {
    for (const auto& m : terms_)
        for (const auto& [a, e] : m.powers) {
            (void)e;
            if (a.kind == Atom::Kind::Func) out.insert(a.name);
            if (a.kind == Atom::Kind::Elem || a.kind == Atom::Kind::Quot)
                a.sub->collect_funcs(out);
        }
}

bool ScalarExpr::is_polynomial_in(const std::vector<Sym>& vars) const {
    auto is_tracked = [&](Sym s) {
        return std::find(vars.begin(), vars.end(), s) != vars.end();
    };
    for (const auto& m : terms_)
        for (const auto& [a, e] : m.powers) {
            switch (a.kind) {
                case Atom::Kind::Var:
                    if (is_tracked(a.name) && e < 0) return false;
                    break;
                case Atom::Kind::Func:
                    for (Sym s : a.args)
                        if (is_tracked(s)) return false;
                    break;
                case Atom::Kind::Elem:
                case Atom::Kind::Quot:
                    for (Sym s : vars)
                        if (a.sub->depends_on(s)) return false;
                    break;
            }
        }
    return true;
}

int ScalarExpr::degree_in(Sym var) const {
    int deg = 0;
    for (const auto& m : terms_)
        for (const auto& [a, e] : m.powers)
            if (a.kind == Atom::Kind::Var && a.name == var) deg = std::max(deg, e);
    return deg;
}

// ---------------------------------------------------------------------------
// Evaluation

Rational ScalarExpr::eval_rational(
    const std::function<std::optional<Rational>(Sym)>& point) const {
    Rational total(0);
    for (const auto& m : terms_) {
        Rational v = m.coeff;
        for (const auto& [a, e] : m.powers) {
            switch (a.kind) {
                case Atom::Kind::Var: {
                    auto x = point(a.name);
                    if (!x)
                        fail(Errc::UnknownGenerator,
                             "no value assigned to '" + sym_name(a.name) + "'");
                    v *= rational_pow(*x, e);
                    break;
                }
                case Atom::Kind::Func:
                    fail(Errc::Unsupported, "opaque function '" + sym_name(a.name) +
                                                "' has no numeric value");
                case Atom::Kind::Elem: {
                    Rational arg = a.sub->eval_rational(point);
                    double x = rat_to_double(arg);
                    double y = 0;
                    switch (a.fn) {
                        case ElemFn::Sin: y = std::sin(x); break;
                        case ElemFn::Cos: y = std::cos(x); break;
                        case ElemFn::Exp: y = std::exp(x); break;
                        case ElemFn::Log:
                            if (!(x > 0)) fail(Errc::DomainError, "log of non-positive value");
                            y = std::log(x);
                            break;
                    }
                    v *= rational_pow(rat_from_double(y), e);
                    break;
                }
                case Atom::Kind::Quot: {
                    Rational base = a.sub->eval_rational(point);
                    v *= rational_pow(base, e);
                    break;
                }
            }
        }
        total += v;
    }
    total.canonicalize();
    return total;
}

double ScalarExpr::eval_double(const std::function<double(Sym)>& point) const {
    double total = 0;
    for (const auto& m : terms_) {
        double v = rat_to_double(m.coeff);
        for (const auto& [a, e] : m.powers) {
            double x = 0;
            switch (a.kind) {
                case Atom::Kind::Var:
                    x = point(a.name);
                    break;
                case Atom::Kind::Func:
                    fail(Errc::Unsupported, "opaque function '" + sym_name(a.name) +
                                                "' has no numeric value");
                case Atom::Kind::Elem: {
                    double arg = a.sub->eval_double(point);
                    switch (a.fn) {
                        case ElemFn::Sin: x = std::sin(arg); break;
                        case ElemFn::Cos: x = std::cos(arg); break;
                        case ElemFn::Exp: x = std::exp(arg); break;
                        case ElemFn::Log:
                            if (!(arg > 0)) fail(Errc::DomainError, "log of non-positive value");
                            x = std::log(arg);
                            break;
                    }
                    break;
                }
                case Atom::Kind::Quot:
                    x = a.sub->eval_double(point);
                    break;
            }
            v *= std::pow(x, e);
        }
        total += v;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Comparison and printing

int scalar_cmp(const ScalarExpr& a, const ScalarExpr& b) {
    const auto& x = a.monomials();
    const auto& y = b.monomials();
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = mono_cmp(x[i], y[i]);
        if (c) return c;
        c = rat_cmp(x[i].coeff, y[i].coeff);
        if (c) return c < 0 ? -1 : 1;
    }
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
}

static void print_monomial_body(std::ostream& os, const Monomial& m, bool with_coeff_sign) {
    Rational c = m.coeff;
    if (!with_coeff_sign && sgn(c) < 0) c = -c;
    bool printed = false;
    if (m.powers.empty()) {
        os << rat_to_string(c);
        return;
    }
    if (!rat_is_one(c)) {
        os << rat_to_string(c);
        printed = true;
    }
    for (const auto& [a, e] : m.powers) {
        if (printed) os << "*";
        os << a.str();
        if (e != 1) os << "^" << e;
        printed = true;
    }
}

void ScalarExpr::print(std::ostream& os) const {
    if (terms_.empty()) {
        os << "0";
        return;
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Monomial& m = terms_[i];
        if (i == 0) {
            if (sgn(m.coeff) < 0) os << "-";
            print_monomial_body(os, m, false);
        } else {
            os << (sgn(m.coeff) < 0 ? " - " : " + ");
            print_monomial_body(os, m, false);
        }
    }
}

std::string ScalarExpr::str() const {
    std::ostringstream os;
    print(os);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ScalarExpr& e) {
    e.print(os);
    return os;
}

} // namespace smset
