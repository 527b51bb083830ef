#include "smset/sampling.hpp"

#include <algorithm>

namespace smset {

ScalarExpr random_polynomial(Rng& rng, const std::vector<Sym>& vars, int max_degree,
                             int max_terms) {
    ScalarExpr e;
    long nterms = rng.int_in(1, max_terms);
    for (long t = 0; t < nterms; ++t) {
        ScalarExpr mono = ScalarExpr::constant(rng.small_rational());
        if (!vars.empty()) {
            long deg = rng.int_in(0, max_degree);
            for (long d = 0; d < deg; ++d) {
                Sym v = vars[rng.below(vars.size())];
                mono *= ScalarExpr::variable(v);
            }
        }
        e += mono;
    }
    return e;
}

SuperPolynomial random_superpoly(Rng& rng, const AmbientPtr& amb, int parity, int max_degree,
                                 int max_terms) {
    std::vector<SPTerm> ts;
    long nterms = rng.int_in(1, max_terms);
    for (long t = 0; t < nterms; ++t) {
        SPTerm term;
        term.coeff = random_polynomial(rng, amb->evens, max_degree, 2);
        // odd monomial of the requested parity
        const std::size_t q = amb->odds.size();
        std::vector<std::uint16_t> pool(q);
        for (std::size_t i = 0; i < q; ++i) pool[i] = static_cast<std::uint16_t>(i);
        std::size_t want = q ? rng.below(q + 1) : 0;
        if (parity >= 0 && q > 0) {
            if (static_cast<int>(want % 2) != parity) {
                if (want + 1 <= q && static_cast<int>((want + 1) % 2) == parity)
                    ++want;
                else if (want >= 1)
                    --want;
            }
            if (static_cast<int>(want % 2) != parity) want = static_cast<std::size_t>(parity);
        }
        if (parity == 1 && q == 0) return SuperPolynomial::zero(amb); // only zero is odd
        for (std::size_t pick = 0; pick < want && !pool.empty(); ++pick) {
            std::size_t i = rng.below(pool.size());
            term.gr.push_back(pool[i]);
            pool.erase(pool.begin() + static_cast<long>(i));
        }
        std::sort(term.gr.begin(), term.gr.end());
        // weil exponents within the truncation
        if (!amb->weils.empty()) {
            term.wl.assign(amb->weils.size(), 0);
            std::uint32_t budget = rng.below(amb->weil_order + 1);
            for (std::uint32_t b = 0; b < budget; ++b)
                term.wl[rng.below(term.wl.size())] += 1;
        }
        ts.push_back(std::move(term));
    }
    return SuperPolynomial::from_terms(amb, std::move(ts));
}

} // namespace smset
