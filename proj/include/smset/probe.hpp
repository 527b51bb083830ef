#pragma once

#include "smset/random.hpp"
#include "smset/superpoly.hpp"

#include <functional>
#include <optional>

namespace smset {

/// A probe object: k commuting coordinates, q anticommuting coordinates and
/// an m-dimensional infinitesimal thickening of order r.
struct ProbeSpace {
    std::uint32_t k = 0, q = 0, m = 0, r = 0;
    AmbientPtr ambient; // over exactly the probe generators

    static ProbeSpace make(std::uint32_t k, std::uint32_t q, std::uint32_t m = 0,
                           std::uint32_t r = 0, const std::string& prefix = "");
    static ProbeSpace with_names(std::vector<Sym> evens, std::vector<Sym> odds,
                                 std::vector<Sym> weils = {}, std::uint32_t r = 0);

    bool same_shape(const ProbeSpace& o) const { return same_signature(ambient, o.ambient); }
    ProbeSpace reduced() const; // (k,0,0,0) with the same even names
    std::string str() const;
};

/// Morphism of probes, recorded dually: each generator of the target maps to
/// an element over the source ambient, preserving parity.
struct ProbeMap {
    ProbeSpace source;
    ProbeSpace target;
    std::map<Sym, SuperPolynomial> assignment; // complete over target generators

    static ProbeMap make(const ProbeSpace& source, const ProbeSpace& target,
                         const std::map<Sym, SuperPolynomial>& assignment);
    static ProbeMap identity(const ProbeSpace& p);
    /// Inclusion of the reduced probe: odd and weil generators map to zero.
    static ProbeMap reduced_inclusion(const ProbeSpace& p);
};

/// f after g (as maps of probes): g : S'' -> S', f : S' -> S.
ProbeMap compose(const ProbeMap& f, const ProbeMap& g);

struct FieldComponent {
    Sym name = 0;
    int parity = 0; // 0 even, 1 odd
};

struct FieldSpaceDescriptor {
    std::vector<Sym> coords;              // base coordinates, dimension d
    std::vector<FieldComponent> fields;
    std::vector<ScalarExpr> constraints;  // polynomial relations among components (== 0)

    static FieldSpaceDescriptor make(std::vector<Sym> coords, std::vector<FieldComponent> fields,
                                     std::vector<ScalarExpr> constraints = {});
    const FieldComponent* find(Sym name) const;
    std::string str() const;
};

bool same_descriptor(const FieldSpaceDescriptor& a, const FieldSpaceDescriptor& b);

/// The ambient a plot's component expressions live over: probe generators
/// together with the base coordinates.
AmbientPtr plot_ambient(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor);

/// A probe-shaped plot of a field space: per component a parity-correct
/// element over plot_ambient, satisfying the descriptor's constraints
/// identically.
struct PlotHom {
    ProbeSpace probe;
    FieldSpaceDescriptor descriptor;
    AmbientPtr ambient;
    std::map<Sym, SuperPolynomial> components;

    static PlotHom make(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor,
                        std::map<Sym, SuperPolynomial> components);
    static PlotHom zero(const ProbeSpace& probe, const FieldSpaceDescriptor& descriptor);
    std::string str() const;
};

bool operator==(const PlotHom& a, const PlotHom& b);
inline bool operator!=(const PlotHom& a, const PlotHom& b) { return !(a == b); }

/// Precomposition with a map of probes: probe generators are rewritten
/// through f, base coordinates stay fixed.
PlotHom pullback_plot(const PlotHom& plot, const ProbeMap& f);

// --- functor-law verification ------------------------------------------------

struct FunctorFailure {
    std::size_t sample = 0;
    std::string law;    // "identity" or "composition"
    std::string detail;
};

struct FunctorReport {
    std::size_t samples = 0;
    std::vector<FunctorFailure> failures;
    bool ok() const { return failures.empty(); }
};

using PullbackFn = std::function<PlotHom(const PlotHom&, const ProbeMap&)>;

FunctorReport check_functoriality(const FieldSpaceDescriptor& descriptor, std::size_t samples,
                                  std::uint64_t seed);
/// Same, with a replaceable pullback (fault-injection hook for tests).
FunctorReport check_functoriality_with(const FieldSpaceDescriptor& descriptor,
                                       std::size_t samples, std::uint64_t seed,
                                       const PullbackFn& pullback);

// --- gluing ------------------------------------------------------------------

struct Box {
    std::vector<Rational> lo, hi; // axis-aligned, open
    std::size_t dim() const { return lo.size(); }
    static Box make(std::vector<Rational> lo, std::vector<Rational> hi);
    bool contains(const std::vector<Rational>& p) const;
    std::optional<Box> intersect(const Box& o) const;
    std::string str() const;
};

struct PlotPiece {
    Box box;
    PlotHom plot;
};

/// Restriction is just a box tag on polynomial data.
PlotPiece restrict_plot(const PlotHom& plot, const Box& box);

/// Unique gluing of polynomial-coefficient pieces that agree on overlaps and
/// cover `reference`. Throws GluingObstruction / CoverageError otherwise.
PlotHom glue_plots(const std::vector<PlotPiece>& pieces, const Box& reference);

// --- yoneda ------------------------------------------------------------------

/// Interpret a plot as the natural transformation it induces and evaluate the
/// component at the identity; the result must be the original plot.
PlotHom yoneda_roundtrip(const PlotHom& plot);

/// Representable case: a probe map read as a plot of its target probe, round
/// tripped through the same bijection.
ProbeMap yoneda_roundtrip_representable(const ProbeMap& f);

// --- random generation (seed-reproducible) -----------------------------------

ProbeSpace random_probe(Rng& rng, std::uint32_t max_k = 2, std::uint32_t max_q = 2,
                        std::uint32_t max_m = 1, std::uint32_t weil_order = 1,
                        const std::string& prefix = "rp");
ProbeMap random_probe_map(Rng& rng, const ProbeSpace& source, const ProbeSpace& target);
PlotHom random_plot(Rng& rng, const FieldSpaceDescriptor& descriptor, const ProbeSpace& probe,
                    int max_degree = 2);

} // namespace smset
