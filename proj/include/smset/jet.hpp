#pragma once

#include "smset/form.hpp"
#include "smset/probe.hpp"

namespace smset {

/// Multi-index of base-coordinate derivatives, kept sorted (symmetric
/// derivatives are identified).
using MultiIndex = std::vector<std::uint8_t>;

/// Coordinates on the order-n jet space of a field bundle: the base
/// coordinates together with one generator per (component, multi-index),
/// inheriting the component's parity. Generators are named like the
/// corresponding derivative expressions, so printed output parses back.
struct JetSpace {
    FieldSpaceDescriptor descriptor;
    int order = 0;
    AmbientPtr ambient;

    struct JetCoord {
        Sym sym = 0;
        Sym component = 0;
        MultiIndex index;
        int parity = 0;
    };
    std::vector<JetCoord> coords; // all jet coordinates, deterministic order

    static JetSpace make(const FieldSpaceDescriptor& descriptor, int order);

    Sym jet_sym(Sym component, const MultiIndex& index) const;
    const JetCoord* find(Sym generator) const;
    bool is_base_coord(Sym s) const;
    std::string str() const;
};

/// Symbolic expression in jet coordinates; lives over JetSpace::ambient.
using JetExpr = SuperPolynomial;

/// D_mu e = de/dx^mu + sum over (a, I) of u^a_{I+mu} * (left d e / d u^a_I).
/// Throws OrderBoundExceeded when a required coordinate is outside the space.
JetExpr total_derivative(const JetSpace& js, const JetExpr& e, Sym mu);

/// Same, extending the jet space when the bound would be exceeded.
std::pair<JetSpace, JetExpr> total_derivative_raising(const JetSpace& js, const JetExpr& e,
                                                      Sym mu);

struct LagrangianSpec {
    FieldSpaceDescriptor descriptor;
    JetSpace space;
    JetExpr density; // even parity
    int order = 0;   // highest |I| occurring in the density

    static LagrangianSpec make(const FieldSpaceDescriptor& descriptor, const JetSpace& space,
                               const JetExpr& density);
};

/// One covector-density entry per field component.
struct ELDensity {
    JetSpace space;
    std::map<Sym, JetExpr> components;
    std::string str() const;
};

/// EL_a = sum over |I| <= n of (-1)^|I| D_I (left d Lbar / d u^a_I).
ELDensity euler_lagrange(const LagrangianSpec& spec);

/// Jet prolongation of a plot: u^a_I evaluated as the I-th base derivative of
/// the component, probe parameters held fixed.
std::map<Sym, SuperPolynomial> prolong(const JetSpace& js, const PlotHom& plot);

/// Evaluate a jet expression on a plot (the composite with the prolongation).
SuperPolynomial apply_on_plot(const JetSpace& js, const JetExpr& e, const PlotHom& plot);

/// Action over a box: integrate the density composed with the prolongation;
/// the result is a function of the probe.
SuperPolynomial action_on_plot(const LagrangianSpec& spec, const PlotHom& plot, const Box& box);

struct VariationPlot {
    PlotHom base;
    std::map<Sym, SuperPolynomial> velocity; // per component, matching parity

    static VariationPlot make(PlotHom base, std::map<Sym, SuperPolynomial> velocity);
};

struct FirstVariation {
    SuperPolynomial value;    // integral of the EL pairing against the velocity
    SuperPolynomial boundary; // the discarded total-derivative contribution
};

/// Symbolic integration by parts of the linearized density; `value` plus
/// `boundary` equals the derivative of the action along base + s * velocity.
FirstVariation first_variation(const LagrangianSpec& spec, const VariationPlot& vp,
                               const Box& box);

struct CriticalityResult {
    bool critical = false;
    std::map<Sym, SuperPolynomial> residual; // per component, over the plot ambient
};

CriticalityResult is_critical_plot(const LagrangianSpec& spec, const PlotHom& plot);

// --- discretization oracle ----------------------------------------------------

struct ElOracleOptions {
    double grid_h = 1e-2;
    double step = 1e-4;
    double tolerance = 1e-3; // relative, scale max(|a|,|b|,1)
    std::size_t samples = 20;
    std::uint64_t seed = 1;
};

struct ElOracleRow {
    std::size_t sample = 0;
    double max_deviation = 0; // worst relative deviation over interior nodes
    bool ok = true;
    std::string lagrangian;
    std::string plot;
};

struct ElOracleReport {
    ElOracleOptions options;
    std::vector<ElOracleRow> rows;
    bool ok() const {
        for (const auto& r : rows)
            if (!r.ok) return false;
        return true;
    }
    double worst() const {
        double w = 0;
        for (const auto& r : rows) w = std::max(w, r.max_deviation);
        return w;
    }
};

/// Random 1D first-order even polynomial Lagrangians and plots; compares the
/// symbolic EL density per interior grid node against a central finite
/// difference of the forward-difference discretized action.
ElOracleReport run_el_oracle(const ElOracleOptions& options);

/// Random first-order 1D even Lagrangian over a single even field u(t).
LagrangianSpec random_lagrangian_1d(Rng& rng);

} // namespace smset
