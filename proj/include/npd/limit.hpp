#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "npd/coupling.hpp"
#include "npd/curve.hpp"
#include "npd/matching.hpp"

namespace npd {

// The 2^level dyadic angles k 2π / 2^level; nested across levels.
struct DenseGrid {
    unsigned level = 0;
    std::vector<double> thetas;

    static DenseGrid dyadic(unsigned level);
    double spacing() const { return two_pi / static_cast<double>(thetas.size()); }
};

// Piecewise-linear parameter map X -> Y induced by a coupling: the staircase
// through the sample points (theta_i, theta_j), closed up around the torus.
// Over a vertical run the value is the midpoint of the run.
class CouplingMap {
public:
    CouplingMap(const MonotoneCoupling& coupling, const SampledCurve& x, const SampledCurve& y);

    double operator()(double theta) const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct RhoEntry {
    double source;
    double image;
    double residual;  // angular diameter of the trailing window
    bool converged;
};

// Limit relation on a dense grid: forward pairs (x, y_x) for x on the X grid,
// backward pairs (x_y, y) for y on the Y grid.
struct RelationRho {
    DenseGrid grid;
    Orientation orientation = Orientation::preserving;
    double tolerance = 0.0;
    std::size_t window = 0;
    std::vector<RhoEntry> forward;
    std::vector<RhoEntry> backward;

    bool fully_converged() const;
    std::size_t flagged_count() const;
};

RelationRho run_sequence_on_grid(std::span<const MonotoneCoupling> sequence, const SampledCurve& x,
                                 const SampledCurve& y, const DenseGrid& grid, double tol);

// Largest |phi(x) - psi(y)| over the stored pairs.
double max_value_gap(const RelationRho& rho, const SampledCurve& x, const SampledCurve& y);

struct ModulusRow {
    double eta;
    double forward_eps;   // worst d_Y over pairs with d_X <= eta
    double backward_eps;  // worst d_X over pairs with d_Y <= eta
};

struct LemmaFailure {
    std::string property;   // "ii" or "iii"
    std::string direction;  // "forward" (sources on X) or "backward" (sources on Y)
    std::pair<double, double> first;
    std::pair<double, double> second;
};

struct LemmaReport {
    std::vector<ModulusRow> property_i_modulus;
    bool property_ii_ok = false;
    bool property_iii_forward_ok = false;
    bool property_iii_backward_ok = false;
    bool property_iii_ok = false;
    double match_radius = 0.0;  // sources this close count as the same point
    double image_slack = 0.0;   // allowed image spread for such sources
    double max_value_gap = 0.0;
    double value_gap_bound = 0.0;
    std::size_t failure_count = 0;
    std::vector<LemmaFailure> failures;  // first few, in scan order

    bool all_ok() const { return property_ii_ok && property_iii_ok; }
};

LemmaReport check_lemma_properties(const RelationRho& rho, const SampledCurve& x,
                                   const SampledCurve& y, std::span<const double> eta_grid);

// Default eta grid: 1, 2, 4 and 8 grid spacings.
std::vector<double> default_eta_grid(const DenseGrid& grid);

// Monotone piecewise-linear circle map through (source, image) knots.
class MonotoneExtension {
public:
    MonotoneExtension(std::vector<double> sources, std::vector<double> lifted_images,
                      Orientation orientation);

    double operator()(double theta) const;
    Orientation orientation() const { return orientation_; }
    const std::vector<double>& sources() const { return sources_; }

private:
    std::vector<double> sources_;
    std::vector<double> images_;
    Orientation orientation_;
};

struct ExtensionAttempt {
    std::optional<MonotoneExtension> map;
    // Source interval over which the knots fail to advance strictly.
    std::optional<std::pair<double, double>> violation;
};

ExtensionAttempt monotone_extension(std::span<const RhoEntry> entries, Orientation orientation);

struct ExtensionRow {
    double theta_x;
    double theta_y;
    double phi;
    double psi_of_image;
    double residual;
};

struct ExtensionReport {
    bool extended = false;
    std::optional<std::pair<double, double>> violation;
    std::optional<MonotoneExtension> map;
    double optimality_residual = 0.0;
    double optimality_bound = 0.0;  // tolerance + sampling slack
    bool optimal = false;
    std::vector<ExtensionRow> table;  // one row per X sample

    bool succeeded() const { return extended && optimal; }
};

ExtensionReport extend_and_verify_optimal(const RelationRho& rho, const SampledCurve& x,
                                          const SampledCurve& y);

struct PipelineOptions {
    std::size_t terms = 32;
    unsigned level = 6;
    double tol = 1e-3;
    std::vector<double> eta_grid;  // empty: default_eta_grid
};

struct PipelineReport {
    DistanceResult distance;
    std::vector<double> sequence_costs;
    RelationRho rho;
    LemmaReport lemma;
    ExtensionReport extension;
};

// approximating_sequence (eps_k = 1/k) -> run_sequence_on_grid ->
// check_lemma_properties -> extend_and_verify_optimal.
PipelineReport run_limit_pipeline(const SampledCurve& x, const SampledCurve& y,
                                  const PipelineOptions& options = {});

}  // namespace npd
