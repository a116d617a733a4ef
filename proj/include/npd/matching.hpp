#pragma once

#include <optional>
#include <span>
#include <vector>

#include "npd/coupling.hpp"
#include "npd/curve.hpp"

namespace npd {

enum class OrientationPolicy { both, preserving, reversing };

struct DistanceResult {
    double value;
    MonotoneCoupling witness;
    Orientation orientation_used;
    bool injective_witness;
};

struct Feasibility {
    bool feasible = false;
    std::optional<MonotoneCoupling> witness;
};

// Is there a coupling of the given orientation whose every pair costs at most
// eps? The witness is the lexicographically smallest feasible pair sequence
// starting at an i == 0 pair.
Feasibility feasible_at(const SampledCurve& x, const SampledCurve& y, double eps,
                        Orientation orientation);

// Discrete natural pseudo-distance: the least max-cost over all couplings of
// the allowed orientations. Binary search over the distinct pair costs with a
// bit-parallel reachability check per cyclic cut. Ties between orientations go
// to preserving.
DistanceResult pseudo_distance(const SampledCurve& x, const SampledCurve& y,
                               OrientationPolicy policy = OrientationPolicy::both);

// Same quantity by the plain per-start min-max dynamic programme, O(N M^2).
// Kept as an independent cross-check for moderate sizes.
double pseudo_distance_dp(const SampledCurve& x, const SampledCurve& y,
                          OrientationPolicy policy = OrientationPolicy::both);

// Minimum over bijective couplings only (pure cyclic shifts); needs N == M.
DistanceResult pseudo_distance_injective(const SampledCurve& x, const SampledCurve& y,
                                         OrientationPolicy policy = OrientationPolicy::both);

// Couplings f_1, f_2, ... with theta_cost(f_k) <= d + eps_k, nonincreasing in
// k. Each f_k minimises the summed level mismatch among couplings feasible at
// its threshold, so it is level preserving wherever the threshold allows.
std::vector<MonotoneCoupling> approximating_sequence(const SampledCurve& x, const SampledCurve& y,
                                                     std::span<const double> schedule,
                                                     const DistanceResult& distance);
std::vector<MonotoneCoupling> approximating_sequence(const SampledCurve& x, const SampledCurve& y,
                                                     std::span<const double> schedule);

// eps_k = 1/k for k = 1..terms.
std::vector<double> harmonic_schedule(std::size_t terms);

}  // namespace npd
