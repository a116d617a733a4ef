#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "npd/curve.hpp"

namespace npd {

struct CurvePair {
    SampledCurve x;
    SampledCurve y;
};

// Morse profile with the given critical values in cyclic order (min first),
// sampled uniformly at n points. Critical value m sits exactly on sample
// round(m n / L); consecutive critical values are joined by smoothstep arcs.
// Needs an even length >= 2, strict alternation and n >= 4 L.
SampledCurve curve_from_critical_sequence(std::span<const double> values, std::size_t n);

// X realises critical values 0, 3, 1, 2; Y rises 0 -> 3 on the same quarter
// and falls back to 0 monotonically. The wiggle (1, 2) has to collapse onto
// the level 1.5 of Y.
inline constexpr double example1_expected_delta = 0.5;
CurvePair example1_pair(std::size_t n);

// X rises from 0 to 2 - tilt on [0, 2π/3], stays flat (tilt = 0) or rises to
// 2 on [2π/3, π], then falls to 0. Y rises 0 -> 2 on [0, π] and falls back.
CurvePair example3_pair(std::size_t n, double tilt = 0.0);

// Parameter arc of the X plateau of example3_pair.
std::pair<double, double> example3_plateau_arc();

// Continuous circle function through (angle, value) knots joined by smoothstep
// arcs. Angles are strictly increasing in [0, 2π).
class KnotProfile {
public:
    KnotProfile(std::vector<double> angles, std::vector<double> values);

    double operator()(double theta) const;
    SampledCurve sample(std::size_t n) const;

    // Same profile with knots first and first + 1 (cyclically) removed.
    KnotProfile without_knots(std::size_t first) const;

    const std::vector<double>& angles() const { return angles_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> angles_;
    std::vector<double> values_;
};

// Orientation preserving circle diffeomorphism
// tau(t) = t + shift + sum_m amp_m sin(m t + phase_m) / m, m = 1, 2.
struct Reparametrization {
    double shift = 0.0;
    std::array<double, 2> amplitude{0.0, 0.0};
    std::array<double, 2> phase{0.0, 0.0};

    double operator()(double theta) const;
    double inverse(double theta) const;
    double lipschitz() const;          // sup |tau'|
    double inverse_lipschitz() const;  // sup |(tau^-1)'|
};

struct RandomMorsePair {
    SampledCurve x;  // profile F sampled uniformly
    SampledCurve y;  // h(F(tau(theta))) sampled uniformly
    KnotProfile profile;
    Reparametrization reparam;  // the optimal map X -> Y is reparam.inverse
    double amplitude;           // sup |h(v) - v|
    double level_phase;         // h(v) = v + amplitude sin(2 v + level_phase)
    std::vector<double> critical_values;  // knot values of F
};

// Deterministic in seed. Both curves are Morse consistent with 2k critical
// samples. Needs k >= 1, n >= 8k and 0 <= amplitude < 0.5.
RandomMorsePair random_morse_pair(std::uint64_t seed, std::size_t k, std::size_t n,
                                  double amplitude = 0.0);

}  // namespace npd
