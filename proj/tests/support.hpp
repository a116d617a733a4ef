#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "npd/coupling.hpp"
#include "npd/curve.hpp"
#include "npd/matching.hpp"

namespace testing {

inline npd::SampledCurve uniform(const std::vector<double>& values) {
    std::vector<npd::Sample> samples(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        samples[i] = {npd::two_pi * static_cast<double>(i) / static_cast<double>(values.size()),
                      values[i]};
    }
    return npd::SampledCurve(std::move(samples));
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, int levels = 0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, std::max(levels - 1, 0));
    std::vector<double> values(n);
    // With levels > 0 values are drawn from a small set so ties are common.
    for (double& v : values) v = levels > 0 ? static_cast<double>(level(rng)) : unit(rng);
    return values;
}

inline npd::SampledCurve random_curve(std::mt19937_64& rng, std::size_t n, int levels = 0) {
    return uniform(random_values(rng, n, levels));
}

// Curve with irregular thetas.
inline npd::SampledCurve jittered_curve(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> thetas(n);
    for (double& t : thetas) t = npd::two_pi * unit(rng);
    std::sort(thetas.begin(), thetas.end());
    std::vector<npd::Sample> samples;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && thetas[i] == thetas[i - 1]) continue;
        samples.push_back({thetas[i], unit(rng)});
    }
    return npd::SampledCurve(std::move(samples));
}

// Minimum theta_cost over the exhaustive enumeration.
inline double brute_force_min(const npd::SampledCurve& x, const npd::SampledCurve& y,
                              npd::Orientation orientation) {
    double best = std::numeric_limits<double>::infinity();
    npd::enumerate_couplings(x.size(), y.size(), orientation, [&](const npd::MonotoneCoupling& f) {
        best = std::min(best, npd::theta_cost(f, x, y));
    });
    return best;
}

// Window oscillation of the interpolant, sampled on a fine grid. Never above
// the exact value; below it by at most the interpolant slope times the step.
inline double dense_modulus(const npd::SampledCurve& curve, double width, std::size_t points = 2048) {
    std::vector<double> values(points);
    for (std::size_t k = 0; k < points; ++k) {
        values[k] = curve.value_at(npd::two_pi * static_cast<double>(k) / static_cast<double>(points));
    }
    const double step = npd::two_pi / static_cast<double>(points);
    const auto reach = static_cast<std::size_t>(std::floor(width / step + 1e-9));
    double best = 0.0;
    for (std::size_t a = 0; a < points; ++a) {
        for (std::size_t d = 1; d <= std::min(reach, points - 1); ++d) {
            best = std::max(best, std::fabs(values[a] - values[(a + d) % points]));
        }
    }
    return best;
}

}  // namespace testing
