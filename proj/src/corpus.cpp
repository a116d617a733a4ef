#include "npd/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace npd {

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

double uniform_theta(std::size_t i, std::size_t n) {
    return two_pi * static_cast<double>(i) / static_cast<double>(n);
}

SampledCurve uniform_curve(const std::vector<double>& values) {
    std::vector<Sample> samples(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        samples[i] = {uniform_theta(i, values.size()), values[i]};
    }
    return SampledCurve(std::move(samples));
}

struct IndexKnot {
    std::size_t index;
    double value;
};

// Knots sit exactly on samples; in between, smoothstep in index space. Knot
// indices are strictly increasing, the first one is 0.
SampledCurve index_knot_curve(const std::vector<IndexKnot>& knots, std::size_t n) {
    std::vector<double> values(n);
    for (std::size_t k = 0; k < knots.size(); ++k) {
        const IndexKnot& a = knots[k];
        const bool last = k + 1 == knots.size();
        const std::size_t end = last ? n : knots[k + 1].index;
        const double target = last ? knots.front().value : knots[k + 1].value;
        const double span = static_cast<double>(end - a.index);
        values[a.index] = a.value;
        for (std::size_t i = a.index + 1; i < end; ++i) {
            const double t = static_cast<double>(i - a.index) / span;
            values[i] = a.value + (target - a.value) * smoothstep(t);
        }
    }
    return uniform_curve(values);
}

std::size_t knot_index(std::size_t m, std::size_t n, std::size_t count) {
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(m) * static_cast<double>(n) / static_cast<double>(count)));
}

void require_samples(std::size_t n, std::size_t minimum, const char* what) {
    if (n < minimum) {
        throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(minimum) +
                                    " samples");
    }
}

}  // namespace

SampledCurve curve_from_critical_sequence(std::span<const double> values, std::size_t n) {
    const std::size_t count = values.size();
    if (count < 2 || count % 2 != 0) {
        throw std::invalid_argument("critical sequence needs an even length >= 2");
    }
    for (std::size_t m = 0; m < count; ++m) {
        const double prev = values[(m + count - 1) % count];
        const double next = values[(m + 1) % count];
        const double v = values[m];
        const bool ok = m % 2 == 0 ? (v < prev && v < next) : (v > prev && v > next);
        if (!ok) {
            throw std::invalid_argument("critical sequence must alternate min, max starting with a min");
        }
    }
    require_samples(n, 4 * count, "critical sequence");

    std::vector<IndexKnot> knots(count);
    for (std::size_t m = 0; m < count; ++m) knots[m] = {knot_index(m, n, count), values[m]};
    return index_knot_curve(knots, n);
}

CurvePair example1_pair(std::size_t n) {
    require_samples(n, 64, "example1_pair");
    const double x_values[] = {0.0, 3.0, 1.0, 2.0};
    SampledCurve x = curve_from_critical_sequence(x_values, n);
    SampledCurve y = index_knot_curve({{0, 0.0}, {knot_index(1, n, 4), 3.0}}, n);
    return {std::move(x), std::move(y)};
}

CurvePair example3_pair(std::size_t n, double tilt) {
    require_samples(n, 64, "example3_pair");
    if (!(tilt >= 0.0 && tilt < 2.0)) throw std::invalid_argument("tilt must be in [0, 2)");
    SampledCurve x =
        index_knot_curve({{0, 0.0}, {knot_index(1, n, 3), 2.0 - tilt}, {knot_index(1, n, 2), 2.0}}, n);
    SampledCurve y = index_knot_curve({{0, 0.0}, {knot_index(1, n, 2), 2.0}}, n);
    return {std::move(x), std::move(y)};
}

std::pair<double, double> example3_plateau_arc() { return {two_pi / 3.0, pi}; }

KnotProfile::KnotProfile(std::vector<double> angles, std::vector<double> values)
    : angles_(std::move(angles)), values_(std::move(values)) {
    if (angles_.size() < 2 || angles_.size() != values_.size()) {
        throw std::invalid_argument("knot profile needs at least two knots");
    }
    for (std::size_t k = 0; k < angles_.size(); ++k) {
        if (!(angles_[k] >= 0.0 && angles_[k] < two_pi)) {
            throw std::invalid_argument("knot angle outside [0, 2π)");
        }
        if (k > 0 && !(angles_[k] > angles_[k - 1])) {
            throw std::invalid_argument("knot angles must increase strictly");
        }
    }
}

double KnotProfile::operator()(double theta) const {
    double t = wrap_angle(theta);
    const std::size_t count = angles_.size();
    auto it = std::upper_bound(angles_.begin(), angles_.end(), t);
    // Angles before the first knot belong to the closing arc.
    if (it == angles_.begin()) {
        t += two_pi;
        it = angles_.end();
    }
    const std::size_t a = static_cast<std::size_t>(it - angles_.begin()) - 1;
    const std::size_t b = (a + 1) % count;
    const double end = b == 0 ? angles_.front() + two_pi : angles_[b];
    const double u = (t - angles_[a]) / (end - angles_[a]);
    return values_[a] + (values_[b] - values_[a]) * smoothstep(u);
}

SampledCurve KnotProfile::sample(std::size_t n) const {
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = (*this)(uniform_theta(i, n));
    return uniform_curve(values);
}

KnotProfile KnotProfile::without_knots(std::size_t first) const {
    const std::size_t count = angles_.size();
    if (count < 4) throw std::invalid_argument("cannot remove knots from a profile with fewer than 4");
    first %= count;
    const std::size_t second = (first + 1) % count;
    std::vector<double> angles;
    std::vector<double> values;
    for (std::size_t k = 0; k < count; ++k) {
        if (k == first || k == second) continue;
        angles.push_back(angles_[k]);
        values.push_back(values_[k]);
    }
    return KnotProfile(std::move(angles), std::move(values));
}

double Reparametrization::operator()(double theta) const {
    double out = theta + shift;
    for (std::size_t m = 0; m < 2; ++m) {
        const double order = static_cast<double>(m + 1);
        out += amplitude[m] * std::sin(order * theta + phase[m]) / order;
    }
    return wrap_angle(out);
}

double Reparametrization::inverse(double theta) const {
    // Lifted tau(s) - s - shift lies in [-spread, spread]; bisect on that bracket.
    const double spread = std::fabs(amplitude[0]) + 0.5 * std::fabs(amplitude[1]);
    auto lifted = [&](double s) {
        double out = s + shift;
        for (std::size_t m = 0; m < 2; ++m) {
            const double order = static_cast<double>(m + 1);
            out += amplitude[m] * std::sin(order * s + phase[m]) / order;
        }
        return out;
    };
    double lo = theta - shift - spread - 1e-12;
    double hi = theta - shift + spread + 1e-12;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (lifted(mid) < theta) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return wrap_angle(0.5 * (lo + hi));
}

double Reparametrization::lipschitz() const {
    return 1.0 + std::fabs(amplitude[0]) + std::fabs(amplitude[1]);
}

double Reparametrization::inverse_lipschitz() const {
    return 1.0 / (1.0 - std::fabs(amplitude[0]) - std::fabs(amplitude[1]));
}

RandomMorsePair random_morse_pair(std::uint64_t seed, std::size_t k, std::size_t n,
                                  double amplitude) {
    if (k < 1) throw std::invalid_argument("random_morse_pair needs k >= 1");
    require_samples(n, 8 * k, "random_morse_pair");
    if (!(amplitude >= 0.0 && amplitude < 0.5)) {
        throw std::invalid_argument("amplitude must be in [0, 0.5)");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const std::size_t count = 2 * k;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> weights(count);
        double total = 0.0;
        for (double& w : weights) {
            w = between(1.0, 2.0);
            total += w;
        }
        std::vector<double> angles(count);
        double at = between(0.0, 0.5) * two_pi * weights.back() / total;
        for (std::size_t m = 0; m < count; ++m) {
            angles[m] = at;
            at += two_pi * weights[m] / total;
        }
        std::vector<double> values(count);
        for (std::size_t m = 0; m < count; ++m) {
            values[m] = m % 2 == 0 ? between(0.0, 1.4) : between(1.6, 3.0);
        }
        Reparametrization tau;
        tau.shift = between(0.0, two_pi);
        tau.amplitude = {between(-0.2, 0.2), between(-0.15, 0.15)};
        tau.phase = {between(0.0, two_pi), between(0.0, two_pi)};
        const double level_phase = between(0.0, two_pi);

        KnotProfile profile(angles, values);
        SampledCurve x = profile.sample(n);
        std::vector<double> y_values(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = profile(tau(uniform_theta(j, n)));
            y_values[j] = v + amplitude * std::sin(2.0 * v + level_phase);
        }
        SampledCurve y = uniform_curve(y_values);

        const MorseReport mx = morse_check(x);
        const MorseReport my = morse_check(y);
        if (!mx.is_morse_consistent || !my.is_morse_consistent) continue;
        if (mx.criticals.size() != count || my.criticals.size() != count) continue;
        return RandomMorsePair{std::move(x), std::move(y),    std::move(profile), tau,
                               amplitude,    level_phase,     std::move(values)};
    }
    throw std::runtime_error("random_morse_pair could not realise a Morse pair for this seed");
}

}  // namespace npd
