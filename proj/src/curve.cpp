#include "npd/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace npd {

double wrap_angle(double theta) {
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    if (t >= two_pi) t = 0.0;
    return t;
}

double angular_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, two_pi - d);
}

SampledCurve::SampledCurve(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.size() < 3) {
        throw std::invalid_argument("curve needs at least 3 samples, got " +
                                    std::to_string(samples_.size()));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.theta) || !std::isfinite(s.value)) {
            throw std::invalid_argument("non-finite sample at index " + std::to_string(i));
        }
        if (s.theta < 0.0 || s.theta >= two_pi) {
            throw std::invalid_argument("theta out of [0, 2pi) at index " + std::to_string(i));
        }
        if (i > 0) {
            if (s.theta == samples_[i - 1].theta) {
                throw std::invalid_argument("duplicate theta at index " + std::to_string(i));
            }
            if (s.theta < samples_[i - 1].theta) {
                throw std::invalid_argument("non-increasing theta at index " + std::to_string(i));
            }
        }
    }
    mesh_ = samples_.front().theta + two_pi - samples_.back().theta;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        mesh_ = std::max(mesh_, samples_[i].theta - samples_[i - 1].theta);
    }
}

std::vector<double> SampledCurve::values() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.value);
    return out;
}

double SampledCurve::value_at(double theta) const {
    const double t = wrap_angle(theta);
    const std::size_t n = samples_.size();
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const Sample& s) { return v < s.theta; });
    // Segment [a, b] in lifted angles containing t.
    std::size_t b = static_cast<std::size_t>(it - samples_.begin());
    const Sample* lo;
    const Sample* hi;
    double lo_theta;
    double hi_theta;
    if (b == 0) {
        lo = &samples_[n - 1];
        hi = &samples_[0];
        lo_theta = lo->theta - two_pi;
        hi_theta = hi->theta;
    } else if (b == n) {
        lo = &samples_[n - 1];
        hi = &samples_[0];
        lo_theta = lo->theta;
        hi_theta = hi->theta + two_pi;
    } else {
        lo = &samples_[b - 1];
        hi = &samples_[b];
        lo_theta = lo->theta;
        hi_theta = hi->theta;
    }
    if (t == lo_theta) return lo->value;
    const double w = (t - lo_theta) / (hi_theta - lo_theta);
    return lo->value + (hi->value - lo->value) * w;
}

double SampledCurve::lifted_theta(long long k) const {
    const auto n = static_cast<long long>(samples_.size());
    long long q = k / n;
    long long r = k % n;
    if (r < 0) {
        r += n;
        --q;
    }
    return samples_[static_cast<std::size_t>(r)].theta + two_pi * static_cast<double>(q);
}

double SampledCurve::min_value() const {
    return std::min_element(samples_.begin(), samples_.end(),
                            [](const Sample& a, const Sample& b) { return a.value < b.value; })
        ->value;
}

double SampledCurve::max_value() const {
    return std::max_element(samples_.begin(), samples_.end(),
                            [](const Sample& a, const Sample& b) { return a.value < b.value; })
        ->value;
}

SampledCurve build_curve(std::span<const std::pair<double, double>> pairs) {
    std::vector<Sample> samples;
    samples.reserve(pairs.size());
    for (const auto& [theta, value] : pairs) samples.push_back({theta, value});
    return SampledCurve(std::move(samples));
}

SampledCurve resample(const SampledCurve& curve, std::size_t n) {
    if (n < 3) throw std::invalid_argument("resample needs n >= 3");
    std::vector<Sample> samples(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = two_pi * static_cast<double>(k) / static_cast<double>(n);
        samples[k] = {theta, curve.value_at(theta)};
    }
    return SampledCurve(std::move(samples));
}

bool Plateau::contains(std::size_t index, std::size_t n) const {
    return (index + n - first) % n < length;
}

namespace {

std::vector<CriticalPoint> strict_extrema(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    std::vector<CriticalPoint> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = curve.value(i);
        const double prev = curve.value((i + n - 1) % n);
        const double next = curve.value((i + 1) % n);
        if (v < prev && v < next) {
            out.push_back({i, ExtremumKind::local_min, v});
        } else if (v > prev && v > next) {
            out.push_back({i, ExtremumKind::local_max, v});
        }
    }
    return out;
}

std::vector<Plateau> find_plateaus(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    // A run boundary is an index whose value differs from its predecessor.
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (curve.value(i) != curve.value((i + n - 1) % n)) {
            start = i;
            break;
        }
    }
    if (start == n) return {Plateau{0, n}};

    std::vector<Plateau> out;
    std::size_t run_first = start;
    std::size_t run_length = 1;
    for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t i = (start + step) % n;
        if (step < n && curve.value(i) == curve.value((i + n - 1) % n)) {
            ++run_length;
            continue;
        }
        if (run_length >= 2) out.push_back({run_first, run_length});
        run_first = i;
        run_length = 1;
    }
    std::sort(out.begin(), out.end(),
              [](const Plateau& a, const Plateau& b) { return a.first < b.first; });
    return out;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const SampledCurve& curve) {
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (curve.value(i) == curve.value((i + 1) % n)) {
            throw PlateauError("plateau-present: samples " + std::to_string(i) + " and " +
                               std::to_string((i + 1) % n) + " share a value");
        }
    }
    return strict_extrema(curve);
}

MorseReport morse_check(const SampledCurve& curve) {
    MorseReport report;
    report.criticals = strict_extrema(curve);
    report.plateaus = find_plateaus(curve);
    report.is_morse_consistent = report.plateaus.empty();
    return report;
}

double modulus_of_continuity(const SampledCurve& curve, double width) {
    if (!(width > 0.0) || width > two_pi) {
        throw std::invalid_argument("modulus width must lie in (0, 2pi]");
    }
    if (width >= pi) return curve.max_value() - curve.min_value();

    // Some maximising pair has one end on a sample; the other end then ranges
    // over an arc of half-width `width` around it, where the interpolant
    // attains its extremes at interior samples or at the arc ends.
    const std::size_t n = curve.size();
    double best = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double ta = curve.theta(a);
        const double va = curve.value(a);
        double lo = std::min(curve.value_at(ta - width), curve.value_at(ta + width));
        double hi = std::max(curve.value_at(ta - width), curve.value_at(ta + width));
        const auto ia = static_cast<long long>(a);
        const auto nn = static_cast<long long>(n);
        auto value_of = [&](long long k) {
            return curve.value(static_cast<std::size_t>(((k % nn) + nn) % nn));
        };
        for (long long d = 1; d < nn; ++d) {
            if (curve.lifted_theta(ia + d) - ta > width) break;
            lo = std::min(lo, value_of(ia + d));
            hi = std::max(hi, value_of(ia + d));
        }
        for (long long d = 1; d < nn; ++d) {
            if (ta - curve.lifted_theta(ia - d) > width) break;
            lo = std::min(lo, value_of(ia - d));
            hi = std::max(hi, value_of(ia - d));
        }
        best = std::max({best, va - lo, hi - va});
    }
    return best;
}

double sampling_slack(const SampledCurve& x, const SampledCurve& y) {
    return modulus_of_continuity(x, x.mesh()) + modulus_of_continuity(y, y.mesh());
}

}  // namespace npd
