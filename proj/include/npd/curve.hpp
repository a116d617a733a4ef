#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace npd {

inline constexpr double two_pi = 6.28318530717958647692528676655900577;
inline constexpr double pi = two_pi / 2.0;

// Reduce an angle into [0, 2π).
double wrap_angle(double theta);

// Angular distance on the parameter circle: min(|a-b|, 2π-|a-b|) after wrapping.
double angular_distance(double a, double b);

// Raised when an operation needs strictly distinct adjacent values.
class PlateauError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Sample {
    double theta;
    double value;
};

// A closed curve sampled along its parameter circle. The sample sequence is
// cyclic; thetas are strictly increasing in [0, 2π) and the value between two
// samples is the linear interpolant in theta.
class SampledCurve {
public:
    explicit SampledCurve(std::vector<Sample> samples);

    std::size_t size() const { return samples_.size(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    double theta(std::size_t i) const { return samples_[i].theta; }
    double value(std::size_t i) const { return samples_[i].value; }
    std::span<const Sample> samples() const { return samples_; }
    std::vector<double> values() const;

    // Largest angular gap between cyclically adjacent samples.
    double mesh() const { return mesh_; }

    // Piecewise-linear interpolant evaluated at any angle.
    double value_at(double theta) const;

    // Unwrapped angle of lifted index k: theta(k mod N) + 2π floor(k / N).
    double lifted_theta(long long k) const;

    double min_value() const;
    double max_value() const;

private:
    std::vector<Sample> samples_;
    double mesh_ = 0.0;
};

SampledCurve build_curve(std::span<const std::pair<double, double>> pairs);

// Uniform resampling at thetas 2πk/n of the piecewise-linear interpolant.
SampledCurve resample(const SampledCurve& curve, std::size_t n);

enum class ExtremumKind { local_min, local_max };

struct CriticalPoint {
    std::size_t index;
    ExtremumKind kind;
    double value;

    friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

// Maximal cyclic run of samples with equal values: indices first, first+1, ...,
// first+length-1 (mod N). length == N for a constant curve.
struct Plateau {
    std::size_t first;
    std::size_t length;

    bool contains(std::size_t index, std::size_t n) const;
    friend bool operator==(const Plateau&, const Plateau&) = default;
};

struct MorseReport {
    std::vector<CriticalPoint> criticals;
    std::vector<Plateau> plateaus;
    bool is_morse_consistent = false;
};

// Strict local extrema against both cyclic neighbours. Throws PlateauError if
// two adjacent samples share a value.
std::vector<CriticalPoint> critical_points(const SampledCurve& curve);

MorseReport morse_check(const SampledCurve& curve);

// Largest oscillation of the interpolant over any parameter arc of the given
// angular width, 0 < width <= 2π.
double modulus_of_continuity(const SampledCurve& curve, double width);

// ω_x(h_x) + ω_y(h_y): the discretisation allowance used by every numeric
// acceptance bound.
double sampling_slack(const SampledCurve& x, const SampledCurve& y);

}  // namespace npd
