#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "npd/curve.hpp"
#include "npd/io.hpp"

namespace npd {

struct ReproCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct ReproReport {
    std::string bundle;
    std::vector<ReproCheck> checks;

    bool passed() const;
};

struct ReproOptions {
    std::size_t samples = 512;
    double tol = 0.05;        // allowed deviation of a value from its target
    std::uint64_t seed = 0;   // first seed of the theorem bundle
    std::size_t pairs = 20;   // seeded pairs in the theorem bundle
};

// Distance to the nearest element of {|a - b|} and {|a - b| / 2} over all
// pairs of the given critical values.
double submultiple_gap(double delta, const std::vector<double>& critical_values);

// Critical values of both curves, in index order, x first.
std::vector<double> critical_values_of(const SampledCurve& x, const SampledCurve& y);

// One run of the limit pipeline on random_morse_pair(seed, 2, samples) with no
// level perturbation, compared against the known optimal map.
struct TheoremCase {
    std::uint64_t seed;
    double delta;
    double slack;
    bool converged;
    bool lemma_ok;
    bool extended;
    double optimality_residual;
    double optimality_bound;
    double inverse_error;  // max over grid points of d(extension, tau^-1)
    double mesh;

    bool passed() const;
};

TheoremCase run_theorem_case(std::uint64_t seed, std::size_t samples);

ReproReport repro_example1(const ReproOptions& options);
ReproReport repro_example3(const ReproOptions& options);
ReproReport repro_theorem(const ReproOptions& options);

Json to_json(const ReproReport& report);

}  // namespace npd
