// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "npd/corpus.hpp"
#include "npd/io.hpp"
#include "npd/limit.hpp"
#include "npd/matching.hpp"
#include "npd/persistence.hpp"
#include "npd/repro.hpp"

using namespace npd;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double time_limit,
               const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < time_limit;
    const bool passed = outcome.passed && in_time;
    if (!passed) ++failures;
    std::printf("%s %s  %s | %s | %.2f s (limit %.0f s)%s\n", id.c_str(), passed ? "PASS" : "FAIL",
                title.c_str(), outcome.detail.c_str(), seconds, time_limit, in_time ? "" : " TIMEOUT");
    std::fflush(stdout);
}

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
}

SampledCurve uniform(const std::vector<double>& values) {
    std::vector<Sample> samples(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        samples[i] = {two_pi * static_cast<double>(i) / static_cast<double>(values.size()), values[i]};
    }
    return SampledCurve(std::move(samples));
}

double brute_force_min(const SampledCurve& x, const SampledCurve& y, Orientation o) {
    double best = std::numeric_limits<double>::infinity();
    enumerate_couplings(x.size(), y.size(), o,
                        [&](const MonotoneCoupling& f) { best = std::min(best, theta_cost(f, x, y)); });
    return best;
}

std::string run_cli(const std::string& args) {
    const std::string command = std::string(NPD_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot start " + command);
    std::string output;
    std::array<char, 4096> buffer{};
    std::size_t read = 0;
    while ((read = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) output.append(buffer.data(), read);
    const int status = pclose(pipe);
    return output + "\n[status " + std::to_string(status) + "]";
}

}  // namespace

int main() {
    criterion("AC1", "example1 value at N=512", 10.0, [] {
        const CurvePair pair = example1_pair(512);
        const double d = pseudo_distance(pair.x, pair.y).value;
        return Outcome{d >= 0.45 && d <= 0.55, "delta=" + num(d) + " target 0.5 in [0.45, 0.55]"};
    });

    criterion("AC2", "example1 non-optimality signature at N=64..512", 30.0, [] {
        bool ok = true;
        std::string detail;
        for (std::size_t n : {64, 128, 256, 512}) {
            const CurvePair pair = example1_pair(n);
            const DistanceResult d = pseudo_distance(pair.x, pair.y);
            const DistanceResult inj = pseudo_distance_injective(pair.x, pair.y);
            ok = ok && !d.injective_witness && inj.value > d.value;
            detail += "N=" + std::to_string(n) + " delta=" + num(d.value) + " inj=" + num(inj.value) +
                      (d.injective_witness ? " injective-witness " : " non-injective ");
        }
        return Outcome{ok, detail};
    });

    criterion("AC3", "example3 at N=512", 10.0, [] {
        const CurvePair pair = example3_pair(512);
        const double d = pseudo_distance(pair.x, pair.y).value;
        const double slack = sampling_slack(pair.x, pair.y);
        const MorseReport morse = morse_check(pair.x);
        const double inj = pseudo_distance_injective(pair.x, pair.y).value;
        const bool ok = d <= slack && !morse.is_morse_consistent && !morse.plateaus.empty() && inj > 0.0;
        return Outcome{ok, "delta=" + num(d) + " slack=" + num(slack) + " plateaus=" +
                               std::to_string(morse.plateaus.size()) + " inj=" + num(inj)};
    });

    criterion("AC4", "oracle equivalence on 200 random pairs with N*M <= 36", 60.0, [] {
        std::mt19937_64 rng(2718);
        std::uniform_int_distribution<std::size_t> size(3, 12);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<int> level(0, 2);
        int checked = 0;
        int mismatches = 0;
        while (checked < 200) {
            const std::size_t n = size(rng);
            const std::size_t m = size(rng);
            if (n * m > 36) continue;
            const bool ties = checked % 2 == 0;
            std::vector<double> xv(n);
            std::vector<double> yv(m);
            for (double& v : xv) v = ties ? level(rng) : unit(rng);
            for (double& v : yv) v = ties ? level(rng) : unit(rng);
            const SampledCurve x = uniform(xv);
            const SampledCurve y = uniform(yv);
            for (auto [policy, o] : {std::pair{OrientationPolicy::preserving, Orientation::preserving},
                                     std::pair{OrientationPolicy::reversing, Orientation::reversing}}) {
                if (pseudo_distance(x, y, policy).value != brute_force_min(x, y, o)) ++mismatches;
            }
            const double both = std::min(brute_force_min(x, y, Orientation::preserving),
                                         brute_force_min(x, y, Orientation::reversing));
            if (pseudo_distance(x, y).value != both) ++mismatches;
            ++checked;
        }
        return Outcome{mismatches == 0, std::to_string(checked) + " pairs, mismatches=" + std::to_string(mismatches)};
    });

    criterion("AC5", "lower-bound contract on corpus and 100 random Morse pairs", 60.0, [] {
        bool ok = true;
        int violations = 0;
        for (std::size_t n : {64, 128, 256, 512}) {
            const CurvePair pair = example1_pair(n);
            if (distance_lower_bound(pair.x, pair.y) >
                pseudo_distance(pair.x, pair.y).value + sampling_slack(pair.x, pair.y)) {
                ++violations;
            }
        }
        // The plateau instance has no diagram; its tilted Morse variant stands in.
        const CurvePair tilted = example3_pair(512, 0.01);
        if (distance_lower_bound(tilted.x, tilted.y) >
            pseudo_distance(tilted.x, tilted.y).value + sampling_slack(tilted.x, tilted.y)) {
            ++violations;
        }
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const RandomMorsePair p =
                random_morse_pair(seed, 1 + seed % 4, 256, 0.1 * static_cast<double>(seed % 5));
            if (distance_lower_bound(p.x, p.y) > pseudo_distance(p.x, p.y).value + sampling_slack(p.x, p.y)) {
                ++violations;
            }
        }
        const CurvePair ex1 = example1_pair(512);
        const double tight = distance_lower_bound(ex1.x, ex1.y);
        ok = violations == 0 && std::fabs(tight - 0.5) <= 0.01;
        return Outcome{ok, "violations=" + std::to_string(violations) + " example1 bound=" + num(tight)};
    });

    criterion("AC6", "limit pipeline on 20 seeded reparametrizations (N=512)", 120.0, [] {
        int passed = 0;
        double worst_ratio = 0.0;
        double worst_residual_margin = std::numeric_limits<double>::infinity();
        std::string failed;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const TheoremCase c = run_theorem_case(seed, 512);
            if (c.passed()) {
                ++passed;
            } else {
                failed += " seed" + std::to_string(seed);
            }
            worst_ratio = std::max(worst_ratio, c.inverse_error / c.mesh);
            worst_residual_margin = std::min(worst_residual_margin, c.optimality_bound - c.optimality_residual);
        }
        return Outcome{passed == 20, std::to_string(passed) + "/20 passed, worst inverse error=" +
                                         num(worst_ratio) + " mesh, min residual margin=" +
                                         num(worst_residual_margin) + failed};
    });

    criterion("AC7", "example3 pipeline breaks backward single-valuedness and refuses extension", 60.0, [] {
        const CurvePair pair = example3_pair(512);
        const PipelineReport report = run_limit_pipeline(pair.x, pair.y);
        const bool refused = !report.extension.extended && report.extension.violation.has_value();
        std::string detail = "iii_backward_ok=" + std::string(report.lemma.property_iii_backward_ok ? "true" : "false") +
                             " extended=" + (report.extension.extended ? "true" : "false");
        if (report.extension.violation) {
            detail += " violation=[" + num(report.extension.violation->first) + ", " +
                      num(report.extension.violation->second) + "]";
        }
        return Outcome{!report.lemma.property_iii_backward_ok && refused, detail};
    });

    criterion("AC8", "example1 delta is a critical-value gap or half gap", 10.0, [] {
        const CurvePair pair = example1_pair(512);
        const double d = pseudo_distance(pair.x, pair.y).value;
        const double gap = submultiple_gap(d, critical_values_of(pair.x, pair.y));
        return Outcome{gap <= 0.05, "delta=" + num(d) + " distance to set=" + num(gap)};
    });

    criterion("AC9", "symmetry on 50 pairs, triangle on 50 triples", 60.0, [] {
        int asymmetric = 0;
        int triangle = 0;
        double worst_excess = -std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < 50; ++k) {
            const RandomMorsePair a = random_morse_pair(500 + k, 1 + k % 3, 128, 0.2);
            const RandomMorsePair b = random_morse_pair(900 + k, 1 + (k + 1) % 3, 96, 0.1);
            if (pseudo_distance(a.x, b.y).value != pseudo_distance(b.y, a.x).value) ++asymmetric;

            const SampledCurve& p = a.x;
            const SampledCurve& q = a.y;
            const SampledCurve r = random_morse_pair(1300 + k, 2, 128, 0.3).y;
            const double slack = std::max({sampling_slack(p, q), sampling_slack(q, r), sampling_slack(p, r)});
            const double excess = pseudo_distance(p, r).value -
                                  (pseudo_distance(p, q).value + pseudo_distance(q, r).value);
            worst_excess = std::max(worst_excess, excess);
            if (excess > 2.0 * slack) ++triangle;
        }
        return Outcome{asymmetric == 0 && triangle == 0,
                       "asymmetric=" + std::to_string(asymmetric) + " triangle violations=" +
                           std::to_string(triangle) + " worst excess=" + num(worst_excess)};
    });

    criterion("AC10", "CLI output byte-identical on repeat", 60.0, [] {
        const auto dir = std::filesystem::temp_directory_path() / "npd_acceptance";
        std::filesystem::create_directories(dir);
        const CurvePair ex1 = example1_pair(128);
        const CurvePair ex3 = example3_pair(128);
        const std::string x = (dir / "x.json").string();
        const std::string y = (dir / "y.json").string();
        const std::string p = (dir / "p.json").string();
        const std::string c = (dir / "c.csv").string();
        std::ofstream(x) << curve_to_json(ex1.x).dump();
        std::ofstream(y) << curve_to_json(ex1.y).dump();
        std::ofstream(p) << curve_to_json(ex3.x).dump();
        {
            std::ofstream out(c);
            write_curve_csv(out, ex3.y);
        }
        const std::vector<std::string> invocations{
            "distance --x " + x + " --y " + y,
            "distance --injective --x " + x + " --y " + y,
            "distance --orientation reversing --x " + x + " --y " + c,
            "morse --curve " + p,
            "persistence --curve " + x,
            "persistence --curve " + p,
            "lowerbound --x " + x + " --y " + y,
            "sequence --x " + x + " --y " + y + " --terms 8",
            "sequence --x " + x + " --y " + y + " --schedule 2^-k --format csv",
            "limit --x " + p + " --y " + c + " --level 5",
            "limit --x " + x + " --y " + y + " --format csv",
            "repro example1 --samples 256",
            "repro example3 --samples 256",
            "repro theorem --samples 128 --pairs 3",
            "corpus random --seed 5 --extrema 3",
            "corpus example3 --format csv --side y",
            "distance --bogus",
        };
        int differing = 0;
        for (const auto& args : invocations) differing += run_cli(args) != run_cli(args);
        return Outcome{differing == 0, std::to_string(invocations.size()) + " invocations, differing=" +
                                           std::to_string(differing)};
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
