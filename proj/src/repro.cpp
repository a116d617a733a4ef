#include "npd/repro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "npd/corpus.hpp"
#include "npd/limit.hpp"
#include "npd/matching.hpp"
#include "npd/persistence.hpp"

namespace npd {

namespace {

std::string describe(std::initializer_list<std::pair<const char*, double>> fields) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, value] : fields) {
        if (!first) out << ' ';
        out << name << '=' << format_number(value);
        first = false;
    }
    return out.str();
}

}  // namespace

bool ReproReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReproCheck& c) { return c.passed; });
}

double submultiple_gap(double delta, const std::vector<double>& critical_values) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < critical_values.size(); ++a) {
        for (std::size_t b = a + 1; b < critical_values.size(); ++b) {
            const double diff = std::fabs(critical_values[a] - critical_values[b]);
            best = std::min({best, std::fabs(delta - diff), std::fabs(delta - 0.5 * diff)});
        }
    }
    return best;
}

std::vector<double> critical_values_of(const SampledCurve& x, const SampledCurve& y) {
    std::vector<double> values;
    for (const auto& c : morse_check(x).criticals) values.push_back(c.value);
    for (const auto& c : morse_check(y).criticals) values.push_back(c.value);
    return values;
}

bool TheoremCase::passed() const {
    return converged && lemma_ok && extended && optimality_residual <= optimality_bound &&
           inverse_error <= 2.0 * mesh;
}

TheoremCase run_theorem_case(std::uint64_t seed, std::size_t samples) {
    const RandomMorsePair pair = random_morse_pair(seed, 2, samples, 0.0);
    const PipelineReport report = run_limit_pipeline(pair.x, pair.y);

    TheoremCase result{};
    result.seed = seed;
    result.delta = report.distance.value;
    result.slack = sampling_slack(pair.x, pair.y);
    result.converged = report.rho.fully_converged();
    result.lemma_ok = report.lemma.all_ok();
    result.extended = report.extension.extended;
    result.optimality_residual = report.extension.optimality_residual;
    result.optimality_bound = report.extension.optimality_bound;
    result.mesh = std::max(pair.x.mesh(), pair.y.mesh());
    result.inverse_error = std::numeric_limits<double>::infinity();
    if (report.extension.map) {
        result.inverse_error = 0.0;
        for (double theta : report.rho.grid.thetas) {
            result.inverse_error =
                std::max(result.inverse_error,
                         angular_distance((*report.extension.map)(theta), pair.reparam.inverse(theta)));
        }
    }
    return result;
}

ReproReport repro_example1(const ReproOptions& options) {
    ReproReport report{"example1", {}};
    const CurvePair pair = example1_pair(options.samples);
    const DistanceResult d = pseudo_distance(pair.x, pair.y);
    const DistanceResult injective = pseudo_distance_injective(pair.x, pair.y);
    const double slack = sampling_slack(pair.x, pair.y);
    const double bound = distance_lower_bound(pair.x, pair.y);
    const double gap = submultiple_gap(d.value, critical_values_of(pair.x, pair.y));

    report.checks.push_back({"delta_matches_expected",
                             std::fabs(d.value - example1_expected_delta) <= options.tol,
                             describe({{"delta", d.value},
                                       {"expected", example1_expected_delta},
                                       {"tol", options.tol}})});
    report.checks.push_back({"witness_not_injective", !d.injective_witness,
                             describe({{"witness_pairs", static_cast<double>(d.witness.size())}})});
    report.checks.push_back({"injective_strictly_larger", injective.value > d.value,
                             describe({{"injective", injective.value}, {"delta", d.value}})});
    report.checks.push_back({"lower_bound_below_delta", bound <= d.value + slack,
                             describe({{"bound", bound}, {"delta", d.value}, {"slack", slack}})});
    report.checks.push_back({"submultiple_of_critical_gap", gap <= options.tol,
                             describe({{"gap", gap}, {"tol", options.tol}})});
    return report;
}

ReproReport repro_example3(const ReproOptions& options) {
    ReproReport report{"example3", {}};
    const CurvePair pair = example3_pair(options.samples);
    const DistanceResult d = pseudo_distance(pair.x, pair.y);
    const DistanceResult injective = pseudo_distance_injective(pair.x, pair.y);
    const double slack = sampling_slack(pair.x, pair.y);
    const MorseReport morse = morse_check(pair.x);
    const PipelineReport pipeline = run_limit_pipeline(pair.x, pair.y);

    report.checks.push_back({"delta_within_slack", d.value <= slack,
                             describe({{"delta", d.value}, {"slack", slack}})});
    report.checks.push_back({"plateau_flagged", !morse.is_morse_consistent && !morse.plateaus.empty(),
                             describe({{"plateaus", static_cast<double>(morse.plateaus.size())}})});
    report.checks.push_back({"injective_positive", injective.value > 0.0,
                             describe({{"injective", injective.value}})});
    report.checks.push_back(
        {"backward_single_valuedness_fails", !pipeline.lemma.property_iii_backward_ok,
         describe({{"failures", static_cast<double>(pipeline.lemma.failure_count)}})});
    const auto& violation = pipeline.extension.violation;
    report.checks.push_back(
        {"extension_refused", !pipeline.extension.extended && violation.has_value(),
         violation ? describe({{"from", violation->first}, {"to", violation->second}}) : "none"});
    return report;
}

ReproReport repro_theorem(const ReproOptions& options) {
    ReproReport report{"theorem", {}};
    for (std::size_t k = 0; k < options.pairs; ++k) {
        const TheoremCase c = run_theorem_case(options.seed + k, options.samples);
        report.checks.push_back({"seed_" + std::to_string(c.seed), c.passed(),
                                 describe({{"delta", c.delta},
                                           {"converged", c.converged ? 1.0 : 0.0},
                                           {"lemma", c.lemma_ok ? 1.0 : 0.0},
                                           {"extended", c.extended ? 1.0 : 0.0},
                                           {"residual", c.optimality_residual},
                                           {"bound", c.optimality_bound},
                                           {"inverse_error", c.inverse_error},
                                           {"mesh", c.mesh}})});
    }
    return report;
}

Json to_json(const ReproReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return Json{{"bundle", report.bundle}, {"passed", report.passed()}, {"checks", std::move(checks)}};
}

}  // namespace npd
