#include "npd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "npd/corpus.hpp"
#include "npd/io.hpp"
#include "npd/limit.hpp"
#include "npd/matching.hpp"
#include "npd/persistence.hpp"
#include "npd/repro.hpp"

namespace npd {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Config {
    std::string x_path;
    std::string y_path;
    std::string curve_path;
    std::optional<std::size_t> samples;
    std::optional<double> tol;
    std::string orientation = "both";
    std::string format = "json";
    std::uint64_t seed = 0;
    std::string schedule = "1/k";
    std::size_t terms = 32;
    unsigned level = 6;
    bool injective = false;
    std::size_t extrema = 2;
    double amplitude = 0.0;
    std::size_t pairs = 20;
    std::string side = "x";
    std::string target;
};

OrientationPolicy policy_of(const std::string& text) {
    if (text == "preserving") return OrientationPolicy::preserving;
    if (text == "reversing") return OrientationPolicy::reversing;
    return OrientationPolicy::both;
}

SampledCurve load(const std::string& path, const Config& config) {
    SampledCurve curve = load_curve(path);
    return config.samples ? resample(curve, *config.samples) : curve;
}

// Schedules: "1/k", "1/k^p" for a positive integer p, "2^-k".
std::vector<double> parse_schedule(const std::string& text, std::size_t terms) {
    if (terms == 0) throw UsageError("--terms must be positive");
    std::function<double(double)> eps;
    if (text == "1/k") {
        eps = [](double k) { return 1.0 / k; };
    } else if (text == "2^-k") {
        eps = [](double k) { return std::ldexp(1.0, -static_cast<int>(k)); };
    } else if (text.rfind("1/k^", 0) == 0) {
        int power = 0;
        try {
            std::size_t used = 0;
            power = std::stoi(text.substr(4), &used);
            if (used != text.size() - 4) power = 0;
        } catch (const std::exception&) {
            power = 0;
        }
        if (power < 1) throw UsageError("unknown schedule '" + text + "'");
        eps = [power](double k) { return std::pow(k, -power); };
    } else {
        throw UsageError("unknown schedule '" + text + "' (use 1/k, 1/k^p or 2^-k)");
    }
    std::vector<double> schedule(terms);
    for (std::size_t k = 0; k < terms; ++k) schedule[k] = eps(static_cast<double>(k + 1));
    return schedule;
}

void emit(std::ostream& out, const Json& doc) { out << doc.dump() << '\n'; }

int run_distance(const Config& c, std::ostream& out) {
    const SampledCurve x = load(c.x_path, c);
    const SampledCurve y = load(c.y_path, c);
    const OrientationPolicy policy = policy_of(c.orientation);
    emit(out, to_json(c.injective ? pseudo_distance_injective(x, y, policy)
                                  : pseudo_distance(x, y, policy)));
    return 0;
}

int run_morse(const Config& c, std::ostream& out) {
    emit(out, to_json(morse_check(load(c.curve_path, c))));
    return 0;
}

int run_persistence(const Config& c, std::ostream& out) {
    const SampledCurve curve = load(c.curve_path, c);
    try {
        emit(out, to_json(sublevel_persistence(curve)));
    } catch (const PlateauError& e) {
        emit(out, Json{{"error", "plateau-present"}, {"message", e.what()}});
        return 1;
    }
    return 0;
}

int run_lowerbound(const Config& c, std::ostream& out) {
    const SampledCurve x = load(c.x_path, c);
    const SampledCurve y = load(c.y_path, c);
    try {
        const PersistenceDiagram dx = sublevel_persistence(x);
        const PersistenceDiagram dy = sublevel_persistence(y);
        emit(out, Json{{"lower_bound", bottleneck_distance(dx, dy)},
                       {"sampling_slack", sampling_slack(x, y)},
                       {"diagram_x", to_json(dx)},
                       {"diagram_y", to_json(dy)}});
    } catch (const PlateauError& e) {
        emit(out, Json{{"error", "plateau-present"}, {"message", e.what()}});
        return 1;
    }
    return 0;
}

int run_sequence(const Config& c, std::ostream& out) {
    const SampledCurve x = load(c.x_path, c);
    const SampledCurve y = load(c.y_path, c);
    const std::vector<double> schedule = parse_schedule(c.schedule, c.terms);
    const DistanceResult d = pseudo_distance(x, y, policy_of(c.orientation));
    const auto sequence = approximating_sequence(x, y, schedule, d);
    const double slack = sampling_slack(x, y);

    if (c.format == "csv") {
        out << "k,eps,theta_cost,bound\n";
        for (std::size_t k = 0; k < sequence.size(); ++k) {
            out << k + 1 << ',' << format_number(schedule[k]) << ','
                << format_number(theta_cost(sequence[k], x, y)) << ','
                << format_number(d.value + schedule[k] + slack) << '\n';
        }
        return 0;
    }
    Json rows = Json::array();
    for (std::size_t k = 0; k < sequence.size(); ++k) {
        rows.push_back({{"k", k + 1},
                        {"eps", schedule[k]},
                        {"theta_cost", theta_cost(sequence[k], x, y)},
                        {"bound", d.value + schedule[k] + slack}});
    }
    emit(out, Json{{"delta", d.value},
                   {"orientation", std::string(to_string(d.orientation_used))},
                   {"sampling_slack", slack},
                   {"schedule", c.schedule},
                   {"terms", std::move(rows)}});
    return 0;
}

int run_limit(const Config& c, std::ostream& out) {
    const SampledCurve x = load(c.x_path, c);
    const SampledCurve y = load(c.y_path, c);
    PipelineOptions options;
    options.terms = c.terms;
    options.level = c.level;
    options.tol = c.tol.value_or(options.tol);
    const PipelineReport report = run_limit_pipeline(x, y, options);

    if (c.format == "csv") {
        write_extension_csv(out, report.extension);
        return 0;
    }
    emit(out, Json{{"distance", to_json(report.distance)},
                   {"sequence_costs", report.sequence_costs},
                   {"rho", to_json(report.rho)},
                   {"lemma", to_json(report.lemma)},
                   {"extension", to_json(report.extension)}});
    return 0;
}

int run_repro(const Config& c, std::ostream& out) {
    ReproOptions options;
    options.samples = c.samples.value_or(options.samples);
    options.tol = c.tol.value_or(options.tol);
    options.seed = c.seed;
    options.pairs = c.pairs;
    ReproReport report;
    if (c.target == "example1") {
        report = repro_example1(options);
    } else if (c.target == "example3") {
        report = repro_example3(options);
    } else {
        report = repro_theorem(options);
    }
    emit(out, to_json(report));
    return report.passed() ? 0 : 1;
}

int run_corpus(const Config& c, std::ostream& out) {
    const std::size_t n = c.samples.value_or(512);
    std::optional<CurvePair> pair;
    if (c.target == "example1") {
        pair.emplace(example1_pair(n));
    } else if (c.target == "example3") {
        pair.emplace(example3_pair(n));
    } else {
        RandomMorsePair r = random_morse_pair(c.seed, c.extrema, n, c.amplitude);
        pair.emplace(CurvePair{std::move(r.x), std::move(r.y)});
    }
    if (c.format == "csv") {
        write_curve_csv(out, c.side == "y" ? pair->y : pair->x);
        return 0;
    }
    emit(out, Json{{"x", curve_to_json(pair->x)}, {"y", curve_to_json(pair->y)}});
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Natural pseudo-distance between sampled closed curves", "npd"};
    app.require_subcommand(1, 1);
    Config config;

    const auto orientations = CLI::IsMember({"both", "preserving", "reversing"});
    const auto positive = CLI::PositiveNumber;

    auto pair_inputs = [&](CLI::App* sub) {
        sub->add_option("--x", config.x_path, "First curve (JSON or .csv)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--y", config.y_path, "Second curve (JSON or .csv)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--samples", config.samples, "Resample both curves uniformly")
            ->check(CLI::Range(3, 1 << 20));
    };
    auto single_input = [&](CLI::App* sub) {
        sub->add_option("--curve", config.curve_path, "Curve (JSON or .csv)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--samples", config.samples, "Resample uniformly")->check(CLI::Range(3, 1 << 20));
    };
    auto format_option = [&](CLI::App* sub) {
        sub->add_option("--format", config.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    std::map<CLI::App*, std::function<int(const Config&, std::ostream&)>> handlers;

    auto* distance = app.add_subcommand("distance", "Discrete natural pseudo-distance and witness");
    pair_inputs(distance);
    distance->add_option("--orientation", config.orientation, "Allowed orientations")->check(orientations);
    distance->add_flag("--injective", config.injective, "Restrict to bijective couplings");
    handlers[distance] = run_distance;

    auto* morse = app.add_subcommand("morse", "Critical points and plateau diagnostics");
    single_input(morse);
    handlers[morse] = run_morse;

    auto* persistence = app.add_subcommand("persistence", "Sublevel persistence diagram");
    single_input(persistence);
    handlers[persistence] = run_persistence;

    auto* lowerbound = app.add_subcommand("lowerbound", "Bottleneck lower bound");
    pair_inputs(lowerbound);
    handlers[lowerbound] = run_lowerbound;

    auto* sequence = app.add_subcommand("sequence", "Costs of an approximating sequence");
    pair_inputs(sequence);
    sequence->add_option("--orientation", config.orientation, "Allowed orientations")->check(orientations);
    sequence->add_option("--schedule", config.schedule, "eps_k schedule: 1/k, 1/k^p or 2^-k");
    sequence->add_option("--terms", config.terms, "Number of terms")->check(positive);
    format_option(sequence);
    handlers[sequence] = run_sequence;

    auto* limit = app.add_subcommand("limit", "Limit relation, lemma checks and extension");
    pair_inputs(limit);
    limit->add_option("--tol", config.tol, "Cauchy tolerance")->check(positive);
    limit->add_option("--terms", config.terms, "Sequence length")->check(CLI::Range(3, 4096));
    limit->add_option("--level", config.level, "Dyadic grid level")->check(CLI::Range(1, 12));
    format_option(limit);
    handlers[limit] = run_limit;

    auto* repro = app.add_subcommand("repro", "Run a reproduction bundle");
    repro->add_option("bundle", config.target, "example1, example3 or theorem")
        ->required()
        ->check(CLI::IsMember({"example1", "example3", "theorem"}));
    repro->add_option("--samples", config.samples, "Samples per curve")->check(CLI::Range(64, 1 << 16));
    repro->add_option("--tol", config.tol, "Value tolerance")->check(positive);
    repro->add_option("--seed", config.seed, "First seed of the theorem bundle");
    repro->add_option("--pairs", config.pairs, "Seeded pairs in the theorem bundle")->check(positive);
    handlers[repro] = run_repro;

    auto* corpus = app.add_subcommand("corpus", "Export a corpus instance");
    corpus->add_option("instance", config.target, "example1, example3 or random")
        ->required()
        ->check(CLI::IsMember({"example1", "example3", "random"}));
    corpus->add_option("--samples", config.samples, "Samples per curve")->check(CLI::Range(8, 1 << 20));
    corpus->add_option("--seed", config.seed, "Seed of the random instance");
    corpus->add_option("--extrema", config.extrema, "Min/max pairs of the random instance")
        ->check(positive);
    corpus->add_option("--amplitude", config.amplitude, "Level perturbation of the random instance")
        ->check(CLI::Range(0.0, 0.499));
    corpus->add_option("--side", config.side, "Curve written in CSV mode")->check(CLI::IsMember({"x", "y"}));
    format_option(corpus);
    handlers[corpus] = run_corpus;

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        return handlers.at(chosen)(config, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace npd
