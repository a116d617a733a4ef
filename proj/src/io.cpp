#include "npd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace npd {

namespace {

Json pair_json(const std::pair<double, double>& p) { return Json::array({p.first, p.second}); }

double parse_double(const std::string& text, std::size_t line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("csv line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return value;
}

}  // namespace

SampledCurve curve_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
        throw std::invalid_argument("curve JSON needs a \"samples\" array");
    }
    std::vector<Sample> samples;
    for (const auto& s : doc["samples"]) {
        if (!s.is_object() || !s.contains("theta") || !s.contains("value") ||
            !s["theta"].is_number() || !s["value"].is_number()) {
            throw std::invalid_argument("each sample needs numeric \"theta\" and \"value\"");
        }
        samples.push_back({s["theta"].get<double>(), s["value"].get<double>()});
    }
    return SampledCurve(std::move(samples));
}

Json curve_to_json(const SampledCurve& curve) {
    Json samples = Json::array();
    for (const auto& s : curve.samples()) samples.push_back({{"theta", s.theta}, {"value", s.value}});
    return Json{{"samples", std::move(samples)}};
}

SampledCurve curve_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv curve is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "theta,value") throw std::invalid_argument("csv curve needs the header theta,value");

    std::vector<Sample> samples;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("csv line " + std::to_string(number) + ": expected two fields");
        }
        samples.push_back(
            {parse_double(line.substr(0, comma), number), parse_double(line.substr(comma + 1), number)});
    }
    return SampledCurve(std::move(samples));
}

void write_curve_csv(std::ostream& out, const SampledCurve& curve) {
    out << "theta,value\n";
    for (const auto& s : curve.samples()) {
        out << format_number(s.theta) << ',' << format_number(s.value) << '\n';
    }
}

SampledCurve load_curve(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve file " + path.string());
    if (path.extension() == ".csv") return curve_from_csv(in);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("invalid JSON in " + path.string() + ": " + e.what());
    }
    return curve_from_json(doc);
}

Json to_json(const MonotoneCoupling& coupling) {
    Json pairs = Json::array();
    for (const auto& [i, j] : coupling.pairs()) pairs.push_back(Json::array({i, j}));
    return pairs;
}

Json to_json(const DistanceResult& result) {
    return Json{{"delta", result.value},
                {"orientation", std::string(to_string(result.orientation_used))},
                {"injective_witness", result.injective_witness},
                {"witness", to_json(result.witness)}};
}

Json to_json(const MorseReport& report) {
    Json criticals = Json::array();
    for (const auto& c : report.criticals) {
        criticals.push_back({{"index", c.index},
                             {"kind", c.kind == ExtremumKind::local_min ? "local-min" : "local-max"},
                             {"value", c.value}});
    }
    Json plateaus = Json::array();
    for (const auto& p : report.plateaus) plateaus.push_back({{"first", p.first}, {"length", p.length}});
    return Json{{"criticals", std::move(criticals)},
                {"plateaus", std::move(plateaus)},
                {"is_morse_consistent", report.is_morse_consistent}};
}

Json to_json(const PersistenceDiagram& diagram) {
    Json regular = Json::array();
    for (const auto& p : diagram.regular) regular.push_back(Json::array({p.birth, p.death}));
    return Json{{"regular", std::move(regular)},
                {"essential", Json::array({diagram.essential.birth, diagram.essential.death})}};
}

Json to_json(const RelationRho& rho) {
    auto entries = [](const std::vector<RhoEntry>& list) {
        Json out = Json::array();
        for (const auto& e : list) {
            out.push_back({{"source", e.source},
                           {"image", e.image},
                           {"residual", e.residual},
                           {"converged", e.converged}});
        }
        return out;
    };
    return Json{{"level", rho.grid.level},
                {"orientation", std::string(to_string(rho.orientation))},
                {"tolerance", rho.tolerance},
                {"window", rho.window},
                {"flagged", rho.flagged_count()},
                {"forward", entries(rho.forward)},
                {"backward", entries(rho.backward)}};
}

Json to_json(const LemmaReport& report) {
    Json modulus = Json::array();
    for (const auto& row : report.property_i_modulus) {
        modulus.push_back(
            {{"eta", row.eta}, {"forward_eps", row.forward_eps}, {"backward_eps", row.backward_eps}});
    }
    Json failures = Json::array();
    for (const auto& f : report.failures) {
        failures.push_back({{"property", f.property},
                            {"direction", f.direction},
                            {"first", pair_json(f.first)},
                            {"second", pair_json(f.second)}});
    }
    return Json{{"property_i_modulus", std::move(modulus)},
                {"property_ii_ok", report.property_ii_ok},
                {"property_iii_forward_ok", report.property_iii_forward_ok},
                {"property_iii_backward_ok", report.property_iii_backward_ok},
                {"property_iii_ok", report.property_iii_ok},
                {"match_radius", report.match_radius},
                {"image_slack", report.image_slack},
                {"max_value_gap", report.max_value_gap},
                {"value_gap_bound", report.value_gap_bound},
                {"failure_count", report.failure_count},
                {"failures", std::move(failures)}};
}

Json to_json(const ExtensionReport& report) {
    Json table = Json::array();
    for (const auto& row : report.table) {
        table.push_back(Json::array({row.theta_x, row.theta_y, row.phi, row.psi_of_image, row.residual}));
    }
    return Json{{"extended", report.extended},
                {"violation", report.violation ? pair_json(*report.violation) : Json(nullptr)},
                {"optimality_residual", report.optimality_residual},
                {"optimality_bound", report.optimality_bound},
                {"optimal", report.optimal},
                {"columns", Json::array({"theta_x", "theta_y", "phi", "psi_of_image", "residual"})},
                {"table", std::move(table)}};
}

void write_extension_csv(std::ostream& out, const ExtensionReport& report) {
    out << "theta_x,theta_y,phi,psi_of_image,residual\n";
    for (const auto& row : report.table) {
        out << format_number(row.theta_x) << ',' << format_number(row.theta_y) << ','
            << format_number(row.phi) << ',' << format_number(row.psi_of_image) << ','
            << format_number(row.residual) << '\n';
    }
}

std::string format_number(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

}  // namespace npd
