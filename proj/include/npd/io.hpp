#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "npd/curve.hpp"
#include "npd/limit.hpp"
#include "npd/matching.hpp"
#include "npd/persistence.hpp"

namespace npd {

using Json = nlohmann::ordered_json;

// {"samples": [{"theta": t, "value": v}, ...]}
SampledCurve curve_from_json(const Json& doc);
Json curve_to_json(const SampledCurve& curve);

// Header "theta,value", one sample per line.
SampledCurve curve_from_csv(std::istream& in);
void write_curve_csv(std::ostream& out, const SampledCurve& curve);

// Format chosen by extension: ".csv" is CSV, anything else JSON.
SampledCurve load_curve(const std::filesystem::path& path);

Json to_json(const MonotoneCoupling& coupling);
Json to_json(const DistanceResult& result);
Json to_json(const MorseReport& report);
Json to_json(const PersistenceDiagram& diagram);
Json to_json(const RelationRho& rho);
Json to_json(const LemmaReport& report);
Json to_json(const ExtensionReport& report);

// theta_x,theta_y,phi,psi_of_image,residual
void write_extension_csv(std::ostream& out, const ExtensionReport& report);

// Shortest round-trip decimal form, as used in every emitted table.
std::string format_number(double value);

}  // namespace npd
