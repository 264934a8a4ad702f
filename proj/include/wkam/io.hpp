#pragma once

// File formats.
//
//   potential spec   JSON, see potential_from_json
//   configuration    JSON array of reals, or one CSV row
//   curve            CSV: t,x1..xn (lifted reals), one row per knot
//   value table      CSV: id,x1..xn,value   or binary: three little-endian
//                    uint64 (n, m, count) followed by count little-endian
//                    IEEE-754 doubles in state-id order
//
// Text outputs may carry a provenance preamble of '#' lines holding the
// effective run config and an FNV-1a 64 hash of the body.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wkam/action.hpp"
#include "wkam/grid.hpp"
#include "wkam/potential.hpp"
#include "wkam/verify.hpp"

namespace wkam::io {

using json = nlohmann::json;

/// Throws ErrorCode::invalid_argument naming the offending field relative to `path`.
Potential potential_from_json(const json& spec, const std::string& path = "potential");
json potential_to_json(const Potential& w);

ParticleConfig config_from_json(const json& points, const std::string& path);
std::vector<std::vector<double>> read_csv_rows(const std::string& file);
/// A JSON array or the first CSV row of a file.
ParticleConfig read_config_file(const std::string& file);

std::string format_double(double x);
std::string fnv1a64_hex(std::string_view bytes);

std::string curve_csv(const Curve& curve);
std::string values_csv(const GridStateSpace& space, std::span<const double> values);
std::string values_binary(const GridStateSpace& space, std::span<const double> values);

struct ValueTable {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::vector<double> values;
};
ValueTable parse_values_binary(std::string_view bytes);

/// "# config: <compact json>\n# content_hash: fnv1a64:<hex>\n" + body
std::string with_provenance(const json& config, const std::string& body);
/// Returns the body of a text file written by with_provenance (or the whole text).
std::string strip_provenance(const std::string& text);
/// Adds "config" and "content_hash" (over the dump of `doc` without them) to a JSON object.
json stamp(json doc, const json& config);

void write_file(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);

json action_report_json(const ActionReport& r);

/// Fields of VerifyOptions by name; unknown fields are rejected.
VerifyOptions verify_options_from_json(const json& spec, const std::string& path, VerifyOptions base = {});
json verify_options_to_json(const VerifyOptions& o);
json verify_report_json(const VerifyReport& r);

}  // namespace wkam::io
