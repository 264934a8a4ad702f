#include "wkam/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "wkam/error.hpp"

namespace wkam::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    fail(ErrorCode::invalid_argument, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key)) bad(path + "." + key, "unknown field");
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(path + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(path + "." + key, "must be finite");
    return x;
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& path) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) bad(path + "." + key, "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) bad(path + "." + key + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

PeriodicFunction function_from_json(const json& spec, const std::string& path) {
    const bool has_builtin = spec.contains("builtin");
    const bool has_fourier = spec.contains("fourier");
    if (has_builtin == has_fourier) bad(path, "exactly one of 'builtin' or 'fourier' is required");
    const double scale = number(spec, "scale", path, 1.0);

    if (has_builtin) {
        const json& b = spec.at("builtin");
        if (!b.is_string()) bad(path + ".builtin", "expected a string");
        const std::string name = b.get<std::string>();
        const double phase = number(spec, "phase", path, 0.0);
        if (name == "cosine") {
            if (spec.contains("phase")) bad(path + ".phase", "only valid with builtin 'shifted_cosine'");
            return PeriodicFunction::cosine(scale);
        }
        if (name == "sine") {
            if (spec.contains("phase")) bad(path + ".phase", "only valid with builtin 'shifted_cosine'");
            return PeriodicFunction::sine(scale);
        }
        if (name == "shifted_cosine") return PeriodicFunction::shifted_cosine(phase, scale);
        bad(path + ".builtin", "unknown builtin '" + name + "' (expected cosine, sine or shifted_cosine)");
    }

    const json& f = spec.at("fourier");
    const std::string fp = path + ".fourier";
    if (!f.is_object()) bad(fp, "expected an object");
    only_keys(f, fp, {"constant", "cos", "sin"});
    const double c0 = number(f, "constant", fp, 0.0);
    const std::vector<double> a = number_list(f, "cos", fp);
    const std::vector<double> b = number_list(f, "sin", fp);
    std::vector<Harmonic> hs;
    for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
        const double ck = k < a.size() ? a[k] : 0.0;
        const double sk = k < b.size() ? b[k] : 0.0;
        if (ck != 0.0 || sk != 0.0) hs.push_back({static_cast<int>(k + 1), ck, sk});
    }
    try {
        return PeriodicFunction(c0, std::move(hs)).scaled(scale);
    } catch (const Error& e) {
        bad(fp, e.what());
    }
}

json function_to_json(const PeriodicFunction& f) {
    int kmax = 0;
    for (const Harmonic& h : f.harmonics()) kmax = std::max(kmax, h.k);
    std::vector<double> a(static_cast<std::size_t>(kmax), 0.0), b(static_cast<std::size_t>(kmax), 0.0);
    for (const Harmonic& h : f.harmonics()) {
        a[static_cast<std::size_t>(h.k - 1)] += h.cos_coef;
        b[static_cast<std::size_t>(h.k - 1)] += h.sin_coef;
    }
    return json{{"constant", f.constant()}, {"cos", a}, {"sin", b}};
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_u64(std::string_view s, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(s[at + static_cast<std::size_t>(i)]);
    return v;
}

}  // namespace

Potential potential_from_json(const json& spec, const std::string& path) {
    if (!spec.is_object()) bad(path, "expected an object");
    if (!spec.contains("kind")) bad(path + ".kind", "missing");
    if (!spec.at("kind").is_string()) bad(path + ".kind", "expected a string");
    const std::string kind = spec.at("kind").get<std::string>();

    if (kind == "zero") {
        only_keys(spec, path, {"kind"});
        return Potential::zero();
    }
    if (kind == "constant") {
        only_keys(spec, path, {"kind", "value"});
        if (!spec.contains("value")) bad(path + ".value", "missing");
        return Potential::constant(number(spec, "value", path, 0.0));
    }
    if (kind == "one_body" || kind == "pairwise") {
        only_keys(spec, path, {"kind", "builtin", "fourier", "scale", "phase"});
        PeriodicFunction f = function_from_json(spec, path);
        return kind == "one_body" ? Potential::one_body(std::move(f)) : Potential::pairwise(std::move(f));
    }
    if (kind == "sum") {
        only_keys(spec, path, {"kind", "terms"});
        if (!spec.contains("terms") || !spec.at("terms").is_array()) bad(path + ".terms", "expected an array");
        std::vector<Potential> parts;
        const json& terms = spec.at("terms");
        for (std::size_t i = 0; i < terms.size(); ++i)
            parts.push_back(potential_from_json(terms[i], path + ".terms[" + std::to_string(i) + "]"));
        return Potential::sum(std::move(parts));
    }
    bad(path + ".kind", "unknown kind '" + kind + "' (expected zero, constant, one_body, pairwise or sum)");
}

json potential_to_json(const Potential& w) {
    switch (w.kind()) {
    case Potential::Kind::zero:
        return json{{"kind", "zero"}};
    case Potential::Kind::one_body:
    case Potential::Kind::pairwise:
        return json{{"kind", to_string(w.kind())}, {"fourier", function_to_json(w.function())}};
    case Potential::Kind::sum: {
        json terms = json::array();
        for (const Potential& p : w.parts()) terms.push_back(potential_to_json(p));
        return json{{"kind", "sum"}, {"terms", terms}};
    }
    }
    return json{{"kind", "zero"}};
}

ParticleConfig config_from_json(const json& points, const std::string& path) {
    if (!points.is_array() || points.empty()) bad(path, "expected a non-empty array of numbers");
    std::vector<double> xs;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].is_number()) bad(path + "[" + std::to_string(i) + "]", "expected a number");
        xs.push_back(points[i].get<double>());
    }
    try {
        return ParticleConfig::canonicalize(xs);
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

std::vector<std::vector<double>> read_csv_rows(const std::string& file) {
    std::istringstream in(read_file(file));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            const double x = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                numeric = false;
                break;
            }
            row.push_back(x);
        }
        if (!numeric) {
            if (rows.empty()) continue;  // header
            fail(ErrorCode::io, file + ":" + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ParticleConfig read_config_file(const std::string& file) {
    const std::string text = read_file(file);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            fail(ErrorCode::io, file + ": " + e.what());
        }
        return config_from_json(j, file);
    }
    const auto rows = read_csv_rows(file);
    if (rows.empty()) fail(ErrorCode::io, file + ": no configuration row");
    return ParticleConfig::canonicalize(rows.front());
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string curve_csv(const Curve& curve) {
    std::string out = "t";
    for (std::size_t i = 0; i < curve.particles(); ++i) out += ",x" + std::to_string(i + 1);
    out += '\n';
    for (std::size_t j = 0; j < curve.times().size(); ++j) {
        out += format_double(curve.times()[j]);
        for (double x : curve.knots()[j].reals()) out += ',' + format_double(x);
        out += '\n';
    }
    return out;
}

std::string values_csv(const GridStateSpace& space, std::span<const double> values) {
    if (values.size() != space.size()) fail(ErrorCode::dimension_mismatch, "value table does not match the space");
    std::string out = "id";
    for (std::size_t i = 0; i < space.particles(); ++i) out += ",x" + std::to_string(i + 1);
    out += ",value\n";
    for (std::size_t s = 0; s < space.size(); ++s) {
        out += std::to_string(s);
        const ParticleConfig c = space.config(s);
        for (double x : c.points()) out += ',' + format_double(x);
        out += ',' + format_double(values[s]) + '\n';
    }
    return out;
}

std::string values_binary(const GridStateSpace& space, std::span<const double> values) {
    if (values.size() != space.size()) fail(ErrorCode::dimension_mismatch, "value table does not match the space");
    std::string out;
    out.reserve(24 + 8 * values.size());
    put_u64(out, space.particles());
    put_u64(out, space.cells());
    put_u64(out, values.size());
    for (double v : values) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof v);
        std::memcpy(&bits, &v, sizeof v);
        put_u64(out, bits);
    }
    return out;
}

ValueTable parse_values_binary(std::string_view bytes) {
    if (bytes.size() < 24) fail(ErrorCode::io, "binary value table shorter than its header");
    ValueTable t;
    t.n = get_u64(bytes, 0);
    t.m = get_u64(bytes, 8);
    const std::uint64_t count = get_u64(bytes, 16);
    if (bytes.size() != 24 + 8 * count) fail(ErrorCode::io, "binary value table length does not match its count");
    t.values.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t bits = get_u64(bytes, 24 + 8 * k);
        std::memcpy(&t.values[k], &bits, sizeof bits);
    }
    return t;
}

std::string with_provenance(const json& config, const std::string& body) {
    return "# config: " + config.dump() + "\n# content_hash: fnv1a64:" + fnv1a64_hex(body) + "\n" + body;
}

std::string strip_provenance(const std::string& text) {
    std::size_t at = 0;
    while (at < text.size() && text[at] == '#') {
        const auto nl = text.find('\n', at);
        if (nl == std::string::npos) return {};
        at = nl + 1;
    }
    return text.substr(at);
}

json stamp(json doc, const json& config) {
    doc.erase("config");
    doc.erase("content_hash");
    const std::string hash = "fnv1a64:" + fnv1a64_hex(doc.dump());
    doc["config"] = config;
    doc["content_hash"] = hash;
    return doc;
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::io, "write to " + path + " failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json action_report_json(const ActionReport& r) {
    return json{{"kinetic", r.kinetic},
                {"potential_integral", r.potential_integral},
                {"total", r.total},
                {"energy_samples", r.energy_samples}};
}

namespace {

std::size_t count_field(const json& spec, const char* key, const std::string& path, std::size_t fallback) {
    if (!spec.contains(key)) return fallback;
    const json& v = spec.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        bad(path + "." + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

}  // namespace

VerifyOptions verify_options_from_json(const json& spec, const std::string& path, VerifyOptions o) {
    if (spec.is_null()) return o;
    if (!spec.is_object()) bad(path, "expected an object");
    only_keys(spec, path,
              {"seed", "law_pairs", "matching_pairs", "dp_cells", "dp_steps", "pendulum_cells", "separable_cells",
               "dt", "tol", "horizon", "domination_samples", "tonelli_instances", "inject_fault", "threads"});
    o.seed = count_field(spec, "seed", path, o.seed);
    o.threads = static_cast<unsigned>(count_field(spec, "threads", path, o.threads));
    o.law_pairs = count_field(spec, "law_pairs", path, o.law_pairs);
    o.matching_pairs = count_field(spec, "matching_pairs", path, o.matching_pairs);
    o.dp_cells = count_field(spec, "dp_cells", path, o.dp_cells);
    o.dp_steps = count_field(spec, "dp_steps", path, o.dp_steps);
    o.pendulum_cells = count_field(spec, "pendulum_cells", path, o.pendulum_cells);
    o.separable_cells = count_field(spec, "separable_cells", path, o.separable_cells);
    o.domination_samples = count_field(spec, "domination_samples", path, o.domination_samples);
    o.tonelli_instances = count_field(spec, "tonelli_instances", path, o.tonelli_instances);
    o.dt = number(spec, "dt", path, o.dt);
    o.tol = number(spec, "tol", path, o.tol);
    o.horizon = number(spec, "horizon", path, o.horizon);
    if (!(o.dt > 0.0)) bad(path + ".dt", "must be positive");
    if (!(o.tol > 0.0)) bad(path + ".tol", "must be positive");
    if (!(o.horizon >= 0.0)) bad(path + ".horizon", "must be non-negative");
    if (o.dp_cells < 2) bad(path + ".dp_cells", "must be at least 2");
    if (o.dp_steps < 1 || o.dp_steps > 6) bad(path + ".dp_steps", "must be in 1..6");
    if (o.pendulum_cells < 2) bad(path + ".pendulum_cells", "must be at least 2");
    if (o.separable_cells < 2) bad(path + ".separable_cells", "must be at least 2");
    if (spec.contains("inject_fault")) {
        if (!spec.at("inject_fault").is_boolean()) bad(path + ".inject_fault", "expected a boolean");
        o.inject_fault = spec.at("inject_fault").get<bool>();
    }
    return o;
}

json verify_options_to_json(const VerifyOptions& o) {
    return json{{"seed", o.seed},
                {"law_pairs", o.law_pairs},
                {"matching_pairs", o.matching_pairs},
                {"dp_cells", o.dp_cells},
                {"dp_steps", o.dp_steps},
                {"pendulum_cells", o.pendulum_cells},
                {"separable_cells", o.separable_cells},
                {"dt", o.dt},
                {"tol", o.tol},
                {"horizon", o.horizon},
                {"domination_samples", o.domination_samples},
                {"tonelli_instances", o.tonelli_instances}};
}

json verify_report_json(const VerifyReport& r) {
    json checks = json::array();
    for (const CheckResult& c : r.checks)
        checks.push_back(json{{"name", c.name},
                              {"passed", c.passed},
                              {"value", c.value},
                              {"limit", c.limit},
                              {"detail", c.detail}});
    return json{{"passed", r.passed}, {"checks", checks}};
}

}  // namespace wkam::io
