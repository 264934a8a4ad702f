#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wkam/wkam.h"

namespace weakkam {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Failure : std::runtime_error {
    int code;
    Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void input_error(const std::string& msg) { throw Failure(1, msg); }

void ok(wkam_status s, const std::string& context) {
    if (s != WKAM_OK) input_error(context + ": " + wkam_last_error());
}

struct Free {
    void operator()(wkam_potential* p) const { wkam_potential_free(p); }
    void operator()(wkam_space* p) const { wkam_space_free(p); }
    void operator()(wkam_solution* p) const { wkam_solution_free(p); }
    void operator()(wkam_curve* p) const { wkam_curve_free(p); }
    void operator()(char* p) const { wkam_string_free(p); }
};
template <class T>
using Owned = std::unique_ptr<T, Free>;

std::string take(char* s) {
    Owned<char> guard(s);
    return s ? std::string(s) : std::string();
}

// ---------------------------------------------------------------- schema

enum class Type { uint, real, boolean, text_or_null, uint_or_null, points, points_or_null, potential };

struct Field {
    const char* path;
    Type type;
    json value;
    const char* doc;
};

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = {
        {"n", Type::uint, 1, "particles per configuration"},
        {"m", Type::uint, 64, "grid points per circle"},
        {"dt", Type::real, 0.01, "time step of the Lax-Oleinik operator"},
        {"tol", Type::real, 1e-9, "stopping tolerance on the spread of v - Tv"},
        {"max_iters", Type::uint, 200000, "maximum value-iteration sweeps"},
        {"max_states", Type::uint, 200000, "refuse grids with more states"},
        {"seed", Type::uint, 0, "seed for every randomized step"},
        {"potential", Type::potential, {{"kind", "one_body"}, {"builtin", "cosine"}}, "potential specification"},
        {"solve.prune_radius", Type::real, 0.0, "candidate radius for T (0: scan every state)"},
        {"minimize.start", Type::points, {0.25}, "start configuration"},
        {"minimize.end", Type::points, {0.75}, "end configuration"},
        {"minimize.start_file", Type::text_or_null, nullptr, "read the start configuration from JSON/CSV"},
        {"minimize.end_file", Type::text_or_null, nullptr, "read the end configuration from JSON/CSV"},
        {"minimize.duration", Type::real, 1.0, "travel time T"},
        {"minimize.segments", Type::uint, 32, "curve segments K"},
        {"minimize.restarts", Type::uint, 4, "descent starts per endpoint class"},
        {"minimize.tol", Type::real, 1e-8, "stationarity tolerance"},
        {"minimize.max_iters", Type::uint, 20000, "descent iterations per start"},
        {"minimize.max_classes", Type::uint, 4096, "cap on enumerated endpoint classes"},
        {"minimize.oracle", Type::boolean, false, "also run the grid dynamic-programming oracle"},
        {"minimize.oracle_cells", Type::uint, 32, "oracle grid points per circle"},
        {"minimize.oracle_steps", Type::uint, 8, "oracle time steps"},
        {"calibrate.solution_dir", Type::text_or_null, nullptr, "directory of a previous solve (default: --out)"},
        {"calibrate.state", Type::uint_or_null, nullptr, "state id to calibrate from"},
        {"calibrate.point", Type::points_or_null, nullptr, "configuration snapped to the grid (overrides state)"},
        {"calibrate.horizon", Type::real, 10.0, "length of the backward chain"},
        {"verify.law_pairs", Type::uint, 1000, "random value-function pairs for the operator laws"},
        {"verify.matching_pairs", Type::uint, 500, "random pairs per n in 2..6 for the matching oracle"},
        {"verify.dp_cells", Type::uint, 16, "grid for the path enumeration oracle"},
        {"verify.dp_steps", Type::uint, 4, "steps for the path enumeration oracle"},
        {"verify.pendulum_cells", Type::uint, 256, "grid for the pendulum checks"},
        {"verify.separable_cells", Type::uint, 48, "grid for the two-particle check"},
        {"verify.dt", Type::real, 0.01, "time step for the verification solves"},
        {"verify.tol", Type::real, 1e-9, "tolerance for the verification solves"},
        {"verify.horizon", Type::real, 10.0, "calibration horizon"},
        {"verify.domination_samples", Type::uint, 100, "random curves for the domination check"},
        {"verify.tonelli_instances", Type::uint, 10, "random minimization instances"},
    };
    return fields;
}

json::json_pointer pointer(const std::string& dotted) {
    std::string p;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) p += "/" + part;
    return json::json_pointer(p);
}

json defaults() {
    json d = json::object();
    for (const Field& f : schema()) d[pointer(f.path)] = f.value;
    return d;
}

bool is_section(const std::string& path) {
    return std::any_of(schema().begin(), schema().end(),
                       [&](const Field& f) { return std::string(f.path).rfind(path + ".", 0) == 0; });
}

const Field* field(const std::string& path) {
    for (const Field& f : schema())
        if (path == f.path) return &f;
    return nullptr;
}

void check_type(const Field& f, const json& v) {
    const std::string p = f.path;
    auto points = [&] {
        if (!v.is_array() || v.empty()) input_error(p + ": expected a non-empty array of numbers");
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_number()) input_error(p + "[" + std::to_string(i) + "]: expected a number");
    };
    switch (f.type) {
        case Type::uint:
            if (!v.is_number_unsigned()) input_error(p + ": expected a non-negative integer");
            break;
        case Type::real:
            if (!v.is_number()) input_error(p + ": expected a number");
            break;
        case Type::boolean:
            if (!v.is_boolean()) input_error(p + ": expected true or false");
            break;
        case Type::text_or_null:
            if (!v.is_null() && !v.is_string()) input_error(p + ": expected a string or null");
            break;
        case Type::uint_or_null:
            if (!v.is_null() && !v.is_number_unsigned()) input_error(p + ": expected a non-negative integer or null");
            break;
        case Type::points:
            points();
            break;
        case Type::points_or_null:
            if (!v.is_null()) points();
            break;
        case Type::potential:
            if (!v.is_object()) input_error(p + ": expected an object");
            break;
    }
}

void merge(json& into, const json& user, const std::string& prefix) {
    if (!user.is_object()) input_error((prefix.empty() ? "config" : prefix) + ": expected an object");
    for (const auto& [key, value] : user.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (const Field* f = field(path)) {
            check_type(*f, value);
            into[key] = value;
        } else if (is_section(path)) {
            merge(into[key], value, path);
        } else {
            input_error(path + ": unknown field");
        }
    }
}

void positive(const json& c, const std::string& path) {
    if (!(c[pointer(path)].get<double>() > 0.0)) input_error(path + ": must be positive");
}

void at_least(const json& c, const std::string& path, std::uint64_t lo) {
    if (c[pointer(path)].get<std::uint64_t>() < lo) input_error(path + ": must be at least " + std::to_string(lo));
}

json effective_config(const json& user) {
    json c = defaults();
    merge(c, user, "");
    positive(c, "dt");
    positive(c, "tol");
    positive(c, "minimize.duration");
    positive(c, "minimize.tol");
    positive(c, "verify.dt");
    positive(c, "verify.tol");
    if (c["solve"]["prune_radius"].get<double>() < 0.0) input_error("solve.prune_radius: must be non-negative");
    if (c["calibrate"]["horizon"].get<double>() < 0.0) input_error("calibrate.horizon: must be non-negative");
    if (c["verify"]["horizon"].get<double>() < 0.0) input_error("verify.horizon: must be non-negative");
    at_least(c, "n", 1);
    at_least(c, "m", 2);
    at_least(c, "max_iters", 1);
    at_least(c, "minimize.segments", 1);
    at_least(c, "minimize.restarts", 1);
    at_least(c, "minimize.max_iters", 1);
    at_least(c, "minimize.max_classes", 1);
    at_least(c, "minimize.oracle_cells", 2);
    at_least(c, "minimize.oracle_steps", 1);

    wkam_potential* w = nullptr;
    ok(wkam_potential_from_json(c["potential"].dump().c_str(), &w), "invalid potential");
    wkam_potential_free(w);
    return c;
}

void set_override(json& user, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) input_error("--set expects key=value, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::exception&) {
        value = text;
    }
    user[pointer(key)] = value;
}

// ---------------------------------------------------------------- outputs

std::string hash(const std::string& bytes) {
    char* out = nullptr;
    ok(wkam_content_hash(bytes.data(), bytes.size(), &out), "hash");
    return take(out);
}

std::string with_provenance(const json& config, const std::string& body) {
    return "# config: " + config.dump() + "\n# content_hash: " + hash(body) + "\n" + body;
}

json stamped(json doc, const json& config) {
    const std::string h = hash(doc.dump());
    doc["config"] = config;
    doc["content_hash"] = h;
    return doc;
}

void write(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) input_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) input_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Owned<wkam_potential> potential(const json& c) {
    wkam_potential* w = nullptr;
    ok(wkam_potential_from_json(c["potential"].dump().c_str(), &w), "invalid potential");
    return Owned<wkam_potential>(w);
}

Owned<wkam_space> space(const json& c) {
    wkam_space* s = nullptr;
    ok(wkam_space_create(c["n"].get<std::size_t>(), c["m"].get<std::size_t>(), c["max_states"].get<std::size_t>(), &s),
       "n, m");
    return Owned<wkam_space>(s);
}

std::vector<double> canonical(const json& points, const std::string& path) {
    std::vector<double> x = points.get<std::vector<double>>();
    std::vector<double> out(x.size());
    ok(wkam_canonicalize(x.data(), x.size(), out.data()), path);
    return out;
}

std::vector<double> endpoint(const json& section, const char* inline_key, const char* file_key) {
    if (section[file_key].is_string()) {
        const std::string file = section[file_key].get<std::string>();
        std::size_t n = 0;
        ok(wkam_read_config_file(file.c_str(), nullptr, 0, &n), std::string("minimize.") + file_key);
        std::vector<double> x(n);
        ok(wkam_read_config_file(file.c_str(), x.data(), n, &n), std::string("minimize.") + file_key);
        return x;
    }
    return canonical(section[inline_key], std::string("minimize.") + inline_key);
}

std::string curve_csv(const wkam_curve* c) {
    char* out = nullptr;
    ok(wkam_curve_to_csv(c, &out), "curve");
    return take(out);
}

// ---------------------------------------------------------------- commands

int cmd_solve(const json& c, const fs::path& dir, unsigned threads) {
    const auto w = potential(c);
    const auto s = space(c);
    wkam_solve_options so;
    wkam_solve_options_default(&so);
    so.dt = c["dt"];
    so.tol = c["tol"];
    so.max_iters = c["max_iters"];
    so.threads = threads;
    so.prune_radius = c["solve"]["prune_radius"];
    wkam_solution* raw = nullptr;
    const wkam_status st = wkam_solve(s.get(), w.get(), &so, &raw);
    if (st != WKAM_OK && st != WKAM_NOT_CONVERGED) ok(st, "solve");
    const Owned<wkam_solution> sol(raw);

    const std::size_t count = wkam_space_size(s.get());
    std::vector<double> u(count);
    ok(wkam_solution_values(sol.get(), u.data()), "solution");

    char* csv_raw = nullptr;
    ok(wkam_values_csv(s.get(), u.data(), &csv_raw), "values");
    const std::string csv = take(csv_raw);
    char* bin_raw = nullptr;
    std::size_t bin_len = 0;
    ok(wkam_values_binary(s.get(), u.data(), &bin_raw, &bin_len), "values");
    const Owned<char> bin_guard(bin_raw);
    const std::string bin(bin_raw, bin_len);

    const std::size_t iters = wkam_solution_iterations(sol.get());
    std::vector<double> lambdas(iters), spreads(iters);
    ok(wkam_solution_history(sol.get(), lambdas.data(), spreads.data()), "history");
    std::string conv = "iteration,lambda,spread\n";
    for (std::size_t k = 0; k < iters; ++k)
        conv += std::to_string(k + 1) + "," + num(lambdas[k]) + "," + num(spreads[k]) + "\n";

    double k0 = 0.0;
    ok(wkam_potential_bound(w.get(), &k0), "potential");
    const bool converged = wkam_solution_converged(sol.get()) != 0;
    const json doc = {{"lambda", wkam_solution_lambda(sol.get())},
                      {"dt", wkam_solution_dt(sol.get())},
                      {"residual", wkam_solution_residual(sol.get())},
                      {"iterations", iters},
                      {"converged", converged},
                      {"states", count},
                      {"potential_bound", k0},
                      {"values_csv_hash", hash(csv)},
                      {"values_bin_hash", hash(bin)}};
    write(dir / "solution.json", stamped(doc, c).dump(2) + "\n");
    write(dir / "values.csv", with_provenance(c, csv));
    write(dir / "values.bin", bin);
    write(dir / "convergence.csv", with_provenance(c, conv));
    return converged ? 0 : 2;
}

int cmd_minimize(const json& c, const fs::path& dir, unsigned) {
    const json& mc = c["minimize"];
    const auto w = potential(c);
    const std::vector<double> a = endpoint(mc, "start", "start_file");
    const std::vector<double> b = endpoint(mc, "end", "end_file");
    if (a.size() != b.size())
        input_error("minimize.end: has " + std::to_string(b.size()) + " points, start has " + std::to_string(a.size()));
    const double duration = mc["duration"];

    wkam_minimize_options mo;
    wkam_minimize_options_default(&mo);
    mo.segments = mc["segments"];
    mo.restarts = mc["restarts"];
    mo.tol = mc["tol"];
    mo.max_iters = mc["max_iters"];
    mo.max_classes = mc["max_classes"];
    mo.seed = c["seed"];
    wkam_curve* raw = nullptr;
    wkam_minimize_info info{};
    ok(wkam_minimize(a.data(), b.data(), a.size(), duration, w.get(), &mo, &raw, &info), "minimize");
    const Owned<wkam_curve> curve(raw);

    double kinetic = 0, pot = 0, total = 0, upper = 0, line_total = 0, k1 = 0, slack = 0;
    std::size_t violations = 0;
    ok(wkam_curve_action(curve.get(), w.get(), &kinetic, &pot, &total), "action");
    ok(wkam_tonelli_upper_bound(a.data(), b.data(), a.size(), duration, w.get(), &upper), "upper bound");
    wkam_curve* line_raw = nullptr;
    ok(wkam_line_curve(a.data(), b.data(), a.size(), duration, mo.segments, &line_raw), "line");
    const Owned<wkam_curve> line(line_raw);
    ok(wkam_curve_action(line.get(), w.get(), nullptr, nullptr, &line_total), "line action");
    ok(wkam_curve_holder(curve.get(), &k1, &slack, &violations), "holder");

    std::vector<double> energy(mo.segments), times(mo.segments + 1);
    ok(wkam_curve_energy(curve.get(), w.get(), energy.data()), "energy");
    ok(wkam_curve_data(curve.get(), times.data(), nullptr), "curve");
    std::string energy_csv = "t,energy\n";
    for (std::size_t j = 0; j < energy.size(); ++j)
        energy_csv += num(0.5 * (times[j] + times[j + 1])) + "," + num(energy[j]) + "\n";

    json report = {{"kinetic", kinetic},
                   {"potential_integral", pot},
                   {"total", total},
                   {"energy_samples", energy},
                   {"upper_bound", upper},
                   {"line_action", line_total},
                   {"grad_norm", info.grad_norm},
                   {"iterations", info.iterations},
                   {"converged", info.converged != 0},
                   {"classes_in_budget", info.classes_in_budget},
                   {"classes_optimized", info.classes_optimized},
                   {"enumeration_complete", info.enumeration_complete != 0},
                   {"holder", {{"k1", k1}, {"worst_slack", slack}, {"violations", violations}}}};
    if (mc["oracle"].get<bool>()) {
        double value = 0.0, k0 = 0.0;
        ok(wkam_dp_minimize(a.data(), b.data(), a.size(), duration, w.get(), mc["oracle_cells"], mc["oracle_steps"],
                            &value, nullptr),
           "oracle");
        ok(wkam_potential_bound(w.get(), &k0), "potential");
        const double gap = total - value;
        report["oracle"] = {{"value", value},
                            {"minimizer", total},
                            {"gap", gap},
                            {"relative_gap", std::abs(gap) / std::max(std::abs(value), k0 * duration)},
                            {"cells", mc["oracle_cells"]},
                            {"steps", mc["oracle_steps"]}};
    }
    write(dir / "curve.csv", with_provenance(c, curve_csv(curve.get())));
    write(dir / "energy.csv", with_provenance(c, energy_csv));
    write(dir / "action_report.json", stamped(report, c).dump(2) + "\n");
    return info.converged && info.enumeration_complete ? 0 : 2;
}

int cmd_calibrate(json c, const fs::path& dir, unsigned) {
    const json& cc = c["calibrate"];
    const fs::path src = cc["solution_dir"].is_string() ? fs::path(cc["solution_dir"].get<std::string>()) : dir;
    if (!fs::is_directory(src)) input_error("calibrate.solution_dir: no such directory '" + src.string() + "'");
    json solved;
    try {
        solved = json::parse(read(src / "solution.json"));
    } catch (const json::exception& e) {
        input_error((src / "solution.json").string() + ": " + e.what());
    }
    const std::string bin = read(src / "values.bin");
    if (solved.value("values_bin_hash", "") != hash(bin))
        input_error((src / "values.bin").string() + ": content hash does not match solution.json");

    // The grid and potential are those of the solve being calibrated.
    const json& sc = solved.at("config");
    for (const char* key : {"n", "m", "dt", "max_states", "potential"}) c[key] = sc.at(key);

    const auto w = potential(c);
    const auto s = space(c);
    std::size_t n = 0, m = 0, count = 0;
    ok(wkam_values_binary_parse(bin.data(), bin.size(), &n, &m, &count, nullptr), "values.bin");
    std::vector<double> u(count);
    ok(wkam_values_binary_parse(bin.data(), bin.size(), &n, &m, &count, u.data()), "values.bin");
    wkam_solution* raw = nullptr;
    const double residual = solved.at("residual");
    ok(wkam_solution_create(s.get(), u.data(), count, solved.at("lambda"), solved.at("dt"), residual,
                            solved.at("iterations"), solved.at("converged").get<bool>(), &raw),
       "values.bin");
    const Owned<wkam_solution> sol(raw);

    std::size_t state = cc["state"].is_null() ? 0 : cc["state"].get<std::size_t>();
    if (!cc["point"].is_null()) {
        const std::vector<double> p = canonical(cc["point"], "calibrate.point");
        ok(wkam_space_snap(s.get(), p.data(), p.size(), &state), "calibrate.point");
    }
    if (state >= count) input_error("calibrate.state: " + std::to_string(state) + " is not below " + std::to_string(count));

    const double dt = solved.at("dt");
    const double horizon = cc["horizon"];
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    std::vector<std::size_t> states(steps + 1);
    std::vector<double> defects(steps);
    double max_defect = 0.0;
    wkam_curve* craw = nullptr;
    ok(wkam_calibrate(s.get(), w.get(), sol.get(), state, horizon, states.data(), defects.data(), &max_defect, &craw),
       "calibrate.horizon");
    const Owned<wkam_curve> curve(craw);

    std::string dcsv = "step,time,state,predecessor,defect\n";
    for (std::size_t j = 0; j < steps; ++j)
        dcsv += std::to_string(j) + "," + num(-static_cast<double>(j) * dt) + "," + std::to_string(states[j]) + "," +
                std::to_string(states[j + 1]) + "," + num(defects[j]) + "\n";
    const bool pass = max_defect <= residual + 1e-12;
    const json summary = {{"state", state},
                          {"horizon", horizon},
                          {"steps", steps},
                          {"max_defect", max_defect},
                          {"residual", residual},
                          {"solution_hash", solved.value("content_hash", "")},
                          {"passed", pass}};
    write(dir / "calibrated_curve.csv", with_provenance(c, curve_csv(curve.get())));
    write(dir / "defects.csv", with_provenance(c, dcsv));
    write(dir / "calibration.json", stamped(summary, c).dump(2) + "\n");
    return pass ? 0 : 2;
}

int cmd_verify(const json& c, const fs::path& dir, unsigned threads, bool inject_fault) {
    json opts = c["verify"];
    opts["seed"] = c["seed"];
    opts["threads"] = threads;
    if (inject_fault) opts["inject_fault"] = true;
    char* raw = nullptr;
    int passed = 0;
    ok(wkam_verify(opts.dump().c_str(), &raw, &passed), "verify");
    json report = json::parse(take(raw));
    json echo = c;
    if (inject_fault) echo["verify"]["inject_fault"] = true;
    write(dir / "verify_report.json", stamped(report, echo).dump(2) + "\n");
    return passed ? 0 : 2;
}

}  // namespace

std::string default_config() { return defaults().dump(2); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weak KAM solutions of particle Lagrangians on the circle"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    unsigned threads = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
    bool oracle = false;
    bool inject_fault = false;
    bool print_defaults = false;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0: all cores)");
    auto* seed_opt = app.add_option("--seed", seed, "seed (overrides the config field)");
    app.add_option("--set", sets, "override one config field: dotted.key=json_value")->take_all();
    app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");
    app.set_help_all_flag("--help-all");

    auto* solve = app.add_subcommand("solve", "compute (u, lambda) on a grid state space");
    auto* minimize = app.add_subcommand("minimize", "minimize the action between two configurations");
    minimize->add_flag("--oracle", oracle, "cross-check against the grid dynamic-programming oracle");
    auto* calibrate = app.add_subcommand("calibrate", "backward calibrated chain of a solved instance");
    auto* verify = app.add_subcommand("verify", "run the property suite");
    verify->add_flag("--inject-fault", inject_fault)->group("");
    for (CLI::App* sub : {solve, minimize, calibrate, verify}) sub->fallthrough();

    std::vector<std::string> argv_store;
    argv_store.push_back("weakkam");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& a : argv_store) argv.push_back(a.data());
    if (std::find(args.begin(), args.end(), "--print-defaults") != args.end()) {
        out << default_config() << "\n";
        return 0;
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        json user = json::object();
        if (!config_path.empty()) {
            try {
                user = json::parse(read(config_path));
            } catch (const json::exception& e) {
                input_error(config_path + ": " + e.what());
            }
        }
        for (const std::string& s : sets) set_override(user, s);
        if (*seed_opt) user["seed"] = seed;
        if (oracle) user["minimize"]["oracle"] = true;
        const json config = effective_config(user);

        const fs::path dir(out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) input_error("--out: cannot create " + out_dir + ": " + ec.message());

        int code = 0;
        if (solve->parsed()) code = cmd_solve(config, dir, threads);
        else if (minimize->parsed()) code = cmd_minimize(config, dir, threads);
        else if (calibrate->parsed()) code = cmd_calibrate(config, dir, threads);
        else code = cmd_verify(config, dir, threads, inject_fault);
        if (code == 2) err << "finished with flags; see the outputs in " << dir.string() << "\n";
        return code;
    } catch (const Failure& f) {
        err << "error: " << f.what() << "\n";
        return f.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace weakkam
