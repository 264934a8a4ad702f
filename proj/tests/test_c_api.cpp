#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "wkam/wkam.h"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    wkam_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("geometry through the C API") {
    const double a[] = {0.0, 0.5}, b[] = {0.75, 0.25};
    double d = 0.0;
    REQUIRE(wkam_config_dist(a, b, 2, &d) == WKAM_OK);
    CHECK(d == doctest::Approx(0.25));

    double c[3];
    const double raw[] = {0.7, 1.3, -0.1};
    REQUIRE(wkam_canonicalize(raw, 3, c) == WKAM_OK);
    CHECK(c[0] == doctest::Approx(0.3));
    CHECK(c[2] == doctest::Approx(0.9));

    const double x[] = {0.9}, y[] = {0.1};
    size_t assignment = 9, offset = 9;
    int64_t lift = 0;
    double cost = 0.0;
    REQUIRE(wkam_match(x, y, 1, &assignment, &lift, &offset, &cost) == WKAM_OK);
    CHECK(assignment == 0);
    CHECK(lift == 1);
    CHECK(cost == doctest::Approx(0.04));

    const double bad[] = {NAN};
    CHECK(wkam_canonicalize(bad, 1, c) == WKAM_INVALID_ARGUMENT);
    CHECK(std::string(wkam_last_error()).find("finite") != std::string::npos);
    CHECK(wkam_config_dist(nullptr, b, 2, &d) == WKAM_INVALID_ARGUMENT);
}

TEST_CASE("potential handles") {
    wkam_potential* w = nullptr;
    REQUIRE(wkam_potential_from_json(R"({"kind":"one_body","builtin":"cosine"})", &w) == WKAM_OK);
    const double top[] = {0.0, 0.0};
    double v = 0.0, k0 = 0.0;
    CHECK(wkam_potential_eval(w, top, 2, &v) == WKAM_OK);
    CHECK(v == doctest::Approx(1.0));
    CHECK(wkam_potential_bound(w, &k0) == WKAM_OK);
    CHECK(k0 == 1.0);
    const double q[] = {0.25};
    double g = 0.0;
    CHECK(wkam_potential_grad(w, q, 1, &g) == WKAM_OK);
    CHECK(g == doctest::Approx(-2.0 * M_PI));
    char* spec = nullptr;
    CHECK(wkam_potential_to_json(w, &spec) == WKAM_OK);
    CHECK(take(spec).find("one_body") != std::string::npos);
    wkam_potential_free(w);

    wkam_potential* badw = reinterpret_cast<wkam_potential*>(0x1);
    CHECK(wkam_potential_from_json(R"({"kind":"nope"})", &badw) == WKAM_INVALID_ARGUMENT);
    CHECK(badw == nullptr);
    CHECK(std::string(wkam_last_error()).find("potential.kind") != std::string::npos);
    CHECK(wkam_potential_from_json("{not json", &badw) == WKAM_INVALID_ARGUMENT);
}

TEST_CASE("curves, minimization and the oracle") {
    wkam_potential* w = nullptr;
    REQUIRE(wkam_potential_from_json(R"({"kind":"one_body","builtin":"cosine"})", &w) == WKAM_OK);
    const double m[] = {0.1}, n[] = {0.6};

    double ub = 0.0;
    CHECK(wkam_tonelli_upper_bound(m, n, 1, 1.0, w, &ub) == WKAM_OK);
    CHECK(ub == doctest::Approx(0.125 + 1.0));

    wkam_minimize_options opts;
    wkam_minimize_options_default(&opts);
    CHECK(opts.segments == 32);
    CHECK(opts.restarts == 4);
    wkam_curve* curve = nullptr;
    wkam_minimize_info info{};
    REQUIRE(wkam_minimize(m, n, 1, 1.0, w, &opts, &curve, &info) == WKAM_OK);
    CHECK(info.converged == 1);
    CHECK(info.value <= ub);
    size_t knots = 0, np = 0;
    CHECK(wkam_curve_shape(curve, &knots, &np) == WKAM_OK);
    CHECK(knots == 33);
    CHECK(np == 1);
    double total = 0.0;
    CHECK(wkam_curve_action(curve, w, nullptr, nullptr, &total) == WKAM_OK);
    CHECK(total == info.value);
    size_t violations = 1;
    CHECK(wkam_curve_holder(curve, nullptr, nullptr, &violations) == WKAM_OK);
    CHECK(violations == 0);
    CHECK(take([&] {
              char* s = nullptr;
              wkam_curve_to_csv(curve, &s);
              return s;
          }()).rfind("t,x1\n", 0) == 0);
    wkam_curve_free(curve);

    double dp = 0.0;
    CHECK(wkam_dp_minimize(m, n, 1, 1.0, w, 32, 8, &dp, nullptr) == WKAM_OK);
    CHECK(std::abs(dp - info.value) <= 0.1);
    CHECK(wkam_minimize(m, n, 1, -1.0, w, nullptr, &curve, &info) == WKAM_INVALID_ARGUMENT);

    const double times[] = {0.0, 1.0}, reals[] = {0.0, 0.5};
    CHECK(wkam_curve_create(times, reals, 2, 1, &curve) == WKAM_OK);
    double kin = 0.0;
    CHECK(wkam_curve_action(curve, w, &kin, nullptr, nullptr) == WKAM_OK);
    CHECK(kin == doctest::Approx(0.125));
    wkam_curve_free(curve);
    const double backwards[] = {1.0, 0.0};
    CHECK(wkam_curve_create(backwards, reals, 2, 1, &curve) == WKAM_INVALID_ARGUMENT);
    wkam_potential_free(w);
}

TEST_CASE("solve, calibrate and check through the C API") {
    wkam_potential* w = nullptr;
    REQUIRE(wkam_potential_from_json(R"({"kind":"one_body","builtin":"cosine"})", &w) == WKAM_OK);
    wkam_space* s = nullptr;
    REQUIRE(wkam_space_create(1, 64, 0, &s) == WKAM_OK);
    CHECK(wkam_space_size(s) == 64);

    wkam_solve_options so;
    wkam_solve_options_default(&so);
    wkam_solution* sol = nullptr;
    REQUIRE(wkam_solve(s, w, &so, &sol) == WKAM_OK);
    CHECK(std::abs(wkam_solution_lambda(sol) - 1.0) < 0.03);
    CHECK(wkam_solution_converged(sol) == 1);
    std::vector<double> u(64), tu(64);
    CHECK(wkam_solution_values(sol, u.data()) == WKAM_OK);

    wkam_step_options step;
    wkam_step_options_default(&step);
    CHECK(wkam_apply_T(s, w, &step, u.data(), tu.data()) == WKAM_OK);
    for (size_t k = 0; k < 64; ++k)
        CHECK(std::abs(tu[k] + wkam_solution_lambda(sol) * step.dt - u[k]) <= wkam_solution_residual(sol) + 1e-15);
    size_t pred = 99;
    CHECK(wkam_argmin_T(s, w, &step, u.data(), 0, &pred, nullptr) == WKAM_OK);
    CHECK(pred == 0);

    std::vector<size_t> states(101);
    double max_defect = 1.0;
    CHECK(wkam_calibrate(s, w, sol, 10, 1.0, states.data(), nullptr, &max_defect, nullptr) == WKAM_OK);
    CHECK(max_defect <= wkam_solution_residual(sol) + 1e-12);
    CHECK(states[0] == 10);

    int passed = 0;
    CHECK(wkam_check_domination(s, w, sol, 50, 1, nullptr, nullptr, &passed) == WKAM_OK);
    CHECK(passed == 1);
    CHECK(wkam_check_lipschitz(s, w, sol, nullptr, nullptr, nullptr, &passed) == WKAM_OK);
    CHECK(passed == 1);

    // binary table round trip and rebuild
    char* bytes = nullptr;
    size_t len = 0;
    REQUIRE(wkam_values_binary(s, u.data(), &bytes, &len) == WKAM_OK);
    size_t n = 0, m = 0, count = 0;
    std::vector<double> back(64);
    CHECK(wkam_values_binary_parse(bytes, len, &n, &m, &count, back.data()) == WKAM_OK);
    wkam_string_free(bytes);
    CHECK(n == 1);
    CHECK(m == 64);
    CHECK(back == u);
    wkam_solution* rebuilt = nullptr;
    CHECK(wkam_solution_create(s, back.data(), count, wkam_solution_lambda(sol), 0.01, wkam_solution_residual(sol),
                               1, 1, &rebuilt) == WKAM_OK);
    CHECK(wkam_calibrate(s, w, rebuilt, 10, 1.0, nullptr, nullptr, &max_defect, nullptr) == WKAM_OK);
    CHECK(wkam_solution_create(s, back.data(), 3, 1.0, 0.01, 0.0, 1, 1, &rebuilt) == WKAM_DIMENSION_MISMATCH);

    so.max_iters = 2;
    wkam_solution* partial = nullptr;
    CHECK(wkam_solve(s, w, &so, &partial) == WKAM_NOT_CONVERGED);
    CHECK(partial != nullptr);
    CHECK(wkam_solution_iterations(partial) == 2);
    wkam_solution_free(partial);

    wkam_space* huge = nullptr;
    CHECK(wkam_space_create(5, 500, 1000, &huge) == WKAM_CAPACITY);

    wkam_solution_free(sol);
    wkam_space_free(s);
    wkam_potential_free(w);
}

TEST_CASE("hash and verify through the C API") {
    char* h = nullptr;
    REQUIRE(wkam_content_hash("a", 1, &h) == WKAM_OK);
    CHECK(take(h) == "fnv1a64:af63dc4c8601ec8c");

    const char* small = R"({"law_pairs":20,"matching_pairs":10,"dp_cells":6,"dp_steps":2,"pendulum_cells":64,
        "separable_cells":16,"domination_samples":20,"tonelli_instances":2,"horizon":1.0})";
    char* report = nullptr;
    int passed = 0;
    REQUIRE(wkam_verify(small, &report, &passed) == WKAM_OK);
    const std::string text = take(report);
    CHECK(text.find("\"determinism\"") != std::string::npos);
    CHECK(wkam_verify(R"({"unknown":1})", nullptr, &passed) == WKAM_INVALID_ARGUMENT);
}
