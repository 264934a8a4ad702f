#include "wkam/wkam.h"

#include <cstring>
#include <new>
#include <string>

#include "wkam/error.hpp"
#include "wkam/io.hpp"
#include "wkam/lax_oleinik.hpp"
#include "wkam/tonelli.hpp"
#include "wkam/verify.hpp"
#include "wkam/weak_kam.hpp"

struct wkam_potential {
    wkam::Potential w;
};
struct wkam_space {
    wkam::GridStateSpace s;
};
struct wkam_solution {
    wkam::WeakKamSolution sol;
};
struct wkam_curve {
    wkam::Curve c;
};

namespace {

thread_local std::string last_error;

wkam_status status_of(wkam::ErrorCode c) {
    return static_cast<wkam_status>(static_cast<int>(c));
}

template <class F>
wkam_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const wkam::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const nlohmann::json::exception& e) {
        last_error = e.what();
        return WKAM_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return WKAM_CAPACITY;
    } catch (const std::exception& e) {
        last_error = e.what();
        return WKAM_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return WKAM_INTERNAL;
    }
}

void need(const void* p, const char* name) {
    if (!p) wkam::fail(wkam::ErrorCode::invalid_argument, std::string(name) + " is null");
}

wkam::ParticleConfig config(const double* x, std::size_t n, const char* name) {
    need(x, name);
    return wkam::ParticleConfig::canonicalize(std::span<const double>(x, n));
}

char* dup(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.data(), s.size());
    p[s.size()] = '\0';
    return p;
}

wkam::StepPlan plan_of(const wkam_step_options* o) {
    wkam_step_options d;
    wkam_step_options_default(&d);
    if (!o) o = &d;
    wkam::StepPlan p;
    p.dt = o->dt;
    p.threads = o->threads;
    if (o->prune_radius > 0.0) p.prune_radius = o->prune_radius;
    return p;
}

wkam::MinimizeOptions minimize_of(const wkam_minimize_options* o) {
    wkam::MinimizeOptions m;
    if (!o) return m;
    m.segments = o->segments;
    m.restarts = o->restarts;
    m.tol = o->tol;
    m.max_iters = o->max_iters;
    m.seed = o->seed;
    m.max_classes = o->max_classes;
    return m;
}

void check_values(const wkam_space* s, const double* v, const char* name) {
    need(s, "space");
    need(v, name);
}

}  // namespace

extern "C" {

const char* wkam_last_error(void) { return last_error.c_str(); }
const char* wkam_version(void) { return "1.0.0"; }
void wkam_string_free(char* s) { delete[] s; }

wkam_status wkam_canonicalize(const double* points, size_t n, double* out) {
    return guarded([&] {
        need(out, "out");
        const wkam::ParticleConfig c = config(points, n, "points");
        std::copy(c.points().begin(), c.points().end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_config_dist(const double* a, const double* b, size_t n, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = wkam::config_dist(config(a, n, "a"), config(b, n, "b"));
        return WKAM_OK;
    });
}

wkam_status wkam_match(const double* a, const double* b, size_t n, size_t* assignment, int64_t* lifts,
                       size_t* offset, double* cost) {
    return guarded([&] {
        const wkam::Matching m = wkam::match(config(a, n, "a"), config(b, n, "b"));
        if (assignment) std::copy(m.assignment.begin(), m.assignment.end(), assignment);
        if (lifts) std::copy(m.lifts.begin(), m.lifts.end(), lifts);
        if (offset) *offset = m.offset;
        if (cost) *cost = m.cost;
        return WKAM_OK;
    });
}

wkam_status wkam_potential_from_json(const char* spec, wkam_potential** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = nullptr;
        const auto j = nlohmann::json::parse(spec);
        *out = new wkam_potential{wkam::io::potential_from_json(j)};
        return WKAM_OK;
    });
}

wkam_status wkam_potential_to_json(const wkam_potential* w, char** out) {
    return guarded([&] {
        need(w, "potential");
        need(out, "out");
        *out = dup(wkam::io::potential_to_json(w->w).dump());
        return WKAM_OK;
    });
}

wkam_status wkam_potential_eval(const wkam_potential* w, const double* points, size_t n, double* out) {
    return guarded([&] {
        need(w, "potential");
        need(out, "out");
        *out = w->w.eval(config(points, n, "points"));
        return WKAM_OK;
    });
}

wkam_status wkam_potential_grad(const wkam_potential* w, const double* reals, size_t n, double* out) {
    return guarded([&] {
        need(w, "potential");
        need(reals, "reals");
        need(out, "out");
        const std::vector<double> g = w->w.grad(std::span<const double>(reals, n));
        std::copy(g.begin(), g.end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_potential_bound(const wkam_potential* w, double* out) {
    return guarded([&] {
        need(w, "potential");
        need(out, "out");
        *out = w->w.certify_bound();
        return WKAM_OK;
    });
}

void wkam_potential_free(wkam_potential* w) { delete w; }

wkam_status wkam_curve_create(const double* times, const double* reals, size_t knots, size_t n, wkam_curve** out) {
    return guarded([&] {
        need(times, "times");
        need(reals, "reals");
        need(out, "out");
        *out = nullptr;
        if (knots < 2 || n < 1) wkam::fail(wkam::ErrorCode::invalid_argument, "a curve needs >= 2 knots and n >= 1");
        std::vector<wkam::LiftedConfig> ks;
        for (std::size_t j = 0; j < knots; ++j) ks.emplace_back(std::vector<double>(reals + j * n, reals + (j + 1) * n));
        *out = new wkam_curve{wkam::Curve(std::vector<double>(times, times + knots), std::move(ks))};
        return WKAM_OK;
    });
}

wkam_status wkam_curve_shape(const wkam_curve* c, size_t* knots, size_t* n) {
    return guarded([&] {
        need(c, "curve");
        if (knots) *knots = c->c.knots().size();
        if (n) *n = c->c.particles();
        return WKAM_OK;
    });
}

wkam_status wkam_curve_data(const wkam_curve* c, double* times, double* reals) {
    return guarded([&] {
        need(c, "curve");
        if (times) std::copy(c->c.times().begin(), c->c.times().end(), times);
        if (reals)
            for (const wkam::LiftedConfig& k : c->c.knots()) reals = std::copy(k.reals().begin(), k.reals().end(), reals);
        return WKAM_OK;
    });
}

wkam_status wkam_curve_action(const wkam_curve* c, const wkam_potential* w, double* kinetic,
                              double* potential_integral, double* total) {
    return guarded([&] {
        need(c, "curve");
        need(w, "potential");
        const wkam::ActionReport r = wkam::action(c->c, w->w);
        if (kinetic) *kinetic = r.kinetic;
        if (potential_integral) *potential_integral = r.potential_integral;
        if (total) *total = r.total;
        return WKAM_OK;
    });
}

wkam_status wkam_curve_energy(const wkam_curve* c, const wkam_potential* w, double* energy) {
    return guarded([&] {
        need(c, "curve");
        need(w, "potential");
        need(energy, "energy");
        const wkam::ActionReport r = wkam::action(c->c, w->w);
        std::copy(r.energy_samples.begin(), r.energy_samples.end(), energy);
        return WKAM_OK;
    });
}

wkam_status wkam_curve_holder(const wkam_curve* c, double* k1, double* worst_slack, size_t* violations) {
    return guarded([&] {
        need(c, "curve");
        const wkam::HolderReport r = wkam::holder_check(c->c);
        if (k1) *k1 = r.k1;
        if (worst_slack) *worst_slack = r.worst_slack;
        if (violations) *violations = r.violations;
        return WKAM_OK;
    });
}

wkam_status wkam_curve_to_csv(const wkam_curve* c, char** out) {
    return guarded([&] {
        need(c, "curve");
        need(out, "out");
        *out = dup(wkam::io::curve_csv(c->c));
        return WKAM_OK;
    });
}

void wkam_curve_free(wkam_curve* c) { delete c; }

wkam_status wkam_line_curve(const double* m, const double* n_cfg, size_t n, double duration, size_t segments,
                            wkam_curve** out) {
    return guarded([&] {
        need(out, "out");
        *out = new wkam_curve{wkam::line_curve(config(m, n, "m"), config(n_cfg, n, "n"), duration, segments)};
        return WKAM_OK;
    });
}

wkam_status wkam_tonelli_upper_bound(const double* m, const double* n_cfg, size_t n, double duration,
                                     const wkam_potential* w, double* out) {
    return guarded([&] {
        need(w, "potential");
        need(out, "out");
        *out = wkam::tonelli_upper_bound(config(m, n, "m"), config(n_cfg, n, "n"), duration, w->w);
        return WKAM_OK;
    });
}

void wkam_minimize_options_default(wkam_minimize_options* opts) {
    if (!opts) return;
    const wkam::MinimizeOptions d;
    *opts = {d.segments, d.restarts, d.tol, d.max_iters, d.seed, d.max_classes};
}

wkam_status wkam_minimize(const double* m, const double* n_cfg, size_t n, double duration, const wkam_potential* w,
                          const wkam_minimize_options* opts, wkam_curve** curve, wkam_minimize_info* info) {
    return guarded([&] {
        need(w, "potential");
        wkam::MinimizeResult r =
            wkam::minimize_action(config(m, n, "m"), config(n_cfg, n, "n"), duration, w->w, minimize_of(opts));
        if (info)
            *info = {r.report.total,     r.grad_norm,          r.iterations,
                     r.classes_in_budget, r.classes_optimized, r.converged ? 1 : 0,
                     r.enumeration_complete ? 1 : 0};
        if (curve) *curve = new wkam_curve{std::move(r.curve)};
        return WKAM_OK;
    });
}

wkam_status wkam_dp_minimize(const double* m, const double* n_cfg, size_t n, double duration,
                             const wkam_potential* w, size_t cells, size_t steps, double* value, wkam_curve** curve) {
    return guarded([&] {
        need(w, "potential");
        wkam::DpResult r = wkam::dp_minimize(config(m, n, "m"), config(n_cfg, n, "n"), duration, w->w, cells, steps);
        if (value) *value = r.value;
        if (curve) *curve = new wkam_curve{std::move(r.curve)};
        return WKAM_OK;
    });
}

wkam_status wkam_space_create(size_t n, size_t m, size_t max_states, wkam_space** out) {
    return guarded([&] {
        need(out, "out");
        *out = new wkam_space{wkam::GridStateSpace(n, m, max_states ? max_states
                                                                    : wkam::GridStateSpace::default_max_states)};
        return WKAM_OK;
    });
}

size_t wkam_space_size(const wkam_space* s) { return s ? s->s.size() : 0; }

wkam_status wkam_space_config(const wkam_space* s, size_t id, double* out) {
    return guarded([&] {
        need(s, "space");
        need(out, "out");
        if (id >= s->s.size()) wkam::fail(wkam::ErrorCode::invalid_argument, "state id out of range");
        const wkam::ParticleConfig c = s->s.config(id);
        std::copy(c.points().begin(), c.points().end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_space_snap(const wkam_space* s, const double* points, size_t n, size_t* id) {
    return guarded([&] {
        need(s, "space");
        need(id, "id");
        if (n != s->s.particles())
            wkam::fail(wkam::ErrorCode::dimension_mismatch, "configuration has " + std::to_string(n) +
                                                                " particles, space has " +
                                                                std::to_string(s->s.particles()));
        *id = s->s.snap(config(points, n, "points"));
        return WKAM_OK;
    });
}

void wkam_space_free(wkam_space* s) { delete s; }

void wkam_step_options_default(wkam_step_options* opts) {
    if (opts) *opts = {0.01, 0.0, 0};
}

wkam_status wkam_apply_T(const wkam_space* s, const wkam_potential* w, const wkam_step_options* opts,
                         const double* in, double* out) {
    return wkam_apply_T_steps(s, w, opts, in, 1, out);
}

wkam_status wkam_apply_T_steps(const wkam_space* s, const wkam_potential* w, const wkam_step_options* opts,
                               const double* in, size_t steps, double* out) {
    return guarded([&] {
        check_values(s, in, "in");
        need(w, "potential");
        need(out, "out");
        const wkam::LaxOleinik op(s->s, w->w, plan_of(opts));
        const std::vector<double> r = op.apply_steps(std::span<const double>(in, s->s.size()), steps);
        std::copy(r.begin(), r.end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_argmin_T(const wkam_space* s, const wkam_potential* w, const wkam_step_options* opts,
                          const double* in, size_t id, size_t* pred, double* value) {
    return guarded([&] {
        check_values(s, in, "in");
        need(w, "potential");
        if (id >= s->s.size()) wkam::fail(wkam::ErrorCode::invalid_argument, "state id out of range");
        wkam::StepPlan plan = plan_of(opts);
        plan.table = wkam::TablePolicy::on_the_fly;
        const wkam::LaxOleinik op(s->s, w->w, plan);
        const auto [p, v] = op.argmin(std::span<const double>(in, s->s.size()), id);
        if (pred) *pred = p;
        if (value) *value = v;
        return WKAM_OK;
    });
}

void wkam_solve_options_default(wkam_solve_options* opts) {
    if (!opts) return;
    const wkam::SolveOptions d;
    *opts = {d.dt, d.tol, d.max_iters, d.threads, 0.0};
}

wkam_status wkam_solve(const wkam_space* s, const wkam_potential* w, const wkam_solve_options* opts,
                       wkam_solution** out) {
    return guarded([&] {
        need(s, "space");
        need(w, "potential");
        need(out, "out");
        *out = nullptr;
        wkam::SolveOptions so;
        if (opts) {
            so.dt = opts->dt;
            so.tol = opts->tol;
            so.max_iters = opts->max_iters;
            so.threads = opts->threads;
            if (opts->prune_radius > 0.0) so.prune_radius = opts->prune_radius;
        }
        *out = new wkam_solution{wkam::solve(s->s, w->w, so)};
        if (!(*out)->sol.converged) {
            last_error = "value iteration did not converge within " + std::to_string(so.max_iters) + " sweeps";
            return WKAM_NOT_CONVERGED;
        }
        return WKAM_OK;
    });
}

double wkam_solution_lambda(const wkam_solution* sol) { return sol ? sol->sol.lambda : 0.0; }
double wkam_solution_residual(const wkam_solution* sol) { return sol ? sol->sol.residual : 0.0; }
double wkam_solution_dt(const wkam_solution* sol) { return sol ? sol->sol.dt : 0.0; }
size_t wkam_solution_iterations(const wkam_solution* sol) { return sol ? sol->sol.iterations : 0; }
int wkam_solution_converged(const wkam_solution* sol) { return sol && sol->sol.converged ? 1 : 0; }

wkam_status wkam_solution_values(const wkam_solution* sol, double* out) {
    return guarded([&] {
        need(sol, "solution");
        need(out, "out");
        std::copy(sol->sol.u.begin(), sol->sol.u.end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_solution_history(const wkam_solution* sol, double* lambda, double* spread) {
    return guarded([&] {
        need(sol, "solution");
        for (std::size_t k = 0; k < sol->sol.history.size(); ++k) {
            if (lambda) lambda[k] = sol->sol.history[k].lambda;
            if (spread) spread[k] = sol->sol.history[k].spread;
        }
        return WKAM_OK;
    });
}

wkam_status wkam_solution_create(const wkam_space* s, const double* values, size_t count, double lambda, double dt,
                                 double residual, size_t iterations, int converged, wkam_solution** out) {
    return guarded([&] {
        check_values(s, values, "values");
        need(out, "out");
        if (count != s->s.size())
            wkam::fail(wkam::ErrorCode::dimension_mismatch, "value table has " + std::to_string(count) +
                                                                " entries for " + std::to_string(s->s.size()) +
                                                                " states");
        if (!(dt > 0.0)) wkam::fail(wkam::ErrorCode::invalid_argument, "dt must be positive");
        wkam::WeakKamSolution sol;
        sol.u.assign(values, values + count);
        sol.lambda = lambda;
        sol.dt = dt;
        sol.residual = residual;
        sol.iterations = iterations;
        sol.converged = converged != 0;
        sol.reference_state = s->s.origin();
        *out = new wkam_solution{std::move(sol)};
        return WKAM_OK;
    });
}

void wkam_solution_free(wkam_solution* sol) { delete sol; }

wkam_status wkam_calibrate(const wkam_space* s, const wkam_potential* w, const wkam_solution* sol, size_t state,
                           double horizon, size_t* states, double* defects, double* max_defect, wkam_curve** curve) {
    return guarded([&] {
        need(s, "space");
        need(w, "potential");
        need(sol, "solution");
        if (sol->sol.u.size() != s->s.size())
            wkam::fail(wkam::ErrorCode::dimension_mismatch, "solution does not belong to this space");
        wkam::StepPlan plan;
        plan.dt = sol->sol.dt;
        plan.table = wkam::TablePolicy::on_the_fly;
        const wkam::LaxOleinik op(s->s, w->w, plan);
        wkam::CalibratedChain chain = wkam::calibrated_curve(op, sol->sol, state, horizon);
        if (states) std::copy(chain.states.begin(), chain.states.end(), states);
        if (defects) std::copy(chain.defects.begin(), chain.defects.end(), defects);
        if (max_defect) *max_defect = chain.max_defect;
        if (curve) *curve = new wkam_curve{std::move(chain.curve)};
        return WKAM_OK;
    });
}

wkam_status wkam_check_domination(const wkam_space* s, const wkam_potential* w, const wkam_solution* sol,
                                  size_t samples, uint64_t seed, double* worst_violation, double* slack,
                                  int* passed) {
    return guarded([&] {
        need(s, "space");
        need(w, "potential");
        need(sol, "solution");
        if (sol->sol.u.size() != s->s.size())
            wkam::fail(wkam::ErrorCode::dimension_mismatch, "solution does not belong to this space");
        wkam::StepPlan plan;
        plan.dt = sol->sol.dt;
        const wkam::LaxOleinik op(s->s, w->w, plan);
        const wkam::DominationReport r = wkam::check_domination(op, sol->sol, w->w, samples, seed);
        if (worst_violation) *worst_violation = r.worst_violation;
        if (slack) *slack = r.slack;
        if (passed) *passed = r.passed ? 1 : 0;
        return WKAM_OK;
    });
}

wkam_status wkam_check_lipschitz(const wkam_space* s, const wkam_potential* w, const wkam_solution* sol,
                                 double* empirical, double* bound, double* slack, int* passed) {
    return guarded([&] {
        need(s, "space");
        need(w, "potential");
        need(sol, "solution");
        if (sol->sol.u.size() != s->s.size())
            wkam::fail(wkam::ErrorCode::dimension_mismatch, "solution does not belong to this space");
        const wkam::LipschitzReport r = wkam::lipschitz_check(s->s, sol->sol, w->w);
        if (empirical) *empirical = r.empirical;
        if (bound) *bound = r.bound;
        if (slack) *slack = r.slack;
        if (passed) *passed = r.passed ? 1 : 0;
        return WKAM_OK;
    });
}

wkam_status wkam_values_csv(const wkam_space* s, const double* values, char** out) {
    return guarded([&] {
        check_values(s, values, "values");
        need(out, "out");
        *out = dup(wkam::io::values_csv(s->s, std::span<const double>(values, s->s.size())));
        return WKAM_OK;
    });
}

wkam_status wkam_values_binary(const wkam_space* s, const double* values, char** out, size_t* len) {
    return guarded([&] {
        check_values(s, values, "values");
        need(out, "out");
        need(len, "len");
        const std::string bytes = wkam::io::values_binary(s->s, std::span<const double>(values, s->s.size()));
        *out = dup(bytes);
        *len = bytes.size();
        return WKAM_OK;
    });
}

wkam_status wkam_values_binary_parse(const char* bytes, size_t len, size_t* n, size_t* m, size_t* count,
                                     double* out) {
    return guarded([&] {
        need(bytes, "bytes");
        const wkam::io::ValueTable t = wkam::io::parse_values_binary(std::string_view(bytes, len));
        if (n) *n = t.n;
        if (m) *m = t.m;
        if (count) *count = t.values.size();
        if (out) std::copy(t.values.begin(), t.values.end(), out);
        return WKAM_OK;
    });
}

wkam_status wkam_content_hash(const char* bytes, size_t len, char** out) {
    return guarded([&] {
        need(bytes, "bytes");
        need(out, "out");
        *out = dup("fnv1a64:" + wkam::io::fnv1a64_hex(std::string_view(bytes, len)));
        return WKAM_OK;
    });
}

wkam_status wkam_read_config_file(const char* path, double* out, size_t cap, size_t* n) {
    return guarded([&] {
        need(path, "path");
        need(n, "n");
        const wkam::ParticleConfig c = wkam::io::read_config_file(path);
        *n = c.size();
        if (out) {
            if (c.size() > cap)
                wkam::fail(wkam::ErrorCode::capacity, std::string(path) + " holds " + std::to_string(c.size()) +
                                                          " points, buffer has room for " + std::to_string(cap));
            std::copy(c.points().begin(), c.points().end(), out);
        }
        return WKAM_OK;
    });
}

wkam_status wkam_verify(const char* options_json, char** report_json, int* passed) {
    return guarded([&] {
        wkam::VerifyOptions o;
        if (options_json) o = wkam::io::verify_options_from_json(nlohmann::json::parse(options_json), "verify");
        const wkam::VerifyReport r = wkam::run_verify(o);
        if (report_json) *report_json = dup(wkam::io::verify_report_json(r).dump());
        if (passed) *passed = r.passed ? 1 : 0;
        return WKAM_OK;
    });
}

}  // extern "C"
