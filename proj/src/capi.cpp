// SPDX-License-Identifier: Apache-2.0
#include "seaice/seaice.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <new>
#include <string>

#include "seaice/config.hpp"
#include "seaice/error.hpp"
#include "seaice/invariants.hpp"
#include "seaice/io.hpp"

namespace fs = std::filesystem;
using namespace seaice;

struct seaice_config {
  RunConfig cfg;
};

struct seaice_state {
  State state;
};

namespace {

thread_local std::string g_last_error;

seaice_status fail(seaice_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
seaice_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SEAICE_OK;
  } catch (const Error& e) {
    return fail(static_cast<seaice_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SEAICE_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SEAICE_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SEAICE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SEAICE_ERR_INTERNAL, "unknown error");
  }
}

#define SEAICE_REQUIRE(cond, what) \
  if (!(cond)) return fail(SEAICE_ERR_INVALID_ARGUMENT, what)

std::string out_path(const RunConfig& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) line += (line.empty() ? "" : ",") + c;
  return line + "\n";
}

// Applies a mutation to a copy and commits only if the result validates.
template <class F>
seaice_status modify(seaice_config* h, F&& f) {
  SEAICE_REQUIRE(h, "config handle is NULL");
  return guarded([&] {
    RunConfig next = h->cfg;
    f(next);
    next.validate();
    h->cfg = std::move(next);
  });
}

}  // namespace

extern "C" {

const char* seaice_version(void) { return "1.0.0"; }

const char* seaice_status_string(seaice_status s) {
  switch (s) {
    case SEAICE_OK: return "ok";
    case SEAICE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SEAICE_ERR_PARSE: return "parse error";
    case SEAICE_ERR_VALIDATION: return "validation error";
    case SEAICE_ERR_IO: return "i/o error";
    case SEAICE_ERR_CFL: return "CFL violation";
    case SEAICE_ERR_DEGENERATE_THICKNESS: return "degenerate thickness";
    case SEAICE_ERR_NO_CONVERGENCE: return "no convergence";
    case SEAICE_ERR_NON_CONTRACTION: return "non-contraction";
    case SEAICE_ERR_BOUND_VIOLATION: return "bound violation";
    case SEAICE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* seaice_last_error(void) { return g_last_error.c_str(); }

seaice_status seaice_config_load(const char* path, seaice_config** out) {
  SEAICE_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new seaice_config{load_config(path)}; });
}

seaice_status seaice_config_parse(const char* json_text, const char* base_dir, seaice_config** out) {
  SEAICE_REQUIRE(json_text && out, "json_text and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new seaice_config{parse_config(json_text, base_dir ? base_dir : ".")}; });
}

void seaice_config_free(seaice_config* cfg) { delete cfg; }

seaice_status seaice_config_serialize(const seaice_config* cfg, char* buf, size_t cap, size_t* needed) {
  SEAICE_REQUIRE(cfg, "config handle is NULL");
  return guarded([&] {
    const std::string text = serialize_config(cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (!buf && cap == 0) return;
    if (!buf || cap < text.size() + 1) throw Error(ErrorCode::InvalidArgument, "buffer too small for the config text");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

seaice_status seaice_config_save(const seaice_config* cfg, const char* path) {
  SEAICE_REQUIRE(cfg && path, "config handle and path must not be NULL");
  return guarded([&] { save_config(cfg->cfg, path); });
}

seaice_status seaice_config_set_seed(seaice_config* cfg, uint64_t seed) {
  return modify(cfg, [&](RunConfig& c) { c.seed = seed; });
}

seaice_status seaice_config_set_grid_size(seaice_config* cfg, int n) {
  return modify(cfg, [&](RunConfig& c) { c.grid.nx = c.grid.ny = n; });
}

seaice_status seaice_config_set_end_time(seaice_config* cfg, double T) {
  return modify(cfg, [&](RunConfig& c) { c.T = T; });
}

seaice_status seaice_config_set_out_dir(seaice_config* cfg, const char* dir) {
  SEAICE_REQUIRE(dir, "dir must not be NULL");
  return modify(cfg, [&](RunConfig& c) { c.out_dir = dir; });
}

seaice_status seaice_config_set_fail_fast(seaice_config* cfg, int on) {
  return modify(cfg, [&](RunConfig& c) { c.fail_fast = on != 0; });
}

seaice_status seaice_config_get_seed(const seaice_config* cfg, uint64_t* seed) {
  SEAICE_REQUIRE(cfg && seed, "config handle and seed must not be NULL");
  *seed = cfg->cfg.seed;
  return SEAICE_OK;
}

seaice_status seaice_config_get_out_dir(const seaice_config* cfg, const char** dir) {
  SEAICE_REQUIRE(cfg && dir, "config handle and dir must not be NULL");
  *dir = cfg->cfg.out_dir.c_str();
  return SEAICE_OK;
}

seaice_status seaice_state_from_config(const seaice_config* cfg, seaice_state** out) {
  SEAICE_REQUIRE(cfg && out, "config handle and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new seaice_state{make_initial_state(cfg->cfg)}; });
}

seaice_status seaice_state_read(const char* manifest_path, seaice_state** out) {
  SEAICE_REQUIRE(manifest_path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new seaice_state{read_snapshot(manifest_path)}; });
}

seaice_status seaice_state_write(const seaice_state* st, const char* manifest_path) {
  SEAICE_REQUIRE(st && manifest_path, "state handle and path must not be NULL");
  return guarded([&] { write_snapshot(st->state, manifest_path); });
}

void seaice_state_free(seaice_state* st) { delete st; }

seaice_status seaice_state_grid(const seaice_state* st, int* nx, int* ny, double* lx, double* ly) {
  SEAICE_REQUIRE(st, "state handle is NULL");
  const Grid& g = st->state.grid();
  if (nx) *nx = g.nx();
  if (ny) *ny = g.ny();
  if (lx) *lx = g.lx();
  if (ly) *ly = g.ly();
  return SEAICE_OK;
}

seaice_status seaice_state_time(const seaice_state* st, double* t) {
  SEAICE_REQUIRE(st && t, "state handle and t must not be NULL");
  *t = st->state.t;
  return SEAICE_OK;
}

seaice_status seaice_state_get_field(const seaice_state* st, const char* name, double* buf, size_t len) {
  SEAICE_REQUIRE(st && name && buf, "state handle, name and buf must not be NULL");
  const State& s = st->state;
  const ScalarField* f = nullptr;
  if (std::strcmp(name, "u_x") == 0) f = &s.u.x;
  if (std::strcmp(name, "u_y") == 0) f = &s.u.y;
  if (std::strcmp(name, "h") == 0) f = &s.h;
  if (std::strcmp(name, "A") == 0) f = &s.A;
  SEAICE_REQUIRE(f, "unknown field name (expected u_x, u_y, h or A)");
  SEAICE_REQUIRE(len == f->size(), "buffer length must equal nx * ny");
  std::copy(f->values().begin(), f->values().end(), buf);
  return SEAICE_OK;
}

seaice_status seaice_run(const seaice_config* cfg, seaice_run_summary* out) {
  SEAICE_REQUIRE(cfg, "config handle is NULL");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const State s0 = make_initial_state(c);
    save_config(c, out_path(c, "config.json"));
    write_snapshot(s0, out_path(c, "initial.json"));
    const IntegrateResult r = integrate(s0, s0.t + c.T, c.integrate_options(), c.phys, c.reg);
    write_diagnostics(r.diagnostics, out_path(c, "diagnostics.csv"));
    write_snapshot(r.trajectory.back(), out_path(c, "final.json"));

    std::string v = csv_row({"t", "what", "value", "bound"});
    for (const Violation& x : r.violations)
      v += csv_row({format_double(x.t), x.what, format_double(x.value), format_double(x.bound)});
    write_file_atomic(out_path(c, "violations.csv"), v);

    std::string slabs = csv_row({"t0", "T_slab", "dt", "steps", "bisections", "final_ratio"});
    for (const SlabRecord& x : r.slabs)
      slabs += csv_row({format_double(x.t0), format_double(x.T_slab), format_double(x.dt), std::to_string(x.steps),
                        std::to_string(x.bisections), format_double(x.ratios.empty() ? 0.0 : x.ratios.back())});
    write_file_atomic(out_path(c, "slabs.csv"), slabs);

    if (out) {
      out->t_end = r.trajectory.back().t;
      out->records = static_cast<int>(r.diagnostics.size());
      out->slabs = static_cast<int>(r.slabs.size());
      out->violations = static_cast<int>(r.violations.size());
      out->mass_initial = r.diagnostics.front().mass;
      out->mass_final = r.diagnostics.back().mass;
      out->residual = trajectory_residual(r.trajectory, c.phys, c.reg);
    }
  });
}

seaice_status seaice_picard_study(const seaice_config* cfg, seaice_picard_summary* out) {
  SEAICE_REQUIRE(cfg, "config handle is NULL");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const State s0 = make_initial_state(c);
    const PicardStudySpec& ps = c.picard_study;
    double T_start = ps.T_start;
    if (T_start == 0.0) T_start = small_time_limits(s0, c.phys.growth).min();
    if (!std::isfinite(T_start))
      throw Error(ErrorCode::InvalidArgument, "picard study needs a finite T_start when the growth spread is 0");
    const PicardStudyResult r =
        picard_study(s0, T_start, c.integrate_options(), c.phys, c.reg, ps.target, ps.max_halvings, ps.extra_halvings);

    save_config(c, out_path(c, "config.json"));
    std::string csv = csv_row({"T_slab", "iteration", "ratio"});
    for (std::size_t k = 0; k < r.T_slabs.size(); ++k)
      for (std::size_t i = 0; i < r.ratios[k].size(); ++i)
        csv += csv_row({format_double(r.T_slabs[k]), std::to_string(i + 1), format_double(r.ratios[k][i])});
    write_file_atomic(out_path(c, "picard_study.csv"), csv);

    if (out) {
      out->slabs = static_cast<int>(r.T_slabs.size());
      out->located = r.located.has_value();
      out->T_located = r.located.value_or(0.0);
      out->target = ps.target;
      out->final_ratio_nonincreasing = 1;
      for (std::size_t k = 1; k < r.ratios.size(); ++k)
        if (!r.ratios[k].empty() && !r.ratios[k - 1].empty() && r.ratios[k].back() > r.ratios[k - 1].back())
          out->final_ratio_nonincreasing = 0;
    }
  });
}

seaice_status seaice_continuation_study(const seaice_config* cfg, seaice_continuation_summary* out) {
  SEAICE_REQUIRE(cfg, "config handle is NULL");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const State s0 = make_initial_state(c);
    const std::vector<RegParams> schedule = c.continuation.expand(c.reg);
    const ContinuationReport r = param_continuation(s0, s0.t + c.T, schedule, c.integrate_options(), c.phys);

    save_config(c, out_path(c, "config.json"));
    std::string csv = csv_row({"k", "mu", "lambda", "iota", "nu", "d_k"});
    for (std::size_t k = 0; k < r.schedule.size(); ++k) {
      const RegParams& p = r.schedule[k];
      csv += csv_row({std::to_string(k), format_double(p.mu), format_double(p.lambda), format_double(p.iota),
                      format_double(p.nu), k < r.differences.size() ? format_double(r.differences[k]) : ""});
    }
    write_file_atomic(out_path(c, "continuation.csv"), csv);

    if (out) {
      const auto& d = r.differences;
      out->differences = static_cast<int>(d.size());
      out->strictly_decreasing = 1;
      for (std::size_t k = 1; k < d.size(); ++k)
        if (!(d[k] < d[k - 1])) out->strictly_decreasing = 0;
      out->d_first = d.empty() ? 0.0 : d.front();
      out->d_last = d.empty() ? 0.0 : d.back();
    }
  });
}

seaice_status seaice_stability_study(const seaice_config* cfg, seaice_stability_summary* out) {
  SEAICE_REQUIRE(cfg, "config handle is NULL");
  return guarded([&] {
    const RunConfig& c = cfg->cfg;
    const State s0 = make_initial_state(c);
    std::string csv = csv_row({"delta", "numerator", "denominator", "ratio"});
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double d : c.stability.deltas) {
      const StabilityResult r = stability_experiment(s0, d, s0.t + c.T, c.integrate_options(), c.phys, c.reg);
      csv += csv_row({format_double(d), format_double(r.numerator), format_double(r.denominator),
                      format_double(r.ratio)});
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    save_config(c, out_path(c, "config.json"));
    write_file_atomic(out_path(c, "stability.csv"), csv);
    if (out) {
      out->count = static_cast<int>(c.stability.deltas.size());
      out->min_ratio = lo;
      out->max_ratio = hi;
      out->within_spread = hi <= c.stability.max_spread * lo;
    }
  });
}

seaice_status seaice_check_invariants(uint64_t seed, seaice_invariant_fn cb, void* user, int* failures) {
  return guarded([&] {
    int failed = 0;
    run_invariant_suite(seed, [&](const InvariantRow& r) {
      if (!r.pass) ++failed;
      if (cb) {
        const seaice_invariant_row row{r.suite.c_str(), r.check.c_str(), r.samples, r.worst, r.tolerance, r.pass};
        cb(&row, user);
      }
    });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
