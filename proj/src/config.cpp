// SPDX-License-Identifier: Apache-2.0
#include "seaice/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "seaice/error.hpp"
#include "seaice/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace seaice {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Validation, field + ": " + what);
}

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) invalid(field, what);
}

std::string range_str(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

// Typed access to an optional key of a JSON object, rejecting keys that
// were not consumed so that typos surface as errors.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw Error(ErrorCode::Parse, where_ + ": expected a JSON object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::Parse, path(key) + ": wrong type");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  Reader sub(const char* key) {
    seen_.insert(key);
    return Reader(j_.contains(key) ? j_.at(key) : empty(), path(key));
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? j_.at(key) : empty();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw Error(ErrorCode::Parse, path(it.key().c_str()) + ": unknown key");
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

FieldSpec read_field(Reader r, const FieldSpec& dflt) {
  FieldSpec f = dflt;
  r.get("family", f.family);
  r.get("a0", f.a0);
  r.get("a1", f.a1);
  r.get("kx", f.kx);
  r.get("ky", f.ky);
  r.get("px", f.px);
  r.get("py", f.py);
  r.get("lo", f.lo);
  r.get("hi", f.hi);
  r.get("modes", f.modes);
  r.finish();
  return f;
}

json write_field(const FieldSpec& f) {
  json j = {{"family", f.family}};
  if (f.family == "constant") {
    j["a0"] = f.a0;
  } else if (f.family == "single-mode") {
    j.update({{"a0", f.a0}, {"a1", f.a1}, {"kx", f.kx}, {"ky", f.ky}, {"px", f.px}, {"py", f.py}});
  } else {
    j.update({{"lo", f.lo}, {"hi", f.hi}, {"modes", f.modes}});
  }
  return j;
}

RegParams read_reg(Reader r, const RegParams& dflt) {
  RegParams p = dflt;
  r.get("epsilon", p.epsilon);
  r.get("omega", p.omega);
  r.get("mu", p.mu);
  r.get("lambda", p.lambda);
  r.get("iota", p.iota);
  r.get("nu", p.nu);
  r.finish();
  return p;
}

json write_reg(const RegParams& p) {
  return {{"epsilon", p.epsilon}, {"omega", p.omega}, {"mu", p.mu},
          {"lambda", p.lambda},   {"iota", p.iota},   {"nu", p.nu}};
}

GrowthFn read_growth(Reader r) {
  std::string family = "tanh";
  r.get("family", family);
  if (family == "tanh") {
    double alpha = 1.0, beta = 1.0, gamma = 1.0;
    r.get("alpha", alpha);
    r.get("beta", beta);
    r.get("gamma", gamma);
    r.finish();
    return growth_default(alpha, beta, gamma);
  }
  if (family == "constant") {
    double value = 0.0;
    r.get("value", value);
    r.finish();
    return growth_constant(value);
  }
  invalid(r.path("family"), "unknown growth family '" + family + "' (expected tanh or constant)");
}

json write_growth(const GrowthFn& g) {
  const auto& p = g.family_params();
  if (g.family() == "tanh") return {{"family", "tanh"}, {"alpha", p[0]}, {"beta", p[1]}, {"gamma", p[2]}};
  if (g.family() == "constant") return {{"family", "constant"}, {"value", p[0]}};
  throw Error(ErrorCode::InvalidArgument, "user-supplied growth functions cannot be serialized");
}

void check_field_spec(const FieldSpec& f, const std::string& where) {
  check(f.family == "constant" || f.family == "single-mode" || f.family == "random-smooth", where + ".family",
        "unknown family '" + f.family + "' (expected constant, single-mode or random-smooth)");
  check(std::isfinite(f.range_lo()) && std::isfinite(f.range_hi()), where, "parameters must be finite");
  if (f.family == "random-smooth") {
    check(f.lo <= f.hi, where, "random-smooth needs lo <= hi");
    check(f.modes >= 1, where + ".modes", "must be >= 1");
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9E3779B97F4A7C15ull * (salt + 1));
}

}  // namespace

double FieldSpec::range_lo() const {
  if (family == "single-mode") return a0 - std::abs(a1);
  if (family == "random-smooth") return lo;
  return a0;
}

double FieldSpec::range_hi() const {
  if (family == "single-mode") return a0 + std::abs(a1);
  if (family == "random-smooth") return hi;
  return a0;
}

std::vector<RegParams> ContinuationSpec::expand(const RegParams& base) const {
  if (!schedule.empty()) return schedule;
  std::vector<RegParams> out;
  for (int j = 0; j < entries; ++j) {
    const double f = std::pow(factor, j);
    RegParams p = base;
    p.mu = f * mu;
    p.lambda = f * lambda;
    p.iota = f * iota;
    p.nu = f * nu;
    out.push_back(p);
  }
  return out;
}

void RunConfig::validate() const {
  check(grid.nx >= 4 && grid.ny >= 4, "grid", "nx and ny must be >= 4");
  check(grid.lx > 0.0 && grid.ly > 0.0, "grid", "lx and ly must be > 0");
  try {
    phys.validate();
    reg.validate();
    cfl.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, e.what());
  }
  check(T >= 0.0 && std::isfinite(T), "time.T", "must be finite and >= 0");
  check(dt_max > 0.0, "time.dt_max", "must be > 0");
  check(slab_cap > 0.0, "time.slab_cap", "must be > 0");
  check(picard_tol > 0.0, "plan.picard_tol", "must be > 0");
  check(picard_max >= 1, "plan.picard_max", "must be >= 1");
  check(solver.tol_rel > 0.0, "plan.solver_tol", "must be > 0");
  check(solver.max_iter >= 0, "plan.solver_max_iter", "must be >= 0 (0 selects the default)");
  check(monitor_tol >= 0.0, "monitor.tol", "must be >= 0");

  if (initial.snapshot.empty()) {
    check_field_spec(initial.h, "initial.h");
    check_field_spec(initial.A, "initial.A");
    check_field_spec(initial.u_x, "initial.u_x");
    check_field_spec(initial.u_y, "initial.u_y");
    check(initial.h.range_lo() > 0.0, "initial.h",
          "thickness must satisfy min h_in > 0, family range is " +
              range_str(initial.h.range_lo(), initial.h.range_hi()));
    // single-mode compactness is clipped to [0, 1] by construction
    if (initial.A.family != "single-mode")
      check(initial.A.range_lo() >= 0.0 && initial.A.range_hi() <= 1.0, "initial.A",
            "compactness must satisfy 0 <= A_in <= 1, family range is " +
                range_str(initial.A.range_lo(), initial.A.range_hi()));
  } else {
    check(fs::exists(initial.snapshot), "initial.snapshot", "file '" + initial.snapshot + "' does not exist");
  }

  check(picard_study.target > 0.0 && picard_study.target < 1.0, "studies.picard.target", "must lie in (0, 1)");
  check(picard_study.max_halvings >= 0 && picard_study.extra_halvings >= 0, "studies.picard",
        "halving counts must be >= 0");
  check(picard_study.T_start >= 0.0, "studies.picard.T_start", "must be >= 0");
  check(continuation.entries >= 2 || continuation.schedule.size() >= 2, "studies.continuation",
        "needs at least two schedule entries");
  check(continuation.factor > 0.0 && continuation.factor <= 1.0, "studies.continuation.factor", "must lie in (0, 1]");
  check(continuation.mu >= 0.0 && continuation.lambda >= 0.0 && continuation.iota >= 0.0 && continuation.nu >= 0.0,
        "studies.continuation", "mu, lambda, iota, nu must be >= 0");
  check(!stability.deltas.empty(), "studies.stability.deltas", "must not be empty");
  for (double d : stability.deltas) check(d > 0.0, "studies.stability.deltas", "entries must be > 0");
  check(stability.max_spread >= 1.0, "studies.stability.max_spread", "must be >= 1");
}

IntegrateOptions RunConfig::integrate_options() const {
  IntegrateOptions o;
  o.dt_max = dt_max;
  o.slab_cap = slab_cap;
  o.cfl = cfl;
  o.picard_tol = picard_tol;
  o.picard_max = picard_max;
  o.solver = solver;
  o.monitor_tol = monitor_tol;
  o.fail_fast = fail_fast;
  return o;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig c;
  Reader r(root, "");

  {
    Reader g = r.sub("grid");
    g.get("nx", c.grid.nx);
    g.get("ny", c.grid.ny);
    g.get("lx", c.grid.lx);
    g.get("ly", c.grid.ly);
    g.finish();
  }
  {
    Reader p = r.sub("physics");
    PhysParams& pp = c.phys;
    p.get("rho_ice", pp.rho_ice);
    p.get("rho_a", pp.rho_a);
    p.get("rho_w", pp.rho_w);
    p.get("c_p", pp.c_p);
    p.get("c_a", pp.c_a);
    p.get("C_a", pp.C_a);
    p.get("C_w", pp.C_w);
    p.get("U_g", pp.U_g);
    p.get("U_w", pp.U_w);
    p.get("phi", pp.phi);
    p.get("theta", pp.theta);
    p.get("eta", pp.eta);
    p.get("h0", pp.h0);
    if (p.has("growth")) pp.growth = read_growth(p.sub("growth"));
    p.finish();
  }
  c.reg = read_reg(r.sub("regularization"), c.reg);
  {
    Reader i = r.sub("initial");
    i.get("snapshot", c.initial.snapshot);
    c.initial.h = read_field(i.sub("h"), c.initial.h);
    c.initial.A = read_field(i.sub("A"), c.initial.A);
    c.initial.u_x = read_field(i.sub("u_x"), c.initial.u_x);
    c.initial.u_y = read_field(i.sub("u_y"), c.initial.u_y);
    i.finish();
    if (!c.initial.snapshot.empty() && fs::path(c.initial.snapshot).is_relative())
      c.initial.snapshot = (fs::path(base_dir) / c.initial.snapshot).lexically_normal().string();
  }
  {
    Reader t = r.sub("time");
    t.get("T", c.T);
    t.get("dt_max", c.dt_max);
    t.get("slab_cap", c.slab_cap);
    t.get("cfl", c.cfl.cfl_number);
    t.finish();
  }
  {
    Reader p = r.sub("plan");
    p.get("picard_tol", c.picard_tol);
    p.get("picard_max", c.picard_max);
    p.get("solver_tol", c.solver.tol_rel);
    p.get("solver_max_iter", c.solver.max_iter);
    p.finish();
  }
  {
    Reader m = r.sub("monitor");
    m.get("tol", c.monitor_tol);
    m.get("fail_fast", c.fail_fast);
    m.finish();
  }
  {
    Reader o = r.sub("output");
    o.get("dir", c.out_dir);
    o.finish();
  }
  r.get("seed", c.seed);
  {
    Reader s = r.sub("studies");
    {
      Reader p = s.sub("picard");
      p.get("target", c.picard_study.target);
      p.get("max_halvings", c.picard_study.max_halvings);
      p.get("extra_halvings", c.picard_study.extra_halvings);
      p.get("T_start", c.picard_study.T_start);
      p.finish();
    }
    {
      Reader k = s.sub("continuation");
      ContinuationSpec& cs = c.continuation;
      k.get("entries", cs.entries);
      k.get("factor", cs.factor);
      k.get("mu", cs.mu);
      k.get("lambda", cs.lambda);
      k.get("iota", cs.iota);
      k.get("nu", cs.nu);
      const json& sched = k.raw("schedule");
      if (!sched.is_object() || !sched.empty()) {
        if (!sched.is_array()) throw Error(ErrorCode::Parse, "studies.continuation.schedule: expected an array");
        for (std::size_t n = 0; n < sched.size(); ++n)
          cs.schedule.push_back(read_reg(Reader(sched[n], "studies.continuation.schedule"), c.reg));
      }
      k.finish();
    }
    {
      Reader b = s.sub("stability");
      b.get("deltas", c.stability.deltas);
      b.get("max_spread", c.stability.max_spread);
      b.finish();
    }
    s.finish();
  }
  r.finish();

  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::Io, std::string("cannot read config: ") + e.what());
  }
  const fs::path parent = fs::path(path).parent_path();
  return parse_config(text, parent.empty() ? "." : parent.string());
}

std::string serialize_config(const RunConfig& c) {
  const PhysParams& pp = c.phys;
  json initial = json::object();
  if (!c.initial.snapshot.empty()) {
    initial["snapshot"] = c.initial.snapshot;
  } else {
    initial = {{"h", write_field(c.initial.h)},
               {"A", write_field(c.initial.A)},
               {"u_x", write_field(c.initial.u_x)},
               {"u_y", write_field(c.initial.u_y)}};
  }
  json time = {{"T", c.T}, {"dt_max", c.dt_max}, {"cfl", c.cfl.cfl_number}};
  if (std::isfinite(c.slab_cap)) time["slab_cap"] = c.slab_cap;

  json cont = {{"entries", c.continuation.entries},
               {"factor", c.continuation.factor},
               {"mu", c.continuation.mu},
               {"lambda", c.continuation.lambda},
               {"iota", c.continuation.iota},
               {"nu", c.continuation.nu}};
  if (!c.continuation.schedule.empty()) {
    json s = json::array();
    for (const RegParams& p : c.continuation.schedule) s.push_back(write_reg(p));
    cont["schedule"] = s;
  }

  const json root = {
      {"grid", {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"lx", c.grid.lx}, {"ly", c.grid.ly}}},
      {"physics",
       {{"rho_ice", pp.rho_ice},
        {"rho_a", pp.rho_a},
        {"rho_w", pp.rho_w},
        {"c_p", pp.c_p},
        {"c_a", pp.c_a},
        {"C_a", pp.C_a},
        {"C_w", pp.C_w},
        {"U_g", pp.U_g},
        {"U_w", pp.U_w},
        {"phi", pp.phi},
        {"theta", pp.theta},
        {"eta", pp.eta},
        {"h0", pp.h0},
        {"growth", write_growth(pp.growth)}}},
      {"regularization", write_reg(c.reg)},
      {"initial", initial},
      {"time", time},
      {"plan",
       {{"picard_tol", c.picard_tol},
        {"picard_max", c.picard_max},
        {"solver_tol", c.solver.tol_rel},
        {"solver_max_iter", c.solver.max_iter}}},
      {"monitor", {{"tol", c.monitor_tol}, {"fail_fast", c.fail_fast}}},
      {"output", {{"dir", c.out_dir}}},
      {"seed", c.seed},
      {"studies",
       {{"picard",
         {{"target", c.picard_study.target},
          {"max_halvings", c.picard_study.max_halvings},
          {"extra_halvings", c.picard_study.extra_halvings},
          {"T_start", c.picard_study.T_start}}},
        {"continuation", cont},
        {"stability", {{"deltas", c.stability.deltas}, {"max_spread", c.stability.max_spread}}}}}};
  return root.dump(2) + "\n";
}

void save_config(const RunConfig& cfg, const std::string& path) { write_file_atomic(path, serialize_config(cfg)); }

ScalarField make_field(const FieldSpec& spec, const Grid& g, std::uint64_t seed, double clip_lo, double clip_hi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ScalarField f(g);
  if (spec.family == "constant") {
    f = ScalarField(g, spec.a0);
  } else if (spec.family == "single-mode") {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        f(i, j) = spec.a0 + spec.a1 * std::sin(two_pi * spec.kx * g.x(i) / g.lx() + spec.px) *
                                std::sin(two_pi * spec.ky * g.y(j) / g.ly() + spec.py);
  } else if (spec.family == "random-smooth") {
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int K = spec.modes;
    for (int ky = -K; ky <= K; ++ky)
      for (int kx = 0; kx <= K; ++kx) {
        if (kx == 0 && ky <= 0) continue;  // one representative per +-k pair, no mean mode
        const double amp = (2.0 * unit() - 1.0) / (1.0 + kx * kx + ky * ky);
        const double phase = two_pi * unit();
        for (int j = 0; j < g.ny(); ++j)
          for (int i = 0; i < g.nx(); ++i)
            f(i, j) += amp * std::cos(two_pi * (kx * g.x(i) / g.lx() + ky * g.y(j) / g.ly()) + phase);
      }
    const double lo = f.min(), hi = f.max();
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double s = hi > lo ? (f[k] - lo) / (hi - lo) : 0.5;
      f[k] = std::clamp(spec.lo + (spec.hi - spec.lo) * s, spec.lo, spec.hi);
    }
  } else {
    invalid("initial", "unknown family '" + spec.family + "'");
  }
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::clamp(f[k], clip_lo, clip_hi);
  return f;
}

State make_initial_state(const RunConfig& cfg) {
  State s{VectorField(cfg.grid.make()), ScalarField(cfg.grid.make()), ScalarField(cfg.grid.make()), 0.0};
  if (!cfg.initial.snapshot.empty()) {
    s = read_snapshot(cfg.initial.snapshot);
    if (!(s.grid() == cfg.grid.make()))
      invalid("initial.snapshot", "grid of '" + cfg.initial.snapshot + "' differs from the configured grid");
  } else {
    const Grid g = cfg.grid.make();
    constexpr double inf = std::numeric_limits<double>::infinity();
    s.h = make_field(cfg.initial.h, g, mix_seed(cfg.seed, 0), -inf, inf);
    s.A = make_field(cfg.initial.A, g, mix_seed(cfg.seed, 1), 0.0, 1.0);
    s.u.x = make_field(cfg.initial.u_x, g, mix_seed(cfg.seed, 2), -inf, inf);
    s.u.y = make_field(cfg.initial.u_y, g, mix_seed(cfg.seed, 3), -inf, inf);
  }
  check(s.h.min() > 0.0, "initial.h", "thickness must satisfy min h_in > 0");
  check(s.A.min() >= 0.0 && s.A.max() <= 1.0, "initial.A", "compactness must satisfy 0 <= A_in <= 1");
  s.validate();
  return s;
}

}  // namespace seaice
