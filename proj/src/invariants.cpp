// SPDX-License-Identifier: Apache-2.0
#include "seaice/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "seaice/config.hpp"
#include "seaice/io.hpp"
#include "seaice/momentum.hpp"
#include "seaice/rheology.hpp"
#include "seaice/thermo.hpp"
#include "seaice/transport.hpp"

namespace fs = std::filesystem;

namespace seaice {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t bits() { return gen_(); }

  ScalarField noise(const Grid& g, double lo, double hi) {
    ScalarField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = uniform(lo, hi);
    return f;
  }

  ScalarField smooth(const Grid& g, double lo, double hi) {
    FieldSpec spec;
    spec.family = "random-smooth";
    spec.lo = lo;
    spec.hi = hi;
    spec.modes = 3;
    return make_field(spec, g, bits(), lo, hi);
  }

 private:
  std::mt19937_64 gen_;
};

class Collector {
 public:
  explicit Collector(const std::function<void(const InvariantRow&)>& cb) : cb_(cb) {}

  void add(std::string suite, std::string check, int samples, double worst, double tol, bool pass) {
    rows_.push_back({std::move(suite), std::move(check), samples, worst, tol, pass});
    if (cb_) cb_(rows_.back());
  }

  /// Defect-style row: passes when worst <= tol.
  void defect(std::string suite, std::string check, int samples, double worst, double tol) {
    add(std::move(suite), std::move(check), samples, worst, tol, worst <= tol);
  }

  std::vector<InvariantRow> take() { return std::move(rows_); }

 private:
  const std::function<void(const InvariantRow&)>& cb_;
  std::vector<InvariantRow> rows_;
};

void calculus_suite(Rng& rng, Collector& out) {
  const Grid g(32, 32);
  constexpr int n = 20;
  double sbp = 0.0, ident = 0.0, lap = 0.0;
  for (int s = 0; s < n; ++s) {
    const ScalarField f = rng.noise(g, -1.0, 1.0), w = rng.noise(g, -1.0, 1.0);
    const double scale = std::sqrt(inner(f, f) * inner(w, w)) / g.dx();
    sbp = std::max({sbp, std::abs(inner(d_x(f), w) + inner(f, d_x(w))) / scale,
                    std::abs(inner(d_y(f), w) + inner(f, d_y(w))) / scale});
    lap = std::max(lap, std::abs(inner(laplacian(f), w) - inner(f, laplacian(w))) / (scale / g.dx()));

    const VectorField u(rng.noise(g, -1.0, 1.0), rng.noise(g, -1.0, 1.0));
    const TensorField gu = grad_vec(u);
    const double full = inner(gu, gu);
    const double sym = 0.5 * inner(sym_grad(u), sym_grad(u)) - inner(div(u), div(u));
    ident = std::max(ident, std::abs(full - sym) / full);
  }
  out.defect("calculus", "summation by parts d_x, d_y", n, sbp, 1e-12);
  out.defect("calculus", "laplacian self-adjoint", n, lap, 1e-12);
  out.defect("calculus", "|grad u|^2 = |D u|^2 / 2 - (div u)^2", n, ident, 1e-12);
}

void rheology_suite(Rng& rng, Collector& out) {
  constexpr int n = 20000;
  const double eps_choices[3] = {1e-3, 1e-1, 1.0};
  double sign = 0.0, recon = 0.0, lower = 0.0;
  for (int s = 0; s < n; ++s) {
    const double p = rng.uniform(0.15, 10.0);
    const double eps = eps_choices[s % 3];
    Mat2 g1, g2;
    for (double& v : g1) v = rng.uniform(-2.0, 2.0);
    for (double& v : g2) v = rng.uniform(-2.0, 2.0);
    const MonotonicityGap m = monotonicity_gap(p, p, g1, g2, eps);
    Mat2 dg;
    for (int k = 0; k < 4; ++k) dg[k] = g1[k] - g2[k];
    const Mat2 t1 = saturating_term(p, g1, eps), t2 = saturating_term(p, g2, eps);
    const double mag = std::abs(frob_dot(t1, dg)) + std::abs(frob_dot(t2, dg));
    sign = std::max(sign, -m.lhs / mag);
    recon = std::max(recon, std::abs(m.lhs - m.bound) / std::max(std::abs(m.lhs), std::abs(m.bound)));
    lower = std::max(lower, (m.lower - m.lhs) / m.lhs);
  }
  out.defect("rheology", "monotonicity lhs >= 0", n, sign, 1e-14);
  out.defect("rheology", "symmetric-form reconstruction", n, recon, 1e-12);
  out.defect("rheology", "eps-weighted lower bound", n, lower, 1e-12);
}

void thermo_suite(Rng& rng, Collector& out) {
  const Grid g(50, 40);
  const GrowthFn f = growth_default(1.0, 1.0, 1.0);
  double worst = 0.0;
  int samples = 0;
  for (int s = 0; s < 5; ++s) {
    const ScalarField h = rng.noise(g, 0.0, 5.0), A = rng.noise(g, 0.0, 1.0);
    const double omega = rng.uniform(1e-3, 1.0), nu = s == 0 ? 0.0 : rng.uniform(0.0, 1.0);
    const ScalarField sh = src_h(h, A, omega, nu, f);
    for (std::size_t k = 0; k < sh.size(); ++k) worst = std::max(worst, std::abs(sh[k]) / (3.0 * f.spread()));
    samples += static_cast<int>(sh.size());
  }
  out.add("thermo", "|src_h| <= 3 (|f_hi| + |f_lo|)", samples, worst, 1.0, worst <= 1.0);
}

void transport_suite(Rng& rng, Collector& out) {
  const Grid g(32, 32);
  constexpr int n = 10;
  double cons = 0.0, maxp = 0.0, ones = 0.0;
  for (int s = 0; s < n; ++s) {
    const ScalarField h = rng.smooth(g, 0.5, 1.5);
    const VectorField u(rng.smooth(g, -1.0, 1.0), rng.smooth(g, -1.0, 1.0));
    const double dt = 0.9 * monotone_dt_limit(u);
    const ScalarField zero(g);
    const ScalarField h1 = step_h(h, u, zero, dt);
    cons = std::max(cons, std::abs(integral(h1) - integral(h)) / integral(h));

    const ScalarField q = rng.smooth(g, 0.0, 1.0);
    const ScalarField q1 = advect_nonconservative(q, u, dt);
    maxp = std::max({maxp, q.min() - q1.min(), q1.max() - q.max()});

    const ScalarField one(g, 1.0);
    const ScalarField a1 = step_A(one, u, zero, one, dt);
    for (std::size_t k = 0; k < a1.size(); ++k) ones = std::max(ones, std::abs(a1[k] - 1.0));
  }
  out.defect("transport", "mass conservation per step", n, cons, 1e-13);
  out.defect("transport", "maximum principle of advection", n, maxp, 1e-14);
  out.defect("transport", "A = 1 preserved", n, ones, 1e-13);
}

void momentum_suite(Rng& rng, Collector& out) {
  const Grid g(24, 24);
  PhysParams pp;
  RegParams rp;
  rp.mu = 0.05;
  rp.lambda = 0.05;
  rp.iota = 1e-3;
  constexpr int n = 20;
  double sym = 0.0, pos = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n; ++s) {
    const ScalarField h = rng.smooth(g, 0.5, 1.5), A = rng.smooth(g, 0.0, 1.0);
    const VectorField lag(rng.smooth(g, -1.0, 1.0), rng.smooth(g, -1.0, 1.0));
    const MomentumOperator op = MomentumOperator::lagged(h, pressure(h, A, pp), lag, pp, rp, 1e-3);
    const VectorField v(rng.noise(g, -1.0, 1.0), rng.noise(g, -1.0, 1.0));
    const VectorField w(rng.noise(g, -1.0, 1.0), rng.noise(g, -1.0, 1.0));
    const VectorField lv = op.apply(v), lw = op.apply(w);
    const double scale = std::sqrt(std::max(inner(lv, lv) * inner(w, w), inner(v, v) * inner(lw, lw)));
    sym = std::max(sym, std::abs(inner(lv, w) - inner(v, lw)) / scale);
    // smallest Rayleigh quotient of the viscous part
    pos = std::min(pos, inner(op.apply_viscous(v), v) / inner(v, v));
  }
  out.defect("momentum", "operator symmetry", n, sym, 1e-12);
  out.add("momentum", "viscous part nonnegative", n, pos, 0.0, pos >= 0.0);
}

void io_suite(Rng& rng, Collector& out, std::uint64_t seed) {
  const Grid g(8, 6, 1.0, 0.75);
  State s{VectorField(rng.noise(g, -1, 1), rng.noise(g, -1, 1)), rng.noise(g, 0.1, 2.0), rng.noise(g, 0, 1),
          rng.uniform(0.0, 10.0)};
  const fs::path dir = fs::temp_directory_path() / ("seaice-invariants-" + std::to_string(seed));
  fs::create_directories(dir);
  write_snapshot(s, (dir / "snap.json").string());
  const State back = read_snapshot((dir / "snap.json").string());
  out.add("io", "snapshot round trip bitwise", 1, back == s ? 0.0 : 1.0, 0.0, back == s);

  std::vector<DiagRecord> series(3);
  for (auto& d : series) {
    d.t = rng.uniform(0, 1);
    d.mass = rng.uniform(0, 1) * 1e-7;
    d.energy_E = rng.uniform(0, 1) * 1e9;
    d.picard_ratio = rng.unit() / 3.0;
    d.solver_iterations = static_cast<int>(rng.bits() % 500);
  }
  const bool same = parse_diagnostics(format_diagnostics(series)) == series;
  out.add("io", "diagnostics CSV round trip", 3, same ? 0.0 : 1.0, 0.0, same);
  fs::remove_all(dir);
}

void driver_suite(Rng& rng, Collector& out) {
  const Grid g(16, 16);
  State s{VectorField(rng.smooth(g, -0.01, 0.01), rng.smooth(g, -0.01, 0.01)), rng.smooth(g, 0.6, 1.4),
          rng.smooth(g, 0.0, 1.0), 0.0};
  PhysParams pp;
  RegParams rp;
  IntegrateOptions opt;
  opt.dt_max = 2e-3;
  const double T = 0.25 * small_time_limits(s, pp.growth).min();
  const IntegrateResult a = integrate(s, T, opt, pp, rp);
  const IntegrateResult b = integrate(s, T, opt, pp, rp);
  out.add("driver", "bounds and mass window on a short run", static_cast<int>(a.diagnostics.size()),
          static_cast<double>(a.violations.size()), 0.0, a.violations.empty());
  const bool same = a.diagnostics == b.diagnostics;
  out.add("driver", "bitwise determinism", 2, same ? 0.0 : 1.0, 0.0, same);
}

}  // namespace

std::vector<InvariantRow> run_invariant_suite(std::uint64_t seed,
                                              const std::function<void(const InvariantRow&)>& on_row) {
  Rng rng(seed);
  Collector out(on_row);
  calculus_suite(rng, out);
  rheology_suite(rng, out);
  thermo_suite(rng, out);
  transport_suite(rng, out);
  momentum_suite(rng, out);
  io_suite(rng, out, seed);
  driver_suite(rng, out);
  return out.take();
}

}  // namespace seaice
