// SPDX-License-Identifier: Apache-2.0
#include "seaice/driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seaice/error.hpp"
#include "seaice/rheology.hpp"
#include "seaice/thermo.hpp"

namespace seaice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PicardStatus { Converged, NonContraction, Exhausted };

struct PicardRun {
  PicardResult result;
  PicardStatus status = PicardStatus::Exhausted;
};

PicardRun picard_iterate(const State& state0, const SlabPlan& plan, const PhysParams& pp, const RegParams& rp) {
  plan.validate();
  const int n = plan.steps();
  VelocityPath u_k(static_cast<std::size_t>(n) + 1, state0.u);
  PicardRun run;
  PicardResult& res = run.result;
  int above_one = 0;
  for (int it = 1; it <= plan.picard_max; ++it) {
    MapResult m = apply_map(u_k, state0, plan, pp, rp);
    res.max_solver_iterations = std::max(res.max_solver_iterations, m.max_solver_iterations);
    res.max_solver_residual = std::max(res.max_solver_residual, m.max_solver_residual);
    const double d = picard_distance(m.u, u_k, plan.dt);
    res.iterations = it;
    if (!res.distances.empty()) {
      const double ratio = d / res.distances.back();
      res.ratios.push_back(ratio);
      above_one = ratio > 1.0 ? above_one + 1 : 0;
    }
    res.distances.push_back(d);
    if (d < plan.picard_tol) {
      res.trajectory.reserve(m.u.size());
      for (std::size_t s = 0; s < m.u.size(); ++s)
        res.trajectory.push_back(State{std::move(m.u[s]), std::move(m.h[s]), std::move(m.A[s]),
                                       state0.t + static_cast<double>(s) * plan.dt});
      run.status = PicardStatus::Converged;
      return run;
    }
    if (above_one >= 3) {
      run.status = PicardStatus::NonContraction;
      return run;
    }
    u_k = std::move(m.u);
  }
  run.status = PicardStatus::Exhausted;
  return run;
}

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t k = 1; k + 1 < values.size(); ++k) s += values[k];
  return s * dt;
}

double h3_triple(const State& s) {
  const double v = norm_hk(s.u, 3) + norm_hk(s.h, 3) + norm_hk(s.A, 3);
  return v * v;
}

int steps_for(double T_slab, double dt_max) {
  return std::max(1, static_cast<int>(std::ceil(T_slab / dt_max * (1.0 - 1e-12))));
}

}  // namespace

void State::validate() const {
  if (!(u.grid() == h.grid()) || !(A.grid() == h.grid()))
    throw Error(ErrorCode::InvalidArgument, "state fields live on different grids");
  if (!u.x.all_finite() || !u.y.all_finite() || !h.all_finite() || !A.all_finite())
    throw Error(ErrorCode::InvalidArgument, "state holds non-finite values");
}

int SlabPlan::steps() const { return static_cast<int>(std::llround(T_slab / dt)); }

void SlabPlan::validate() const {
  if (!(dt > 0.0) || !(T_slab >= dt * (1.0 - 1e-12)))
    throw Error(ErrorCode::InvalidArgument, "slab plan needs 0 < dt <= T_slab");
  if (std::abs(steps() * dt - T_slab) > 1e-9 * T_slab)
    throw Error(ErrorCode::InvalidArgument, "slab length must be a whole number of steps");
  if (!(picard_tol > 0.0) || picard_max < 1)
    throw Error(ErrorCode::InvalidArgument, "slab plan needs picard_tol > 0 and picard_max >= 1");
}

SmallTimeLimits small_time_limits(double h_lo, double h_hi, double f_lo, double f_hi, double mass_in, double area) {
  if (!(h_hi >= h_lo) || h_lo < 0.0 || !(area > 0.0))
    throw Error(ErrorCode::InvalidArgument, "small_time_limits needs h_hi >= h_lo >= 0 and area > 0");
  const double s = std::abs(f_hi) + std::abs(f_lo);
  if (s == 0.0) return {kInf, kInf};
  const double T_h = h_lo > 0.0 ? h_lo / (6.0 * s) : h_hi / (3.0 * s);
  return {T_h, mass_in / (6.0 * s * area)};
}

SmallTimeLimits small_time_limits(const State& s, const GrowthFn& f) {
  return small_time_limits(s.h.min(), s.h.max(), f.f_lo(), f.f_hi(), integral(s.h), s.grid().area());
}

MapResult apply_map(const VelocityPath& u_o, const State& state0, const SlabPlan& plan, const PhysParams& pp,
                    const RegParams& rp) {
  plan.validate();
  const int n = plan.steps();
  if (u_o.size() != static_cast<std::size_t>(n) + 1)
    throw Error(ErrorCode::InvalidArgument, "frozen velocity path length does not match the slab plan");
  if (!(state0.h.min() > 0.0)) throw Error(ErrorCode::DegenerateThickness, "slab start needs min h > 0");

  const double dt = plan.dt;
  MapResult out;
  out.h.reserve(n + 1);
  out.A.reserve(n + 1);
  out.u.reserve(n + 1);
  out.h.push_back(state0.h);
  out.A.push_back(state0.A);
  for (int s = 0; s < n; ++s) {
    const ScalarField& h = out.h.back();
    const ScalarField& A = out.A.back();
    const ScalarField sh = src_h(h, A, rp.omega, rp.nu, pp.growth);
    const ScalarField sa = src_A(h, A, rp.omega, rp.nu, pp.growth, pp.h0, sh);
    const ScalarField chi = chi_A(A, rp.omega);
    ScalarField h_next = step_h(h, u_o[s], sh, dt);
    ScalarField A_next = step_A(A, u_o[s], sa, chi, dt);
    out.h.push_back(std::move(h_next));
    out.A.push_back(std::move(A_next));
  }
  out.u.push_back(state0.u);
  for (int s = 0; s < n; ++s) {
    const MomentumStepInput in{out.u.back(), u_o[s], u_o[s + 1], out.h[s + 1], out.A[s + 1]};
    SolveResult r = momentum_step(in, pp, rp, dt, plan.solver);
    out.max_solver_iterations = std::max(out.max_solver_iterations, r.report.iterations);
    out.max_solver_residual = std::max(out.max_solver_residual, r.report.residual);
    out.u.push_back(std::move(r.u));
  }
  return out;
}

double picard_distance(const VelocityPath& v, const VelocityPath& w, double dt) {
  if (v.size() != w.size() || v.empty())
    throw Error(ErrorCode::InvalidArgument, "velocity paths must be nonempty and of equal length");
  double sup_l2 = 0.0;
  std::vector<double> h2(v.size());
  for (std::size_t s = 0; s < v.size(); ++s) {
    const VectorField d = v[s] - w[s];
    sup_l2 = std::max(sup_l2, std::sqrt(norm_hk_sq(d, 0)));
    h2[s] = norm_hk_sq(d, 2);
  }
  return sup_l2 + std::sqrt(trapezoid(h2, dt));
}

PicardResult picard_solve(const State& state0, const SlabPlan& plan, const PhysParams& pp, const RegParams& rp) {
  PicardRun run = picard_iterate(state0, plan, pp, rp);
  if (run.status == PicardStatus::NonContraction) {
    std::ostringstream os;
    os << "fixed-point iteration is not contracting on a slab of length " << plan.T_slab
       << " (three consecutive ratios above 1)";
    throw Error(ErrorCode::NonContraction, os.str());
  }
  if (run.status == PicardStatus::Exhausted) {
    std::ostringstream os;
    os << "fixed-point iteration did not reach " << plan.picard_tol << " within " << plan.picard_max
       << " iterations (last distance " << run.result.distances.back() << ")";
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return std::move(run.result);
}

double trajectory_residual(const Trajectory& traj, const PhysParams& pp, const RegParams& rp) {
  double worst = 0.0;
  for (std::size_t s = 1; s < traj.size(); ++s) {
    const double dt = traj[s].t - traj[s - 1].t;
    const VectorField r = assembled_residual(traj[s].u, traj[s - 1].u, traj[s].h, traj[s].A, pp, rp, dt);
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      const double scale = dt / (pp.rho_ice * traj[s].h[k]);
      worst = std::max({worst, std::abs(r.x[k]) * scale, std::abs(r.y[k]) * scale});
    }
  }
  return worst;
}

DiagRecord make_diag(const State& s) {
  DiagRecord d;
  d.t = s.t;
  d.h_min = s.h.min();
  d.h_max = s.h.max();
  d.A_min = s.A.min();
  d.A_max = s.A.max();
  d.mass = integral(s.h);
  d.u_h3 = norm_hk(s.u, 3);
  d.h_h3 = norm_hk(s.h, 3);
  d.A_h3 = norm_hk(s.A, 3);
  return d;
}

double frakE_density_integral(const VectorField& u, double eps) {
  static constexpr double weight[4] = {1.0, 3.0, 3.0, 1.0};
  const TensorField D = sym_grad(u);
  const ScalarField dv = div(u);
  const Grid& g = u.grid();
  const double e2 = eps * eps;
  double total = 0.0;
  std::vector<double> num_d(g.size(), 0.0), num_v(g.size(), 0.0);
  for (int a = 0; a <= 3; ++a) {
    const ScalarField cxx = derivative(D.xx, a, 3 - a), cxy = derivative(D.xy, a, 3 - a);
    const ScalarField cyx = derivative(D.yx, a, 3 - a), cyy = derivative(D.yy, a, 3 - a);
    const ScalarField cv = derivative(dv, a, 3 - a);
    for (std::size_t k = 0; k < g.size(); ++k) {
      num_d[k] += weight[a] * (cxx[k] * cxx[k] + cxy[k] * cxy[k] + cyx[k] * cyx[k] + cyy[k] * cyy[k]);
      num_v[k] += weight[a] * cv[k] * cv[k];
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d2 = D.xx[k] * D.xx[k] + D.xy[k] * D.xy[k] + D.yx[k] * D.yx[k] + D.yy[k] * D.yy[k];
    total += num_d[k] / std::pow(d2 + e2, 1.5) + num_v[k] / std::pow(dv[k] * dv[k] + e2, 1.5);
  }
  return total * g.cell_area();
}

namespace {

template <class Integrand>
double sup_plus_integral(const Trajectory& traj, Integrand integrand) {
  if (traj.empty()) throw Error(ErrorCode::InvalidArgument, "energy of an empty trajectory");
  double sup = 0.0;
  double integral_part = 0.0;
  double prev = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    sup = std::max(sup, h3_triple(traj[s]));
    const double cur = integrand(traj[s]);
    if (s > 0) integral_part += 0.5 * (traj[s].t - traj[s - 1].t) * (prev + cur);
    prev = cur;
  }
  return sup + integral_part;
}

}  // namespace

double energy_E(const Trajectory& traj) {
  return sup_plus_integral(traj, [](const State& s) { return norm_hk_sq(s.u, 4); });
}

double energy_frakE(const Trajectory& traj, double eps) {
  return sup_plus_integral(traj, [eps](const State& s) { return frakE_density_integral(s.u, eps); });
}

IntegrateResult integrate(const State& state0, double T_end, const IntegrateOptions& opt, const PhysParams& pp,
                          const RegParams& rp) {
  state0.validate();
  rp.validate();
  opt.cfl.validate();
  if (!(T_end >= state0.t)) throw Error(ErrorCode::InvalidArgument, "integrate needs T_end >= start time");
  if (!(opt.dt_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "integrate needs dt_max > 0");

  IntegrateResult out;
  out.trajectory.push_back(state0);

  double sup_h3 = h3_triple(state0);
  double int_E = 0.0, int_frak = 0.0;
  double prev_E = norm_hk_sq(state0.u, 4);
  double prev_frak = frakE_density_integral(state0.u, rp.epsilon);
  {
    DiagRecord d = make_diag(state0);
    d.energy_E = sup_h3;
    d.energy_frakE = sup_h3;
    out.diagnostics.push_back(d);
  }

  const double t_tol = 1e-12 * std::max(1.0, std::abs(T_end));
  std::size_t slab_index = 0;
  while (T_end - out.trajectory.back().t > t_tol) {
    const State cur = out.trajectory.back();
    SlabRecord rec{cur.t, 0.0, 0.0, 0, 0, {}};
    PicardRun run;
    if (opt.replay) {
      if (slab_index >= opt.replay->size())
        throw Error(ErrorCode::InvalidArgument, "replayed slab layout ends before T_end");
      const SlabRecord& src = (*opt.replay)[slab_index];
      rec.T_slab = src.T_slab;
      rec.dt = src.dt;
      rec.steps = src.steps;
      SlabPlan plan{src.T_slab, src.dt, opt.picard_tol, opt.picard_max, opt.solver};
      run = picard_iterate(cur, plan, pp, rp);
    } else {
      const SmallTimeLimits lim = small_time_limits(cur, pp.growth);
      double T_slab = std::min({lim.min(), opt.slab_cap, T_end - cur.t});
      const double dt_max = std::min(opt.dt_max, cfl_dt(cur.u, opt.cfl));
      for (int b = 0;; ++b) {
        rec.steps = steps_for(T_slab, dt_max);
        rec.T_slab = T_slab;
        rec.dt = T_slab / rec.steps;
        rec.bisections = b;
        SlabPlan plan{T_slab, rec.dt, opt.picard_tol, opt.picard_max, opt.solver};
        run = picard_iterate(cur, plan, pp, rp);
        if (run.status != PicardStatus::NonContraction || b >= opt.max_bisections) break;
        T_slab *= 0.5;
      }
    }
    if (run.status == PicardStatus::NonContraction) {
      std::ostringstream os;
      os << "fixed-point iteration is not contracting at t = " << cur.t << " even on a slab of length "
         << rec.T_slab;
      throw Error(ErrorCode::NonContraction, os.str());
    }
    if (run.status == PicardStatus::Exhausted) {
      std::ostringstream os;
      os << "fixed-point iteration did not converge at t = " << cur.t << " (last distance "
         << run.result.distances.back() << ")";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
    PicardResult& pr = run.result;
    rec.ratios = pr.ratios;

    const double h_lo = cur.h.min(), h_hi = cur.h.max(), mass0 = integral(cur.h);
    double div_int = 0.0;
    double prev_div = norm_lp(div(cur.u), kLinf);
    auto flag = [&](double t, const char* what, double value, double bound) {
      out.violations.push_back({t, what, value, bound});
      if (opt.fail_fast) {
        std::ostringstream os;
        os << "monitored bound violated at t = " << t << ": " << what << " = " << value << " (bound " << bound
           << ")";
        throw Error(ErrorCode::BoundViolation, os.str());
      }
    };

    for (std::size_t s = 1; s < pr.trajectory.size(); ++s) {
      State& st = pr.trajectory[s];
      DiagRecord d = make_diag(st);
      const double cur_E = norm_hk_sq(st.u, 4);
      const double cur_frak = frakE_density_integral(st.u, rp.epsilon);
      const double dt = rec.dt;
      int_E += 0.5 * dt * (prev_E + cur_E);
      int_frak += 0.5 * dt * (prev_frak + cur_frak);
      prev_E = cur_E;
      prev_frak = cur_frak;
      sup_h3 = std::max(sup_h3, h3_triple(st));
      d.energy_E = sup_h3 + int_E;
      d.energy_frakE = sup_h3 + int_frak;
      const double cur_div = norm_lp(div(st.u), kLinf);
      div_int += 0.5 * dt * (prev_div + cur_div);
      prev_div = cur_div;
      d.div_exp = std::exp(div_int);
      d.picard_ratio = pr.ratios.empty() ? 0.0 : pr.ratios.back();
      d.picard_iterations = pr.iterations;
      d.solver_iterations = pr.max_solver_iterations;
      d.solver_residual = pr.max_solver_residual;

      const double tol = opt.monitor_tol;
      if (d.A_min < -tol) flag(d.t, "A_min", d.A_min, -tol);
      if (d.A_max > 1.0 + tol) flag(d.t, "A_max", d.A_max, 1.0 + tol);
      if (d.h_min < 0.25 * h_lo - tol) flag(d.t, "h_min", d.h_min, 0.25 * h_lo - tol);
      if (d.h_max > 4.0 * h_hi + tol) flag(d.t, "h_max", d.h_max, 4.0 * h_hi + tol);
      if (d.mass < 0.5 * mass0) flag(d.t, "mass_low", d.mass, 0.5 * mass0);
      if (d.mass > 2.0 * mass0) flag(d.t, "mass_high", d.mass, 2.0 * mass0);

      out.diagnostics.push_back(d);
      out.trajectory.push_back(std::move(st));
    }
    out.slabs.push_back(std::move(rec));
    ++slab_index;
  }
  return out;
}

double trajectory_difference(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "trajectories have different time grids");
  double sup = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].t != b[s].t) throw Error(ErrorCode::InvalidArgument, "trajectories have different time grids");
    const double d = norm_lp(a[s].u - b[s].u, 2) + norm_lp(a[s].h - b[s].h, 2) + norm_lp(a[s].A - b[s].A, 2);
    sup = std::max(sup, d);
  }
  return sup;
}

ContinuationReport param_continuation(const State& state0, double T_end, const std::vector<RegParams>& schedule,
                                      const IntegrateOptions& opt, const PhysParams& pp) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "continuation schedule is empty");
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (schedule[k].epsilon != schedule[0].epsilon || schedule[k].omega != schedule[0].omega)
      throw Error(ErrorCode::InvalidArgument, "continuation keeps epsilon and omega fixed");
    if (!schedule[k - 1].dominates(schedule[k]))
      throw Error(ErrorCode::InvalidArgument, "continuation schedule must decrease monotonically");
  }
  ContinuationReport rep;
  rep.schedule = schedule;
  rep.runs.push_back(integrate(state0, T_end, opt, pp, schedule[0]));
  IntegrateOptions replay = opt;
  replay.replay = &rep.runs.front().slabs;
  rep.runs.reserve(schedule.size());
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    rep.runs.push_back(integrate(state0, T_end, replay, pp, schedule[k]));
    rep.differences.push_back(trajectory_difference(rep.runs[k - 1].trajectory, rep.runs[k].trajectory));
  }
  return rep;
}

Perturbation default_perturbation(const Grid& g) {
  constexpr double two_pi = 6.283185307179586;
  Perturbation p{VectorField(g), ScalarField(g), ScalarField(g)};
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double x = two_pi * g.x(i) / g.lx(), y = two_pi * g.y(j) / g.ly();
      p.u.x(i, j) = std::sin(y);
      p.u.y(i, j) = std::cos(x);
      p.h(i, j) = std::cos(x) * std::cos(y);
      p.A(i, j) = std::sin(x + y);
    }
  return p;
}

Perturbation zero_perturbation(const Grid& g) { return {VectorField(g), ScalarField(g), ScalarField(g)}; }

StabilityResult stability_experiment(const State& state0, double delta, double T_end, const IntegrateOptions& opt,
                                     const PhysParams& pp, const RegParams& rp,
                                     const std::optional<Perturbation>& profile) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "stability experiment needs delta > 0");
  const Perturbation prof = profile ? *profile : default_perturbation(state0.grid());

  State pert = state0;
  pert.u += delta * prof.u;
  pert.h += delta * prof.h;
  for (std::size_t k = 0; k < pert.A.size(); ++k)
    pert.A[k] = std::clamp(state0.A[k] + delta * prof.A[k], 0.0, 1.0);
  if (pert.h.min() < 0.5 * state0.h.min())
    throw Error(ErrorCode::InvalidArgument, "perturbation drives thickness below half its minimum");

  const IntegrateResult base = integrate(state0, T_end, opt, pp, rp);
  IntegrateOptions replay = opt;
  replay.replay = &base.slabs;
  const IntegrateResult other = integrate(pert, T_end, replay, pp, rp);

  auto hA = [](const State& a, const State& b) {
    const double v = norm_lp(a.h - b.h, 4) + norm_lp(a.A - b.A, 4);
    return v * v;
  };
  const Trajectory& ta = base.trajectory;
  const Trajectory& tb = other.trajectory;
  if (ta.size() != tb.size()) throw Error(ErrorCode::InvalidArgument, "stability runs diverged in time grid");

  double sup = 0.0;
  double integral_part = 0.0;
  double prev = 0.0;
  for (std::size_t s = 0; s < ta.size(); ++s) {
    const VectorField du = tb[s].u - ta[s].u;
    const double l2 = norm_lp(du, 2);
    sup = std::max(sup, hA(tb[s], ta[s]) + l2 * l2);
    const double cur = norm_hk_sq(du, 2);
    if (s > 0) integral_part += 0.5 * (ta[s].t - ta[s - 1].t) * (prev + cur);
    prev = cur;
  }
  const double u0 = norm_lp(pert.u - state0.u, 2);
  StabilityResult r{0.0, sup + integral_part, hA(pert, state0) + u0 * u0};
  if (r.numerator == 0.0) return r;
  if (r.denominator == 0.0)
    throw Error(ErrorCode::InvalidArgument, "identical initial data produced different trajectories");
  r.ratio = r.numerator / r.denominator;
  return r;
}

PicardStudyResult picard_study(const State& state0, double T_start, const IntegrateOptions& opt,
                               const PhysParams& pp, const RegParams& rp, double target, int max_halvings,
                               int extra_halvings) {
  if (!(T_start > 0.0)) throw Error(ErrorCode::InvalidArgument, "picard study needs T_start > 0");
  PicardStudyResult out;
  const double dt_max = std::min(opt.dt_max, cfl_dt(state0.u, opt.cfl));
  // A power-of-two step count keeps the halved slabs on nested time grids.
  int n = 1;
  while (n < steps_for(T_start, dt_max)) n *= 2;
  const double dt = T_start / n;
  double T_slab = T_start;
  int extra_left = extra_halvings;
  for (int h = 0; h <= max_halvings; ++h, T_slab *= 0.5, n = std::max(1, n / 2)) {
    if (out.located && extra_left-- <= 0) break;
    SlabPlan plan{T_slab, n > 1 ? dt : T_slab, opt.picard_tol, opt.picard_max, opt.solver};
    PicardRun run = picard_iterate(state0, plan, pp, rp);
    out.T_slabs.push_back(T_slab);
    out.ratios.push_back(run.result.ratios);
    const auto& r = run.result.ratios;
    for (std::size_t k = 0; !out.located && k + 2 < r.size(); ++k)
      if (r[k] <= target && r[k + 1] <= target && r[k + 2] <= target) out.located = T_slab;
  }
  return out;
}

}  // namespace seaice
