// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "seaice/grid.hpp"
#include "seaice/momentum.hpp"
#include "seaice/params.hpp"
#include "seaice/transport.hpp"

namespace seaice {

struct State {
  VectorField u;
  ScalarField h;
  ScalarField A;
  double t = 0.0;

  const Grid& grid() const noexcept { return h.grid(); }
  void validate() const;
  bool operator==(const State&) const = default;
};

using Trajectory = std::vector<State>;
using VelocityPath = std::vector<VectorField>;

struct SlabPlan {
  double T_slab = 0.0;
  double dt = 0.0;
  double picard_tol = 1e-8;
  int picard_max = 50;
  SolverSettings solver{};

  int steps() const;
  void validate() const;
};

struct SmallTimeLimits {
  double T_h;
  double T_mass;
  double min() const noexcept { return T_h < T_mass ? T_h : T_mass; }
};

/// Horizons on which the pointwise thickness bounds h_lo/4 <= h <= 4 h_hi
/// and the mass window [mass/2, 2 mass] are guaranteed:
///   T_h    = h_lo / (6 s)  (h_lo > 0),  h_hi / (3 s)  (h_lo = 0)
///   T_mass = mass_in / (6 s area),      s = |f_hi| + |f_lo|.
/// Both are +infinity when s = 0.
SmallTimeLimits small_time_limits(double h_lo, double h_hi, double f_lo, double f_hi, double mass_in, double area);
SmallTimeLimits small_time_limits(const State& s, const GrowthFn& f);

struct MapResult {
  VelocityPath u;
  std::vector<ScalarField> h;
  std::vector<ScalarField> A;
  int max_solver_iterations = 0;
  double max_solver_residual = 0.0;
};

/// One application of the fixed-point map u_o -> u_m over a slab: transport
/// h and A with the frozen path u_o, then step the linearized momentum
/// equation. u_o must hold plan.steps() + 1 velocity fields.
MapResult apply_map(const VelocityPath& u_o, const State& state0, const SlabPlan& plan, const PhysParams& pp,
                    const RegParams& rp);

/// sup_n ||v_n - w_n||_{L2} + (trapezoid int ||v - w||_{H2}^2 dt)^{1/2}.
double picard_distance(const VelocityPath& v, const VelocityPath& w, double dt);

struct PicardResult {
  Trajectory trajectory;
  std::vector<double> distances;
  std::vector<double> ratios;
  int iterations = 0;
  int max_solver_iterations = 0;
  double max_solver_residual = 0.0;
};

/// Fixed-point iteration from the constant-in-time extension of state0.u,
/// stopping once the distance between successive iterates drops below
/// plan.picard_tol. Throws NonContraction after three consecutive ratios
/// above 1 and NoConvergence past plan.picard_max.
PicardResult picard_solve(const State& state0, const SlabPlan& plan, const PhysParams& pp, const RegParams& rp);

/// Largest residual of the assembled nonlinear step along a converged
/// trajectory, over steps and cells, in velocity units (scaled by dt / (rho h)).
double trajectory_residual(const Trajectory& traj, const PhysParams& pp, const RegParams& rp);

struct DiagRecord {
  double t = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double A_min = 0.0;
  double A_max = 0.0;
  double mass = 0.0;
  double u_h3 = 0.0;
  double h_h3 = 0.0;
  double A_h3 = 0.0;
  double energy_E = 0.0;       ///< running sup-H3 + integrated-H4 functional
  double energy_frakE = 0.0;   ///< running eps-weighted variant
  double div_exp = 1.0;        ///< exp(int_slab ||div u||_inf), should stay <= 2
  double picard_ratio = 0.0;   ///< last measured contraction ratio of the slab
  int picard_iterations = 0;
  int solver_iterations = 0;
  double solver_residual = 0.0;

  bool operator==(const DiagRecord&) const = default;
};

struct SlabRecord {
  double t0;
  double T_slab;
  double dt;
  int steps;
  int bisections;
  std::vector<double> ratios;
};

struct Violation {
  double t;
  std::string what;
  double value;
  double bound;
};

struct IntegrateOptions {
  double dt_max = 1e-3;
  double slab_cap = std::numeric_limits<double>::infinity();
  CflPolicy cfl{};
  double picard_tol = 1e-8;
  int picard_max = 50;
  SolverSettings solver{};
  double monitor_tol = 1e-6;
  bool fail_fast = false;
  int max_bisections = 8;
  /// Reuse the slab layout of an earlier run (same t0/T_slab/dt sequence)
  /// so two runs share one time grid.
  const std::vector<SlabRecord>* replay = nullptr;
};

struct IntegrateResult {
  Trajectory trajectory;
  std::vector<DiagRecord> diagnostics;
  std::vector<SlabRecord> slabs;
  std::vector<Violation> violations;
};

/// Chains Picard slabs from state0.t to T_end. Each slab is
/// min(T_h, T_mass, slab_cap, remaining) from the state at its start, halved
/// on non-contraction. Emits one DiagRecord per time level.
IntegrateResult integrate(const State& state0, double T_end, const IntegrateOptions& opt, const PhysParams& pp,
                          const RegParams& rp);

DiagRecord make_diag(const State& s);

/// sup_t ||u, h, A||_{H3}^2 + trapezoid int ||u||_{H4}^2 dt, where
/// ||u, h, A|| = ||u|| + ||h|| + ||A||.
double energy_E(const Trajectory& traj);
/// Same sup term plus the time integral of
///   |grad^3 D|^2 / (|D|^2 + eps^2)^{3/2} + |grad^3 div u|^2 / ((div u)^2 + eps^2)^{3/2}.
double energy_frakE(const Trajectory& traj, double eps);
/// Pointwise-weighted integrand of energy_frakE at one instant.
double frakE_density_integral(const VectorField& u, double eps);

struct ContinuationReport {
  std::vector<RegParams> schedule;
  std::vector<double> differences;  ///< d_k between runs k and k+1
  std::vector<IntegrateResult> runs;
};

/// sup_t of ||du||_{L2} + ||dh||_{L2} + ||dA||_{L2} over a shared time grid.
double trajectory_difference(const Trajectory& a, const Trajectory& b);

/// Integrates once per schedule entry (all on the first run's time grid)
/// and reports Cauchy differences between consecutive runs. The schedule
/// must be monotone in (mu, lambda, iota, nu) with epsilon, omega fixed.
ContinuationReport param_continuation(const State& state0, double T_end, const std::vector<RegParams>& schedule,
                                      const IntegrateOptions& opt, const PhysParams& pp);

struct Perturbation {
  VectorField u;
  ScalarField h;
  ScalarField A;
};

/// Smooth unit-amplitude profile used by stability studies.
Perturbation default_perturbation(const Grid& g);
Perturbation zero_perturbation(const Grid& g);

struct StabilityResult {
  double ratio;
  double numerator;
  double denominator;
};

/// Runs base and perturbed data (A clipped to [0, 1]) on one time grid and
/// returns
///   [sup_t (||dh, dA||_{L4}^2 + ||du||_{L2}^2) + int ||du||_{H2}^2 dt]
///   / [||dh_in, dA_in||_{L4}^2 + ||du_in||_{L2}^2].
/// The ratio is 0 when the runs coincide. Throws InvalidArgument for
/// delta <= 0 or when the perturbed thickness drops below half its minimum.
StabilityResult stability_experiment(const State& state0, double delta, double T_end, const IntegrateOptions& opt,
                                     const PhysParams& pp, const RegParams& rp,
                                     const std::optional<Perturbation>& profile = std::nullopt);

struct PicardStudyResult {
  std::vector<double> T_slabs;
  std::vector<std::vector<double>> ratios;
  std::optional<double> located;  ///< first slab with 3 consecutive ratios <= target
};

/// Halves T_slab from T_start until a slab shows three consecutive measured
/// ratios <= target (or max_halvings is exhausted), then continues for
/// extra_halvings more slabs.
PicardStudyResult picard_study(const State& state0, double T_start, const IntegrateOptions& opt,
                               const PhysParams& pp, const RegParams& rp, double target = 0.5,
                               int max_halvings = 10, int extra_halvings = 0);

}  // namespace seaice
