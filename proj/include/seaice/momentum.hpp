// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "seaice/grid.hpp"
#include "seaice/params.hpp"

namespace seaice {

/// Implicit part of one momentum step,
///   L v = m v + iota Lap^2 v - div[(a + mu) D v + (b + lambda) (div v) I],
/// with D v = grad v + grad v^T, m = rho_ice h / dt and the lagged viscosities
/// a = p / sqrt(|D u_o|^2 + eps^2), b = p / sqrt((div u_o)^2 + eps^2).
/// Self-adjoint in the grid inner product and positive definite when m > 0.
class MomentumOperator {
 public:
  MomentumOperator(ScalarField mass, ScalarField a, ScalarField b, double mu, double lambda, double iota);

  /// Builds the lagged operator for mass rho_ice h_m / dt and stress
  /// coefficients frozen at u_lag. Throws DegenerateThickness if min h_m <= 0.
  static MomentumOperator lagged(const ScalarField& h_m, const ScalarField& p_m, const VectorField& u_lag,
                                 const PhysParams& pp, const RegParams& rp, double dt);

  VectorField apply(const VectorField& v) const;
  /// Only the viscous part (everything except the mass term).
  VectorField apply_viscous(const VectorField& v) const;
  VectorField diagonal() const;

  const Grid& grid() const noexcept { return mass_.grid(); }
  const ScalarField& mass() const noexcept { return mass_; }
  const ScalarField& a() const noexcept { return a_; }
  const ScalarField& b() const noexcept { return b_; }

 private:
  ScalarField mass_;
  ScalarField a_;
  ScalarField b_;
  double mu_;
  double lambda_;
  double iota_;
};

struct LinearSolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< final ||r|| / ||rhs|| (0 when rhs == 0)
  bool converged = false;
};

struct SolveResult {
  VectorField u;
  LinearSolveReport report;
};

/// 10 * sqrt(nx * ny).
int default_cg_max_iter(const Grid& g);

/// Jacobi-preconditioned conjugate gradients. Stops when
/// ||rhs - L x|| <= tol_rel ||rhs||; throws NoConvergence past max_iter.
SolveResult cg_solve(const MomentumOperator& op, const VectorField& rhs, double tol_rel, int max_iter,
                     const std::optional<VectorField>& guess = std::nullopt);

/// (u . grad) v with centered differences.
VectorField advect(const VectorField& u, const VectorField& v);

/// Data of one semi-implicit step t_n -> t_{n+1}. Thickness and compactness
/// are the already transported values at t_{n+1}. Advection and forcing use
/// u_explicit (the frozen velocity at t_n); stress viscosities are lagged at
/// u_lagged (the frozen velocity at t_{n+1}).
struct MomentumStepInput {
  const VectorField& u_prev;
  const VectorField& u_explicit;
  const VectorField& u_lagged;
  const ScalarField& h_m;
  const ScalarField& A_m;
};

struct SolverSettings {
  double tol_rel = 1e-11;
  int max_iter = 0;  ///< 0 selects default_cg_max_iter
};

/// Right-hand side of the step:
///   m u_prev - rho h_m (u_e . grad) u_e - grad p_m + F(u_e, h_m).
VectorField momentum_rhs(const MomentumStepInput& in, const PhysParams& pp, double dt);

SolveResult momentum_step(const MomentumStepInput& in, const PhysParams& pp, const RegParams& rp, double dt,
                          const SolverSettings& solver = {});

/// Residual of the assembled nonlinear step with u_o replaced by the
/// solution itself:
///   rho h_m (u - u_prev)/dt + rho h_m (u_prev . grad) u_prev + grad p_m
///   - div S_eps(p_m, u) - div S_{mu,lambda}(u) + iota Lap^2 u - F(u_prev, h_m).
VectorField assembled_residual(const VectorField& u, const VectorField& u_prev, const ScalarField& h_m,
                               const ScalarField& A_m, const PhysParams& pp, const RegParams& rp, double dt);

}  // namespace seaice
