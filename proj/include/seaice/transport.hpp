// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "seaice/grid.hpp"

namespace seaice {

struct CflPolicy {
  double cfl_number = 0.4;

  void validate() const;
};

/// cfl_number / (max|u_x|/dx + max|u_y|/dy); +infinity when u == 0.
double cfl_dt(const VectorField& u, const CflPolicy& pol);

/// Largest dt for which both the conservative donor-cell update (outflow
/// rates) and its advective part (inflow rates) are convex combinations in
/// every cell. +infinity when u == 0. Always >= cfl_dt at cfl_number 0.5.
double monotone_dt_limit(const VectorField& u);

/// Donor-cell flux divergence div(q u) with face velocities averaged from
/// the two adjacent cell centers.
ScalarField upwind_flux_div(const ScalarField& q, const VectorField& u);

/// One explicit step of q_t + div(q u) = src (conservative donor cell,
/// forward-Euler source). Throws CflViolation if dt > monotone_dt_limit(u).
ScalarField step_h(const ScalarField& h, const VectorField& u, const ScalarField& src, double dt);

/// One explicit step of A_t + div(A u) = src + A div(u) chi. The reaction
/// uses the centered divergence, which equals the flux divergence of a
/// constant field, so A = 1 with chi = 1 is reproduced exactly.
ScalarField step_A(const ScalarField& A, const VectorField& u, const ScalarField& src, const ScalarField& chi,
                   double dt);

/// The advective part of step_A alone: q - dt [div(q u) - q div(u)].
/// Satisfies the discrete maximum principle under the monotone limit.
ScalarField advect_nonconservative(const ScalarField& q, const VectorField& u, double dt);

}  // namespace seaice
