// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "seaice/grid.hpp"
#include "seaice/params.hpp"

namespace seaice {

/// chi_A^omega = 1 - (1-A)^+ / ((1-A)^+ + omega). Requires omega > 0.
ScalarField chi_A(const ScalarField& A, double omega);

/// chi_h^nu = h^+ / (h^+ + nu) for nu > 0; the sharp indicator of {h > 0}
/// when nu == 0 (target-system variant).
ScalarField chi_h(const ScalarField& h, double nu);

ScalarField pos_part(const ScalarField& s);

/// (sqrt(s^2 + omega^2) - s) / 2: smoothed negative part. omega == 0 gives s^-.
double smoothed_neg(double s, double omega);

/// Thickness source [f(h^+/(A^+ + omega)) A + (1 - A) f(0)] * chi_h^nu.
/// nu == 0 uses the sharp indicator of the target system.
ScalarField src_h(const ScalarField& h, const ScalarField& A, double omega, double nu, const GrowthFn& f);

/// Compactness source
///   f(0)^+ / (h0 + nu) (1 - A) - A / (2 h^+ + nu) * smoothed_neg(sh, omega)
/// with sh the precomputed thickness source. For nu == 0 the denominator is
/// 2h and min h must be positive (DegenerateThickness otherwise).
ScalarField src_A(const ScalarField& h, const ScalarField& A, double omega, double nu, const GrowthFn& f,
                  double h0, const ScalarField& sh);

/// Air stress rho_a C_a |U_g| (U_g cos phi + U_g^perp sin phi); constant in space.
Vec2 wind_stress(const PhysParams& pp);

/// Water stress rho_w C_w |U_w - u| ((U_w - u) cos theta + (U_w - u)^perp sin theta).
VectorField water_stress(const VectorField& u, const PhysParams& pp);

/// F = -rho_ice h eta u^perp + tau_a + tau_w(u), with v^perp = (-v_y, v_x).
VectorField total_forcing(const VectorField& u, const ScalarField& h, const PhysParams& pp);

}  // namespace seaice
