// SPDX-License-Identifier: Apache-2.0
#include "seaice/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "seaice/error.hpp"

namespace seaice {

ScalarField chi_A(const ScalarField& A, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "chi_A needs omega > 0");
  ScalarField out(A.grid());
  for (std::size_t k = 0; k < A.size(); ++k) {
    const double gap = std::max(1.0 - A[k], 0.0);
    out[k] = 1.0 - gap / (gap + omega);
  }
  return out;
}

ScalarField chi_h(const ScalarField& h, double nu) {
  if (nu < 0.0) throw Error(ErrorCode::InvalidArgument, "chi_h needs nu >= 0");
  ScalarField out(h.grid());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double hp = std::max(h[k], 0.0);
    out[k] = nu > 0.0 ? hp / (hp + nu) : (h[k] > 0.0 ? 1.0 : 0.0);
  }
  return out;
}

ScalarField pos_part(const ScalarField& s) {
  ScalarField out(s.grid());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = std::max(s[k], 0.0);
  return out;
}

double smoothed_neg(double s, double omega) { return 0.5 * (std::sqrt(s * s + omega * omega) - s); }

ScalarField src_h(const ScalarField& h, const ScalarField& A, double omega, double nu, const GrowthFn& f) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "src_h needs omega > 0");
  const ScalarField chi = chi_h(h, nu);
  const double f0 = f(0.0);
  ScalarField out(h.grid());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (chi[k] == 0.0) continue;
    const double ratio = std::max(h[k], 0.0) / (std::max(A[k], 0.0) + omega);
    out[k] = (f(ratio) * A[k] + (1.0 - A[k]) * f0) * chi[k];
  }
  return out;
}

ScalarField src_A(const ScalarField& h, const ScalarField& A, double omega, double nu, const GrowthFn& f,
                  double h0, const ScalarField& sh) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "src_A needs omega > 0");
  if (nu == 0.0 && !(h.min() > 0.0))
    throw Error(ErrorCode::DegenerateThickness, "src_A with nu = 0 needs min h > 0");
  const double growth = std::max(f(0.0), 0.0) / (h0 + nu);
  ScalarField out(h.grid());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double denom = nu > 0.0 ? 2.0 * std::max(h[k], 0.0) + nu : 2.0 * h[k];
    out[k] = growth * (1.0 - A[k]) - A[k] / denom * smoothed_neg(sh[k], omega);
  }
  return out;
}

Vec2 wind_stress(const PhysParams& pp) {
  const double gx = pp.U_g[0], gy = pp.U_g[1];
  const double w = pp.rho_a * pp.C_a * std::hypot(gx, gy);
  const double c = std::cos(pp.phi), s = std::sin(pp.phi);
  return {w * (gx * c - gy * s), w * (gy * c + gx * s)};
}

VectorField water_stress(const VectorField& u, const PhysParams& pp) {
  const double c = std::cos(pp.theta), s = std::sin(pp.theta);
  const double k0 = pp.rho_w * pp.C_w;
  VectorField out(u.grid());
  for (std::size_t k = 0; k < u.x.size(); ++k) {
    const double rx = pp.U_w[0] - u.x[k];
    const double ry = pp.U_w[1] - u.y[k];
    const double w = k0 * std::hypot(rx, ry);
    out.x[k] = w * (rx * c - ry * s);
    out.y[k] = w * (ry * c + rx * s);
  }
  return out;
}

VectorField total_forcing(const VectorField& u, const ScalarField& h, const PhysParams& pp) {
  const Vec2 ta = wind_stress(pp);
  VectorField out = water_stress(u, pp);
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double coriolis = pp.rho_ice * h[k] * pp.eta;
    out.x[k] += coriolis * u.y[k] + ta[0];
    out.y[k] += -coriolis * u.x[k] + ta[1];
  }
  return out;
}

}  // namespace seaice
