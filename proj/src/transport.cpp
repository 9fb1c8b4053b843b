// SPDX-License-Identifier: Apache-2.0
#include "seaice/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "seaice/error.hpp"

namespace seaice {

namespace {

double face_x(const VectorField& u, int i, int j) { return 0.5 * (u.x(i, j) + u.x(i + 1, j)); }
double face_y(const VectorField& u, int i, int j) { return 0.5 * (u.y(i, j) + u.y(i, j + 1)); }

void check_dt(const VectorField& u, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "transport step needs dt > 0");
  const double limit = monotone_dt_limit(u);
  if (dt > limit) {
    std::ostringstream os;
    os << "transport dt = " << dt << " exceeds the monotone limit " << limit;
    throw Error(ErrorCode::CflViolation, os.str());
  }
}

}  // namespace

void CflPolicy::validate() const {
  if (!(cfl_number > 0.0 && cfl_number <= 1.0))
    throw Error(ErrorCode::Validation, "cfl_number must lie in (0, 1]");
}

double cfl_dt(const VectorField& u, const CflPolicy& pol) {
  pol.validate();
  const double rate = norm_lp(u.x, kLinf) / u.grid().dx() + norm_lp(u.y, kLinf) / u.grid().dy();
  return rate > 0.0 ? pol.cfl_number / rate : std::numeric_limits<double>::infinity();
}

double monotone_dt_limit(const VectorField& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double e = face_x(u, i, j), w = face_x(u, i - 1, j);
      const double n = face_y(u, i, j), s = face_y(u, i, j - 1);
      const double out = (std::max(e, 0.0) - std::min(w, 0.0)) / g.dx() + (std::max(n, 0.0) - std::min(s, 0.0)) / g.dy();
      const double in = (std::max(w, 0.0) - std::min(e, 0.0)) / g.dx() + (std::max(s, 0.0) - std::min(n, 0.0)) / g.dy();
      worst = std::max({worst, out, in});
    }
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

ScalarField upwind_flux_div(const ScalarField& q, const VectorField& u) {
  const Grid& g = q.grid();
  const int nx = g.nx(), ny = g.ny();
  // fx(i, j): flux through the face between cells i and i+1
  ScalarField fx(g), fy(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double vx = face_x(u, i, j);
      fx(i, j) = vx >= 0.0 ? vx * q(i, j) : vx * q(i + 1, j);
      const double vy = face_y(u, i, j);
      fy(i, j) = vy >= 0.0 ? vy * q(i, j) : vy * q(i, j + 1);
    }
  ScalarField out(g);
  const double ix = 1.0 / g.dx(), iy = 1.0 / g.dy();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out(i, j) = (fx(i, j) - fx(i - 1, j)) * ix + (fy(i, j) - fy(i, j - 1)) * iy;
  return out;
}

ScalarField step_h(const ScalarField& h, const VectorField& u, const ScalarField& src, double dt) {
  check_dt(u, dt);
  const ScalarField fd = upwind_flux_div(h, u);
  ScalarField out(h.grid());
  for (std::size_t k = 0; k < h.size(); ++k) out[k] = h[k] - dt * fd[k] + dt * src[k];
  return out;
}

ScalarField step_A(const ScalarField& A, const VectorField& u, const ScalarField& src, const ScalarField& chi,
                   double dt) {
  check_dt(u, dt);
  const ScalarField fd = upwind_flux_div(A, u);
  const ScalarField du = div(u);
  ScalarField out(A.grid());
  for (std::size_t k = 0; k < A.size(); ++k)
    out[k] = A[k] - dt * fd[k] + dt * (src[k] + A[k] * du[k] * chi[k]);
  return out;
}

ScalarField advect_nonconservative(const ScalarField& q, const VectorField& u, double dt) {
  check_dt(u, dt);
  const ScalarField fd = upwind_flux_div(q, u);
  const ScalarField du = div(u);
  ScalarField out(q.grid());
  for (std::size_t k = 0; k < q.size(); ++k) out[k] = q[k] - dt * (fd[k] - q[k] * du[k]);
  return out;
}

}  // namespace seaice
