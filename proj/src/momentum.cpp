// SPDX-License-Identifier: Apache-2.0
#include "seaice/momentum.hpp"

#include <cmath>
#include <sstream>

#include "seaice/error.hpp"
#include "seaice/rheology.hpp"
#include "seaice/thermo.hpp"

namespace seaice {

MomentumOperator::MomentumOperator(ScalarField mass, ScalarField a, ScalarField b, double mu, double lambda,
                                   double iota)
    : mass_(std::move(mass)), a_(std::move(a)), b_(std::move(b)), mu_(mu), lambda_(lambda), iota_(iota) {
  if (!(mass_.min() > 0.0)) throw Error(ErrorCode::DegenerateThickness, "momentum mass coefficient must be > 0");
}

MomentumOperator MomentumOperator::lagged(const ScalarField& h_m, const ScalarField& p_m, const VectorField& u_lag,
                                          const PhysParams& pp, const RegParams& rp, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "momentum step needs dt > 0");
  if (!(h_m.min() > 0.0)) {
    std::ostringstream os;
    os << "momentum step needs min h > 0, got " << h_m.min();
    throw Error(ErrorCode::DegenerateThickness, os.str());
  }
  const Grid& g = h_m.grid();
  const TensorField gu = grad_vec(u_lag);
  ScalarField mass(g), a(g), b(g);
  const double e2 = rp.epsilon * rp.epsilon;
  for (std::size_t k = 0; k < g.size(); ++k) {
    mass[k] = pp.rho_ice * h_m[k] / dt;
    const double dxx = 2.0 * gu.xx[k], dxy = gu.xy[k] + gu.yx[k], dyy = 2.0 * gu.yy[k];
    const double dv = gu.xx[k] + gu.yy[k];
    a[k] = p_m[k] / std::sqrt(dxx * dxx + 2.0 * dxy * dxy + dyy * dyy + e2);
    b[k] = p_m[k] / std::sqrt(dv * dv + e2);
  }
  return MomentumOperator(std::move(mass), std::move(a), std::move(b), rp.mu, rp.lambda, rp.iota);
}

VectorField MomentumOperator::apply_viscous(const VectorField& v) const {
  const TensorField gv = grad_vec(v);
  const Grid& g = grid();
  TensorField t(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double c = a_[k] + mu_;
    const double e = (b_[k] + lambda_) * (gv.xx[k] + gv.yy[k]);
    const double off = c * (gv.xy[k] + gv.yx[k]);
    t.xx[k] = 2.0 * c * gv.xx[k] + e;
    t.xy[k] = off;
    t.yx[k] = off;
    t.yy[k] = 2.0 * c * gv.yy[k] + e;
  }
  VectorField out = div_tensor(t);
  out *= -1.0;
  if (iota_ != 0.0) out += iota_ * biharmonic(v);
  return out;
}

VectorField MomentumOperator::apply(const VectorField& v) const {
  VectorField out = apply_viscous(v);
  for (std::size_t k = 0; k < mass_.size(); ++k) {
    out.x[k] += mass_[k] * v.x[k];
    out.y[k] += mass_[k] * v.y[k];
  }
  return out;
}

VectorField MomentumOperator::diagonal() const {
  const Grid& g = grid();
  const double qx = 1.0 / (4.0 * g.dx() * g.dx());
  const double qy = 1.0 / (4.0 * g.dy() * g.dy());
  const double cx = 1.0 / (g.dx() * g.dx());
  const double cy = 1.0 / (g.dy() * g.dy());
  const double bih = iota_ * ((2.0 * cx + 2.0 * cy) * (2.0 * cx + 2.0 * cy) + 2.0 * cx * cx + 2.0 * cy * cy);
  VectorField d(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double c_x = a_(i + 1, j) + a_(i - 1, j) + 2.0 * mu_;
      const double c_y = a_(i, j + 1) + a_(i, j - 1) + 2.0 * mu_;
      const double e_x = b_(i + 1, j) + b_(i - 1, j) + 2.0 * lambda_;
      const double e_y = b_(i, j + 1) + b_(i, j - 1) + 2.0 * lambda_;
      const double m = mass_(i, j) + bih;
      d.x(i, j) = m + (2.0 * c_x + e_x) * qx + c_y * qy;
      d.y(i, j) = m + c_x * qx + (2.0 * c_y + e_y) * qy;
    }
  return d;
}

int default_cg_max_iter(const Grid& g) {
  return static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(g.size()))));
}

namespace {

// Plain Euclidean dot over both components, fixed order.
double dot(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) s += a.x[k] * b.x[k];
  for (std::size_t k = 0; k < a.y.size(); ++k) s += a.y[k] * b.y[k];
  return s;
}

void axpy(double alpha, const VectorField& x, VectorField& y) {
  for (std::size_t k = 0; k < x.x.size(); ++k) {
    y.x[k] += alpha * x.x[k];
    y.y[k] += alpha * x.y[k];
  }
}

VectorField scaled_by(const VectorField& r, const VectorField& inv_diag) {
  VectorField z = r;
  for (std::size_t k = 0; k < z.x.size(); ++k) {
    z.x[k] *= inv_diag.x[k];
    z.y[k] *= inv_diag.y[k];
  }
  return z;
}

}  // namespace

SolveResult cg_solve(const MomentumOperator& op, const VectorField& rhs, double tol_rel, int max_iter,
                     const std::optional<VectorField>& guess) {
  if (!(tol_rel > 0.0)) throw Error(ErrorCode::InvalidArgument, "cg_solve needs tol_rel > 0");
  if (max_iter <= 0) max_iter = default_cg_max_iter(op.grid());

  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) return {VectorField(op.grid()), {0, 0.0, true}};
  SolveResult res{guess ? *guess : VectorField(op.grid()), {}};
  const double target = tol_rel * rhs_norm;

  VectorField inv_diag = op.diagonal();
  for (std::size_t k = 0; k < inv_diag.x.size(); ++k) {
    inv_diag.x[k] = 1.0 / inv_diag.x[k];
    inv_diag.y[k] = 1.0 / inv_diag.y[k];
  }

  VectorField& x = res.u;
  VectorField r = rhs;
  if (guess) r -= op.apply(x);
  double rnorm = std::sqrt(dot(r, r));
  VectorField z = scaled_by(r, inv_diag);
  VectorField p = z;
  double rz = dot(r, z);
  int it = 0;
  while (rnorm > target && it < max_iter) {
    const VectorField q = op.apply(p);
    const double alpha = rz / dot(p, q);
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    z = scaled_by(r, inv_diag);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t k = 0; k < p.x.size(); ++k) {
      p.x[k] = z.x[k] + beta * p.x[k];
      p.y[k] = z.y[k] + beta * p.y[k];
    }
    rnorm = std::sqrt(dot(r, r));
    ++it;
  }
  res.report.iterations = it;
  res.report.residual = rhs_norm > 0.0 ? rnorm / rhs_norm : rnorm;
  res.report.converged = rnorm <= target;
  if (!res.report.converged) {
    std::ostringstream os;
    os << "conjugate gradients stalled at relative residual " << res.report.residual << " after " << it
       << " iterations (target " << tol_rel << ")";
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return res;
}

VectorField advect(const VectorField& u, const VectorField& v) {
  const ScalarField vxx = d_x(v.x), vxy = d_y(v.x), vyx = d_x(v.y), vyy = d_y(v.y);
  VectorField out(u.grid());
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    out.x[k] = u.x[k] * vxx[k] + u.y[k] * vxy[k];
    out.y[k] = u.x[k] * vyx[k] + u.y[k] * vyy[k];
  }
  return out;
}

VectorField momentum_rhs(const MomentumStepInput& in, const PhysParams& pp, double dt) {
  const ScalarField p = pressure(in.h_m, in.A_m, pp);
  const VectorField adv = advect(in.u_explicit, in.u_explicit);
  const VectorField gp = grad(p);
  VectorField out = total_forcing(in.u_explicit, in.h_m, pp);
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    const double m = pp.rho_ice * in.h_m[k];
    out.x[k] += m / dt * in.u_prev.x[k] - m * adv.x[k] - gp.x[k];
    out.y[k] += m / dt * in.u_prev.y[k] - m * adv.y[k] - gp.y[k];
  }
  return out;
}

SolveResult momentum_step(const MomentumStepInput& in, const PhysParams& pp, const RegParams& rp, double dt,
                          const SolverSettings& solver) {
  const ScalarField p = pressure(in.h_m, in.A_m, pp);
  const MomentumOperator op = MomentumOperator::lagged(in.h_m, p, in.u_lagged, pp, rp, dt);
  // At a fixed point u_lagged equals the solution, so a D u + b (div u) I is
  // exactly S_eps(p, grad u) and no explicit correction term remains.
  const VectorField rhs = momentum_rhs(in, pp, dt);
  const int max_iter = solver.max_iter > 0 ? solver.max_iter : default_cg_max_iter(in.h_m.grid());
  return cg_solve(op, rhs, solver.tol_rel, max_iter, in.u_lagged);
}

VectorField assembled_residual(const VectorField& u, const VectorField& u_prev, const ScalarField& h_m,
                               const ScalarField& A_m, const PhysParams& pp, const RegParams& rp, double dt) {
  const ScalarField p = pressure(h_m, A_m, pp);
  const TensorField gu = grad_vec(u);
  const ScalarField du = div(u);
  TensorField s = stress_vp(p, gu, du, rp.epsilon);
  s += stress_newtonian(gu, du, rp.mu, rp.lambda);
  const VectorField ds = stress_divergence(s);
  const VectorField adv = advect(u_prev, u_prev);
  const VectorField gp = grad(p);
  const VectorField f = total_forcing(u_prev, h_m, pp);
  VectorField out(u.grid());
  for (std::size_t k = 0; k < out.x.size(); ++k) {
    const double m = pp.rho_ice * h_m[k];
    out.x[k] = m * (u.x[k] - u_prev.x[k]) / dt + m * adv.x[k] + gp.x[k] - ds.x[k] - f.x[k];
    out.y[k] = m * (u.y[k] - u_prev.y[k]) / dt + m * adv.y[k] + gp.y[k] - ds.y[k] - f.y[k];
  }
  if (rp.iota != 0.0) out += rp.iota * biharmonic(u);
  return out;
}

}  // namespace seaice
