// SPDX-License-Identifier: Apache-2.0
#include "seaice/rheology.hpp"

#include <cmath>

#include "seaice/error.hpp"

namespace seaice {

ScalarField pressure(const ScalarField& h, const ScalarField& A, const PhysParams& pp) {
  if (!(h.grid() == A.grid())) throw Error(ErrorCode::InvalidArgument, "h and A live on different grids");
  ScalarField p(h.grid());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = pp.c_p * h[k] * std::exp(pp.c_a * A[k]);
  return p;
}

TensorField stress_vp(const ScalarField& p, const TensorField& gu, const ScalarField& divu, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "stress_vp needs eps > 0");
  TensorField s(p.grid());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double dxx = 2.0 * gu.xx[k];
    const double dxy = gu.xy[k] + gu.yx[k];
    const double dyy = 2.0 * gu.yy[k];
    const double d2 = dxx * dxx + 2.0 * dxy * dxy + dyy * dyy;
    const double a = p[k] / std::sqrt(d2 + eps * eps);
    const double dv = divu[k];
    const double b = p[k] * dv / std::sqrt(dv * dv + eps * eps);
    s.xx[k] = a * dxx + b;
    s.xy[k] = a * dxy;
    s.yx[k] = a * dxy;
    s.yy[k] = a * dyy + b;
  }
  return s;
}

TensorField stress_newtonian(const TensorField& gu, const ScalarField& divu, double mu, double lambda) {
  TensorField s(gu.grid());
  for (std::size_t k = 0; k < divu.size(); ++k) {
    const double off = mu * (gu.xy[k] + gu.yx[k]);
    const double iso = lambda * divu[k];
    s.xx[k] = 2.0 * mu * gu.xx[k] + iso;
    s.xy[k] = off;
    s.yx[k] = off;
    s.yy[k] = 2.0 * mu * gu.yy[k] + iso;
  }
  return s;
}

VectorField stress_divergence(const TensorField& s) { return div_tensor(s); }

double frob_dot(const Mat2& a, const Mat2& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

Mat2 saturating_term(double p, const Mat2& g, double eps) {
  const double w = p / std::sqrt(frob_dot(g, g) + eps * eps);
  return {w * g[0], w * g[1], w * g[2], w * g[3]};
}

MonotonicityGap monotonicity_gap(double p1, double p2, const Mat2& g1, const Mat2& g2, double eps) {
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "monotonicity_gap needs p > 0");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "monotonicity_gap needs eps > 0");

  Mat2 dg{}, sum{}, weighted{};
  for (int k = 0; k < 4; ++k) {
    dg[k] = g1[k] - g2[k];
    sum[k] = g1[k] + g2[k];
    weighted[k] = p1 * g1[k] + p2 * g2[k];
  }
  const Mat2 t1 = saturating_term(p1, g1, eps);
  const Mat2 t2 = saturating_term(p2, g2, eps);
  Mat2 dt{};
  for (int k = 0; k < 4; ++k) dt[k] = t1[k] - t2[k];

  const double s1 = std::sqrt(frob_dot(g1, g1) + eps * eps);
  const double s2 = std::sqrt(frob_dot(g2, g2) + eps * eps);
  const double dg2 = frob_dot(dg, dg);
  const double denom = s1 * s2 * (s1 + s2);

  MonotonicityGap r{};
  r.lhs = frob_dot(dt, dg);
  Mat2 unit_sum{};
  for (int k = 0; k < 4; ++k) unit_sum[k] = g1[k] / s1 + g2[k] / s2;
  r.pressure = 0.5 * (p1 - p2) * frob_dot(unit_sum, dg);
  r.M = (p1 * s1 + p2 * s2) * (s1 + s2) * dg2 - frob_dot(sum, dg) * frob_dot(weighted, dg);
  r.bound = r.pressure + 0.5 * r.M / denom;
  r.lower = std::min(p1, p2) * eps * eps * dg2 / denom;
  return r;
}

}  // namespace seaice
