// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "seaice/grid.hpp"
#include "seaice/params.hpp"

namespace seaice {

/// Ice strength p = c_p h exp(c_a A).
ScalarField pressure(const ScalarField& h, const ScalarField& A, const PhysParams& pp);

/// Regularized viscous-plastic stress
///   S = p D / sqrt(|D|^2 + eps^2) + p (div u) I / sqrt((div u)^2 + eps^2),
/// D = grad u + grad u^T, |.| the Frobenius norm. `gu` is grad u as built by grad_vec.
TensorField stress_vp(const ScalarField& p, const TensorField& gu, const ScalarField& divu, double eps);

/// Newtonian stress mu (grad u + grad u^T) + lambda (div u) I.
TensorField stress_newtonian(const TensorField& gu, const ScalarField& divu, double mu, double lambda);

/// Row-wise divergence of an assembled stress field.
VectorField stress_divergence(const TensorField& s);

/// A 2x2 matrix stored row-major, or a scalar padded with zeros (see Sample).
using Mat2 = std::array<double, 4>;

double frob_dot(const Mat2& a, const Mat2& b);

/// One of the two saturating terms p G / sqrt(|G|^2 + eps^2).
Mat2 saturating_term(double p, const Mat2& g, double eps);

struct MonotonicityGap {
  double lhs;        ///< (T(p1,G1) - T(p2,G2)) : (G1 - G2), evaluated directly
  double pressure;   ///< the (p1 - p2) cross term of the symmetric form
  double M;          ///< numerator of the symmetric form
  double bound;      ///< lhs rebuilt from pressure + M / (2 s1 s2 (s1 + s2))
  double lower;      ///< p eps^2 |G1 - G2|^2 / (s1 s2 (s1 + s2)), valid when p1 = p2 = p
};

/// Compares the two evaluations of the monotonicity identity for the
/// saturating stress term, with s_k = sqrt(|G_k|^2 + eps^2). Scalars are
/// passed as {g, 0, 0, 0}. Throws on p <= 0 or eps <= 0.
MonotonicityGap monotonicity_gap(double p1, double p2, const Mat2& g1, const Mat2& g2, double eps);

}  // namespace seaice
