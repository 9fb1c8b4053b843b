// SPDX-License-Identifier: Apache-2.0
#include "seaice/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seaice/error.hpp"

namespace seaice {

namespace {

void require_same(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
}

// binom(j, a) for j <= 4
double binom(int j, int a) {
  static constexpr double table[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  return table[j][a];
}

}  // namespace

Grid::Grid(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4)
    throw Error(ErrorCode::InvalidArgument,
                "grid needs at least 4 cells per direction, got " + std::to_string(nx) + "x" +
                    std::to_string(ny));
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw Error(ErrorCode::InvalidArgument, "grid lengths must be positive and finite");
}

ScalarField::ScalarField(const Grid& g, std::vector<double> values) : grid_(g), v_(std::move(values)) {
  if (v_.size() != g.size())
    throw Error(ErrorCode::InvalidArgument, "field payload length does not match grid");
}

double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double a) { return std::isfinite(a); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same(grid_, o.grid_);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same(grid_, o.grid_);
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& x : v_) x *= a;
  return *this;
}

VectorField::VectorField(ScalarField cx, ScalarField cy) : x(std::move(cx)), y(std::move(cy)) {
  require_same(x.grid(), y.grid());
}

VectorField& VectorField::operator+=(const VectorField& o) {
  x += o.x;
  y += o.y;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  x -= o.x;
  y -= o.y;
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  x *= a;
  y *= a;
  return *this;
}

TensorField::TensorField(ScalarField cxx, ScalarField cxy, ScalarField cyx, ScalarField cyy)
    : xx(std::move(cxx)), xy(std::move(cxy)), yx(std::move(cyx)), yy(std::move(cyy)) {
  require_same(xx.grid(), xy.grid());
  require_same(xx.grid(), yx.grid());
  require_same(xx.grid(), yy.grid());
}

TensorField& TensorField::operator+=(const TensorField& o) {
  xx += o.xx;
  xy += o.xy;
  yx += o.yx;
  yy += o.yy;
  return *this;
}

TensorField& TensorField::operator*=(double a) {
  xx *= a;
  xy *= a;
  yx *= a;
  yy *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }
TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
TensorField operator*(double s, TensorField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid(), b.grid());
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

ScalarField d_x(const ScalarField& s) {
  const Grid& g = s.grid();
  const double inv = 1.0 / (2.0 * g.dx());
  ScalarField out(g);
  const int nx = g.nx();
  for (int j = 0; j < g.ny(); ++j) {
    const double* row = s.values().data() + static_cast<std::size_t>(j) * nx;
    double* o = out.values().data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int ip = i + 1 == nx ? 0 : i + 1;
      const int im = i == 0 ? nx - 1 : i - 1;
      o[i] = (row[ip] - row[im]) * inv;
    }
  }
  return out;
}

ScalarField d_y(const ScalarField& s) {
  const Grid& g = s.grid();
  const double inv = 1.0 / (2.0 * g.dy());
  ScalarField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
  const double* in = s.values().data();
  for (int j = 0; j < ny; ++j) {
    const double* up = in + static_cast<std::size_t>(j + 1 == ny ? 0 : j + 1) * nx;
    const double* dn = in + static_cast<std::size_t>(j == 0 ? ny - 1 : j - 1) * nx;
    double* o = out.values().data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) o[i] = (up[i] - dn[i]) * inv;
  }
  return out;
}

ScalarField derivative(const ScalarField& s, int ax, int ay) {
  if (ax < 0 || ay < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  ScalarField out = s;
  for (int a = 0; a < ax; ++a) out = d_x(out);
  for (int b = 0; b < ay; ++b) out = d_y(out);
  return out;
}

VectorField grad(const ScalarField& s) { return VectorField(d_x(s), d_y(s)); }

ScalarField div(const VectorField& v) { return d_x(v.x) + d_y(v.y); }

TensorField grad_vec(const VectorField& v) {
  return TensorField(d_x(v.x), d_y(v.x), d_x(v.y), d_y(v.y));
}

TensorField sym_grad(const VectorField& v) {
  TensorField g = grad_vec(v);
  ScalarField off = g.xy + g.yx;
  return TensorField(2.0 * g.xx, off, off, 2.0 * g.yy);
}

VectorField div_tensor(const TensorField& s) {
  return VectorField(d_x(s.xx) + d_y(s.xy), d_x(s.yx) + d_y(s.yy));
}

ScalarField laplacian(const ScalarField& s) {
  const Grid& g = s.grid();
  const double cx = 1.0 / (g.dx() * g.dx());
  const double cy = 1.0 / (g.dy() * g.dy());
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double c = s(i, j);
      out(i, j) = (s(i + 1, j) - 2.0 * c + s(i - 1, j)) * cx + (s(i, j + 1) - 2.0 * c + s(i, j - 1)) * cy;
    }
  return out;
}

VectorField laplacian(const VectorField& v) { return VectorField(laplacian(v.x), laplacian(v.y)); }

VectorField biharmonic(const VectorField& v) { return laplacian(laplacian(v)); }

double integral(const ScalarField& s) {
  double sum = 0.0;
  for (double a : s.values()) sum += a;
  return sum * s.grid().cell_area();
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same(a.grid(), b.grid());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
  return sum * a.grid().cell_area();
}

double inner(const VectorField& a, const VectorField& b) { return inner(a.x, b.x) + inner(a.y, b.y); }

double inner(const TensorField& a, const TensorField& b) {
  return inner(a.xx, b.xx) + inner(a.xy, b.xy) + inner(a.yx, b.yx) + inner(a.yy, b.yy);
}

double norm_lp(const ScalarField& s, int p) {
  if (p <= 0) {
    double m = 0.0;
    for (double a : s.values()) m = std::max(m, std::abs(a));
    return m;
  }
  if (p != 2 && p != 4) throw Error(ErrorCode::InvalidArgument, "norm_lp supports p in {2, 4, inf}");
  double sum = 0.0;
  for (double a : s.values()) {
    const double a2 = a * a;
    sum += p == 2 ? a2 : a2 * a2;
  }
  sum *= s.grid().cell_area();
  return p == 2 ? std::sqrt(sum) : std::sqrt(std::sqrt(sum));
}

double norm_lp(const VectorField& v, int p) {
  // pointwise Euclidean magnitude, then the scalar norm
  ScalarField mag(v.grid());
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(v.x[k], v.y[k]);
  return norm_lp(mag, p);
}

double seminorm_sq(const ScalarField& s, int j) {
  if (j < 0 || j > 4) throw Error(ErrorCode::InvalidArgument, "derivative order must be in [0, 4]");
  double sum = 0.0;
  ScalarField dxa = s;  // D_x^a s
  for (int a = 0; a <= j; ++a) {
    if (a > 0) dxa = d_x(dxa);
    const ScalarField mixed = derivative(dxa, 0, j - a);
    const double n = norm_lp(mixed, 2);
    sum += binom(j, a) * n * n;
  }
  return sum;
}

double norm_hk_sq(const ScalarField& s, int k) {
  if (k < 0 || k > 4) throw Error(ErrorCode::InvalidArgument, "norm_hk supports k in [0, 4]");
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) sum += seminorm_sq(s, j);
  return sum;
}

double norm_hk_sq(const VectorField& v, int k) { return norm_hk_sq(v.x, k) + norm_hk_sq(v.y, k); }
double norm_hk(const ScalarField& s, int k) { return std::sqrt(norm_hk_sq(s, k)); }
double norm_hk(const VectorField& v, int k) { return std::sqrt(norm_hk_sq(v, k)); }

ScalarField shifted(const ScalarField& s, int di, int dj) {
  const Grid& g = s.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out(i + di, j + dj) = s(i, j);
  return out;
}

VectorField shifted(const VectorField& v, int di, int dj) {
  return VectorField(shifted(v.x, di, dj), shifted(v.y, di, dj));
}

}  // namespace seaice
