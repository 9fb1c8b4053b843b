// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seaice {

/// Uniform periodic cell-centered lattice on [0, lx) x [0, ly).
/// Cell (i, j) has center ((i + 1/2) dx, (j + 1/2) dy) and flat index j * nx + i.
class Grid {
 public:
  Grid(int nx, int ny, double lx = 1.0, double ly = 1.0);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double dx() const noexcept { return lx_ / nx_; }
  double dy() const noexcept { return ly_ / ny_; }
  double cell_area() const noexcept { return dx() * dy(); }
  double area() const noexcept { return lx_ * ly_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  double x(int i) const noexcept { return (i + 0.5) * dx(); }
  double y(int j) const noexcept { return (j + 0.5) * dy(); }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(wrap(j, ny_)) * nx_ + wrap(i, nx_);
  }

  bool operator==(const Grid&) const = default;

 private:
  static int wrap(int k, int n) noexcept {
    k %= n;
    return k < 0 ? k + n : k;
  }

  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid& g, double value = 0.0) : grid_(g), v_(g.size(), value) {}
  ScalarField(const Grid& g, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return v_.size(); }

  double& operator[](std::size_t k) noexcept { return v_[k]; }
  double operator[](std::size_t k) const noexcept { return v_[k]; }
  double& operator()(int i, int j) noexcept { return v_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return v_[grid_.index(i, j)]; }

  std::span<double> values() noexcept { return v_; }
  std::span<const double> values() const noexcept { return v_; }

  double min() const;
  double max() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> v_;
};

struct VectorField {
  ScalarField x;
  ScalarField y;

  explicit VectorField(const Grid& g, double vx = 0.0, double vy = 0.0) : x(g, vx), y(g, vy) {}
  VectorField(ScalarField cx, ScalarField cy);

  const Grid& grid() const noexcept { return x.grid(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  bool operator==(const VectorField&) const = default;
};

/// Entry (r, c) holds d(component r)/d(coordinate c) when built by grad_vec.
struct TensorField {
  ScalarField xx;
  ScalarField xy;
  ScalarField yx;
  ScalarField yy;

  explicit TensorField(const Grid& g) : xx(g), xy(g), yx(g), yy(g) {}
  TensorField(ScalarField cxx, ScalarField cxy, ScalarField cyx, ScalarField cyy);

  const Grid& grid() const noexcept { return xx.grid(); }

  TensorField& operator+=(const TensorField& o);
  TensorField& operator*=(double a);

  bool operator==(const TensorField&) const = default;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);
TensorField operator+(TensorField a, const TensorField& b);
TensorField operator*(double s, TensorField a);

/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

// Discrete calculus. All first derivatives are second-order centered
// differences with periodic wrap, so d_x and d_y commute and are
// antisymmetric in the grid inner product.

ScalarField d_x(const ScalarField& s);
ScalarField d_y(const ScalarField& s);
/// Mixed centered derivative d_x^ax d_y^ay.
ScalarField derivative(const ScalarField& s, int ax, int ay);

VectorField grad(const ScalarField& s);
ScalarField div(const VectorField& v);
TensorField grad_vec(const VectorField& v);
/// grad u + (grad u)^T.
TensorField sym_grad(const VectorField& v);
/// Row-wise divergence: (div S)_r = sum_c d_c S_rc.
VectorField div_tensor(const TensorField& s);

/// Compact five-point Laplacian.
ScalarField laplacian(const ScalarField& s);
VectorField laplacian(const VectorField& v);
VectorField biharmonic(const VectorField& v);

// Reductions, summed sequentially in flat-index order.

double integral(const ScalarField& s);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double inner(const TensorField& a, const TensorField& b);

/// p in {2, 4} gives the discrete L^p norm; any p <= 0 (see kLinf) gives max |s|.
double norm_lp(const ScalarField& s, int p);
double norm_lp(const VectorField& v, int p);
inline constexpr int kLinf = 0;

/// Squared discrete H^k norm. With D_x, D_y the centered differences,
///   |f|_{H^k}^2 = sum_{j<=k} sum_{a+b=j} binom(j, a) ||D_x^a D_y^b f||_{L^2}^2,
/// i.e. the full j-th derivative tensor with multiplicities. k <= 4.
double norm_hk_sq(const ScalarField& s, int k);
double norm_hk_sq(const VectorField& v, int k);
double norm_hk(const ScalarField& s, int k);
double norm_hk(const VectorField& v, int k);

/// Squared L^2 norm of the j-th derivative tensor alone (same weights as above).
double seminorm_sq(const ScalarField& s, int j);

/// Shift by (di, dj) cells: out(i + di, j + dj) = s(i, j).
ScalarField shifted(const ScalarField& s, int di, int dj);
VectorField shifted(const VectorField& v, int di, int dj);

}  // namespace seaice
