// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace seaice {

/// Thermodynamic growth rate f together with the bounds the well-posedness
/// theory needs: f_lo <= f <= f_hi and |f'| <= deriv_bound.
class GrowthFn {
 public:
  using Rule = std::function<double(double)>;

  /// Validates the declared bounds by sampling 1000 points on [0, sample_hi]
  /// (values) and centered finite differences (first derivative).
  GrowthFn(Rule rule, double f_lo, double f_hi, double deriv_bound, double sample_hi = 10.0);

  double operator()(double x) const { return rule_(x); }
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }
  double deriv_bound() const noexcept { return deriv_bound_; }
  /// |f_hi| + |f_lo|, the quantity every small-time horizon is built from.
  double spread() const noexcept;

  /// Serializable description, empty for user-supplied rules.
  const std::string& family() const noexcept { return family_; }
  const std::vector<double>& family_params() const noexcept { return family_params_; }

 private:
  friend GrowthFn growth_default(double, double, double);
  friend GrowthFn growth_constant(double);

  Rule rule_;
  double f_lo_;
  double f_hi_;
  double deriv_bound_;
  std::string family_;
  std::vector<double> family_params_;
};

/// f(x) = alpha * tanh(beta * (gamma - x)).
GrowthFn growth_default(double alpha, double beta, double gamma);
/// f(x) = c.
GrowthFn growth_constant(double c);

/// The six regularization parameters. mu = lambda = iota = nu = 0 selects
/// the target system; epsilon and omega must stay positive.
struct RegParams {
  double epsilon = 0.1;
  double omega = 0.1;
  double mu = 0.0;
  double lambda = 0.0;
  double iota = 0.0;
  double nu = 0.0;

  void validate() const;
  /// True when every relaxation entry of *this is >= the one in other.
  bool dominates(const RegParams& other) const;
  bool operator==(const RegParams&) const = default;
};

using Vec2 = std::array<double, 2>;

struct PhysParams {
  double rho_ice = 1.0;
  double rho_a = 1.0;
  double rho_w = 1.0;
  double c_p = 1.0;
  double c_a = 1.0;
  double C_a = 0.01;
  double C_w = 0.01;
  Vec2 U_g{0.0, 0.0};
  Vec2 U_w{0.0, 0.0};
  double phi = 0.0;
  double theta = 0.0;
  double eta = 0.0;
  double h0 = 1.0;
  GrowthFn growth = growth_default(1.0, 1.0, 1.0);

  void validate() const;
};

}  // namespace seaice
