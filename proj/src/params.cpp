// SPDX-License-Identifier: Apache-2.0
#include "seaice/params.hpp"

#include <cmath>
#include <sstream>

#include "seaice/error.hpp"

namespace seaice {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::Validation, what);
}

}  // namespace

GrowthFn::GrowthFn(Rule rule, double f_lo, double f_hi, double deriv_bound, double sample_hi)
    : rule_(std::move(rule)), f_lo_(f_lo), f_hi_(f_hi), deriv_bound_(deriv_bound) {
  require(static_cast<bool>(rule_), "growth function has no rule");
  require(f_lo <= f_hi, "growth function needs f_lo <= f_hi");
  require(deriv_bound >= 0.0 && std::isfinite(deriv_bound), "growth derivative bound must be finite and >= 0");
  require(sample_hi > 0.0, "growth sampling interval must be nonempty");

  constexpr int kSamples = 1000;
  const double step = sample_hi / (kSamples - 1);
  const double fd = 1e-5 * std::max(1.0, sample_hi);
  const double slack = 1e-9 * (1.0 + std::abs(f_lo) + std::abs(f_hi));
  for (int k = 0; k < kSamples; ++k) {
    const double x = k * step;
    const double v = rule_(x);
    if (!(v >= f_lo - slack && v <= f_hi + slack)) {
      std::ostringstream os;
      os << "growth function value " << v << " at x = " << x << " leaves [" << f_lo << ", " << f_hi << "]";
      throw Error(ErrorCode::Validation, os.str());
    }
    const double d = (rule_(x + fd) - rule_(x - fd)) / (2.0 * fd);
    if (std::abs(d) > deriv_bound * (1.0 + 1e-6) + 1e-6) {
      std::ostringstream os;
      os << "growth function |f'| = " << std::abs(d) << " at x = " << x << " exceeds bound " << deriv_bound;
      throw Error(ErrorCode::Validation, os.str());
    }
  }
}

double GrowthFn::spread() const noexcept { return std::abs(f_hi_) + std::abs(f_lo_); }

GrowthFn growth_default(double alpha, double beta, double gamma) {
  require(alpha >= 0.0 && beta >= 0.0, "tanh growth needs alpha, beta >= 0");
  const double mf = alpha * (beta + beta * beta + 2.0 * beta * beta * beta);
  GrowthFn g([=](double x) { return alpha * std::tanh(beta * (gamma - x)); }, -alpha, alpha, mf);
  g.family_ = "tanh";
  g.family_params_ = {alpha, beta, gamma};
  return g;
}

GrowthFn growth_constant(double c) {
  require(std::isfinite(c), "constant growth needs a finite value");
  GrowthFn g([c](double) { return c; }, c, c, 0.0);
  g.family_ = "constant";
  g.family_params_ = {c};
  return g;
}

void RegParams::validate() const {
  require(epsilon > 0.0 && std::isfinite(epsilon), "regularization: epsilon must be > 0");
  require(omega > 0.0 && std::isfinite(omega), "regularization: omega must be > 0");
  require(mu >= 0.0 && lambda >= 0.0 && iota >= 0.0 && nu >= 0.0,
          "regularization: mu, lambda, iota, nu must be >= 0");
}

bool RegParams::dominates(const RegParams& o) const {
  return mu >= o.mu && lambda >= o.lambda && iota >= o.iota && nu >= o.nu;
}

void PhysParams::validate() const {
  require(rho_ice > 0.0, "physics: rho_ice must be > 0");
  require(c_p > 0.0, "physics: c_p must be > 0");
  require(h0 > 0.0, "physics: h0 must be > 0");
  require(rho_a >= 0.0 && rho_w >= 0.0 && C_a >= 0.0 && C_w >= 0.0,
          "physics: densities and drag coefficients must be >= 0");
}

}  // namespace seaice
