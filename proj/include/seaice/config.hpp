// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "seaice/driver.hpp"
#include "seaice/params.hpp"

namespace seaice {

struct GridSpec {
  int nx = 32;
  int ny = 32;
  double lx = 1.0;
  double ly = 1.0;

  Grid make() const { return Grid(nx, ny, lx, ly); }
  bool operator==(const GridSpec&) const = default;
};

/// One initial field.
///   constant:      a0
///   single-mode:   a0 + a1 sin(2 pi kx x / lx + px) sin(2 pi ky y / ly + py)
///   random-smooth: band-limited trigonometric sum (|k| <= modes) from the
///                  run seed, mapped affinely onto [lo, hi]
struct FieldSpec {
  std::string family = "constant";
  double a0 = 0.0;
  double a1 = 0.0;
  int kx = 1;
  int ky = 1;
  double px = 0.0;
  double py = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int modes = 3;

  /// Pointwise range the family can produce (before any clipping).
  double range_lo() const;
  double range_hi() const;
  bool operator==(const FieldSpec&) const = default;
};

struct InitialSpec {
  std::string snapshot;  ///< manifest path; when set the field specs are ignored
  FieldSpec h{"constant", 1.0};
  FieldSpec A{"constant", 1.0};
  FieldSpec u_x{};
  FieldSpec u_y{};

  bool operator==(const InitialSpec&) const = default;
};

struct PicardStudySpec {
  double target = 0.5;
  int max_halvings = 10;
  int extra_halvings = 3;
  double T_start = 0.0;  ///< 0 selects the small-time horizon of the initial state

  bool operator==(const PicardStudySpec&) const = default;
};

/// Schedule entry j is factor^j * (mu, lambda, iota, nu) of the base entry,
/// unless an explicit schedule is given.
struct ContinuationSpec {
  int entries = 5;
  double factor = 0.5;
  double mu = 0.1;
  double lambda = 0.1;
  double iota = 0.01;
  double nu = 0.1;
  std::vector<RegParams> schedule;

  std::vector<RegParams> expand(const RegParams& base) const;
  bool operator==(const ContinuationSpec&) const = default;
};

struct StabilitySpec {
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  double max_spread = 3.0;  ///< largest ratio / smallest ratio accepted

  bool operator==(const StabilitySpec&) const = default;
};

struct RunConfig {
  GridSpec grid;
  PhysParams phys;
  RegParams reg;
  InitialSpec initial;
  double T = 0.0;
  double dt_max = 1e-3;
  double slab_cap = std::numeric_limits<double>::infinity();
  CflPolicy cfl;
  double picard_tol = 1e-8;
  int picard_max = 50;
  SolverSettings solver;
  double monitor_tol = 1e-6;
  bool fail_fast = false;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  PicardStudySpec picard_study;
  ContinuationSpec continuation;
  StabilitySpec stability;

  /// Full validation, including the data constraints min h_in > 0 and
  /// A_in in [0, 1]. Throws Validation with the offending field named.
  void validate() const;
  IntegrateOptions integrate_options() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Reads, fills defaults and validates. Relative snapshot paths resolve
/// against the directory holding the config file.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
std::string serialize_config(const RunConfig& cfg);
/// Atomic write of serialize_config.
void save_config(const RunConfig& cfg, const std::string& path);

ScalarField make_field(const FieldSpec& spec, const Grid& g, std::uint64_t seed, double clip_lo, double clip_hi);
/// Initial state from the analytic families (A clipped to [0, 1]) or the
/// referenced snapshot. Throws Validation when the data constraints fail.
State make_initial_state(const RunConfig& cfg);

}  // namespace seaice
