// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace seaice {

struct InvariantRow {
  std::string suite;
  std::string check;
  int samples = 0;
  double worst = 0.0;      ///< largest observed defect (or smallest margin, see check)
  double tolerance = 0.0;
  bool pass = false;
};

/// Randomized self-checks of the discrete structure: calculus identities,
/// rheology monotonicity, source bounds, transport conservation and
/// maximum principle, operator symmetry, persistence round trips and a
/// short monitored integration. Fully determined by the seed.
std::vector<InvariantRow> run_invariant_suite(std::uint64_t seed,
                                              const std::function<void(const InvariantRow&)>& on_row = {});

}  // namespace seaice
