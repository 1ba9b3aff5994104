// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace fracbranch {

/// Population mass sampled on a time grid.
///
/// step == true: value holds on [t_grid[i], t_grid[i+1]) (cadlag step path).
/// step == false: values are grid samples of a continuous path.
struct PathGrid {
  std::vector<double> t_grid;
  std::vector<double> values;
  bool step = false;

  /// Value at time t for a step path (last grid point <= t).
  double value_at(double t) const;
};

}  // namespace fracbranch
