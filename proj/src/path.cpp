// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/path.hpp"

#include <algorithm>
#include <string>

#include "fracbranch/errors.hpp"

namespace fracbranch {

double PathGrid::value_at(double t) const {
  if (t_grid.empty() || t < t_grid.front())
    throw PreconditionError("path has no value at t = " + std::to_string(t));
  const auto it = std::upper_bound(t_grid.begin(), t_grid.end(), t);
  return values[static_cast<std::size_t>(it - t_grid.begin()) - 1];
}

}  // namespace fracbranch
