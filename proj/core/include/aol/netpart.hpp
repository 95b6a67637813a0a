#pragma once

#include <span>
#include <vector>

#include "aol/empirical.hpp"

namespace aol {

// Voronoi partition of a member list induced by the net centers under d_S.
// Cells are numbered by center order; ties go to the lowest center index, so
// every cell contains its own center.
struct Partition {
  EpsilonNet net;
  std::vector<std::uint32_t> assignment;  // member index -> cell index (0-based)

  std::uint32_t n_cells() const { return net.size(); }
};

Partition build_partition(std::span<const Predictor> members, double epsilon,
                          const EmpiricalMetricContext& ctx);

// Members of cell i in member order; never empty.
std::vector<std::uint32_t> cell_members(const Partition& p, std::uint32_t cell);

}  // namespace aol
