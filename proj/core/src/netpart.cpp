#include "aol/netpart.hpp"

#include <limits>
#include <stdexcept>

namespace aol {

Partition build_partition(std::span<const Predictor> members, double epsilon,
                          const EmpiricalMetricContext& ctx) {
  Partition part;
  part.net = greedy_cover(members, epsilon, ctx);
  part.assignment.assign(members.size(), 0);

  std::vector<double> best(members.size(), std::numeric_limits<double>::infinity());
  for (std::uint32_t c = 0; c < part.net.size(); ++c) {
    const Predictor& center = members[part.net.center_ids[c]];
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double d = emp_metric(members[i], center, ctx);
      if (d < best[i]) {  // strict: ties stay with the lowest center index
        best[i] = d;
        part.assignment[i] = c;
      }
    }
  }
  return part;
}

std::vector<std::uint32_t> cell_members(const Partition& p, std::uint32_t cell) {
  if (cell >= p.n_cells()) throw std::out_of_range("cell_members: cell index out of range");
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < p.assignment.size(); ++i) {
    if (p.assignment[i] == cell) out.push_back(i);
  }
  return out;
}

}  // namespace aol
