#ifndef NBTRI_CHAINLADDER_HPP
#define NBTRI_CHAINLADDER_HPP

#include "nbtri/triangle.hpp"

namespace nbtri {

struct ChainLadderResult {
  int n = 0;
  std::vector<double> factors;  // f_j, j = 1..n-1
  // Completed incremental matrix; observed cells carry the input values.
  std::vector<std::vector<double>> completed;
  std::vector<std::vector<long long>> completed_rounded;  // half away from zero
  std::vector<double> reserves;  // N_i, i = 1..n (N_1 = 0), unrounded
  double total = 0;              // unrounded
  std::vector<std::vector<bool>> forecast_mask;  // true on forecast cells
};

// Volume-weighted development factors on the cumulative triangle.
ChainLadderResult chain_ladder(const Triangle& x);

// Per-year and total reserves, rounded once at the end.
std::pair<std::vector<long long>, long long> reserves_from_completed(
    const ChainLadderResult& r);

}  // namespace nbtri

#endif
