#ifndef NBTRI_TEST_HELPERS_HPP
#define NBTRI_TEST_HELPERS_HPP

#include "nbtri/model.hpp"

namespace nbtri::testing {

// Masks a complete square of counts down to the observed staircase.
inline Triangle mask_lower_right(const std::vector<std::vector<long long>>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<std::optional<long long>>> cells(
      n, std::vector<std::optional<long long>>(n));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - i + 1; ++j) cells[i - 1][j - 1] = x[i - 1][j - 1];
  return Triangle(std::move(cells));
}

// Development proportions of the simulation study: decreasing linearly.
inline std::vector<double> simulation_pi(int n) {
  std::vector<double> pi(n);
  for (int j = 1; j <= n; ++j)
    pi[j - 1] = 2.0 * double(n - j + 1) / (double(n) * double(n + 1));
  return pi;
}

inline ModelParams simulation_params(int n = 10, long long alpha = 1000,
                                     double gamma = 0.15, int q = 2) {
  ModelParams p;
  p.alpha.assign(n, alpha);
  p.pi = simulation_pi(n);
  p.gamma.assign(n, gamma);
  p.q = q;
  return p;
}

}  // namespace nbtri::testing

#endif
