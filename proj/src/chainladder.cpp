#include "nbtri/chainladder.hpp"

#include <cmath>

namespace nbtri {

namespace {
long long round_half_away(double v) {
  return static_cast<long long>(v < 0 ? std::ceil(v - 0.5)
                                      : std::floor(v + 0.5));
}
}  // namespace

ChainLadderResult chain_ladder(const Triangle& x) {
  const int n = x.size();
  const CumulativeTriangle c = to_cumulative(x);
  ChainLadderResult r;
  r.n = n;
  r.factors.resize(std::max(0, n - 1));
  for (int j = 1; j <= n - 1; ++j) {
    long long num = 0, den = 0;
    for (int i = 1; i <= n - j; ++i) {
      num += c.at(i, j + 1);
      den += c.at(i, j);
    }
    if (den == 0)
      throw TriangleError("chain_ladder: zero cumulative sum in column " +
                          std::to_string(j));
    r.factors[j - 1] = double(num) / double(den);
  }

  std::vector<std::vector<double>> cum(n, std::vector<double>(n, 0));
  r.forecast_mask.assign(n, std::vector<bool>(n, false));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (x.observed(i, j)) {
        cum[i - 1][j - 1] = double(c.at(i, j));
      } else {
        cum[i - 1][j - 1] = cum[i - 1][j - 2] * r.factors[j - 2];
        r.forecast_mask[i - 1][j - 1] = true;
      }
    }
  }
  r.completed.assign(n, std::vector<double>(n, 0));
  r.completed_rounded.assign(n, std::vector<long long>(n, 0));
  r.reserves.assign(n, 0.0);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double inc =
          j == 1 ? cum[i - 1][0] : cum[i - 1][j - 1] - cum[i - 1][j - 2];
      r.completed[i - 1][j - 1] = inc;
      r.completed_rounded[i - 1][j - 1] =
          x.observed(i, j) ? x.at(i, j) : round_half_away(inc);
      if (!x.observed(i, j)) r.reserves[i - 1] += inc;
    }
  }
  for (double v : r.reserves) r.total += v;
  return r;
}

std::pair<std::vector<long long>, long long> reserves_from_completed(
    const ChainLadderResult& r) {
  std::vector<long long> ni(r.n);
  for (int i = 0; i < r.n; ++i) ni[i] = round_half_away(r.reserves[i]);
  return {ni, round_half_away(r.total)};
}

}  // namespace nbtri
