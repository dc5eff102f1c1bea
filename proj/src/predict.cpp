#include "nbtri/predict.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace nbtri {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxRedraws = 1000;

double quantile(std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0;
  const double h = p * (double(sorted.size()) - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}
}  // namespace

Quantiles summarize(std::vector<double> draws) {
  Quantiles s;
  if (draws.empty()) return s;
  double sum = 0;
  for (double d : draws) sum += d;
  s.mean = sum / double(draws.size());
  std::sort(draws.begin(), draws.end());
  s.q025 = quantile(draws, 0.025);
  s.q50 = quantile(draws, 0.5);
  s.q975 = quantile(draws, 0.975);
  return s;
}

Quantiles summarize_ll(const std::vector<long long>& draws) {
  return summarize(std::vector<double>(draws.begin(), draws.end()));
}

double log_conditional_ordinate(const ChainRun& run, std::size_t t,
                                const Triangle& x, int i, int j) {
  const ModelParams& p = run.params.at(t);
  const LatentState& s = run.latents.at(t);
  if (p.q == 0)
    return log_pmf_negbin(x.at(i, j), double(p.alpha[i - 1]), p.pi[j - 1]);
  return log_pmf_poisson(residual_count(x, s, p.q, i, j),
                         residual_rate(s, p, i, j));
}

ReserveSummary predictive_complete(const ChainRun& run, const Triangle& x,
                                   std::uint64_t seed) {
  const int n = x.size();
  const std::size_t T = run.params.size();
  ReserveSummary out;
  out.n = n;
  RngStream rng(seed, 1);
  for (int i = 2; i <= n; ++i)
    for (int j = n - i + 2; j <= n; ++j)
      out.cell_draws[{i, j}] = std::vector<long long>();
  out.reserve_draws.assign(n - 1, {});
  for (std::size_t t = 0; t < T; ++t) {
    const ModelParams& p = run.params[t];
    LatentState s = run.latents[t];
    long long total = 0;
    for (int i = 2; i <= n; ++i) {
      // Simulate the row's unobserved segment; if a cell exhausts its
      // redraws (the already-simulated lags squeezed the residual rate
      // to an unreachable region) restart the whole segment, which is
      // the row-level version of the simulator's rejection rule.
      std::vector<long long> row_x;
      for (int restart = 0;; ++restart) {
        if (restart >= kMaxRedraws)
          throw ModelError("predictive_complete: residual rate infeasible in "
                           "row " + std::to_string(i));
        row_x.clear();
        bool ok = true;
        for (int j = n - i + 2; j <= n && ok; ++j) {
          double lagged = 0;
          for (int l = 1; l <= p.q && j - l >= 1; ++l)
            lagged += s.z.get(i, j - l) * p.gamma[j - l - 1];
          double z = 0, rr = -1;
          int tries = 0;
          while (rr < 0) {
            if (++tries > kMaxRedraws) {
              ok = false;
              break;
            }
            z = rng.gamma(double(p.alpha[i - 1]), 1.0 / p.pi[j - 1]);
            rr = z * (1.0 - p.gamma[j - 1]) - lagged;
          }
          if (!ok) break;
          s.z.set(i, j, z);
          const long long y = rng.poisson(z * p.gamma[j - 1]);
          s.y.set(i, j, y);
          long long window = 0;
          for (int l = 0; l <= p.q && j - l >= 1; ++l)
            window += s.y.get(i, j - l);
          row_x.push_back(window + rng.poisson(rr));
        }
        if (ok) break;
      }
      long long ni = 0;
      for (int j = n - i + 2; j <= n; ++j) {
        const long long xij = row_x[std::size_t(j - (n - i + 2))];
        out.cell_draws[{i, j}].push_back(xij);
        ni += xij;
      }
      out.reserve_draws[i - 2].push_back(ni);
      total += ni;
    }
    out.total_draws.push_back(total);
  }
  for (auto& [cell, draws] : out.cell_draws)
    out.cell_summary[cell] = summarize_ll(draws);
  out.reserve_summary.resize(n - 1);
  for (int i = 2; i <= n; ++i)
    out.reserve_summary[i - 2] = summarize_ll(out.reserve_draws[i - 2]);
  out.total_summary = summarize_ll(out.total_draws);
  return out;
}

double lpml(const ChainRun& run, const Triangle& x) {
  const std::size_t T = run.params.size();
  if (T == 0) throw ModelError("lpml: empty chain");
  double total = 0;
  std::vector<double> neg_log_ord(T);
  for (const Cell& c : x.observed_cells()) {
    for (std::size_t t = 0; t < T; ++t)
      neg_log_ord[t] = -log_conditional_ordinate(run, t, x, c.i, c.j);
    // log CPO = log T - logsumexp(-log ordinates)
    const double lse = log_sum_exp(neg_log_ord);
    if (!std::isfinite(lse)) {
      std::cerr << "lpml: zero ordinate at cell (" << c.i << "," << c.j
                << "), skipping\n";
      continue;
    }
    total += std::log(double(T)) - lse;
  }
  return total;
}

std::vector<std::vector<long long>> observed_replicates(const ChainRun& run,
                                                        const Triangle& x,
                                                        std::uint64_t seed) {
  const auto cells = x.observed_cells();
  RngStream rng(seed, 2);
  std::vector<std::vector<long long>> reps(run.params.size());
  for (std::size_t t = 0; t < run.params.size(); ++t) {
    const ModelParams& p = run.params[t];
    const LatentState& s = run.latents[t];
    reps[t].reserve(cells.size());
    for (const Cell& c : cells) {
      long long window = 0;
      for (int l = 0; l <= p.q && c.j - l >= 1; ++l)
        window += s.y.get(c.i, c.j - l);
      reps[t].push_back(window + rng.poisson(residual_rate(s, p, c.i, c.j)));
    }
  }
  return reps;
}

namespace {
// column means and (sample) variances of the replicate table
void replicate_moments(const std::vector<std::vector<long long>>& reps,
                       std::vector<double>& mean, std::vector<double>& var) {
  const std::size_t T = reps.size();
  if (T == 0) throw ModelError("replicate table is empty");
  const std::size_t m = reps[0].size();
  mean.assign(m, 0);
  var.assign(m, 0);
  for (const auto& row : reps)
    for (std::size_t c = 0; c < m; ++c) mean[c] += double(row[c]);
  for (double& v : mean) v /= double(T);
  if (T < 2) return;
  for (const auto& row : reps)
    for (std::size_t c = 0; c < m; ++c) {
      const double d = double(row[c]) - mean[c];
      var[c] += d * d;
    }
  for (double& v : var) v /= double(T - 1);
}
}  // namespace

double bias_from_replicates(const std::vector<std::vector<long long>>& reps,
                            const Triangle& x) {
  std::vector<double> mean, var;
  replicate_moments(reps, mean, var);
  const auto cells = x.observed_cells();
  double s = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double d = mean[c] - double(cells[c].x);
    s += d * d;
  }
  const int n = x.size();
  return 2.0 * s / (double(n) * double(n + 1));
}

double pvar_from_replicates(const std::vector<std::vector<long long>>& reps,
                            const Triangle& x) {
  std::vector<double> mean, var;
  replicate_moments(reps, mean, var);
  double s = 0;
  for (double v : var) s += v;
  const int n = x.size();
  return 2.0 * s / (double(n) * double(n + 1));
}

double bias_stat(const ChainRun& run, const Triangle& x, std::uint64_t seed) {
  return bias_from_replicates(observed_replicates(run, x, seed), x);
}

double pvar_stat(const ChainRun& run, const Triangle& x, std::uint64_t seed) {
  return pvar_from_replicates(observed_replicates(run, x, seed), x);
}

FitStats fit_stats(const ChainRun& run, const Triangle& x,
                   std::uint64_t seed) {
  FitStats f;
  f.q = run.config.q;
  f.lpml = lpml(run, x);
  const auto reps = observed_replicates(run, x, seed);
  f.bias = bias_from_replicates(reps, x);
  f.pvar = pvar_from_replicates(reps, x);
  return f;
}

std::vector<FitStats> select_q(const Triangle& x, const std::vector<int>& grid,
                               const ChainConfig& base) {
  std::vector<FitStats> out;
  for (int q : grid) {
    ChainConfig cfg = base;
    cfg.q = q;
    cfg.seed = base.seed + std::uint64_t(q) * 1000003ULL;
    ChainRun run = run_chain(x, cfg);
    out.push_back(fit_stats(run, x, cfg.seed));
  }
  return out;
}

}  // namespace nbtri
