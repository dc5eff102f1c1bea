#ifndef NBTRI_PREDICT_HPP
#define NBTRI_PREDICT_HPP

#include <map>
#include <utility>

#include "nbtri/sampler.hpp"

namespace nbtri {

struct Quantiles {
  double mean = 0, q025 = 0, q50 = 0, q975 = 0;
};

Quantiles summarize(std::vector<double> draws);
Quantiles summarize_ll(const std::vector<long long>& draws);

struct ReserveSummary {
  int n = 0;
  // draws per unobserved cell, row-major
  std::map<std::pair<int, int>, std::vector<long long>> cell_draws;
  std::vector<std::vector<long long>> reserve_draws;  // N_i for i = 2..n
  std::vector<long long> total_draws;                 // N
  std::map<std::pair<int, int>, Quantiles> cell_summary;
  std::vector<Quantiles> reserve_summary;  // aligned with reserve_draws
  Quantiles total_summary;
};

struct FitStats {
  int q = 0;
  double lpml = 0;
  double bias = 0;
  double pvar = 0;
};

// Conditional ordinate of one observed cell given a draw, in log space.
// For q >= 1 this is the Poisson ordinate of the residual-count line of
// the hierarchy given the draw's latents. At q = 0 the dependence layer
// vanishes (the latents are pure augmentation of the independence
// model), so the exact marginal NB(alpha_i, 1/(1+pi_j)) ordinate is
// used instead of a latent-conditional approximation.
double log_conditional_ordinate(const ChainRun& run, std::size_t t,
                                const Triangle& x, int i, int j);

// Completes the lower-right triangle draw by draw, carrying each draw's
// observed-cell latents across the diagonal so the MA(q) window holds.
ReserveSummary predictive_complete(const ChainRun& run, const Triangle& x,
                                   std::uint64_t seed);

// LPML via the harmonic-mean CPO estimator. Cells whose ordinate
// underflows to zero are skipped with a warning on stderr.
double lpml(const ChainRun& run, const Triangle& x);

// One within-sample replicate of every observed cell per kept draw,
// from that draw's parameters and latents.
std::vector<std::vector<long long>> observed_replicates(const ChainRun& run,
                                                        const Triangle& x,
                                                        std::uint64_t seed);
// BIAS and PVAR from a replicate table (draws x observed cells, in
// observed_cells order).
double bias_from_replicates(const std::vector<std::vector<long long>>& reps,
                            const Triangle& x);
double pvar_from_replicates(const std::vector<std::vector<long long>>& reps,
                            const Triangle& x);

double bias_stat(const ChainRun& run, const Triangle& x, std::uint64_t seed);
double pvar_stat(const ChainRun& run, const Triangle& x, std::uint64_t seed);

FitStats fit_stats(const ChainRun& run, const Triangle& x, std::uint64_t seed);

// One full fit per q; chain seed is offset by q so fits are independent.
std::vector<FitStats> select_q(const Triangle& x, const std::vector<int>& grid,
                               const ChainConfig& base);

}  // namespace nbtri

#endif
