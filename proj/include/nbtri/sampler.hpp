#ifndef NBTRI_SAMPLER_HPP
#define NBTRI_SAMPLER_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "nbtri/model.hpp"

namespace nbtri {

struct ChainConfig {
  long iterations = 50000;
  long burn_in = 5000;
  long thinning = 20;
  std::uint64_t seed = 1;
  int q = 0;
  Hyperparams hyper;  // Dirichlet weights sized at fit time if empty
  bool adapt = true;  // burn-in only

  // Initial step sizes; adaptation multiplies them per block.
  double delta_alpha = 5.0;
  double delta_y = 2.0;
  double delta_gamma = 0.05;
  double delta_pi = 0.01;
  double delta_z_frac = 0.10;  // fraction of each node's initial value

  // Test hooks: hold a block fixed instead of sampling it.
  std::optional<std::vector<double>> fix_pi;
  std::optional<double> fix_gamma;
};

enum Block { kAlpha = 0, kGamma = 1, kPi = 2, kY = 3, kZ = 4 };
inline constexpr std::array<const char*, 5> kBlockNames = {"alpha", "gamma",
                                                           "pi", "y", "z"};

struct BlockAccept {
  long long proposals = 0;
  long long accepts = 0;
  double rate() const {
    return proposals == 0 ? 0.0 : double(accepts) / double(proposals);
  }
};

struct ChainRun {
  std::vector<ModelParams> params;
  std::vector<LatentState> latents;
  std::array<BlockAccept, 5> acceptance;  // post burn-in
  std::array<double, 5> final_delta{};    // block step sizes after adaptation
  ChainConfig config;
  double wall_seconds = 0;
};

struct MhResult {
  double value;
  bool accepted;
};
struct MhResultInt {
  long long value;
  bool accepted;
};

// One uniform random-walk MH step; support is encoded by the target
// returning -inf. Acceptance probability min(1, exp(delta log target)).
MhResult mh_step(const std::function<double(double)>& log_target,
                 double current, double delta, RngStream& rng);
// Symmetric discrete uniform proposal on {cur-delta, ..., cur+delta}.
MhResultInt mh_step_int(const std::function<double(long long)>& log_target,
                        long long current, long long delta, RngStream& rng);

// Mutable per-chain sampler state; exposed so tests can drive single scans.
class GibbsSampler {
 public:
  GibbsSampler(const Triangle& x, const ChainConfig& cfg);

  void scan(RngStream& rng);  // one sweep: alpha, gamma, pi, Y, Z
  void adapt_deltas();        // multiplicative update from the current window
  void reset_window();
  void reset_acceptance();
  // Swap in fresh data with matching latents (Geweke-style checks).
  void set_data(const Triangle& x, const LatentState& s);

  const ModelParams& params() const { return params_; }
  const LatentState& state() const { return state_; }
  ModelParams& params() { return params_; }
  LatentState& state() { return state_; }
  const std::array<BlockAccept, 5>& acceptance() const { return accept_; }
  std::array<double, 5> deltas() const;

 private:
  const Triangle* x_;
  ChainConfig cfg_;
  ModelParams params_;
  LatentState state_;
  std::array<BlockAccept, 5> accept_{};

  // Every node carries its own step size and acceptance window; the
  // adaptation rule is applied node by node, since posterior scales
  // differ by orders of magnitude within a block (alpha tracks row
  // totals, pi_1 dwarfs pi_n, ...).
  std::vector<double> alpha_delta_, gamma_delta_, pi_delta_;
  Grid<double> y_delta_, z_delta_;
  std::vector<BlockAccept> alpha_win_, gamma_win_, pi_win_;
  std::vector<BlockAccept> y_win_, z_win_;  // row-major over observed cells
};

ChainRun run_chain(const Triangle& x, const ChainConfig& cfg);

}  // namespace nbtri

#endif
