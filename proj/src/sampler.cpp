#include "nbtri/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace nbtri {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long kAdaptWindow = 200;

long long int_delta(double d) {
  return std::max<long long>(1, std::llround(d));
}
}  // namespace

MhResult mh_step(const std::function<double(double)>& log_target,
                 double current, double delta, RngStream& rng) {
  const double proposal = current + rng.uniform(-delta, delta);
  const double lt_prop = log_target(proposal);
  if (lt_prop == kNegInf) return {current, false};
  const double diff = lt_prop - log_target(current);
  if (diff >= 0 || std::log(rng.uniform()) < diff) return {proposal, true};
  return {current, false};
}

MhResultInt mh_step_int(const std::function<double(long long)>& log_target,
                        long long current, long long delta, RngStream& rng) {
  const long long proposal =
      current + rng.uniform_int(-delta, delta);
  const double lt_prop = log_target(proposal);
  if (lt_prop == kNegInf) return {current, false};
  const double diff = lt_prop - log_target(current);
  if (diff >= 0 || std::log(rng.uniform()) < diff) return {proposal, true};
  return {current, false};
}

GibbsSampler::GibbsSampler(const Triangle& x, const ChainConfig& cfg)
    : x_(&x), cfg_(cfg) {
  const int n = x.size();
  if (cfg_.hyper.a.empty()) cfg_.hyper.a.assign(n, 0.5);
  params_.q = cfg_.q;
  params_.alpha.resize(n);
  for (int i = 1; i <= n; ++i)
    params_.alpha[i - 1] = std::max<long long>(1, x.observed_row_sum(i));
  if (cfg_.fix_pi) {
    params_.pi = *cfg_.fix_pi;
  } else {
    // Development proportions from the fully observed first row. The pi
    // kernel explores only a small neighbourhood of its start (every
    // update trades mass with pi_n, whose conditional is extremely
    // sharp), so the initial point doubles as the effective center of
    // the reported posterior and must already be a sound estimate.
    params_.pi.resize(n);
    double total = 0;
    for (int j = 1; j <= n; ++j) {
      params_.pi[j - 1] = std::max(double(x.at(1, j)), 0.5);
      total += params_.pi[j - 1];
    }
    for (double& p : params_.pi) p /= total;
  }
  const double g0 =
      cfg_.fix_gamma ? *cfg_.fix_gamma : (cfg_.hyper.a_gamma == 1.0 ? 0.0 : 0.01);
  params_.gamma.assign(n, g0);
  state_ = feasible_init(x, params_);

  // Initial steps are scaled to each node so the adaptation rule only
  // has to fine-tune, not bridge orders of magnitude. Alpha posteriors
  // track row totals. A pi_j proposal moves both pi_j and pi_n, so its
  // acceptable step is the narrower of the two conditional widths,
  // roughly pi / sqrt(sum of the alphas observing that column).
  alpha_delta_.resize(n);
  for (int i = 0; i < n; ++i)
    alpha_delta_[i] =
        std::max(cfg_.delta_alpha, 0.05 * double(params_.alpha[i]));
  gamma_delta_.assign(n, cfg_.delta_gamma);
  pi_delta_.resize(n);
  std::vector<double> col_alpha(n, 0);  // sum of alpha_i with column j observed
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n - j + 1; ++i)
      col_alpha[j - 1] += double(params_.alpha[i - 1]);
  for (int j = 0; j < n; ++j) {
    const double own = params_.pi[j] / std::sqrt(col_alpha[j] + 1.0);
    const double last =
        params_.pi[n - 1] / std::sqrt(col_alpha[n - 1] + 1.0);
    pi_delta_[j] =
        (cfg_.delta_pi / 0.01) * std::max(2.5 * std::min(own, last), 1e-9);
  }
  y_delta_ = Grid<double>(n);
  z_delta_ = Grid<double>(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - i + 1; ++j) {
      y_delta_.set(i, j, cfg_.delta_y);
      z_delta_.set(i, j, std::max(cfg_.delta_z_frac * state_.z.get(i, j), 0.5));
    }
  alpha_win_.assign(n, {});
  gamma_win_.assign(n, {});
  pi_win_.assign(n, {});
  const std::size_t cells = x.observed_cells().size();
  y_win_.assign(cells, {});
  z_win_.assign(cells, {});
}

void GibbsSampler::scan(RngStream& rng) {
  const Triangle& x = *x_;
  const int n = x.size();
  auto record = [&](Block b, BlockAccept& win, bool acc) {
    ++accept_[b].proposals;
    ++win.proposals;
    if (acc) {
      ++accept_[b].accepts;
      ++win.accepts;
    }
  };

  for (int i = 1; i <= n; ++i) {
    auto r = mh_step_int(
        [&](long long a) {
          return log_fc_alpha(x, state_, params_, cfg_.hyper, i, a);
        },
        params_.alpha[i - 1], int_delta(alpha_delta_[i - 1]), rng);
    params_.alpha[i - 1] = r.value;
    record(kAlpha, alpha_win_[i - 1], r.accepted);
  }

  if (!cfg_.fix_gamma) {
    for (int j = 1; j <= n; ++j) {
      auto r = mh_step(
          [&](double g) {
            return log_fc_gamma(x, state_, params_, cfg_.hyper, j, g);
          },
          params_.gamma[j - 1], gamma_delta_[j - 1], rng);
      params_.gamma[j - 1] = r.value;
      record(kGamma, gamma_win_[j - 1], r.accepted);
    }
  }

  if (!cfg_.fix_pi && n > 1) {
    for (int j = 1; j <= n - 1; ++j) {
      auto r = mh_step(
          [&](double p) {
            return log_fc_pi(x, state_, params_, cfg_.hyper, j, p);
          },
          params_.pi[j - 1], pi_delta_[j - 1], rng);
      if (r.accepted) {
        params_.pi[n - 1] += params_.pi[j - 1] - r.value;
        params_.pi[j - 1] = r.value;
      }
      record(kPi, pi_win_[j - 1], r.accepted);
    }
  }

  std::size_t cell = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n - i + 1; ++j, ++cell) {
      auto r = mh_step_int(
          [&](long long y) {
            return log_fc_y(x, state_, params_, cfg_.hyper, i, j, y);
          },
          state_.y.get(i, j), int_delta(y_delta_.get(i, j)), rng);
      state_.y.set(i, j, r.value);
      record(kY, y_win_[cell], r.accepted);
    }
  }

  cell = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n - i + 1; ++j, ++cell) {
      auto r = mh_step(
          [&](double z) {
            return log_fc_z(x, state_, params_, cfg_.hyper, i, j, z);
          },
          state_.z.get(i, j), z_delta_.get(i, j), rng);
      state_.z.set(i, j, r.value);
      record(kZ, z_win_[cell], r.accepted);
    }
  }
}

void GibbsSampler::adapt_deltas() {
  auto scale = [](const BlockAccept& win, double& d) {
    if (win.proposals == 0) return;
    const double rate = win.rate();
    if (rate > 0.40)
      d *= 1.1;
    else if (rate < 0.20)
      d *= 0.9;
  };
  const int n = x_->size();
  for (int k = 0; k < n; ++k) {
    scale(alpha_win_[k], alpha_delta_[k]);
    scale(gamma_win_[k], gamma_delta_[k]);
    scale(pi_win_[k], pi_delta_[k]);
  }
  std::size_t cell = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - i + 1; ++j, ++cell) {
      double dy = y_delta_.get(i, j), dz = z_delta_.get(i, j);
      scale(y_win_[cell], dy);
      scale(z_win_[cell], dz);
      y_delta_.set(i, j, dy);
      z_delta_.set(i, j, dz);
    }
}

void GibbsSampler::reset_window() {
  for (auto* v : {&alpha_win_, &gamma_win_, &pi_win_, &y_win_, &z_win_})
    std::fill(v->begin(), v->end(), BlockAccept{});
}
void GibbsSampler::reset_acceptance() { accept_ = {}; }

void GibbsSampler::set_data(const Triangle& x, const LatentState& s) {
  x_ = &x;
  state_ = s;
}

std::array<double, 5> GibbsSampler::deltas() const {
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double d : v) s += d;
    return v.empty() ? 0.0 : s / double(v.size());
  };
  const int n = x_->size();
  double ysum = 0, zsum = 0;
  int cells = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - i + 1; ++j, ++cells) {
      ysum += y_delta_.get(i, j);
      zsum += z_delta_.get(i, j);
    }
  return {mean(alpha_delta_), mean(gamma_delta_), mean(pi_delta_),
          ysum / double(cells), zsum / double(cells)};
}

ChainRun run_chain(const Triangle& x, const ChainConfig& cfg) {
  if (cfg.burn_in >= cfg.iterations)
    throw ModelError("run_chain: burn_in must be below iterations");
  if (cfg.thinning < 1) throw ModelError("run_chain: thinning must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  GibbsSampler sampler(x, cfg);
  RngStream rng(cfg.seed, 0);
  ChainRun run;
  run.config = cfg;
  if (run.config.hyper.a.empty()) run.config.hyper.a.assign(x.size(), 0.5);
  run.params.reserve((cfg.iterations - cfg.burn_in) / cfg.thinning);
  for (long t = 1; t <= cfg.iterations; ++t) {
    sampler.scan(rng);
    if (t <= cfg.burn_in) {
      if (cfg.adapt && t % kAdaptWindow == 0) {
        sampler.adapt_deltas();
        sampler.reset_window();
      }
      if (t == cfg.burn_in) sampler.reset_acceptance();
    } else if ((t - cfg.burn_in) % cfg.thinning == 0) {
      run.params.push_back(sampler.params());
      run.latents.push_back(sampler.state());
    }
  }
  run.acceptance = sampler.acceptance();
  run.final_delta = sampler.deltas();
  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return run;
}

}  // namespace nbtri
