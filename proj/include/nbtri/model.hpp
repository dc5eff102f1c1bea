#ifndef NBTRI_MODEL_HPP
#define NBTRI_MODEL_HPP

#include <vector>

#include "nbtri/distributions.hpp"
#include "nbtri/triangle.hpp"

namespace nbtri {

// Dense 1-based n x n grid; reads at j <= 0 (or i <= 0) return zero,
// matching the boundary convention of the latent process.
template <typename T>
class Grid {
 public:
  Grid() : n_(0) {}
  explicit Grid(int n, T fill = T{}) : n_(n), v_(n * n, fill) {}
  int size() const { return n_; }
  T get(int i, int j) const {
    if (i < 1 || j < 1) return T{};
    return v_[(i - 1) * n_ + (j - 1)];
  }
  void set(int i, int j, T value) { v_[(i - 1) * n_ + (j - 1)] = value; }
  bool operator==(const Grid&) const = default;

 private:
  int n_;
  std::vector<T> v_;
};

struct ModelParams {
  std::vector<long long> alpha;  // alpha_i >= 1, ultimate claim counts
  std::vector<double> pi;        // development proportions, sum to 1
  std::vector<double> gamma;     // dependence weights, >= 0
  int q = 0;                     // dependence order
  int n() const { return static_cast<int>(alpha.size()); }
};

struct LatentState {
  Grid<long long> y;
  Grid<double> z;
  bool operator==(const LatentState&) const = default;
};

struct Hyperparams {
  double p_alpha = 0.01;
  double a_gamma = 1.0;
  double b_gamma = 2.0;
  std::vector<double> a;  // Dirichlet weights, defaults to all 1/2

  static Hyperparams defaults(int n);
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimulatedTriangle {
  std::vector<std::vector<long long>> x;  // complete n x n counts
  LatentState latent;
};

// Residual Poisson rate z_{i,j} - sum_{l=0..q} z_{i,j-l} gamma_{j-l};
// terms with j-l <= 0 contribute zero.
double residual_rate(const LatentState& s, const ModelParams& p, int i, int j);
// Residual count x_{i,j} - sum_{l=0..q} y_{i,j-l}.
long long residual_count(const Triangle& x, const LatentState& s, int q, int i,
                         int j);

// Forward simulation of the full square. Z is drawn row by row, left to
// right; a draw that makes the residual rate negative is redrawn up to
// 1000 times before failing with ModelError.
SimulatedTriangle simulate_triangle(const ModelParams& params, RngStream& rng);

// Lag-k autocorrelation of (X_{i,j}, X_{i,j+k}); exactly 0 for k > q.
double marginal_correlation(const ModelParams& params, int j, int k);

// Log of augmented likelihood times priors over the observed region, up
// to an additive constant. Returns -inf outside the support.
double log_joint(const Triangle& x, const LatentState& s,
                 const ModelParams& params, const Hyperparams& h);

// Full-conditional sections of the log joint, each evaluated with one
// coordinate replaced by the candidate value and all else fixed.
double log_fc_alpha(const Triangle& x, const LatentState& s,
                    const ModelParams& params, const Hyperparams& h, int i,
                    long long alpha_i);
double log_fc_gamma(const Triangle& x, const LatentState& s,
                    const ModelParams& params, const Hyperparams& h, int j,
                    double gamma_j);
// pi_n is derived: proposing pi_j -> v moves pi_n to pi_n + pi_j - v.
double log_fc_pi(const Triangle& x, const LatentState& s,
                 const ModelParams& params, const Hyperparams& h, int j,
                 double pi_j);
double log_fc_y(const Triangle& x, const LatentState& s,
                const ModelParams& params, const Hyperparams& h, int i, int j,
                long long y_ij);
double log_fc_z(const Triangle& x, const LatentState& s,
                const ModelParams& params, const Hyperparams& h, int i, int j,
                double z_ij);

// Y = 0, Z = max(x, 1): feasible for any gamma with window sum <= 1.
LatentState feasible_init(const Triangle& x, const ModelParams& params);

}  // namespace nbtri

#endif
