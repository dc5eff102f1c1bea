#include "nbtri/model.hpp"

#include <cmath>
#include <limits>

namespace nbtri {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxRedraws = 1000;

// Gamma prior density on a dependence weight; the sampler initializes
// gamma at 0 when a_gamma == 1, where the density is finite.
double log_gamma_weight_prior(double g, double a, double b) {
  if (g < 0) return kNegInf;
  if (g == 0) return a == 1.0 ? std::log(b) : kNegInf;
  return log_pdf_gamma(g, a, b);
}

}  // namespace

Hyperparams Hyperparams::defaults(int n) {
  Hyperparams h;
  h.a.assign(n, 0.5);
  return h;
}

double residual_rate(const LatentState& s, const ModelParams& p, int i,
                     int j) {
  double rr = s.z.get(i, j);
  for (int l = 0; l <= p.q; ++l) {
    const int jj = j - l;
    if (jj < 1) break;
    rr -= s.z.get(i, jj) * p.gamma[jj - 1];
  }
  return rr;
}

long long residual_count(const Triangle& x, const LatentState& s, int q,
                         int i, int j) {
  long long rc = x.at(i, j);
  for (int l = 0; l <= q; ++l) {
    const int jj = j - l;
    if (jj < 1) break;
    rc -= s.y.get(i, jj);
  }
  return rc;
}

SimulatedTriangle simulate_triangle(const ModelParams& params,
                                    RngStream& rng) {
  const int n = params.n();
  SimulatedTriangle out;
  out.x.assign(n, std::vector<long long>(n, 0));
  out.latent.y = Grid<long long>(n);
  out.latent.z = Grid<double>(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      double lagged = 0;
      for (int l = 1; l <= params.q && j - l >= 1; ++l)
        lagged += out.latent.z.get(i, j - l) * params.gamma[j - l - 1];
      double z = 0, rr = -1;
      int tries = 0;
      while (rr < 0) {
        if (++tries > kMaxRedraws)
          throw ModelError(
              "simulate_triangle: residual rate constraint infeasible at (" +
              std::to_string(i) + "," + std::to_string(j) + ")");
        z = rng.gamma(double(params.alpha[i - 1]), 1.0 / params.pi[j - 1]);
        rr = z * (1.0 - params.gamma[j - 1]) - lagged;
      }
      out.latent.z.set(i, j, z);
      const long long y = rng.poisson(z * params.gamma[j - 1]);
      out.latent.y.set(i, j, y);
      long long window = 0;
      for (int l = 0; l <= params.q && j - l >= 1; ++l)
        window += out.latent.y.get(i, j - l);
      out.x[i - 1][j - 1] = window + rng.poisson(rr);
    }
  }
  return out;
}

double marginal_correlation(const ModelParams& params, int j, int k) {
  const int n = params.n();
  if (k < 1 || j < 1 || j + k > n)
    throw ModelError("marginal_correlation: index out of range");
  if (k > params.q) return 0.0;
  double num = 0;
  for (int l = 0; l <= params.q - k; ++l) {
    const int jj = j - l;
    if (jj < 1) break;
    num += params.pi[jj - 1] * params.gamma[jj - 1];
  }
  const double pj = params.pi[j - 1], pk = params.pi[j + k - 1];
  return num / std::sqrt(pj * (1 + pj) * pk * (1 + pk));
}

double log_joint(const Triangle& x, const LatentState& s,
                 const ModelParams& params, const Hyperparams& h) {
  const int n = x.size();
  for (int j = 0; j < n; ++j)
    if (n > 1 && (params.pi[j] <= 0 || params.pi[j] >= 1)) return kNegInf;
  for (int i = 0; i < n; ++i)
    if (params.alpha[i] < 1) return kNegInf;
  double lp = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n - i + 1; ++j) {
      const double z = s.z.get(i, j);
      const long long y = s.y.get(i, j);
      if (!(z > 0) || y < 0) return kNegInf;
      const long long rc = residual_count(x, s, params.q, i, j);
      const double rr = residual_rate(s, params, i, j);
      if (rc < 0 || rr < 0) return kNegInf;
      lp += log_pmf_poisson(rc, rr);
      lp += log_pmf_poisson(y, z * params.gamma[j - 1]);
      lp += log_pdf_gamma(z, double(params.alpha[i - 1]),
                          1.0 / params.pi[j - 1]);
      if (lp == kNegInf) return kNegInf;
    }
  }
  for (int i = 0; i < n; ++i)
    lp += log_pmf_geometric(params.alpha[i], h.p_alpha);
  for (int j = 0; j < n; ++j) {
    lp += log_gamma_weight_prior(params.gamma[j], h.a_gamma, h.b_gamma);
    if (lp == kNegInf) return kNegInf;
  }
  if (n > 1) lp += log_pdf_dirichlet(params.pi, h.a);
  return lp;
}

double log_fc_alpha(const Triangle& x, const LatentState& s,
                    const ModelParams& params, const Hyperparams& h, int i,
                    long long alpha_i) {
  if (alpha_i < 1) return kNegInf;
  const int n = x.size();
  double lp = log_pmf_geometric(alpha_i, h.p_alpha);
  for (int j = 1; j <= n - i + 1; ++j)
    lp += log_pdf_gamma(s.z.get(i, j), double(alpha_i),
                        1.0 / params.pi[j - 1]);
  return lp;
}

double log_fc_gamma(const Triangle& x, const LatentState& s,
                    const ModelParams& params, const Hyperparams& h, int j,
                    double gamma_j) {
  if (gamma_j < 0) return kNegInf;
  const int n = x.size();
  double lp = log_gamma_weight_prior(gamma_j, h.a_gamma, h.b_gamma);
  if (lp == kNegInf) return kNegInf;
  for (int i = 1; i <= n - j + 1; ++i)
    lp += log_pmf_poisson(s.y.get(i, j), s.z.get(i, j) * gamma_j);
  const int kmax = std::min(j + params.q, n);
  for (int k = j; k <= kmax; ++k) {
    for (int i = 1; i <= n - k + 1; ++i) {
      double rr = s.z.get(i, k);
      for (int l = 0; l <= params.q && k - l >= 1; ++l) {
        const int jj = k - l;
        const double g = (jj == j) ? gamma_j : params.gamma[jj - 1];
        rr -= s.z.get(i, jj) * g;
      }
      if (rr < 0) return kNegInf;
      lp += log_pmf_poisson(residual_count(x, s, params.q, i, k), rr);
      if (lp == kNegInf) return kNegInf;
    }
  }
  return lp;
}

double log_fc_pi(const Triangle& x, const LatentState& s,
                 const ModelParams& params, const Hyperparams& h, int j,
                 double pi_j) {
  const int n = x.size();
  if (j < 1 || j > n - 1) throw ModelError("log_fc_pi: index out of range");
  const double pi_n = params.pi[n - 1] + params.pi[j - 1] - pi_j;
  if (pi_j <= 0 || pi_j >= 1 || pi_n <= 0 || pi_n >= 1) return kNegInf;
  double lp = (h.a[j - 1] - 1.0) * std::log(pi_j) +
              (h.a[n - 1] - 1.0) * std::log(pi_n);
  for (int i = 1; i <= n - j + 1; ++i)
    lp += log_pdf_gamma(s.z.get(i, j), double(params.alpha[i - 1]),
                        1.0 / pi_j);
  // only row 1 observes column n
  if (j < n)
    lp += log_pdf_gamma(s.z.get(1, n), double(params.alpha[0]), 1.0 / pi_n);
  return lp;
}

double log_fc_y(const Triangle& x, const LatentState& s,
                const ModelParams& params, const Hyperparams& h, int i, int j,
                long long y_ij) {
  (void)h;
  if (y_ij < 0) return kNegInf;
  const int n = x.size();
  double lp = log_pmf_poisson(y_ij, s.z.get(i, j) * params.gamma[j - 1]);
  if (lp == kNegInf) return kNegInf;
  const int kmax = std::min(j + params.q, n - i + 1);
  for (int k = j; k <= kmax; ++k) {
    long long rc = x.at(i, k);
    for (int l = 0; l <= params.q && k - l >= 1; ++l) {
      const int jj = k - l;
      rc -= (jj == j) ? y_ij : s.y.get(i, jj);
    }
    if (rc < 0) return kNegInf;
    lp += log_pmf_poisson(rc, residual_rate(s, params, i, k));
    if (lp == kNegInf) return kNegInf;
  }
  return lp;
}

double log_fc_z(const Triangle& x, const LatentState& s,
                const ModelParams& params, const Hyperparams& h, int i, int j,
                double z_ij) {
  (void)h;
  if (!(z_ij > 0)) return kNegInf;
  const int n = x.size();
  double lp = log_pdf_gamma(z_ij, double(params.alpha[i - 1]),
                            1.0 / params.pi[j - 1]);
  lp += log_pmf_poisson(s.y.get(i, j), z_ij * params.gamma[j - 1]);
  if (lp == kNegInf) return kNegInf;
  const int kmax = std::min(j + params.q, n - i + 1);
  for (int k = j; k <= kmax; ++k) {
    double rr = (k == j ? z_ij : s.z.get(i, k));
    for (int l = 0; l <= params.q && k - l >= 1; ++l) {
      const int jj = k - l;
      const double z = (jj == j) ? z_ij : s.z.get(i, jj);
      rr -= z * params.gamma[jj - 1];
    }
    if (rr < 0) return kNegInf;
    lp += log_pmf_poisson(residual_count(x, s, params.q, i, k), rr);
    if (lp == kNegInf) return kNegInf;
  }
  return lp;
}

LatentState feasible_init(const Triangle& x, const ModelParams& params) {
  (void)params;
  const int n = x.size();
  LatentState s;
  s.y = Grid<long long>(n);
  s.z = Grid<double>(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - i + 1; ++j)
      s.z.set(i, j, double(std::max<long long>(x.at(i, j), 1)));
  return s;
}

}  // namespace nbtri
