#include "nbtri/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nbtri {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  gen_.seed(seq);
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
}

double RngStream::uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(gen_);
}

long long RngStream::uniform_int(long long a, long long b) {
  return std::uniform_int_distribution<long long>(a, b)(gen_);
}

long long RngStream::poisson(double mu) {
  if (!(mu >= 0))
    throw std::invalid_argument("poisson: negative mean");
  if (mu == 0) return 0;
  return std::poisson_distribution<long long>(mu)(gen_);
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0) || !(rate > 0))
    throw std::invalid_argument("gamma: nonpositive shape or rate");
  return std::gamma_distribution<double>(shape, 1.0 / rate)(gen_);
}

double log_pmf_poisson(long long x, double mu) {
  if (!(mu >= 0)) throw std::invalid_argument("log_pmf_poisson: negative mu");
  if (x < 0) return kNegInf;
  if (mu == 0) return x == 0 ? 0.0 : kNegInf;  // point mass at zero
  return -mu + double(x) * std::log(mu) - std::lgamma(double(x) + 1.0);
}

double log_pmf_negbin(long long x, double r, double pi) {
  if (!(r > 0) || !(pi > 0))
    throw std::invalid_argument("log_pmf_negbin: invalid r or pi");
  if (x < 0) return kNegInf;
  return std::lgamma(double(x) + r) - std::lgamma(r) -
         std::lgamma(double(x) + 1.0) - r * std::log1p(pi) +
         double(x) * (std::log(pi) - std::log1p(pi));
}

double log_pdf_gamma(double z, double shape, double rate) {
  if (!(shape > 0) || !(rate > 0))
    throw std::invalid_argument("log_pdf_gamma: nonpositive shape or rate");
  if (!(z > 0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(z) - rate * z;
}

double log_pmf_geometric(long long k, double p) {
  if (!(p > 0) || !(p < 1))
    throw std::invalid_argument("log_pmf_geometric: p outside (0,1)");
  if (k < 1) return kNegInf;
  return std::log(p) + double(k - 1) * std::log1p(-p);
}

double log_pdf_dirichlet(std::span<const double> pi, std::span<const double> a) {
  if (pi.size() != a.size() || pi.empty())
    throw std::invalid_argument("log_pdf_dirichlet: size mismatch");
  double sum_pi = 0, sum_a = 0, lp = 0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(a[j] > 0))
      throw std::invalid_argument("log_pdf_dirichlet: nonpositive weight");
    sum_pi += pi[j];
    sum_a += a[j];
  }
  if (std::abs(sum_pi - 1.0) > 1e-9)
    throw std::invalid_argument("log_pdf_dirichlet: point not on simplex");
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (pi[j] <= 0 || pi[j] >= 1) {
      if (a[j] < 1)
        throw std::invalid_argument(
            "log_pdf_dirichlet: boundary point with weight < 1");
      if (pi[j] < 0 || pi[j] > 1) return kNegInf;
      if (a[j] > 1) return kNegInf;  // density zero at the boundary
      continue;                      // a_j == 1 contributes nothing
    }
    lp += (a[j] - 1.0) * std::log(pi[j]);
  }
  lp += std::lgamma(sum_a);
  for (double aj : a) lp -= std::lgamma(aj);
  return lp;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return kNegInf;
  double m = *std::max_element(v.begin(), v.end());
  if (m == kNegInf) return kNegInf;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace nbtri
