#ifndef NBTRI_DISTRIBUTIONS_HPP
#define NBTRI_DISTRIBUTIONS_HPP

#include <cstdint>
#include <random>
#include <span>

namespace nbtri {

// Seeded random stream. Identical (seed, stream) reproduces the same
// sequence; distinct stream ids give independent streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();                       // U(0,1)
  double uniform(double a, double b);     // U(a,b)
  long long uniform_int(long long a, long long b);  // inclusive
  long long poisson(double mu);           // mu <= 0 yields 0
  double gamma(double shape, double rate);

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Log densities. All work is done in log space; invalid fixed parameters
// throw std::invalid_argument, points outside the support return -inf.
double log_pmf_poisson(long long x, double mu);
// NB(r, 1/(1+pi)): mean r*pi, variance r*pi*(1+pi).
double log_pmf_negbin(long long x, double r, double pi);
double log_pdf_gamma(double z, double shape, double rate);
// Support {1, 2, ...}: pmf p*(1-p)^(k-1).
double log_pmf_geometric(long long k, double p);
double log_pdf_dirichlet(std::span<const double> pi, std::span<const double> a);

double log_sum_exp(std::span<const double> v);

}  // namespace nbtri

#endif
