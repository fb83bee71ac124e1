#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string_view>

namespace rtbvar {

// Deterministic random number source. The engine is std::mt19937_64 (its
// output sequence is pinned by the standard), and every distribution transform
// is implemented here rather than taken from <random>, because the standard
// library's distribution algorithms are implementation-defined: the same seed
// would give different chains on different compilers. With this class a seed
// pins the entire posterior sample byte-for-byte on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on (0,1): 53-bit mantissa, offset half a step so 0 and 1 are
  // unreachable (log(u) and 1/u are safe).
  double uniform();

  // Standard normal via Box-Muller; caches the second variate.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  Eigen::VectorXd normal_vector(Eigen::Index n);

  // Gamma(shape a, scale 1) by Marsaglia-Tsang squeeze; a < 1 handled by the
  // boost gamma(a+1) * u^(1/a).
  double gamma(double shape, double scale = 1.0);

  // Inverse gamma with shape a and *rate-style* scale b: X = 1/G where
  // G ~ Gamma(a, rate b); density ∝ x^{-a-1} exp(-b/x), mean b/(a-1) for a>1.
  double inv_gamma(double shape, double scale);

  double chi2(double dof) { return gamma(dof / 2.0, 2.0); }
  double beta(double a, double b);

  // Index draw from unnormalized nonnegative weights.
  int categorical(const double* weights, int n);

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Stable seed derivation (FNV-1a over the parts), so per-cell seeds do not
// depend on std::hash or on platform word size.
std::uint64_t mix_seed(std::uint64_t master, std::string_view tag);
std::uint64_t mix_seed(std::uint64_t master, std::string_view tag, std::int64_t n);

}  // namespace rtbvar
