#include "rtbvar/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rtbvar {

double Rng::uniform() {
  return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // 2^53
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 6.283185307179586476925286766559 * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::runtime_error("Rng::gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // Boost: if X ~ Gamma(a+1) and U ~ U(0,1), X * U^(1/a) ~ Gamma(a).
    double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia & Tsang (2000): squeeze on (1 + c z)^3 with z standard normal.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * z * z * z * z) return scale * d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double Rng::inv_gamma(double shape, double scale) {
  if (!(scale > 0.0)) throw std::runtime_error("Rng::inv_gamma: scale must be positive");
  // 1 / Gamma(shape, rate=scale) = 1 / (Gamma(shape, scale=1) / scale).
  return scale / gamma(shape, 1.0);
}

double Rng::beta(double a, double b) {
  double x = gamma(a, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

int Rng::categorical(const double* weights, int n) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw std::runtime_error("Rng::categorical: negative weight");
    total += weights[i];
  }
  if (!(total > 0.0)) throw std::runtime_error("Rng::categorical: all weights zero");
  double u = uniform() * total;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += weights[i];
    if (u <= acc) return i;
  }
  return n - 1;  // guard against accumulated rounding
}

namespace {
std::uint64_t fnv1a(std::uint64_t h, const unsigned char* data, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 14695981039346656037ULL;
  h = fnv1a(h, reinterpret_cast<const unsigned char*>(&master), sizeof(master));
  h = fnv1a(h, reinterpret_cast<const unsigned char*>(tag.data()), tag.size());
  // Final avalanche (splitmix64) so nearby tags decorrelate.
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::string_view tag, std::int64_t n) {
  return mix_seed(mix_seed(master, tag), std::to_string(n));
}

}  // namespace rtbvar
