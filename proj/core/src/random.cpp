#include "rig/random.hpp"

#include <cmath>

#include "rig/math_util.hpp"

namespace rig {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t root_seed, std::string_view stream_name) {
  std::seed_seq seq{root_seed, fnv1a(stream_name), std::uint64_t{0x9e3779b97f4a7c15ull}};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  // Top 53 bits of the engine output, exactly representable in a double.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  // Rejection-free modulo is biased for huge n; our n are tiny, but keep it clean.
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Eigen::VectorXd RandomStream::normal_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal();
  return v;
}

}  // namespace rig
