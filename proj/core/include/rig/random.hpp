#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace rig {

/// Deterministic named random stream.
///
/// One root seed splits into independent streams keyed by name, so that
/// e.g. process noise, measurement noise, and placement draws stay aligned
/// across planner modes sharing the same seed. Gaussian variates use an
/// explicit Box-Muller transform instead of std::normal_distribution, whose
/// output sequence is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t root_seed, std::string_view stream_name);

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal variate.
  double normal();

  Eigen::VectorXd normal_vector(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rig
