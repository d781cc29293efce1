#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace polytrack {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  kDomain,            // argument outside its documented domain
  kDegenerateShape,   // enclosed area below tolerance
  kInvalidShape,      // self-intersection, duplicate or collinear vertices
  kDecimationFailed,  // simplification broke a shape property
  kParameter,         // bad tuning value (non-SPD R, delta out of range, ...)
  kPrecondition,      // missing precomputed state (particles, cardinality)
  kNumerical,         // singular innovation or non-finite intermediate
  kLoad,              // file or config rejected
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Reduce an angle to [0, 2*pi).
double wrap_two_pi(double a);
/// Reduce an angle to (-pi, pi].
double wrap_pi(double a);

/// Streaming log-sum-exp: numerically stable, fixed evaluation order.
class LogSumExp {
 public:
  void add(double v);
  double value() const;

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;  // sum of exp(v - max_)
};

double log_sum_exp(const std::vector<double>& v);

/// Deterministic seedable random stream.
///
/// All draws are fully specified here (no implementation-defined stdlib
/// distributions), so a given seed reproduces the same sequence everywhere.
/// `split` derives an independent child stream; splitting by scan index keeps
/// parallel scenario runs reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_open01();
  /// Pair of independent standard normals (Box-Muller).
  Vec2 gaussian2();
  /// Binomial(trials, p) by explicit Bernoulli counting.
  int binomial(int trials, double p);

  Rng split(std::uint64_t stream) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace polytrack
