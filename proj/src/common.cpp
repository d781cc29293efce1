#include "polytrack/common.hpp"

#include <cmath>
#include <limits>

namespace polytrack {

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

double wrap_pi(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r - kPi;
}

void LogSumExp::add(double v) {
  if (std::isinf(v) && v < 0.0) return;
  if (v > max_) {
    sum_ = sum_ * std::exp(max_ - v) + 1.0;
    max_ = v;
  } else {
    sum_ += std::exp(v - max_);
  }
}

double LogSumExp::value() const {
  if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
  return max_ + std::log(sum_);
}

double log_sum_exp(const std::vector<double>& v) {
  LogSumExp acc;
  for (double x : v) acc.add(x);
  return acc.value();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open01() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

Vec2 Rng::gaussian2() {
  const double u1 = uniform_open01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

int Rng::binomial(int trials, double p) {
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    if (uniform01() < p) ++hits;
  }
  return hits;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

}  // namespace polytrack
