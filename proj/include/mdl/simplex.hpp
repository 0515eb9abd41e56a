#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mdl/error.hpp"

namespace mdl {

inline constexpr double kSimplexTolerance = 1e-12;

// Sum with extended precision so that the 1e-12 simplex tolerance holds for
// vectors with tens of thousands of entries.
inline double accurate_sum(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: size mismatch");
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

// A probability vector: entries >= 0 summing to 1 within kSimplexTolerance.
// The action type of both players in every game in this library.
class SimplexWeights {
 public:
  SimplexWeights() = default;

  explicit SimplexWeights(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidArgument("SimplexWeights: empty weight vector");
    for (double w : weights_) {
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("SimplexWeights: negative or non-finite entry");
    }
    const double s = accurate_sum(weights_);
    if (std::abs(s - 1.0) > kSimplexTolerance) {
      throw InvalidArgument("SimplexWeights: entries sum to " + std::to_string(s) + ", expected 1");
    }
  }

  static SimplexWeights uniform(std::size_t k) {
    if (k == 0) throw InvalidArgument("SimplexWeights::uniform: k = 0");
    return SimplexWeights(std::vector<double>(k, 1.0 / static_cast<double>(k)), Trusted{});
  }

  static SimplexWeights point_mass(std::size_t k, std::size_t index) {
    if (index >= k) throw InvalidArgument("SimplexWeights::point_mass: index out of range");
    std::vector<double> w(k, 0.0);
    w[index] = 1.0;
    return SimplexWeights(std::move(w), Trusted{});
  }

  // Normalizes a nonnegative vector with positive mass.
  static SimplexWeights normalized(std::vector<double> raw) {
    if (raw.empty()) throw InvalidArgument("SimplexWeights::normalized: empty vector");
    for (double w : raw) {
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("SimplexWeights::normalized: negative or non-finite entry");
    }
    const double s = accurate_sum(raw);
    if (!(s > 0.0)) throw InvalidArgument("SimplexWeights::normalized: zero mass");
    for (double& w : raw) w /= s;
    return SimplexWeights(std::move(raw), Trusted{});
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> values() const noexcept { return weights_; }
  const std::vector<double>& vector() const noexcept { return weights_; }

  friend bool operator==(const SimplexWeights&, const SimplexWeights&) = default;

 private:
  struct Trusted {};
  SimplexWeights(std::vector<double> w, Trusted) : weights_(std::move(w)) {}

  std::vector<double> weights_;
};

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace mdl
