#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "mdl/core/types.hpp"
#include "mdl/error.hpp"

namespace mdl {

// Built-in VC families on the real line.
//   thresholds: h_a(x) = +1 iff x >= a            (VC dimension 1)
//   intervals:  h_[a,b](x) = +1 iff a <= x <= b  (VC dimension 2, a > b is empty)
enum class LineFamily { thresholds, intervals };

struct LineClassifier {
  LineFamily family = LineFamily::thresholds;
  double a = 0.0;
  double b = 0.0;

  int operator()(double x) const {
    if (family == LineFamily::thresholds) return x >= a ? 1 : -1;
    return (a <= x && x <= b) ? 1 : -1;
  }
};

inline std::size_t vc_dimension(LineFamily f) { return f == LineFamily::thresholds ? 1 : 2; }

// Members of the family realizing every label pattern the family can produce
// on `xs` (plus redundant ones; project_class removes those).
inline std::vector<LineClassifier> line_family_candidates(LineFamily f, std::span<const double> xs) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<LineClassifier> out;
  if (f == LineFamily::thresholds) {
    for (double x : xs) out.push_back({f, x, 0.0});
    out.push_back({f, inf, 0.0});
    return out;
  }
  out.push_back({f, inf, -inf});
  for (double lo : xs) {
    for (double hi : xs) {
      if (lo <= hi) out.push_back({f, lo, hi});
    }
  }
  return out;
}

// Projection of a class on sample points x_1..x_N: one representative per
// distinct label vector, as a finite class whose feature k is x_k.
struct ProjectedClass {
  std::vector<double> points;
  std::vector<std::size_t> representatives;  // index into the input list
  FiniteHypothesisClass cls;
};

template <class H>
ProjectedClass project_class(const std::vector<H>& hypotheses, std::span<const double> xs) {
  if (xs.empty()) throw InvalidArgument("project_class: need at least one sample point");
  if (hypotheses.empty()) throw InvalidArgument("project_class: empty hypothesis list");
  std::map<std::vector<int>, std::size_t> seen;
  std::vector<std::vector<int>> labels;
  std::vector<std::size_t> reps;
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    std::vector<int> pattern(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) pattern[k] = hypotheses[h](xs[k]) > 0 ? 1 : -1;
    if (seen.emplace(pattern, h).second) {
      labels.push_back(std::move(pattern));
      reps.push_back(h);
    }
  }
  return ProjectedClass{std::vector<double>(xs.begin(), xs.end()), std::move(reps),
                        FiniteHypothesisClass::classifiers(xs.size(), std::move(labels))};
}

inline ProjectedClass project_class(LineFamily f, std::span<const double> xs) {
  return project_class(line_family_candidates(f, xs), xs);
}

// Sauer-Shelah: sum_{i <= d} C(N, i), saturating at UINT64_MAX.
inline std::uint64_t sauer_bound(std::uint64_t n, std::uint64_t d) {
  const auto cap = std::numeric_limits<std::uint64_t>::max();
  long double total = 0.0L, term = 1.0L;
  for (std::uint64_t i = 0; i <= std::min(n, d); ++i) {
    if (i > 0) term = term * static_cast<long double>(n - i + 1) / static_cast<long double>(i);
    total += term;
    if (total >= static_cast<long double>(cap)) return cap;
  }
  return static_cast<std::uint64_t>(std::llround(total));
}

// Sample size after which the projection on N i.i.d. points is an eps-net
// with probability >= 1 - delta: N >= (8d/eps) log(8d/eps) + (4/eps) log(2/delta).
inline std::uint64_t net_sample_size(std::size_t d, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("net_sample_size: eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("net_sample_size: delta must lie in (0, 1)");
  const double a = 8.0 * static_cast<double>(d) / eps;
  const double n = (d > 0 ? a * std::log(a) : 0.0) + (4.0 / eps) * std::log(2.0 / delta);
  return static_cast<std::uint64_t>(std::ceil(n));
}

}  // namespace mdl
