#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/types.hpp"
#include "mdl/error.hpp"
#include "mdl/random.hpp"

namespace mdl {

inline constexpr std::uint64_t kMaxRandomInstanceCells = 100000;

namespace detail {

inline std::vector<double> random_pmf(std::size_t k, Rng& rng) {
  std::vector<double> p(k);
  for (double& v : p) v = -std::log(1.0 - uniform01(rng));
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
  return p;
}

// `count` distinct labelings of [w] (bit x set <=> label +1), sampled
// uniformly without replacement.
inline std::vector<std::vector<int>> distinct_labelings(std::size_t count, std::size_t w, Rng& rng) {
  if (w > 62) throw ResourceLimit("distinct_labelings: feature domain too large");
  const std::uint64_t total = std::uint64_t{1} << w;
  if (count > total) throw InvalidArgument("class size exceeds the number of labelings of the feature domain");
  std::vector<std::uint64_t> masks;
  if (total <= 4 * count) {
    masks.resize(total);
    std::iota(masks.begin(), masks.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < count; ++i) std::swap(masks[i], masks[i + uniform_index(total - i, rng)]);
    masks.resize(count);
  } else {
    std::set<std::uint64_t> seen;
    while (masks.size() < count) {
      const std::uint64_t m = rng() & (total - 1);
      if (seen.insert(m).second) masks.push_back(m);
    }
  }
  std::vector<std::vector<int>> labels(count, std::vector<int>(w));
  for (std::size_t h = 0; h < count; ++h) {
    for (std::size_t x = 0; x < w; ++x) labels[h][x] = ((masks[h] >> x) & 1U) ? 1 : -1;
  }
  return labels;
}

inline void check_cells(std::size_t a, std::size_t b, std::size_t c) {
  if (a == 0 || b == 0 || c == 0) throw InvalidArgument("instance sizes must be >= 1");
  if (static_cast<long double>(a) * b * c > kMaxRandomInstanceCells) {
    throw ResourceLimit("instance too large: class-size * n * support-size > 1e5");
  }
}

inline void check_gap(double eps) {
  if (!(eps > 0.0 && eps < 0.125)) throw InvalidArgument("eps must lie in (0, 1/8)");
}

// Two atoms (x, +1), (x, -1) with Pr(x, +1) = p_plus.
inline DataDistribution label_coin(std::int32_t x, double p_plus) {
  return DataDistribution({Datapoint::labeled(x, 1), Datapoint::labeled(x, -1)}, {p_plus, 1.0 - p_plus});
}

}  // namespace detail

// Random agnostic binary instance: `class_size` distinct labelings of a
// feature domain of `support_size` points, and n distributions, each with a
// random marginal over the features and a random conditional label bias.
// Zero-one loss.
inline MdlInstance make_random_agnostic(std::size_t class_size, std::size_t n, std::size_t support_size,
                                        std::uint64_t seed) {
  detail::check_cells(class_size, n, support_size);
  Rng rng(derive_seed(seed, 0xA6));
  auto cls = FiniteHypothesisClass::classifiers(support_size, detail::distinct_labelings(class_size, support_size, rng));
  std::vector<DataDistribution> ds;
  for (std::size_t i = 0; i < n; ++i) {
    const auto marginal = detail::random_pmf(support_size, rng);
    std::vector<Datapoint> pts;
    std::vector<double> probs;
    for (std::size_t x = 0; x < support_size; ++x) {
      const double q = uniform01(rng);
      pts.push_back(Datapoint::labeled(static_cast<std::int32_t>(x), 1));
      probs.push_back(marginal[x] * q);
      pts.push_back(Datapoint::labeled(static_cast<std::int32_t>(x), -1));
      probs.push_back(marginal[x] - marginal[x] * q);
    }
    ds.emplace_back(std::move(pts), std::move(probs));
  }
  auto loss = make_label_loss_table(cls);
  return MdlInstance(std::move(ds), {std::move(loss)}, std::move(cls));
}

// Realizable instance: a planted target in the class labels every support
// point correctly, so OPT = 0. Returns the target's index through `target`.
inline MdlInstance make_realizable(std::size_t class_size, std::size_t n, std::size_t support_size,
                                   std::uint64_t seed, std::size_t* target = nullptr) {
  detail::check_cells(class_size, n, support_size);
  Rng rng(derive_seed(seed, 0x8E));
  auto labels = detail::distinct_labelings(class_size, support_size, rng);
  const std::size_t t = uniform_index(class_size, rng);
  if (target) *target = t;
  std::vector<DataDistribution> ds;
  for (std::size_t i = 0; i < n; ++i) {
    const auto marginal = detail::random_pmf(support_size, rng);
    std::vector<Datapoint> pts;
    for (std::size_t x = 0; x < support_size; ++x) {
      pts.push_back(Datapoint::labeled(static_cast<std::int32_t>(x), labels[t][x]));
    }
    ds.emplace_back(std::move(pts), marginal);
  }
  auto cls = FiniteHypothesisClass::classifiers(support_size, std::move(labels));
  auto loss = make_label_loss_table(cls);
  return MdlInstance(std::move(ds), {std::move(loss)}, std::move(cls));
}

// Which member of the hard family: the base problem, or the one where copy
// `copy` of D_{x_star} is replaced by D'_{x_star}.
struct LowerBoundVariant {
  bool perturbed = false;
  std::size_t x_star = 0;
  std::size_t copy = 0;

  static LowerBoundVariant base() { return {}; }
  static LowerBoundVariant at(std::size_t x, std::size_t i) { return {true, x, i}; }
  friend bool operator==(const LowerBoundVariant&, const LowerBoundVariant&) = default;
};

// Problem-variant distribution over the hard family with n = w * copies
// distributions: the base problem with probability 1/2, each of the w * copies
// perturbations with probability 1 / (2 w copies).
inline LowerBoundVariant sample_lower_bound_variant(std::size_t w, std::size_t copies, Rng& rng) {
  if (w < 1 || copies < 1) throw InvalidArgument("sample_lower_bound_variant: w and copies must be >= 1");
  if (uniform01(rng) < 0.5) return LowerBoundVariant::base();
  const std::size_t k = uniform_index(w * copies, rng);
  return LowerBoundVariant::at(k / copies, k % copies);
}

// Hard family over features [w] with labels +-1 and H = all 2^w labelings:
//   Pr_{D_x}(x, y)  = 1/2 - 2 y eps
//   Pr_{D'_x}(x, y) = 1/2 + 4 y eps
// The base problem holds `copies` copies of every D_x (distribution index
// x * copies + i); a perturbed variant replaces copy i of D_{x*} by D'_{x*}.
// Zero-one loss. Deterministic; `seed` is accepted for interface uniformity.
inline MdlInstance make_lower_bound_family(std::size_t w, std::size_t copies, double eps,
                                           const LowerBoundVariant& variant, std::uint64_t /*seed*/ = 0) {
  detail::check_gap(eps);
  if (copies < 1) throw InvalidArgument("make_lower_bound_family: copies must be >= 1");
  if (w > 16) throw ResourceLimit("make_lower_bound_family: w > 16 would enumerate more than 2^16 hypotheses");
  if (w < 1) throw InvalidArgument("make_lower_bound_family: w must be >= 1");
  if (variant.perturbed && (variant.x_star >= w || variant.copy >= copies)) {
    throw InvalidArgument("make_lower_bound_family: perturbation index out of range");
  }
  auto cls = FiniteHypothesisClass::all_labelings(w);
  std::vector<DataDistribution> ds;
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t i = 0; i < copies; ++i) {
      const bool flipped = variant.perturbed && variant.x_star == x && variant.copy == i;
      ds.push_back(detail::label_coin(static_cast<std::int32_t>(x), flipped ? 0.5 + 4 * eps : 0.5 - 2 * eps));
    }
  }
  auto loss = make_label_loss_table(cls);
  return MdlInstance(std::move(ds), {std::move(loss)}, std::move(cls));
}

// Coin family: `copies` single-feature distributions. Under H0 every coin
// lands tails (-1) with probability 1/2 + 2 eps; under H_i coin i instead
// lands heads (+1) with probability 1/2 + 4 eps. The class is the two
// constant predictors {-1, +1}.
inline MdlInstance make_coin_instance(std::size_t copies, double eps, std::optional<std::size_t> biased,
                                      std::uint64_t seed = 0) {
  if (biased && *biased >= copies) throw InvalidArgument("make_coin_instance: biased coin index out of range");
  return make_lower_bound_family(1, copies, eps, biased ? LowerBoundVariant::at(0, *biased) : LowerBoundVariant::base(),
                                 seed);
}

enum class ConvexFamily { bilinear, logistic };

inline ConvexFamily parse_convex_family(const std::string& s) {
  if (s == "bilinear") return ConvexFamily::bilinear;
  if (s == "logistic") return ConvexFamily::logistic;
  throw InvalidArgument("unknown convex family '" + s + "'");
}

// Affine rescaling of the bilinear family: l(theta, z) = a <theta, z> + b with
// z in [-1, 1]^dim and theta in the simplex, so l lies in [0, 1].
inline constexpr double kBilinearScale = 0.5;
inline constexpr double kBilinearOffset = 0.5;

// Normalizer for the logistic family on the unit ball with ||x|| <= 1:
// c = max(log(1 + e), 1) keeps l in [0, 1] and ||grad|| <= 1 / c.
inline double logistic_normalizer(double radius = 1.0, double max_norm = 1.0) {
  return std::max(std::log1p(std::exp(radius * max_norm)), max_norm);
}

// Uniform point in the unit ball of R^dim.
inline std::vector<double> random_ball_point(std::size_t dim, Rng& rng) {
  std::vector<double> x(dim);
  double s = 0.0;
  for (double& v : x) {
    v = standard_normal(rng);
    s += v * v;
  }
  const double r = std::pow(uniform01(rng), 1.0 / static_cast<double>(dim)) / std::sqrt(s);
  for (double& v : x) v *= r;
  return x;
}

// Convex GDRO instance with n groups of `support` points each.
//   bilinear: Theta = simplex (entropy dgf), l = 0.5 <theta, z> + 0.5, z uniform in [-1,1]^dim
//   logistic: Theta = unit ball (euclidean dgf), l = log(1 + exp(-y <theta, x>)) / c,
//             group i labels by a random direction u_i with 10% label noise
inline MdlInstance make_convex_gdro(std::size_t dim, std::size_t n, ConvexFamily family, std::uint64_t seed,
                                    std::size_t support = 6) {
  if (dim < 2 || n < 1 || support < 1) throw InvalidArgument("make_convex_gdro: need dim >= 2, n >= 1, support >= 1");
  Rng rng(derive_seed(seed, 0xC0));
  std::vector<DataDistribution> ds;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Datapoint> pts;
    if (family == ConvexFamily::bilinear) {
      for (std::size_t s = 0; s < support; ++s) {
        std::vector<double> z(dim);
        for (double& v : z) v = 2.0 * uniform01(rng) - 1.0;
        pts.push_back(Datapoint::vector(std::move(z)));
      }
    } else {
      auto u = random_ball_point(dim, rng);
      const double un = std::sqrt(dot(u, u));
      for (double& v : u) v /= un;
      for (std::size_t s = 0; s < support; ++s) {
        auto x = random_ball_point(dim, rng);
        int y = dot(u, x) >= 0.0 ? 1 : -1;
        if (uniform01(rng) < 0.1) y = -y;
        pts.push_back(Datapoint::vector(std::move(x), y));
      }
    }
    ds.emplace_back(std::move(pts), detail::random_pmf(support, rng));
  }
  if (family == ConvexFamily::bilinear) {
    return MdlInstance(std::move(ds), {SmoothLoss::bilinear(kBilinearScale, kBilinearOffset, kBilinearScale)},
                       ConvexParamSpace::simplex(dim, Dgf::entropy));
  }
  const double c = logistic_normalizer();
  return MdlInstance(std::move(ds), {SmoothLoss::logistic(c, 1.0 / c)}, ConvexParamSpace::ball(dim, 1.0));
}

// Two groups in the unit disk, `support` uniform-weight points each. Group 0
// is labelled by sign(x_0), group 1 by sign(x_1); 5% label noise. A model fit
// to data dominated by group 0 does badly on group 1.
inline MdlInstance make_two_group_logistic(std::uint64_t seed, std::size_t support = 200) {
  if (support < 1) throw InvalidArgument("make_two_group_logistic: support must be >= 1");
  Rng rng(derive_seed(seed, 0x26));
  std::vector<DataDistribution> ds;
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<Datapoint> pts;
    for (std::size_t s = 0; s < support; ++s) {
      auto x = random_ball_point(2, rng);
      int y = x[g] >= 0.0 ? 1 : -1;
      if (uniform01(rng) < 0.05) y = -y;
      pts.push_back(Datapoint::vector(std::move(x), y));
    }
    ds.emplace_back(std::move(pts), std::vector<double>(support, 1.0 / static_cast<double>(support)));
  }
  const double c = logistic_normalizer();
  return MdlInstance(std::move(ds), {SmoothLoss::logistic(c, 1.0 / c)}, ConvexParamSpace::ball(2, 1.0));
}

}  // namespace mdl
