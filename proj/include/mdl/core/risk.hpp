#pragma once

#include <algorithm>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/types.hpp"
#include "mdl/error.hpp"
#include "mdl/random.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// A pure hypothesis of a finite class.
struct HypothesisIndex {
  std::size_t value = 0;
};

// Deterministic binary classifier over the feature domain [w] (labels +-1),
// possibly outside the class (e.g. a majority vote).
struct BinaryClassifier {
  std::vector<int> labels;
};

// Dense row-major matrix. Used for risk matrices of min-max games: rows are
// the minimizing player's pure actions.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

namespace detail {
inline double clamp_risk(double r) { return std::clamp(r, 0.0, 1.0); }

inline void require_finite_support(const DataDistribution& d) {
  if (!d.has_finite_support()) throw Unsupported("exact evaluation needs a finite-support distribution");
}
}  // namespace detail

// R_{D,l}(f) = sum_z Pr_D(z) l(f, z).
inline double exact_risk(HypothesisIndex h, const DataDistribution& d, const TableLoss& loss) {
  detail::require_finite_support(d);
  if (h.value >= loss.num_hypotheses()) throw InvalidArgument("exact_risk: hypothesis index out of range");
  long double s = 0.0L;
  const auto support = d.support();
  const auto p = d.probabilities();
  for (std::size_t k = 0; k < support.size(); ++k) s += static_cast<long double>(p[k]) * loss(h.value, support[k]);
  return detail::clamp_risk(static_cast<double>(s));
}

// Randomized hypothesis, expanded by linearity: sum_f h(f) R_{D,l}(f).
inline double exact_risk(const SimplexWeights& h, const DataDistribution& d, const TableLoss& loss) {
  detail::require_finite_support(d);
  if (h.size() != loss.num_hypotheses()) throw InvalidArgument("exact_risk: weights do not match the class size");
  long double s = 0.0L;
  const auto support = d.support();
  const auto p = d.probabilities();
  for (std::size_t k = 0; k < support.size(); ++k) {
    const std::size_t c = support[k].code();
    long double inner = 0.0L;
    for (std::size_t f = 0; f < h.size(); ++f) {
      if (h[f] != 0.0) inner += static_cast<long double>(h[f]) * loss.at(f, c);
    }
    s += p[k] * inner;
  }
  return detail::clamp_risk(static_cast<double>(s));
}

// Classifier risk for losses of the form g(h(x), y).
inline double exact_risk(const BinaryClassifier& h, const DataDistribution& d, const TableLoss& loss) {
  detail::require_finite_support(d);
  if (!loss.label_loss()) throw Unsupported("exact_risk: classifier risk needs a label loss g(h(x), y)");
  const auto& g = *loss.label_loss();
  long double s = 0.0L;
  const auto support = d.support();
  const auto p = d.probabilities();
  for (std::size_t k = 0; k < support.size(); ++k) {
    const auto x = static_cast<std::size_t>(support[k].feature);
    if (x >= h.labels.size()) throw InvalidArgument("exact_risk: classifier does not cover the feature domain");
    s += p[k] * g(h.labels[x], support[k].label);
  }
  return detail::clamp_risk(static_cast<double>(s));
}

// Parameter point under a smooth loss.
inline double exact_risk(std::span<const double> theta, const DataDistribution& d, const SmoothLoss& loss) {
  detail::require_finite_support(d);
  long double s = 0.0L;
  const auto support = d.support();
  const auto p = d.probabilities();
  for (std::size_t k = 0; k < support.size(); ++k) s += p[k] * loss.value(theta, support[k]);
  return detail::clamp_risk(static_cast<double>(s));
}

inline double exact_risk(const std::vector<double>& theta, const DataDistribution& d, const SmoothLoss& loss) {
  return exact_risk(std::span<const double>(theta), d, loss);
}

// Dispatch on a loss variant. Unsupported if the hypothesis kind does not
// apply to the loss kind.
template <class H, class L>
  requires std::same_as<L, LossFunction>
double exact_risk(const H& h, const DataDistribution& d, const L& loss) {
  return std::visit(
      [&](const auto& l) -> double {
        if constexpr (requires { exact_risk(h, d, l); }) {
          return exact_risk(h, d, l);
        } else {
          throw Unsupported("exact_risk: hypothesis kind does not match the loss kind");
        }
      },
      loss);
}

// Mean loss over `samples` i.i.d. draws from the oracle. Deterministic given
// seed; advances the oracle's draw counter by `samples`.
template <class H>
double monte_carlo_risk(const H& h, DataDistribution& oracle, const LossFunction& loss, std::uint64_t samples,
                        std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("monte_carlo_risk: samples must be >= 1");
  Rng rng(seed);
  long double s = 0.0L;
  for (std::uint64_t t = 0; t < samples; ++t) {
    const Datapoint& z = oracle.draw(rng);
    s += std::visit(
        [&](const auto& l) -> double {
          using L = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<L, TableLoss>) {
            if constexpr (std::is_same_v<H, HypothesisIndex>) {
              return l(h.value, z);
            } else if constexpr (std::is_same_v<H, SimplexWeights>) {
              double v = 0.0;
              for (std::size_t f = 0; f < h.size(); ++f) v += h[f] * l(f, z);
              return v;
            } else {
              throw Unsupported("monte_carlo_risk: hypothesis kind does not match the loss kind");
            }
          } else {
            if constexpr (std::is_convertible_v<const H&, std::span<const double>>) {
              return l.value(h, z);
            } else {
              throw Unsupported("monte_carlo_risk: hypothesis kind does not match the loss kind");
            }
          }
        },
        loss);
  }
  return static_cast<double>(s / static_cast<long double>(samples));
}

// max over (D_i, l_j) of R_{D_i, l_j}(h).
template <class H>
double worst_case_risk(const H& h, const MdlInstance& instance) {
  double worst = 0.0;
  for (const auto& d : instance.distributions()) {
    for (const auto& l : instance.losses()) worst = std::max(worst, exact_risk(h, d, l));
  }
  return worst;
}

// Per-pair risks, column a = i * m + j.
template <class H>
std::vector<double> pair_risks(const H& h, const MdlInstance& instance) {
  std::vector<double> out;
  out.reserve(instance.num_pairs());
  for (const auto& d : instance.distributions()) {
    for (const auto& l : instance.losses()) out.push_back(exact_risk(h, d, l));
  }
  return out;
}

// True iff the minimax over the learner's action set is a finite matrix game:
// finite classes with table losses, or linear losses on a simplex.
inline bool has_matrix_form(const MdlInstance& instance) {
  if (!instance.all_finite_support()) return false;
  if (instance.has_finite_class()) return instance.exact_evaluable();
  if (instance.param_space().geometry() != Geometry::simplex) return false;
  for (const auto& l : instance.losses()) {
    if (!std::get<SmoothLoss>(l).is_linear()) return false;
  }
  return true;
}

// Risk matrix: rows are pure hypotheses (or simplex vertices for linear
// losses), columns are (distribution, loss) pairs.
inline Matrix risk_matrix(const MdlInstance& instance) {
  if (!has_matrix_form(instance)) throw Unsupported("risk_matrix: instance has no finite matrix form");
  const std::size_t rows = instance.learner_dimension();
  Matrix m(rows, instance.num_pairs());
  if (instance.has_finite_class()) {
    for (std::size_t a = 0; a < instance.num_pairs(); ++a) {
      const auto& d = instance.distribution(a / instance.num_losses());
      const auto& l = std::get<TableLoss>(instance.loss(a % instance.num_losses()));
      for (std::size_t r = 0; r < rows; ++r) m(r, a) = exact_risk(HypothesisIndex{r}, d, l);
    }
  } else {
    std::vector<double> vertex(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      std::fill(vertex.begin(), vertex.end(), 0.0);
      vertex[r] = 1.0;
      for (std::size_t a = 0; a < instance.num_pairs(); ++a) {
        const auto& d = instance.distribution(a / instance.num_losses());
        const auto& l = std::get<SmoothLoss>(instance.loss(a % instance.num_losses()));
        m(r, a) = exact_risk(std::span<const double>(vertex), d, l);
      }
    }
  }
  return m;
}

// Loss and gradient of the learner's action at one datapoint. For a finite
// class the action is a mixture over H and the loss is the relaxed (linear)
// loss, whose gradient is the vector [l_j(f, z)]_f.
inline double action_loss(const MdlInstance& instance, std::size_t j, std::span<const double> action,
                          const Datapoint& z) {
  const auto& loss = instance.loss(j);
  if (const auto* t = std::get_if<TableLoss>(&loss)) {
    const std::size_t c = z.code();
    double v = 0.0;
    for (std::size_t f = 0; f < action.size(); ++f) {
      if (action[f] != 0.0) v += action[f] * t->at(f, c);
    }
    return std::clamp(v, 0.0, 1.0);
  }
  return std::get<SmoothLoss>(loss).value(action, z);
}

inline void action_gradient(const MdlInstance& instance, std::size_t j, std::span<const double> action,
                            const Datapoint& z, std::span<double> out) {
  const auto& loss = instance.loss(j);
  if (const auto* t = std::get_if<TableLoss>(&loss)) {
    const std::size_t c = z.code();
    for (std::size_t f = 0; f < out.size(); ++f) out[f] = t->at(f, c);
    return;
  }
  std::get<SmoothLoss>(loss).gradient(action, z, out);
}

}  // namespace mdl
