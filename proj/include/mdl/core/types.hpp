#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/random.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

inline constexpr double kProbabilityTolerance = 1e-12;

// One datapoint z. Discrete instances use (feature, label) with the label in
// {-1, +1} and an empty vector; convex instances carry a feature vector `x`
// and, for classification losses, a label.
struct Datapoint {
  std::int32_t feature = 0;
  std::int32_t label = 0;
  std::vector<double> x;

  static Datapoint labeled(std::int32_t feature, std::int32_t label) {
    if (label != 1 && label != -1) throw InvalidArgument("Datapoint: discrete labels must be +1 or -1");
    if (feature < 0) throw InvalidArgument("Datapoint: negative feature index");
    return Datapoint{feature, label, {}};
  }
  static Datapoint vector(std::vector<double> x, std::int32_t label = 0) {
    return Datapoint{0, label, std::move(x)};
  }

  bool is_discrete() const noexcept { return x.empty(); }
  // Column of a loss table: 2 * feature + [label == +1].
  std::size_t code() const noexcept { return 2 * static_cast<std::size_t>(feature) + (label > 0 ? 1 : 0); }

  friend bool operator==(const Datapoint&, const Datapoint&) = default;
};

// Example oracle EX(D). Either a finite support with probabilities (exactly
// evaluable) or an opaque generator. Every delivered sample bumps the draw
// counter by one. Not safe to sample from two threads at once.
class DataDistribution {
 public:
  using Generator = std::function<Datapoint(Rng&)>;

  DataDistribution() = default;

  DataDistribution(std::vector<Datapoint> support, std::vector<double> probabilities)
      : support_(std::move(support)), probabilities_(std::move(probabilities)) {
    if (support_.empty()) throw InvalidArgument("DataDistribution: empty support");
    if (support_.size() != probabilities_.size()) {
      throw InvalidArgument("DataDistribution: support and probability lengths differ");
    }
    for (double p : probabilities_) {
      if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("DataDistribution: negative or non-finite probability");
    }
    if (std::abs(accurate_sum(probabilities_) - 1.0) > kProbabilityTolerance) {
      throw InvalidArgument("DataDistribution: probabilities do not sum to 1");
    }
    cdf_.resize(probabilities_.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < probabilities_.size(); ++i) {
      acc += probabilities_[i];
      cdf_[i] = static_cast<double>(acc);
    }
  }

  explicit DataDistribution(Generator generator) : generator_(std::move(generator)) {
    if (!generator_) throw InvalidArgument("DataDistribution: null generator");
  }

  bool has_finite_support() const noexcept { return !support_.empty(); }
  std::span<const Datapoint> support() const noexcept { return support_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  std::size_t support_size() const noexcept { return support_.size(); }

  // Index into support(); finite-support distributions only.
  std::size_t draw_index(Rng& rng) {
    if (!has_finite_support()) throw Unsupported("draw_index: distribution has no finite support");
    const double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto i = static_cast<std::size_t>(it - cdf_.begin());
    if (i >= cdf_.size()) i = last_positive_index();
    ++draws_;
    return i;
  }

  // The returned reference stays valid until the next draw.
  const Datapoint& draw(Rng& rng) {
    if (has_finite_support()) return support_[draw_index(rng)];
    scratch_ = generator_(rng);
    ++draws_;
    return scratch_;
  }

  std::uint64_t draw_count() const noexcept { return draws_; }
  void reset_draw_count() noexcept { draws_ = 0; }

 private:
  std::size_t last_positive_index() const {
    for (std::size_t i = probabilities_.size(); i-- > 0;) {
      if (probabilities_[i] > 0.0) return i;
    }
    return 0;
  }

  std::vector<Datapoint> support_;
  std::vector<double> probabilities_;
  std::vector<double> cdf_;
  Generator generator_;
  Datapoint scratch_;
  std::uint64_t draws_ = 0;
};

// Loss of the form g(prediction, label) for binary classifiers. Indexed
// cost[prediction > 0][label > 0].
struct LabelLoss {
  std::array<std::array<double, 2>, 2> cost{{{0.0, 1.0}, {1.0, 0.0}}};

  static LabelLoss zero_one() { return LabelLoss{}; }
  double operator()(int prediction, int label) const { return cost[prediction > 0][label > 0]; }
  friend bool operator==(const LabelLoss&, const LabelLoss&) = default;
};

// Loss table over (hypothesis index, datapoint code) with values in [0, 1].
class TableLoss {
 public:
  TableLoss() = default;
  TableLoss(std::size_t num_hypotheses, std::size_t num_features, std::vector<double> values,
            std::optional<LabelLoss> label_loss = std::nullopt)
      : num_hypotheses_(num_hypotheses),
        num_codes_(2 * num_features),
        values_(std::move(values)),
        label_loss_(label_loss) {
    if (num_hypotheses_ == 0 || num_codes_ == 0) throw InvalidArgument("TableLoss: empty table");
    if (values_.size() != num_hypotheses_ * num_codes_) throw InvalidArgument("TableLoss: table has wrong size");
    for (double v : values_) {
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("TableLoss: loss values must lie in [0,1]");
    }
  }

  std::size_t num_hypotheses() const noexcept { return num_hypotheses_; }
  std::size_t num_features() const noexcept { return num_codes_ / 2; }
  std::size_t num_codes() const noexcept { return num_codes_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::optional<LabelLoss>& label_loss() const noexcept { return label_loss_; }

  double at(std::size_t hypothesis, std::size_t code) const { return values_[hypothesis * num_codes_ + code]; }
  double operator()(std::size_t hypothesis, const Datapoint& z) const {
    const std::size_t c = z.code();
    if (hypothesis >= num_hypotheses_ || c >= num_codes_) throw InvalidArgument("TableLoss: index out of range");
    return at(hypothesis, c);
  }

 private:
  std::size_t num_hypotheses_ = 0;
  std::size_t num_codes_ = 0;
  std::vector<double> values_;
  std::optional<LabelLoss> label_loss_;
};

// Differentiable loss l(theta, z) with values in [0,1] and gradients bounded
// by smoothness_bound() in the loss's norm.
//   bilinear     : scale * <theta, z.x> + offset
//   logistic     : log(1 + exp(-y <theta, z.x>)) / normalizer
//   linear_table : sum_f theta_f * table(f, z)   (relaxation of a table loss)
class SmoothLoss {
 public:
  enum class Kind { bilinear, logistic, linear_table };

  static SmoothLoss bilinear(double scale, double offset, double gradient_bound) {
    SmoothLoss l;
    l.kind_ = Kind::bilinear;
    l.scale_ = scale;
    l.offset_ = offset;
    l.bound_ = gradient_bound;
    return l;
  }
  static SmoothLoss logistic(double normalizer, double gradient_bound) {
    if (!(normalizer > 0.0)) throw InvalidArgument("SmoothLoss::logistic: normalizer must be positive");
    SmoothLoss l;
    l.kind_ = Kind::logistic;
    l.scale_ = normalizer;
    l.bound_ = gradient_bound;
    return l;
  }
  static SmoothLoss linear_table(std::shared_ptr<const TableLoss> table) {
    if (!table) throw InvalidArgument("SmoothLoss::linear_table: null table");
    SmoothLoss l;
    l.kind_ = Kind::linear_table;
    l.table_ = std::move(table);
    l.bound_ = 1.0;
    return l;
  }

  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }
  double offset() const noexcept { return offset_; }
  double smoothness_bound() const noexcept { return bound_; }
  const std::shared_ptr<const TableLoss>& table() const noexcept { return table_; }
  // Linear in theta: the min over a simplex is attained at a vertex.
  bool is_linear() const noexcept { return kind_ != Kind::logistic; }

  double value(std::span<const double> theta, const Datapoint& z) const {
    switch (kind_) {
      case Kind::bilinear:
        return clamp01(scale_ * dot(theta, z.x) + offset_);
      case Kind::logistic: {
        const double margin = z.label * dot(theta, z.x);
        return clamp01(softplus(-margin) / scale_);
      }
      case Kind::linear_table: {
        const std::size_t c = z.code();
        double s = 0.0;
        for (std::size_t f = 0; f < theta.size(); ++f) s += theta[f] * table_->at(f, c);
        return clamp01(s);
      }
    }
    return 0.0;
  }

  void gradient(std::span<const double> theta, const Datapoint& z, std::span<double> out) const {
    switch (kind_) {
      case Kind::bilinear:
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = scale_ * z.x[k];
        return;
      case Kind::logistic: {
        const double margin = z.label * dot(theta, z.x);
        const double s = -z.label * sigmoid(-margin) / scale_;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * z.x[k];
        return;
      }
      case Kind::linear_table: {
        const std::size_t c = z.code();
        for (std::size_t f = 0; f < out.size(); ++f) out[f] = table_->at(f, c);
        return;
      }
    }
  }

  static double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
  static double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  }

 private:
  static double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

  Kind kind_ = Kind::bilinear;
  double scale_ = 1.0;
  double offset_ = 0.0;
  double bound_ = 1.0;
  std::shared_ptr<const TableLoss> table_;
};

using LossFunction = std::variant<TableLoss, SmoothLoss>;

// Finite hypothesis class. With label tables (binary classifiers over the
// feature domain [num_features]) or abstract (size only, losses supplied as
// tables).
class FiniteHypothesisClass {
 public:
  FiniteHypothesisClass() = default;

  static FiniteHypothesisClass abstract(std::size_t size) {
    if (size == 0) throw InvalidArgument("FiniteHypothesisClass: empty class");
    FiniteHypothesisClass c;
    c.size_ = size;
    return c;
  }

  static FiniteHypothesisClass classifiers(std::size_t num_features, std::vector<std::vector<int>> labels) {
    if (labels.empty()) throw InvalidArgument("FiniteHypothesisClass: empty class");
    for (const auto& row : labels) {
      if (row.size() != num_features) throw InvalidArgument("FiniteHypothesisClass: label table has wrong width");
      for (int y : row) {
        if (y != 1 && y != -1) throw InvalidArgument("FiniteHypothesisClass: labels must be +1 or -1");
      }
    }
    std::set<std::vector<int>> distinct(labels.begin(), labels.end());
    if (distinct.size() != labels.size()) throw InvalidArgument("FiniteHypothesisClass: duplicate hypotheses");
    FiniteHypothesisClass c;
    c.size_ = labels.size();
    c.num_features_ = num_features;
    c.labels_ = std::move(labels);
    return c;
  }

  // All 2^w labelings of [w], hypothesis index bit x set <=> label +1 at x.
  static FiniteHypothesisClass all_labelings(std::size_t w) {
    if (w == 0 || w > 16) throw ResourceLimit("all_labelings: feature domain must have 1..16 points");
    std::vector<std::vector<int>> labels(std::size_t{1} << w, std::vector<int>(w));
    for (std::size_t h = 0; h < labels.size(); ++h) {
      for (std::size_t x = 0; x < w; ++x) labels[h][x] = ((h >> x) & 1U) ? 1 : -1;
    }
    return classifiers(w, std::move(labels));
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t num_features() const noexcept { return num_features_; }
  bool is_binary() const noexcept { return !labels_.empty(); }
  const std::vector<std::vector<int>>& labels() const noexcept { return labels_; }
  int predict(std::size_t h, std::size_t feature) const { return labels_.at(h).at(feature); }

 private:
  std::size_t size_ = 0;
  std::size_t num_features_ = 0;
  std::vector<std::vector<int>> labels_;
};

// Table of g(h(x), y) for every hypothesis of a binary class.
inline TableLoss make_label_loss_table(const FiniteHypothesisClass& cls, const LabelLoss& g = LabelLoss::zero_one()) {
  if (!cls.is_binary()) throw Unsupported("make_label_loss_table: class has no label tables");
  const std::size_t w = cls.num_features();
  std::vector<double> values(cls.size() * 2 * w);
  for (std::size_t h = 0; h < cls.size(); ++h) {
    for (std::size_t x = 0; x < w; ++x) {
      values[h * 2 * w + 2 * x + 0] = g(cls.predict(h, x), -1);
      values[h * 2 * w + 2 * x + 1] = g(cls.predict(h, x), +1);
    }
  }
  return TableLoss(cls.size(), w, std::move(values), g);
}

}  // namespace mdl
