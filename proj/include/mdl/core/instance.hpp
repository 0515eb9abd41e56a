#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "mdl/core/param_space.hpp"
#include "mdl/core/types.hpp"
#include "mdl/error.hpp"

namespace mdl {

using HypothesisSpace = std::variant<FiniteHypothesisClass, ConvexParamSpace>;

// Multi-distribution learning problem (D, L, H): n example oracles, m losses
// and the hypothesis space every solver consumes. Auditor actions are indexed
// a = i * m + j for the pair (D_i, l_j).
class MdlInstance {
 public:
  MdlInstance(std::vector<DataDistribution> distributions, std::vector<LossFunction> losses, HypothesisSpace space)
      : distributions_(std::move(distributions)), losses_(std::move(losses)), space_(std::move(space)) {
    if (distributions_.empty()) throw InvalidArgument("MdlInstance: need at least one distribution");
    if (losses_.empty()) throw InvalidArgument("MdlInstance: need at least one loss");
    validate();
  }

  std::size_t num_distributions() const noexcept { return distributions_.size(); }
  std::size_t num_losses() const noexcept { return losses_.size(); }
  std::size_t num_pairs() const noexcept { return distributions_.size() * losses_.size(); }

  std::vector<DataDistribution>& distributions() noexcept { return distributions_; }
  const std::vector<DataDistribution>& distributions() const noexcept { return distributions_; }
  DataDistribution& distribution(std::size_t i) { return distributions_.at(i); }
  const DataDistribution& distribution(std::size_t i) const { return distributions_.at(i); }
  const std::vector<LossFunction>& losses() const noexcept { return losses_; }
  const LossFunction& loss(std::size_t j) const { return losses_.at(j); }
  const HypothesisSpace& space() const noexcept { return space_; }

  bool has_finite_class() const noexcept { return std::holds_alternative<FiniteHypothesisClass>(space_); }
  const FiniteHypothesisClass& finite_class() const {
    if (!has_finite_class()) throw Unsupported("MdlInstance: hypothesis space is not a finite class");
    return std::get<FiniteHypothesisClass>(space_);
  }
  const ConvexParamSpace& param_space() const {
    if (has_finite_class()) throw Unsupported("MdlInstance: hypothesis space is not a parameter space");
    return std::get<ConvexParamSpace>(space_);
  }

  // Dimension of the learner's action: |H| for a finite class, dim(Theta) otherwise.
  std::size_t learner_dimension() const {
    return has_finite_class() ? finite_class().size() : param_space().dimension();
  }

  // True iff every distribution has finite support and every loss is a table.
  bool exact_evaluable() const {
    for (const auto& d : distributions_) {
      if (!d.has_finite_support()) return false;
    }
    for (const auto& l : losses_) {
      if (!std::holds_alternative<TableLoss>(l)) return false;
    }
    return has_finite_class();
  }

  bool all_finite_support() const {
    for (const auto& d : distributions_) {
      if (!d.has_finite_support()) return false;
    }
    return true;
  }

  std::uint64_t total_draws() const {
    std::uint64_t s = 0;
    for (const auto& d : distributions_) s += d.draw_count();
    return s;
  }
  std::vector<std::uint64_t> draw_counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(distributions_.size());
    for (const auto& d : distributions_) out.push_back(d.draw_count());
    return out;
  }
  void reset_draw_counts() {
    for (auto& d : distributions_) d.reset_draw_count();
  }

  // Largest gradient-norm bound over the losses (1 for table losses, whose
  // relaxed gradients lie in [0,1]^|H|).
  double gradient_bound() const {
    double b = 0.0;
    for (const auto& l : losses_) {
      b = std::max(b, std::holds_alternative<SmoothLoss>(l) ? std::get<SmoothLoss>(l).smoothness_bound() : 1.0);
    }
    return b;
  }

 private:
  void validate() const {
    if (has_finite_class()) {
      const auto& cls = finite_class();
      for (const auto& l : losses_) {
        const auto* t = std::get_if<TableLoss>(&l);
        if (!t) throw InvalidArgument("MdlInstance: finite classes need table losses");
        if (t->num_hypotheses() != cls.size()) throw InvalidArgument("MdlInstance: loss table rows != class size");
      }
      for (const auto& d : distributions_) {
        for (const auto& z : d.support()) {
          for (const auto& l : losses_) {
            if (z.code() >= std::get<TableLoss>(l).num_codes()) {
              throw InvalidArgument("MdlInstance: support point outside the loss table's feature domain");
            }
          }
        }
      }
    } else {
      const auto& space = param_space();
      for (const auto& l : losses_) {
        if (!std::holds_alternative<SmoothLoss>(l)) throw InvalidArgument("MdlInstance: parameter spaces need smooth losses");
        const auto& s = std::get<SmoothLoss>(l);
        if (s.kind() == SmoothLoss::Kind::linear_table && s.table()->num_hypotheses() != space.dimension()) {
          throw InvalidArgument("MdlInstance: relaxed loss width != parameter dimension");
        }
      }
      for (const auto& d : distributions_) {
        for (const auto& z : d.support()) {
          bool table_kind = false;
          for (const auto& l : losses_) table_kind |= std::get<SmoothLoss>(l).kind() == SmoothLoss::Kind::linear_table;
          if (!table_kind && z.x.size() != space.dimension()) {
            throw InvalidArgument("MdlInstance: vector datapoint has the wrong dimension");
          }
        }
      }
    }
  }

  std::vector<DataDistribution> distributions_;
  std::vector<LossFunction> losses_;
  HypothesisSpace space_;
};

}  // namespace mdl
