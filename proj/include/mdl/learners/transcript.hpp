#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mdl/format.hpp"

namespace mdl {

// One learner round: the action played, the indices whose costs were
// observed and the (estimated) cost vector fed to the update.
struct LearnerRound {
  std::uint64_t round = 0;
  std::vector<double> action;
  std::vector<std::size_t> observed;
  std::vector<double> estimated_costs;
};

// Per-round log of a learner, exported as CSV for offline regret audits.
// Vector cells are ';'-separated.
class LearnerTranscript {
 public:
  void record(std::uint64_t round, std::span<const double> action, std::span<const std::size_t> observed,
              std::span<const double> estimated_costs) {
    rows_.push_back({round, {action.begin(), action.end()}, {observed.begin(), observed.end()},
                     {estimated_costs.begin(), estimated_costs.end()}});
  }

  const std::vector<LearnerRound>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  void write_csv(std::ostream& out) const {
    out << "round,action,observed,estimated_costs\n";
    for (const auto& r : rows_) {
      out << r.round << ',' << join(r.action) << ',';
      for (std::size_t i = 0; i < r.observed.size(); ++i) out << (i ? ";" : "") << r.observed[i];
      out << ',' << join(r.estimated_costs) << '\n';
    }
  }

 private:
  std::vector<LearnerRound> rows_;
};

}  // namespace mdl
