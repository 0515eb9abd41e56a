#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "mdl/error.hpp"
#include "mdl/format.hpp"

namespace mdl {

// One round of a game run: both players' actions and what each observed.
struct RoundRecord {
  std::uint64_t round = 0;  // 1-based
  std::vector<double> min_action;
  std::vector<double> max_action;
  std::vector<double> min_gradient;  // estimate fed to the min player
  std::size_t learner_pair = 0;      // (i, j) behind min_gradient, a = i * m + j
  std::size_t auditor_cell = 0;      // cell announced by a partial-feedback max player
  std::vector<std::size_t> observed;
  std::vector<double> max_costs;  // costs fed to the max player (observed entries only)
};

// Averaged iterates of both players plus exact oracle accounting.
struct SolveResult {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::vector<double> avg_min_action;
  std::vector<double> avg_max_action;
  std::vector<std::uint64_t> per_distribution_samples;
  std::uint64_t total_samples = 0;
  std::uint64_t oracle_calls = 0;
  std::vector<RoundRecord> transcript;  // filled only when requested
};

inline void write_transcript_csv(const SolveResult& r, std::ostream& out) {
  out << "round,min_action,max_action,learner_pair,min_gradient,auditor_cell,observed,max_costs\n";
  for (const auto& row : r.transcript) {
    out << row.round << ',' << join(row.min_action) << ',' << join(row.max_action) << ',' << row.learner_pair << ','
        << join(row.min_gradient) << ',' << row.auditor_cell << ',';
    for (std::size_t i = 0; i < row.observed.size(); ++i) out << (i ? ";" : "") << row.observed[i];
    out << ',' << join(row.max_costs) << '\n';
  }
}

// A run stopped because the oracle-call budget ran out. Carries everything
// computed up to the last complete round.
class BudgetExhausted : public ResourceLimit {
 public:
  BudgetExhausted(const std::string& what, SolveResult partial)
      : ResourceLimit(what), partial_(std::move(partial)) {}
  const SolveResult& partial() const noexcept { return partial_; }

 private:
  SolveResult partial_;
};

}  // namespace mdl
