#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "mdl/format.hpp"
#include "mdl/io/json.hpp"

namespace mdl {

inline constexpr double kUnavailable = std::numeric_limits<double>::quiet_NaN();

struct RunRecord {
  std::uint64_t run_id = 0;
  std::string algorithm;
  std::size_t n = 0;
  std::size_t size = 0;  // |H| or dim(Theta)
  double eps_target = 0.0;
  std::uint64_t samples_used = 0;
  double opt_gap = kUnavailable;  // NaN when OPT is not computable
  double worst_group_risk = kUnavailable;
  std::uint64_t wall_ms = 0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kRunRecordHeader =
    "run_id,algorithm,n,size,eps_target,samples_used,opt_gap,worst_group_risk,wall_ms,seed";

namespace detail {
inline std::string csv_number(double v) { return std::isnan(v) ? "NA" : format_double(v); }
inline Json json_number(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }
}  // namespace detail

inline void write_records_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kRunRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.run_id << ',' << r.algorithm << ',' << r.n << ',' << r.size << ',' << format_double(r.eps_target) << ','
        << r.samples_used << ',' << detail::csv_number(r.opt_gap) << ',' << detail::csv_number(r.worst_group_risk)
        << ',' << r.wall_ms << ',' << r.seed << '\n';
  }
}

inline Json record_to_json(const RunRecord& r) {
  // nlohmann::json objects keep keys sorted, which fixes the byte order.
  return Json{{"run_id", r.run_id},
              {"algorithm", r.algorithm},
              {"n", r.n},
              {"size", r.size},
              {"eps_target", r.eps_target},
              {"samples_used", r.samples_used},
              {"opt_gap", detail::json_number(r.opt_gap)},
              {"worst_group_risk", detail::json_number(r.worst_group_risk)},
              {"wall_ms", r.wall_ms},
              {"seed", r.seed}};
}

inline void write_records_json(const std::vector<RunRecord>& records, std::ostream& out) {
  Json arr = Json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  out << arr.dump(2) << '\n';
}

inline void write_records(const std::vector<RunRecord>& records, const std::string& format, std::ostream& out) {
  if (format == "json") {
    write_records_json(records, out);
  } else {
    write_records_csv(records, out);
  }
}

}  // namespace mdl
