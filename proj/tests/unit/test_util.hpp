#pragma once

#include <cstdint>
#include <vector>

#include "mdl/mdl.hpp"

namespace mdl::testing {

// Abstract finite class whose loss table gives hypothesis h the value
// table[h][k] on support point k of a single distribution over features
// 0..K-1 (label fixed to +1).
inline TableLoss table_over_points(const std::vector<std::vector<double>>& table) {
  const std::size_t h = table.size();
  const std::size_t k = table.front().size();
  std::vector<double> values(h * 2 * k, 0.0);
  for (std::size_t f = 0; f < h; ++f) {
    for (std::size_t x = 0; x < k; ++x) {
      values[f * 2 * k + 2 * x + 1] = table[f][x];
      values[f * 2 * k + 2 * x + 0] = table[f][x];
    }
  }
  return TableLoss(h, k, std::move(values));
}

inline DataDistribution point_distribution(std::vector<double> probs) {
  std::vector<Datapoint> pts;
  for (std::size_t x = 0; x < probs.size(); ++x) pts.push_back(Datapoint::labeled(static_cast<int>(x), 1));
  return DataDistribution(std::move(pts), std::move(probs));
}

// Instance whose risk matrix is exactly `m` (rows = hypotheses, columns =
// distributions). Distribution c is a point mass on feature c, and the loss
// of hypothesis r there is m[r][c].
inline MdlInstance instance_from_matrix(const std::vector<std::vector<double>>& m) {
  const std::size_t cols = m.front().size();
  std::vector<DataDistribution> ds;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> p(cols, 0.0);
    p[c] = 1.0;
    ds.push_back(point_distribution(std::move(p)));
  }
  return MdlInstance(std::move(ds), {table_over_points(m)}, FiniteHypothesisClass::abstract(m.size()));
}

inline std::vector<std::vector<double>> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
  for (auto& row : m) {
    for (double& v : row) v = uniform01(rng);
  }
  return m;
}

inline Matrix to_matrix(const std::vector<std::vector<double>>& m) {
  Matrix out(m.size(), m.front().size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m[r].size(); ++c) out(r, c) = m[r][c];
  }
  return out;
}

inline std::vector<double> random_simplex_point(std::size_t k, Rng& rng) {
  std::vector<double> v(k);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - uniform01(rng));
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

}  // namespace mdl::testing
