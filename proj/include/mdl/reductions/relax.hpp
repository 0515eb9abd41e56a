#pragma once

#include <memory>
#include <vector>

#include "mdl/core/instance.hpp"
#include "mdl/core/risk.hpp"
#include "mdl/simplex.hpp"

namespace mdl {

// Relaxation of a finite-class problem onto Delta(H): each table loss l
// becomes the linear loss l~(h, z) = E_{f ~ h} l(f, z) over the probability
// simplex (entropy dgf). Risks of a mixture in the relaxed instance equal the
// mixture's risks in the original, so an eps-optimal point of the relaxed
// problem is an eps-optimal randomized solution of the original one.
inline MdlInstance relax_collaborative(const MdlInstance& instance) {
  if (!instance.has_finite_class()) throw Unsupported("relax_collaborative: needs a finite hypothesis class");
  std::vector<LossFunction> relaxed;
  for (const auto& l : instance.losses()) {
    relaxed.emplace_back(SmoothLoss::linear_table(std::make_shared<const TableLoss>(std::get<TableLoss>(l))));
  }
  return MdlInstance(instance.distributions(), std::move(relaxed),
                     ConvexParamSpace::simplex(instance.finite_class().size(), Dgf::entropy));
}

// h_Maj(x) = +1 iff Pr_{f ~ h}(f(x) = +1) > 1/2. Ties go to -1.
inline BinaryClassifier majority_vote(const SimplexWeights& h, const FiniteHypothesisClass& cls) {
  if (!cls.is_binary()) throw Unsupported("majority_vote: needs a class of binary classifiers");
  if (h.size() != cls.size()) throw InvalidArgument("majority_vote: weight vector size != class size");
  BinaryClassifier out;
  out.labels.assign(cls.num_features(), -1);
  for (std::size_t x = 0; x < cls.num_features(); ++x) {
    long double plus = 0.0L;
    for (std::size_t f = 0; f < cls.size(); ++f) {
      if (cls.labels()[f][x] > 0) plus += h[f];
    }
    if (plus > 0.5L) out.labels[x] = 1;
  }
  return out;
}

}  // namespace mdl
