#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json (vendored)
#include "mdl/core/instance.hpp"
#include "mdl/dynamics/solve_result.hpp"
#include "mdl/format.hpp"

namespace mdl {

using Json = nlohmann::json;

namespace detail {

inline const char* geometry_name(Geometry g) {
  switch (g) {
    case Geometry::simplex: return "simplex";
    case Geometry::ball: return "ball";
    case Geometry::box: return "box";
  }
  return "";
}

inline const char* dgf_name(Dgf d) {
  switch (d) {
    case Dgf::entropy: return "entropy";
    case Dgf::euclidean: return "euclidean";
    case Dgf::none: return "none";
  }
  return "";
}

inline Dgf parse_dgf(const std::string& s) {
  if (s == "entropy") return Dgf::entropy;
  if (s == "euclidean") return Dgf::euclidean;
  if (s == "none") return Dgf::none;
  throw InvalidArgument("instance file: unknown dgf '" + s + "'");
}

// Probabilities travel as decimal strings so they read back bit for bit.
inline double read_number(const Json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw InvalidArgument("instance file: expected a number or decimal string");
}

inline Json table_to_json(const TableLoss& t) {
  Json j;
  j["hypotheses"] = t.num_hypotheses();
  j["features"] = t.num_features();
  j["values"] = std::vector<double>(t.values().begin(), t.values().end());
  if (t.label_loss()) {
    const auto& c = t.label_loss()->cost;
    j["label_loss"] = {{c[0][0], c[0][1]}, {c[1][0], c[1][1]}};
  }
  return j;
}

inline TableLoss table_from_json(const Json& j) {
  std::optional<LabelLoss> g;
  if (j.contains("label_loss")) {
    LabelLoss l;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) l.cost[a][b] = j.at("label_loss").at(a).at(b).get<double>();
    }
    g = l;
  }
  return TableLoss(j.at("hypotheses").get<std::size_t>(), j.at("features").get<std::size_t>(),
                   j.at("values").get<std::vector<double>>(), g);
}

}  // namespace detail

// Instance document: hypothesis space, distributions (support + pmf) and
// losses. Generator-backed distributions cannot be written.
inline Json instance_to_json(const MdlInstance& inst) {
  Json j;
  j["format"] = "mdl-instance";
  j["version"] = 1;
  j["n"] = inst.num_distributions();
  j["m"] = inst.num_losses();
  if (inst.has_finite_class()) {
    const auto& cls = inst.finite_class();
    Json s{{"kind", "finite"}, {"size", cls.size()}};
    if (cls.is_binary()) {
      s["num_features"] = cls.num_features();
      s["labels"] = cls.labels();
    }
    j["space"] = s;
  } else {
    const auto& p = inst.param_space();
    Json s{{"kind", "convex"},
           {"geometry", detail::geometry_name(p.geometry())},
           {"dim", p.dimension()},
           {"dgf", detail::dgf_name(p.dgf())}};
    if (p.geometry() == Geometry::ball) s["radius"] = p.radius();
    if (p.geometry() == Geometry::box) {
      s["lower"] = p.lower();
      s["upper"] = p.upper();
    }
    j["space"] = s;
  }
  Json ds = Json::array();
  for (const auto& d : inst.distributions()) {
    if (!d.has_finite_support()) throw Unsupported("instance_to_json: distribution has no finite support");
    Json support = Json::array();
    for (const auto& z : d.support()) {
      if (z.is_discrete()) {
        support.push_back({{"feature", z.feature}, {"label", z.label}});
      } else {
        support.push_back({{"x", z.x}, {"label", z.label}});
      }
    }
    Json probs = Json::array();
    for (double p : d.probabilities()) probs.push_back(format_double(p));
    ds.push_back({{"support", support}, {"probabilities", probs}});
  }
  j["distributions"] = ds;
  Json losses = Json::array();
  for (const auto& l : inst.losses()) {
    if (const auto* t = std::get_if<TableLoss>(&l)) {
      Json e = detail::table_to_json(*t);
      e["kind"] = "table";
      losses.push_back(e);
      continue;
    }
    const auto& s = std::get<SmoothLoss>(l);
    switch (s.kind()) {
      case SmoothLoss::Kind::bilinear:
        losses.push_back(
            {{"kind", "bilinear"}, {"scale", s.scale()}, {"offset", s.offset()}, {"bound", s.smoothness_bound()}});
        break;
      case SmoothLoss::Kind::logistic:
        losses.push_back({{"kind", "logistic"}, {"normalizer", s.scale()}, {"bound", s.smoothness_bound()}});
        break;
      case SmoothLoss::Kind::linear_table:
        losses.push_back({{"kind", "linear_table"}, {"table", detail::table_to_json(*s.table())}});
        break;
    }
  }
  j["losses"] = losses;
  return j;
}

inline MdlInstance instance_from_json(const Json& j) {
  try {
    if (j.value("format", std::string()) != "mdl-instance") {
      throw InvalidArgument("instance file: missing format tag 'mdl-instance'");
    }
    std::vector<DataDistribution> ds;
    for (const auto& d : j.at("distributions")) {
      std::vector<Datapoint> support;
      for (const auto& z : d.at("support")) {
        if (z.contains("x")) {
          support.push_back(Datapoint::vector(z.at("x").get<std::vector<double>>(), z.value("label", 0)));
        } else {
          support.push_back(Datapoint::labeled(z.at("feature").get<std::int32_t>(), z.at("label").get<std::int32_t>()));
        }
      }
      std::vector<double> probs;
      for (const auto& p : d.at("probabilities")) probs.push_back(detail::read_number(p));
      ds.emplace_back(std::move(support), std::move(probs));
    }
    std::vector<LossFunction> losses;
    for (const auto& l : j.at("losses")) {
      const auto kind = l.at("kind").get<std::string>();
      if (kind == "table") {
        losses.emplace_back(detail::table_from_json(l));
      } else if (kind == "bilinear") {
        losses.emplace_back(SmoothLoss::bilinear(l.at("scale").get<double>(), l.at("offset").get<double>(),
                                                 l.at("bound").get<double>()));
      } else if (kind == "logistic") {
        losses.emplace_back(SmoothLoss::logistic(l.at("normalizer").get<double>(), l.at("bound").get<double>()));
      } else if (kind == "linear_table") {
        losses.emplace_back(
            SmoothLoss::linear_table(std::make_shared<const TableLoss>(detail::table_from_json(l.at("table")))));
      } else {
        throw InvalidArgument("instance file: unknown loss kind '" + kind + "'");
      }
    }
    const auto& s = j.at("space");
    const auto kind = s.at("kind").get<std::string>();
    if (kind == "finite") {
      auto cls = s.contains("labels")
                     ? FiniteHypothesisClass::classifiers(s.at("num_features").get<std::size_t>(),
                                                          s.at("labels").get<std::vector<std::vector<int>>>())
                     : FiniteHypothesisClass::abstract(s.at("size").get<std::size_t>());
      return MdlInstance(std::move(ds), std::move(losses), std::move(cls));
    }
    if (kind != "convex") throw InvalidArgument("instance file: unknown space kind '" + kind + "'");
    const auto geometry = s.at("geometry").get<std::string>();
    const auto dim = s.at("dim").get<std::size_t>();
    const Dgf dgf = detail::parse_dgf(s.at("dgf").get<std::string>());
    if (geometry == "simplex") {
      return MdlInstance(std::move(ds), std::move(losses), ConvexParamSpace::simplex(dim, dgf));
    }
    if (geometry == "ball") {
      return MdlInstance(std::move(ds), std::move(losses), ConvexParamSpace::ball(dim, s.at("radius").get<double>(), dgf));
    }
    if (geometry == "box") {
      return MdlInstance(std::move(ds), std::move(losses),
                         ConvexParamSpace::box(s.at("lower").get<std::vector<double>>(),
                                               s.at("upper").get<std::vector<double>>(), dgf));
    }
    throw InvalidArgument("instance file: unknown geometry '" + geometry + "'");
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("instance file: ") + e.what());
  }
}

inline void write_instance(const MdlInstance& inst, std::ostream& out) { out << instance_to_json(inst).dump(2) << '\n'; }

inline MdlInstance read_instance(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("instance file: ") + e.what());
  }
  return instance_from_json(j);
}

inline Json solve_result_to_json(const SolveResult& r) {
  return Json{{"rounds", r.rounds},
              {"total_samples", r.total_samples},
              {"per_distribution_samples", r.per_distribution_samples},
              {"avg_min_action", r.avg_min_action},
              {"avg_max_action", r.avg_max_action},
              {"seed", r.seed}};
}

}  // namespace mdl
