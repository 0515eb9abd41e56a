#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include "mdl/format.hpp"
#include "mdl/instances/generators.hpp"
#include "mdl/io/json.hpp"

namespace mdl {

// Which instance a run works on.
//   random-agnostic   class_size, n, support (= features), seed
//   realizable        class_size, n, support, seed
//   lower-bound       w, n (= w * copies), gap, variant (base | random | x:i)
//   coin              n coins, gap, variant (base | random | i)
//   bilinear          dim, n, support, seed
//   logistic          dim, n, support, seed
//   two-group-logistic  support, seed (group 2 labelled by a different direction)
//   file              path to an instance document
struct InstanceSpec {
  std::string family = "random-agnostic";
  std::size_t n = 4;
  std::size_t class_size = 10;
  std::size_t support = 5;
  std::size_t w = 2;
  std::size_t dim = 2;
  double gap = 0.1;
  std::string variant = "base";
  std::string path;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  InstanceSpec instance;
  std::string algorithm = "mdl";  // mdl | gdro | rmdl | batch-erm
  double eps = 0.1;
  double delta = 0.1;
  double t_scale = 1.0;
  std::vector<std::uint64_t> seeds{1};
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> rounds;   // fixed T instead of mdl_horizon
  std::optional<std::uint64_t> batch_m;  // per-distribution batch for batch-erm
  std::string batch_mode = "mixed";      // mixed (LP over Delta(H)) | pure
  // sweeps
  std::string axis = "n";  // n | eps | size
  std::vector<double> values;
  std::uint64_t search_start = 16;
  std::uint32_t search_doublings = 20;
  // rmdl
  std::vector<std::size_t> train_sizes{1000, 100};
  std::size_t val_size = 50;
  std::size_t batch = 16;
  std::size_t adv_batch = 8;
  std::uint64_t rmdl_rounds = 2000;
  double lr = 0.5;
  std::optional<double> adv_rate;
  std::size_t steps = 1;
  // execution
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool timing = false;      // wall_ms stays 0 unless set, so outputs are reproducible
};

namespace detail {

inline std::string single(const std::string& key, const std::vector<std::string>& in) {
  if (in.size() != 1) throw ConfigError(key, "expected a single value");
  return in.front();
}

inline double to_double(const std::string& key, const std::string& s) {
  try {
    return parse_double(s);
  } catch (const Error&) {
    throw ConfigError(key, "not a number: '" + s + "'");
  }
}

inline std::uint64_t to_uint(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "not a non-negative integer: '" + s + "'");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(key, "not a boolean: '" + s + "'");
}

// Accepts both `k = 1,2,3` and `k = [1, 2, 3]`, or one comma-separated string.
inline std::vector<std::string> list_items(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& s : in) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
  }
  return out;
}

}  // namespace detail

// Sets one field from its raw text values. Unknown keys and malformed values
// raise ConfigError naming the key.
inline void set_config_field(ExperimentConfig& c, const std::string& key, const std::vector<std::string>& in) {
  using namespace detail;
  auto num = [&] { return to_double(key, single(key, in)); };
  auto uint = [&] { return to_uint(key, single(key, in)); };
  auto str = [&] { return single(key, in); };
  auto& s = c.instance;
  if (key == "family") s.family = str();
  else if (key == "n") s.n = uint();
  else if (key == "class_size") s.class_size = uint();
  else if (key == "support") s.support = uint();
  else if (key == "w") s.w = uint();
  else if (key == "dim") s.dim = uint();
  else if (key == "gap") s.gap = num();
  else if (key == "variant") s.variant = str();
  else if (key == "instance_file") { s.path = str(); s.family = "file"; }
  else if (key == "instance_seed") s.seed = uint();
  else if (key == "algorithm") c.algorithm = str();
  else if (key == "eps") c.eps = num();
  else if (key == "delta") c.delta = num();
  else if (key == "t_scale") c.t_scale = num();
  else if (key == "seed") c.seeds = {uint()};
  else if (key == "seeds") {
    c.seeds.clear();
    for (const auto& v : list_items(in)) c.seeds.push_back(to_uint(key, v));
  }
  else if (key == "out") c.out = str();
  else if (key == "format") c.format = str();
  else if (key == "rounds") c.rounds = uint();
  else if (key == "batch_m") c.batch_m = uint();
  else if (key == "batch_mode") c.batch_mode = str();
  else if (key == "axis") c.axis = str();
  else if (key == "values") {
    c.values.clear();
    for (const auto& v : list_items(in)) c.values.push_back(to_double(key, v));
  }
  else if (key == "search_start") c.search_start = uint();
  else if (key == "search_doublings") c.search_doublings = static_cast<std::uint32_t>(uint());
  else if (key == "train_sizes") {
    c.train_sizes.clear();
    for (const auto& v : list_items(in)) c.train_sizes.push_back(to_uint(key, v));
  }
  else if (key == "val_size") c.val_size = uint();
  else if (key == "batch") c.batch = uint();
  else if (key == "adv_batch") c.adv_batch = uint();
  else if (key == "rmdl_rounds") c.rmdl_rounds = uint();
  else if (key == "lr") c.lr = num();
  else if (key == "adv_rate") c.adv_rate = num();
  else if (key == "steps") c.steps = uint();
  else if (key == "threads") c.threads = uint();
  else if (key == "timing") c.timing = to_bool(key, str());
  else throw ConfigError(key, "unknown key");
}

inline void validate_config(const ExperimentConfig& c) {
  if (c.seeds.empty()) throw ConfigError("seeds", "must be nonempty");
  if (!(c.eps > 0.0 && c.eps < 1.0)) throw ConfigError("eps", "must lie in (0, 1)");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
  if (!(c.t_scale > 0.0)) throw ConfigError("t_scale", "must be positive");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format", "must be csv or json");
  if (c.algorithm != "mdl" && c.algorithm != "gdro" && c.algorithm != "rmdl" && c.algorithm != "batch-erm") {
    throw ConfigError("algorithm", "must be one of mdl, gdro, rmdl, batch-erm");
  }
  if (c.batch_mode != "mixed" && c.batch_mode != "pure") throw ConfigError("batch_mode", "must be mixed or pure");
  if (c.axis != "n" && c.axis != "eps" && c.axis != "size") throw ConfigError("axis", "must be n, eps or size");
  if (c.rounds && *c.rounds == 0) throw ConfigError("rounds", "must be >= 1");
  if (c.batch_m && *c.batch_m == 0) throw ConfigError("batch_m", "must be >= 1");
  if (c.search_start == 0) throw ConfigError("search_start", "must be >= 1");
  if (c.batch == 0) throw ConfigError("batch", "must be >= 1");
  if (c.adv_batch == 0) throw ConfigError("adv_batch", "must be >= 1");
  if (c.steps == 0) throw ConfigError("steps", "must be >= 1");
  if (c.val_size == 0) throw ConfigError("val_size", "must be >= 1");
  if (!(c.lr > 0.0)) throw ConfigError("lr", "must be positive");
  for (auto t : c.train_sizes) {
    if (t == 0) throw ConfigError("train_sizes", "every split must be nonempty");
  }
}

// Flat `key = value` document ('#' comments, lists as a,b,c or [a, b, c]).
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError("config", e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--" || !item.parents.empty()) {
      throw ConfigError(item.parents.empty() ? item.name : item.parents.front(), "sections are not supported");
    }
    set_config_field(c, item.name, item.inputs);
  }
  validate_config(c);
  return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_config(in);
}

// Writes the instance part of a config back out in the same format.
inline std::string instance_spec_to_config(const InstanceSpec& s) {
  std::ostringstream o;
  o << "family = " << s.family << '\n'
    << "n = " << s.n << '\n'
    << "class_size = " << s.class_size << '\n'
    << "support = " << s.support << '\n'
    << "w = " << s.w << '\n'
    << "dim = " << s.dim << '\n'
    << "gap = " << format_double(s.gap) << '\n'
    << "variant = " << s.variant << '\n'
    << "instance_seed = " << s.seed << '\n';
  if (!s.path.empty()) o << "instance_file = \"" << s.path << "\"\n";
  return o.str();
}

namespace detail {

inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("variant", "expected base, random or x:i");
  return {to_uint("variant", s.substr(0, colon)), to_uint("variant", s.substr(colon + 1))};
}

}  // namespace detail

// Builds the instance. `run_seed` only matters for variant = random, where
// the problem variant is drawn per run (base w.p. 1/2, else a uniform
// perturbation).
inline MdlInstance build_instance(const InstanceSpec& s, std::uint64_t run_seed = 0) {
  if (s.family == "random-agnostic") return make_random_agnostic(s.class_size, s.n, s.support, s.seed);
  if (s.family == "realizable") return make_realizable(s.class_size, s.n, s.support, s.seed);
  if (s.family == "lower-bound" || s.family == "coin") {
    const std::size_t w = s.family == "coin" ? 1 : s.w;
    if (w == 0 || s.n % w != 0) throw ConfigError("n", "must be a multiple of w for the lower-bound family");
    const std::size_t copies = s.n / w;
    LowerBoundVariant v = LowerBoundVariant::base();
    if (s.variant == "random") {
      Rng rng(derive_seed(run_seed, 0x1b));
      v = sample_lower_bound_variant(w, copies, rng);
    } else if (s.variant != "base") {
      if (s.family == "coin") {
        v = LowerBoundVariant::at(0, detail::to_uint("variant", s.variant));
      } else {
        const auto [x, i] = detail::parse_pair(s.variant);
        v = LowerBoundVariant::at(x, i);
      }
    }
    return make_lower_bound_family(w, copies, s.gap, v, s.seed);
  }
  if (s.family == "bilinear") return make_convex_gdro(s.dim, s.n, ConvexFamily::bilinear, s.seed, s.support);
  if (s.family == "logistic") return make_convex_gdro(s.dim, s.n, ConvexFamily::logistic, s.seed, s.support);
  if (s.family == "two-group-logistic") return make_two_group_logistic(s.seed, s.support);
  if (s.family == "file") {
    std::ifstream in(s.path);
    if (!in) throw ConfigError("instance_file", "cannot open '" + s.path + "'");
    return read_instance(in);
  }
  throw ConfigError("family", "unknown instance family '" + s.family + "'");
}

// Size column of a run record: |H| for finite classes, dim(Theta) otherwise.
inline std::size_t instance_size(const MdlInstance& inst) { return inst.learner_dimension(); }

}  // namespace mdl
