// mdl: command-line front end of the experiment harness.
//
//   mdl solve            --config run.cfg --seeds 1,2,3 --out runs.csv
//   mdl sweep            --config sweep.cfg --format json
//   mdl lowerbound-sweep --set values=2,8 --set variant=random
//   mdl gdro | rmdl      ...
//   mdl generate         --config inst.cfg --seed 4 --out inst.json
//
// Exit codes: 0 ok, 2 config / invalid argument, 3 contract violation,
// 4 resource limit (including an exhausted sample budget).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdl/harness.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> seed, seeds, eps, delta, t_scale, out, format, algorithm, threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Flags& f, bool with_algorithm) {
  cmd->add_option("--config", f.config, "flat key = value config file");
  cmd->add_option("--seed", f.seed, "single run seed");
  cmd->add_option("--seeds", f.seeds, "comma-separated run seeds");
  cmd->add_option("--eps", f.eps, "target accuracy");
  cmd->add_option("--delta", f.delta, "failure probability");
  cmd->add_option("--t-scale", f.t_scale, "multiplier on the theoretical horizon");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_option("--set", f.sets, "override any config key: --set key=value");
  if (with_algorithm) cmd->add_option("--algorithm", f.algorithm, "mdl, gdro, rmdl or batch-erm");
}

mdl::ExperimentConfig resolve(const Flags& f) {
  mdl::ExperimentConfig c = f.config.empty() ? mdl::ExperimentConfig{} : mdl::load_config(f.config);
  auto apply = [&](const char* key, const std::optional<std::string>& v) {
    if (v) mdl::set_config_field(c, key, {*v});
  };
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw mdl::ConfigError(s, "--set expects key=value");
    mdl::set_config_field(c, s.substr(0, eq), {s.substr(eq + 1)});
  }
  apply("seed", f.seed);
  apply("seeds", f.seeds);
  apply("eps", f.eps);
  apply("delta", f.delta);
  apply("t_scale", f.t_scale);
  apply("out", f.out);
  apply("format", f.format);
  apply("algorithm", f.algorithm);
  apply("threads", f.threads);
  mdl::validate_config(c);
  return c;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw mdl::ConfigError("out", "cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw mdl::ConfigError("out", "write to '" + path + "' failed");
}

void emit_records(const mdl::ExperimentConfig& c, const std::vector<mdl::RunRecord>& records) {
  emit(c.out, [&](std::ostream& o) { mdl::write_records(records, c.format, o); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-distribution learning experiments"};
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "run one algorithm per seed (default mdl)");
  auto* sweep = app.add_subcommand("sweep", "samples-to-target across an axis (n, eps or size)");
  auto* lb = app.add_subcommand("lowerbound-sweep", "mdl vs batch-erm samples-to-target on the lower-bound family");
  auto* gdro = app.add_subcommand("gdro", "group DRO by stochastic mirror descent");
  auto* rmdl = app.add_subcommand("rmdl", "resampling MDL with a pooled-ERM comparator");
  auto* gen = app.add_subcommand("generate", "write the configured instance as JSON");
  add_common(solve, f, true);
  add_common(sweep, f, true);
  add_common(lb, f, false);
  add_common(gdro, f, false);
  add_common(rmdl, f, false);
  add_common(gen, f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      auto c = resolve(f);
      const auto inst = mdl::build_instance(c.instance, c.seeds.front());
      emit(c.out, [&](std::ostream& o) { mdl::write_instance(inst, o); });
      return 0;
    }
    auto c = resolve(f);
    if (gdro->parsed()) c.algorithm = "gdro";
    if (rmdl->parsed()) c.algorithm = "rmdl";
    if (sweep->parsed()) {
      emit_records(c, mdl::sweep(c));
    } else if (lb->parsed()) {
      emit_records(c, mdl::lowerbound_sweep(c));
    } else {
      emit_records(c, mdl::run_experiment(c));
    }
    return 0;
  } catch (const mdl::Error& e) {
    std::cerr << "mdl: " << e.what() << '\n';
    return mdl::exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "mdl: " << e.what() << '\n';
    return 1;
  }
}
