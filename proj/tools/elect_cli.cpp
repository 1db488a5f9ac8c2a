// Batch experiment runner for the randomized leader election simulator.
//
//   elect run    --family complete --n 1024 --protocol alg1 --trials 1000 --seed 42
//   elect mix    --family hypercube --dim 6
//   elect oracle exact --n 20 --s 5
//   elect oracle compare --bins 100 --rho 10 --trials 1000000
//
// Exit codes: 0 ok, 1 other failure, 2 config error, 3 model violation,
// 4 protocol-invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "elect/analysis/collision.hpp"
#include "elect/experiment.hpp"

namespace {

void add_family_options(CLI::App* cmd, elect::FamilyConfig& g) {
  cmd->add_option("--family", g.family, "complete|hypercube|cycle|random-regular")->capture_default_str();
  cmd->add_option("--n", g.n, "Node count (complete, cycle, random-regular)");
  cmd->add_option("--dim", g.dim, "Hypercube dimension");
  cmd->add_option("--d", g.degree, "Degree (random-regular)");
  cmd->add_flag("--no-lazy", g.no_lazy, "Clear the lazy-walk flag forced on bipartite families");
}

// Fill options of `cmd` from a flat key = value file. Options already given
// on the command line keep their value.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty() && item.parents != std::vector<std::string>{cmd->get_name()})
      throw elect::error(elect::errc::config, "`" + path + "`: unexpected section [" + item.parents.front() + "]");
    if (item.name.empty() || item.name == "config") continue;
    auto* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw elect::error(elect::errc::config, "`" + path + "`: unknown key `" + item.name + "`");
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw elect::error(elect::errc::config, "cannot open `" + path + "` for writing");
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized leader election simulator"};
  app.require_subcommand(1);

  elect::ExperimentConfig run_cfg;
  std::string config_path, report_path, trials_csv, dump_topology, dump_trace;
  auto* run = app.add_subcommand("run", "Run seeded election trials and write a report");
  run->add_option("--config", config_path, "Flat key = value file mirroring the flags; flags win");
  add_family_options(run, run_cfg.graph);
  run->add_option("--protocol", run_cfg.protocol, "alg1|alg2|naive")->capture_default_str();
  run->add_option("--model", run_cfg.model, "congest|local")->capture_default_str();
  run->add_option("--c", run_cfg.c, "CONGEST bit-budget factor")->capture_default_str();
  run->add_option("--trials", run_cfg.trials)->capture_default_str();
  run->add_option("--seed", run_cfg.seed, "Master seed")->capture_default_str();
  run->add_option("--tau-multiplier", run_cfg.tau_multiplier, "Scale the mixing time handed to alg2")->capture_default_str();
  run->add_option("--workers", run_cfg.workers)->capture_default_str();
  run->add_option("--out", report_path, "Report file (default: stdout)");
  run->add_option("--trials-csv", trials_csv, "Per-trial table");
  run->add_option("--dump-topology", dump_topology, "Write the topology in canonical form");
  run->add_option("--dump-trace", dump_trace, "Write the trace of trial 0");

  elect::FamilyConfig mix_graph;
  std::uint64_t mix_seed = 1;
  auto* mix = app.add_subcommand("mix", "Compute and verify the mixing time of a topology");
  add_family_options(mix, mix_graph);
  mix->add_option("--seed", mix_seed)->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Birthday-paradox collision oracles");
  oracle->require_subcommand(1);
  std::uint64_t on = 0, os_ = 0;
  auto* exact = oracle->add_subcommand("exact", "Exact probability that two s-subsets of an n-set are disjoint");
  exact->add_option("--n", on)->required();
  exact->add_option("--s", os_)->required();

  std::string dist = "uniform";
  std::size_t bins = 100, rho = 10, mc_trials = 100000;
  std::uint64_t mc_seed = 1;
  double skew = 0.5;
  auto* mc = oracle->add_subcommand("mc", "Monte-Carlo no-collision frequency for one distribution");
  mc->add_option("--dist", dist, "uniform|skew|point")->capture_default_str();
  auto* compare = oracle->add_subcommand("compare", "Uniform versus skewed no-collision frequency");
  for (auto* cmd : {mc, compare}) {
    cmd->add_option("--bins", bins)->capture_default_str();
    cmd->add_option("--rho", rho)->capture_default_str();
    cmd->add_option("--trials", mc_trials)->capture_default_str();
    cmd->add_option("--seed", mc_seed)->capture_default_str();
    cmd->add_option("--skew", skew, "Mass on the heavy bin")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
    if (*run && !config_path.empty()) apply_config_file(run, config_path);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const elect::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return elect::exit_code(e.code());
  }

  try {
    if (*run) {
      const auto result = elect::run_experiment(run_cfg);
      if (report_path.empty()) {
        elect::write_report(std::cout, result.report);
      } else {
        auto out = open_output(report_path);
        elect::write_report(out, result.report);
      }
      if (!trials_csv.empty()) {
        auto out = open_output(trials_csv);
        elect::write_trials_csv(out, result.report);
      }
      if (!dump_topology.empty()) {
        auto out = open_output(dump_topology);
        elect::write_topology(out, result.topology);
      }
      if (!dump_trace.empty()) {
        auto out = open_output(dump_trace);
        elect::write_trace(out, result.first_trace);
      }
    } else if (*mix) {
      elect::write_mix(std::cout, elect::run_mix(mix_graph, mix_seed));
    } else if (*exact) {
      const auto p = elect::no_common_referee_exact(on, os_);
      std::cout << "n = " << on << "\ns = " << os_ << "\n";
      std::cout << "exact = " << numerator(p) << "/" << denominator(p) << "\n";
      std::cout.precision(12);
      std::cout << "value = " << static_cast<double>(p) << "\n";
    } else if (*mc) {
      std::vector<double> p;
      if (dist == "uniform") p = elect::uniform_distribution(bins);
      else if (dist == "skew") p = elect::skewed_distribution(bins, skew);
      else if (dist == "point") p = elect::point_mass(bins);
      else throw elect::error(elect::errc::config, "invalid `dist`: expected uniform|skew|point, got '" + dist + "'");
      const auto est = elect::collision_mc(p, rho, mc_trials, mc_seed);
      std::cout.precision(8);
      std::cout << "dist = " << dist << "\nbins = " << bins << "\nrho = " << rho << "\ntrials = " << est.trials << "\n";
      std::cout << "no_collision_freq = " << est.frequency << "\nstd_error = " << est.std_error << "\n";
      std::cout << "sum_squares = " << elect::sum_squares(p) << "\n";
    } else if (*compare) {
      const auto uniform = elect::uniform_distribution(bins);
      const auto skewed = elect::skewed_distribution(bins, skew);
      const auto a = elect::collision_mc(uniform, rho, mc_trials, mc_seed);
      const auto b = elect::collision_mc(skewed, rho, mc_trials, mc_seed + 1);
      const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
      const double z = se > 0 ? (a.frequency - b.frequency) / se : 0.0;
      std::cout.precision(8);
      std::cout << "uniform_no_collision = " << a.frequency << "\nskewed_no_collision = " << b.frequency << "\n";
      std::cout << "difference_std_errors = " << z << "\n";
      std::cout << "dominance = " << (a.frequency > b.frequency ? "uniform" : "skewed") << "\n";
    }
  } catch (const elect::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return elect::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
