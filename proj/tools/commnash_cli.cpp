// Command-line front end: sweeps, instance generation, profile evaluation and
// transcript replay.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commnash/harness.hpp"
#include "commnash/protocols.hpp"

namespace {

using namespace commnash;

struct RunOptions {
  std::string config_path;
  std::vector<std::string> protocols;
  std::vector<std::string> families;
  std::vector<std::size_t> n_values;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  double delta = 0.05;
  double alpha = 0.0;
  int resample_cap = 100;
  std::string out;
  std::string format = "csv";

  // Single-game mode.
  std::string game_path;
  std::string policy;
  std::size_t budget = 0;
  std::uint64_t row_seed = 0;
  std::uint64_t col_seed = 0;
};

ProtocolParams params_from(const RunOptions& o, const CLI::App& cmd) {
  ProtocolParams p;
  p.delta = o.delta;
  p.resample_cap = o.resample_cap;
  if (cmd.count("--alpha") > 0) p.alpha = o.alpha;
  return p;
}

int run_single_game(const RunOptions& o, const CLI::App& cmd) {
  if (o.protocols.size() != 1) throw std::invalid_argument("--game needs exactly one --protocol");
  const BimatrixGame game = load_game(o.game_path);

  RunFile run;
  run.protocol = o.protocols.front();
  run.policy = o.policy.empty() ? default_policy(run.protocol) : policy_from_string(o.policy);
  if (cmd.count("--budget") > 0) run.policy.budget_bits = o.budget;
  run.seeds = cmd.count("--row-seed") + cmd.count("--col-seed") > 0 ? Seeds{o.row_seed, o.col_seed}
                                                                    : player_seeds(o.seed);
  run.params = params_from(o, cmd);

  const ProtocolOutcome out = run_protocol(game, run.protocol, run.policy, run.seeds, run.params);
  run.transcript = out.transcript;
  const bool ok = guarantee_for(run.protocol, run.params).holds(out.report);

  const nlohmann::json result = {{"profile", profile_to_json(out.profile)},
                                 {"report", report_to_json(out.report)},
                                 {"case_label", out.case_label},
                                 {"within_guarantee", ok},
                                 {"run", run_file_to_json(run)}};
  if (o.out.empty()) {
    std::cout << result.dump(1) << "\n";
  } else {
    std::ofstream(o.out) << result.dump(1) << "\n";
    std::cout << "eps_ne=" << out.report.eps_ne << " eps_wsne=" << out.report.eps_wsne
              << " bits=" << out.transcript.bits_total() << " case=" << out.case_label << "\n";
  }
  return ok ? 0 : 1;
}

int run_command(const RunOptions& o, const CLI::App& cmd) {
  if (!o.game_path.empty()) return run_single_game(o, cmd);

  SweepConfig config;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw FormatError("cannot open '" + o.config_path + "'");
    config = sweep_config_from_json(nlohmann::json::parse(in));
  }
  // Flags override the config file.
  if (!o.protocols.empty()) config.protocols = o.protocols;
  if (!o.families.empty()) {
    config.families.clear();
    for (const auto& f : o.families) config.families.push_back(parse_family(f));
  }
  if (!o.n_values.empty()) config.n_values = o.n_values;
  if (cmd.count("--seed") > 0) config.base_seed = o.seed;
  if (cmd.count("--count") > 0) config.seed_count = o.count;
  if (cmd.count("--delta") > 0) config.params.delta = o.delta;
  if (cmd.count("--alpha") > 0) config.params.alpha = o.alpha;
  if (cmd.count("--resample-cap") > 0) config.params.resample_cap = o.resample_cap;
  if (!o.out.empty()) config.output_path = o.out;
  if (cmd.count("--format") > 0) config.format = o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (config.families.empty()) config.families.push_back(parse_family("random"));

  const std::vector<SweepRecord> records = run_sweep(config);
  const std::vector<ProtocolSummary> summary = summarize(records, config.params);
  print_summary(std::cout, summary);
  if (config.output_path.empty()) write_csv(std::cout, records);

  bool failed = false;
  for (const auto& s : summary) failed = failed || s.errors > 0 || s.violations > 0;
  for (const auto& r : records) {
    if (r.error.empty()) continue;
    std::cerr << r.protocol << " " << r.family << " n=" << r.n << " seed=" << r.seed << ": " << r.error << "\n";
  }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication-bounded approximate Nash equilibrium protocols"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a protocol sweep, or one protocol on a game file");
  run_cmd->add_option("--config", run.config_path, "Sweep config (JSON)")->check(CLI::ExistingFile);
  run_cmd->add_option("--protocol", run.protocols, "no-comm | dmp-oneway | polylog-ne | polylog-wsne");
  run_cmd->add_option("--family", run.families, "Game family, e.g. random or indicator:ell=3");
  run_cmd->add_option("--n", run.n_values, "Size parameter(s)");
  run_cmd->add_option("--seed", run.seed, "Base instance seed");
  run_cmd->add_option("--count", run.count, "Instances per (protocol, family, n)");
  run_cmd->add_option("--delta", run.delta, "Sampling slack");
  run_cmd->add_option("--alpha", run.alpha, "Case threshold (protocol default if omitted)");
  run_cmd->add_option("--resample-cap", run.resample_cap, "Max resampling attempts");
  run_cmd->add_option("--out", run.out, "Output file");
  run_cmd->add_option("--format", run.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--game", run.game_path, "Run on this game file instead of a sweep")->check(CLI::ExistingFile);
  run_cmd->add_option("--policy", run.policy, "none | one-way:row | one-way:col | two-way");
  run_cmd->add_option("--budget", run.budget, "Per-direction bit budget");
  run_cmd->add_option("--row-seed", run.row_seed, "Row player seed (single-game mode)");
  run_cmd->add_option("--col-seed", run.col_seed, "Column player seed (single-game mode)");

  std::string gen_family = "random";
  std::size_t gen_n = 8;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Write a generated game to a game file");
  gen_cmd->add_option("--family", gen_family, "Game family");
  gen_cmd->add_option("--n", gen_n, "Size parameter");
  gen_cmd->add_option("--seed", gen_seed, "Seed");
  gen_cmd->add_option("--out", gen_out, "Output file (stdout if omitted)");

  std::string eval_game;
  std::string eval_profile;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Regret report for a game file and a profile file");
  eval_cmd->add_option("--game", eval_game)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--profile", eval_profile)->required()->check(CLI::ExistingFile);

  std::string replay_game;
  std::string replay_run;
  CLI::App* replay_cmd = app.add_subcommand("replay", "Re-execute a recorded run and compare transcripts");
  replay_cmd->add_option("--game", replay_game)->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--transcript", replay_run, "Run file written by 'run --game'")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return run_command(run, *run_cmd);

    if (gen_cmd->parsed()) {
      const BimatrixGame game = make_family_game(parse_family(gen_family), gen_n, gen_seed);
      if (gen_out.empty()) {
        std::cout << game_to_json(game).dump(1) << "\n";
      } else {
        save_game(game, gen_out);
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      const RegretReport rep = regret_report(load_game(eval_game), load_profile(eval_profile));
      std::cout << report_to_json(rep).dump(1) << "\n";
      return 0;
    }

    if (replay_cmd->parsed()) {
      std::ifstream in(replay_run);
      nlohmann::json j = nlohmann::json::parse(in);
      // Accept either a bare run file or the output of 'run --game'.
      const RunFile run_file = run_file_from_json(j.contains("run") ? j.at("run") : j);
      const bool same = replay(run_file.transcript, load_game(replay_game), find_protocol(run_file.protocol),
                               run_file.policy, run_file.seeds, run_file.params);
      std::cout << (same ? "match" : "mismatch") << "\n";
      return same ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
