#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "commnash/engine.hpp"
#include "commnash/game.hpp"
#include "commnash/generators.hpp"
#include "json.hpp"

namespace commnash {

// ---------------------------------------------------------------------------
// Files. A game file is JSON: {"n": 3, "R": [[...], ...], "C": [[...], ...]}.
// A profile file is JSON: {"row": [...], "col": [...]}.
// ---------------------------------------------------------------------------

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BimatrixGame game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const BimatrixGame& game);
BimatrixGame load_game(const std::string& path);
void save_game(const BimatrixGame& game, const std::string& path);

StrategyProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const StrategyProfile& p);
StrategyProfile load_profile(const std::string& path);

nlohmann::json report_to_json(const RegretReport& r);

// Everything needed to re-execute a run, plus its transcript.
struct RunFile {
  std::string protocol;
  ChannelPolicy policy;
  Seeds seeds;
  ProtocolParams params;
  Transcript transcript;
};

nlohmann::json run_file_to_json(const RunFile& f);
RunFile run_file_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Sweeps.
// ---------------------------------------------------------------------------

enum class OutputFormat { kCsv, kJson };

struct SweepConfig {
  std::vector<std::string> protocols;
  std::vector<FamilySpec> families;
  std::vector<std::size_t> n_values;
  std::uint64_t base_seed = 0;
  std::size_t seed_count = 1;
  ProtocolParams params;
  std::string output_path;  // empty: no file
  OutputFormat format = OutputFormat::kCsv;

  // Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct SweepRecord {
  std::string protocol;
  std::string family;
  std::size_t n = 0;  // requested size parameter
  std::size_t game_size = 0;
  std::uint64_t seed = 0;
  double eps_ne = 0.0;
  double eps_wsne = 0.0;
  std::size_t bits_total = 0;
  std::size_t bits_row_to_col = 0;
  std::size_t bits_col_to_row = 0;
  std::string case_label;
  double wall_time_ms = 0.0;
  std::string error;  // empty on success
  bool within_guarantee = false;

  // Kept in memory for verification; not part of the CSV columns.
  StrategyProfile profile;
  Transcript transcript;
};

// Seeds handed to the two players for an instance seed.
Seeds player_seeds(std::uint64_t instance_seed);

// Runs one instance. Failures are captured in the record's error field.
SweepRecord run_instance(const std::string& protocol, const FamilySpec& family, std::size_t n,
                         std::uint64_t seed, const ProtocolParams& params);

// One record per (protocol, family, n, seed), sorted by those keys.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

struct ProtocolSummary {
  std::string protocol;
  std::size_t runs = 0;
  std::size_t errors = 0;
  std::size_t violations = 0;
  double max_eps_ne = 0.0;
  double mean_eps_ne = 0.0;
  double max_eps_wsne = 0.0;
  double mean_eps_wsne = 0.0;
  std::size_t max_bits = 0;
};

// Violations compare each record against its protocol's guarantee; errored
// records are counted separately.
std::vector<ProtocolSummary> summarize(const std::vector<SweepRecord>& records, const ProtocolParams& params);

// Fixed CSV columns, in order.
const std::vector<std::string>& csv_columns();
void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);
nlohmann::json records_to_json(const std::vector<SweepRecord>& records);
void write_records(const std::string& path, OutputFormat format, const std::vector<SweepRecord>& records);
void print_summary(std::ostream& os, const std::vector<ProtocolSummary>& summary);

}  // namespace commnash
