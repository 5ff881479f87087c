#include "commnash/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <tuple>

#include "commnash/protocols.hpp"
#include "commnash/random.hpp"

namespace commnash {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
  if (!out) throw FormatError("failed writing '" + path + "'");
}

const json& field(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains(name)) throw FormatError("missing field '" + name + "'");
  return j.at(name);
}

Matrix matrix_from_json(const json& j, std::size_t n, const std::string& name) {
  if (!j.is_array() || j.size() != n) {
    throw FormatError("field '" + name + "': expected " + std::to_string(n) + " rows");
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = j[i];
    const std::string where = name + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) {
      throw FormatError(where + ": expected " + std::to_string(n) + " numbers, got " +
                        (row.is_array() ? std::to_string(row.size()) : std::string("a non-array")));
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (!row[c].is_number()) throw FormatError(where + "[" + std::to_string(c) + "]: not a number");
      const double v = row[c].get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << where << "[" << c << "]: value " << v << " is outside [0,1]";
        throw FormatError(os.str());
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MixedStrategy strategy_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw FormatError("field '" + name + "': expected an array of probabilities");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw FormatError("field '" + name + "': non-numeric entry");
    v.push_back(x.get<double>());
  }
  try {
    return MixedStrategy(v);
  } catch (const std::invalid_argument& e) {
    throw FormatError("field '" + name + "': " + e.what());
  }
}

json params_to_json(const ProtocolParams& p) {
  json j = {{"delta", p.delta}, {"resample_cap", p.resample_cap}};
  if (p.alpha) j["alpha"] = *p.alpha;
  return j;
}

ProtocolParams params_from_json(const json& j) {
  ProtocolParams p;
  if (j.contains("alpha") && !j.at("alpha").is_null()) p.alpha = j.at("alpha").get<double>();
  if (j.contains("delta")) p.delta = j.at("delta").get<double>();
  if (j.contains("resample_cap")) p.resample_cap = j.at("resample_cap").get<int>();
  return p;
}

}  // namespace

BimatrixGame game_from_json(const json& j) {
  const json& n_field = field(j, "n");
  if (!n_field.is_number_integer() || n_field.get<long long>() < 1) {
    throw FormatError("field 'n': expected a positive integer");
  }
  const auto n = n_field.get<std::size_t>();
  return BimatrixGame(matrix_from_json(field(j, "R"), n, "R"), matrix_from_json(field(j, "C"), n, "C"));
}

json game_to_json(const BimatrixGame& game) {
  return {{"n", game.n()}, {"R", matrix_to_json(game.R())}, {"C", matrix_to_json(game.C())}};
}

BimatrixGame load_game(const std::string& path) {
  try {
    return game_from_json(parse_file(path));
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    throw FormatError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  }
}

void save_game(const BimatrixGame& game, const std::string& path) {
  write_file(path, game_to_json(game).dump(1) + "\n");
}

StrategyProfile profile_from_json(const json& j) {
  return {strategy_from_json(field(j, "row"), "row"), strategy_from_json(field(j, "col"), "col")};
}

json profile_to_json(const StrategyProfile& p) { return {{"row", p.row.to_vector()}, {"col", p.col.to_vector()}}; }

StrategyProfile load_profile(const std::string& path) {
  try {
    return profile_from_json(parse_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

json report_to_json(const RegretReport& r) {
  return {{"row_regret", r.row_regret}, {"col_regret", r.col_regret}, {"eps_ne", r.eps_ne}, {"eps_wsne", r.eps_wsne}};
}

json run_file_to_json(const RunFile& f) {
  return {{"protocol", f.protocol},
          {"policy", policy_to_json(f.policy)},
          {"seeds", {{"row", f.seeds.row}, {"col", f.seeds.col}}},
          {"params", params_to_json(f.params)},
          {"transcript", transcript_to_json(f.transcript)}};
}

RunFile run_file_from_json(const json& j) {
  try {
    RunFile f;
    f.protocol = field(j, "protocol").get<std::string>();
    f.policy = policy_from_json(field(j, "policy"));
    const json& seeds = field(j, "seeds");
    f.seeds = {field(seeds, "row").get<std::uint64_t>(), field(seeds, "col").get<std::uint64_t>()};
    f.params = params_from_json(field(j, "params"));
    f.transcript = transcript_from_json(field(j, "transcript"));
    return f;
  } catch (const json::exception& e) {
    throw FormatError(std::string("run file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("run file: ") + e.what());
  }
}

void SweepConfig::validate() const {
  if (protocols.empty()) throw std::invalid_argument("sweep needs at least one protocol");
  if (families.empty()) throw std::invalid_argument("sweep needs at least one game family");
  if (n_values.empty()) throw std::invalid_argument("sweep needs at least one n value");
  if (seed_count < 1) throw std::invalid_argument("sweep needs a seed count >= 1");
  for (const auto& p : protocols) find_protocol(p);
  for (const auto& f : families) {
    for (std::size_t n : n_values) {
      if (n < 1) throw std::invalid_argument("n values must be >= 1");
      family_game_size(f, n);
    }
  }
  params.validate();
}

SweepConfig sweep_config_from_json(const json& j) {
  try {
    SweepConfig c;
    for (const auto& p : field(j, "protocols")) c.protocols.push_back(p.get<std::string>());
    for (const auto& f : field(j, "families")) c.families.push_back(parse_family(f.get<std::string>()));
    for (const auto& n : field(j, "n_values")) c.n_values.push_back(n.get<std::size_t>());
    if (j.contains("seed")) c.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("count")) c.seed_count = j.at("count").get<std::size_t>();
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    if (j.contains("output")) {
      const json& out = j.at("output");
      if (out.contains("path")) c.output_path = out.at("path").get<std::string>();
      if (out.contains("format")) {
        const auto fmt = out.at("format").get<std::string>();
        if (fmt != "csv" && fmt != "json") throw FormatError("output format must be csv or json");
        c.format = fmt == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
      }
    }
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("sweep config: ") + e.what());
  }
}

Seeds player_seeds(std::uint64_t instance_seed) {
  return {mix_seed(2 * instance_seed + 1), mix_seed(2 * instance_seed + 2)};
}

SweepRecord run_instance(const std::string& protocol, const FamilySpec& family, std::size_t n,
                         std::uint64_t seed, const ProtocolParams& params) {
  SweepRecord rec;
  rec.protocol = protocol;
  rec.family = family.to_string();
  rec.n = n;
  rec.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const BimatrixGame game = make_family_game(family, n, seed);
    rec.game_size = game.n();
    const ProtocolOutcome out = run_protocol(game, protocol, default_policy(protocol), player_seeds(seed), params);
    rec.eps_ne = out.report.eps_ne;
    rec.eps_wsne = out.report.eps_wsne;
    rec.bits_row_to_col = out.transcript.bits_row_to_col;
    rec.bits_col_to_row = out.transcript.bits_col_to_row;
    rec.bits_total = out.transcript.bits_total();
    rec.case_label = out.case_label;
    rec.within_guarantee = guarantee_for(protocol, params).holds(out.report);
    rec.profile = out.profile;
    rec.transcript = out.transcript;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<SweepRecord> records;
  for (const auto& protocol : config.protocols) {
    for (const auto& family : config.families) {
      for (std::size_t n : config.n_values) {
        for (std::size_t i = 0; i < config.seed_count; ++i) {
          records.push_back(run_instance(protocol, family, n, config.base_seed + i, config.params));
        }
      }
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.protocol, a.family, a.n, a.seed) < std::tie(b.protocol, b.family, b.n, b.seed);
  });
  if (!config.output_path.empty()) write_records(config.output_path, config.format, records);
  return records;
}

std::vector<ProtocolSummary> summarize(const std::vector<SweepRecord>& records, const ProtocolParams& params) {
  std::map<std::string, ProtocolSummary> by_protocol;
  std::map<std::string, std::size_t> ok_runs;
  for (const auto& r : records) {
    ProtocolSummary& s = by_protocol[r.protocol];
    s.protocol = r.protocol;
    ++s.runs;
    if (!r.error.empty()) {
      ++s.errors;
      continue;
    }
    const Guarantee g = guarantee_for(r.protocol, params);
    RegretReport rep;
    rep.eps_ne = r.eps_ne;
    rep.eps_wsne = r.eps_wsne;
    if (!g.holds(rep)) ++s.violations;
    s.max_eps_ne = std::max(s.max_eps_ne, r.eps_ne);
    s.max_eps_wsne = std::max(s.max_eps_wsne, r.eps_wsne);
    s.mean_eps_ne += r.eps_ne;
    s.mean_eps_wsne += r.eps_wsne;
    s.max_bits = std::max(s.max_bits, r.bits_total);
    ++ok_runs[r.protocol];
  }
  std::vector<ProtocolSummary> out;
  for (auto& [name, s] : by_protocol) {
    if (const std::size_t ok = ok_runs[name]; ok > 0) {
      s.mean_eps_ne /= static_cast<double>(ok);
      s.mean_eps_wsne /= static_cast<double>(ok);
    }
    out.push_back(s);
  }
  return out;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "protocol", "family",   "n",          "game_size",        "seed",         "eps_ne",
      "eps_wsne", "bits_total", "bits_row_to_col", "bits_col_to_row", "case_label", "within_guarantee",
      "wall_time_ms", "error"};
  return cols;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  os << std::setprecision(17);
  for (const auto& r : records) {
    os << csv_escape(r.protocol) << ',' << csv_escape(r.family) << ',' << r.n << ',' << r.game_size << ','
       << r.seed << ',' << r.eps_ne << ',' << r.eps_wsne << ',' << r.bits_total << ',' << r.bits_row_to_col
       << ',' << r.bits_col_to_row << ',' << csv_escape(r.case_label) << ',' << (r.within_guarantee ? 1 : 0)
       << ',' << r.wall_time_ms << ',' << csv_escape(r.error) << "\n";
  }
}

json records_to_json(const std::vector<SweepRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    json j = {{"protocol", r.protocol},
              {"family", r.family},
              {"n", r.n},
              {"game_size", r.game_size},
              {"seed", r.seed},
              {"eps_ne", r.eps_ne},
              {"eps_wsne", r.eps_wsne},
              {"bits_total", r.bits_total},
              {"bits_row_to_col", r.bits_row_to_col},
              {"bits_col_to_row", r.bits_col_to_row},
              {"case_label", r.case_label},
              {"within_guarantee", r.within_guarantee},
              {"wall_time_ms", r.wall_time_ms},
              {"error", r.error}};
    if (r.error.empty()) j["profile"] = profile_to_json(r.profile);
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_records(const std::string& path, OutputFormat format, const std::vector<SweepRecord>& records) {
  if (format == OutputFormat::kJson) {
    write_file(path, records_to_json(records).dump(1) + "\n");
    return;
  }
  std::ostringstream os;
  write_csv(os, records);
  write_file(path, os.str());
}

void print_summary(std::ostream& os, const std::vector<ProtocolSummary>& summary) {
  os << std::left << std::setw(14) << "protocol" << std::right << std::setw(7) << "runs" << std::setw(8)
     << "errors" << std::setw(11) << "violations" << std::setw(12) << "max_eps_ne" << std::setw(13)
     << "mean_eps_ne" << std::setw(14) << "max_eps_wsne" << std::setw(10) << "max_bits" << "\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& s : summary) {
    os << std::left << std::setw(14) << s.protocol << std::right << std::setw(7) << s.runs << std::setw(8)
       << s.errors << std::setw(11) << s.violations << std::setw(12) << s.max_eps_ne << std::setw(13)
       << s.mean_eps_ne << std::setw(14) << s.max_eps_wsne << std::setw(10) << s.max_bits << "\n";
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace commnash
