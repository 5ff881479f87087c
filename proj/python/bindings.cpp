#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commnash/game.hpp"
#include "commnash/generators.hpp"
#include "commnash/harness.hpp"
#include "commnash/protocols.hpp"
#include "commnash/zero_sum.hpp"

namespace py = pybind11;
using namespace commnash;

namespace {

ProtocolParams make_params(double delta, std::optional<double> alpha, int resample_cap) {
  ProtocolParams p;
  p.delta = delta;
  p.alpha = alpha;
  p.resample_cap = resample_cap;
  return p;
}

py::dict record_to_dict(const SweepRecord& r) {
  py::dict d;
  d["protocol"] = r.protocol;
  d["family"] = r.family;
  d["n"] = r.n;
  d["game_size"] = r.game_size;
  d["seed"] = r.seed;
  d["eps_ne"] = r.eps_ne;
  d["eps_wsne"] = r.eps_wsne;
  d["bits_total"] = r.bits_total;
  d["bits_row_to_col"] = r.bits_row_to_col;
  d["bits_col_to_row"] = r.bits_col_to_row;
  d["case_label"] = r.case_label;
  d["within_guarantee"] = r.within_guarantee;
  d["wall_time_ms"] = r.wall_time_ms;
  d["error"] = r.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_commnash, m) {
  m.doc() = "Communication-bounded approximate Nash equilibria for bimatrix games";

  auto protocol_error = py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<IncompatiblePolicyError>(m, "IncompatiblePolicyError", protocol_error.ptr());
  auto channel_error = py::register_exception<ChannelViolationError>(m, "ChannelViolationError", protocol_error.ptr());
  py::register_exception<BudgetExceededError>(m, "BudgetExceededError", channel_error.ptr());
  py::register_exception<SamplingError>(m, "SamplingError", protocol_error.ptr());
  py::register_exception<ZeroSumError>(m, "ZeroSumError", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.attr("ALPHA_NE") = kAlphaNe;
  m.attr("ALPHA_WSNE") = kAlphaWsne;

  py::enum_<Role>(m, "Role").value("ROW", Role::kRow).value("COLUMN", Role::kColumn);

  py::class_<MixedStrategy>(m, "MixedStrategy")
      .def(py::init<const Vector&>(), py::arg("probs"))
      .def_static("pure", &MixedStrategy::pure, py::arg("n"), py::arg("index"))
      .def_static("uniform", &MixedStrategy::uniform, py::arg("n"))
      .def_property_readonly("probs", &MixedStrategy::probs)
      .def("support", &MixedStrategy::support)
      .def("__len__", &MixedStrategy::size)
      .def("__getitem__", [](const MixedStrategy& s, std::size_t i) {
        if (i >= s.size()) throw py::index_error();
        return s[i];
      })
      .def("__eq__", &MixedStrategy::operator==)
      .def("__repr__", [](const MixedStrategy& s) {
        return "MixedStrategy(" + py::repr(py::cast(s.to_vector())).cast<std::string>() + ")";
      });

  py::class_<BimatrixGame>(m, "BimatrixGame")
      .def(py::init<Matrix, Matrix>(), py::arg("R"), py::arg("C"))
      .def_property_readonly("n", &BimatrixGame::n)
      .def_property_readonly("R", &BimatrixGame::R)
      .def_property_readonly("C", &BimatrixGame::C);

  py::class_<RegretReport>(m, "RegretReport")
      .def_readonly("row_regret", &RegretReport::row_regret)
      .def_readonly("col_regret", &RegretReport::col_regret)
      .def_readonly("eps_ne", &RegretReport::eps_ne)
      .def_readonly("eps_wsne", &RegretReport::eps_wsne)
      .def("__repr__", [](const RegretReport& r) {
        return "RegretReport(eps_ne=" + std::to_string(r.eps_ne) + ", eps_wsne=" + std::to_string(r.eps_wsne) + ")";
      });

  m.def("payoff",
        [](const BimatrixGame& g, const MixedStrategy& x, const MixedStrategy& y, Role who) {
          return payoff(g, {x, y}, who);
        },
        py::arg("game"), py::arg("row"), py::arg("col"), py::arg("who") = Role::kRow);
  m.def("best_response",
        [](const Matrix& payoffs, const MixedStrategy& opponent, Role who) {
          const BestResponse br = best_response(payoffs, opponent, who);
          return py::make_tuple(br.index, br.value);
        },
        py::arg("payoffs"), py::arg("opponent"), py::arg("who") = Role::kRow,
        "Lowest-index best pure reply and its value.");
  m.def("regret_report",
        [](const BimatrixGame& g, const MixedStrategy& x, const MixedStrategy& y) { return regret_report(g, {x, y}); },
        py::arg("game"), py::arg("row"), py::arg("col"));
  m.def("total_variation", &total_variation, py::arg("a"), py::arg("b"));

  py::class_<ZeroSumSolution>(m, "ZeroSumSolution")
      .def_readonly("max_strategy", &ZeroSumSolution::max_strategy)
      .def_readonly("min_strategy", &ZeroSumSolution::min_strategy)
      .def_readonly("value", &ZeroSumSolution::value)
      .def_readonly("certificate_gap", &ZeroSumSolution::certificate_gap);
  m.def("solve_zero_sum", &solve_zero_sum, py::arg("A"), py::arg("tolerance") = kZeroSumTolerance);

  py::class_<ProtocolOutcome>(m, "ProtocolOutcome")
      .def_property_readonly("row", [](const ProtocolOutcome& o) { return o.profile.row; })
      .def_property_readonly("col", [](const ProtocolOutcome& o) { return o.profile.col; })
      .def_readonly("report", &ProtocolOutcome::report)
      .def_readonly("case_label", &ProtocolOutcome::case_label)
      .def_property_readonly("bits_row_to_col", [](const ProtocolOutcome& o) { return o.transcript.bits_row_to_col; })
      .def_property_readonly("bits_col_to_row", [](const ProtocolOutcome& o) { return o.transcript.bits_col_to_row; })
      .def_property_readonly("bits_total", [](const ProtocolOutcome& o) { return o.transcript.bits_total(); })
      .def_property_readonly("transcript_json",
                             [](const ProtocolOutcome& o) { return transcript_to_json(o.transcript).dump(); });

  m.def("protocols", [] {
    std::vector<std::string> ids;
    for (const auto& p : builtin_protocols()) ids.push_back(p.id);
    return ids;
  });
  m.def(
      "run_protocol",
      [](const BimatrixGame& g, const std::string& protocol, std::optional<std::string> policy,
         std::uint64_t row_seed, std::uint64_t col_seed, double delta, std::optional<double> alpha,
         int resample_cap) {
        const ChannelPolicy pol = policy ? policy_from_string(*policy) : default_policy(protocol);
        return run_protocol(g, protocol, pol, {row_seed, col_seed}, make_params(delta, alpha, resample_cap));
      },
      py::arg("game"), py::arg("protocol"), py::arg("policy") = py::none(), py::arg("row_seed") = 0,
      py::arg("col_seed") = 0, py::arg("delta") = 0.05, py::arg("alpha") = py::none(), py::arg("resample_cap") = 100);
  m.def(
      "replay",
      [](const BimatrixGame& g, const std::string& protocol, const std::string& transcript_json,
         std::optional<std::string> policy, std::uint64_t row_seed, std::uint64_t col_seed, double delta,
         std::optional<double> alpha, int resample_cap) {
        const ChannelPolicy pol = policy ? policy_from_string(*policy) : default_policy(protocol);
        return replay(transcript_from_json(nlohmann::json::parse(transcript_json)), g, find_protocol(protocol), pol,
                      {row_seed, col_seed}, make_params(delta, alpha, resample_cap));
      },
      py::arg("game"), py::arg("protocol"), py::arg("transcript_json"), py::arg("policy") = py::none(),
      py::arg("row_seed") = 0, py::arg("col_seed") = 0, py::arg("delta") = 0.05, py::arg("alpha") = py::none(),
      py::arg("resample_cap") = 100);
  m.def("sample_size", &sample_size, py::arg("n"), py::arg("delta"));

  m.def("random_game", &random_game, py::arg("n"), py::arg("seed"));
  m.def("make_mn", [](std::size_t n) { return make_mn(n).dense(); }, py::arg("n"),
        "Dense 0/1 matrix with one row per floor(sqrt n)-subset of the n columns.");
  m.def("make_column_indicator", &make_column_indicator, py::arg("n"), py::arg("ell"));
  m.def("make_wsne_oneway_game", &make_wsne_oneway_game, py::arg("j"));
  m.def(
      "make_family_game",
      [](const std::string& family, std::size_t n, std::uint64_t seed) {
        return make_family_game(parse_family(family), n, seed);
      },
      py::arg("family"), py::arg("n"), py::arg("seed") = 0);
  m.def(
      "lemma1_worst_column",
      [](std::size_t n, const MixedStrategy& x) {
        const WorstColumn w = lemma1_worst_column(make_mn(n), x);
        return py::make_tuple(w.column, w.phi);
      },
      py::arg("n"), py::arg("x"), "Column of M_n least likely to hold a 1 under x, and that probability.");

  m.def("load_game", &load_game, py::arg("path"));
  m.def("save_game", &save_game, py::arg("game"), py::arg("path"));

  m.def(
      "run_sweep",
      [](const std::vector<std::string>& protocols, const std::vector<std::string>& families,
         const std::vector<std::size_t>& n_values, std::uint64_t seed, std::size_t count, double delta,
         std::optional<double> alpha, int resample_cap) {
        SweepConfig c;
        c.protocols = protocols;
        for (const auto& f : families) c.families.push_back(parse_family(f));
        c.n_values = n_values;
        c.base_seed = seed;
        c.seed_count = count;
        c.params = make_params(delta, alpha, resample_cap);
        std::vector<SweepRecord> records;
        {
          py::gil_scoped_release release;
          records = run_sweep(c);
        }
        py::list out;
        for (const auto& r : records) out.append(record_to_dict(r));
        return out;
      },
      py::arg("protocols"), py::arg("families") = std::vector<std::string>{"random"}, py::arg("n_values"),
      py::arg("seed") = 0, py::arg("count") = 1, py::arg("delta") = 0.05, py::arg("alpha") = py::none(),
      py::arg("resample_cap") = 100, "Runs a sweep and returns one dict per run.");
}
