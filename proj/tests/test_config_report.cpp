#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "heraldopt/report.hpp"

using namespace heraldopt;

namespace {

const char* kMinimalConfig = R"({
  "circuit": {"num_modes": 2, "cutoff": 12},
  "mode": "fixed",
  "patterns": [
    {"pattern": [2], "target": {"family": "cat", "alpha": 1.2, "squeeze": 0.0, "parity": "even"}}
  ],
  "optimizer": {"hops": 1, "restarts": 1, "seed": 5}
})";

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("heraldopt_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("run config parses and validates") {
  const RunConfig cfg = parse_run_config(kMinimalConfig);
  CHECK(cfg.circuit.num_modes == 2);
  CHECK(cfg.circuit.cutoff == 12);
  CHECK(cfg.mode == "fixed");
  CHECK(cfg.assignments.size() == 1);
  CHECK(cfg.assignments[0].first == MeasurementPattern{2});
  CHECK(cfg.hopping.seed == 5);
  CHECK(cfg.loss.alpha == 1.0);
  CHECK(cfg.loss.epsilon == 2e-2);
  CHECK(cfg.loss.delta == 1e-72);
  CHECK(cfg.loss.lambda == 1e4);
}

TEST_CASE("unknown keys are rejected anywhere in the document") {
  CHECK_THROWS_AS((void)parse_run_config(R"({"circuit": {"num_modes":2,"cutoff":12},
    "mode":"fixed","patterns":[{"pattern":[2],"target":{"family":"cat"}}],
    "bogus": 1})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_run_config(R"({"circuit": {"num_modes":2,"cutoff":12,"zzz":0},
    "mode":"fixed","patterns":[{"pattern":[2],"target":{"family":"cat"}}]})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_run_config(R"({"circuit": {"num_modes":2,"cutoff":12},
    "mode":"fixed","patterns":[{"pattern":[2],"target":{"family":"cat","oops":3}}]})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_run_config("not json at all"), ConfigError);
  // wrong pattern length and cutoff violations
  CHECK_THROWS_AS((void)parse_run_config(R"({"circuit": {"num_modes":3,"cutoff":12},
    "mode":"fixed","patterns":[{"pattern":[2],"target":{"family":"cat"}}]})"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_run_config(R"({"circuit": {"num_modes":2,"cutoff":12},
    "mode":"fixed","patterns":[{"pattern":[99],"target":{"family":"cat"}}]})"),
                  ConfigError);
}

TEST_CASE("target specs build and round-trip through JSON") {
  for (const char* text : {
           R"({"family":"cat","alpha":2.0,"squeeze":0.3,"parity":"odd"})",
           R"({"family":"gkp_core","mu":1,"n_max":4,"envelope_db":10.0})",
           R"({"family":"binomial","N":2,"S":3,"mu":0})",
           R"({"family":"cubic","gamma":-0.2,"r":-0.7,"alpha":1.25})",
       }) {
    const TargetSpec spec = TargetSpec::parse_json(text);
    const TargetSpec again = TargetSpec::parse_json(spec.json());
    CHECK(spec.json() == again.json());
    const TargetState t = spec.build(40);
    CHECK(t.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("config hash is deterministic and sensitive to content") {
  const RunConfig a = parse_run_config(kMinimalConfig);
  const RunConfig b = parse_run_config(kMinimalConfig);
  CHECK(fnv1a_hex(a.canonical_json()) == fnv1a_hex(b.canonical_json()));
  RunConfig c = a;
  c.hopping.seed = 6;
  CHECK(fnv1a_hex(a.canonical_json()) != fnv1a_hex(c.canonical_json()));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");  // FNV-1a offset basis
}

TEST_CASE("checkpoint round trip") {
  TempDir tmp;
  Checkpoint ck;
  ck.circuit.num_modes = 2;
  ck.circuit.cutoff = 12;
  ck.parameters.assign(CircuitParams::vector_size(2), 0.0);
  ck.parameters[0] = 0.9;
  ck.seed = 42;
  ck.iteration = 7;
  ck.config_hash = "deadbeef";
  ck.assignments.emplace_back(MeasurementPattern{2},
                              TargetSpec::parse_json(R"({"family":"binomial","N":2,"S":2,"mu":0})"));
  const std::string path = (tmp.path / "ck.json").string();
  write_checkpoint(path, ck);
  const Checkpoint back = read_checkpoint(path);
  CHECK(back.circuit.num_modes == 2);
  CHECK(back.parameters == ck.parameters);
  CHECK(back.seed == 42);
  CHECK(back.iteration == 7);
  CHECK(back.config_hash == "deadbeef");
  CHECK(back.assignments.size() == 1);
  CHECK(back.assignments[0].first == MeasurementPattern{2});
  CHECK(back.assignments[0].second.json() == ck.assignments[0].second.json());
}

TEST_CASE("report round trip: re-scoring the stored parameters reproduces p/F") {
  TempDir tmp;
  RunConfig cfg = parse_run_config(kMinimalConfig);
  cfg.output_dir = tmp.path.string();

  // run a tiny real optimization so the report carries genuine scores
  const auto target = std::make_shared<TargetState>(cfg.assignments[0].second.build(12));
  std::vector<PatternTarget> pt{{cfg.assignments[0].first, target}};
  BasinHopOptions hop = cfg.hopping;
  hop.hops = 2;
  hop.local.max_iters = 40;
  const OptResult result = run_fixed(cfg.circuit.search_space(), pt, cfg.loss, hop);

  const std::string path = (tmp.path / "report.json").string();
  write_run_report(path, cfg, result, 1.25);
  const ReportData rep = read_run_report(path);
  CHECK(rep.num_modes == 2);
  CHECK(rep.cutoff == 12);
  CHECK(rep.seed == result.seed);
  CHECK(rep.parameters == result.best_params);

  const CircuitParams params = CircuitParams::from_vector(2, rep.parameters);
  const ScoredCircuit sc = score_patterns(params, pt, 12);
  for (std::size_t i = 0; i < sc.scores.size(); ++i) {
    CHECK(std::abs(sc.scores[i].probability - rep.scores[i].probability) < 1e-9);
    CHECK(std::abs(sc.scores[i].fidelity - rep.scores[i].fidelity) < 1e-9);
  }
}

TEST_CASE("CSV writers emit the documented headers and row counts") {
  TempDir tmp;
  std::vector<LossSweepRow> rows{{"gkp1_A4", {4}, 0.99, 0.055, 0.93},
                                 {"gkp1_A4", {4}, 0.90, 0.053, 0.60}};
  const std::string sweep = (tmp.path / "sweep.csv").string();
  write_loss_sweep_csv(sweep, rows);
  std::ifstream in(sweep);
  std::string line;
  std::getline(in, line);
  CHECK(line == "target,pattern,eta,p,fidelity");
  int count = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++count;
  CHECK(count == 2);

  WignerGrid grid;
  grid.x_axis = Eigen::VectorXd::LinSpaced(3, -1, 1);
  grid.p_axis = Eigen::VectorXd::LinSpaced(2, 0, 1);
  grid.values = Eigen::MatrixXd::Zero(3, 2);
  const std::string wig = (tmp.path / "wigner.csv").string();
  write_wigner_csv(wig, grid);
  std::ifstream win(wig);
  std::getline(win, line);
  CHECK(line == "x,p,W");
  count = 0;
  while (std::getline(win, line))
    if (!line.empty()) ++count;
  CHECK(count == 6);
}
