// heraldopt CLI: optimize | validate | loss-sweep | wigner | targets
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numeric failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "heraldopt/noise.hpp"
#include "heraldopt/report.hpp"

using namespace heraldopt;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int thread_override() {
  const char* env = std::getenv("HERALDOPT_THREADS");
  if (!env) return 0;
  const int n = std::atoi(env);
  return n > 0 ? n : 0;
}

std::vector<PatternTarget> build_assignments(
    const std::vector<std::pair<MeasurementPattern, TargetSpec>>& assignments, int cutoff) {
  std::map<std::string, std::shared_ptr<const TargetState>> cache;
  std::vector<PatternTarget> out;
  for (const auto& [pattern, spec] : assignments) {
    const std::string key = spec.json();
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_shared<TargetState>(spec.build(cutoff))).first;
    out.push_back({pattern, it->second});
  }
  return out;
}

void print_scores(const OptResult& result) {
  for (const auto& s : result.scores)
    std::printf("  %-10s -> %-28s p=%8.5f%%  F=%.6f  phi*=%.6f\n",
                pattern_to_string(s.pattern).c_str(), s.target_label.c_str(),
                100.0 * s.probability, s.fidelity, s.phi_star);
  std::printf("  aggregate probability %.5f%%   loss %.6f   leakage %.3e\n",
              100.0 * result.aggregate_probability, result.loss_value, result.leakage);
}

int cmd_optimize(const std::string& config_path) {
  RunConfig cfg = load_run_config(config_path);
  if (const int nt = thread_override(); nt > 0) cfg.hopping.threads = nt;

  if (!cfg.resume_from.empty()) {
    const Checkpoint ck = read_checkpoint(cfg.resume_from);
    if (ck.circuit.num_modes != cfg.circuit.num_modes)
      throw ConfigError("resume checkpoint has a different mode count");
    cfg.hopping.init =
        Eigen::Map<const RealVec>(ck.parameters.data(), long(ck.parameters.size()));
  }

  const CircuitSearchSpace space = cfg.circuit.search_space();
  const auto t0 = std::chrono::steady_clock::now();
  OptResult result;
  std::vector<std::pair<MeasurementPattern, TargetSpec>> checkpoint_assignments;

  if (cfg.mode == "fixed") {
    const auto assignments = build_assignments(cfg.assignments, cfg.circuit.cutoff);
    result = run_fixed(space, assignments, cfg.loss, cfg.hopping);
    checkpoint_assignments = cfg.assignments;
  } else {
    std::vector<std::shared_ptr<const TargetState>> targets;
    std::map<std::string, TargetSpec> by_label;
    for (const auto& spec : cfg.beam_targets) {
      auto t = std::make_shared<TargetState>(spec.build(cfg.circuit.cutoff));
      by_label.emplace(t->label, spec);
      targets.push_back(std::move(t));
    }
    result = run_beam(space, targets, cfg.beam_width, cfg.loss, cfg.hopping);
    for (const auto& s : result.scores) {
      const auto it = by_label.find(s.target_label);
      if (it != by_label.end()) checkpoint_assignments.emplace_back(s.pattern, it->second);
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(cfg.output_dir);
  const std::string report_path = cfg.output_dir + "/report.json";
  const std::string checkpoint_path = cfg.output_dir + "/checkpoint.json";
  write_run_report(report_path, cfg, result, wall);

  Checkpoint ck;
  ck.circuit = cfg.circuit;
  ck.parameters = result.best_params;
  ck.seed = result.seed;
  ck.iteration = cfg.hopping.hops;
  ck.config_hash = fnv1a_hex(cfg.canonical_json());
  ck.assignments = std::move(checkpoint_assignments);
  write_checkpoint(checkpoint_path, ck);

  std::printf("%s optimization finished in %.1f s (%ld evaluations)\n", cfg.mode.c_str(), wall,
              result.evaluations);
  print_scores(result);
  std::printf("report     %s\ncheckpoint %s\n", report_path.c_str(), checkpoint_path.c_str());
  return kExitOk;
}

int cmd_validate(const std::string& checkpoint_path, int cutoff_hi, const std::string& out_path) {
  const Checkpoint ck = read_checkpoint(checkpoint_path);
  const int d_lo = ck.circuit.cutoff;
  if (cutoff_hi < d_lo) throw ConfigError("validation cutoff must be >= the checkpoint cutoff");

  const CircuitParams params = CircuitParams::from_vector(ck.circuit.num_modes, ck.parameters);
  const FockState lo = build_state(params, d_lo);
  const FockState hi = build_state(params, cutoff_hi);

  ordered_json rows = ordered_json::array();
  double worst = 0.0;
  for (const auto& [pattern, spec] : ck.assignments) {
    const HeraldResult h_lo = herald(lo, pattern);
    const HeraldResult h_hi = herald(hi, pattern);
    Vec padded = Vec::Zero(cutoff_hi);
    padded.head(d_lo) = h_lo.output;
    const double infid = 1.0 - std::norm(padded.dot(h_hi.output));
    worst = std::max(worst, infid);
    rows.push_back({{"pattern", pattern}, {"target", spec.build(d_lo).label}, {"infidelity", infid}});
    std::printf("  %-10s infidelity(D=%d vs D=%d) = %.3e\n", pattern_to_string(pattern).c_str(),
                d_lo, cutoff_hi, infid);
  }
  std::printf("  max infidelity %.3e\n", worst);

  if (!out_path.empty()) {
    ordered_json doc;
    doc["schema"] = "heraldopt-validation-v1";
    doc["checkpoint"] = checkpoint_path;
    doc["cutoff_lo"] = d_lo;
    doc["cutoff_hi"] = cutoff_hi;
    doc["patterns"] = rows;
    doc["max_infidelity"] = worst;
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_loss_sweep(const std::string& checkpoint_path, std::vector<double> etas, int cutoff,
                   const std::string& out_path) {
  const Checkpoint ck = read_checkpoint(checkpoint_path);
  if (etas.empty()) etas = {1.0, 0.99, 0.90};
  const CircuitParams params = CircuitParams::from_vector(ck.circuit.num_modes, ck.parameters);

  std::map<std::string, std::shared_ptr<const TargetState>> cache;
  std::vector<LossSweepRow> rows;
  for (const auto& [pattern, spec] : ck.assignments) {
    const std::string key = spec.json();
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::make_shared<TargetState>(spec.build(cutoff))).first;
    for (const double eta : etas) {
      const LossyResult r = lossy_pipeline(params, pattern, it->second->amplitudes, eta, cutoff);
      rows.push_back({it->second->label, pattern, eta, r.probability, r.fidelity});
      std::printf("  %-10s eta=%.4f  p=%8.5f%%  F=%.6f\n", pattern_to_string(pattern).c_str(),
                  eta, 100.0 * r.probability, r.fidelity);
    }
  }
  write_loss_sweep_csv(out_path, rows);
  std::printf("loss sweep written to %s\n", out_path.c_str());
  return kExitOk;
}

int cmd_wigner(const std::string& checkpoint_path, const std::string& pattern_csv,
               const WignerGridSpec& spec, const std::string& out_path) {
  const Checkpoint ck = read_checkpoint(checkpoint_path);
  MeasurementPattern pattern;
  std::stringstream ss(pattern_csv);
  for (std::string item; std::getline(ss, item, ',');) pattern.push_back(std::stoi(item));
  if (int(pattern.size()) != ck.circuit.num_modes - 1)
    throw ConfigError("pattern must have num_modes - 1 entries");

  const CircuitParams params = CircuitParams::from_vector(ck.circuit.num_modes, ck.parameters);
  const FockState state = build_state(params, ck.circuit.cutoff);
  const HeraldResult h = herald(state, pattern);
  const WignerGrid grid = wigner(h.output, spec);
  write_wigner_csv(out_path, grid);
  std::printf("pattern %s  p=%.5f%%  grid integral %.4f  ->  %s\n",
              pattern_to_string(pattern).c_str(), 100.0 * h.probability, grid.grid_integral(),
              out_path.c_str());
  return kExitOk;
}

int cmd_targets(const std::string& spec_json, int cutoff, const std::string& out_path) {
  const TargetSpec spec = TargetSpec::parse_json(spec_json);
  ordered_json doc;
  doc["schema"] = "heraldopt-target-v1";
  doc["spec"] = ordered_json::parse(spec.json());
  doc["cutoff"] = cutoff;

  TargetState t;
  if (spec.family == TargetSpec::Family::GkpCore) {
    const GkpCore core = gkp_core_state(spec.gkp_mu, spec.gkp_n_max, spec.gkp_envelope_db, cutoff,
                                        spec.gkp_convention);
    t = core.state;
    doc["envelope_fidelity"] = core.envelope_fidelity;
    doc["squeeze_xi"] = core.squeeze_xi;
    doc["displacement_beta"] = {core.displacement_beta.real(), core.displacement_beta.imag()};
    doc["low_fidelity_flag"] = core.low_fidelity_flag;
  } else {
    t = spec.build(cutoff);
  }
  doc["label"] = t.label;
  doc["norm"] = t.amplitudes.norm();
  switch (parity_support(t.amplitudes)) {
    case ParitySupport::Even: doc["parity_support"] = "even"; break;
    case ParitySupport::Odd: doc["parity_support"] = "odd"; break;
    case ParitySupport::Mixed: doc["parity_support"] = "mixed"; break;
  }
  ordered_json amps = ordered_json::array();
  for (long n = 0; n < t.amplitudes.size(); ++n)
    amps.push_back({t.amplitudes[n].real(), t.amplitudes[n].imag()});
  doc["amplitudes"] = amps;

  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << doc.dump(2) << "\n";
    std::printf("target written to %s\n", out_path.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-outcome optimization of photon-number-heralded Gaussian circuits"};
  app.require_subcommand(1);

  std::string config_path;
  auto* opt = app.add_subcommand("optimize", "Run a fixed-pattern or beam-search optimization");
  opt->add_option("--config", config_path, "Run configuration JSON")->required();

  std::string ck_path, out_path;
  int cutoff_hi = 50;
  auto* val = app.add_subcommand("validate", "Re-simulate a checkpoint at a higher cutoff");
  val->add_option("checkpoint", ck_path, "Checkpoint JSON")->required();
  val->add_option("--cutoff-hi", cutoff_hi, "Expanded cutoff (default 50)");
  val->add_option("--output", out_path, "Optional JSON output path");

  std::string sweep_ck, sweep_out = "loss_sweep.csv";
  std::vector<double> etas;
  int sweep_cutoff = 15;
  auto* sweep = app.add_subcommand("loss-sweep", "Lossy re-simulation over transmissivities");
  sweep->add_option("checkpoint", sweep_ck, "Checkpoint JSON")->required();
  sweep->add_option("--eta", etas, "Transmissivities (default 1.0 0.99 0.90)");
  sweep->add_option("--cutoff", sweep_cutoff, "Density-matrix cutoff (default 15)");
  sweep->add_option("--output", sweep_out, "CSV output path");

  std::string wig_ck, wig_pattern, wig_out = "wigner.csv";
  WignerGridSpec grid;
  auto* wig = app.add_subcommand("wigner", "Export the Wigner grid of a heralded output");
  wig->add_option("checkpoint", wig_ck, "Checkpoint JSON")->required();
  wig->add_option("--pattern", wig_pattern, "Comma-separated ancilla pattern")->required();
  wig->add_option("--xmin", grid.x_min);
  wig->add_option("--xmax", grid.x_max);
  wig->add_option("--nx", grid.nx);
  wig->add_option("--pmin", grid.p_min);
  wig->add_option("--pmax", grid.p_max);
  wig->add_option("--np", grid.np);
  wig->add_option("--output", wig_out, "CSV output path");

  std::string target_spec, target_out;
  int target_cutoff = 30;
  auto* tgt = app.add_subcommand("targets", "Emit a target state vector with diagnostics");
  tgt->add_option("--spec", target_spec, "Target spec JSON, e.g. '{\"family\":\"binomial\",...}'")
      ->required();
  tgt->add_option("--cutoff", target_cutoff, "Fock cutoff (default 30)");
  tgt->add_option("--output", target_out, "Optional JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*opt) return cmd_optimize(config_path);
    if (*val) return cmd_validate(ck_path, cutoff_hi, out_path);
    if (*sweep) return cmd_loss_sweep(sweep_ck, etas, sweep_cutoff, sweep_out);
    if (*wig) return cmd_wigner(wig_ck, wig_pattern, grid, wig_out);
    if (*tgt) return cmd_targets(target_spec, target_cutoff, target_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
