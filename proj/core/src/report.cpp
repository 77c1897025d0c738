#include "heraldopt/report.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace heraldopt {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json circuit_json(const CircuitConfig& c) {
  return {{"num_modes", c.num_modes},
          {"cutoff", c.cutoff},
          {"max_squeeze_db", c.max_squeeze_db},
          {"allow_displacement", c.allow_displacement},
          {"displacement_bound", c.displacement_bound}};
}

CircuitConfig circuit_from_json(const ordered_json& c) {
  CircuitConfig out;
  out.num_modes = c.at("num_modes").get<int>();
  out.cutoff = c.at("cutoff").get<int>();
  out.max_squeeze_db = c.at("max_squeeze_db").get<double>();
  out.allow_displacement = c.at("allow_displacement").get<bool>();
  out.displacement_bound = c.at("displacement_bound").get<double>();
  return out;
}

void dump_to(const std::string& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

ordered_json load_from(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  ordered_json doc;
  doc["schema"] = "heraldopt-checkpoint-v1";
  doc["code_version"] = kCodeVersion;
  doc["config_hash"] = ck.config_hash;
  doc["seed"] = ck.seed;
  doc["iteration"] = ck.iteration;
  doc["circuit"] = circuit_json(ck.circuit);
  doc["parameters"] = ck.parameters;
  ordered_json arr = ordered_json::array();
  for (const auto& [p, t] : ck.assignments)
    arr.push_back({{"pattern", p}, {"target", ordered_json::parse(t.json())}});
  doc["assignments"] = arr;
  dump_to(path, doc);
}

Checkpoint read_checkpoint(const std::string& path) {
  const ordered_json doc = load_from(path);
  if (doc.value("schema", "") != "heraldopt-checkpoint-v1")
    throw ConfigError(path + " is not a heraldopt checkpoint");
  Checkpoint ck;
  ck.circuit = circuit_from_json(doc.at("circuit"));
  ck.parameters = doc.at("parameters").get<std::vector<double>>();
  ck.seed = doc.at("seed").get<std::uint64_t>();
  ck.iteration = doc.at("iteration").get<int>();
  ck.config_hash = doc.value("config_hash", "");
  for (const auto& entry : doc.at("assignments")) {
    MeasurementPattern p = entry.at("pattern").get<std::vector<int>>();
    ck.assignments.emplace_back(std::move(p), TargetSpec::parse_json(entry.at("target").dump()));
  }
  if (ck.parameters.size() != CircuitParams::vector_size(ck.circuit.num_modes))
    throw ConfigError("checkpoint parameter vector has wrong length");
  return ck;
}

void write_run_report(const std::string& path, const RunConfig& cfg, const OptResult& result,
                      double wall_seconds) {
  ordered_json doc;
  doc["schema"] = "heraldopt-report-v1";
  doc["code_version"] = kCodeVersion;
  doc["config_hash"] = fnv1a_hex(cfg.canonical_json());
  doc["seed"] = result.seed;
  doc["mode"] = cfg.mode;
  doc["circuit"] = circuit_json(cfg.circuit);
  doc["parameters"] = result.best_params;
  ordered_json arr = ordered_json::array();
  for (const auto& s : result.scores)
    arr.push_back({{"pattern", s.pattern},
                   {"target", s.target_label},
                   {"probability", s.probability},
                   {"fidelity", s.fidelity},
                   {"phi_star", s.phi_star}});
  doc["patterns"] = arr;
  doc["aggregate_probability"] = result.aggregate_probability;
  doc["loss"] = result.loss_value;
  doc["leakage"] = result.leakage;
  doc["evaluations"] = result.evaluations;
  doc["wall_seconds"] = wall_seconds;
  dump_to(path, doc);
}

ReportData read_run_report(const std::string& path) {
  const ordered_json doc = load_from(path);
  if (doc.value("schema", "") != "heraldopt-report-v1")
    throw ConfigError(path + " is not a heraldopt run report");
  ReportData rep;
  rep.num_modes = doc.at("circuit").at("num_modes").get<int>();
  rep.cutoff = doc.at("circuit").at("cutoff").get<int>();
  rep.parameters = doc.at("parameters").get<std::vector<double>>();
  for (const auto& s : doc.at("patterns")) {
    PatternScore sc;
    sc.pattern = s.at("pattern").get<std::vector<int>>();
    sc.target_label = s.at("target").get<std::string>();
    sc.probability = s.at("probability").get<double>();
    sc.fidelity = s.at("fidelity").get<double>();
    sc.phi_star = s.at("phi_star").get<double>();
    rep.scores.push_back(std::move(sc));
  }
  rep.aggregate_probability = doc.at("aggregate_probability").get<double>();
  rep.loss_value = doc.at("loss").get<double>();
  rep.seed = doc.at("seed").get<std::uint64_t>();
  return rep;
}

void write_loss_sweep_csv(const std::string& path, std::span<const LossSweepRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "target,pattern,eta,p,fidelity\n";
  char buf[160];
  for (const auto& r : rows) {
    std::string pat;
    for (std::size_t i = 0; i < r.pattern.size(); ++i) {
      if (i) pat += " ";
      pat += std::to_string(r.pattern[i]);
    }
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g\n", r.target.c_str(), pat.c_str(),
                  r.eta, r.probability, r.fidelity);
    out << buf;
  }
}

void write_wigner_csv(const std::string& path, const WignerGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,p,W\n";
  char buf[120];
  for (long ix = 0; ix < grid.x_axis.size(); ++ix)
    for (long ip = 0; ip < grid.p_axis.size(); ++ip) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", grid.x_axis[ix], grid.p_axis[ip],
                    grid.values(ix, ip));
      out << buf;
    }
}

}  // namespace heraldopt
