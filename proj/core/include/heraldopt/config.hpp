#pragma once

#include <string>
#include <vector>

#include "heraldopt/optimize.hpp"

namespace heraldopt {

/// Configuration-file errors (bad schema, unknown keys, invalid values).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Declarative description of a target state, as written in run configs and
/// checkpoints.
struct TargetSpec {
  enum class Family { Cat, GkpCore, Binomial, Cubic };
  Family family = Family::Cat;

  // cat
  Complex cat_alpha = 0.0;
  double cat_squeeze = 0.0;
  Parity cat_parity = Parity::Even;
  // gkp core
  int gkp_mu = 0;
  int gkp_n_max = 4;
  double gkp_envelope_db = 10.0;
  GkpEnvelopeConvention gkp_convention = GkpEnvelopeConvention::DeltaSq;
  // binomial
  int bin_n = 2, bin_s = 2, bin_mu = 0;
  // cubic
  double cubic_gamma = 0.0, cubic_r = 0.0, cubic_alpha = 0.0;

  TargetState build(int cutoff) const;
  std::string json() const;                          // canonical serialized form
  static TargetSpec parse_json(const std::string&);  // strict, unknown keys rejected
};

struct CircuitConfig {
  int num_modes = 2;
  int cutoff = 30;
  double max_squeeze_db = 12.0;
  bool allow_displacement = false;
  double displacement_bound = 3.0;

  CircuitSearchSpace search_space() const;
};

/// A full optimization run request. Loaded from a JSON document that is
/// schema-validated up front; unknown keys anywhere are rejected.
struct RunConfig {
  CircuitConfig circuit;
  std::string mode = "fixed";  // "fixed" | "beam"
  std::vector<std::pair<MeasurementPattern, TargetSpec>> assignments;  // fixed mode
  int beam_width = 100;                                                // beam mode
  std::vector<TargetSpec> beam_targets;
  LossConfig loss;
  BasinHopOptions hopping;
  std::string output_dir = ".";
  std::string resume_from;  // optional checkpoint path (restart 0 starts there)

  std::string canonical_json() const;  // deterministic field order
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

/// FNV-1a 64-bit hash of a string, hex-encoded; used as the config hash
/// embedded in every report.
std::string fnv1a_hex(const std::string& text);

inline constexpr const char* kCodeVersion = "0.1.0";

}  // namespace heraldopt
