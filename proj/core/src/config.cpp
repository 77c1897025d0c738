#include "heraldopt/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace heraldopt {

using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_num(const ordered_json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

int get_int(const ordered_json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return obj[key].get<int>();
}

bool get_bool(const ordered_json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
  return obj[key].get<bool>();
}

std::string get_str(const ordered_json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

TargetSpec parse_target(const ordered_json& t) {
  if (!t.is_object() || !t.contains("family"))
    throw ConfigError("target must be an object with a 'family' key");
  const std::string family = t["family"].get<std::string>();
  TargetSpec spec;
  if (family == "cat") {
    reject_unknown_keys(t, {"family", "alpha", "alpha_im", "squeeze", "parity"}, "cat target");
    spec.family = TargetSpec::Family::Cat;
    spec.cat_alpha = Complex(get_num(t, "alpha", 0.0), get_num(t, "alpha_im", 0.0));
    spec.cat_squeeze = get_num(t, "squeeze", 0.0);
    const std::string parity = get_str(t, "parity", "even");
    if (parity == "even")
      spec.cat_parity = Parity::Even;
    else if (parity == "odd")
      spec.cat_parity = Parity::Odd;
    else
      throw ConfigError("cat parity must be 'even' or 'odd'");
  } else if (family == "gkp_core") {
    reject_unknown_keys(t, {"family", "mu", "n_max", "envelope_db", "envelope_convention"},
                        "gkp_core target");
    spec.family = TargetSpec::Family::GkpCore;
    spec.gkp_mu = get_int(t, "mu", 0);
    spec.gkp_n_max = get_int(t, "n_max", 4);
    spec.gkp_envelope_db = get_num(t, "envelope_db", 10.0);
    const std::string conv = get_str(t, "envelope_convention", "delta_sq");
    if (conv == "delta_sq")
      spec.gkp_convention = GkpEnvelopeConvention::DeltaSq;
    else if (conv == "half_log")
      spec.gkp_convention = GkpEnvelopeConvention::HalfLog;
    else
      throw ConfigError("envelope_convention must be 'delta_sq' or 'half_log'");
  } else if (family == "binomial") {
    reject_unknown_keys(t, {"family", "N", "S", "mu"}, "binomial target");
    spec.family = TargetSpec::Family::Binomial;
    spec.bin_n = get_int(t, "N", 2);
    spec.bin_s = get_int(t, "S", 2);
    spec.bin_mu = get_int(t, "mu", 0);
  } else if (family == "cubic") {
    reject_unknown_keys(t, {"family", "gamma", "r", "alpha"}, "cubic target");
    spec.family = TargetSpec::Family::Cubic;
    spec.cubic_gamma = get_num(t, "gamma", 0.0);
    spec.cubic_r = get_num(t, "r", 0.0);
    spec.cubic_alpha = get_num(t, "alpha", 0.0);
  } else {
    throw ConfigError("unknown target family '" + family + "'");
  }
  return spec;
}

ordered_json target_json(const TargetSpec& s) {
  ordered_json t;
  switch (s.family) {
    case TargetSpec::Family::Cat:
      t["family"] = "cat";
      t["alpha"] = s.cat_alpha.real();
      t["alpha_im"] = s.cat_alpha.imag();
      t["squeeze"] = s.cat_squeeze;
      t["parity"] = s.cat_parity == Parity::Even ? "even" : "odd";
      break;
    case TargetSpec::Family::GkpCore:
      t["family"] = "gkp_core";
      t["mu"] = s.gkp_mu;
      t["n_max"] = s.gkp_n_max;
      t["envelope_db"] = s.gkp_envelope_db;
      t["envelope_convention"] =
          s.gkp_convention == GkpEnvelopeConvention::DeltaSq ? "delta_sq" : "half_log";
      break;
    case TargetSpec::Family::Binomial:
      t["family"] = "binomial";
      t["N"] = s.bin_n;
      t["S"] = s.bin_s;
      t["mu"] = s.bin_mu;
      break;
    case TargetSpec::Family::Cubic:
      t["family"] = "cubic";
      t["gamma"] = s.cubic_gamma;
      t["r"] = s.cubic_r;
      t["alpha"] = s.cubic_alpha;
      break;
  }
  return t;
}

MeasurementPattern parse_pattern(const ordered_json& arr) {
  if (!arr.is_array() || arr.empty()) throw ConfigError("pattern must be a non-empty array");
  MeasurementPattern p;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<int>() < 0)
      throw ConfigError("pattern entries must be non-negative integers");
    p.push_back(v.get<int>());
  }
  return p;
}

}  // namespace

TargetState TargetSpec::build(int cutoff) const {
  switch (family) {
    case Family::Cat:
      return cat_state(cat_alpha, cat_squeeze, cat_parity, cutoff);
    case Family::GkpCore:
      return gkp_core_state(gkp_mu, gkp_n_max, gkp_envelope_db, cutoff, gkp_convention).state;
    case Family::Binomial:
      return binomial_codeword(bin_n, bin_s, bin_mu, cutoff);
    case Family::Cubic:
      return cubic_phase_state(cubic_gamma, cubic_r, cubic_alpha, cutoff);
  }
  throw std::logic_error("unreachable");
}

std::string TargetSpec::json() const { return target_json(*this).dump(); }

TargetSpec TargetSpec::parse_json(const std::string& text) {
  return parse_target(ordered_json::parse(text));
}

CircuitSearchSpace CircuitConfig::search_space() const {
  CircuitSearchSpace s;
  s.num_modes = num_modes;
  s.cutoff = cutoff;
  s.r_max = conventions::squeeze_r_from_db(max_squeeze_db);
  s.allow_displacement = allow_displacement;
  s.displacement_bound = displacement_bound;
  return s;
}

RunConfig parse_run_config(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc,
                      {"circuit", "mode", "patterns", "beam", "loss", "optimizer", "output_dir",
                       "resume_from"},
                      "config root");

  RunConfig cfg;
  if (!doc.contains("circuit") || !doc["circuit"].is_object())
    throw ConfigError("config needs a 'circuit' object");
  const auto& c = doc["circuit"];
  reject_unknown_keys(
      c, {"num_modes", "cutoff", "max_squeeze_db", "allow_displacement", "displacement_bound"},
      "circuit");
  cfg.circuit.num_modes = get_int(c, "num_modes", 2);
  cfg.circuit.cutoff = get_int(c, "cutoff", 30);
  cfg.circuit.max_squeeze_db = get_num(c, "max_squeeze_db", 12.0);
  cfg.circuit.allow_displacement = get_bool(c, "allow_displacement", false);
  cfg.circuit.displacement_bound = get_num(c, "displacement_bound", 3.0);
  if (cfg.circuit.num_modes < 2) throw ConfigError("num_modes must be >= 2");
  if (cfg.circuit.cutoff < 2) throw ConfigError("cutoff must be >= 2");

  cfg.mode = get_str(doc, "mode", "fixed");
  if (cfg.mode != "fixed" && cfg.mode != "beam")
    throw ConfigError("mode must be 'fixed' or 'beam'");

  if (cfg.mode == "fixed") {
    if (!doc.contains("patterns") || !doc["patterns"].is_array() || doc["patterns"].empty())
      throw ConfigError("fixed mode needs a non-empty 'patterns' array");
    for (const auto& entry : doc["patterns"]) {
      reject_unknown_keys(entry, {"pattern", "target"}, "patterns[]");
      if (!entry.contains("pattern") || !entry.contains("target"))
        throw ConfigError("each patterns[] entry needs 'pattern' and 'target'");
      MeasurementPattern p = parse_pattern(entry["pattern"]);
      if (int(p.size()) != cfg.circuit.num_modes - 1)
        throw ConfigError("pattern length must be num_modes - 1");
      for (int n : p)
        if (n >= cfg.circuit.cutoff) throw ConfigError("pattern entry exceeds cutoff");
      cfg.assignments.emplace_back(std::move(p), parse_target(entry["target"]));
    }
  } else {
    if (!doc.contains("beam") || !doc["beam"].is_object())
      throw ConfigError("beam mode needs a 'beam' object");
    const auto& b = doc["beam"];
    reject_unknown_keys(b, {"width", "targets"}, "beam");
    cfg.beam_width = get_int(b, "width", 100);
    if (cfg.beam_width < 1) throw ConfigError("beam width must be >= 1");
    if (!b.contains("targets") || !b["targets"].is_array() || b["targets"].empty())
      throw ConfigError("beam mode needs a non-empty target list");
    for (const auto& t : b["targets"]) cfg.beam_targets.push_back(parse_target(t));
  }

  if (doc.contains("loss")) {
    const auto& l = doc["loss"];
    reject_unknown_keys(
        l, {"alpha", "epsilon", "delta", "lambda", "trunc_weight", "lambda_denominator"}, "loss");
    cfg.loss.alpha = get_num(l, "alpha", cfg.loss.alpha);
    cfg.loss.epsilon = get_num(l, "epsilon", cfg.loss.epsilon);
    cfg.loss.delta = get_num(l, "delta", cfg.loss.delta);
    cfg.loss.lambda = get_num(l, "lambda", cfg.loss.lambda);
    cfg.loss.trunc_weight = get_num(l, "trunc_weight", cfg.loss.trunc_weight);
    const std::string den = get_str(l, "lambda_denominator", "as-printed");
    if (den == "as-printed")
      cfg.loss.lambda_denominator = LambdaDenominator::AsPrinted;
    else if (den == "normalized")
      cfg.loss.lambda_denominator = LambdaDenominator::Normalized;
    else
      throw ConfigError("lambda_denominator must be 'as-printed' or 'normalized'");
    if (cfg.loss.epsilon <= 0.0 || cfg.loss.epsilon >= 1.0)
      throw ConfigError("epsilon must lie in (0, 1)");
  }

  if (doc.contains("optimizer")) {
    const auto& o = doc["optimizer"];
    reject_unknown_keys(
        o, {"hops", "step_scale", "temperature", "restarts", "seed", "threads", "stop_below",
            "local"},
        "optimizer");
    cfg.hopping.hops = get_int(o, "hops", cfg.hopping.hops);
    cfg.hopping.step_scale = get_num(o, "step_scale", cfg.hopping.step_scale);
    cfg.hopping.temperature = get_num(o, "temperature", cfg.hopping.temperature);
    cfg.hopping.restarts = get_int(o, "restarts", cfg.hopping.restarts);
    if (o.contains("seed")) cfg.hopping.seed = o["seed"].get<std::uint64_t>();
    cfg.hopping.threads = get_int(o, "threads", cfg.hopping.threads);
    if (o.contains("stop_below")) cfg.hopping.stop_below = get_num(o, "stop_below", 0.0);
    if (o.contains("local")) {
      const auto& lc = o["local"];
      reject_unknown_keys(lc, {"max_iters", "fd_step", "grad_tol", "f_tol", "memory"},
                          "optimizer.local");
      cfg.hopping.local.max_iters = get_int(lc, "max_iters", cfg.hopping.local.max_iters);
      cfg.hopping.local.fd_step = get_num(lc, "fd_step", cfg.hopping.local.fd_step);
      cfg.hopping.local.grad_tol = get_num(lc, "grad_tol", cfg.hopping.local.grad_tol);
      cfg.hopping.local.f_tol = get_num(lc, "f_tol", cfg.hopping.local.f_tol);
      cfg.hopping.local.memory = get_int(lc, "memory", cfg.hopping.local.memory);
    }
  }

  cfg.output_dir = get_str(doc, "output_dir", ".");
  cfg.resume_from = get_str(doc, "resume_from", "");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

std::string RunConfig::canonical_json() const {
  ordered_json doc;
  doc["circuit"] = {{"num_modes", circuit.num_modes},
                    {"cutoff", circuit.cutoff},
                    {"max_squeeze_db", circuit.max_squeeze_db},
                    {"allow_displacement", circuit.allow_displacement},
                    {"displacement_bound", circuit.displacement_bound}};
  doc["mode"] = mode;
  if (mode == "fixed") {
    ordered_json arr = ordered_json::array();
    for (const auto& [p, t] : assignments)
      arr.push_back({{"pattern", p}, {"target", target_json(t)}});
    doc["patterns"] = arr;
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& t : beam_targets) arr.push_back(target_json(t));
    doc["beam"] = {{"width", beam_width}, {"targets", arr}};
  }
  doc["loss"] = {{"alpha", loss.alpha},
                 {"epsilon", loss.epsilon},
                 {"delta", loss.delta},
                 {"lambda", loss.lambda},
                 {"trunc_weight", loss.trunc_weight},
                 {"lambda_denominator",
                  loss.lambda_denominator == LambdaDenominator::AsPrinted ? "as-printed"
                                                                          : "normalized"}};
  doc["optimizer"] = {{"hops", hopping.hops},
                      {"step_scale", hopping.step_scale},
                      {"temperature", hopping.temperature},
                      {"restarts", hopping.restarts},
                      {"seed", hopping.seed},
                      {"local",
                       {{"max_iters", hopping.local.max_iters},
                        {"fd_step", hopping.local.fd_step},
                        {"grad_tol", hopping.local.grad_tol}}}};
  doc["output_dir"] = output_dir;
  return doc.dump();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace heraldopt
