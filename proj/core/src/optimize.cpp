#include "heraldopt/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <random>
#include <thread>

namespace heraldopt {

namespace {

// Uniform double in [0, 1) from the top 53 bits of the engine output;
// portable across standard libraries.
double uniform01(std::mt19937_64& eng) {
  return double(eng() >> 11) * 0x1.0p-53;
}

// tanh box reparameterization over the free (lo < hi) coordinates.
struct BoxMap {
  std::vector<int> free_idx;
  RealVec mid, half;  // over free coordinates
  RealVec frozen;     // full-length template holding frozen values

  explicit BoxMap(const Bounds& b) {
    if (b.lo.size() != b.hi.size()) throw std::invalid_argument("bounds size mismatch");
    frozen = b.lo;
    for (int i = 0; i < b.lo.size(); ++i) {
      if (!(b.lo[i] <= b.hi[i])) throw std::invalid_argument("invalid bounds: lo > hi");
      if (!std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]))
        throw std::invalid_argument("bounds must be finite");
      if (b.lo[i] < b.hi[i]) free_idx.push_back(i);
    }
    mid.resize(free_idx.size());
    half.resize(free_idx.size());
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      mid[k] = 0.5 * (b.lo[free_idx[k]] + b.hi[free_idx[k]]);
      half[k] = 0.5 * (b.hi[free_idx[k]] - b.lo[free_idx[k]]);
    }
  }

  RealVec to_x(const RealVec& y) const {
    RealVec x = frozen;
    for (std::size_t k = 0; k < free_idx.size(); ++k)
      x[free_idx[k]] = mid[k] + half[k] * std::tanh(y[k]);
    return x;
  }

  RealVec to_y(const RealVec& x) const {
    RealVec y(free_idx.size());
    for (std::size_t k = 0; k < free_idx.size(); ++k) {
      double t = (x[free_idx[k]] - mid[k]) / half[k];
      t = std::clamp(t, -1.0 + 1e-12, 1.0 - 1e-12);
      y[k] = std::clamp(std::atanh(t), -8.0, 8.0);
    }
    return y;
  }
};

}  // namespace

RealVec finite_difference_gradient(const Objective& f, const RealVec& x, double h) {
  RealVec g(x.size());
  RealVec probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

LocalResult local_minimize(const Objective& f, const RealVec& x0, const Bounds& bounds,
                           const LocalOptions& opt) {
  const BoxMap box(bounds);
  LocalResult res;

  long evals = 0;
  const auto fy = [&](const RealVec& y) {
    ++evals;
    return f(box.to_x(y));
  };

  RealVec y = box.to_y(x0);
  const int n = int(y.size());
  double fcur = fy(y);
  if (!std::isfinite(fcur)) {
    res.x = box.to_x(y);
    res.f = fcur;
    res.non_finite_abort = true;
    res.evaluations = evals;
    return res;
  }
  if (n == 0) {  // everything frozen
    res.x = box.to_x(y);
    res.f = fcur;
    res.evaluations = evals;
    return res;
  }

  const auto grad = [&](const RealVec& yv) {
    return finite_difference_gradient([&](const RealVec& w) { return fy(w); }, yv, opt.fd_step);
  };

  std::deque<std::pair<RealVec, RealVec>> hist;  // (s, y) pairs
  RealVec g = grad(y);
  int stall = 0;

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_tol) break;

    // two-loop recursion
    RealVec q = g;
    std::vector<double> alpha(hist.size());
    for (int k = int(hist.size()) - 1; k >= 0; --k) {
      const auto& [s, yv] = hist[k];
      const double rho = 1.0 / yv.dot(s);
      alpha[k] = rho * s.dot(q);
      q -= alpha[k] * yv;
    }
    if (!hist.empty()) {
      const auto& [s, yv] = hist.back();
      q *= s.dot(yv) / yv.dot(yv);
    }
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const auto& [s, yv] = hist[k];
      const double rho = 1.0 / yv.dot(s);
      const double beta = rho * yv.dot(q);
      q += (alpha[k] - beta) * s;
    }
    RealVec d = -q;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {  // not a descent direction; fall back to steepest
      hist.clear();
      d = -g;
      slope = g.dot(d);
      if (!(slope < 0.0)) break;
    }

    // Armijo backtracking
    double t = 1.0;
    double fnew = std::numeric_limits<double>::infinity();
    RealVec ynew;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      ynew = y + t * d;
      fnew = fy(ynew);
      if (std::isfinite(fnew) && fnew <= fcur + 1e-4 * t * slope) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;

    RealVec gnew = grad(ynew);
    RealVec s = ynew - y;
    RealVec dy = gnew - g;
    if (dy.dot(s) > 1e-12 * s.norm() * dy.norm()) {
      hist.emplace_back(std::move(s), std::move(dy));
      if (int(hist.size()) > opt.memory) hist.pop_front();
    }

    const double drop = fcur - fnew;
    y = std::move(ynew);
    g = std::move(gnew);
    fcur = fnew;
    if (drop < opt.f_tol * std::max(1.0, std::abs(fcur))) {
      if (++stall >= 2) break;
    } else {
      stall = 0;
    }
  }

  res.x = box.to_x(y);
  res.f = fcur;
  res.iterations = it;
  res.evaluations = evals;
  return res;
}

BasinHopResult basin_hop(const Objective& f, const Bounds& bounds, const BasinHopOptions& opt) {
  if (opt.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (opt.hops < 0) throw std::invalid_argument("hops must be >= 0");
  const BoxMap box(bounds);
  const int n = int(bounds.lo.size());

  struct RestartOutcome {
    RealVec best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<HopTrace> trace;
    long evaluations = 0;
  };
  std::vector<RestartOutcome> outcomes(opt.restarts);

  const auto run_restart = [&](int r) {
    RestartOutcome& out = outcomes[r];
    std::mt19937_64 eng(opt.seed + 0x9E3779B97F4A7C15ull * std::uint64_t(r + 1));

    RealVec x0(n);
    if (r == 0 && opt.init) {
      x0 = *opt.init;
    } else {
      for (int i = 0; i < n; ++i)
        x0[i] = bounds.lo[i] + uniform01(eng) * (bounds.hi[i] - bounds.lo[i]);
    }

    LocalResult cur = local_minimize(f, x0, bounds, opt.local);
    out.evaluations += cur.evaluations;
    out.best_x = cur.x;
    out.best_f = cur.f;
    out.trace.push_back({r, 0, cur.f, cur.f});

    for (int hop = 1; hop <= opt.hops; ++hop) {
      if (out.best_f <= opt.stop_below) break;
      RealVec xp = cur.x;
      for (std::size_t k = 0; k < box.free_idx.size(); ++k) {
        const int i = box.free_idx[k];
        xp[i] += opt.step_scale * box.half[k] * (2.0 * uniform01(eng) - 1.0);
        xp[i] = std::clamp(xp[i], bounds.lo[i], bounds.hi[i]);
      }
      LocalResult trial = local_minimize(f, xp, bounds, opt.local);
      out.evaluations += trial.evaluations;
      if (trial.non_finite_abort) continue;

      bool accept = trial.f <= cur.f;
      if (!accept && opt.temperature > 0.0)
        accept = uniform01(eng) < std::exp(-(trial.f - cur.f) / opt.temperature);
      if (accept) cur = std::move(trial);
      if (cur.f < out.best_f) {
        out.best_f = cur.f;
        out.best_x = cur.x;
      }
      out.trace.push_back({r, hop, cur.f, out.best_f});
    }
  };

  int threads = opt.threads > 0 ? opt.threads : int(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, opt.restarts);
  if (threads == 1) {
    for (int r = 0; r < opt.restarts; ++r) run_restart(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < opt.restarts; r = next.fetch_add(1)) run_restart(r);
      });
    for (auto& th : pool) th.join();
  }

  BasinHopResult res;
  res.seed = opt.seed;
  for (int r = 0; r < opt.restarts; ++r) {
    const auto& out = outcomes[r];
    res.restart_best.push_back(out.best_f);
    res.evaluations += out.evaluations;
    res.trace.insert(res.trace.end(), out.trace.begin(), out.trace.end());
    if (out.best_f < res.best_f) {
      res.best_f = out.best_f;
      res.best_x = out.best_x;
    }
  }
  return res;
}

Bounds CircuitSearchSpace::bounds() const {
  const std::size_t len = CircuitParams::vector_size(num_modes);
  Bounds b;
  b.lo = RealVec::Zero(long(len));
  b.hi = RealVec::Zero(long(len));
  const double two_pi = 2.0 * kPi;
  std::size_t k = 0;
  for (int i = 0; i < num_modes; ++i, ++k) b.hi[k] = r_max;          // squeeze r
  for (int i = 0; i < num_modes; ++i, ++k) b.hi[k] = two_pi;         // squeeze phi
  for (int i = 0; i < 2 * num_modes; ++i, ++k) {                     // Re/Im displacement
    if (allow_displacement) {
      b.lo[k] = -displacement_bound;
      b.hi[k] = displacement_bound;
    }
  }
  for (std::size_t m = 0; m < std::size_t(num_modes) * (num_modes - 1) / 2; ++m) {
    b.hi[k++] = two_pi;  // theta
    b.hi[k++] = two_pi;  // phi
  }
  for (int i = 0; i < num_modes; ++i, ++k) b.hi[k] = two_pi;         // output phases
  return b;
}

std::vector<MeasurementPattern> top_b_patterns(const Eigen::VectorXd& marginals, int num_ancilla,
                                               int cutoff, int B) {
  if (B < 1) throw std::invalid_argument("beam width must be >= 1");
  std::vector<long> idx;
  idx.reserve(marginals.size());
  for (long i = 0; i < marginals.size(); ++i)
    if (marginals[i] > 0.0) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](long a, long b) {
    if (marginals[a] != marginals[b]) return marginals[a] > marginals[b];
    return a < b;
  });
  if (long(idx.size()) > B) idx.resize(B);
  std::vector<MeasurementPattern> out;
  out.reserve(idx.size());
  for (long i : idx) out.push_back(pattern_from_flat_index(std::size_t(i), num_ancilla, cutoff));
  return out;
}

namespace {

OptResult finalize_result(const CircuitSearchSpace& space, const BasinHopResult& hop,
                          const std::vector<PatternScore>& scores, double loss, double leakage) {
  OptResult res;
  res.num_modes = space.num_modes;
  res.cutoff = space.cutoff;
  res.best_params.assign(hop.best_x.data(), hop.best_x.data() + hop.best_x.size());
  res.scores = scores;
  res.aggregate_probability = 0.0;
  for (const auto& s : scores) res.aggregate_probability += s.probability;
  res.loss_value = loss;
  res.leakage = leakage;
  res.trace = hop.trace;
  res.seed = hop.seed;
  res.evaluations = hop.evaluations;
  return res;
}

}  // namespace

OptResult run_fixed(const CircuitSearchSpace& space, std::span<const PatternTarget> assignments,
                    const LossConfig& loss, const BasinHopOptions& hopping) {
  if (assignments.empty()) throw std::invalid_argument("fixed-pattern run needs assignments");
  for (const auto& a : assignments)
    if (!a.target) throw std::invalid_argument("every pattern must carry a target");

  const auto objective = [&](const RealVec& v) {
    const CircuitParams p = CircuitParams::from_vector(
        space.num_modes, std::span<const double>(v.data(), std::size_t(v.size())));
    const ScoredCircuit sc = score_patterns(p, assignments, space.cutoff);
    return loss_fixed(sc.scores, sc.leakage, loss);
  };

  const BasinHopResult hop = basin_hop(objective, space.bounds(), hopping);
  const CircuitParams best = CircuitParams::from_vector(
      space.num_modes, std::span<const double>(hop.best_x.data(), std::size_t(hop.best_x.size())));
  const ScoredCircuit sc = score_patterns(best, assignments, space.cutoff);
  return finalize_result(space, hop, sc.scores, loss_fixed(sc.scores, sc.leakage, loss),
                         sc.leakage);
}

OptResult run_beam(const CircuitSearchSpace& space,
                   std::span<const std::shared_ptr<const TargetState>> targets, int beam_width,
                   const LossConfig& loss, const BasinHopOptions& hopping) {
  if (targets.empty()) throw std::invalid_argument("beam run needs a target list");
  for (const auto& t : targets)
    if (!t) throw std::invalid_argument("null target in list");

  const auto score_beam = [&](const CircuitParams& p) -> ScoredCircuit {
    const FockState state = build_state(p, space.cutoff);
    const Eigen::VectorXd marg = ancilla_marginals(state);
    const auto patterns =
        top_b_patterns(marg, space.num_modes - 1, space.cutoff, beam_width);
    ScoredCircuit sc;
    sc.leakage = truncation_leakage(state);
    sc.scores.reserve(patterns.size());
    for (const auto& pat : patterns) {
      PatternScore best_score;
      best_score.pattern = pat;
      try {
        const HeraldResult h = herald(state, pat);
        for (const auto& t : targets) {
          const RotationFidelity rf = rotation_fidelity(t->amplitudes, h.output);
          if (rf.fidelity > best_score.fidelity) {
            best_score.fidelity = rf.fidelity;
            best_score.phi_star = rf.phi_star;
            best_score.target_label = t->label;
          }
        }
        best_score.probability = h.probability;
      } catch (const HeraldVoidError&) {
        // keep zero score
      }
      sc.scores.push_back(std::move(best_score));
    }
    return sc;
  };

  const auto objective = [&](const RealVec& v) {
    const CircuitParams p = CircuitParams::from_vector(
        space.num_modes, std::span<const double>(v.data(), std::size_t(v.size())));
    const ScoredCircuit sc = score_beam(p);
    if (sc.scores.empty()) return loss.trunc_weight * sc.leakage - std::log(loss.delta);
    return loss_beam(sc.scores, sc.leakage, loss);
  };

  const BasinHopResult hop = basin_hop(objective, space.bounds(), hopping);
  const CircuitParams best = CircuitParams::from_vector(
      space.num_modes, std::span<const double>(hop.best_x.data(), std::size_t(hop.best_x.size())));
  const ScoredCircuit sc = score_beam(best);
  const double final_loss = sc.scores.empty()
                                ? loss.trunc_weight * sc.leakage - std::log(loss.delta)
                                : loss_beam(sc.scores, sc.leakage, loss);
  return finalize_result(space, hop, sc.scores, final_loss, sc.leakage);
}

RotationClass classify_rotation(const OptResult& result, double tol) {
  std::vector<std::pair<std::string, double>> angles;
  for (const auto& s : result.scores)
    if (s.probability > 0.0) angles.emplace_back(s.target_label, s.phi_star);

  bool comparable = false;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = i + 1; j < angles.size(); ++j) {
      if (angles[i].first != angles[j].first) continue;
      comparable = true;
      double d = std::abs(angles[i].second - angles[j].second);
      d = std::fmod(d, 2.0 * kPi);
      d = std::min(d, 2.0 * kPi - d);
      if (d > tol) return RotationClass::Variant;
    }
  }
  if (!comparable)
    throw std::invalid_argument("rotation classification needs >= 2 patterns sharing a target");
  return RotationClass::Invariant;
}

}  // namespace heraldopt
