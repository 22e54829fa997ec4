#include "jot/pkbridge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace jot {

std::string Partition::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["blocks"] = blocks;
  return j.dump();
}

ConditionResult condition_mass(const LevyDensity& lv, const ScalingLaw& pstar,
                               double threshold, long max_tries, RngStream& rng) {
  if (!(threshold > 0) || !(threshold <= 1))
    throw std::invalid_argument("condition_mass: threshold must be in (0,1]");
  switch (lv.family()) {
    case LevyFamily::gamma:
    case LevyFamily::scale_invariant:
    case LevyFamily::stable:
      break;
    default:
      throw std::invalid_argument(
          "condition_mass: normalized law varies with the conditioned mass for "
          "this family; refusing");
  }
  const TruncationRule trunc = TruncationRule::relative_floor(1e-6);
  for (long tries = 1; tries <= max_tries; ++tries) {
    UnitaryMeasure m = sample_jot(lv, pstar, trunc, rng);
    double mass = m.total_mass();
    // every jump can fall below the truncation floor; the true mass is
    // then positive but below the recorded tail bound, so report that
    // bound instead of an exact zero
    if (mass == 0.0) mass = std::max(m.tail_mass_bound, 1e-300);
    if (mass <= threshold) {
      ConditionResult r;
      r.measure = std::move(m);
      r.mass = mass;
      r.tries = tries;
      r.acceptance_rate = 1.0 / tries;
      return r;
    }
  }
  throw BridgeError("condition_mass: max_tries exhausted", 0.0);
}

Partition paintbox(const std::vector<double>& weights, long n, RngStream& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("paintbox: negative weight");
    total += w;
  }
  if (total > 1.0 + 1e-9)
    throw std::invalid_argument("paintbox: weights must sum to at most 1");
  Partition p;
  p.n = n;
  std::vector<std::vector<long>> by_label(weights.size());
  for (long i = 0; i < n; ++i) {
    double u = rng.uniform();
    long label = -1;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (u < weights[k]) {
        label = static_cast<long>(k);
        break;
      }
      u -= weights[k];
    }
    if (label < 0) {
      p.blocks.push_back({i});  // residual mass: singleton
    } else {
      by_label[label].push_back(i);
    }
  }
  for (auto& b : by_label)
    if (!b.empty()) p.blocks.push_back(std::move(b));
  return p;
}

Partition py_sample(double alpha, double theta, long n, RngStream& rng) {
  if (!(alpha >= 0) || !(alpha < 1) || !(theta > -alpha))
    throw std::invalid_argument("py_sample: need alpha in [0,1), theta > -alpha");
  Partition p;
  p.n = n;
  std::vector<long> sizes;
  for (long i = 0; i < n; ++i) {
    const double denom = theta + i;
    double u = rng.uniform() * denom;
    long chosen = -1;
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      const double w = sizes[b] - alpha;
      if (u < w) {
        chosen = static_cast<long>(b);
        break;
      }
      u -= w;
    }
    if (chosen < 0) {
      p.blocks.push_back({i});
      sizes.push_back(1);
    } else {
      p.blocks[chosen].push_back(i);
      sizes[chosen] += 1;
    }
  }
  return p;
}

Partition crp_sample(double theta, long n, RngStream& rng) {
  if (!(theta > 0)) throw std::invalid_argument("crp_sample: theta must be > 0");
  return py_sample(0.0, theta, n, rng);
}

Partition bridge_partition(const LevyDensity& lv, const ScalingLaw& pstar, long n,
                           double threshold, RngStream& rng) {
  ConditionResult r = condition_mass(lv, pstar, threshold, 1000000, rng);
  std::vector<double> norm = r.measure.weights;
  for (double& w : norm) w /= r.mass;
  return paintbox(norm, n, rng);
}

WeightedEstimate surrogate_reweight(const LevyDensity& lv,
                                    const std::function<double(double)>& h,
                                    const std::vector<SampleRecord>& samples) {
  if (samples.empty())
    throw std::invalid_argument("surrogate_reweight: no samples");
  WeightedEstimate out;
  out.weights.reserve(samples.size());
  double total = 0.0;
  for (const auto& s : samples) {
    const double w = h(s.a * s.t) / (s.a * lv.density(s.a));
    if (!(w >= 0) || !std::isfinite(w))
      throw std::invalid_argument("surrogate_reweight: bad importance weight");
    out.weights.push_back(w);
    total += w;
  }
  if (!(total > 0))
    throw std::invalid_argument("surrogate_reweight: all weights vanish");
  double sumsq = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.weights[i] /= total;
    out.estimate += out.weights[i] * samples[i].statistic;
    sumsq += out.weights[i] * out.weights[i];
  }
  out.ess = 1.0 / sumsq;
  out.low_ess = out.ess < 50.0;
  return out;
}

CoupledDraw coupled_crp_ibp(double theta, long n, RngStream& rng) {
  const LevyDensity lv = LevyDensity::scale_invariant(theta);
  ConditionResult r =
      condition_mass(lv, ScalingLaw::largest_jump(), 1.0, 1000000, rng);
  CoupledDraw d;
  d.mass = r.mass;
  std::vector<double> norm = r.measure.weights;
  for (double& w : norm) w /= r.mass;
  d.partition = paintbox(norm, n, rng);
  d.matrix = sample_bernoulli_matrix(r.measure, n, rng);
  return d;
}

}  // namespace jot
