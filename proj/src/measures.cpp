#include "jot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "jot/special.hpp"

namespace jot {

namespace {
constexpr double kScalingFloor = 1e-12;
}

ScalingLaw ScalingLaw::largest_jump() {
  return {Kind::largest_jump, 0.0, Dist::gamma, {}, 1.0};
}

ScalingLaw ScalingLaw::fixed(double a) {
  if (!(a > 0)) throw std::invalid_argument("ScalingLaw::fixed: a must be > 0");
  return {Kind::fixed, a, Dist::gamma, {}, 1.0};
}

ScalingLaw ScalingLaw::distribution(Dist d, std::vector<double> params,
                                    double power) {
  if (power == 0.0)
    throw std::invalid_argument("ScalingLaw::distribution: power must be nonzero");
  return {Kind::distribution, 0.0, d, std::move(params), power};
}

double ScalingLaw::sample(const LevyDensity& lv, RngStream& rng) const {
  switch (kind) {
    case Kind::largest_jump:
      return lv.inv_tail(rng.exponential());
    case Kind::fixed:
      return value;
    case Kind::distribution: {
      double a = sample_variate(dist, dist_params, rng);
      if (power != 1.0) a = std::pow(a, power);
      return std::max(kScalingFloor, a);
    }
  }
  throw std::logic_error("ScalingLaw: bad kind");
}

double UnitaryMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::string UnitaryMeasure::to_json() const {
  nlohmann::json j;
  j["weights"] = weights;
  j["atoms"] = atoms;
  if (delta_ref > 0) j["delta_ref"] = delta_ref;
  if (has_zeta) j["zeta"] = zeta;
  j["truncation"] = {{"count", truncation_count},
                     {"tail_mass_bound", tail_mass_bound}};
  return j.dump();
}

namespace {

UnitaryMeasure from_jumps(const RankedJumps& rj, double scale) {
  UnitaryMeasure m;
  m.weights.reserve(rj.jumps.size());
  for (double s : rj.jumps) m.weights.push_back(s / scale);
  m.atoms.resize(m.weights.size());
  std::iota(m.atoms.begin(), m.atoms.end(), 0L);
  m.truncation_count = rj.count;
  m.tail_mass_bound = rj.tail_mass_bound / scale;
  return m;
}

}  // namespace

UnitaryMeasure sample_jot(const LevyDensity& lv, const ScalingLaw& pstar,
                          const TruncationRule& trunc, RngStream& rng) {
  double a, start;
  if (pstar.kind == ScalingLaw::Kind::largest_jump) {
    start = rng.exponential();
    a = lv.inv_tail(start);
  } else {
    a = pstar.sample(lv, rng);
    start = lv.tail(a);
  }
  TruncationRule rule = trunc;
  if (rule.mode == TruncationRule::Mode::relative_floor && rule.reference <= 0)
    rule.reference = a;
  UnitaryMeasure m = from_jumps(sample_ranked_jumps(lv, start, rule, rng), a);
  m.delta_ref = a;
  return m;
}

LevyDensity conditional_levy(const LevyDensity& lv, double a) {
  if (!(a > 0)) throw std::invalid_argument("conditional_levy: a must be > 0");
  const double hi = std::min(1.0, lv.support_hi() / a);
  auto dens = [lv, a](double s) { return a * lv.density(a * s); };
  std::function<double(double)> tail, inv;
  if (lv.has_closed_tail()) {
    const double base = lv.tail(a * hi);
    tail = [lv, a, hi, base](double s) {
      return s >= hi ? 0.0 : lv.tail(a * s) - base;
    };
    inv = [lv, a, base](double t) { return lv.inv_tail(t + base) / a; };
  }
  return make_derived(dens, 0.0, hi, tail, inv, lv.label() + "|a");
}

UnitaryMeasure sample_scaled_levy(const LevyDensity& lv, double zeta,
                                  const TruncationRule& trunc, RngStream& rng) {
  if (!(zeta > 0)) throw std::invalid_argument("sample_scaled_levy: zeta must be > 0");
  if (lv.support_hi() > 1.0 + 1e-12)
    throw std::invalid_argument("sample_scaled_levy: support must lie in (0,1]");
  auto dens = [lv, zeta](double s) { return zeta * lv.density(s); };
  std::function<double(double)> tail, inv;
  if (lv.has_closed_tail()) {
    tail = [lv, zeta](double s) { return zeta * lv.tail(s); };
    inv = [lv, zeta](double t) { return lv.inv_tail(t / zeta); };
  }
  LevyDensity scaled =
      make_derived(dens, lv.support_lo(), lv.support_hi(), tail, inv,
                   lv.label() + "*zeta");
  UnitaryMeasure m = from_jumps(sample_ranked_jumps(scaled, 0.0, trunc, rng), 1.0);
  m.has_zeta = true;
  m.zeta = zeta;
  return m;
}

UnitaryMeasure thin(const UnitaryMeasure& m, const std::function<double(double)>& h,
                    RngStream& rng) {
  UnitaryMeasure out;
  out.delta_ref = m.delta_ref;
  out.has_zeta = m.has_zeta;
  out.zeta = m.zeta;
  out.tail_mass_bound = m.tail_mass_bound;
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    const double p = h(m.weights[k]);
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::invalid_argument("thin: h(" + std::to_string(m.weights[k]) +
                                  ") = " + std::to_string(p) + " outside [0,1]");
    if (rng.uniform() < p) {
      out.weights.push_back(m.weights[k]);
      out.atoms.push_back(m.atoms.empty() ? static_cast<long>(k) : m.atoms[k]);
    }
  }
  out.truncation_count = static_cast<long>(out.weights.size());
  return out;
}

LevyDensity thinned_levy(const LevyDensity& lv, std::function<double(double)> h) {
  auto dens = [lv, h = std::move(h)](double s) { return h(s) * lv.density(s); };
  return make_derived(dens, lv.support_lo(), lv.support_hi(), {}, {},
                      lv.label() + "*h");
}

UnitaryMeasure stable_beta_by_scaling(double alpha, double theta, double tau,
                                      const TruncationRule& trunc, RngStream& rng) {
  if (!(alpha > 0) || !(alpha < 1) || !(tau > 0) || !(theta > -alpha))
    throw std::invalid_argument(
        "stable_beta_by_scaling: need alpha in (0,1), tau > 0, theta > -alpha");
  UnitaryMeasure m;
  if (theta >= 0.0) {
    // stable(c=alpha) jump x -> s = x/(x+tau) has intensity
    // alpha tau^{-alpha} s^{-1-alpha} (1-s)^{alpha-1}; thin by (1-s)^theta
    double t = 0.0;
    const long cap = 2'000'000;
    for (long k = 0; k < cap; ++k) {
      t += rng.exponential();
      const double x = std::pow(t, -1.0 / alpha);
      const double s = x / (x + tau);
      if (trunc.mode == TruncationRule::Mode::relative_floor &&
          s < trunc.value * (trunc.reference > 0 ? trunc.reference : 1.0))
        break;
      if (theta == 0.0 || rng.uniform() < std::pow(1.0 - s, theta))
        m.weights.push_back(s);
      if (trunc.mode == TruncationRule::Mode::fixed_count &&
          m.weights.size() >= static_cast<std::size_t>(trunc.value))
        break;
      if (trunc.mode == TruncationRule::Mode::tail_mass) {
        const double sup =
            theta + alpha < 1.0 ? std::pow(1.0 - s, theta + alpha - 1.0) : 1.0;
        const double bound = alpha * std::pow(tau, -alpha) * sup *
                             std::pow(s, 1.0 - alpha) / (1.0 - alpha);
        if (bound < trunc.value) break;
      }
    }
    const double floor = m.weights.empty() ? 0.0 : m.weights.back();
    const double sup =
        theta + alpha < 1.0 ? std::pow(1.0 - floor, theta + alpha - 1.0) : 1.0;
    m.tail_mass_bound = floor > 0 ? alpha * std::pow(tau, -alpha) * sup *
                                        std::pow(floor, 1.0 - alpha) / (1.0 - alpha)
                                  : 0.0;
  } else {
    // direct route for the range where thinning probabilities exceed 1
    static std::mutex mu;
    static std::map<std::tuple<double, double, double>, LevyDensity> cache;
    const LevyDensity* target = nullptr;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto key = std::make_tuple(alpha, theta, tau);
      auto it = cache.find(key);
      if (it == cache.end()) {
        const double c =
            alpha * std::pow(tau, -alpha) * beta_fn(theta + alpha, 1.0 - alpha);
        it = cache.emplace(key, LevyDensity::stable_beta(c, theta, alpha)).first;
      }
      target = &it->second;
    }
    m = from_jumps(sample_ranked_jumps(*target, 0.0, trunc, rng), 1.0);
  }
  m.atoms.resize(m.weights.size());
  std::iota(m.atoms.begin(), m.atoms.end(), 0L);
  m.truncation_count = static_cast<long>(m.weights.size());
  return m;
}

}  // namespace jot
