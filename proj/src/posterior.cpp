#include "jot/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "jot/quad.hpp"
#include "jot/special.hpp"

namespace jot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool scale_invariant_fast(const LevyDensity& lv, double a) {
  return lv.family() == LevyFamily::scale_invariant && a <= 1.0;
}
}  // namespace

double c_a(const LevyDensity& lv, double a, long n, long nk, CaVariant v) {
  if (!(a > 0)) throw std::invalid_argument("c_a: a must be > 0");
  if (nk < 0 || nk > n) throw std::invalid_argument("c_a: need 0 <= nk <= n");
  if (v == CaVariant::display_form) {
    return quad(
        [&](double s) {
          return std::pow(s, nk) * std::pow(1.0 - s, n - nk) * lv.density(a * s);
        },
        0.0, a, 1e-10);
  }
  if (scale_invariant_fast(lv, a))
    return nk >= 1 ? lv.params()[0] * beta_fn(nk, n - nk + 1.0) : kInf;
  if (lv.family() == LevyFamily::stable) {
    const double c = lv.params()[0], alpha = lv.params()[1];
    return nk >= 1 ? c * std::pow(a, -alpha) * beta_fn(nk - alpha, n - nk + 1.0)
                   : kInf;
  }
  const double hi = std::min(1.0, lv.support_hi() / a);
  return quad(
      [&](double s) {
        return std::pow(s, nk) * std::pow(1.0 - s, n - nk) * a * lv.density(a * s);
      },
      0.0, hi, 1e-10);
}

double psi_n(const LevyDensity& lv, double a, long n) {
  if (!(a > 0)) throw std::invalid_argument("psi_n: a must be > 0");
  if (n < 0) throw std::invalid_argument("psi_n: n must be >= 0");
  if (n == 0) return 0.0;
  if (scale_invariant_fast(lv, a)) {
    double h = 0.0;
    for (long k = 1; k <= n; ++k) h += 1.0 / k;
    return lv.params()[0] * h;
  }
  if (lv.family() == LevyFamily::stable) {
    const double c = lv.params()[0], alpha = lv.params()[1];
    double s = 0.0;
    for (long j = 1; j <= n; ++j) s += beta_fn(1.0 - alpha, j);
    return c * std::pow(a, -alpha) * s;
  }
  const double hi = std::min(1.0, lv.support_hi() / a);
  return quad(
      [&](double s) {
        return a * (-std::expm1(n * std::log1p(-s))) * lv.density(a * s);
      },
      0.0, hi, 1e-10);
}

LevyDensity posterior_levy(const LevyDensity& lv, double a, long n) {
  if (n < 0) throw std::invalid_argument("posterior_levy: n must be >= 0");
  if (n == 0) return conditional_levy(lv, a);
  const double hi = std::min(1.0, lv.support_hi() / a);
  auto dens = [lv, a, n](double s) {
    return a * std::pow(1.0 - s, n) * lv.density(a * s);
  };
  return make_derived(dens, 0.0, hi, {}, {}, lv.label() + "|a,n");
}

RankedJumps posterior_levy_thinned(const LevyDensity& lv, double a, long n,
                                   const TruncationRule& trunc, RngStream& rng) {
  const LevyDensity cond = conditional_levy(lv, a);
  RankedJumps all = sample_ranked_jumps(cond, 0.0, trunc, rng);
  RankedJumps out;
  for (double s : all.jumps)
    if (rng.uniform() < std::pow(1.0 - s, n)) out.jumps.push_back(s);
  out.count = static_cast<long>(out.jumps.size());
  out.tail_mass_bound = all.tail_mass_bound;
  return out;
}

double sample_observed_jump(const LevyDensity& lv, double a, long n, long nk,
                            RngStream& rng) {
  if (nk < 1) throw std::invalid_argument("sample_observed_jump: nk must be >= 1");
  const double hi = std::min(1.0, lv.support_hi() / a);
  // adaptive grid in the logit coordinate; mass element includes the
  // Jacobian s(1 - s/hi) of the transform
  const int n_pts = 10000;
  std::vector<double> s_grid(n_pts), mass(n_pts);
  double total = 0.0;
  for (int i = 0; i < n_pts; ++i) {
    const double w = -30.0 + 60.0 * (i + 0.5) / n_pts;
    const double s = hi / (1.0 + std::exp(-w));
    s_grid[i] = s;
    const double dens =
        std::pow(s, nk) * std::pow(1.0 - s, n - nk) * a * lv.density(a * s);
    mass[i] = dens * s * (1.0 - s / hi) * (60.0 / n_pts);
    total += mass[i];
  }
  if (!(total > 0) || !std::isfinite(total))
    throw std::runtime_error("sample_observed_jump: degenerate density");
  double u = rng.uniform() * total;
  for (int i = 0; i < n_pts; ++i) {
    if (u <= mass[i] || i == n_pts - 1) {
      const double frac = mass[i] > 0 ? u / mass[i] : 0.5;
      const double w_lo = -30.0 + 60.0 * i / n_pts;
      const double w_hi = -30.0 + 60.0 * (i + 1) / n_pts;
      const double w = w_lo + frac * (w_hi - w_lo);
      return hi / (1.0 + std::exp(-w));
    }
    u -= mass[i];
  }
  return s_grid.back();
}

GridDistribution::GridDistribution(std::vector<double> points,
                                   std::vector<double> weights) {
  if (points.size() != weights.size() || points.size() < 2)
    throw std::invalid_argument("GridDistribution: bad grid");
  points_ = std::move(points);
  masses_ = std::move(weights);
  double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (!(total > 0) || !std::isfinite(total))
    throw std::runtime_error("GridDistribution: vanishing normalizer");
  for (auto& m : masses_) m /= total;
  cdf_.resize(masses_.size());
  std::partial_sum(masses_.begin(), masses_.end(), cdf_.begin());
  cdf_.back() = 1.0;
  // geometric cell edges
  edges_.resize(points_.size() + 1);
  for (std::size_t i = 1; i < points_.size(); ++i)
    edges_[i] = std::sqrt(points_[i - 1] * points_[i]);
  edges_.front() = points_.front() * points_.front() / edges_[1];
  edges_.back() = points_.back() * points_.back() / edges_[points_.size() - 1];
}

double GridDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform();
  const std::size_t i =
      std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin();
  return std::exp(rng.uniform(std::log(edges_[i]), std::log(edges_[i + 1])));
}

double GridDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) m += points_[i] * masses_[i];
  return m;
}

std::string GridDistribution::to_json() const {
  nlohmann::json j;
  j["points"] = points_;
  j["masses"] = masses_;
  return j.dump();
}

namespace {

double log_posterior_at(const LevyDensity& lv,
                        const std::function<double(double)>& prior,
                        const ObservationSummary& obs, double a) {
  const double p = prior(a);
  if (!(p > 0)) return -kInf;
  double lp = std::log(p);
  if (obs.n > 0) {
    lp -= psi_n(lv, a, obs.n);
    for (long nk : obs.counts) {
      const double c = c_a(lv, a, obs.n, nk);
      if (!(c > 0) || !std::isfinite(c)) return -kInf;
      lp += std::log(c);
    }
  }
  return std::isfinite(lp) ? lp : -kInf;
}

}  // namespace

GridDistribution delta_posterior(const LevyDensity& lv,
                                 const std::function<double(double)>& pstar_density,
                                 const ObservationSummary& obs, double grid_lo,
                                 double grid_hi, int n_points) {
  if (!(grid_lo > 0) || !(grid_lo < grid_hi))
    throw std::invalid_argument("delta_posterior: bad grid range");
  // coarse pass locates the region carrying mass
  const int coarse = 241;
  const double llo = std::log(grid_lo), lhi = std::log(grid_hi);
  std::vector<double> clp(coarse);
  double best = -kInf;
  for (int i = 0; i < coarse; ++i) {
    const double a = std::exp(llo + (lhi - llo) * i / (coarse - 1));
    clp[i] = log_posterior_at(lv, pstar_density, obs, a);
    best = std::max(best, clp[i]);
  }
  if (!std::isfinite(best))
    throw std::runtime_error("delta_posterior: vanishing normalizer on grid");
  int i_lo = 0, i_hi = coarse - 1;
  while (i_lo < coarse - 1 && clp[i_lo] < best - 40.0 &&
         clp[i_lo + 1] < best - 40.0)
    ++i_lo;
  while (i_hi > 0 && clp[i_hi] < best - 40.0 && clp[i_hi - 1] < best - 40.0)
    --i_hi;
  const double flo = llo + (lhi - llo) * std::max(0, i_lo - 1) / (coarse - 1);
  const double fhi = llo + (lhi - llo) * std::min(coarse - 1, i_hi + 1) / (coarse - 1);

  std::vector<double> pts(n_points), mass(n_points);
  double fbest = -kInf;
  std::vector<double> lp(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double la = flo + (fhi - flo) * (i + 0.5) / n_points;
    pts[i] = std::exp(la);
    lp[i] = log_posterior_at(lv, pstar_density, obs, pts[i]);
    fbest = std::max(fbest, lp[i]);
  }
  const double dl = (fhi - flo) / n_points;
  for (int i = 0; i < n_points; ++i)
    mass[i] = std::isfinite(lp[i]) ? std::exp(lp[i] - fbest) * pts[i] * dl : 0.0;
  return GridDistribution(std::move(pts), std::move(mass));
}

PredictiveRow predictive_row(const LevyDensity& lv,
                             const std::function<double(RngStream&)>& a_sampler,
                             const ObservationSummary& obs, RngStream& rng) {
  PredictiveRow row;
  row.a = a_sampler(rng);
  const long n = obs.n;
  for (long nk : obs.counts) {
    const double p = c_a(lv, row.a, n + 1, nk + 1) / c_a(lv, row.a, n, nk);
    row.include.push_back(rng.uniform() < p ? 1 : 0);
  }
  const double q_n = c_a(lv, row.a, n + 1, 1);
  row.new_count = rng.poisson(q_n);
  return row;
}

std::function<double(double)> scaling_law_density(const ScalingLaw& pstar,
                                                  const LevyDensity& lv) {
  switch (pstar.kind) {
    case ScalingLaw::Kind::largest_jump:
      return [lv](double a) { return largest_jump_pdf(lv, a); };
    case ScalingLaw::Kind::distribution: {
      const Dist d = pstar.dist;
      const std::vector<double> p = pstar.dist_params;
      const double pw = pstar.power;
      if (pw == 1.0)
        return [d, p](double a) { return variate_pdf(d, p, a); };
      // a = x^pw: f_a(a) = f(a^{1/pw}) |1/pw| a^{1/pw - 1}
      return [d, p, pw](double a) {
        if (!(a > 0)) return 0.0;
        const double x = std::pow(a, 1.0 / pw);
        return variate_pdf(d, p, x) * std::fabs(1.0 / pw) * x / a;
      };
    }
    case ScalingLaw::Kind::fixed:
      throw std::invalid_argument(
          "scaling_law_density: fixed law has no density; condition directly");
  }
  throw std::logic_error("scaling_law_density: bad kind");
}

}  // namespace jot
