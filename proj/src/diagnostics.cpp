#include "jot/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "jot/special.hpp"

namespace jot {

namespace {

double chi_square_sf(double stat, long df) {
  if (stat <= 0) return 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

double ks_asymptotic_p(double d, double n_eff) {
  const double lam = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    p += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TestResult chi_square_two_sample(const std::vector<long>& hist_a,
                                 const std::vector<long>& hist_b) {
  if (hist_a.size() != hist_b.size())
    throw std::invalid_argument("chi_square_two_sample: binning mismatch");
  const double na = std::accumulate(hist_a.begin(), hist_a.end(), 0.0);
  const double nb = std::accumulate(hist_b.begin(), hist_b.end(), 0.0);
  if (!(na > 0) || !(nb > 0))
    throw std::invalid_argument("chi_square_two_sample: empty histogram");
  // merge adjacent bins until expected counts reach 5 in both rows
  std::vector<double> ga, gb;
  double acc_a = 0, acc_b = 0;
  for (std::size_t i = 0; i < hist_a.size(); ++i) {
    acc_a += hist_a[i];
    acc_b += hist_b[i];
    const double pooled = acc_a + acc_b;
    if (pooled * na / (na + nb) >= 5.0 && pooled * nb / (na + nb) >= 5.0) {
      ga.push_back(acc_a);
      gb.push_back(acc_b);
      acc_a = acc_b = 0;
    }
  }
  if (acc_a + acc_b > 0) {
    if (ga.empty()) {
      ga.push_back(acc_a);
      gb.push_back(acc_b);
    } else {
      ga.back() += acc_a;
      gb.back() += acc_b;
    }
  }
  if (ga.size() < 2)
    throw std::invalid_argument("chi_square_two_sample: fewer than 2 usable bins");
  double stat = 0.0;
  for (std::size_t g = 0; g < ga.size(); ++g) {
    const double pooled = ga[g] + gb[g];
    const double ea = pooled * na / (na + nb);
    const double eb = pooled * nb / (na + nb);
    stat += (ga[g] - ea) * (ga[g] - ea) / ea + (gb[g] - eb) * (gb[g] - eb) / eb;
  }
  return {stat, chi_square_sf(stat, static_cast<long>(ga.size()) - 1)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  const double n_eff = na * nb / (na + nb);
  return {d, ks_asymptotic_p(d, n_eff)};
}

TestResult ks_one_sample(std::vector<double> a,
                         const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  return {d, ks_asymptotic_p(d, n)};
}

double tv_histogram(const std::vector<double>& a, const std::vector<double>& b,
                    int bins) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("tv_histogram: empty sample");
  if (bins < 2) throw std::invalid_argument("tv_histogram: need >= 2 bins");
  double lo = a[0], hi = a[0];
  for (double x : a) { lo = std::min(lo, x); hi = std::max(hi, x); }
  for (double x : b) { lo = std::min(lo, x); hi = std::max(hi, x); }
  if (!(hi > lo)) return 0.0;
  std::vector<double> pa(bins, 0.0), pb(bins, 0.0);
  auto binof = [&](double x) {
    int i = static_cast<int>((x - lo) / (hi - lo) * bins);
    return std::clamp(i, 0, bins - 1);
  };
  for (double x : a) pa[binof(x)] += 1.0 / a.size();
  for (double x : b) pb[binof(x)] += 1.0 / b.size();
  double tv = 0.0;
  for (int i = 0; i < bins; ++i) tv += std::fabs(pa[i] - pb[i]);
  return 0.5 * tv;
}

LeCamResult lecam_check(const std::vector<double>& weights, RngStream* rng,
                        long mc_reps) {
  LeCamResult r;
  double rate = 0.0;
  for (double w : weights) {
    if (!(w > 0) || !(w <= 1))
      throw std::invalid_argument("lecam_check: weights must be in (0,1]");
    r.bound += w * w;
    rate += w;
  }
  const std::size_t len = weights.size();
  if (len == 0) {
    r.pass = true;
    return r;
  }
  if (len <= 30) {
    std::vector<double> pb{1.0};
    for (double w : weights) {
      std::vector<double> next(pb.size() + 1, 0.0);
      for (std::size_t j = 0; j < pb.size(); ++j) {
        next[j] += pb[j] * (1.0 - w);
        next[j + 1] += pb[j] * w;
      }
      pb = std::move(next);
    }
    double tv = 0.0, pois_cum = 0.0;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const double po = poisson_pmf(static_cast<long>(j), rate);
      tv += std::fabs(pb[j] - po);
      pois_cum += po;
    }
    r.tv = 0.5 * tv + 0.5 * (1.0 - pois_cum);
  } else {
    if (!rng)
      throw std::invalid_argument("lecam_check: length > 30 requires an rng");
    r.exact = false;
    // sample both laws, compare pmfs over the observed support
    const long hi_cap = static_cast<long>(len + 20 * std::sqrt(rate) + 20);
    std::vector<double> pb(hi_cap + 1, 0.0), po(hi_cap + 1, 0.0);
    for (long rep = 0; rep < mc_reps; ++rep) {
      long s = 0;
      for (double w : weights)
        if (rng->uniform() < w) ++s;
      pb[std::min<long>(s, hi_cap)] += 1.0 / mc_reps;
    }
    double cum = 0.0;
    for (long j = 0; j <= hi_cap; ++j) {
      po[j] = poisson_pmf(j, rate);
      cum += po[j];
    }
    po[hi_cap] += 1.0 - cum;
    double tv = 0.0;
    for (long j = 0; j <= hi_cap; ++j) tv += std::fabs(pb[j] - po[j]);
    r.tv = 0.5 * tv;
    r.mc_stderr = 0.5 / std::sqrt(static_cast<double>(mc_reps));
  }
  r.pass = r.tv <= r.bound + 3.0 * r.mc_stderr;
  return r;
}

namespace {

double hill_point(const std::vector<double>& sorted_desc, long k) {
  const double pivot = sorted_desc[k];  // x_(k+1)
  if (!(pivot > 0)) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (long i = 0; i < k; ++i) acc += std::log(sorted_desc[i] / pivot);
  if (!(acc > 0)) return std::numeric_limits<double>::infinity();
  return k / acc;
}

}  // namespace

TailIndexResult tail_index(const std::vector<double>& samples, double k_frac,
                           RngStream& rng, int bootstrap) {
  if (samples.size() < 1000)
    throw std::invalid_argument("tail_index: need at least 1000 samples");
  if (!(k_frac > 0) || !(k_frac <= 0.5))
    throw std::invalid_argument("tail_index: k_frac must be in (0, 0.5]");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const long k = std::max<long>(1, static_cast<long>(k_frac * samples.size()));
  if (k + 1 > static_cast<long>(sorted.size()))
    throw std::invalid_argument("tail_index: too few exceedances");
  TailIndexResult r;
  r.k_used = k;
  r.estimate = hill_point(sorted, k);
  // bootstrap over the full sample
  std::vector<double> boots;
  std::vector<double> resample(samples.size());
  for (int b = 0; b < bootstrap; ++b) {
    for (std::size_t i = 0; i < samples.size(); ++i)
      resample[i] = samples[rng.next_u64() % samples.size()];
    std::sort(resample.begin(), resample.end(), std::greater<double>());
    const double e = hill_point(resample, k);
    if (std::isfinite(e)) boots.push_back(e);
  }
  if (boots.size() > 1) {
    double mean = std::accumulate(boots.begin(), boots.end(), 0.0) / boots.size();
    double var = 0.0;
    for (double e : boots) var += (e - mean) * (e - mean);
    r.stderr_boot = std::sqrt(var / (boots.size() - 1));
  }
  return r;
}

PowerLawFlag power_law_flag(const std::vector<double>& samples, RngStream& rng,
                            double max_drift) {
  (void)rng;
  PowerLawFlag f;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  const std::vector<double> fracs{0.02, 0.05, 0.1, 0.2};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool all_finite = true;
  for (double frac : fracs) {
    const long k = std::max<long>(1, static_cast<long>(frac * sorted.size()));
    const double e = hill_point(sorted, k);
    f.estimates.push_back(e);
    if (!std::isfinite(e)) {
      all_finite = false;
      continue;
    }
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  f.drift_ratio = all_finite && lo > 0 ? hi / lo
                                       : std::numeric_limits<double>::infinity();
  f.is_power_law = all_finite && f.drift_ratio <= max_drift;
  return f;
}

TvEstimate tau_beta_compare(const LevyDensity& lv, double beta,
                            std::pair<double, double> t_window, long replicates,
                            RngStream& rng) {
  if (!(beta > 0) || !(beta <= 1))
    throw std::invalid_argument("tau_beta_compare: beta must be in (0,1]");
  const TruncationRule trunc = TruncationRule::relative_floor(1e-6, 1.0);
  std::vector<double> tau_all, tau_cond;
  std::vector<int> in_window;
  tau_all.reserve(replicates);
  for (long rep = 0; rep < replicates; ++rep) {
    RankedJumps rj = sample_ranked_jumps(lv, 0.0, trunc, rng);
    double t = 0.0, tb = 0.0;
    for (double s : rj.jumps) {
      t += s;
      if (s <= beta) tb += s;
    }
    tau_all.push_back(tb);
    const bool cond = t >= t_window.first && t <= t_window.second;
    in_window.push_back(cond ? 1 : 0);
    if (cond) tau_cond.push_back(tb);
  }
  if (tau_cond.empty())
    throw std::runtime_error("tau_beta_compare: empty conditioning window");
  TvEstimate out;
  out.conditioned = static_cast<long>(tau_cond.size());
  out.tv = tv_histogram(tau_cond, tau_all, 50);
  // jackknife over 10 blocks
  const int blocks = 10;
  std::vector<double> leave;
  for (int b = 0; b < blocks; ++b) {
    std::vector<double> all_b, cond_b;
    for (long i = 0; i < replicates; ++i) {
      if (i % blocks == b) continue;
      all_b.push_back(tau_all[i]);
      if (in_window[i]) cond_b.push_back(tau_all[i]);
    }
    if (!cond_b.empty()) leave.push_back(tv_histogram(cond_b, all_b, 50));
  }
  if (leave.size() > 1) {
    const double m = std::accumulate(leave.begin(), leave.end(), 0.0) / leave.size();
    double var = 0.0;
    for (double x : leave) var += (x - m) * (x - m);
    out.stderr_jack =
        std::sqrt(var * (leave.size() - 1.0) / leave.size());
  }
  return out;
}

}  // namespace jot
