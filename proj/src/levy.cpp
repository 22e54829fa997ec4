#include "jot/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

#include "jot/quad.hpp"
#include "jot/special.hpp"

namespace jot {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Monotone tail table: Lambda sampled on a grid refined toward both
// support endpoints, inverted by bisection on a monotone Hermite
// interpolant of the stretched coordinate against log Lambda.
struct LevyDensity::TailTable {
  double lo = 0, hi = 1;
  bool hi_finite = true;
  std::vector<double> s;    // increasing
  std::vector<double> lam;  // strictly decreasing

  double stretch(double x) const {
    return hi_finite ? std::log(x - lo) - std::log(hi - x) : std::log(x - lo);
  }
  double unstretch(double w) const {
    if (!hi_finite) return lo + std::exp(w);
    return lo + (hi - lo) / (1.0 + std::exp(-w));
  }

  // Hermite data over increasing z = log(lam) (reverse s order)
  std::vector<double> z, w, slope;

  void finalize() {
    const std::size_t n = s.size();
    z.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = std::log(lam[n - 1 - i]);
      w[i] = stretch(s[n - 1 - i]);
    }
    // Fritsch-Carlson monotone slopes
    slope.assign(n, 0.0);
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (w[i + 1] - w[i]) / (z[i + 1] - z[i]);
    slope[0] = d[0];
    slope[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0) {
        slope[i] = 0.0;
      } else {
        const double h0 = z[i] - z[i - 1], h1 = z[i + 1] - z[i];
        const double wsum = 2 * h1 + h0, wsum2 = h1 + 2 * h0;
        slope[i] = (wsum + wsum2) / (wsum / d[i - 1] + wsum2 / d[i]);
      }
    }
  }

  double interp_w(double zq) const {
    auto it = std::upper_bound(z.begin(), z.end(), zq);
    std::size_t i = (it == z.begin()) ? 0 : (it - z.begin() - 1);
    if (i + 1 >= z.size()) i = z.size() - 2;
    const double h = z[i + 1] - z[i];
    const double t = (zq - z[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * w[i] + (t3 - 2 * t2 + t) * h * slope[i] +
           (-2 * t3 + 3 * t2) * w[i + 1] + (t3 - t2) * h * slope[i + 1];
  }

  double inverse(double t) const {
    const double lam_max = lam.front(), lam_min = lam.back();
    const double s_min = s.front(), s_max = s.back();
    if (t >= lam_max) {
      // below the table: extrapolate the endpoint behavior at lo
      const double l0 = std::log(s[0] - lo), l1 = std::log(s[1] - lo);
      const double p = (std::log(lam[0]) - std::log(lam[1])) / (l1 - l0);
      if (p > 0.01)  // power singularity
        return lo + (s_min - lo) * std::pow(lam_max / t, 1.0 / p);
      const double b = (lam[0] - lam[1]) / (l1 - l0);  // logarithmic tail
      return lo + (s_min - lo) * std::exp(-(t - lam_max) / b);
    }
    if (t <= lam_min) {
      const std::size_t n = s.size();
      if (hi_finite) {
        const double g0 = std::log(hi - s[n - 1]), g1 = std::log(hi - s[n - 2]);
        const double q = (std::log(lam[n - 2]) - std::log(lam[n - 1])) / (g1 - g0);
        if (q > 0.01)
          return hi - (hi - s_max) * std::pow(t / lam_min, 1.0 / q);
        return s_max;  // flat; t below resolution
      }
      const double r = (std::log(lam[n - 2]) - std::log(lam[n - 1])) / (s[n - 1] - s[n - 2]);
      return s_max + (std::log(lam_min) - std::log(t)) / r;
    }
    return unstretch(interp_w(std::log(t)));
  }
};

// ---------------------------------------------------------------------------

double LevyDensity::density(double s) const {
  if (s <= lo_ || s >= hi_) {
    // closed support at hi for finite-support families
    if (!(s == hi_ && std::isfinite(hi_))) return 0.0;
  }
  return density_(s);
}

bool LevyDensity::has_closed_tail() const { return static_cast<bool>(closed_tail_); }

double LevyDensity::tail(double s) const {
  if (s <= lo_) return closed_tail_ ? closed_tail_(std::nextafter(lo_, hi_)) : kInf;
  if (s >= hi_) return 0.0;
  if (closed_tail_) return closed_tail_(s);
  return quad([this](double u) { return density_(u); }, s, hi_, 1e-11);
}

void LevyDensity::build_table() const {
  if (table_) return;
  auto tab = std::make_shared<TailTable>();
  tab->lo = lo_;
  tab->hi = hi_;
  tab->hi_finite = std::isfinite(hi_);
  double s_top;
  if (tab->hi_finite) {
    s_top = hi_;
  } else {
    // extend until the remaining tail is negligible
    s_top = lo_ + 1.0;
    while (quad(density_, s_top, kInf, 1e-13) > 1e-13 && s_top < lo_ + 1e12)
      s_top = lo_ + 2.0 * (s_top - lo_);
  }
  const double span = s_top - lo_;
  std::vector<double> grid;
  const int n_lo = 2800, n_hi = 1400;
  for (int i = 0; i < n_lo; ++i) {
    const double e = std::log(1e-15) + (std::log(0.5) - std::log(1e-15)) * i / (n_lo - 1);
    grid.push_back(lo_ + span * std::exp(e));
  }
  if (tab->hi_finite) {
    for (int i = 0; i < n_hi; ++i) {
      const double e = std::log(1e-12) + (std::log(0.5) - std::log(1e-12)) * i / (n_hi - 1);
      grid.push_back(s_top - span * std::exp(e));
    }
  } else {
    for (int i = 1; i < n_hi; ++i)
      grid.push_back(lo_ + span * (0.5 + 0.5 * i / (n_hi - 1.0)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // cumulative tail from the top
  std::vector<double> lam(grid.size());
  double acc = tab->hi_finite ? 0.0 : quad(density_, grid.back(), kInf, 1e-13);
  if (tab->hi_finite && grid.back() < hi_)
    acc = quad(density_, grid.back(), hi_, 1e-13);
  lam.back() = acc;
  for (std::size_t i = grid.size() - 1; i-- > 0;) {
    acc += quad(density_, grid[i], grid[i + 1], 1e-13);
    lam[i] = acc;
  }
  // keep strictly decreasing entries only
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (lam[i] <= 0) break;
    if (!tab->lam.empty() && !(lam[i] < tab->lam.back() * (1.0 - 1e-14)))
      continue;
    if (!tab->lam.empty() && !(lam[i] < tab->lam.back())) continue;
    tab->s.push_back(grid[i]);
    tab->lam.push_back(lam[i]);
  }
  // stored in decreasing-lam (increasing s) order already
  if (tab->s.size() < 8)
    throw std::runtime_error("levy: tail table degenerate for " + label_);
  tab->finalize();
  table_ = std::move(tab);
}

double LevyDensity::inv_tail(double t) const {
  if (t < 0) throw std::invalid_argument("inv_tail: negative tail value");
  if (closed_inv_tail_) {
    if (t == 0.0) return hi_;
    return closed_inv_tail_(t);
  }
  if (t == 0.0) return hi_;
  build_table();
  return table_->inverse(t);
}

double LevyDensity::mass_below(double s) const {
  if (s <= lo_) return 0.0;
  const double top = std::min(s, hi_);
  switch (family_) {
    case LevyFamily::scale_invariant:
      return params_[0] * std::min(top, 1.0);
    case LevyFamily::stable:
      return params_[0] * std::pow(top, 1.0 - params_[1]) / (1.0 - params_[1]);
    case LevyFamily::gamma:
      return params_[0] * (1.0 - std::exp(-top));
    default:
      return quad([this](double u) { return u * density_(u); }, lo_, top, 1e-10);
  }
}

void LevyDensity::check_integrability() const {
  const double cap = std::min(hi_, 1.0);
  double m = quad([this](double u) { return u * density_(u); }, lo_, cap, 1e-8);
  if (hi_ > 1.0) m += quad(density_, 1.0, hi_, 1e-8);
  if (!std::isfinite(m))
    throw std::invalid_argument("levy: density fails the integrability check");
}

LevyDensity LevyDensity::scale_invariant(double theta) {
  if (!(theta > 0)) throw std::invalid_argument("scale_invariant: theta must be > 0");
  LevyDensity lv;
  lv.family_ = LevyFamily::scale_invariant;
  lv.params_ = {theta};
  lv.label_ = "scale_invariant";
  lv.lo_ = 0.0;
  lv.hi_ = 1.0;
  lv.density_ = [theta](double s) { return theta / s; };
  lv.closed_tail_ = [theta](double s) { return s >= 1.0 ? 0.0 : -theta * std::log(s); };
  lv.closed_inv_tail_ = [theta](double t) { return std::exp(-t / theta); };
  return lv;
}

LevyDensity LevyDensity::stable(double c, double alpha) {
  if (!(c > 0) || !(alpha > 0) || !(alpha < 1))
    throw std::invalid_argument("stable: need c > 0 and alpha in (0,1)");
  LevyDensity lv;
  lv.family_ = LevyFamily::stable;
  lv.params_ = {c, alpha};
  lv.label_ = "stable";
  lv.lo_ = 0.0;
  lv.hi_ = kInf;
  lv.density_ = [c, alpha](double s) { return c * std::pow(s, -1.0 - alpha); };
  lv.closed_tail_ = [c, alpha](double s) { return (c / alpha) * std::pow(s, -alpha); };
  lv.closed_inv_tail_ = [c, alpha](double t) {
    return std::pow(alpha * t / c, -1.0 / alpha);
  };
  return lv;
}

LevyDensity LevyDensity::beta_process(double c, double alpha) {
  if (!(c > 0) || !(alpha > 0) || !(alpha < 1))
    throw std::invalid_argument("beta_process: need c > 0 and alpha in (0,1)");
  LevyDensity lv;
  lv.family_ = LevyFamily::beta_process;
  lv.params_ = {c, alpha};
  lv.label_ = "beta_process";
  lv.lo_ = 0.0;
  lv.hi_ = 1.0;
  lv.density_ = [c, alpha](double s) {
    return c * std::pow(s, -1.0 - alpha) * std::pow(1.0 - s, alpha - 1.0);
  };
  lv.closed_tail_ = [c, alpha](double s) {
    return s >= 1.0 ? 0.0 : (c / alpha) * std::pow((1.0 - s) / s, alpha);
  };
  lv.closed_inv_tail_ = [c, alpha](double t) {
    return 1.0 / (1.0 + std::pow(alpha * t / c, 1.0 / alpha));
  };
  return lv;
}

LevyDensity LevyDensity::stable_beta(double c, double theta, double alpha) {
  if (!(c > 0) || !(alpha > 0) || !(alpha < 1) || !(theta + alpha > 0))
    throw std::invalid_argument(
        "stable_beta: need c > 0, alpha in (0,1), theta + alpha > 0");
  LevyDensity lv;
  lv.family_ = LevyFamily::stable_beta;
  lv.params_ = {c, theta, alpha};
  lv.label_ = "stable_beta";
  lv.lo_ = 0.0;
  lv.hi_ = 1.0;
  const double norm = c / beta_fn(theta + alpha, 1.0 - alpha);
  lv.density_ = [norm, theta, alpha](double s) {
    return norm * std::pow(s, -alpha - 1.0) * std::pow(1.0 - s, theta + alpha - 1.0);
  };
  lv.check_integrability();
  return lv;
}

LevyDensity LevyDensity::stable_beta_simple(double alpha, double theta) {
  return stable_beta(alpha * beta_fn(theta + alpha, 1.0 - alpha), theta, alpha);
}

LevyDensity LevyDensity::gamma_process(double theta) {
  if (!(theta > 0)) throw std::invalid_argument("gamma_process: theta must be > 0");
  LevyDensity lv;
  lv.family_ = LevyFamily::gamma;
  lv.params_ = {theta};
  lv.label_ = "gamma";
  lv.lo_ = 0.0;
  lv.hi_ = kInf;
  lv.density_ = [theta](double s) { return theta * std::exp(-s) / s; };
  lv.closed_tail_ = [theta](double s) { return theta * expint_e1(s); };
  lv.closed_inv_tail_ = [theta](double t) {
    // bisection in log s; Lambda = theta E1(s) is strictly decreasing
    double llo = std::log(1e-300), lhi = 0.0;
    while (theta * expint_e1(std::exp(lhi)) > t) lhi += 1.0;
    for (int it = 0; it < 200 && lhi - llo > 1e-13; ++it) {
      const double mid = 0.5 * (llo + lhi);
      if (theta * expint_e1(std::exp(mid)) > t)
        llo = mid;
      else
        lhi = mid;
    }
    return std::exp(0.5 * (llo + lhi));
  };
  return lv;
}

LevyDensity LevyDensity::custom(std::function<double(double)> density, double lo,
                                double hi, std::string label) {
  if (!(lo >= 0) || !(lo < hi))
    throw std::invalid_argument("custom: need 0 <= lo < hi");
  LevyDensity lv;
  lv.family_ = LevyFamily::custom;
  lv.label_ = std::move(label);
  lv.lo_ = lo;
  lv.hi_ = hi;
  lv.density_ = std::move(density);
  lv.check_integrability();
  return lv;
}

LevyDensity make_derived(std::function<double(double)> density, double lo,
                         double hi, std::function<double(double)> closed_tail,
                         std::function<double(double)> closed_inv_tail,
                         std::string label) {
  LevyDensity lv;
  lv.family_ = LevyFamily::derived;
  lv.label_ = std::move(label);
  lv.lo_ = lo;
  lv.hi_ = hi;
  lv.density_ = std::move(density);
  lv.closed_tail_ = std::move(closed_tail);
  lv.closed_inv_tail_ = std::move(closed_inv_tail);
  return lv;
}

// ---------------------------------------------------------------------------

TruncationRule TruncationRule::fixed_count(long k) {
  if (k <= 0) throw std::invalid_argument("fixed_count: k must be positive");
  return {Mode::fixed_count, static_cast<double>(k), 0.0};
}
TruncationRule TruncationRule::relative_floor(double eps, double reference) {
  if (!(eps > 0)) throw std::invalid_argument("relative_floor: eps must be positive");
  return {Mode::relative_floor, eps, reference};
}
TruncationRule TruncationRule::tail_mass(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("tail_mass: tau must be positive");
  return {Mode::tail_mass, tau, 0.0};
}

double largest_jump_pdf(const LevyDensity& lv, double s) {
  if (s <= lv.support_lo() || s > lv.support_hi()) return 0.0;
  return lv.density(s) * std::exp(-lv.tail(s));
}

RankedJumps sample_ranked_jumps(const LevyDensity& lv, double start_tail,
                                const TruncationRule& stop, RngStream& rng) {
  if (start_tail < 0)
    throw std::invalid_argument("sample_ranked_jumps: start_tail must be >= 0");
  RankedJumps out;
  double tail = start_tail;
  double prev = kInf;
  double bound_at = -1.0;  // where the discarded mass is evaluated
  const long hard_cap = 2'000'000;
  for (long k = 0; k < hard_cap; ++k) {
    tail += rng.exponential();
    const double s = lv.inv_tail(tail);
    if (!(s < prev)) {
      if (s == prev)
        throw std::runtime_error("sample_ranked_jumps: equal adjacent jumps");
      throw std::runtime_error("sample_ranked_jumps: inverse tail not decreasing");
    }
    bool done = false;
    switch (stop.mode) {
      case TruncationRule::Mode::fixed_count:
        out.jumps.push_back(s);
        done = out.jumps.size() >= static_cast<std::size_t>(stop.value);
        break;
      case TruncationRule::Mode::relative_floor: {
        const double ref =
            stop.reference > 0 ? stop.reference
                               : (out.jumps.empty() ? s : out.jumps.front());
        if (s < stop.value * ref) {
          done = true;
          bound_at = s;  // everything discarded lies below the rejected jump
        } else {
          out.jumps.push_back(s);
        }
        break;
      }
      case TruncationRule::Mode::tail_mass:
        out.jumps.push_back(s);
        done = lv.mass_below(s) < stop.value;
        break;
    }
    prev = s;
    if (done) break;
  }
  out.count = static_cast<long>(out.jumps.size());
  if (bound_at < 0)
    bound_at = out.jumps.empty() ? lv.support_hi() : out.jumps.back();
  out.tail_mass_bound = lv.mass_below(bound_at);
  return out;
}

}  // namespace jot
