#include "jot/urns.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "jot/posterior.hpp"
#include "jot/special.hpp"

namespace jot {

UrnState UrnState::ibp_urn(double c, double theta) {
  if (!(c > 0) || !(theta > 0))
    throw std::invalid_argument("ibp_urn: c and theta must be > 0");
  UrnState s;
  s.model = Model::ibp;
  s.c = c;
  s.theta = theta;
  return s;
}

UrnState UrnState::stable_jot_urn(double alpha, ScalingLaw pstar) {
  if (!(alpha > 0) || !(alpha < 1))
    throw std::invalid_argument("stable_jot_urn: alpha must be in (0,1)");
  UrnState s;
  s.model = Model::stable_jot;
  s.alpha = alpha;
  s.pstar = std::move(pstar);
  s.lv = LevyDensity::stable(alpha, alpha);
  return s;
}

UrnState UrnState::bfry_urn(double sigma, LevyDensity lv) {
  if (!(sigma > 0) || !(sigma < 1))
    throw std::invalid_argument("bfry_urn: sigma must be in (0,1)");
  if (lv.support_hi() > 1.0 + 1e-12)
    throw std::invalid_argument("bfry_urn: lambda must be supported in (0,1]");
  UrnState s;
  s.model = Model::bfry;
  s.sigma = sigma;
  if (lv.family() == LevyFamily::stable_beta) {
    s.sb_fast = true;
    s.sb_theta = lv.params()[1];
    s.sb_alpha = lv.params()[2];
  }
  s.lv = std::move(lv);
  return s;
}

std::vector<long> ibp_next_row(UrnState& state, RngStream& rng) {
  if (state.model != UrnState::Model::ibp)
    throw std::invalid_argument("ibp_next_row: wrong model");
  std::vector<long> row;
  const double denom = state.theta + state.n;
  for (long k = 0; k < state.k_n(); ++k)
    if (rng.uniform() * denom < state.counts[k]) {
      row.push_back(k);
      state.counts[k] += 1;
    }
  const long fresh = rng.poisson(state.c * state.theta / denom);
  for (long j = 0; j < fresh; ++j) {
    row.push_back(state.k_n());
    state.counts.push_back(1);
  }
  state.n += 1;
  return row;
}

namespace {

// The stable-case scaling posterior depends on the data only through
// (K_n, n); grids are shared across chains.
const GridDistribution& stable_grid(double alpha, const ScalingLaw& pstar,
                                    const LevyDensity& lv, long k, long n) {
  static std::mutex mu;
  static std::map<std::string, GridDistribution> cache;
  std::ostringstream key;
  key << alpha << '|' << static_cast<int>(pstar.kind) << '|' << pstar.value
      << '|' << static_cast<int>(pstar.dist);
  for (double p : pstar.dist_params) key << ',' << p;
  key << '|' << k << '|' << n;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key.str());
  if (it == cache.end()) {
    ObservationSummary obs;
    obs.n = n;
    obs.counts.assign(static_cast<std::size_t>(k), 1);  // shape depends on K only
    it = cache
             .emplace(key.str(),
                      delta_posterior(lv, scaling_law_density(pstar, lv), obs))
             .first;
  }
  return it->second;
}

}  // namespace

std::vector<long> stable_jot_next_row(UrnState& state, RngStream& rng) {
  if (state.model != UrnState::Model::stable_jot)
    throw std::invalid_argument("stable_jot_next_row: wrong model");
  const double alpha = state.alpha;
  std::vector<long> row;
  const double denom = state.n + 1.0 - alpha;
  for (long k = 0; k < state.k_n(); ++k)
    if (rng.uniform() * denom < state.counts[k] - alpha) {
      row.push_back(k);
      state.counts[k] += 1;
    }
  double a;
  if (state.n == 0) {
    a = state.pstar.sample(*state.lv, rng);
  } else {
    a = stable_grid(alpha, state.pstar, *state.lv, state.k_n(), state.n)
            .sample(rng);
  }
  const double zeta = std::pow(a, -alpha);
  const double rate = zeta * alpha * beta_fn(1.0 - alpha, state.n + 1.0);
  const long fresh = rng.poisson(rate);
  for (long j = 0; j < fresh; ++j) {
    row.push_back(state.k_n());
    state.counts.push_back(1);
  }
  state.n += 1;
  return row;
}

namespace {

void ensure_psi(UrnState& state, long upto) {
  while (static_cast<long>(state.psi.size()) < upto) {
    const long k = static_cast<long>(state.psi.size()) + 1;
    double psi;
    if (state.sb_fast) {
      const double c = state.lv->params()[0];
      const double th = state.sb_theta, al = state.sb_alpha;
      psi = c / beta_fn(th + al, 1.0 - al) * beta_fn(1.0 - al, th + al + k - 1.0);
    } else {
      psi = c_a(*state.lv, 1.0, k, 1);
    }
    state.psi.push_back(psi);
  }
}

}  // namespace

double bfry_f(double x, double a, double b) {
  if (!(x >= 0) || !(x <= 1)) throw std::invalid_argument("bfry_f: x must be in [0,1]");
  if (b == 0.0) throw std::invalid_argument("bfry_f: b must be nonzero");
  if (a == 0.0) {
    if (b < 0) throw std::invalid_argument("bfry_f: a = 0 requires b > 0");
    return std::pow(1.0 - x, 1.0 / b);
  }
  // log-space evaluation: a^b overflows for even moderately large |b|
  const double l1 = b * std::log(a), l2 = b * std::log1p(a);
  const double m = std::max(l1, l2);
  const double inner = x * std::exp(l1 - m) + (1.0 - x) * std::exp(l2 - m);
  return std::exp(m / b + std::log(inner) / b);
}

std::vector<long> bfry_next_row(UrnState& state, RngStream& rng) {
  if (state.model != UrnState::Model::bfry)
    throw std::invalid_argument("bfry_next_row: wrong model");
  std::vector<long> row;
  for (long k = 0; k < state.k_n(); ++k) {
    double p;
    if (state.sb_fast) {
      p = (state.counts[k] - state.sb_alpha) / (state.sb_theta + state.n);
    } else {
      p = c_a(*state.lv, 1.0, state.n + 1, state.counts[k] + 1) /
          c_a(*state.lv, 1.0, state.n, state.counts[k]);
    }
    if (rng.uniform() < p) {
      row.push_back(k);
      state.counts[k] += 1;
    }
  }
  ensure_psi(state, state.n + 1);
  const double g = rng.gamma(state.k_n() + 1.0 - state.sigma, 1.0);
  const double u = rng.uniform();
  const double f = bfry_f(u, state.tau, state.sigma - state.k_n());
  const double rate = g * state.psi[state.n] / f;
  // the mixing variable has a power-law tail, so astronomically large
  // new-feature counts occur with small but positive probability
  if (!(rate <= state.feature_cap))
    throw UrnOverflow("bfry_next_row: new-feature rate " + std::to_string(rate) +
                      " exceeds feature_cap");
  const long fresh = rng.poisson(rate);
  if (state.k_n() + fresh > state.feature_cap)
    throw UrnOverflow("bfry_next_row: feature count exceeds feature_cap");
  for (long j = 0; j < fresh; ++j) {
    row.push_back(state.k_n());
    state.counts.push_back(1);
  }
  state.tau += state.psi[state.n];
  state.n += 1;
  return row;
}

std::vector<long> urn_next_row(UrnState& state, RngStream& rng) {
  switch (state.model) {
    case UrnState::Model::ibp:
      return ibp_next_row(state, rng);
    case UrnState::Model::stable_jot:
      return stable_jot_next_row(state, rng);
    case UrnState::Model::bfry:
      return bfry_next_row(state, rng);
  }
  throw std::logic_error("urn_next_row: bad model");
}

std::vector<double> psi_increments(const LevyDensity& lv, long n) {
  if (lv.support_hi() > 1.0 + 1e-12)
    throw std::invalid_argument("psi_increments: lambda must be supported in (0,1]");
  std::vector<double> out;
  for (long k = 1; k <= n; ++k) {
    if (lv.family() == LevyFamily::stable_beta) {
      const double c = lv.params()[0], th = lv.params()[1], al = lv.params()[2];
      out.push_back(c / beta_fn(th + al, 1.0 - al) *
                    beta_fn(1.0 - al, th + al + k - 1.0));
    } else {
      out.push_back(c_a(lv, 1.0, k, 1));
    }
  }
  return out;
}

double poisson_bfry_pmf(double sigma, double tau, long j) {
  if (!(sigma > 0) || !(sigma < 1) || !(tau > 0) || j < 0)
    throw std::invalid_argument("poisson_bfry_pmf: bad arguments");
  if (j == 0) return std::pow(1.0 + tau, sigma) - std::pow(tau, sigma);
  const double lcoef =
      std::lgamma(j - sigma) - std::lgamma(1.0 - sigma) - std::lgamma(j + 1.0);
  const double body = std::pow(tau, sigma) -
                      std::pow(1.0 + tau, sigma) *
                          std::exp(j * std::log(tau / (1.0 + tau)));
  return sigma * std::exp(lcoef) * body;
}

double bfry_increment_pmf(double sigma, double tau_next, double tau_prev, long j,
                          long k) {
  if (!(sigma > 0) || !(sigma < 1) || !(tau_next > tau_prev) || tau_prev < 0 ||
      j < 0 || k < 0)
    throw std::invalid_argument("bfry_increment_pmf: bad arguments");
  if (k == 0 && tau_prev == 0.0) return poisson_bfry_pmf(sigma, tau_next, j);
  if (tau_prev == 0.0)
    throw std::invalid_argument("bfry_increment_pmf: k > 0 requires tau_prev > 0");
  const double d = tau_next - tau_prev;
  const double b_next = sigma - k - j, b_prev = sigma - k;
  const double numer =
      std::pow(tau_next, b_next) - std::pow(1.0 + tau_next, b_next);
  const double denom =
      std::pow(tau_prev, b_prev) - std::pow(1.0 + tau_prev, b_prev);
  double lratio;
  double sign = 1.0;
  if (k >= 1) {
    lratio = std::lgamma(k + j - sigma) - std::lgamma(k - sigma);
  } else {
    // Gamma(j - sigma) / Gamma(-sigma) = -sigma Gamma(j - sigma)/Gamma(1 - sigma)
    lratio = std::log(sigma) + std::lgamma(j - sigma) - std::lgamma(1.0 - sigma);
    sign = -1.0;
  }
  const double val = sign * std::exp(lratio + j * std::log(d) - std::lgamma(j + 1.0)) *
                     numer / denom;
  return val;
}

}  // namespace jot
