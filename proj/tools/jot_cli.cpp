#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jot/acceptance.hpp"
#include "jot/diagnostics.hpp"
#include "jot/featmat.hpp"
#include "jot/levy.hpp"
#include "jot/measures.hpp"
#include "jot/pkbridge.hpp"
#include "jot/posterior.hpp"
#include "jot/rng.hpp"
#include "jot/urns.hpp"

using nlohmann::json;

namespace {

// Schema violations carry the JSON-pointer path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const json* lookup(const json& cfg, const std::string& ptr) {
  try {
    const json& v = cfg.at(json::json_pointer(ptr));
    return &v;
  } catch (const json::exception&) {
    return nullptr;
  }
}

double need_num(const json& cfg, const std::string& ptr) {
  const json* v = lookup(cfg, ptr);
  if (!v || !v->is_number())
    throw ConfigError("missing or non-numeric field at " + ptr);
  return v->get<double>();
}

double num_or(const json& cfg, const std::string& ptr, double def) {
  const json* v = lookup(cfg, ptr);
  if (!v) return def;
  if (!v->is_number()) throw ConfigError("non-numeric field at " + ptr);
  return v->get<double>();
}

std::string need_str(const json& cfg, const std::string& ptr) {
  const json* v = lookup(cfg, ptr);
  if (!v || !v->is_string())
    throw ConfigError("missing or non-string field at " + ptr);
  return v->get<std::string>();
}

std::string str_or(const json& cfg, const std::string& ptr,
                   const std::string& def) {
  const json* v = lookup(cfg, ptr);
  if (!v) return def;
  if (!v->is_string()) throw ConfigError("non-string field at " + ptr);
  return v->get<std::string>();
}

std::vector<double> need_num_array(const json& cfg, const std::string& ptr) {
  const json* v = lookup(cfg, ptr);
  if (!v || !v->is_array())
    throw ConfigError("missing or non-array field at " + ptr);
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number())
      throw ConfigError("non-numeric element at " + ptr + "/" +
                        std::to_string(i));
    out.push_back((*v)[i].get<double>());
  }
  return out;
}

// Round to 12 significant digits so every emitted number honors the
// output contract.
double r12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::atof(buf);
}

json arr12(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(r12(x));
  return a;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

jot::LevyDensity parse_levy(const json& cfg, const std::string& base) {
  const std::string fam = need_str(cfg, base + "/family");
  jot::LevyDensity lv = [&] {
    if (fam == "scale_invariant" || fam == "ibp")
      return jot::LevyDensity::scale_invariant(need_num(cfg, base + "/theta"));
    if (fam == "stable")
      return jot::LevyDensity::stable(need_num(cfg, base + "/c"),
                                      need_num(cfg, base + "/alpha"));
    if (fam == "beta_process")
      return jot::LevyDensity::beta_process(need_num(cfg, base + "/c"),
                                            need_num(cfg, base + "/alpha"));
    if (fam == "stable_beta")
      return jot::LevyDensity::stable_beta(need_num(cfg, base + "/c"),
                                           need_num(cfg, base + "/theta"),
                                           need_num(cfg, base + "/alpha"));
    if (fam == "stable_beta_simple")
      return jot::LevyDensity::stable_beta_simple(
          need_num(cfg, base + "/alpha"), need_num(cfg, base + "/theta"));
    if (fam == "gamma")
      return jot::LevyDensity::gamma_process(need_num(cfg, base + "/theta"));
    throw ConfigError("unknown family at " + base + "/family");
  }();
  // touch the tail once so lazy table construction happens before any
  // replicate threads share the object
  lv.tail(0.5 * std::min(lv.support_hi(), 1.0));
  return lv;
}

jot::ScalingLaw parse_scaling(const json& cfg, const std::string& base) {
  if (!lookup(cfg, base)) return jot::ScalingLaw::largest_jump();
  const std::string kind = str_or(cfg, base + "/kind", "largest_jump");
  if (kind == "largest_jump") return jot::ScalingLaw::largest_jump();
  if (kind == "fixed") return jot::ScalingLaw::fixed(need_num(cfg, base + "/value"));
  if (kind == "distribution") {
    const std::string dn = need_str(cfg, base + "/dist");
    jot::Dist d;
    try {
      d = jot::dist_from_name(dn);
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown distribution at " + base + "/dist");
    }
    return jot::ScalingLaw::distribution(d, need_num_array(cfg, base + "/params"),
                                         num_or(cfg, base + "/power", 1.0));
  }
  throw ConfigError("unknown scaling kind at " + base + "/kind");
}

jot::TruncationRule parse_trunc(const json& cfg) {
  if (!lookup(cfg, "/truncation"))
    return jot::TruncationRule::relative_floor(1e-6);
  const std::string mode = need_str(cfg, "/truncation/mode");
  const double value = need_num(cfg, "/truncation/value");
  if (mode == "fixed_count")
    return jot::TruncationRule::fixed_count(static_cast<long>(value));
  if (mode == "relative_floor")
    return jot::TruncationRule::relative_floor(
        value, num_or(cfg, "/truncation/reference", 0.0));
  if (mode == "tail_mass") return jot::TruncationRule::tail_mass(value);
  throw ConfigError("unknown mode at /truncation/mode");
}

long need_count(const json& cfg, const std::string& ptr) {
  const double v = need_num(cfg, ptr);
  if (!(v >= 1) || v != std::floor(v))
    throw ConfigError("field at " + ptr + " must be a positive integer");
  return static_cast<long>(v);
}

// Replicates run on derived streams indexed by replicate, so the output
// is independent of the job count; results land in caller-owned slots.
void parallel_reps(long reps, int jobs, const std::function<void(long)>& fn) {
  if (jobs < 1) jobs = 1;
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= reps || failed.load()) break;
      try {
        fn(i);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error(first_error);
}

struct Common {
  json cfg;
  std::uint64_t seed = 20260823ULL;
  long replicates = 1;
  int jobs = 1;
  std::string out_path;
  std::string format = "json";
};

json header(const Common& c, const std::string& command) {
  json h;
  h["command"] = command;
  h["config_hash"] = fnv1a_hex(c.cfg.dump());
  h["seed"] = c.seed;
  h["replicates"] = c.replicates;
  return h;
}

void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + c.out_path);
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

json measure_to_json(const jot::UnitaryMeasure& m) {
  json j;
  j["weights"] = arr12(m.weights);
  j["atoms"] = m.atoms;
  j["delta_ref"] = r12(m.delta_ref);
  j["total_mass"] = r12(m.total_mass());
  j["truncation_count"] = m.truncation_count;
  j["tail_mass_bound"] = r12(m.tail_mass_bound);
  if (m.has_zeta) j["zeta"] = r12(m.zeta);
  return j;
}

// --- commands ---------------------------------------------------------------

int cmd_sample_measure(const Common& c) {
  const auto lv = parse_levy(c.cfg, "/model");
  const auto pstar = parse_scaling(c.cfg, "/scaling");
  const auto trunc = parse_trunc(c.cfg);
  jot::RngStream master(c.seed);
  std::vector<json> rows(c.replicates);
  parallel_reps(c.replicates, c.jobs, [&](long rep) {
    jot::RngStream rng = master.derive(static_cast<std::uint64_t>(rep));
    auto m = jot::sample_jot(lv, pstar, trunc, rng);
    rows[rep] = measure_to_json(m);
    rows[rep]["stream"] = rep;
  });
  if (c.format == "csv") {
    std::ostringstream ss;
    ss << std::setprecision(12);
    for (long rep = 0; rep < c.replicates; ++rep) {
      ss << rep;
      for (const auto& w : rows[rep]["weights"]) ss << ',' << w.get<double>();
      ss << '\n';
    }
    emit(c, "# " + header(c, "sample-measure").dump() + "\n" + ss.str());
    return 0;
  }
  json out = header(c, "sample-measure");
  out["results"] = rows;
  emit(c, out.dump(2));
  return 0;
}

jot::FeatureMatrix matrix_from_urn(jot::UrnState st, long n, jot::RngStream& rng) {
  jot::FeatureMatrix z;
  z.n_rows = n;
  for (long r = 0; r < n; ++r) {
    auto row = jot::urn_next_row(st, rng);
    for (long k : row) {
      while (static_cast<long>(z.columns.size()) <= k) {
        z.column_ids.push_back(static_cast<long>(z.columns.size()));
        z.columns.emplace_back();
      }
      z.columns[k].push_back(r);
    }
  }
  return z;
}

jot::UrnState parse_urn(const json& cfg) {
  const std::string fam = need_str(cfg, "/model/family");
  if (fam == "ibp")
    return jot::UrnState::ibp_urn(need_num(cfg, "/model/c"),
                                  need_num(cfg, "/model/theta"));
  if (fam == "stable_jot")
    return jot::UrnState::stable_jot_urn(need_num(cfg, "/model/alpha"),
                                         parse_scaling(cfg, "/scaling"));
  if (fam == "bfry")
    return jot::UrnState::bfry_urn(need_num(cfg, "/model/sigma"),
                                   parse_levy(cfg, "/model/levy"));
  throw ConfigError("unknown urn family at /model/family");
}

int cmd_sample_matrix(const Common& c) {
  const long n = need_count(c.cfg, "/n");
  const std::string fam = need_str(c.cfg, "/model/family");
  const bool urn_route = (fam == "ibp" || fam == "stable_jot" || fam == "bfry");
  jot::LevyDensity lv = jot::LevyDensity::scale_invariant(1.0);
  jot::ScalingLaw pstar = jot::ScalingLaw::largest_jump();
  jot::TruncationRule trunc = jot::TruncationRule::relative_floor(1e-6);
  jot::UrnState base = jot::UrnState::ibp_urn(1.0, 1.0);
  if (urn_route) {
    base = parse_urn(c.cfg);
  } else {
    lv = parse_levy(c.cfg, "/model");
    pstar = parse_scaling(c.cfg, "/scaling");
    trunc = parse_trunc(c.cfg);
  }
  jot::RngStream master(c.seed);
  std::vector<json> rows(c.replicates);
  parallel_reps(c.replicates, c.jobs, [&](long rep) {
    jot::RngStream rng = master.derive(static_cast<std::uint64_t>(rep));
    jot::FeatureMatrix z;
    if (urn_route) {
      z = matrix_from_urn(base, n, rng);
    } else {
      auto m = jot::sample_jot(lv, pstar, trunc, rng);
      z = jot::sample_bernoulli_matrix(m, n, rng);
    }
    z = jot::canonicalize(z);
    json r;
    r["stream"] = rep;
    r["csv"] = jot::to_csv(z);
    r["stats"] = json::parse(jot::stats_to_json(jot::stats(z)));
    rows[rep] = std::move(r);
  });
  if (c.format == "csv") {
    std::ostringstream ss;
    ss << "# " << header(c, "sample-matrix").dump() << '\n';
    for (long rep = 0; rep < c.replicates; ++rep) {
      ss << "# replicate " << rep << '\n'
         << rows[rep]["csv"].get<std::string>();
    }
    emit(c, ss.str());
    return 0;
  }
  json out = header(c, "sample-matrix");
  out["results"] = rows;
  emit(c, out.dump(2));
  return 0;
}

int cmd_urn(const Common& c) {
  const long n = need_count(c.cfg, "/n");
  const jot::UrnState base = parse_urn(c.cfg);
  jot::RngStream master(c.seed);
  std::vector<json> rows(c.replicates);
  parallel_reps(c.replicates, c.jobs, [&](long rep) {
    jot::RngStream rng = master.derive(static_cast<std::uint64_t>(rep));
    jot::UrnState st = base;
    json r;
    r["stream"] = rep;
    r["rows"] = json::array();
    r["k_per_row"] = json::array();
    r["overflow"] = false;
    try {
      for (long i = 0; i < n; ++i) {
        r["rows"].push_back(jot::urn_next_row(st, rng));
        r["k_per_row"].push_back(st.k_n());
      }
    } catch (const jot::UrnOverflow&) {
      r["overflow"] = true;  // censored run: count exceeded feature_cap
    }
    rows[rep] = std::move(r);
  });
  json out = header(c, "urn");
  out["results"] = rows;
  emit(c, out.dump(2));
  return 0;
}

jot::ObservationSummary parse_obs(const json& cfg) {
  jot::ObservationSummary obs;
  obs.n = need_count(cfg, "/observations/n");
  const json* v = lookup(cfg, "/observations/counts");
  if (!v || !v->is_array())
    throw ConfigError("missing or non-array field at /observations/counts");
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_integer())
      throw ConfigError("non-integer element at /observations/counts/" +
                        std::to_string(i));
    obs.counts.push_back((*v)[i].get<long>());
  }
  return obs;
}

int cmd_posterior(const Common& c) {
  const auto lv = parse_levy(c.cfg, "/model");
  const auto pstar = parse_scaling(c.cfg, "/scaling");
  const auto obs = parse_obs(c.cfg);
  auto g = jot::delta_posterior(lv, jot::scaling_law_density(pstar, lv), obs);
  if (c.format == "csv") {
    std::ostringstream ss;
    ss << "# " << header(c, "posterior").dump() << "\npoint,mass\n"
       << std::setprecision(12);
    for (std::size_t i = 0; i < g.points().size(); ++i)
      ss << g.points()[i] << ',' << g.masses()[i] << '\n';
    emit(c, ss.str());
    return 0;
  }
  json out = header(c, "posterior");
  out["points"] = arr12(g.points());
  out["masses"] = arr12(g.masses());
  out["mean"] = r12(g.mean());
  emit(c, out.dump(2));
  return 0;
}

int cmd_predictive(const Common& c) {
  const auto lv = parse_levy(c.cfg, "/model");
  const auto pstar = parse_scaling(c.cfg, "/scaling");
  const auto obs = parse_obs(c.cfg);
  std::function<double(jot::RngStream&)> a_sampler;
  std::shared_ptr<jot::GridDistribution> grid;
  if (obs.n == 0) {
    a_sampler = [&lv, pstar](jot::RngStream& rr) { return pstar.sample(lv, rr); };
  } else {
    grid = std::make_shared<jot::GridDistribution>(jot::delta_posterior(
        lv, jot::scaling_law_density(pstar, lv), obs));
    a_sampler = [grid](jot::RngStream& rr) { return grid->sample(rr); };
  }
  jot::RngStream master(c.seed);
  std::vector<json> rows(c.replicates);
  parallel_reps(c.replicates, c.jobs, [&](long rep) {
    jot::RngStream rng = master.derive(static_cast<std::uint64_t>(rep));
    auto row = jot::predictive_row(lv, a_sampler, obs, rng);
    json r;
    r["stream"] = rep;
    r["include"] = row.include;
    r["new_count"] = row.new_count;
    r["a"] = r12(row.a);
    rows[rep] = std::move(r);
  });
  json out = header(c, "predictive");
  out["results"] = rows;
  emit(c, out.dump(2));
  return 0;
}

int cmd_bridge(const Common& c) {
  const auto lv = parse_levy(c.cfg, "/model");
  const auto pstar = parse_scaling(c.cfg, "/scaling");
  const long n = need_count(c.cfg, "/n");
  const double threshold = num_or(c.cfg, "/threshold", 1.0);
  const long max_tries =
      static_cast<long>(num_or(c.cfg, "/max_tries", 1000000.0));
  jot::RngStream master(c.seed);
  std::vector<json> rows(c.replicates);
  parallel_reps(c.replicates, c.jobs, [&](long rep) {
    jot::RngStream rng = master.derive(static_cast<std::uint64_t>(rep));
    auto res = jot::condition_mass(lv, pstar, threshold, max_tries, rng);
    std::vector<double> norm;
    for (double w : res.measure.weights) norm.push_back(w / res.mass);
    auto p = jot::paintbox(norm, n, rng);
    json r;
    r["stream"] = rep;
    r["blocks"] = p.blocks;
    r["block_count"] = p.block_count();
    r["mass"] = r12(res.mass);
    r["tries"] = res.tries;
    rows[rep] = std::move(r);
  });
  json hist = json::array();
  std::vector<long> counts(n + 1, 0);
  for (const auto& r : rows) counts[r["block_count"].get<long>()] += 1;
  for (long b = 0; b <= n; ++b) hist.push_back(counts[b]);
  json out = header(c, "bridge");
  out["results"] = rows;
  out["block_count_histogram"] = hist;
  emit(c, out.dump(2));
  return 0;
}

int cmd_dickman(const Common& c) {
  const double cc = need_num(c.cfg, "/c");
  std::vector<double> grid;
  const json* g = lookup(c.cfg, "/grid");
  if (g && g->is_array()) {
    grid = need_num_array(c.cfg, "/grid");
  } else {
    const double lo = num_or(c.cfg, "/grid/lo", 0.05);
    const double hi = num_or(c.cfg, "/grid/hi", 5.0);
    const long pts = static_cast<long>(num_or(c.cfg, "/grid/points", 100.0));
    if (!(lo > 0) || !(hi > lo) || pts < 2)
      throw ConfigError("invalid range at /grid");
    for (long i = 0; i < pts; ++i)
      grid.push_back(lo + (hi - lo) * i / (pts - 1));
  }
  if (c.format == "csv") {
    std::ostringstream ss;
    ss << "# " << header(c, "dickman").dump() << "\nt,pdf,cdf\n"
       << std::setprecision(12);
    for (double t : grid)
      ss << t << ',' << jot::dickman_pdf(cc, t) << ',' << jot::dickman_cdf(cc, t)
         << '\n';
    emit(c, ss.str());
    return 0;
  }
  json out = header(c, "dickman");
  out["t"] = arr12(grid);
  json pdf = json::array(), cdf = json::array();
  for (double t : grid) {
    pdf.push_back(r12(jot::dickman_pdf(cc, t)));
    cdf.push_back(r12(jot::dickman_cdf(cc, t)));
  }
  out["pdf"] = pdf;
  out["cdf"] = cdf;
  emit(c, out.dump(2));
  return 0;
}

int cmd_diagnose(const Common& c) {
  const std::string check = need_str(c.cfg, "/check");
  json out = header(c, "diagnose");
  out["check"] = check;
  jot::RngStream rng(c.seed);
  if (check == "lecam") {
    auto w = need_num_array(c.cfg, "/weights");
    auto r = jot::lecam_check(
        w, &rng, static_cast<long>(num_or(c.cfg, "/mc_reps", 200000.0)));
    out["tv"] = r12(r.tv);
    out["bound"] = r12(r.bound);
    out["pass"] = r.pass;
    out["exact"] = r.exact;
    if (!r.exact) out["mc_stderr"] = r12(r.mc_stderr);
  } else if (check == "tail_index") {
    auto s = need_num_array(c.cfg, "/samples");
    auto r = jot::tail_index(s, num_or(c.cfg, "/k_frac", 0.1), rng);
    out["estimate"] = r12(r.estimate);
    out["stderr_boot"] = r12(r.stderr_boot);
    out["k_used"] = r.k_used;
  } else if (check == "power_law") {
    auto s = need_num_array(c.cfg, "/samples");
    auto r = jot::power_law_flag(s, rng, num_or(c.cfg, "/max_drift", 1.5));
    out["is_power_law"] = r.is_power_law;
    out["estimates"] = arr12(r.estimates);
    out["drift_ratio"] = r12(r.drift_ratio);
  } else if (check == "ks_two_sample") {
    auto a = need_num_array(c.cfg, "/samples_a");
    auto b = need_num_array(c.cfg, "/samples_b");
    auto r = jot::ks_two_sample(a, b);
    out["statistic"] = r12(r.statistic);
    out["p_value"] = r12(r.p_value);
  } else if (check == "chi_square") {
    const json *pa = lookup(c.cfg, "/hist_a"), *pb = lookup(c.cfg, "/hist_b");
    if (!pa || !pa->is_array()) throw ConfigError("missing or non-array field at /hist_a");
    if (!pb || !pb->is_array()) throw ConfigError("missing or non-array field at /hist_b");
    auto r = jot::chi_square_two_sample(pa->get<std::vector<long>>(),
                                        pb->get<std::vector<long>>());
    out["statistic"] = r12(r.statistic);
    out["p_value"] = r12(r.p_value);
  } else if (check == "tau_beta") {
    const auto lv = parse_levy(c.cfg, "/model");
    auto r = jot::tau_beta_compare(
        lv, need_num(c.cfg, "/beta"),
        {need_num(c.cfg, "/window/0"), need_num(c.cfg, "/window/1")},
        static_cast<long>(num_or(c.cfg, "/mc_reps", 30000.0)), rng);
    out["tv"] = r12(r.tv);
    out["stderr_jack"] = r12(r.stderr_jack);
    out["conditioned"] = r.conditioned;
  } else {
    throw ConfigError("unknown check at /check");
  }
  emit(c, out.dump(2));
  return 0;
}

int cmd_accept(const Common& c) {
  std::ostringstream report;
  report << "# " << header(c, "accept").dump() << '\n';
  const int failures = jot::run_acceptance(c.seed, report);
  emit(c, report.str());
  return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled-subordinator feature-allocation toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string config_path;
  bool seed_set = false, reps_set = false;
  std::uint64_t seed_flag = 0;
  long reps_flag = 0;
  if (const char* env = std::getenv("JOT_JOBS")) c.jobs = std::atoi(env);
  if (c.jobs < 1) c.jobs = 1;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", c.out_path, "output file (default stdout)");
  app.add_option("--seed", seed_flag, "seed override")->each([&](std::string) {
    seed_set = true;
  });
  app.add_option("--replicates", reps_flag, "replicate-count override")
      ->each([&](std::string) { reps_set = true; });
  app.add_option("--jobs", c.jobs, "worker threads for replicate loops");

  const std::vector<std::string> commands = {
      "sample-measure", "sample-matrix", "urn",      "posterior", "predictive",
      "bridge",         "dickman",       "diagnose", "accept"};
  for (const auto& name : commands) app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    c.cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config file " + config_path);
      try {
        c.cfg = json::parse(f);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!c.cfg.is_object()) throw ConfigError("config root must be an object");
    }
    if (seed_set) c.cfg["seed"] = seed_flag;
    if (reps_set) c.cfg["replicates"] = reps_flag;
    c.seed = static_cast<std::uint64_t>(num_or(c.cfg, "/seed", 20260823.0));
    c.replicates = static_cast<long>(num_or(c.cfg, "/replicates", 1.0));
    if (c.replicates < 1) throw ConfigError("field at /replicates must be >= 1");
    c.format = str_or(c.cfg, "/output/format", "json");
    if (c.format != "json" && c.format != "csv")
      throw ConfigError("field at /output/format must be csv or json");

    if (command == "sample-measure") return cmd_sample_measure(c);
    if (command == "sample-matrix") return cmd_sample_matrix(c);
    if (command == "urn") return cmd_urn(c);
    if (command == "posterior") return cmd_posterior(c);
    if (command == "predictive") return cmd_predictive(c);
    if (command == "bridge") return cmd_bridge(c);
    if (command == "dickman") return cmd_dickman(c);
    if (command == "diagnose") return cmd_diagnose(c);
    if (command == "accept") return cmd_accept(c);
    std::cerr << "unknown command: " << command << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}
