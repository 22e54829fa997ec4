#include "jot/featmat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace jot {

FeatureMatrix sample_bernoulli_matrix(const UnitaryMeasure& m, long n,
                                      RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_bernoulli_matrix: n must be >= 1");
  FeatureMatrix z;
  z.n_rows = n;
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    std::vector<long> rows;
    for (long i = 0; i < n; ++i)
      if (rng.uniform() < m.weights[k]) rows.push_back(i);
    if (!rows.empty()) {
      z.column_ids.push_back(m.atoms.empty() ? static_cast<long>(k) : m.atoms[k]);
      z.columns.push_back(std::move(rows));
    }
  }
  return z;
}

FeatureMatrix canonicalize(const FeatureMatrix& z) {
  std::vector<std::size_t> order(z.columns.size());
  std::iota(order.begin(), order.end(), 0);
  // descending top-down binary membership strings; on sorted row-index
  // lists this is lexicographic order except that a proper prefix (a 0
  // where the other column has a 1) must come after the longer column
  auto bin_desc = [](const std::vector<long>& x, const std::vector<long>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] != y[i]) return x[i] < y[i];
    return x.size() > y.size();
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bin_desc(z.columns[a], z.columns[b]);
  });
  FeatureMatrix out;
  out.n_rows = z.n_rows;
  for (std::size_t i : order) {
    out.column_ids.push_back(z.column_ids[i]);
    out.columns.push_back(z.columns[i]);
  }
  return out;
}

MatrixStats stats(const FeatureMatrix& z) {
  MatrixStats s;
  s.k_n = static_cast<long>(z.columns.size());
  s.row_sums.assign(z.n_rows, 0);
  for (const auto& col : z.columns) {
    s.counts.push_back(static_cast<long>(col.size()));
    for (long i : col) s.row_sums[i] += 1;
  }
  s.col_sums = s.counts;
  return s;
}

std::string to_csv(const FeatureMatrix& z) {
  std::ostringstream out;
  for (std::size_t k = 0; k < z.column_ids.size(); ++k)
    out << (k ? "," : "") << "f" << z.column_ids[k];
  out << "\n";
  for (long i = 0; i < z.n_rows; ++i) {
    for (std::size_t k = 0; k < z.columns.size(); ++k) {
      const auto& col = z.columns[k];
      const bool has = std::binary_search(col.begin(), col.end(), i);
      out << (k ? "," : "") << (has ? 1 : 0);
    }
    out << "\n";
  }
  return out.str();
}

std::string stats_to_json(const MatrixStats& s) {
  nlohmann::json j;
  j["K_n"] = s.k_n;
  j["counts"] = s.counts;
  j["row_sums"] = s.row_sums;
  j["col_sums"] = s.col_sums;
  return j.dump();
}

}  // namespace jot
