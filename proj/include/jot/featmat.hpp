#ifndef JOT_FEATMAT_HPP
#define JOT_FEATMAT_HPP

#include <string>
#include <vector>

#include "jot/measures.hpp"
#include "jot/rng.hpp"

namespace jot {

// Binary object x feature incidence, stored as sparse columns of sorted
// row indices; all-zero columns are never stored.
struct FeatureMatrix {
  long n_rows = 0;
  std::vector<long> column_ids;
  std::vector<std::vector<long>> columns;  // sorted row indices, non-empty
};

struct MatrixStats {
  long k_n = 0;
  std::vector<long> counts;    // n_k per column
  std::vector<long> row_sums;
  std::vector<long> col_sums;  // same as counts, column order
};

// Each entry Bernoulli(weight_k) independently; empty columns dropped.
FeatureMatrix sample_bernoulli_matrix(const UnitaryMeasure& m, long n,
                                      RngStream& rng);

// Left-ordered representative: columns sorted by their top-down binary
// membership string, descending. Deterministic and idempotent.
FeatureMatrix canonicalize(const FeatureMatrix& z);

MatrixStats stats(const FeatureMatrix& z);

std::string to_csv(const FeatureMatrix& z);
std::string stats_to_json(const MatrixStats& s);

}  // namespace jot

#endif
