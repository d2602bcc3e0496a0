#pragma once

#include <armadillo>
#include <cstdint>
#include <span>
#include <vector>

namespace rdmc {

// One observed cell of a sparse rating matrix.
struct Entry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// The set of admissible rating categories on the original scale: {1, ..., K}.
struct RatingScale {
  int categories = 5;

  double value(int k) const { return static_cast<double>(k + 1); }  // k in [0, K)
  double min_value() const { return 1.0; }
  double max_value() const { return static_cast<double>(categories); }
  bool contains(double v) const;
};

// Sparse matrix of observed ratings in compressed-column form: the entry list
// is sorted by (column, row) and col_ptr gives per-column index ranges, so it
// serves both as a coordinate list and as a per-column row index. Missing
// cells are absent (a stored 0.0 is a real value, e.g. after centering).
class SparseRatingMatrix {
 public:
  SparseRatingMatrix() = default;
  // Validates indices, sorts, and rejects duplicate (row, col) pairs.
  SparseRatingMatrix(int n_rows, int n_cols, std::vector<Entry> entries);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  const Entry& entry(std::size_t id) const { return entries_[id]; }

  // Entries of column j, sorted by row.
  std::span<const Entry> column(int j) const;
  std::size_t column_count(int j) const;

  // True if cell (i, j) is observed.
  bool has(int i, int j) const;

  // Dense copy with `fill` at unobserved cells.
  arma::mat to_dense(double fill = 0.0) const;

  // Dense observation indicator (1 = observed).
  arma::Mat<unsigned char> observed_mask() const;

 private:
  int n_rows_ = 0, n_cols_ = 0;
  std::vector<Entry> entries_;           // sorted by (col, row)
  std::vector<std::size_t> col_ptr_;     // size n_cols_ + 1
};

// Index set selecting test/validation entries out of a parent matrix's entry
// list. The complement is the training set.
struct MaskSplit {
  std::vector<std::uint8_t> is_test;  // size = parent nnz

  std::size_t test_count() const;
  std::vector<std::size_t> test_ids() const;
  SparseRatingMatrix train_matrix(const SparseRatingMatrix& parent) const;
  std::vector<Entry> test_entries(const SparseRatingMatrix& parent) const;
};

// Median-centered view of a rating matrix: x holds centered observed values
// (R_ij - M_j) and each column's admissible categories become {k - M_j}.
struct CenteredMatrix {
  SparseRatingMatrix x;
  std::vector<double> medians;  // per column
  RatingScale scale;            // original scale

  // Centered category value for category index k (0-based) in column j.
  double category(int j, int k) const { return scale.value(k) - medians[j]; }
};

// Per-column medians of the observed entries. Even counts use the midpoint of
// the two middle order statistics. Throws if any column has no observations.
std::vector<double> column_medians(const SparseRatingMatrix& r);

// Per-column means of the observed entries. Throws if any column is empty.
std::vector<double> column_means(const SparseRatingMatrix& r);

// Subtract column medians from the observed entries.
CenteredMatrix center(const SparseRatingMatrix& r, const RatingScale& scale);

// Map a solver output L (centered scale) back to a completed matrix on the
// original scale: observed cells keep their input ratings verbatim and
// unobserved cells become L_ij + M_j. Throws if any L cell is not a centered
// category of its column (tolerance 1e-9).
arma::mat assemble_completion(const arma::mat& l, const CenteredMatrix& cm);

// Uniform split of the observed entries; test size = round(fraction * nnz).
// If a column loses all its training entries, one uniformly chosen test entry
// of that column is moved back to training and one uniformly chosen training
// entry from a column with at least two of them is moved to test, keeping the
// counts intact. Throws if the counts cannot be preserved.
MaskSplit split_train_test(const SparseRatingMatrix& r, double test_fraction,
                           std::uint64_t seed);

// Independent repeated-holdout masks; replication k uses seed + k, so a
// one-replication call equals split_train_test with the same seed.
std::vector<MaskSplit> holdout_masks(const SparseRatingMatrix& r,
                                     double fraction, int replications,
                                     std::uint64_t seed);

}  // namespace rdmc
