#pragma once

#include <string>
#include <vector>

#include "rdmc/rating_matrix.hpp"

namespace rdmc {

struct LoadedMatrix {
  SparseRatingMatrix matrix;
  RatingScale scale;
};

// Reads the MovieLens u.data format: tab-separated `user item rating
// timestamp` lines, 1-indexed ids mapped to 0-based indices (dimensions come
// from the largest ids). Ratings must be integers in {1..5}. A malformed line
// raises an error naming the line number; duplicate (user, item) pairs keep
// the last occurrence and emit a warning on stderr.
LoadedMatrix read_movielens(const std::string& path);

// Reads a long-format CSV with header `user,item,rating` (1-indexed ids);
// ratings are validated against {1..categories}.
LoadedMatrix read_long_csv(const std::string& path, int categories);

void write_long_csv(const std::string& path, const SparseRatingMatrix& r);

// Dense matrix as comma-separated rows (no header).
void write_dense_csv(const std::string& path, const arma::mat& m);
arma::mat read_dense_csv(const std::string& path);

// Drop columns with fewer than min_col_ratings observations (and, when
// min_row_ratings > 0, rows below that threshold), repeating until stable
// since each pass can push the other dimension below its bar. Survivors are
// re-indexed densely; kept_rows/kept_cols map new indices to old.
struct FilterResult {
  SparseRatingMatrix matrix;
  std::vector<int> kept_rows;
  std::vector<int> kept_cols;
};

FilterResult filter_min_ratings(const SparseRatingMatrix& r,
                                int min_col_ratings, int min_row_ratings = 0);

}  // namespace rdmc
