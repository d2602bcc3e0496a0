#pragma once

#include <armadillo>
#include <cstdint>

#include "rdmc/rating_matrix.hpp"

namespace rdmc {

// Column-median imputation: observed cells keep their values, missing cells
// get the column median (possibly a half-integer between two categories).
arma::mat median_impute(const SparseRatingMatrix& r);

// As median_impute, but half-integer medians are resolved per missing cell by
// a fair coin between the two adjacent categories.
arma::mat median_impute_discretized(const SparseRatingMatrix& r,
                                    const RatingScale& scale,
                                    std::uint64_t seed);

// Column-mode imputation: missing cells get the column's most frequent
// category; ties are sampled per cell uniformly among the tied modes
// (enumerated in ascending order).
arma::mat mode_impute(const SparseRatingMatrix& r, const RatingScale& scale,
                      std::uint64_t seed);

}  // namespace rdmc
