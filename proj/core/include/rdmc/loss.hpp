#pragma once

#include <armadillo>
#include <string>

#include "rdmc/rating_matrix.hpp"

namespace rdmc {

enum class LossKind { pseudo_huber, absolute, truncated, squared };

// A robust loss rho(y) on residuals. tau is the pseudo-Huber smoothness
// parameter (default 1) or the truncation point of the truncated absolute
// loss; the truncated default (K-1)/2 caps a residual at half the rating
// range so that a single wild rating cannot dominate a cell's fit.
struct LossSpec {
  LossKind kind = LossKind::pseudo_huber;
  double tau = 1.0;

  static LossSpec make(LossKind kind, const RatingScale& scale);
};

// rho(y).
double loss_value(const LossSpec& spec, double y);

// Sum of rho(A_ij - X_ij) over the observed cells of x.
double matrix_loss(const LossSpec& spec, const arma::mat& a,
                   const SparseRatingMatrix& x);

// Canonical names used in configs, CLI flags, and result records:
// "phuber", "absolute", "truncated", "squared".
std::string loss_name(LossKind kind);
LossKind parse_loss(const std::string& name);

}  // namespace rdmc
