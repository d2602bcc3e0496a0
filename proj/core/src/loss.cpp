#include "rdmc/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace rdmc {

LossSpec LossSpec::make(LossKind kind, const RatingScale& scale) {
  LossSpec spec;
  spec.kind = kind;
  switch (kind) {
    case LossKind::pseudo_huber:
      spec.tau = 1.0;
      break;
    case LossKind::truncated:
      spec.tau = (scale.max_value() - scale.min_value()) / 2.0;
      break;
    default:
      spec.tau = 0.0;
      break;
  }
  return spec;
}

double loss_value(const LossSpec& spec, double y) {
  switch (spec.kind) {
    case LossKind::pseudo_huber: {
      double r = y / spec.tau;
      return spec.tau * spec.tau * (std::sqrt(1.0 + r * r) - 1.0);
    }
    case LossKind::absolute:
      return std::abs(y);
    case LossKind::truncated:
      return std::min(std::abs(y), spec.tau);
    case LossKind::squared:
      return 0.5 * y * y;
  }
  throw std::logic_error("loss_value: unknown loss kind");
}

double matrix_loss(const LossSpec& spec, const arma::mat& a,
                   const SparseRatingMatrix& x) {
  if (static_cast<int>(a.n_rows) != x.n_rows() ||
      static_cast<int>(a.n_cols) != x.n_cols())
    throw std::invalid_argument("matrix_loss: dimension mismatch");
  double total = 0.0;
  for (const Entry& e : x.entries())
    total += loss_value(spec, a(e.row, e.col) - e.value);
  return total;
}

std::string loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::pseudo_huber: return "phuber";
    case LossKind::absolute: return "absolute";
    case LossKind::truncated: return "truncated";
    case LossKind::squared: return "squared";
  }
  throw std::logic_error("loss_name: unknown loss kind");
}

LossKind parse_loss(const std::string& name) {
  if (name == "phuber") return LossKind::pseudo_huber;
  if (name == "absolute") return LossKind::absolute;
  if (name == "truncated") return LossKind::truncated;
  if (name == "squared") return LossKind::squared;
  throw std::invalid_argument("unknown loss '" + name +
                              "' (expected phuber|absolute|truncated|squared)");
}

}  // namespace rdmc
