#pragma once

#include <armadillo>
#include <string>
#include <vector>

#include "rdmc/rating_matrix.hpp"

namespace rdmc {

// Mean absolute error of predictions over the evaluation cells; each Entry
// carries the cell position and its true rating. Throws on an empty set.
double mae(const arma::mat& predictions, const std::vector<Entry>& truth_cells);

// Mean prediction shift for a target column: mean over the listed rows of
// after(i, target) - before(i, target). Negative values mean the attack
// pushed the target's predictions down. Throws on an empty row set.
double mean_prediction_shift(const arma::mat& before, const arma::mat& after,
                             const std::vector<int>& rows, int target_col);

// One tidy result row. loss/stopping are empty for methods they do not apply
// to, lambda is NaN for methods without a penalty, and epsilon is 0 when
// attack == "none".
struct ResultRecord {
  int replication = 0;
  std::string method;
  std::string loss;
  std::string stopping;
  int categories = 0;
  std::string missingness;
  std::string attack = "none";
  double epsilon = 0.0;
  std::string metric;  // "mae" or "mps"
  double value = 0.0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time_ms = 0.0;
};

// One solver-diagnostics row; phase is "selection" (holdout >= 0 gives the
// holdout replication) or "refit" (holdout = -1).
struct TimingRecord {
  int replication = 0;
  std::string method;
  std::string loss;
  std::string stopping;
  std::string phase;
  int holdout = -1;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  double final_loss = 0.0;
  double wall_time_ms = 0.0;
};

void write_records_csv(const std::string& path,
                       const std::vector<ResultRecord>& records);
std::vector<ResultRecord> read_records_csv(const std::string& path);

void write_timings_csv(const std::string& path,
                       const std::vector<TimingRecord>& timings);

// Per-group five-number summary of record values, grouped by every field
// except replication and value. Quartiles use linear interpolation between
// order statistics; rows come out in first-appearance group order.
struct SummaryRow {
  std::string method;
  std::string loss;
  std::string stopping;
  int categories = 0;
  std::string missingness;
  std::string attack;
  double epsilon = 0.0;
  std::string metric;
  int count = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

// Linear-interpolation quantile of a sample (q in [0, 1]).
double sample_quantile(std::vector<double> values, double q);

}  // namespace rdmc
