#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

#include "rdmc/rating_matrix.hpp"

namespace rdmc {

enum class Missingness { mnar, mcar };

std::string missingness_name(Missingness m);
Missingness parse_missingness(const std::string& name);

// Rating-style recommender data: n x p discrete matrix from a noisy rank-q
// factor model with column-specific mean shifts.
struct RecommenderSimConfig {
  int n = 300;
  int p = 200;
  int rank = 20;
  int categories = 10;  // one of {3, 5, 10}
  std::uint64_t seed = 0;
};

// Likert-style survey data: q constructs with r items each, correlated
// latents, construct-level shifts, reverse-keyed items, shuffled columns.
struct SurveySimConfig {
  int n = 300;
  int constructs = 10;
  int items_per_construct = 8;  // p = constructs * items_per_construct
  int categories = 7;
  std::uint64_t seed = 0;
};

// Ground truth plus the observed matrix a method gets to see. r_full is the
// complete discrete matrix; values holds the (possibly carelessly answered)
// responses and observed flags which cells survived missingness injection.
struct SimTruth {
  arma::Mat<int> r_full;
  arma::Mat<int> values;            // r_full with careless responses overlaid
  arma::Mat<unsigned char> observed;  // 1 = observed
  RatingScale scale;
  std::vector<double> shifts;       // per column (recommender) or construct
  double shift_max = 0.0;
  std::vector<int> careless_rows;   // ascending
  std::vector<int> item_permutation;  // survey: output column j shows item perm[j]
  std::vector<unsigned char> reversed;  // survey: 1 = reverse-keyed (output order)
  arma::mat latent;                 // pre-discretization values

  SparseRatingMatrix make_observed() const;
};

// Discretization breakpoints. Recommender scales are the calibrated sets for
// K in {3, 5, 10}; survey scales are equispaced integers-offset points
// -K/2+1, ..., K/2-1. A value v falls in category 1 + #(breakpoints < v).
std::vector<double> recommender_breakpoints(int categories);
std::vector<double> survey_breakpoints(int categories);

// Standard normal quantile, accurate to ~1e-14 (rational initial guess
// polished by Newton steps on the erfc-based CDF).
double normal_quantile(double p);

// Largest admissible mean shift: the top breakpoint minus the 0.6 quantile,
// so that a column shifted by exactly shift_max expects 40% of its values in
// the highest category.
double mean_shift_max(const std::vector<double>& breakpoints);

// Z* = (A B' + E) / sqrt(rank + 1) with iid standard normal factors, plus a
// per-column shift drawn uniformly from [-shift_max, shift_max], discretized.
SimTruth gen_recommender(const RecommenderSimConfig& config);

// Missing not at random: column j keeps a share 1 - pi_j of its cells, where
// pi_j = 0.4 + 0.59 (shift_max - s_j) / (2 shift_max) rises from 0.40 for the
// most cheerful column to 0.99 for the most shifted-down one; exactly
// round(pi_j * n) cells per column are removed, chosen uniformly.
void inject_mnar(SimTruth& truth, std::uint64_t seed);

// Missing completely at random: round(gamma * n * p) cells removed uniformly
// over the whole matrix; a column losing all its cells gets one back (and a
// column that can spare one loses one) to keep counts.
void inject_mcar(SimTruth& truth, double gamma, std::uint64_t seed);

// Correlated-construct survey generator. Latent rows are N(0, Sigma) with
// Sigma_ab = 1 on the diagonal and 0.6^{|k(a)-k(b)|+1} otherwise (k = item's
// construct), construct shifts are Uniform[0, shift_max], the second half of
// each construct's items is reverse-keyed (c -> K+1-c), and one shared random
// permutation shuffles the columns.
SimTruth gen_survey(const SurveySimConfig& config);

// Survey abandonment: round(gamma * n) respondents stop at a uniformly random
// item; that item and all later ones (in survey column order) become missing.
void inject_abandonment(SimTruth& truth, double gamma, std::uint64_t seed);

// Careless responding: round(epsilon * n) respondents replace each of their
// remaining observed answers by a fair coin between categories 1 and K.
// Apply after inject_abandonment; rows may both abandon and respond
// carelessly. The affected rows are recorded in truth.careless_rows.
void inject_careless(SimTruth& truth, double epsilon, std::uint64_t seed);

}  // namespace rdmc
