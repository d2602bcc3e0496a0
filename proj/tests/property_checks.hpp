#pragma once

// Structural solver properties checked on randomized instances. Each check
// throws std::runtime_error with a diagnostic message on the first violation
// and returns normally otherwise, so the same suite backs both the unit
// tests and the acceptance harness.

#include <armadillo>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdmc/loss.hpp"
#include "rdmc/rating_matrix.hpp"
#include "rdmc/rng.hpp"
#include "rdmc/solver.hpp"
#include "test_support.hpp"

namespace rdmc::checks {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

// Fitted completions stay on the discrete scale and preserve observed cells.
inline void check_discreteness_preservation(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> size(6, 14);
  std::uniform_real_distribution<double> lambda_draw(0.05, 2.0);
  const std::vector<int> category_choices = {3, 5, 7};
  const std::vector<LossKind> losses = {LossKind::pseudo_huber,
                                        LossKind::absolute,
                                        LossKind::truncated, LossKind::squared};
  for (int trial = 0; trial < 10; ++trial) {
    const int n = size(rng), p = size(rng);
    const int k = category_choices[trial % category_choices.size()];
    RatingScale scale{k};
    SparseRatingMatrix x = rdmc::testing::random_sparse(n, p, k, 0.55, rng);
    CenteredMatrix cm = center(x, scale);
    SolverConfig config = SolverConfig::defaults(
        LossSpec::make(losses[trial % losses.size()], scale), Stopping::liberal);
    config.lambda = lambda_draw(rng);
    SolveResult fit = solve(cm, config);
    arma::mat completion = assemble_completion(fit.l, cm);

    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < n; ++i) {
        const double v = completion(i, j);
        std::ostringstream at;
        at << "trial " << trial << " cell (" << i << ", " << j << ")";
        require(std::abs(v - std::round(v)) <= 1e-9,
                "discreteness: non-integral completion at " + at.str());
        require(v >= 1.0 - 1e-9 && v <= k + 1e-9,
                "discreteness: completion outside the scale at " + at.str());
      }
    }
    for (const Entry& e : x.entries())
      require(completion(e.row, e.col) == e.value,
              "preservation: observed cell changed at trial " +
                  std::to_string(trial));
  }
}

// The discrete update must pick, per cell, exactly the category a brute-force
// scan (in extended precision) picks: the smallest category whose objective
// lies within 1e-12 of the minimum.
inline void check_l_update_oracle(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_int_distribution<int> cat_draw(2, 5);
  std::uniform_real_distribution<double> mu_draw(0.05, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.5);
  const std::vector<LossKind> losses = {LossKind::pseudo_huber,
                                        LossKind::absolute, LossKind::truncated};

  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng), p = size(rng), k = cat_draw(rng);
    RatingScale scale{k};
    SparseRatingMatrix x = rdmc::testing::random_sparse(n, p, k, 0.6, rng);
    CenteredMatrix cm = center(x, scale);
    const LossSpec loss = LossSpec::make(losses[trial % losses.size()], scale);

    SolverState state = init_state(cm);
    state.z.set_size(n, p);
    state.theta.set_size(n, p);
    for (auto& v : state.z) v = gauss(rng);
    for (auto& v : state.theta) v = gauss(rng);
    state.mu = mu_draw(rng);

    const arma::mat z = state.z, theta = state.theta;
    const double mu = state.mu;
    arma::Mat<unsigned char> mask = cm.x.observed_mask();
    arma::mat centered_x = cm.x.to_dense(0.0);

    update_l(state, cm, loss);

    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < n; ++i) {
        long double best = std::numeric_limits<long double>::infinity();
        std::vector<long double> objs(k);
        for (int c = 0; c < k; ++c) {
          const long double cat = cm.category(j, c);
          long double obj;
          if (mask(i, j)) {
            const long double y = cat - static_cast<long double>(centered_x(i, j));
            long double rho;
            switch (loss.kind) {
              case LossKind::pseudo_huber: {
                const long double t = loss.tau;
                rho = t * t * (std::sqrt(1.0L + (y / t) * (y / t)) - 1.0L);
                break;
              }
              case LossKind::absolute:
                rho = std::abs(y);
                break;
              case LossKind::truncated:
                rho = std::min<long double>(std::abs(y), loss.tau);
                break;
              case LossKind::squared:
                rho = y * y / 2.0L;
                break;
              default:
                throw std::logic_error("unexpected loss");
            }
            const long double residual =
                cat - static_cast<long double>(z(i, j)) +
                static_cast<long double>(theta(i, j)) / mu;
            obj = rho + (static_cast<long double>(mu) / 2.0L) * residual * residual;
          } else {
            const long double residual =
                cat - (static_cast<long double>(z(i, j)) -
                       static_cast<long double>(theta(i, j)) / mu);
            obj = residual * residual;
          }
          objs[c] = obj;
          best = std::min(best, obj);
        }
        int oracle = -1;
        for (int c = 0; c < k; ++c) {
          if (objs[c] <= best + 1e-12L) {
            oracle = c;
            break;
          }
        }
        const double chosen = state.l(i, j);
        const double expected = cm.category(j, oracle);
        if (chosen != expected) {
          std::ostringstream msg;
          msg << "l-update oracle: trial " << trial << " cell (" << i << ", "
              << j << ") " << loss_name(loss.kind) << " chose " << chosen
              << " but the brute-force minimizer is " << expected;
          throw std::runtime_error(msg.str());
        }
      }
    }
  }
}

// The SVD soft-threshold step must solve its proximal problem: no perturbed
// point may beat it on F(Z) = lambda ||Z||_* + mu/2 ||Z - (L + Theta/mu)||_F^2.
inline void check_z_update_prox(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lambda_draw(0.1, 3.0);
  std::uniform_real_distribution<double> mu_draw(0.05, 1.5);
  std::uniform_real_distribution<double> eta_draw(-4.0, 0.0);

  const int n = 9, p = 7;
  RatingScale scale{5};
  SparseRatingMatrix x = rdmc::testing::random_sparse(n, p, 5, 0.7, rng);
  CenteredMatrix cm = center(x, scale);
  SolverState state = init_state(cm);
  state.theta.set_size(n, p);
  for (auto& v : state.theta) v = gauss(rng);
  state.mu = mu_draw(rng);
  const double lambda = lambda_draw(rng);

  const arma::mat m = state.l + state.theta / state.mu;
  const double nuclear_reported = update_z(state, lambda);
  const arma::mat z_star = state.z;

  arma::vec sv_star = arma::svd(z_star);
  require(std::abs(arma::accu(sv_star) - nuclear_reported) <=
              1e-8 * (1.0 + nuclear_reported),
          "z-update: reported nuclear norm disagrees with the SVD");

  const auto objective_at = [&](const arma::mat& z) {
    return lambda * arma::accu(arma::svd(z)) +
           0.5 * state.mu * arma::accu(arma::square(z - m));
  };
  const double f_star = objective_at(z_star);
  for (int trial = 0; trial < 50; ++trial) {
    arma::mat g(n, p);
    for (auto& v : g) v = gauss(rng);
    const double eta = std::pow(10.0, eta_draw(rng));
    const double f_other = objective_at(z_star + eta * g);
    if (f_star > f_other + 1e-10) {
      std::ostringstream msg;
      msg << "z-update prox: perturbation " << trial << " improves the "
          << "objective by " << (f_star - f_other);
      throw std::runtime_error(msg.str());
    }
  }
}

// The penalty parameter follows mu = mu0 * delta^t exactly, bit for bit.
inline void check_mu_schedule(std::uint64_t seed) {
  Rng rng(seed);
  RatingScale scale{5};
  SparseRatingMatrix x = rdmc::testing::random_sparse(8, 6, 5, 0.6, rng);
  CenteredMatrix cm = center(x, scale);
  SolverConfig config =
      SolverConfig::defaults(LossSpec::make(LossKind::absolute, scale),
                             Stopping::strict);
  config.lambda = 0.3;

  SolverState state = init_state(cm);
  require(state.mu == config.mu0, "mu schedule: initial mu is not mu0");
  for (int t = 1; t <= 40; ++t) {
    update_z(state, config.lambda);
    update_l(state, cm, config.loss);
    update_multiplier(state, config);
    require(state.iteration == t, "mu schedule: iteration counter drifted");
    const double expected = config.mu0 * std::pow(config.delta, t);
    if (state.mu != expected) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "mu schedule: after iteration " << t << " mu = " << state.mu
          << " but mu0 * delta^t = " << expected;
      throw std::runtime_error(msg.str());
    }
  }
}

// The Z-update's singular values are the soft-thresholded singular values of
// the input matrix L + Theta/mu.
inline void check_soft_threshold_identity(std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lambda_draw(0.05, 2.5);
  std::uniform_real_distribution<double> mu_draw(0.05, 1.5);

  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10, p = 6;
    RatingScale scale{5};
    SparseRatingMatrix x = rdmc::testing::random_sparse(n, p, 5, 0.7, rng);
    CenteredMatrix cm = center(x, scale);
    SolverState state = init_state(cm);
    state.theta.set_size(n, p);
    for (auto& v : state.theta) v = gauss(rng);
    state.mu = mu_draw(rng);
    const double lambda = lambda_draw(rng);

    const arma::mat m = state.l + state.theta / state.mu;
    arma::vec sv_m = arma::svd(m);
    update_z(state, lambda);
    arma::vec sv_z = arma::svd(state.z);

    for (arma::uword r = 0; r < sv_z.n_elem; ++r) {
      const double expected = std::max(sv_m(r) - lambda / state.mu, 0.0);
      if (std::abs(sv_z(r) - expected) > 1e-8 * (1.0 + expected)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "soft-threshold identity: trial " << trial << " singular value "
            << r << " is " << sv_z(r) << ", expected " << expected;
        throw std::runtime_error(msg.str());
      }
    }
  }
}

// The whole structural suite; returns normally iff every property holds.
inline void run_all_property_checks(std::uint64_t seed) {
  check_discreteness_preservation(mix_seed(seed, 101));
  check_l_update_oracle(mix_seed(seed, 102));
  check_z_update_prox(mix_seed(seed, 103));
  check_mu_schedule(mix_seed(seed, 104));
  check_soft_threshold_identity(mix_seed(seed, 105));
}

}  // namespace rdmc::checks
