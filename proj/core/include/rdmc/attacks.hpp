#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdmc/rating_matrix.hpp"
#include "rdmc/simulation.hpp"

namespace rdmc {

enum class AttackScheme { none, average, reverse_bandwagon, love_hate };

std::string attack_name(AttackScheme scheme);
AttackScheme parse_attack(const std::string& name);

// A nuke profile-injection attack: fake user rows that rate the target with
// the minimum category. epsilon sizes the attack relative to the target's
// observed-rating count.
struct AttackSpec {
  AttackScheme scheme = AttackScheme::average;
  double epsilon = 0.2;
  std::uint64_t seed = 0;
};

struct AttackResult {
  SparseRatingMatrix augmented;  // original rows first, fake rows appended
  int target = -1;
  int fake_rows = 0;
  // Column sets each fake row filled (fillers plus scheme-selected columns,
  // excluding the target), recorded for inspection and tests.
  std::vector<std::vector<int>> filled_columns;
};

// Simulation-mode target: among columns whose mean shift exceeds 0.9 *
// shift_max (items popular by construction), the one with the highest average
// observed rating. Throws if no column clears the shift bar.
int select_target_simulated(const SimTruth& truth);

// Empirical-mode target: among columns whose observed count reaches the top
// decile, the one with the highest average observed rating. Ties -> smaller
// column index.
int select_target_empirical(const SparseRatingMatrix& r);

// Forge round(epsilon * |observed(target)|) fake rows. Every fake row rates
// the target 1 and round(0.1 * p) filler columns, freshly sampled per row
// from the eligible columns. Scheme specifics:
//   average:            fillers get their column's modal rating (ties sampled
//                       uniformly among the tied modes);
//   reverse-bandwagon:  a shared set of round(0.1 * p) unpopular columns
//                       (lowest average among those with >= 20 ratings) is
//                       rated 1 by every fake row, as are the fillers;
//   love-hate:          fillers get the maximum category.
AttackResult forge_profiles(const SparseRatingMatrix& r, const RatingScale& scale,
                            int target, const AttackSpec& spec);

}  // namespace rdmc
