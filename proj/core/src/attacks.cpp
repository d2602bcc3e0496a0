#include "rdmc/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdmc/rng.hpp"

namespace rdmc {

std::string attack_name(AttackScheme scheme) {
  switch (scheme) {
    case AttackScheme::none: return "none";
    case AttackScheme::average: return "average";
    case AttackScheme::reverse_bandwagon: return "reverse-bandwagon";
    case AttackScheme::love_hate: return "love-hate";
  }
  throw std::logic_error("attack_name: unknown scheme");
}

AttackScheme parse_attack(const std::string& name) {
  if (name == "none") return AttackScheme::none;
  if (name == "average") return AttackScheme::average;
  if (name == "reverse-bandwagon") return AttackScheme::reverse_bandwagon;
  if (name == "love-hate") return AttackScheme::love_hate;
  throw std::invalid_argument(
      "unknown attack '" + name +
      "' (expected none|average|reverse-bandwagon|love-hate)");
}

namespace {

double column_average(const SparseRatingMatrix& r, int j) {
  auto col = r.column(j);
  double sum = 0.0;
  for (const Entry& e : col) sum += e.value;
  return sum / static_cast<double>(col.size());
}

}  // namespace

int select_target_simulated(const SimTruth& truth) {
  const SparseRatingMatrix r = truth.make_observed();
  const double bar = 0.9 * truth.shift_max;
  int target = -1;
  double best_avg = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < r.n_cols(); ++j) {
    if (!(truth.shifts[j] > bar) || r.column_count(j) == 0) continue;
    const double avg = column_average(r, j);
    if (avg > best_avg) {  // strict: ties keep the smaller index
      best_avg = avg;
      target = j;
    }
  }
  if (target < 0)
    throw std::runtime_error(
        "select_target_simulated: no column with shift above 0.9 * shift_max");
  return target;
}

int select_target_empirical(const SparseRatingMatrix& r) {
  if (r.nnz() == 0)
    throw std::invalid_argument("select_target_empirical: empty matrix");
  std::vector<std::size_t> counts(r.n_cols());
  for (int j = 0; j < r.n_cols(); ++j) counts[j] = r.column_count(j);
  // Top decile: counts at or above the ascending order statistic at rank
  // ceil(0.9 p).
  std::vector<std::size_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.9 * static_cast<double>(r.n_cols())));
  const std::size_t threshold = sorted[std::min(rank, sorted.size()) - 1];
  int target = -1;
  double best_avg = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < r.n_cols(); ++j) {
    if (counts[j] < threshold || counts[j] == 0) continue;
    const double avg = column_average(r, j);
    if (avg > best_avg) {
      best_avg = avg;
      target = j;
    }
  }
  if (target < 0)
    throw std::runtime_error("select_target_empirical: no eligible column");
  return target;
}

AttackResult forge_profiles(const SparseRatingMatrix& r, const RatingScale& scale,
                            int target, const AttackSpec& spec) {
  if (target < 0 || target >= r.n_cols())
    throw std::invalid_argument("forge_profiles: target out of range");
  if (spec.scheme == AttackScheme::none)
    throw std::invalid_argument("forge_profiles: scheme 'none' forges nothing");
  if (!(spec.epsilon > 0.0))
    throw std::invalid_argument("forge_profiles: epsilon must be positive");
  const int p = r.n_cols();
  const int k = scale.categories;
  const auto n_fake = static_cast<int>(
      std::llround(spec.epsilon * static_cast<double>(r.column_count(target))));
  const auto n_filler = static_cast<int>(std::llround(0.1 * p));

  Rng rng(spec.seed);

  // Scheme-selected columns (reverse-bandwagon): the round(0.1 p) columns
  // with the lowest average observed rating among those rated >= 20 times.
  std::vector<int> selected;
  std::vector<unsigned char> is_selected(p, 0);
  if (spec.scheme == AttackScheme::reverse_bandwagon) {
    std::vector<std::pair<double, int>> eligible;
    for (int j = 0; j < p; ++j) {
      if (j == target || r.column_count(j) < 20) continue;
      eligible.emplace_back(column_average(r, j), j);
    }
    if (static_cast<int>(eligible.size()) < n_filler)
      throw std::runtime_error(
          "forge_profiles: fewer than round(0.1 p) columns have >= 20 ratings");
    std::sort(eligible.begin(), eligible.end());
    for (int s = 0; s < n_filler; ++s) {
      selected.push_back(eligible[s].second);
      is_selected[eligible[s].second] = 1;
    }
  }

  // Modal ratings per column (average attack); ties are kept for per-cell
  // uniform sampling in ascending order.
  std::vector<std::vector<double>> modes(p);
  if (spec.scheme == AttackScheme::average) {
    std::vector<int> counts(k);
    for (int j = 0; j < p; ++j) {
      auto col = r.column(j);
      if (col.empty()) continue;
      std::fill(counts.begin(), counts.end(), 0);
      for (const Entry& e : col) {
        const int c = static_cast<int>(std::lround(e.value)) - 1;
        if (c < 0 || c >= k)
          throw std::invalid_argument("forge_profiles: rating outside the scale");
        ++counts[c];
      }
      const int top = *std::max_element(counts.begin(), counts.end());
      for (int c = 0; c < k; ++c)
        if (counts[c] == top) modes[j].push_back(scale.value(c));
    }
  }

  // Columns a filler sample may draw from: everything except the target and
  // (for reverse-bandwagon) the selected set, which is rated separately.
  std::vector<int> candidates;
  candidates.reserve(p);
  for (int j = 0; j < p; ++j)
    if (j != target && !is_selected[j]) candidates.push_back(j);
  if (static_cast<int>(candidates.size()) < n_filler)
    throw std::runtime_error("forge_profiles: not enough columns for fillers");
  // Average attack fillers must come from rated columns (their value is the
  // column mode); empty columns cannot be filled under that scheme.
  if (spec.scheme == AttackScheme::average) {
    std::erase_if(candidates, [&](int j) { return r.column_count(j) == 0; });
    if (static_cast<int>(candidates.size()) < n_filler)
      throw std::runtime_error(
          "forge_profiles: not enough rated columns for average-attack fillers");
  }

  std::vector<Entry> entries = r.entries();
  entries.reserve(entries.size() +
                  static_cast<std::size_t>(n_fake) * (1 + n_filler + selected.size()));
  AttackResult result;
  result.target = target;
  result.fake_rows = n_fake;
  result.filled_columns.resize(n_fake);

  for (int f = 0; f < n_fake; ++f) {
    const int row = r.n_rows() + f;
    entries.push_back({row, target, 1.0});  // nuke: minimum category

    for (int j : selected) {
      entries.push_back({row, j, 1.0});
      result.filled_columns[f].push_back(j);
    }

    for (std::uint64_t pick :
         sample_without_replacement(candidates.size(), n_filler, rng)) {
      const int j = candidates[pick];
      double value = 0.0;
      switch (spec.scheme) {
        case AttackScheme::average: {
          const auto& m = modes[j];
          if (m.size() == 1) {
            value = m.front();
          } else {
            std::uniform_int_distribution<std::size_t> tie(0, m.size() - 1);
            value = m[tie(rng)];
          }
          break;
        }
        case AttackScheme::reverse_bandwagon:
          value = 1.0;
          break;
        case AttackScheme::love_hate:
          value = static_cast<double>(k);
          break;
        case AttackScheme::none:
          break;  // unreachable
      }
      entries.push_back({row, j, value});
      result.filled_columns[f].push_back(j);
    }
    std::sort(result.filled_columns[f].begin(), result.filled_columns[f].end());
  }

  result.augmented =
      SparseRatingMatrix(r.n_rows() + n_fake, r.n_cols(), std::move(entries));
  return result;
}

}  // namespace rdmc
