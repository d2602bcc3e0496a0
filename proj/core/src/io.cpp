#include "rdmc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rdmc {

namespace {

struct RawRating {
  int user, item;
  double rating;
};

[[noreturn]] void malformed(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " + what);
}

int parse_int(std::string_view field, const std::string& path,
              std::size_t line_no, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    malformed(path, line_no, std::string("bad ") + what + " '" +
                                 std::string(field) + "'");
  return value;
}

double parse_rating(std::string_view field, const std::string& path,
                    std::size_t line_no) {
  double value = 0.0;
  // Ratings in these formats are integers, but parse as double so the range
  // check below produces the clearer error for fractional input.
  std::string buf(field);
  try {
    std::size_t used = 0;
    value = std::stod(buf, &used);
    if (used != buf.size()) throw std::invalid_argument("trailing data");
  } catch (const std::exception&) {
    malformed(path, line_no, "bad rating '" + buf + "'");
  }
  return value;
}

// Deduplicate keep-last, then build the matrix with 0-based indices.
LoadedMatrix build_matrix(std::vector<RawRating> raw, int categories,
                          const std::string& path) {
  int max_user = 0, max_item = 0;
  std::map<std::pair<int, int>, double> cells;
  std::size_t duplicates = 0;
  for (const RawRating& r : raw) {
    max_user = std::max(max_user, r.user);
    max_item = std::max(max_item, r.item);
    auto [it, inserted] = cells.insert_or_assign({r.user, r.item}, r.rating);
    (void)it;
    if (!inserted) ++duplicates;
  }
  if (duplicates > 0)
    std::cerr << "warning: " << path << ": " << duplicates
              << " duplicate (user, item) pairs; kept the last occurrence\n";
  std::vector<Entry> entries;
  entries.reserve(cells.size());
  for (const auto& [key, value] : cells)
    entries.push_back({key.first - 1, key.second - 1, value});
  LoadedMatrix loaded;
  loaded.scale.categories = categories;
  loaded.matrix = SparseRatingMatrix(max_user, max_item, std::move(entries));
  return loaded;
}

}  // namespace

LoadedMatrix read_movielens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<RawRating> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view view(line);
    std::size_t pos = 0;
    while (pos <= view.size()) {
      std::size_t tab = view.find('\t', pos);
      if (tab == std::string_view::npos) {
        fields.push_back(view.substr(pos));
        break;
      }
      fields.push_back(view.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 4)
      malformed(path, line_no, "expected 4 tab-separated fields, got " +
                                   std::to_string(fields.size()));
    RawRating r;
    r.user = parse_int(fields[0], path, line_no, "user id");
    r.item = parse_int(fields[1], path, line_no, "item id");
    r.rating = parse_rating(fields[2], path, line_no);
    parse_int(fields[3], path, line_no, "timestamp");
    if (r.user < 1 || r.item < 1)
      malformed(path, line_no, "ids must be 1-indexed positive integers");
    if (r.rating < 1.0 || r.rating > 5.0 ||
        r.rating != static_cast<double>(static_cast<int>(r.rating)))
      malformed(path, line_no,
                "rating must be an integer in {1..5}, got " +
                    std::to_string(r.rating));
    raw.push_back(r);
  }
  if (raw.empty()) throw std::runtime_error(path + ": no ratings");
  return build_matrix(std::move(raw), 5, path);
}

LoadedMatrix read_long_csv(const std::string& path, int categories) {
  if (categories < 2)
    throw std::invalid_argument("read_long_csv: need at least 2 categories");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file");
  if (line != "user,item,rating")
    throw std::runtime_error(path + " line 1: expected header 'user,item,rating'");
  std::vector<RawRating> raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f1, f2, f3, extra;
    if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') ||
        !std::getline(ls, f3, ','))
      malformed(path, line_no, "expected 3 comma-separated fields");
    if (std::getline(ls, extra, ','))
      malformed(path, line_no, "expected 3 comma-separated fields");
    RawRating r;
    r.user = parse_int(f1, path, line_no, "user id");
    r.item = parse_int(f2, path, line_no, "item id");
    r.rating = parse_rating(f3, path, line_no);
    if (r.user < 1 || r.item < 1)
      malformed(path, line_no, "ids must be 1-indexed positive integers");
    if (r.rating < 1.0 || r.rating > static_cast<double>(categories) ||
        r.rating != static_cast<double>(static_cast<int>(r.rating)))
      malformed(path, line_no, "rating must be an integer in {1.." +
                                   std::to_string(categories) + "}");
    raw.push_back(r);
  }
  if (raw.empty()) throw std::runtime_error(path + ": no ratings");
  return build_matrix(std::move(raw), categories, path);
}

void write_long_csv(const std::string& path, const SparseRatingMatrix& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "user,item,rating\n";
  for (const Entry& e : r.entries())
    out << e.row + 1 << ',' << e.col + 1 << ',' << e.value << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_dense_csv(const std::string& path, const arma::mat& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.precision(17);
  for (arma::uword i = 0; i < m.n_rows; ++i) {
    for (arma::uword j = 0; j < m.n_cols; ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

arma::mat read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty file");
  arma::mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(i, j) = rows[i][j];
  return m;
}

FilterResult filter_min_ratings(const SparseRatingMatrix& r,
                                int min_col_ratings, int min_row_ratings) {
  if (min_col_ratings < 0 || min_row_ratings < 0)
    throw std::invalid_argument("filter_min_ratings: thresholds must be >= 0");
  std::vector<char> keep_row(r.n_rows(), 1), keep_col(r.n_cols(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> col_count(r.n_cols(), 0), row_count(r.n_rows(), 0);
    for (const Entry& e : r.entries()) {
      if (!keep_row[e.row] || !keep_col[e.col]) continue;
      ++col_count[e.col];
      ++row_count[e.row];
    }
    for (int j = 0; j < r.n_cols(); ++j) {
      if (keep_col[j] && col_count[j] < min_col_ratings) {
        keep_col[j] = 0;
        changed = true;
      }
    }
    if (min_row_ratings > 0) {
      for (int i = 0; i < r.n_rows(); ++i) {
        if (keep_row[i] && row_count[i] < min_row_ratings) {
          keep_row[i] = 0;
          changed = true;
        }
      }
    }
  }

  FilterResult result;
  std::vector<int> row_map(r.n_rows(), -1), col_map(r.n_cols(), -1);
  for (int i = 0; i < r.n_rows(); ++i)
    if (keep_row[i]) {
      row_map[i] = static_cast<int>(result.kept_rows.size());
      result.kept_rows.push_back(i);
    }
  for (int j = 0; j < r.n_cols(); ++j)
    if (keep_col[j]) {
      col_map[j] = static_cast<int>(result.kept_cols.size());
      result.kept_cols.push_back(j);
    }
  if (result.kept_rows.empty() || result.kept_cols.empty())
    throw std::runtime_error(
        "filter_min_ratings: no rows or columns survive the thresholds");
  std::vector<Entry> entries;
  for (const Entry& e : r.entries())
    if (row_map[e.row] >= 0 && col_map[e.col] >= 0)
      entries.push_back({row_map[e.row], col_map[e.col], e.value});
  result.matrix = SparseRatingMatrix(static_cast<int>(result.kept_rows.size()),
                                     static_cast<int>(result.kept_cols.size()),
                                     std::move(entries));
  return result;
}

}  // namespace rdmc
