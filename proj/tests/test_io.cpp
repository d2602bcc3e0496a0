#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "rdmc/io.hpp"
#include "test_support.hpp"

using namespace rdmc;
using rdmc::testing::from_dense;
using rdmc::testing::kMissing;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path((std::filesystem::temp_directory_path() / name).string()) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

// Directory containing the shipped data files, fixed at compile time.
std::string source_file(const std::string& relative) {
  return std::string(RDMC_SOURCE_DIR) + "/" + relative;
}

}  // namespace

TEST_CASE("tab-separated ratings files") {
  SUBCASE("dimensions come from the largest ids") {
    TempFile f("rdmc_io_basic.tsv",
               "1\t1\t5\t874965758\n"
               "3\t2\t1\t876893171\n"
               "2\t4\t3\t878542960\n");
    LoadedMatrix data = read_movielens(f.path);
    CHECK(data.matrix.n_rows() == 3);
    CHECK(data.matrix.n_cols() == 4);
    CHECK(data.matrix.nnz() == 3);
    CHECK(data.scale.categories == 5);
    CHECK(data.matrix.has(0, 0));
    CHECK(data.matrix.has(2, 1));
    CHECK(data.matrix.has(1, 3));
  }

  SUBCASE("out-of-scale ratings are rejected") {
    TempFile f("rdmc_io_badrating.tsv", "1\t1\t6\t874965758\n");
    CHECK_THROWS(read_movielens(f.path));
    TempFile g("rdmc_io_zerorating.tsv", "1\t1\t0\t874965758\n");
    CHECK_THROWS(read_movielens(g.path));
  }

  SUBCASE("a malformed line raises an error naming its line number") {
    TempFile f("rdmc_io_malformed.tsv",
               "1\t1\t5\t874965758\n"
               "not a rating line\n");
    try {
      read_movielens(f.path);
      FAIL("expected an exception");
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }

  SUBCASE("duplicate user-item pairs keep the last rating") {
    TempFile f("rdmc_io_dup.tsv",
               "1\t1\t5\t874965758\n"
               "2\t2\t2\t874965758\n"
               "1\t1\t3\t874965999\n");
    LoadedMatrix data = read_movielens(f.path);
    CHECK(data.matrix.nnz() == 2);
    for (const Entry& e : data.matrix.entries())
      if (e.row == 0 && e.col == 0) CHECK(e.value == 3.0);
  }

  SUBCASE("missing file throws") {
    CHECK_THROWS(read_movielens("/nonexistent/u.data"));
  }
}

TEST_CASE("long-format CSV") {
  SUBCASE("round trip through write and read") {
    arma::mat dense(3, 3);
    dense.fill(kMissing);
    dense(0, 0) = 1;
    dense(1, 2) = 7;
    dense(2, 1) = 4;
    SparseRatingMatrix r = from_dense(dense);
    TempFile f("rdmc_io_long.csv", "");
    write_long_csv(f.path, r);
    LoadedMatrix back = read_long_csv(f.path, 7);
    CHECK(back.matrix.n_rows() == 3);
    CHECK(back.matrix.n_cols() == 3);
    REQUIRE(back.matrix.nnz() == 3);
    CHECK(back.scale.categories == 7);
    for (const Entry& e : r.entries()) CHECK(back.matrix.has(e.row, e.col));
  }

  SUBCASE("header is required") {
    TempFile f("rdmc_io_noheader.csv", "1,1,3\n");
    CHECK_THROWS(read_long_csv(f.path, 5));
  }

  SUBCASE("ratings outside the scale are rejected") {
    TempFile f("rdmc_io_range.csv", "user,item,rating\n1,1,6\n");
    CHECK_THROWS(read_long_csv(f.path, 5));
  }

  SUBCASE("empty body throws") {
    TempFile f("rdmc_io_empty.csv", "user,item,rating\n");
    CHECK_THROWS(read_long_csv(f.path, 5));
  }
}

TEST_CASE("dense CSV round trip") {
  arma::mat m = {{1.5, -2.0, 0.0}, {3.25, 4.0, -0.5}};
  TempFile f("rdmc_io_dense.csv", "");
  write_dense_csv(f.path, m);
  arma::mat back = read_dense_csv(f.path);
  REQUIRE(back.n_rows == 2);
  REQUIRE(back.n_cols == 3);
  CHECK(arma::abs(back - m).max() < 1e-12);
}

TEST_CASE("rating-count filter") {
  // 5 x 4: column 2 has one rating, column 3 has none.
  arma::mat dense(5, 4);
  dense.fill(kMissing);
  for (int i = 0; i < 5; ++i) dense(i, 0) = 3;
  for (int i = 0; i < 3; ++i) dense(i, 1) = 4;
  dense(0, 2) = 5;
  SparseRatingMatrix r = from_dense(dense);

  SUBCASE("threshold zero is the identity") {
    FilterResult kept = filter_min_ratings(r, 0);
    CHECK(kept.matrix.n_cols() == 4);
    CHECK(kept.matrix.n_rows() == 5);
    CHECK(kept.matrix.nnz() == r.nnz());
  }

  SUBCASE("columns below the threshold are dropped and re-indexed") {
    FilterResult kept = filter_min_ratings(r, 2);
    CHECK(kept.matrix.n_cols() == 2);
    CHECK(kept.kept_cols == std::vector<int>{0, 1});
    CHECK(kept.matrix.nnz() == 8);

    FilterResult strict = filter_min_ratings(r, 4);
    CHECK(strict.matrix.n_cols() == 1);
    CHECK(strict.kept_cols == std::vector<int>{0});
  }

  SUBCASE("kept mappings translate new indices back to the original") {
    FilterResult kept = filter_min_ratings(r, 2);
    for (int j = 0; j < kept.matrix.n_cols(); ++j) {
      const int original = kept.kept_cols[j];
      CHECK(kept.matrix.column_count(j) == r.column_count(original));
    }
    CHECK(kept.kept_rows.size() ==
          static_cast<std::size_t>(kept.matrix.n_rows()));
  }

  SUBCASE("filtering an already-filtered matrix is a fixed point") {
    FilterResult once = filter_min_ratings(r, 2);
    FilterResult twice = filter_min_ratings(once.matrix, 2);
    CHECK(twice.matrix.n_cols() == once.matrix.n_cols());
    CHECK(twice.matrix.nnz() == once.matrix.nnz());
  }

  SUBCASE("row thresholds interact with column thresholds until stable") {
    // Row 4 only rates column 0; with min_row_ratings = 2 it must go.
    FilterResult kept = filter_min_ratings(r, 2, 2);
    for (int i : kept.kept_rows) CHECK(i != 4);
  }

  SUBCASE("a filter that eliminates everything throws") {
    CHECK_THROWS(filter_min_ratings(r, 100));
  }
}

TEST_CASE("shipped ratings snapshot loads with the documented shape") {
  LoadedMatrix data = read_movielens(source_file("data/ml100k/u.data"));
  CHECK(data.matrix.n_rows() == 943);
  CHECK(data.matrix.n_cols() == 1664);
  CHECK(data.matrix.nnz() == 99392);
  CHECK(data.scale.categories == 5);

  SUBCASE("rating histogram matches the snapshot") {
    std::map<int, int> histogram;
    for (const Entry& e : data.matrix.entries())
      ++histogram[static_cast<int>(e.value)];
    CHECK(histogram[1] == 6059);
    CHECK(histogram[2] == 11307);
    CHECK(histogram[3] == 27002);
    CHECK(histogram[4] == 33947);
    CHECK(histogram[5] == 21077);
  }

  SUBCASE("the 20-rating column filter yields the case-study dimensions") {
    FilterResult kept = filter_min_ratings(data.matrix, 20);
    CHECK(kept.matrix.n_rows() == 943);
    CHECK(kept.matrix.n_cols() == 931);
    CHECK(kept.matrix.nnz() == 94385);
  }
}

TEST_CASE("canonical GroupLens export loads when provided") {
  const char* path = std::getenv("RDMC_ML100K");
  if (path == nullptr || std::string(path).empty()) {
    MESSAGE("RDMC_ML100K not set; skipping the canonical-file check");
    return;
  }
  LoadedMatrix data = read_movielens(path);
  CHECK(data.matrix.n_rows() == 943);
  CHECK(data.matrix.n_cols() == 1682);
  CHECK(data.matrix.nnz() == 100000);
}
