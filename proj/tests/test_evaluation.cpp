#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rdmc/evaluation.hpp"

using namespace rdmc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("mean absolute error over evaluation cells") {
  arma::mat predictions(2, 2, arma::fill::zeros);
  predictions(0, 0) = 5.0;
  predictions(1, 1) = 4.0;

  SUBCASE("worked example") {
    // Cell (0,0): |5 - 1| = 4; cell (1,1): |4 - 3| = 1; mean = 2.5.
    std::vector<Entry> cells = {{0, 0, 1.0}, {1, 1, 3.0}};
    CHECK(mae(predictions, cells) == doctest::Approx(2.5).epsilon(1e-12));
  }

  SUBCASE("perfect predictions score zero") {
    std::vector<Entry> cells = {{0, 0, 5.0}, {1, 1, 4.0}};
    CHECK(mae(predictions, cells) == 0.0);
  }

  SUBCASE("empty evaluation set throws") {
    CHECK_THROWS(mae(predictions, {}));
  }
}

TEST_CASE("mean prediction shift on the target column") {
  arma::mat before(3, 2, arma::fill::zeros);
  arma::mat after(3, 2, arma::fill::zeros);
  before(0, 1) = 4.0;
  before(2, 1) = 4.0;
  after(0, 1) = 2.0;   // shift -2
  after(2, 1) = 4.0;   // shift 0

  CHECK(mean_prediction_shift(before, after, {0, 2}, 1) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(mean_prediction_shift(before, before, {0, 1, 2}, 1) == 0.0);
  CHECK_THROWS(mean_prediction_shift(before, after, {}, 1));
}

TEST_CASE("sample quantiles interpolate between order statistics") {
  std::vector<double> v = {3.0, 1.0, 5.0, 2.0, 4.0};
  CHECK(sample_quantile(v, 0.0) == 1.0);
  CHECK(sample_quantile(v, 1.0) == 5.0);
  CHECK(sample_quantile(v, 0.5) == 3.0);
  CHECK(sample_quantile(v, 0.25) == 2.0);
  CHECK(sample_quantile(v, 0.75) == 4.0);
  // Between order statistics: with four points {1,2,3,4}, the 0.5 quantile
  // sits halfway between 2 and 3.
  CHECK(sample_quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(sample_quantile({1.0, 2.0, 3.0, 4.0}, 1.0 / 3.0) ==
        doctest::Approx(2.0));
  CHECK(sample_quantile({7.0}, 0.31) == 7.0);
  CHECK_THROWS(sample_quantile({}, 0.5));
  CHECK_THROWS(sample_quantile(v, -0.1));
  CHECK_THROWS(sample_quantile(v, 1.1));
}

TEST_CASE("result records survive a CSV round trip") {
  std::vector<ResultRecord> records;
  ResultRecord a;
  a.replication = 3;
  a.method = "rdmc";
  a.loss = "phuber";
  a.stopping = "strict";
  a.categories = 10;
  a.missingness = "mnar";
  a.attack = "none";
  a.epsilon = 0.0;
  a.metric = "mae";
  a.value = 1.2345;
  a.lambda = 0.3;
  a.iterations = 57;
  a.wall_time_ms = 123.5;
  records.push_back(a);

  ResultRecord b;
  b.replication = 0;
  b.method = "median";
  b.categories = 5;
  b.missingness = "mcar";
  b.attack = "love-hate";
  b.epsilon = 0.2;
  b.metric = "mps";
  b.value = -0.75;
  // loss/stopping empty, lambda NaN: the baseline row shape
  records.push_back(b);

  FileGuard guard{temp_path("rdmc_test_records.csv")};
  write_records_csv(guard.path, records);
  std::vector<ResultRecord> back = read_records_csv(guard.path);

  REQUIRE(back.size() == 2);
  CHECK(back[0].replication == 3);
  CHECK(back[0].method == "rdmc");
  CHECK(back[0].loss == "phuber");
  CHECK(back[0].stopping == "strict");
  CHECK(back[0].categories == 10);
  CHECK(back[0].missingness == "mnar");
  CHECK(back[0].attack == "none");
  CHECK(back[0].metric == "mae");
  CHECK(back[0].value == doctest::Approx(1.2345).epsilon(1e-12));
  CHECK(back[0].lambda == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(back[0].iterations == 57);
  CHECK(back[0].wall_time_ms == doctest::Approx(123.5).epsilon(1e-9));
  CHECK(back[1].method == "median");
  CHECK(back[1].loss.empty());
  CHECK(back[1].stopping.empty());
  CHECK(back[1].attack == "love-hate");
  CHECK(back[1].epsilon == doctest::Approx(0.2));
  CHECK(back[1].value == doctest::Approx(-0.75));
  CHECK(std::isnan(back[1].lambda));
}

TEST_CASE("summaries compute five-number statistics per group") {
  std::vector<ResultRecord> records;
  for (int r = 0; r < 5; ++r) {
    ResultRecord rec;
    rec.replication = r;
    rec.method = "rdmc";
    rec.loss = "phuber";
    rec.stopping = "strict";
    rec.categories = 10;
    rec.missingness = "mnar";
    rec.metric = "mae";
    rec.value = static_cast<double>(r + 1);  // 1..5
    records.push_back(rec);
  }
  ResultRecord other;
  other.replication = 0;
  other.method = "si";
  other.stopping = "strict";
  other.categories = 10;
  other.missingness = "mnar";
  other.metric = "mae";
  other.value = 9.0;
  records.push_back(other);

  std::vector<SummaryRow> rows = summarize(records);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "rdmc");
  CHECK(rows[0].count == 5);
  CHECK(rows[0].min == 1.0);
  CHECK(rows[0].q1 == 2.0);
  CHECK(rows[0].median == 3.0);
  CHECK(rows[0].q3 == 4.0);
  CHECK(rows[0].max == 5.0);
  CHECK(rows[1].method == "si");
  CHECK(rows[1].count == 1);
  CHECK(rows[1].median == 9.0);

  SUBCASE("groups split on every key field") {
    ResultRecord attacked = records[0];
    attacked.attack = "average";
    attacked.epsilon = 0.2;
    attacked.metric = "mps";
    attacked.value = -0.5;
    records.push_back(attacked);
    std::vector<SummaryRow> split = summarize(records);
    CHECK(split.size() == 3);
    CHECK(split[2].attack == "average");
    CHECK(split[2].count == 1);
  }

  SUBCASE("summary CSV writes one line per group") {
    FileGuard guard{temp_path("rdmc_test_summary.csv")};
    write_summary_csv(guard.path, rows);
    std::ifstream in(guard.path);
    std::string line;
    int lines = 0;
    bool header_ok = false;
    while (std::getline(in, line)) {
      if (lines == 0)
        header_ok = line.find("median") != std::string::npos &&
                    line.find("method") != std::string::npos;
      ++lines;
    }
    CHECK(lines == 3);
    CHECK(header_ok);
  }
}

TEST_CASE("timing records write a parseable CSV") {
  std::vector<TimingRecord> timings;
  TimingRecord t;
  t.replication = 1;
  t.method = "rdmc";
  t.loss = "absolute";
  t.stopping = "liberal";
  t.phase = "selection";
  t.holdout = 2;
  t.lambda = 0.25;
  t.iterations = 10;
  t.converged = false;
  t.final_loss = 123.456;
  t.wall_time_ms = 42.0;
  timings.push_back(t);

  FileGuard guard{temp_path("rdmc_test_timings.csv")};
  write_timings_csv(guard.path, timings);
  std::ifstream in(guard.path);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header.find("phase") != std::string::npos);
  CHECK(row.find("selection") != std::string::npos);
  CHECK(row.find("absolute") != std::string::npos);
  CHECK(row.find("0.25") != std::string::npos);
}
