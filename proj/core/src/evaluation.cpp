#include "rdmc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rdmc {

double mae(const arma::mat& predictions, const std::vector<Entry>& truth_cells) {
  if (truth_cells.empty())
    throw std::invalid_argument("mae: no evaluation cells");
  double total = 0.0;
  for (const Entry& e : truth_cells)
    total += std::abs(predictions(e.row, e.col) - e.value);
  return total / static_cast<double>(truth_cells.size());
}

double mean_prediction_shift(const arma::mat& before, const arma::mat& after,
                             const std::vector<int>& rows, int target_col) {
  if (rows.empty())
    throw std::invalid_argument("mean_prediction_shift: no evaluation rows");
  double total = 0.0;
  for (int i : rows) total += after(i, target_col) - before(i, target_col);
  return total / static_cast<double>(rows.size());
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<ResultRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "replication,method,loss,stopping,categories,missingness,attack,"
         "epsilon,metric,value,lambda,iterations,wall_time_ms\n";
  for (const ResultRecord& r : records) {
    out << r.replication << ',' << r.method << ',' << r.loss << ','
        << r.stopping << ',' << r.categories << ',' << r.missingness << ','
        << r.attack << ',' << format_double(r.epsilon) << ',' << r.metric
        << ',' << format_double(r.value) << ',' << format_double(r.lambda)
        << ',' << r.iterations << ',' << format_double(r.wall_time_ms) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ResultRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("'" + path + "': empty file");
  const std::string expected =
      "replication,method,loss,stopping,categories,missingness,attack,"
      "epsilon,metric,value,lambda,iterations,wall_time_ms";
  if (line != expected)
    throw std::runtime_error("'" + path + "': unexpected header");
  std::vector<ResultRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 13)
      throw std::runtime_error("'" + path + "' line " +
                               std::to_string(line_no) + ": expected 13 fields");
    ResultRecord r;
    r.replication = std::stoi(f[0]);
    r.method = f[1];
    r.loss = f[2];
    r.stopping = f[3];
    r.categories = std::stoi(f[4]);
    r.missingness = f[5];
    r.attack = f[6];
    r.epsilon = parse_double_field(f[7]);
    r.metric = f[8];
    r.value = parse_double_field(f[9]);
    r.lambda = parse_double_field(f[10]);
    r.iterations = std::stoi(f[11]);
    r.wall_time_ms = parse_double_field(f[12]);
    records.push_back(std::move(r));
  }
  return records;
}

void write_timings_csv(const std::string& path,
                       const std::vector<TimingRecord>& timings) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "replication,method,loss,stopping,phase,holdout,lambda,iterations,"
         "converged,final_loss,wall_time_ms\n";
  for (const TimingRecord& t : timings) {
    out << t.replication << ',' << t.method << ',' << t.loss << ','
        << t.stopping << ',' << t.phase << ',' << t.holdout << ','
        << format_double(t.lambda) << ',' << t.iterations << ','
        << (t.converged ? 1 : 0) << ',' << format_double(t.final_loss) << ','
        << format_double(t.wall_time_ms) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw std::invalid_argument("sample_quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("sample_quantile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double w = h - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  using Key = std::tuple<std::string, std::string, std::string, int, std::string,
                         std::string, double, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<double>> groups;
  for (const ResultRecord& r : records) {
    Key key{r.method, r.loss, r.stopping, r.categories,
            r.missingness, r.attack, r.epsilon, r.metric};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r.value);
  }
  std::vector<SummaryRow> rows;
  rows.reserve(order.size());
  for (const Key& key : order) {
    const std::vector<double>& vals = groups[key];
    SummaryRow row;
    std::tie(row.method, row.loss, row.stopping, row.categories,
             row.missingness, row.attack, row.epsilon, row.metric) = key;
    row.count = static_cast<int>(vals.size());
    row.min = sample_quantile(vals, 0.0);
    row.q1 = sample_quantile(vals, 0.25);
    row.median = sample_quantile(vals, 0.5);
    row.q3 = sample_quantile(vals, 0.75);
    row.max = sample_quantile(vals, 1.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "method,loss,stopping,categories,missingness,attack,epsilon,metric,"
         "count,min,q1,median,q3,max\n";
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.loss << ',' << r.stopping << ','
        << r.categories << ',' << r.missingness << ',' << r.attack << ','
        << format_double(r.epsilon) << ',' << r.metric << ',' << r.count << ','
        << format_double(r.min) << ',' << format_double(r.q1) << ','
        << format_double(r.median) << ',' << format_double(r.q3) << ','
        << format_double(r.max) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace rdmc
