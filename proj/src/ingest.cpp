#include "pird/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pird/errors.hpp"

namespace pird {

namespace {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::optional<double> parse_double(const std::string& cell) {
  std::string_view s = cell;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// Month (0..11) of "YYYY-MM", "YYYY-MM-DD" or "YYYY/MM".
std::optional<int> parse_month(const std::string& cell) {
  const auto sep = cell.find_first_of("-/");
  if (sep == std::string::npos || sep == 0) return std::nullopt;
  const auto end = cell.find_first_of("-/", sep + 1);
  const std::string month = cell.substr(sep + 1, end == std::string::npos
                                                     ? std::string::npos
                                                     : end - sep - 1);
  int m = 0;
  const auto [ptr, ec] = std::from_chars(month.data(), month.data() + month.size(), m);
  if (ec != std::errc() || ptr != month.data() + month.size() || m < 1 || m > 12) {
    return std::nullopt;
  }
  return m - 1;
}

}  // namespace

TimeSeriesSet load_csv(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open " + spec.path.string());

  std::string line;
  long line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw DataError(spec.path.string() + " is empty");

  std::optional<std::size_t> date_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!spec.date_column.empty() && iequals(header[c], spec.date_column)) date_col = c;
  }

  std::vector<std::size_t> selected;
  if (spec.columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != date_col) selected.push_back(c);
    }
  } else {
    for (const auto& name : spec.columns) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw DataError("missing column '" + name + "'");
      selected.push_back(static_cast<std::size_t>(it - header.begin()));
    }
  }
  if (selected.empty()) throw DataError("no numeric columns selected");

  std::vector<std::vector<double>> rows;
  std::vector<int> phases;
  bool have_dates = date_col.has_value();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    const std::size_t row_index = rows.size() + 1;
    std::vector<double> row;
    row.reserve(selected.size());
    for (std::size_t c : selected) {
      const auto v = parse_double(cells[c]);
      if (!v) {
        throw ParseError("column '" + header[c] + "': '" + cells[c] + "' is not a number",
                         line_no);
      }
      if (!std::isfinite(*v)) {
        throw DataError("row " + std::to_string(row_index) + " (line " +
                        std::to_string(line_no) + "): non-finite value in column '" +
                        header[c] + "'");
      }
      if (spec.missing_value && *v == *spec.missing_value) {
        throw DataError("row " + std::to_string(row_index) + " (line " +
                        std::to_string(line_no) + "): missing value in column '" +
                        header[c] + "'");
      }
      row.push_back(*v);
    }
    if (have_dates) {
      const auto month = parse_month(cells[*date_col]);
      if (!month) throw ParseError("unrecognized date '" + cells[*date_col] + "'", line_no);
      phases.push_back(*month);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(spec.path.string() + " has a header but no data rows");

  TimeSeriesSet out;
  out.samples.resize(static_cast<Index>(rows.size()), static_cast<Index>(selected.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < selected.size(); ++c) {
      out.samples(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  for (std::size_t c : selected) out.labels.push_back(header[c]);
  out.phases = std::move(phases);
  return out;
}

void write_csv(std::ostream& out, const TimeSeriesSet& series) {
  for (Index c = 0; c < series.n_channels(); ++c) {
    if (c) out << ',';
    out << (static_cast<std::size_t>(c) < series.labels.size()
                ? series.labels[c]
                : "s" + std::to_string(c + 1));
  }
  out << '\n' << std::setprecision(17);
  for (Index t = 0; t < series.n_samples(); ++t) {
    for (Index c = 0; c < series.n_channels(); ++c) {
      if (c) out << ',';
      out << series.samples(t, c);
    }
    out << '\n';
  }
}

TimeSeriesSet detrend(TimeSeriesSet series) {
  const Index n = series.n_samples();
  if (n < 3) throw SizeError("detrending needs at least 3 samples");
  const double center = 0.5 * static_cast<double>(n - 1);
  const VectorXd t =
      VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)).array() - center;
  const double tt = t.squaredNorm();
  for (Index c = 0; c < series.n_channels(); ++c) {
    auto x = series.samples.col(c);
    const double mean = x.mean();
    const double slope = t.dot(x) / tt;
    x.array() -= mean + slope * t.array();
  }
  return series;
}

TimeSeriesSet deseasonalize(TimeSeriesSet series, int period) {
  if (period < 2) throw RangeError("season period must be at least 2");
  const Index n = series.n_samples();
  if (n < 2 * static_cast<Index>(period)) {
    throw SizeError("deseasonalizing needs at least two full periods of data");
  }
  const bool use_dates = period == 12 && static_cast<Index>(series.phases.size()) == n;
  std::vector<int> phase(n);
  for (Index t = 0; t < n; ++t) {
    phase[t] = use_dates ? series.phases[t] : static_cast<int>(t % period);
  }
  for (Index c = 0; c < series.n_channels(); ++c) {
    std::vector<double> sum(period, 0.0);
    std::vector<int> count(period, 0);
    for (Index t = 0; t < n; ++t) {
      sum[phase[t]] += series.samples(t, c);
      ++count[phase[t]];
    }
    for (Index t = 0; t < n; ++t) {
      series.samples(t, c) -= sum[phase[t]] / count[phase[t]];
    }
  }
  return series;
}

TimeSeriesSet preprocess(TimeSeriesSet series, const Preprocessing& steps) {
  const bool seasonal = steps.season_period > 0;
  if (seasonal && steps.deseasonalize_first) {
    series = deseasonalize(std::move(series), steps.season_period);
  }
  if (steps.detrend) series = detrend(std::move(series));
  if (seasonal && !steps.deseasonalize_first) {
    series = deseasonalize(std::move(series), steps.season_period);
  }
  return series;
}

}  // namespace pird
