#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pird/var_model.hpp"

namespace pird {

struct DatasetSpec {
  std::filesystem::path path;
  /// Columns to keep, in order; empty keeps every numeric column.
  std::vector<std::string> columns;
  /// Header of the date column ("YYYY-MM" or "YYYY-MM-DD"). The column is
  /// excluded from the numeric channels; its month fills
  /// TimeSeriesSet::phases.
  std::string date_column = "date";
  /// Value marking a missing observation (e.g. -99.99 in NOAA index files).
  std::optional<double> missing_value;
};

/// Reads a comma-separated file: header row, then one row per time point.
TimeSeriesSet load_csv(const DatasetSpec& spec);

void write_csv(std::ostream& out, const TimeSeriesSet& series);

/// Removes the least-squares line a + b·t from each channel.
TimeSeriesSet detrend(TimeSeriesSet series);

/// Subtracts the per-phase mean of each channel. Phases come from the date
/// column when period is 12 and dates are present, otherwise t mod period.
TimeSeriesSet deseasonalize(TimeSeriesSet series, int period);

struct Preprocessing {
  bool detrend = true;
  int season_period = 0;  // 0 disables deseasonalization
  bool deseasonalize_first = false;
};

TimeSeriesSet preprocess(TimeSeriesSet series, const Preprocessing& steps);

}  // namespace pird
