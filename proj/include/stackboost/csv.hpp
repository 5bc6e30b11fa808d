#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stackboost/core.hpp"
#include "stackboost/harness.hpp"

namespace stackboost {

inline constexpr std::string_view kTargetColumn = "__target__";

/// Shortest text that parses back to the same double.
std::string format_double(double value);

/// Header row then numeric rows; the last column is the target.
/// Throws Error{kParse} (with line number) or Error{kDimensionMismatch}.
Dataset read_dataset_csv(std::istream& in, std::string name = "dataset");
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& ds, const std::vector<std::string>& feature_names = {});

/// Header of model ids followed by a final `__target__` column.
std::pair<PredictionMatrix, TargetVector> read_prediction_csv(std::istream& in);
std::pair<PredictionMatrix, TargetVector> read_prediction_csv_file(const std::string& path);
void write_prediction_csv(std::ostream& out, const PredictionMatrix& X, const TargetVector& y);

/// Minimal CSV table writer; fields containing ',', '"' or newlines are quoted.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace stackboost
