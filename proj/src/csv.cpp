#include "stackboost/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace stackboost {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && trim(current).empty()) {
      quoted = true;
      was_quoted = true;
      current.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current += c;
    }
  }
  if (quoted) throw parse_error(line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

double parse_number(const std::string& field, std::size_t line_no, std::size_t col) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw parse_error(line_no, "column " + std::to_string(col + 1) + ": '" + field + "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kNonFinite,
                "line " + std::to_string(line_no) + ": column " + std::to_string(col + 1) + " is not finite");
  }
  return value;
}

Table read_table(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    auto fields = split_fields(line, line_no);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw parse_error(line_no, "expected " + std::to_string(table.header.size()) + " fields, found " +
                                     std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) row.push_back(parse_number(fields[c], line_no, c));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw parse_error(line_no, "missing header row");
  return table;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open '" + path + "'");
  return in;
}

bool needs_quotes(std::string_view s) { return s.find_first_of(",\"\n\r") != std::string_view::npos; }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Dataset read_dataset_csv(std::istream& in, std::string name) {
  const Table table = read_table(in);
  if (table.header.size() < 2) {
    throw Error(ErrorKind::kDimensionMismatch, "dataset CSV needs at least one feature and a target column");
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto d = static_cast<Eigen::Index>(table.header.size() - 1);
  Dataset ds{Eigen::MatrixXd(n, d), Eigen::VectorXd(n), std::move(name)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) ds.features(i, j) = row[static_cast<std::size_t>(j)];
    ds.target(i) = row.back();
  }
  validate_dataset(ds);
  return ds;
}

Dataset read_dataset_csv_file(const std::string& path) {
  auto in = open_input(path);
  auto name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name.erase(dot);
  return read_dataset_csv(in, name);
}

void write_dataset_csv(std::ostream& out, const Dataset& ds, const std::vector<std::string>& feature_names) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
    header.push_back(static_cast<std::size_t>(j) < feature_names.size() ? feature_names[static_cast<std::size_t>(j)]
                                                                         : "x" + std::to_string(j + 1));
  }
  header.emplace_back("y");
  write_csv_row(out, header);
  std::vector<std::string> fields;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    fields.clear();
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) fields.push_back(format_double(ds.features(i, j)));
    fields.push_back(format_double(ds.target(i)));
    write_csv_row(out, fields);
  }
}

std::pair<PredictionMatrix, TargetVector> read_prediction_csv(std::istream& in) {
  const Table table = read_table(in);
  if (table.header.empty() || table.header.back() != kTargetColumn) {
    throw Error(ErrorKind::kParse, "line 1: last header field must be " + std::string(kTargetColumn));
  }
  if (table.header.size() < 2) {
    throw Error(ErrorKind::kDimensionMismatch, "prediction CSV has no model columns");
  }
  std::set<std::string> seen;
  for (std::size_t j = 0; j + 1 < table.header.size(); ++j) {
    if (table.header[j].empty()) throw Error(ErrorKind::kParse, "line 1: empty model id");
    if (!seen.insert(table.header[j]).second) {
      throw Error(ErrorKind::kParse, "line 1: duplicate model id '" + table.header[j] + "'");
    }
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(table.header.size() - 1);
  Eigen::MatrixXd values(n, p);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) values(i, j) = row[static_cast<std::size_t>(j)];
    target(i) = row.back();
  }
  std::vector<std::string> ids(table.header.begin(), table.header.end() - 1);
  PredictionMatrix X(std::move(values), std::move(ids));
  TargetVector y(std::move(target));
  validate_pair(X, y);
  return {std::move(X), std::move(y)};
}

std::pair<PredictionMatrix, TargetVector> read_prediction_csv_file(const std::string& path) {
  auto in = open_input(path);
  return read_prediction_csv(in);
}

void write_prediction_csv(std::ostream& out, const PredictionMatrix& X, const TargetVector& y) {
  if (X.rows() != y.size()) throw Error(ErrorKind::kDimensionMismatch, "matrix rows and target length differ");
  std::vector<std::string> fields(X.column_ids().begin(), X.column_ids().end());
  fields.emplace_back(kTargetColumn);
  write_csv_row(out, fields);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    fields.clear();
    for (Eigen::Index j = 0; j < X.cols(); ++j) fields.push_back(format_double(X.values()(i, j)));
    fields.push_back(format_double(y.values()(i)));
    write_csv_row(out, fields);
  }
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    if (needs_quotes(fields[i])) {
      out << '"';
      for (char c : fields[i]) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << fields[i];
    }
  }
  out << '\n';
}

}  // namespace stackboost
