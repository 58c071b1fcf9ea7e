#include "oneclass/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "oneclass/error.hpp"
#include "oneclass/seed.hpp"

namespace oneclass {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) return std::nullopt;
  return value;
}

}  // namespace

void Dataset::validate() const {
  if (dim() < 1) throw DataError("dataset has no feature columns");
  if (static_cast<Index>(feature_names.size()) != dim()) {
    throw DataError("dataset has " + std::to_string(dim()) + " columns but " +
                    std::to_string(feature_names.size()) + " feature names");
  }
  if (labels && static_cast<Index>(labels->size()) != size()) {
    throw DataError("dataset has " + std::to_string(size()) + " rows but " +
                    std::to_string(labels->size()) + " labels");
  }
  if (!rows.allFinite()) throw DataError("dataset contains non-finite values");
}

Dataset Dataset::subset(std::span<const Index> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.rows.resize(static_cast<Index>(indices.size()), dim());
  for (std::size_t k = 0; k < indices.size(); ++k) out.rows.row(static_cast<Index>(k)) = rows.row(indices[k]);
  if (labels) {
    out.labels.emplace();
    out.labels->reserve(indices.size());
    for (Index i : indices) out.labels->push_back((*labels)[static_cast<std::size_t>(i)]);
  }
  return out;
}

Dataset Dataset::unlabeled() const {
  Dataset out = *this;
  out.labels.reset();
  return out;
}

Dataset Dataset::with_rows(Matrix new_rows) const {
  Dataset out;
  if (new_rows.cols() == dim()) {
    out.feature_names = feature_names;
  } else {
    for (Index j = 0; j < new_rows.cols(); ++j) out.feature_names.push_back("c" + std::to_string(j));
  }
  out.rows = std::move(new_rows);
  out.labels = labels;
  return out;
}

Dataset Dataset::select(Label label) const {
  if (!labels) throw DataError("dataset has no labels to select on");
  std::vector<Index> idx;
  for (std::size_t i = 0; i < labels->size(); ++i) {
    if ((*labels)[i] == label) idx.push_back(static_cast<Index>(i));
  }
  return subset(idx);
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("cannot concatenate datasets with " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()) + " features");
  }
  if (a.labeled() != b.labeled()) throw DataError("cannot concatenate labeled with unlabeled rows");
  Dataset out;
  out.feature_names = a.feature_names;
  out.rows.resize(a.size() + b.size(), a.dim());
  out.rows.topRows(a.size()) = a.rows;
  out.rows.bottomRows(b.size()) = b.rows;
  if (a.labels) {
    out.labels = *a.labels;
    out.labels->insert(out.labels->end(), b.labels->begin(), b.labels->end());
  }
  return out;
}

Dataset parse_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": missing header row");
  const auto header_views = split_line(line);
  std::vector<std::string> header(header_views.begin(), header_views.end());

  std::optional<std::size_t> label_col;
  if (options.label_column) {
    const auto it = std::find(header.begin(), header.end(), *options.label_column);
    if (it == header.end()) {
      throw DataError(source + ": label column '" + *options.label_column + "' not in header");
    }
    label_col = static_cast<std::size_t>(it - header.begin());
  }

  Dataset data;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) data.feature_names.push_back(header[c]);
  }
  if (data.feature_names.empty()) throw DataError(source + ": no feature columns");
  if (label_col) data.labels.emplace();

  std::vector<double> cells;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw DataError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) {
        if (options.target_value) {
          data.labels->push_back(fields[c] == *options.target_value ? Label::kTarget : Label::kOutlier);
        } else {
          const auto v = parse_double(fields[c]);
          if (!v || (*v != 1.0 && *v != -1.0)) {
            throw DataError(source + ": line " + std::to_string(line_no) + ", column '" + header[c] +
                            "': label '" + std::string(fields[c]) + "' is not +1 or -1");
          }
          data.labels->push_back(*v > 0 ? Label::kTarget : Label::kOutlier);
        }
        continue;
      }
      const auto v = parse_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        throw DataError(source + ": line " + std::to_string(line_no) + ", column '" + header[c] + "': cannot parse '" +
                        std::string(fields[c]) + "' as a finite number");
      }
      cells.push_back(*v);
    }
  }

  const auto d = static_cast<Index>(data.feature_names.size());
  data.rows = Eigen::Map<const Matrix>(cells.data(), static_cast<Index>(row), d);
  return data;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_csv(in, options, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& data, const std::string& label_column) {
  for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
    if (c) out << ',';
    out << data.feature_names[c];
  }
  if (data.labels) out << ',' << label_column;
  out << '\n';
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      if (j) out << ',';
      out << format_double(data.rows(i, j));
    }
    if (data.labels) out << ',' << to_int((*data.labels)[static_cast<std::size_t>(i)]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data, const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(out, data, label_column);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

NormStats zscore_fit(const Dataset& data) {
  if (data.size() < 1) throw DataError("cannot fit normalization on an empty dataset");
  const auto n = static_cast<double>(data.size());
  NormStats stats;
  stats.mean = data.rows.colwise().sum().transpose() / n;
  stats.std.resize(data.dim());
  for (Index j = 0; j < data.dim(); ++j) {
    const double ss = (data.rows.col(j).array() - stats.mean(j)).square().sum();
    stats.std(j) = std::sqrt(ss / n);
  }
  return stats;
}

Dataset zscore_apply(const Dataset& data, const NormStats& stats) {
  if (stats.mean.size() != data.dim() || stats.std.size() != data.dim()) {
    throw DimensionError("normalization stats have " + std::to_string(stats.mean.size()) +
                         " features, data has " + std::to_string(data.dim()));
  }
  Dataset out = data;
  for (Index j = 0; j < data.dim(); ++j) {
    if (stats.std(j) > 0.0) {
      out.rows.col(j) = (data.rows.col(j).array() - stats.mean(j)) / stats.std(j);
    } else {
      out.rows.col(j).setZero();
    }
  }
  return out;
}

SplitResult one_class_split(const Dataset& data, std::uint64_t seed) {
  if (!data.labels) throw DataError("one-class split requires labels");
  std::vector<Index> targets;
  std::vector<Index> outliers;
  for (std::size_t i = 0; i < data.labels->size(); ++i) {
    ((*data.labels)[i] == Label::kTarget ? targets : outliers).push_back(static_cast<Index>(i));
  }
  if (targets.size() < 2 || outliers.size() < 2) {
    throw DataError("one-class split needs at least 2 rows of each class (got " + std::to_string(targets.size()) +
                    " target, " + std::to_string(outliers.size()) + " outlier)");
  }

  auto rng = make_rng(seed, SeedPurpose::kSplit);
  std::shuffle(targets.begin(), targets.end(), rng);
  std::shuffle(outliers.begin(), outliers.end(), rng);

  const auto n_train = (targets.size() + 1) / 2;
  const auto n_test_outliers = outliers.size() / 2;

  SplitResult result;
  result.train_index.assign(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(n_train));
  result.test_index.assign(targets.begin() + static_cast<std::ptrdiff_t>(n_train), targets.end());
  result.test_index.insert(result.test_index.end(), outliers.begin(),
                           outliers.begin() + static_cast<std::ptrdiff_t>(n_test_outliers));
  result.cv_index.assign(outliers.begin() + static_cast<std::ptrdiff_t>(n_test_outliers), outliers.end());

  result.train = data.subset(result.train_index).unlabeled();
  result.test = data.subset(result.test_index);
  result.cv_pool = data.subset(result.cv_index);
  return result;
}

}  // namespace oneclass
