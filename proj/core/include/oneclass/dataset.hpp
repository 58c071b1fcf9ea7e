#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace oneclass {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// +1 is the target (normal) class, -1 the outlier (abnormal) class.
enum class Label : int { kOutlier = -1, kTarget = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }

// N instances x d features, optionally labeled.
struct Dataset {
  Matrix rows;
  std::vector<std::string> feature_names;
  std::optional<std::vector<Label>> labels;

  Index size() const { return rows.rows(); }
  Index dim() const { return rows.cols(); }
  bool labeled() const { return labels.has_value(); }

  // Throws DataError when a structural invariant is broken: feature-name
  // count differs from d, d == 0, label count differs from N, non-finite cell.
  void validate() const;

  Dataset subset(std::span<const Index> indices) const;
  Dataset unlabeled() const;
  Dataset with_rows(Matrix new_rows) const;
  // Rows whose label equals `label`; requires labels.
  Dataset select(Label label) const;
};

// Concatenates rows; both sides must agree on d and on labeled-ness.
Dataset concat(const Dataset& a, const Dataset& b);

struct CsvOptions {
  // Column to strip from the features and store as labels.
  std::optional<std::string> label_column;
  // When set, label cells equal to this string become +1 and all others -1.
  // When unset, label cells must parse to exactly +1 or -1.
  std::optional<std::string> target_value;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvOptions& options = {},
                  const std::string& source = "<stream>");

// Shortest round-trip decimal for every cell; labels (if any) are appended as
// a final column named `label_column`.
void write_csv(std::ostream& out, const Dataset& data, const std::string& label_column = "label");
void write_csv(const std::filesystem::path& path, const Dataset& data,
               const std::string& label_column = "label");

// Formats a double so that parsing it back yields the identical bit pattern.
std::string format_double(double value);

struct NormStats {
  Vector mean;
  Vector std;  // population standard deviation; zero entries are kept as-is
};

NormStats zscore_fit(const Dataset& data);
// (x - mean) / std per column; zero-variance columns map to 0.
Dataset zscore_apply(const Dataset& data, const NormStats& stats);

struct SplitResult {
  Dataset train;    // target rows only, unlabeled
  Dataset test;     // labeled: remaining targets + half of the outliers
  Dataset cv_pool;  // labeled outliers reserved for hyperparameter search
  std::vector<Index> train_index;
  std::vector<Index> test_index;
  std::vector<Index> cv_index;
};

// Targets are shuffled and ceil(n_target / 2) go to training; outliers are
// shuffled and floor(n_outlier / 2) go to the test set, the rest to cv_pool.
SplitResult one_class_split(const Dataset& data, std::uint64_t seed);

}  // namespace oneclass
