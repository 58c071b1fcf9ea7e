#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/model_file.hpp"

namespace oneclass::cli {

namespace fs = std::filesystem;

struct SplitOptions {
  fs::path input;
  std::string label_column;
  std::string target;
  std::uint64_t seed = 0;
  fs::path out_dir = ".";
};

// Writes train.csv (unlabeled targets), test.csv and cvpool.csv (labeled,
// column `label`) and split.json recording seed and counts.
void cmd_split(const SplitOptions& options, std::ostream& log);

struct ResampleOptions {
  fs::path manifest;
  double interval = 0.25;
  std::uint64_t seed = 0;
  fs::path out;
};

// Manifest: {"fault_time": <seconds or null>, "features": {"<name>": "<csv>"}}
// naming every flight feature exactly once; csv paths are relative to the
// manifest. Output is a labeled CSV with column `label`.
void cmd_resample(const ResampleOptions& options, std::ostream& log);

struct FitOptions {
  fs::path train;
  std::optional<std::string> label_column;  // when set, only +1 rows are used
  std::string kernel = "tgak";
  double sigma = 1.0;
  double triangle = 4.0;
  bool normalize_kernel = true;
  double C = 1.0;
  double theta = 0.01;
  std::optional<Index> ica_components;  // present => ICA on; 0 => all features
  int ica_max_iter = 200;
  double ica_tolerance = 1e-4;
  std::optional<fs::path> grid_summary;  // take T/C/sigma/theta/ICA from a gridsearch summary
  std::uint64_t seed = 0;
  fs::path out;
  std::size_t threads = 1;
};

ModelFile cmd_fit(const FitOptions& options, std::ostream& log);

struct PredictOptions {
  fs::path model;
  fs::path batch;
  std::optional<std::string> label_column;  // stripped before scoring
  fs::path out;
  std::size_t threads = 1;
};

// scores.csv columns: output,error,label.
void cmd_predict(const PredictOptions& options, std::ostream& log);

struct EvalOptions {
  fs::path model;
  fs::path test;
  std::string label_column = "label";
  std::optional<fs::path> out;
  std::size_t threads = 1;
};

EvalReport cmd_eval(const EvalOptions& options, std::ostream& log);

struct GridSearchOptions {
  fs::path train;
  fs::path cv_pool;
  std::string label_column = "label";
  std::string kernel = "tgak";
  std::string grid = "full";
  int folds = 5;
  double theta = 0.01;
  std::optional<Index> ica_components;
  int ica_max_iter = 200;
  double ica_tolerance = 1e-4;
  std::uint64_t seed = 0;
  fs::path out;
  std::optional<fs::path> summary;
  std::size_t threads = 1;
};

// cells.csv columns: T,C,sigma,fold_f1s,mean_f1 (fold scores joined by ';',
// T empty for rbf).
GridResult cmd_gridsearch(const GridSearchOptions& options, std::ostream& log);

struct ExperimentOptions {
  fs::path input;
  std::string label_column;
  std::string target;
  std::string kernel = "tgak";
  std::string grid = "full";
  std::optional<Index> ica_components;
  int seeds = 10;
  std::uint64_t first_seed = 0;
  std::optional<fs::path> out;
  std::size_t threads = 1;
};

// Repeats split -> grid search -> fit -> evaluate over consecutive seeds;
// returns the mean test F1.
double cmd_experiment(const ExperimentOptions& options, std::ostream& log);

// Serialized forms shared by the commands and their tests.
std::string cells_csv(const GridResult& result);
std::string scores_csv(const ScoreVector& scores, double delta);

}  // namespace oneclass::cli
