#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "oneclass/error.hpp"
#include "oneclass/telemetry.hpp"

namespace oneclass::cli {
namespace {

using nlohmann::json;

std::string csv_text(const Dataset& data) {
  std::ostringstream out;
  write_csv(out, data, "label");
  return out.str();
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

bool header_has(const fs::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  std::istringstream cells(line);
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    if (cell == column) return true;
  }
  return false;
}

// Loads `path`, taking labels from `column` when the header has it.
Dataset load_maybe_labeled(const fs::path& path, const std::string& column) {
  CsvOptions opts;
  if (header_has(path, column)) opts.label_column = column;
  return load_csv(path, opts);
}

std::optional<IcaConfig> make_ica(std::optional<Index> components, int max_iter, double tolerance,
                                  std::uint64_t seed) {
  if (!components) return std::nullopt;
  IcaConfig c;
  c.n_components = *components;
  c.max_iter = max_iter;
  c.epsilon = tolerance;
  c.seed = seed;
  c.validate();
  return c;
}

GridSpec make_grid(const std::string& preset, KernelKind kind) {
  if (preset == "full") return GridSpec::full(kind);
  if (preset == "coarse") return GridSpec::coarse(kind);
  throw InvalidArgument("unknown grid preset '" + preset + "' (expected full or coarse)");
}

std::string join_f1(const std::vector<double>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_double(values[i]);
  }
  return out;
}

void require_target(const Dataset& data, const std::string& column, const std::string& target) {
  const auto& labels = *data.labels;
  if (std::find(labels.begin(), labels.end(), Label::kTarget) == labels.end())
    throw DataError("no row has " + column + " == '" + target + "'");
}

}  // namespace

void cmd_split(const SplitOptions& options, std::ostream& log) {
  CsvOptions csv;
  csv.label_column = options.label_column;
  csv.target_value = options.target;
  const Dataset data = load_csv(options.input, csv);
  require_target(data, options.label_column, options.target);
  const auto split = one_class_split(data, options.seed);

  fs::create_directories(options.out_dir);
  write_file_atomic(options.out_dir / "train.csv", csv_text(split.train));
  write_file_atomic(options.out_dir / "test.csv", csv_text(split.test));
  write_file_atomic(options.out_dir / "cvpool.csv", csv_text(split.cv_pool));

  const auto test_targets = std::count(split.test.labels->begin(), split.test.labels->end(), Label::kTarget);
  const json manifest = {{"input", options.input.filename().string()},
                         {"label_column", options.label_column},
                         {"target", options.target},
                         {"seed", options.seed},
                         {"train_rows", split.train.size()},
                         {"test_rows", split.test.size()},
                         {"test_targets", test_targets},
                         {"test_outliers", split.test.size() - test_targets},
                         {"cvpool_rows", split.cv_pool.size()}};
  write_file_atomic(options.out_dir / "split.json", manifest.dump(1) + "\n");
  log << "train " << split.train.size() << " rows, test " << split.test.size() << " rows (" << test_targets
      << " target), cv pool " << split.cv_pool.size() << " rows\n";
}

void cmd_resample(const ResampleOptions& options, std::ostream& log) {
  const json manifest = read_json(options.manifest);
  if (!manifest.contains("features") || !manifest.at("features").is_object()) {
    throw DataError("manifest '" + options.manifest.string() + "' has no \"features\" object");
  }
  const auto& files = manifest.at("features");
  const auto schema = flight_feature_schema();
  for (const auto& [name, _] : files.items()) {
    if (std::find(schema.begin(), schema.end(), name) == schema.end()) {
      throw DataError("manifest names unknown feature '" + name + "'");
    }
  }
  const fs::path base = options.manifest.parent_path();
  std::vector<TelemetrySeries> series;
  for (const auto name : schema) {
    const std::string key(name);
    if (!files.contains(key)) throw DataError("manifest is missing feature '" + key + "'");
    fs::path file = files.at(key).get<std::string>();
    if (file.is_relative()) file = base / file;
    series.push_back(load_telemetry_csv(file, key));
  }

  oneclass::ResampleOptions ro;
  ro.interval = options.interval;
  ro.seed = options.seed;
  if (manifest.contains("fault_time") && !manifest.at("fault_time").is_null()) {
    ro.fault_time = manifest.at("fault_time").get<double>();
  }
  const Dataset out = resample_telemetry(series, ro);
  write_file_atomic(options.out, csv_text(out));
  const auto normal = std::count(out.labels->begin(), out.labels->end(), Label::kTarget);
  log << "resampled " << out.size() << " rows x " << out.dim() << " features (" << normal << " normal, "
      << out.size() - normal << " fault)\n";
}

ModelFile cmd_fit(const FitOptions& options, std::ostream& log) {
  FitOptions opt = options;
  std::optional<GridCell> cell;
  if (opt.grid_summary) {
    const json s = read_json(*opt.grid_summary);
    opt.kernel = s.at("kernel").get<std::string>();
    opt.C = s.at("C").get<double>();
    opt.sigma = s.at("sigma").get<double>();
    if (!s.at("T").is_null()) opt.triangle = s.at("T").get<double>();
    opt.theta = s.at("theta").get<double>();
    if (!s.at("ica").is_null()) {
      opt.ica_components = s.at("ica").at("n_components").get<Index>();
      opt.ica_max_iter = s.at("ica").at("max_iter").get<int>();
      opt.ica_tolerance = s.at("ica").at("epsilon").get<double>();
    } else {
      opt.ica_components.reset();
    }
    cell = GridCell{s.at("T").is_null() ? std::nan("") : opt.triangle, opt.C, opt.sigma};
  }

  DetectorConfig config;
  const auto kind = parse_kind(opt.kernel);
  config.kernel = kind == KernelKind::kRbf ? KernelSpec::rbf(opt.sigma)
                                           : KernelSpec::tgak(opt.sigma, opt.triangle, opt.normalize_kernel);
  config.kernel.validate();
  check_hyperparameters(opt.C, opt.theta);
  config.C = opt.C;
  config.theta = opt.theta;
  config.ica = make_ica(opt.ica_components, opt.ica_max_iter, opt.ica_tolerance, opt.seed);
  config.threads = opt.threads;

  Dataset train;
  if (opt.label_column) {
    CsvOptions csv;
    csv.label_column = opt.label_column;
    train = load_csv(opt.train, csv).select(Label::kTarget).unlabeled();
  } else {
    train = load_csv(opt.train);
  }

  ModelFile model;
  model.detector = fit_detector(train, config);
  model.ica_config = config.ica;
  model.feature_names = train.feature_names;
  model.provenance.seed = opt.seed;
  model.provenance.dataset_fingerprint = fingerprint_file(opt.train);
  model.provenance.grid_cell = cell;
  save_model(opt.out, model);

  log << "fitted " << kind_name(kind) << " OCKELM on " << train.size() << " rows (C=" << format_double(opt.C)
      << ", sigma=" << format_double(opt.sigma);
  if (kind == KernelKind::kTgak) log << ", T=" << format_double(opt.triangle);
  log << "), delta=" << format_double(model.detector.model.delta) << "\n";
  if (model.detector.ica) {
    log << "FastICA: " << model.detector.ica->n_components << " components, "
        << model.detector.ica->iterations_used << " iterations"
        << (model.detector.ica->converged ? "" : " (warning: did not converge)") << "\n";
  }
  if (model.detector.model.jitter > 0.0) {
    log << "warning: added diagonal jitter " << format_double(model.detector.model.jitter) << "\n";
  }
  return model;
}

std::string scores_csv(const ScoreVector& scores, double delta) {
  std::ostringstream out;
  out << "output,error,label\n";
  const auto labels = classify(scores, delta);
  for (Index i = 0; i < scores.outputs.size(); ++i) {
    out << format_double(scores.outputs(i)) << ',' << format_double(scores.errors(i)) << ','
        << to_int(labels[static_cast<std::size_t>(i)]) << '\n';
  }
  return out.str();
}

void cmd_predict(const PredictOptions& options, std::ostream& log) {
  const ModelFile model = load_model(options.model);
  CsvOptions csv;
  csv.label_column = options.label_column;
  const Dataset batch = load_csv(options.batch, csv);
  const auto scores = model.detector.score(batch, options.threads);
  write_file_atomic(options.out, scores_csv(scores, model.detector.model.delta));
  const auto flagged = std::count_if(scores.errors.begin(), scores.errors.end(),
                                     [&](double e) { return !(e < model.detector.model.delta); });
  log << "scored " << batch.size() << " rows, " << flagged << " flagged abnormal\n";
}

EvalReport cmd_eval(const EvalOptions& options, std::ostream& log) {
  const ModelFile model = load_model(options.model);
  CsvOptions csv;
  csv.label_column = options.label_column;
  const Dataset test = load_csv(options.test, csv);
  EvalReport report = evaluate(model.detector, test, model.provenance.seed, options.threads);
  report.hyperparameters.ica = model.ica_config;

  const auto& hp = report.hyperparameters;
  log << "tp=" << report.counts.tp << " fp=" << report.counts.fp << " fn=" << report.counts.fn
      << " tn=" << report.counts.tn << "\n";
  log << "precision=" << format_double(report.metrics.precision) << " recall=" << format_double(report.metrics.recall)
      << " f1=" << format_double(report.metrics.f1) << "\n";
  log << "kernel=" << kind_name(hp.kernel.kind) << " sigma=" << format_double(hp.kernel.sigma);
  if (hp.kernel.kind == KernelKind::kTgak) log << " T=" << format_double(hp.kernel.triangle);
  log << " C=" << format_double(hp.C) << " theta=" << format_double(hp.theta)
      << " ica=" << (hp.ica ? std::to_string(hp.ica->n_components) : std::string("off")) << " seed=" << report.seed
      << "\n";
  if (options.out) write_file_atomic(*options.out, report_to_json(report).dump(1) + "\n");
  return report;
}

std::string cells_csv(const GridResult& result) {
  std::ostringstream out;
  out << "T,C,sigma,fold_f1s,mean_f1\n";
  for (const auto& rep : result.cells) {
    if (!std::isnan(rep.cell.triangle)) out << format_double(rep.cell.triangle);
    out << ',' << format_double(rep.cell.C) << ',' << format_double(rep.cell.sigma) << ','
        << join_f1(rep.fold_f1, ';') << ',' << format_double(rep.mean_f1) << '\n';
  }
  return out.str();
}

GridResult cmd_gridsearch(const GridSearchOptions& options, std::ostream& log) {
  const auto kind = parse_kind(options.kernel);
  GridSpec grid = make_grid(options.grid, kind);
  grid.folds = options.folds;
  grid.theta = options.theta;
  grid.validate();
  const auto ica = make_ica(options.ica_components, options.ica_max_iter, options.ica_tolerance, options.seed);

  const Dataset train = load_maybe_labeled(options.train, options.label_column);
  const Dataset pool = load_maybe_labeled(options.cv_pool, options.label_column);
  const auto result = grid_search(train, pool, grid, ica, options.seed, options.threads);
  write_file_atomic(options.out, cells_csv(result));

  const auto& best = result.best_cell();
  if (options.summary) {
    const json summary = {
        {"kernel", kind_name(kind)},
        {"T", std::isnan(best.cell.triangle) ? json(nullptr) : json(best.cell.triangle)},
        {"C", best.cell.C},
        {"sigma", best.cell.sigma},
        {"theta", grid.theta},
        {"mean_f1", best.mean_f1},
        {"fold_f1s", best.fold_f1},
        {"ica", ica ? ica_config_to_json(*ica) : json(nullptr)},
        {"grid", options.grid},
        {"folds", grid.folds},
        {"cells", result.cells.size()},
        {"no_outliers", result.no_outliers},
        {"seed", options.seed}};
    write_file_atomic(*options.summary, summary.dump(1) + "\n");
  }

  const auto failed = std::count_if(result.cells.begin(), result.cells.end(), [](const auto& c) { return c.failed; });
  if (result.no_outliers) log << "warning: empty outlier pool; validation used held-out targets only\n";
  if (failed > 0) log << "warning: " << failed << " grid cells failed and scored 0\n";
  log << result.cells.size() << " cells; best ";
  if (!std::isnan(best.cell.triangle)) log << "T=" << format_double(best.cell.triangle) << " ";
  log << "C=" << format_double(best.cell.C) << " sigma=" << format_double(best.cell.sigma)
      << " mean_f1=" << format_double(best.mean_f1) << "\n";
  return result;
}

double cmd_experiment(const ExperimentOptions& options, std::ostream& log) {
  if (options.seeds < 1) throw InvalidArgument("--seeds must be >= 1");
  const auto kind = parse_kind(options.kernel);
  ProtocolConfig config;
  config.grid = make_grid(options.grid, kind);
  config.ica = make_ica(options.ica_components, 200, 1e-4, 0);
  config.threads = options.threads;

  CsvOptions csv;
  csv.label_column = options.label_column;
  csv.target_value = options.target;
  const Dataset data = load_csv(options.input, csv);
  require_target(data, options.label_column, options.target);

  std::ostringstream table;
  table << "seed,T,C,sigma,cv_f1,precision,recall,f1\n";
  double total = 0.0;
  for (int k = 0; k < options.seeds; ++k) {
    const std::uint64_t seed = options.first_seed + static_cast<std::uint64_t>(k);
    const auto run = run_protocol(data, config, seed);
    const auto& best = run.search.best_cell();
    const auto& m = run.report.metrics;
    total += m.f1;
    table << seed << ',' << (std::isnan(best.cell.triangle) ? std::string() : format_double(best.cell.triangle))
          << ',' << format_double(best.cell.C) << ',' << format_double(best.cell.sigma) << ','
          << format_double(best.mean_f1) << ',' << format_double(m.precision) << ',' << format_double(m.recall)
          << ',' << format_double(m.f1) << '\n';
    log << "seed " << seed << ": f1=" << format_double(m.f1) << " (cv " << format_double(best.mean_f1) << ")\n";
  }
  const double mean = total / options.seeds;
  log << "mean f1 over " << options.seeds << " seeds: " << format_double(mean) << "\n";
  if (options.out) write_file_atomic(*options.out, table.str());
  return mean;
}

}  // namespace oneclass::cli
