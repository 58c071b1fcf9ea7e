#include "cli/app.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "oneclass/error.hpp"

namespace oneclass::cli {
namespace {

void add_threads(CLI::App* cmd, std::size_t& threads) {
  cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
}

CLI::Option* add_ica_flag(CLI::App* cmd, Index& components) {
  return cmd->add_option("--ica", components, "Reconstruct features with FastICA; optional component count (default: all)")
      ->expected(0, 1)
      ->default_str("0");
}

void add_ica(CLI::App* cmd, Index& components, CLI::Option*& flag, int& max_iter, double& tol) {
  flag = add_ica_flag(cmd, components);
  cmd->add_option("--ica-max-iter", max_iter, "FastICA iteration cap")->capture_default_str();
  cmd->add_option("--ica-tol", tol, "FastICA convergence tolerance")->capture_default_str();
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"One-class anomaly detection with TGAK kernel extreme learning machines"};
  app.require_subcommand(1);

  SplitOptions split;
  auto* c_split = app.add_subcommand("split", "One-class train/test/cv split of a labeled CSV");
  c_split->add_option("input", split.input, "Labeled CSV")->required()->check(CLI::ExistingFile);
  c_split->add_option("--label-col", split.label_column, "Class column")->required();
  c_split->add_option("--target", split.target, "Class value treated as the target (normal) class")->required();
  c_split->add_option("--seed", split.seed)->capture_default_str();
  c_split->add_option("--out-dir", split.out_dir, "Directory for train.csv, test.csv, cvpool.csv")
      ->capture_default_str();

  ResampleOptions resample;
  auto* c_resample = app.add_subcommand("resample", "Bucket per-feature telemetry exports into labeled rows");
  c_resample->add_option("manifest", resample.manifest, "JSON manifest")->required()->check(CLI::ExistingFile);
  c_resample->add_option("--interval", resample.interval, "Bucket width in seconds")->capture_default_str();
  c_resample->add_option("--seed", resample.seed)->capture_default_str();
  c_resample->add_option("--out", resample.out, "Output CSV")->required();

  FitOptions fit;
  Index fit_ica = 0;
  CLI::Option* fit_ica_flag = nullptr;
  bool fit_unnormalized = false;
  std::string fit_label;
  auto* c_fit = app.add_subcommand("fit", "Fit normalization, optional FastICA and OCKELM; write a model file");
  c_fit->add_option("train", fit.train, "Training CSV (target class only)")->required()->check(CLI::ExistingFile);
  auto* fit_label_opt = c_fit->add_option("--label-col", fit_label, "Label column; only +1 rows are used");
  c_fit->add_option("--kernel", fit.kernel, "tgak or rbf")->capture_default_str();
  c_fit->add_option("--sigma", fit.sigma, "Kernel width")->capture_default_str();
  c_fit->add_option("--T", fit.triangle, "TGAK triangle parameter")->capture_default_str();
  c_fit->add_flag("--unnormalized", fit_unnormalized, "Use the raw alignment kernel without normalization");
  c_fit->add_option("--C", fit.C, "Regularization")->capture_default_str();
  c_fit->add_option("--theta", fit.theta, "Outlier fraction in (0,1)")->capture_default_str();
  add_ica(c_fit, fit_ica, fit_ica_flag, fit.ica_max_iter, fit.ica_tolerance);
  auto* fit_grid_opt = c_fit->add_option("--from-summary", "Take hyperparameters from a gridsearch summary JSON")
                           ->check(CLI::ExistingFile);
  c_fit->add_option("--seed", fit.seed)->capture_default_str();
  c_fit->add_option("--out", fit.out, "Model file")->required();
  add_threads(c_fit, fit.threads);

  PredictOptions predict;
  std::string predict_label;
  auto* c_predict = app.add_subcommand("predict", "Score a batch; write output,error,label per row");
  c_predict->add_option("model", predict.model)->required()->check(CLI::ExistingFile);
  c_predict->add_option("batch", predict.batch)->required()->check(CLI::ExistingFile);
  auto* predict_label_opt = c_predict->add_option("--label-col", predict_label, "Column to drop before scoring");
  c_predict->add_option("--out", predict.out, "scores CSV")->required();
  add_threads(c_predict, predict.threads);

  EvalOptions eval;
  std::string eval_out;
  auto* c_eval = app.add_subcommand("eval", "Evaluate a model on a labeled test CSV");
  c_eval->add_option("model", eval.model)->required()->check(CLI::ExistingFile);
  c_eval->add_option("test", eval.test)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--label-col", eval.label_column)->capture_default_str();
  auto* eval_out_opt = c_eval->add_option("--out", eval_out, "Report JSON");
  add_threads(c_eval, eval.threads);

  GridSearchOptions gs;
  Index gs_ica = 0;
  CLI::Option* gs_ica_flag = nullptr;
  std::string gs_summary;
  auto* c_gs = app.add_subcommand("gridsearch", "Cross-validated hyperparameter search");
  c_gs->add_option("train", gs.train, "Training targets CSV")->required()->check(CLI::ExistingFile);
  c_gs->add_option("cvpool", gs.cv_pool, "Outlier validation pool CSV")->required()->check(CLI::ExistingFile);
  c_gs->add_option("--label-col", gs.label_column)->capture_default_str();
  c_gs->add_option("--kernel", gs.kernel, "tgak or rbf")->capture_default_str();
  c_gs->add_option("--grid", gs.grid, "full or coarse")->capture_default_str();
  c_gs->add_option("--folds", gs.folds)->capture_default_str();
  c_gs->add_option("--theta", gs.theta)->capture_default_str();
  add_ica(c_gs, gs_ica, gs_ica_flag, gs.ica_max_iter, gs.ica_tolerance);
  c_gs->add_option("--seed", gs.seed)->capture_default_str();
  c_gs->add_option("--out", gs.out, "cells CSV")->required();
  auto* gs_summary_opt = c_gs->add_option("--summary", gs_summary, "Best-cell summary JSON");
  add_threads(c_gs, gs.threads);

  ExperimentOptions ex;
  Index ex_ica = 0;
  CLI::Option* ex_ica_flag = nullptr;
  std::string ex_out;
  auto* c_ex = app.add_subcommand("experiment", "Repeat split/search/fit/evaluate over several seeds");
  c_ex->add_option("input", ex.input, "Labeled CSV")->required()->check(CLI::ExistingFile);
  c_ex->add_option("--label-col", ex.label_column)->required();
  c_ex->add_option("--target", ex.target)->required();
  c_ex->add_option("--kernel", ex.kernel)->capture_default_str();
  c_ex->add_option("--grid", ex.grid)->capture_default_str();
  ex_ica_flag = add_ica_flag(c_ex, ex_ica);
  c_ex->add_option("--seeds", ex.seeds)->capture_default_str();
  c_ex->add_option("--first-seed", ex.first_seed)->capture_default_str();
  auto* ex_out_opt = c_ex->add_option("--out", ex_out, "Per-seed results CSV");
  add_threads(c_ex, ex.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_split->parsed()) {
      cmd_split(split, std::cout);
    } else if (c_resample->parsed()) {
      cmd_resample(resample, std::cout);
    } else if (c_fit->parsed()) {
      if (fit_label_opt->count()) fit.label_column = fit_label;
      if (fit_ica_flag->count()) fit.ica_components = fit_ica;
      if (fit_grid_opt->count()) fit.grid_summary = fit_grid_opt->as<std::string>();
      fit.normalize_kernel = !fit_unnormalized;
      cmd_fit(fit, std::cout);
    } else if (c_predict->parsed()) {
      if (predict_label_opt->count()) predict.label_column = predict_label;
      cmd_predict(predict, std::cout);
    } else if (c_eval->parsed()) {
      if (eval_out_opt->count()) eval.out = eval_out;
      cmd_eval(eval, std::cout);
    } else if (c_gs->parsed()) {
      if (gs_ica_flag->count()) gs.ica_components = gs_ica;
      if (gs_summary_opt->count()) gs.summary = gs_summary;
      cmd_gridsearch(gs, std::cout);
    } else if (c_ex->parsed()) {
      if (ex_ica_flag->count()) ex.ica_components = ex_ica;
      if (ex_out_opt->count()) ex.out = ex_out;
      cmd_experiment(ex, std::cout);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace oneclass::cli
