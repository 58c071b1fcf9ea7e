#include "cli/model_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "oneclass/error.hpp"
#include "oneclass/seed.hpp"

namespace oneclass::cli {
namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.begin(), v.end())); }

Vector vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, Index expected_cols) {
  Matrix m(static_cast<Index>(j.size()), expected_cols);
  for (Index i = 0; i < m.rows(); ++i) {
    const auto row = j.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    if (static_cast<Index>(row.size()) != expected_cols) throw DataError("model file: ragged matrix");
    for (Index c = 0; c < expected_cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

// JSON has no infinity; an untruncated triangle is stored as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json grid_cell_to_json(const GridCell& c) {
  return {{"T", std::isnan(c.triangle) ? json(nullptr) : json(c.triangle)}, {"C", c.C}, {"sigma", c.sigma}};
}

GridCell grid_cell_from_json(const json& j) {
  GridCell c;
  c.triangle = j.at("T").is_null() ? std::nan("") : j.at("T").get<double>();
  c.C = j.at("C").get<double>();
  c.sigma = j.at("sigma").get<double>();
  return c;
}

}  // namespace

json kernel_to_json(const KernelSpec& spec) {
  return {{"kind", kind_name(spec.kind)},
          {"sigma", spec.sigma},
          {"triangle", finite_or_null(spec.triangle)},
          {"normalize", spec.normalize}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec spec;
  spec.kind = parse_kind(j.at("kind").get<std::string>());
  spec.sigma = j.at("sigma").get<double>();
  spec.triangle = number_or_inf(j.at("triangle"));
  spec.normalize = j.at("normalize").get<bool>();
  return spec;
}

json ica_config_to_json(const IcaConfig& c) {
  return {{"n_components", c.n_components},
          {"max_iter", c.max_iter},
          {"epsilon", c.epsilon},
          {"seed", c.seed},
          {"contrast", contrast_name(c.contrast)},
          {"convergence", c.convergence == ConvergenceTest::kAlignment ? "alignment" : "matrix-delta"}};
}

IcaConfig ica_config_from_json(const json& j) {
  IcaConfig c;
  c.n_components = j.at("n_components").get<Index>();
  c.max_iter = j.at("max_iter").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.contrast = parse_contrast(j.at("contrast").get<std::string>());
  c.convergence =
      j.at("convergence").get<std::string>() == "alignment" ? ConvergenceTest::kAlignment : ConvergenceTest::kMatrixDelta;
  return c;
}

json report_to_json(const EvalReport& r) {
  json hp = {{"kernel", kernel_to_json(r.hyperparameters.kernel)},
             {"C", r.hyperparameters.C},
             {"theta", r.hyperparameters.theta},
             {"ica", r.hyperparameters.ica ? ica_config_to_json(*r.hyperparameters.ica) : json(nullptr)}};
  return {{"tp", r.counts.tp},
          {"fp", r.counts.fp},
          {"fn", r.counts.fn},
          {"tn", r.counts.tn},
          {"precision", r.metrics.precision},
          {"recall", r.metrics.recall},
          {"f1", r.metrics.f1},
          {"hyperparameters", hp},
          {"seed", r.seed}};
}

json to_json(const ModelFile& m) {
  const auto& det = m.detector;
  json ica = nullptr;
  if (det.ica) {
    ica = {{"mean", vector_to_json(det.ica->mean)},
           {"whiten", matrix_to_json(det.ica->whiten)},
           {"unmixing", matrix_to_json(det.ica->unmixing)},
           {"n_components", det.ica->n_components},
           {"iterations_used", det.ica->iterations_used},
           {"converged", det.ica->converged},
           {"config", m.ica_config ? ica_config_to_json(*m.ica_config) : json(nullptr)}};
  }
  json prov = {{"seed", m.provenance.seed},
               {"dataset_fingerprint", m.provenance.dataset_fingerprint},
               {"grid_cell", m.provenance.grid_cell ? grid_cell_to_json(*m.provenance.grid_cell) : json(nullptr)}};
  return {{"format", "oneclass-model"},
          {"format_version", m.format_version},
          {"feature_names", m.feature_names},
          {"norm_stats", {{"mean", vector_to_json(det.norm.mean)}, {"std", vector_to_json(det.norm.std)}}},
          {"ica", ica},
          {"kernel", kernel_to_json(det.model.spec)},
          {"C", det.model.C},
          {"theta", det.model.theta},
          {"delta", det.model.delta},
          {"jitter", det.model.jitter},
          {"coefficients", vector_to_json(det.model.coefficients)},
          {"train_rows", matrix_to_json(det.model.train_rows)},
          {"provenance", prov}};
}

ModelFile model_from_json(const json& doc) {
  if (doc.value("format", "") != "oneclass-model") throw DataError("not a oneclass model file");
  const int version = doc.at("format_version").get<int>();
  if (version != kModelFormatVersion) {
    throw DataError("model file format_version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  ModelFile m;
  m.format_version = version;
  m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  auto& det = m.detector;
  det.norm.mean = vector_from_json(doc.at("norm_stats").at("mean"));
  det.norm.std = vector_from_json(doc.at("norm_stats").at("std"));
  const Index d = det.norm.mean.size();
  if (det.norm.std.size() != d) throw DataError("model file: normalization vectors differ in length");

  Index model_dim = d;
  if (const auto& ica = doc.at("ica"); !ica.is_null()) {
    IcaTransform t;
    t.mean = vector_from_json(ica.at("mean"));
    t.n_components = ica.at("n_components").get<Index>();
    t.whiten = matrix_from_json(ica.at("whiten"), d);
    t.unmixing = matrix_from_json(ica.at("unmixing"), t.n_components);
    t.iterations_used = ica.at("iterations_used").get<int>();
    t.converged = ica.at("converged").get<bool>();
    if (t.whiten.rows() != t.n_components || t.unmixing.rows() != t.n_components || t.mean.size() != d) {
      throw DataError("model file: ICA block has inconsistent dimensions");
    }
    if (!ica.at("config").is_null()) m.ica_config = ica_config_from_json(ica.at("config"));
    model_dim = t.n_components;
    det.ica = std::move(t);
  }

  auto& model = det.model;
  model.spec = kernel_from_json(doc.at("kernel"));
  model.C = doc.at("C").get<double>();
  model.theta = doc.at("theta").get<double>();
  model.delta = doc.at("delta").get<double>();
  model.jitter = doc.at("jitter").get<double>();
  model.coefficients = vector_from_json(doc.at("coefficients"));
  model.train_rows = matrix_from_json(doc.at("train_rows"), model_dim);
  if (model.coefficients.size() != model.train_rows.rows()) {
    throw DataError("model file: coefficient count does not match training rows");
  }

  const auto& prov = doc.at("provenance");
  m.provenance.seed = prov.at("seed").get<std::uint64_t>();
  m.provenance.dataset_fingerprint = prov.at("dataset_fingerprint").get<std::string>();
  if (!prov.at("grid_cell").is_null()) m.provenance.grid_cell = grid_cell_from_json(prov.at("grid_cell"));
  return m;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  write_file_atomic(path, to_json(model).dump(1) + "\n");
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  try {
    return model_from_json(doc);
  } catch (const json::exception& e) {
    throw DataError("model file '" + path.string() + "' is malformed: " + e.what());
  }
}

std::string fingerprint_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream bytes;
  bytes << in.rdbuf();
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes.str());
  return hex.str();
}

}  // namespace oneclass::cli
