#include "bfp/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace bfp {
namespace {

constexpr std::string_view kFormat = "bfp-logit-model";
constexpr int kVersion = 1;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

nlohmann::ordered_json model_to_json(const FittedModel& f) {
  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["feature_names"] = f.model.feature_names;
  j["beta"] = f.model.beta;
  auto cov = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < f.covariance.rows(); ++i) {
    auto r = f.covariance.row(i);
    cov.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["covariance"] = std::move(cov);
  j["log_likelihood"] = f.log_likelihood;
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["gradient_norm"] = f.gradient_norm;
  return j;
}

FittedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw Error(ErrorCode::InvalidModelFile, "unexpected format tag");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw Error(ErrorCode::InvalidModelFile, "unsupported model version");
    }
    FittedModel f;
    f.model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    f.model.beta = j.at("beta").get<std::vector<double>>();
    const std::size_t k = f.model.beta.size();
    if (k != f.model.feature_names.size() + 1) {
      throw Error(ErrorCode::InvalidModelFile, "beta must hold one intercept plus one value per feature");
    }
    const auto cov = j.at("covariance").get<std::vector<std::vector<double>>>();
    if (cov.size() != k) throw Error(ErrorCode::InvalidModelFile, "covariance has the wrong shape");
    f.covariance = Matrix(k, k);
    for (std::size_t r = 0; r < k; ++r) {
      if (cov[r].size() != k) throw Error(ErrorCode::InvalidModelFile, "covariance has the wrong shape");
      for (std::size_t c = 0; c < k; ++c) f.covariance(r, c) = cov[r][c];
    }
    f.log_likelihood = j.at("log_likelihood").get<double>();
    f.iterations = j.at("iterations").get<int>();
    f.converged = j.at("converged").get<bool>();
    f.gradient_norm = j.at("gradient_norm").get<double>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidModelFile, e.what());
  }
}

void save_model(const FittedModel& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << model_to_json(f).dump(2) << '\n';
}

FittedModel load_model(const std::string& path) {
  const auto text = read_text_file(path);
  try {
    return model_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidModelFile, "'" + path + "': " + e.what());
  }
}

std::vector<Prediction> predict(const LogitModel& m, const RatioDataset& data) {
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  for (const auto& f : m.feature_names) {
    if (std::find(data.feature_names.begin(), data.feature_names.end(), f) == data.feature_names.end()) {
      missing.push_back(f);
    }
  }
  for (const auto& f : data.feature_names) {
    if (std::find(m.feature_names.begin(), m.feature_names.end(), f) == m.feature_names.end()) extra.push_back(f);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "ratio columns do not match the model";
    if (!missing.empty()) msg += "; missing: " + join(missing);
    if (!extra.empty()) msg += "; extra: " + join(extra);
    throw Error(ErrorCode::FeatureMismatch, msg);
  }

  std::vector<Ratio> ratios;
  for (const auto& f : m.feature_names) ratios.push_back(*ratio_from_id(f));

  std::vector<Prediction> out;
  out.reserve(data.size());
  std::vector<double> x(ratios.size());
  for (const auto& rec : data.records) {
    for (std::size_t j = 0; j < ratios.size(); ++j) x[j] = rec.ratios.at(ratios[j]);
    const double p = predict_probability(m, x);
    out.push_back({rec.firm_id, p, p > 0.5 ? 1 : 0});
  }
  return out;
}

std::string predictions_csv(std::span<const Prediction> preds) {
  std::ostringstream out;
  out << "firm_id,probability,class\n";
  for (const auto& p : preds) {
    out << detail::csv_escape(p.firm_id) << ',' << detail::format_double(p.probability) << ',' << p.predicted_class
        << '\n';
  }
  return out.str();
}

InferenceTable wald_from_coefficient_csv(std::string_view csv_text, double level) {
  auto rows = detail::parse_csv(csv_text);
  if (rows.empty()) throw Error(ErrorCode::MissingColumn, "coefficient table has no header");
  const auto& header = rows.front();
  auto find = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "required column '" + std::string(name) + "' not found");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t name_col = find("name");
  const std::size_t coef_col = find("coefficient");
  const std::size_t se_col = find("std_err");
  InferenceTable t;
  t.confidence_level = level;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= std::max({name_col, coef_col, se_col})) {
      throw Error(ErrorCode::MissingValue, "row " + std::to_string(r) + " is short");
    }
    auto num = [&](std::size_t c) {
      try {
        std::size_t used = 0;
        const double v = std::stod(row[c], &used);
        if (used != row[c].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCode::UnparseableNumber, "row " + std::to_string(r) + ", column " + header[c] + ": '" + row[c] + "'");
      }
    };
    auto wr = wald_row(row[name_col], num(coef_col), num(se_col), level);
    wr.is_intercept = row[name_col] == kInterceptName;
    t.rows.push_back(std::move(wr));
  }
  return t;
}

}  // namespace bfp
