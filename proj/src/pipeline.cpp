#include "bfp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

namespace bfp {
namespace {

template <class F>
auto in_stage(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.code(), e.message());
  }
}

std::vector<double> column(const Matrix& x, std::size_t j) {
  std::vector<double> c(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) c[i] = x(i, j);
  return c;
}

}  // namespace

int exit_code(Stage s) noexcept {
  switch (s) {
    case Stage::Input: return 2;
    case Stage::Fit: return 3;
    case Stage::Evaluation: return 4;
  }
  return 1;
}

std::string_view to_string(Stage s) noexcept {
  switch (s) {
    case Stage::Input: return "input";
    case Stage::Fit: return "fit";
    case Stage::Evaluation: return "evaluation";
  }
  return "unknown";
}

RatioDataset load_ratio_dataset(std::string_view csv_text, bool ratios_mode) {
  if (ratios_mode) return parse_ratio_records(csv_text, true);
  return to_ratio_dataset(parse_firm_records(csv_text));
}

Design build_design(const RatioDataset& data, std::span<const std::string> features, bool require_labels) {
  std::vector<Ratio> ratios;
  for (const auto& f : features) {
    auto r = ratio_from_id(f);
    if (!r) throw Error(ErrorCode::FeatureMismatch, "unknown feature '" + f + "'");
    if (std::find(data.feature_names.begin(), data.feature_names.end(), f) == data.feature_names.end()) {
      throw Error(ErrorCode::FeatureMismatch, "feature '" + f + "' is not present in the data");
    }
    ratios.push_back(*r);
  }
  Design d;
  d.features.assign(features.begin(), features.end());
  std::vector<double> values;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& rec = data.records[i];
    if (!rec.ratios.undefined(ratios).empty()) continue;  // zero denominator in a used ratio
    if (require_labels) {
      if (!rec.label) throw Error(ErrorCode::MissingValue, "record '" + rec.firm_id + "' has no label");
      d.y.push_back(*rec.label);
    }
    for (Ratio r : ratios) values.push_back(rec.ratios.at(r));
    d.rows.push_back(i);
  }
  d.x = Matrix::from_row_major(d.rows.size(), ratios.size(), std::move(values));
  return d;
}

FittedModel fit_features(const RatioDataset& train, std::span<const std::string> features, const FitConfig& cfg) {
  const Design d = in_stage(Stage::Input, [&] { return build_design(train, features); });
  return in_stage(Stage::Fit, [&] {
    try {
      return fit_irls(d.x, d.y, cfg, d.features);
    } catch (const SingularInformationError& e) {
      if (!e.column() || *e.column() == 0) throw;
      const std::size_t c = *e.column();
      const auto target = column(d.x, c);
      std::size_t best = 0;
      double best_r = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        const auto other = column(d.x, j);
        double r = 0.0;
        try {
          r = pearson(target, other);
        } catch (const Error&) {
          continue;
        }
        if (std::isnan(r)) continue;
        if (std::abs(r) > std::abs(best_r)) {
          best_r = r;
          best = j;
        }
      }
      throw StageError(Stage::Fit, ErrorCode::SingularInformation,
                       "information matrix is singular: covariates '" + d.features[best] + "' and '" +
                           d.features[c] + "' are collinear (r = " + std::to_string(best_r) + ")");
    }
  });
}

HorizonReport run_horizon(std::string_view csv_text, const std::string& label, const std::string& path,
                          const PipelineConfig& cfg) {
  HorizonReport rep;
  rep.label = label;
  rep.input_path = path;

  const RatioDataset data = in_stage(Stage::Input, [&] {
    auto d = load_ratio_dataset(csv_text, cfg.ratios_mode);
    if (d.empty()) throw Error(ErrorCode::EmptyDataset, "input has no records");
    return d;
  });
  rep.n_records = data.size();
  rep.candidate_features = data.feature_names;

  const auto [train, test] = in_stage(Stage::Input, [&] { return split_train_test(data, cfg.split); });
  rep.n_train = train.size();
  rep.n_test = test.size();

  // Preliminary joint fit on every candidate, then a single p-value cut.
  rep.preliminary = fit_features(train, rep.candidate_features, cfg.fit);
  rep.n_train_used_preliminary =
      in_stage(Stage::Input, [&] { return build_design(train, rep.candidate_features).rows.size(); });
  in_stage(Stage::Fit, [&] {
    rep.preliminary_table = wald_inference(rep.preliminary, cfg.confidence_level);
    rep.selection = select(rep.preliminary_table, cfg.rule);
    return 0;
  });

  const auto& kept = rep.selection.kept;
  rep.final_fit = fit_features(train, kept, cfg.fit);
  rep.n_train_used_final = in_stage(Stage::Input, [&] { return build_design(train, kept).rows.size(); });
  in_stage(Stage::Fit, [&] {
    rep.final_table = wald_inference(rep.final_fit, cfg.confidence_level);
    return 0;
  });

  // Descriptives and correlation screen over the full sample, final variables.
  in_stage(Stage::Input, [&] {
    const Design full = build_design(data, kept);
    std::vector<std::string> names{kLabelColumn};
    std::vector<std::vector<double>> cols{std::vector<double>(full.y.begin(), full.y.end())};
    for (std::size_t j = 0; j < kept.size(); ++j) {
      names.push_back(kept[j]);
      cols.push_back(column(full.x, j));
    }
    for (const auto& c : cols) rep.descriptives.push_back(describe(c));
    rep.described = names;
    rep.correlation = correlation_matrix(names, cols);
    rep.collinear = flag_multicollinearity(rep.correlation, cfg.corr_threshold);
    return 0;
  });

  in_stage(Stage::Evaluation, [&] {
    const Design td = build_design(test, kept);
    if (td.rows.empty()) throw Error(ErrorCode::EmptyDataset, "test set is empty");
    std::vector<double> scores;
    std::vector<int> predicted;
    for (std::size_t i = 0; i < td.rows.size(); ++i) {
      const double p = predict_probability(rep.final_fit.model, td.x.row(i));
      scores.push_back(p);
      predicted.push_back(p > 0.5 ? 1 : 0);
      rep.test_predictions.push_back({test.records[td.rows[i]].firm_id, td.y[i], p, predicted.back()});
    }
    rep.confusion = confusion_matrix(td.y, predicted);
    rep.metrics_non_bankrupt = class_metrics(rep.confusion, PositiveClass::NonBankrupt);
    rep.metrics_bankrupt = class_metrics(rep.confusion, PositiveClass::Bankrupt);
    rep.roc = roc_curve(scores, td.y, cfg.positive);
    return 0;
  });
  return rep;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) throw StageError(Stage::Input, ErrorCode::InvalidArgument, "no input files given");
  std::set<std::string> labels;
  for (const auto& in : cfg.inputs) {
    if (!labels.insert(in.label).second) {
      throw StageError(Stage::Input, ErrorCode::InvalidArgument, "duplicate horizon label '" + in.label + "'");
    }
  }
  std::vector<std::string> texts;
  for (const auto& in : cfg.inputs) texts.push_back(in_stage(Stage::Input, [&] { return read_text_file(in.path); }));

  RunReport report;
  report.config = cfg;
  if (cfg.inputs.size() == 1) {
    report.horizons.push_back(run_horizon(texts[0], cfg.inputs[0].label, cfg.inputs[0].path, cfg));
    return report;
  }
  std::vector<std::future<HorizonReport>> jobs;
  for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return run_horizon(texts[i], cfg.inputs[i].label, cfg.inputs[i].path, cfg);
    }));
  }
  for (auto& j : jobs) report.horizons.push_back(j.get());
  return report;
}

}  // namespace bfp
