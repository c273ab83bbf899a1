// bfp: command-line front end for the bankruptcy-prediction pipeline.

#include <array>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bfp/model_io.hpp"
#include "bfp/pipeline.hpp"
#include "bfp/report.hpp"
#include "bfp/selection.hpp"
#include "json.hpp"

namespace {

using namespace bfp;

struct DataOptions {
  std::string input;
  bool ratios = false;
};

struct SplitOptions {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratified = false;

  SplitConfig config() const { return {train_fraction, seed, stratified}; }
};

struct FitOptions {
  double tolerance = 1e-8;
  int max_iter = 50;
  double ridge = 0.0;

  FitConfig config() const { return {tolerance, max_iter, ridge}; }
};

void add_data(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--input", o.input, "Input CSV (raw statements, or ratios with --ratios)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--ratios", o.ratios, "Input holds pre-computed ratios");
}

void add_split(CLI::App* cmd, SplitOptions& o) {
  cmd->add_option("--train-fraction", o.train_fraction, "Share of firms in the training set")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", o.seed, "Seed of the SplitMix64 shuffle")->capture_default_str();
  cmd->add_flag("--stratified", o.stratified, "Split each class separately");
}

void add_fit(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--tolerance", o.tolerance, "Score max-norm convergence threshold")->capture_default_str();
  cmd->add_option("--max-iter", o.max_iter, "IRLS iteration cap")->capture_default_str();
  cmd->add_option("--ridge", o.ridge, "Ridge penalty on slopes (0 = plain MLE)")->capture_default_str();
}

void add_positive(CLI::App* cmd, std::string& positive) {
  cmd->add_option("--positive-class", positive, "bankrupt | non-bankrupt")
      ->capture_default_str()
      ->check(CLI::IsMember({"bankrupt", "non-bankrupt"}));
}

PositiveClass parse_positive(const std::string& s) { return *positive_class_from_string(s); }

RatioDataset load(const DataOptions& o) {
  try {
    return load_ratio_dataset(read_text_file(o.input), o.ratios);
  } catch (const Error& e) {
    throw StageError(Stage::Input, e.code(), e.message());
  }
}

template <class F>
auto stage(Stage s, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(s, e.code(), e.message());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
}

// Bankruptcy + the requested (or all) ratio columns over rows where all are defined.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> columns_for(const RatioDataset& data,
                                                                                  const std::string& list) {
  const auto features = list.empty() ? data.feature_names : split_list(list);
  const Design d = build_design(data, features);
  std::vector<std::string> names{kLabelColumn};
  std::vector<std::vector<double>> cols{std::vector<double>(d.y.begin(), d.y.end())};
  for (std::size_t j = 0; j < features.size(); ++j) {
    names.push_back(features[j]);
    std::vector<double> c(d.x.rows());
    for (std::size_t i = 0; i < d.x.rows(); ++i) c[i] = d.x(i, j);
    cols.push_back(std::move(c));
  }
  return {names, cols};
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.stage());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bankruptcy prediction from financial ratios with maximum-likelihood logistic regression"};
  app.require_subcommand(1);

  // stats
  DataOptions stats_data;
  std::string stats_columns;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Descriptive statistics per variable");
  add_data(stats, stats_data);
  stats->add_option("--columns", stats_columns, "Comma-separated ratio ids (default: all)");
  stats->add_flag("--json", stats_json, "Emit JSON");

  // corr
  DataOptions corr_data;
  std::string corr_columns;
  double corr_threshold = 0.9;
  bool corr_json = false;
  auto* corr = app.add_subcommand("corr", "Correlation matrix and multicollinearity screen");
  add_data(corr, corr_data);
  corr->add_option("--columns", corr_columns, "Comma-separated ratio ids (default: all)");
  corr->add_option("--threshold", corr_threshold, "Flag pairs with |r| at or above this")->capture_default_str();
  corr->add_flag("--json", corr_json, "Emit JSON");

  // fit
  DataOptions fit_data;
  SplitOptions fit_split;
  FitOptions fit_opts;
  std::string fit_features_arg;
  std::string fit_model_out;
  bool fit_json = false;
  auto* fit = app.add_subcommand("fit", "Fit the logistic model on the training split");
  add_data(fit, fit_data);
  add_split(fit, fit_split);
  add_fit(fit, fit_opts);
  fit->add_option("--features", fit_features_arg, "Comma-separated ratio ids (default: all)");
  fit->add_option("--model-out", fit_model_out, "Write the fitted model JSON here");
  fit->add_flag("--json", fit_json, "Emit the inference table as JSON");

  // select
  DataOptions select_data;
  SplitOptions select_split;
  FitOptions select_fit;
  std::string select_table;
  double select_alpha = 0.05;
  std::size_t select_k = 0;
  auto* sel = app.add_subcommand("select", "Reduce the candidate ratios by Wald p-value");
  auto* sel_input = sel->add_option("--input", select_data.input, "Data CSV: runs the preliminary fit first")
                        ->check(CLI::ExistingFile);
  sel->add_flag("--ratios", select_data.ratios, "Input holds pre-computed ratios");
  auto* sel_table = sel->add_option("--table", select_table, "CSV of name,coefficient,std_err rows")
                        ->check(CLI::ExistingFile);
  sel_input->excludes(sel_table);
  auto* sel_alpha = sel->add_option("--alpha", select_alpha, "Keep p < alpha")->capture_default_str();
  auto* sel_k = sel->add_option("--top-k", select_k, "Keep the k smallest p-values");
  sel_alpha->excludes(sel_k);
  add_split(sel, select_split);
  add_fit(sel, select_fit);

  // evaluate
  std::string eval_model;
  DataOptions eval_data;
  SplitOptions eval_split;
  std::string eval_matrix;
  std::string eval_positive = "non-bankrupt";
  bool eval_all = false;
  bool eval_json = false;
  auto* ev = app.add_subcommand("evaluate", "Confusion matrix and accuracy/precision/recall");
  auto* ev_model = ev->add_option("--model", eval_model, "Model JSON")->check(CLI::ExistingFile);
  ev->add_option("--input", eval_data.input, "Data CSV")->check(CLI::ExistingFile);
  ev->add_flag("--ratios", eval_data.ratios, "Input holds pre-computed ratios");
  auto* ev_matrix = ev->add_option("--matrix", eval_matrix,
                                   "Cells bb,bn,nb,nn (rows actual bankrupt/non-bankrupt, columns predicted)");
  ev_model->excludes(ev_matrix);
  ev->add_flag("--all", eval_all, "Evaluate on every row instead of the test split");
  add_split(ev, eval_split);
  add_positive(ev, eval_positive);
  ev->add_flag("--json", eval_json, "Emit JSON");

  // roc
  std::string roc_model;
  DataOptions roc_data;
  SplitOptions roc_split;
  std::string roc_positive = "non-bankrupt";
  std::string roc_out;
  std::string roc_label = "model";
  bool roc_all = false;
  auto* roc = app.add_subcommand("roc", "ROC points and AUC on the test split");
  roc->add_option("--model", roc_model, "Model JSON")->required()->check(CLI::ExistingFile);
  add_data(roc, roc_data);
  add_split(roc, roc_split);
  add_positive(roc, roc_positive);
  roc->add_flag("--all", roc_all, "Use every row instead of the test split");
  roc->add_option("--out", roc_out, "Directory for roc_<label>.csv and .svg (default: CSV to stdout)");
  roc->add_option("--label", roc_label, "File label")->capture_default_str();

  // predict
  std::string pred_model;
  std::string pred_input;
  std::string pred_out;
  auto* pred = app.add_subcommand("predict", "Score firms from a ratios CSV with a saved model");
  pred->add_option("--model", pred_model, "Model JSON")->required()->check(CLI::ExistingFile);
  pred->add_option("--input", pred_input, "Ratios CSV: firm_id plus the model's feature columns")
      ->required()
      ->check(CLI::ExistingFile);
  pred->add_option("--out", pred_out, "Output CSV (default: stdout)");

  // pipeline
  std::vector<std::string> pipe_inputs;
  std::vector<std::string> pipe_labels;
  bool pipe_ratios = false;
  SplitOptions pipe_split;
  FitOptions pipe_fit;
  double pipe_alpha = 0.05;
  std::size_t pipe_k = 0;
  std::string pipe_positive = "non-bankrupt";
  std::string pipe_out = "bfp_report";
  double pipe_corr = 0.9;
  auto* pipe = app.add_subcommand("pipeline", "Run every stage and write the report bundle");
  pipe->add_option("--input", pipe_inputs, "Input CSV (repeatable, one per horizon)")
      ->required()
      ->check(CLI::ExistingFile);
  pipe->add_option("--label", pipe_labels, "Horizon label per --input (default: file stem)");
  pipe->add_flag("--ratios", pipe_ratios, "Inputs hold pre-computed ratios");
  add_split(pipe, pipe_split);
  add_fit(pipe, pipe_fit);
  auto* pipe_alpha_opt = pipe->add_option("--alpha", pipe_alpha, "Keep p < alpha")->capture_default_str();
  auto* pipe_k_opt = pipe->add_option("--top-k", pipe_k, "Keep the k smallest p-values");
  pipe_alpha_opt->excludes(pipe_k_opt);
  add_positive(pipe, pipe_positive);
  pipe->add_option("--corr-threshold", pipe_corr, "Multicollinearity flag threshold")->capture_default_str();
  pipe->add_option("--out", pipe_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors count as input errors
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (stats->parsed()) {
    return run_guarded([&] {
      const auto data = load(stats_data);
      const auto [names, cols] = stage(Stage::Input, [&] { return columns_for(data, stats_columns); });
      std::vector<DescriptiveStats> ds;
      for (const auto& c : cols) ds.push_back(stage(Stage::Input, [&] { return describe(c); }));
      if (stats_json) {
        nlohmann::ordered_json j;
        for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = to_json(ds[i]);
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << render_descriptives(names, ds);
      }
      return 0;
    });
  }

  if (corr->parsed()) {
    return run_guarded([&] {
      const auto data = load(corr_data);
      return stage(Stage::Input, [&] {
        const auto [names, cols] = columns_for(data, corr_columns);
        const auto m = correlation_matrix(names, cols);
        const auto flags = flag_multicollinearity(m, corr_threshold);
        if (corr_json) {
          nlohmann::ordered_json j;
          j["names"] = m.names;
          auto vals = nlohmann::ordered_json::array();
          for (std::size_t i = 0; i < m.names.size(); ++i) {
            auto r = m.values.row(i);
            vals.push_back(std::vector<double>(r.begin(), r.end()));
          }
          j["values"] = vals;
          auto fl = nlohmann::ordered_json::array();
          for (const auto& f : flags) fl.push_back({{"first", f.first}, {"second", f.second}, {"value", f.value}});
          j["flags"] = fl;
          std::cout << j.dump(2) << '\n';
        } else {
          std::cout << render_correlation(m);
          if (flags.empty()) std::cout << "no pair with |r| >= " << corr_threshold << '\n';
          for (const auto& f : flags) std::cout << "flag: " << f.first << " / " << f.second << " r = " << f.value << '\n';
        }
        return 0;
      });
    });
  }

  if (fit->parsed()) {
    return run_guarded([&] {
      const auto data = load(fit_data);
      const auto train = stage(Stage::Input, [&] { return split_train_test(data, fit_split.config()).first; });
      const auto features = fit_features_arg.empty() ? data.feature_names : split_list(fit_features_arg);
      const auto fitted = fit_features(train, features, fit_opts.config());
      const auto table = stage(Stage::Fit, [&] { return wald_inference(fitted); });
      if (!fit_model_out.empty()) save_model(fitted, fit_model_out);
      if (fit_json) {
        std::cout << to_json(table).dump(2) << '\n';
      } else {
        std::cout << render_inference(table);
        std::cout << "log-likelihood " << fitted.log_likelihood << "; " << fitted.iterations << " iterations; n = "
                  << train.size() << '\n';
      }
      return 0;
    });
  }

  if (sel->parsed()) {
    return run_guarded([&] {
      const SelectionRule rule =
          sel_k->count() ? SelectionRule::top_k(select_k) : SelectionRule::threshold(select_alpha);
      InferenceTable table;
      if (!select_table.empty()) {
        table = stage(Stage::Input, [&] { return wald_from_coefficient_csv(read_text_file(select_table)); });
      } else if (!select_data.input.empty()) {
        const auto data = load(select_data);
        const auto train = stage(Stage::Input, [&] { return split_train_test(data, select_split.config()).first; });
        const auto fitted = fit_features(train, data.feature_names, select_fit.config());
        table = stage(Stage::Fit, [&] { return wald_inference(fitted); });
      } else {
        throw StageError(Stage::Input, ErrorCode::InvalidArgument, "select needs --input or --table");
      }
      const auto res = stage(Stage::Fit, [&] { return select(table, rule); });
      std::cout << render_inference(table) << '\n' << render_selection(res, table);
      return 0;
    });
  }

  if (ev->parsed()) {
    return run_guarded([&] {
      const auto positive = parse_positive(eval_positive);
      const auto other = positive == PositiveClass::Bankrupt ? PositiveClass::NonBankrupt : PositiveClass::Bankrupt;
      ConfusionMatrix cm;
      if (!eval_matrix.empty()) {
        cm = stage(Stage::Input, [&] {
          const auto cells = split_list(eval_matrix);
          if (cells.size() != 4) throw Error(ErrorCode::InvalidArgument, "--matrix needs four counts");
          std::array<std::size_t, 4> v{};
          for (std::size_t i = 0; i < 4; ++i) v[i] = static_cast<std::size_t>(std::stoull(cells[i]));
          return ConfusionMatrix::from_report_cells(v[0], v[1], v[2], v[3]);
        });
      } else {
        if (eval_model.empty() || eval_data.input.empty()) {
          throw StageError(Stage::Input, ErrorCode::InvalidArgument, "evaluate needs --matrix or --model with --input");
        }
        const auto model = stage(Stage::Input, [&] { return load_model(eval_model); });
        const auto data = load(eval_data);
        const auto rows = eval_all ? data : stage(Stage::Input, [&] { return split_train_test(data, eval_split.config()).second; });
        const auto d = stage(Stage::Input, [&] { return build_design(rows, model.model.feature_names); });
        cm = stage(Stage::Evaluation, [&] {
          std::vector<int> predicted;
          for (std::size_t i = 0; i < d.x.rows(); ++i) predicted.push_back(classify(model.model, d.x.row(i)));
          return confusion_matrix(d.y, predicted);
        });
      }
      const auto a = stage(Stage::Evaluation, [&] { return class_metrics(cm, positive); });
      const auto b = stage(Stage::Evaluation, [&] { return class_metrics(cm, other); });
      if (eval_json) {
        nlohmann::ordered_json j;
        j["confusion_matrix"] = to_json(cm);
        j["metrics"] = {to_json(a), to_json(b)};
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << render_confusion(cm) << '\n' << render_metrics(a, b);
      }
      return 0;
    });
  }

  if (roc->parsed()) {
    return run_guarded([&] {
      const auto model = stage(Stage::Input, [&] { return load_model(roc_model); });
      const auto data = load(roc_data);
      const auto rows = roc_all ? data : stage(Stage::Input, [&] { return split_train_test(data, roc_split.config()).second; });
      const auto d = stage(Stage::Input, [&] { return build_design(rows, model.model.feature_names); });
      const auto curve = stage(Stage::Evaluation, [&] {
        std::vector<double> scores;
        for (std::size_t i = 0; i < d.x.rows(); ++i) scores.push_back(predict_probability(model.model, d.x.row(i)));
        return roc_curve(scores, d.y, parse_positive(roc_positive));
      });
      if (roc_out.empty()) {
        std::cout << roc_csv(curve);
      } else {
        std::filesystem::create_directories(roc_out);
        write_text((std::filesystem::path(roc_out) / ("roc_" + roc_label + ".csv")).string(), roc_csv(curve));
        write_text((std::filesystem::path(roc_out) / ("roc_" + roc_label + ".svg")).string(),
                   roc_svg(curve, "ROC curve: " + roc_label));
      }
      std::cerr << "AUC = " << curve.auc << '\n';
      return 0;
    });
  }

  if (pred->parsed()) {
    return run_guarded([&] {
      const auto model = stage(Stage::Input, [&] { return load_model(pred_model); });
      const auto data = stage(Stage::Input, [&] { return parse_ratio_records(read_text_file(pred_input), false); });
      const auto preds = stage(Stage::Input, [&] { return predict(model.model, data); });
      write_text(pred_out, predictions_csv(preds));
      return 0;
    });
  }

  if (pipe->parsed()) {
    return run_guarded([&] {
      if (!pipe_labels.empty() && pipe_labels.size() != pipe_inputs.size()) {
        throw StageError(Stage::Input, ErrorCode::InvalidArgument, "give one --label per --input");
      }
      PipelineConfig cfg;
      for (std::size_t i = 0; i < pipe_inputs.size(); ++i) {
        const auto label =
            pipe_labels.empty() ? std::filesystem::path(pipe_inputs[i]).stem().string() : pipe_labels[i];
        cfg.inputs.push_back({pipe_inputs[i], label});
      }
      cfg.ratios_mode = pipe_ratios;
      cfg.split = pipe_split.config();
      cfg.fit = pipe_fit.config();
      cfg.rule = pipe_k_opt->count() ? SelectionRule::top_k(pipe_k) : SelectionRule::threshold(pipe_alpha);
      cfg.positive = parse_positive(pipe_positive);
      cfg.corr_threshold = pipe_corr;
      const auto report = run_pipeline(cfg);
      stage(Stage::Input, [&] {
        write_report_bundle(report, pipe_out);
        return 0;
      });
      std::cout << render_report(report);
      return 0;
    });
  }
  return 0;
}
