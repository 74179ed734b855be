// priorshift: batch front-end for prior-shift estimation and adaptation.
// Subcommands: synth, calibrate, estimate, adapt, evaluate, sweep.
// Exit codes: 0 success, 2 usage error, 3 data/parse error, 4 numerical error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psa/adaptation.hpp"
#include "psa/calibration.hpp"
#include "psa/confusion.hpp"
#include "psa/estimators.hpp"
#include "psa/io.hpp"
#include "psa/sweep.hpp"
#include "psa/synth.hpp"
#include "psa/types.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string method = "scm-l";
  double alpha = 3.0;
  int max_iters = 10000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string calibration = "none";
  std::string train_priors = "predictions";
};

void add_solver_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--alpha", flags.alpha, "Dirichlet hyper-prior concentration");
  cmd->add_option("--max-iters", flags.max_iters, "Iteration cap for iterative solvers");
  cmd->add_option("--tol", flags.tol, "Objective-change stopping threshold");
  cmd->add_option("--seed", flags.seed, "Random seed");
  cmd->add_option("--calibration", flags.calibration,
                  "Calibration mode: none|ts|bcts")
      ->check(CLI::IsMember({"none", "ts", "bcts"}));
  cmd->add_option("--train-priors", flags.train_priors,
                  "Train-prior source: counts|predictions|FILE");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::vector<double> parse_prior_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

psa::SolverOptions solver_options(const CommonFlags& flags) {
  psa::SolverOptions opts;
  opts.max_iters = flags.max_iters;
  opts.tol = flags.tol;
  opts.seed = flags.seed;
  opts.validate();
  return opts;
}

// Loads predictions (and logits when present), applying the requested
// calibration fitted on the validation files.
struct Pipeline {
  psa::PredictionMatrix val_preds;
  psa::PredictionMatrix test_preds;
  psa::LabelVector val_labels;
};

psa::PredictionMatrix to_predictions(const psa::io::LoadedPredictions& loaded) {
  if (loaded.preds) return *loaded.preds;
  return psa::apply_calibration(*loaded.logits,
                                psa::CalibrationParams::identity(loaded.logits->cols()));
}

psa::LogitMatrix to_logits(const psa::io::LoadedPredictions& loaded) {
  if (loaded.logits) return *loaded.logits;
  return psa::logits_from_probabilities(*loaded.preds);
}

Pipeline load_pipeline(const std::string& val_preds_path,
                       const std::string& val_labels_path,
                       const std::string& test_preds_path,
                       const std::string& calibration_mode,
                       std::vector<std::string>* warnings) {
  auto val_loaded = psa::io::read_predictions_any(val_preds_path);
  auto test_loaded = psa::io::read_predictions_any(test_preds_path);
  if (val_loaded.cols() != test_loaded.cols())
    throw psa::ValidationError("K mismatch between " + val_preds_path + " and " +
                               test_preds_path);
  auto raw_labels = psa::io::read_labels_csv(val_labels_path);
  psa::LabelVector val_labels(std::move(raw_labels), val_loaded.cols());
  if (val_labels.size() != (val_loaded.preds ? val_loaded.preds->rows()
                                             : val_loaded.logits->rows()))
    throw psa::ValidationError("row count mismatch between " + val_preds_path +
                               " and " + val_labels_path);

  if (calibration_mode == "none") {
    return {to_predictions(val_loaded), to_predictions(test_loaded),
            std::move(val_labels)};
  }
  const psa::LogitMatrix val_logits = to_logits(val_loaded);
  const psa::LogitMatrix test_logits = to_logits(test_loaded);
  const psa::CalibrationParams params =
      calibration_mode == "ts" ? psa::fit_temperature(val_logits, val_labels, warnings)
                               : psa::fit_bcts(val_logits, val_labels, warnings);
  return {psa::apply_calibration(val_logits, params),
          psa::apply_calibration(test_logits, params), std::move(val_labels)};
}

psa::PriorVector resolve_train_priors(const std::string& source,
                                      const psa::PredictionMatrix& val_preds,
                                      const psa::LabelVector& val_labels) {
  if (source == "counts")
    return psa::estimate_train_priors_counts(val_labels, val_labels.num_classes());
  if (source == "predictions")
    return psa::estimate_train_priors_predictions(val_preds);
  auto loaded = psa::io::read_priors_json(source);
  if (!loaded.priors)
    throw psa::ValidationError(source + ": train-prior file must contain 'priors'");
  return psa::PriorVector(*loaded.priors);
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed, std::size_t n_train,
              std::size_t n_val, std::size_t n_test, const std::string& train_priors,
              const std::string& val_priors, const std::string& test_priors,
              double slope, double intercept, double mean0, double mean1,
              double sigma) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const psa::GaussianPair pair{mean0, mean1, sigma};
  const psa::LogisticClassifier clf{slope, intercept};

  const struct Split {
    const char* name;
    std::string priors;
    std::size_t n;
    std::uint64_t salt;
  } splits[] = {
      {"train", train_priors, n_train, 1},
      {"val", val_priors, n_val, 2},
      {"test", test_priors, n_test, 3},
  };
  for (const auto& split : splits) {
    const psa::PriorVector priors(parse_prior_list(split.priors));
    const psa::Dataset data =
        psa::generate_dataset(pair, priors, split.n, seed + split.salt);
    auto [preds, logits] = psa::classifier_predictions(clf, data.x);
    const std::string base = out_dir + "/" + split.name;
    psa::io::write_predictions_csv(base + "_preds.csv", preds);
    psa::io::write_logits_csv(base + "_logits.csv", logits);
    psa::io::write_labels_csv(base + "_labels.csv", data.labels);
  }

  const psa::ConfusionMatrix hard = psa::true_confusion_matrix(pair, clf);
  const psa::ConfusionMatrix soft = psa::true_soft_confusion_matrix(pair, clf);
  json cm_json;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cm_json["hard"][i][j] = hard(i, j);
      cm_json["soft"][i][j] = soft(i, j);
    }
  cm_json["K"] = 2;
  std::ofstream out(out_dir + "/true_cm.json");
  out << cm_json.dump(2) << "\n";
  std::cout << "wrote " << out_dir << "/{train,val,test}_{preds,logits,labels} and true_cm.json\n";
  return 0;
}

int cmd_calibrate(const std::string& logits_path, const std::string& labels_path,
                  const std::string& mode, const std::string& out_path) {
  auto loaded = psa::io::read_predictions_any(logits_path);
  const psa::LogitMatrix logits = to_logits(loaded);
  psa::LabelVector labels(psa::io::read_labels_csv(labels_path), logits.cols());
  if (labels.size() != logits.rows())
    throw psa::ValidationError("row count mismatch between " + logits_path +
                               " and " + labels_path);

  std::vector<std::string> warnings;
  psa::CalibrationParams params = psa::CalibrationParams::identity(logits.cols());
  if (mode == "ts") params = psa::fit_temperature(logits, labels, &warnings);
  else if (mode == "bcts") params = psa::fit_bcts(logits, labels, &warnings);
  print_warnings(warnings);

  const double nll_before = psa::calibration_nll(
      logits, labels, psa::CalibrationParams::identity(logits.cols()));
  const double nll_after = psa::calibration_nll(logits, labels, params);
  psa::io::write_calibration_json(out_path, params);
  std::cout << json{{"mode", mode},
                    {"temperature", params.temperature},
                    {"nll_before", nll_before},
                    {"nll_after", nll_after}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_estimate(const std::string& val_preds_path, const std::string& val_labels_path,
                 const std::string& test_preds_path, const CommonFlags& flags,
                 const std::string& oracle_path, const std::string& out_path) {
  std::vector<std::string> warnings;
  const psa::Method method = psa::parse_method(flags.method);
  Pipeline pipe = load_pipeline(val_preds_path, val_labels_path, test_preds_path,
                                flags.calibration, &warnings);

  psa::EstimatorContext ctx;
  ctx.val_preds = &pipe.val_preds;
  ctx.val_labels = &pipe.val_labels;
  ctx.test_preds = &pipe.test_preds;
  ctx.train_priors =
      resolve_train_priors(flags.train_priors, pipe.val_preds, pipe.val_labels);
  if (!oracle_path.empty()) {
    auto loaded = psa::io::read_priors_json(oracle_path);
    if (!loaded.priors)
      throw psa::ValidationError(oracle_path + ": oracle file must contain 'priors'");
    ctx.oracle_priors = psa::PriorVector(*loaded.priors);
  }
  ctx.hyper = psa::DirichletHyperPrior{flags.alpha};
  ctx.opts = solver_options(flags);
  ctx.warnings = &warnings;

  const psa::EstimationResult result = psa::run_estimator(method, ctx);
  print_warnings(warnings);
  const bool is_ratio = result.weights.has_value();
  if (!out_path.empty())
    psa::io::write_report_json(out_path, result.report, is_ratio);
  std::cout << psa::io::report_to_json(result.report, is_ratio) << "\n";
  return 0;
}

int cmd_adapt(const std::string& test_preds_path, const std::string& priors_path,
              const CommonFlags& flags, const std::string& val_preds_path,
              const std::string& val_labels_path, const std::string& out_path) {
  auto test_loaded = psa::io::read_predictions_any(test_preds_path);
  const psa::PredictionMatrix test_preds = to_predictions(test_loaded);
  const auto target = psa::io::read_priors_json(priors_path);

  std::vector<std::string> warnings;
  psa::PredictionMatrix adapted = [&] {
    if (target.weights)
      return psa::adapt_predictions_ratio(test_preds, *target.weights, &warnings);
    psa::PriorVector train = [&]() -> psa::PriorVector {
      if (flags.train_priors == "counts" || flags.train_priors == "predictions") {
        if (val_preds_path.empty() || val_labels_path.empty())
          throw psa::ValidationError(
              "--val-preds and --val-labels are required to derive train priors; "
              "or pass --train-priors FILE");
        auto val_loaded = psa::io::read_predictions_any(val_preds_path);
        const psa::PredictionMatrix val_preds = to_predictions(val_loaded);
        psa::LabelVector val_labels(psa::io::read_labels_csv(val_labels_path),
                                    val_preds.cols());
        return resolve_train_priors(flags.train_priors, val_preds, val_labels);
      }
      auto loaded = psa::io::read_priors_json(flags.train_priors);
      if (!loaded.priors)
        throw psa::ValidationError(flags.train_priors +
                                   ": train-prior file must contain 'priors'");
      return psa::PriorVector(*loaded.priors);
    }();
    return psa::adapt_predictions(test_preds, train,
                                  psa::PriorVector(*target.priors));
  }();
  print_warnings(warnings);
  psa::io::write_predictions_csv(out_path, adapted);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& preds_path, const std::string& labels_path) {
  auto loaded = psa::io::read_predictions_any(preds_path);
  const psa::PredictionMatrix preds = to_predictions(loaded);
  psa::LabelVector labels(psa::io::read_labels_csv(labels_path), preds.cols());
  const double acc = psa::evaluate_accuracy(preds, labels);
  std::cout << json{{"accuracy", acc}, {"n", preds.rows()}}.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& val_preds_path, const std::string& val_labels_path,
              const std::string& test_preds_path, const std::string& test_labels_path,
              const CommonFlags& flags, const std::string& sizes_arg,
              std::size_t repeats, const std::string& oracle_path,
              const std::string& out_path) {
  std::vector<std::string> warnings;
  const psa::Method method = psa::parse_method(flags.method);
  Pipeline pipe = load_pipeline(val_preds_path, val_labels_path, test_preds_path,
                                flags.calibration, &warnings);
  psa::LabelVector test_labels(psa::io::read_labels_csv(test_labels_path),
                               pipe.test_preds.cols());
  if (test_labels.size() != pipe.test_preds.rows())
    throw psa::ValidationError("row count mismatch between " + test_preds_path +
                               " and " + test_labels_path);

  std::vector<std::size_t> sizes;
  for (double v : parse_prior_list(sizes_arg))
    sizes.push_back(static_cast<std::size_t>(v));

  psa::EstimatorContext ctx;
  ctx.val_preds = &pipe.val_preds;
  ctx.val_labels = &pipe.val_labels;
  ctx.test_preds = &pipe.test_preds;
  ctx.train_priors =
      resolve_train_priors(flags.train_priors, pipe.val_preds, pipe.val_labels);
  if (!oracle_path.empty()) {
    auto loaded = psa::io::read_priors_json(oracle_path);
    if (loaded.priors) ctx.oracle_priors = psa::PriorVector(*loaded.priors);
  }
  ctx.hyper = psa::DirichletHyperPrior{flags.alpha};
  ctx.opts = solver_options(flags);
  ctx.warnings = &warnings;

  const auto rows = psa::run_sweep(method, ctx, test_labels, sizes, repeats, flags.seed);
  print_warnings(warnings);
  const std::string csv = psa::sweep_to_csv(rows);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw psa::ValidationError(out_path + ": cannot open file for writing");
    out << csv;
  }
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prior-shift estimation and classifier adaptation"};
  app.require_subcommand(1);

  CommonFlags flags;

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the two-Gaussian testbed");
  std::string out_dir = "synth_out";
  std::size_t n_train = 10000, n_val = 5000, n_test = 20000;
  std::string train_p = "0.5,0.5", val_p = "0.5,0.5", test_p = "0.5,0.5";
  double slope = 1.0, intercept = 0.0, mean0 = -2.0, mean1 = 2.0, sigma = 2.0;
  synth->add_option("--out-dir", out_dir);
  synth->add_option("--seed", flags.seed);
  synth->add_option("--n-train", n_train);
  synth->add_option("--n-val", n_val);
  synth->add_option("--n-test", n_test);
  synth->add_option("--train-split-priors", train_p, "Comma-separated priors");
  synth->add_option("--val-split-priors", val_p);
  synth->add_option("--test-split-priors", test_p);
  synth->add_option("--slope", slope, "Logistic slope a");
  synth->add_option("--intercept", intercept, "Logistic intercept b");
  synth->add_option("--mean0", mean0);
  synth->add_option("--mean1", mean1);
  synth->add_option("--sigma", sigma);

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Fit TS/BCTS on validation logits");
  std::string cal_logits, cal_labels, cal_mode = "bcts", cal_out = "calibration.json";
  calibrate->add_option("--val-logits", cal_logits)->required();
  calibrate->add_option("--val-labels", cal_labels)->required();
  calibrate->add_option("--mode", cal_mode)->check(CLI::IsMember({"none", "ts", "bcts"}));
  calibrate->add_option("--out", cal_out);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate test priors or prior ratio");
  std::string est_val_preds, est_val_labels, est_test_preds, est_oracle, est_out;
  estimate->add_option("--val-preds", est_val_preds)->required();
  estimate->add_option("--val-labels", est_val_labels)->required();
  estimate->add_option("--test-preds", est_test_preds)->required();
  estimate->add_option("--method", flags.method);
  estimate->add_option("--oracle-priors", est_oracle);
  estimate->add_option("--out", est_out);
  add_solver_flags(estimate, flags);

  // adapt
  auto* adapt = app.add_subcommand("adapt", "Adapt predictions to priors or weights");
  std::string adapt_test, adapt_priors, adapt_out = "adapted.csv";
  std::string adapt_val_preds, adapt_val_labels;
  adapt->add_option("--test-preds", adapt_test)->required();
  adapt->add_option("--priors", adapt_priors, "JSON with 'priors' or 'weights'")->required();
  adapt->add_option("--val-preds", adapt_val_preds);
  adapt->add_option("--val-labels", adapt_val_labels);
  adapt->add_option("--train-priors", flags.train_priors);
  adapt->add_option("--out", adapt_out);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Accuracy of predictions vs labels");
  std::string eval_preds, eval_labels;
  evaluate->add_option("--preds", eval_preds)->required();
  evaluate->add_option("--labels", eval_labels)->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sample-size sweep of estimation quality");
  std::string sw_val_preds, sw_val_labels, sw_test_preds, sw_test_labels;
  std::string sw_sizes = "10,100,1000", sw_oracle, sw_out;
  std::size_t sw_repeats = 20;
  sweep->add_option("--val-preds", sw_val_preds)->required();
  sweep->add_option("--val-labels", sw_val_labels)->required();
  sweep->add_option("--test-preds", sw_test_preds)->required();
  sweep->add_option("--test-labels", sw_test_labels)->required();
  sweep->add_option("--method", flags.method);
  sweep->add_option("--sizes", sw_sizes, "Comma-separated subsample sizes");
  sweep->add_option("--repeats", sw_repeats);
  sweep->add_option("--oracle-priors", sw_oracle);
  sweep->add_option("--out", sw_out);
  add_solver_flags(sweep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed())
      return cmd_synth(out_dir, flags.seed, n_train, n_val, n_test, train_p, val_p,
                       test_p, slope, intercept, mean0, mean1, sigma);
    if (calibrate->parsed())
      return cmd_calibrate(cal_logits, cal_labels, cal_mode, cal_out);
    if (estimate->parsed())
      return cmd_estimate(est_val_preds, est_val_labels, est_test_preds, flags,
                          est_oracle, est_out);
    if (adapt->parsed())
      return cmd_adapt(adapt_test, adapt_priors, flags, adapt_val_preds,
                       adapt_val_labels, adapt_out);
    if (evaluate->parsed()) return cmd_evaluate(eval_preds, eval_labels);
    if (sweep->parsed())
      return cmd_sweep(sw_val_preds, sw_val_labels, sw_test_preds, sw_test_labels,
                       flags, sw_sizes, sw_repeats, sw_oracle, sw_out);
  } catch (const psa::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const psa::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const psa::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
