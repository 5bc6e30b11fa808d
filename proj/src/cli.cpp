#include "stackboost/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "stackboost/csv.hpp"
#include "stackboost/diagnostics.hpp"
#include "stackboost/harness.hpp"
#include "stackboost/model_io.hpp"
#include "stackboost/version.hpp"

namespace stackboost::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

int input_exit_code(ErrorKind kind) {
  return (kind == ErrorKind::kParse || kind == ErrorKind::kNonFinite) ? kExitParse : kExitDimensions;
}

std::string fmt(double v, int precision = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string method_names() {
  std::string out;
  for (Method m : kAllMethods) {
    if (!out.empty()) out += ' ';
    out += to_string(m);
  }
  return out;
}

std::string stop_names() {
  std::string out;
  for (CriterionKind c : kAllCriteria) {
    out += to_string(c);
    out += ' ';
  }
  out += to_string(StopKind::ICM);
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

MethodSpec usage_method(const std::string& method_name, const std::string& stop_name) {
  const auto method = parse_method(method_name);
  if (!method) fail(kExitUsage, "unknown method '" + method_name + "' (methods: " + method_names() + ")");
  std::optional<StopKind> stop;
  if (!stop_name.empty()) {
    stop = parse_stop(stop_name);
    if (!stop) fail(kExitUsage, "unknown stop criterion '" + stop_name + "' (stops: " + stop_names() + ")");
  }
  try {
    return make_method_spec(*method, stop);
  } catch (const Error& e) {
    fail(kExitUsage, e.what());
  }
}

std::vector<MethodSpec> usage_methods(const std::vector<std::string>& labels) {
  std::vector<MethodSpec> specs;
  for (const auto& label : split_list(labels)) {
    const auto dash = label.find('-');
    specs.push_back(usage_method(label.substr(0, dash), dash == std::string::npos ? "" : label.substr(dash + 1)));
  }
  return specs;
}

Confidence usage_confidence(double level) {
  if (std::fabs(level - 0.05) < 1e-12) return Confidence::k95;
  if (std::fabs(level - 0.10) < 1e-12) return Confidence::k90;
  fail(kExitUsage, "confidence level must be 0.05 or 0.10");
}

template <typename F>
auto read_input(F&& reader) {
  try {
    return reader();
  } catch (const Error& e) {
    fail(input_exit_code(e.kind()), e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content) || !f.flush()) fail(kExitParse, "cannot write '" + path + "'");
}

/// Text goes to --output (or stdout); the CSV goes to --csv, or next to --output.
void emit(std::ostream& out, const std::string& output, const std::string& csv_path, const std::string& text,
          const std::string& csv) {
  if (output.empty()) {
    out << text;
  } else {
    write_file(output, text);
  }
  std::string target = csv_path;
  if (target.empty() && !output.empty()) {
    const auto dot = output.rfind('.');
    const auto slash = output.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    target = (has_ext ? output.substr(0, dot) : output) + ".csv";
    if (target == output) target += ".csv";
  }
  if (!target.empty()) write_file(target, csv);
}

std::string csv_text(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) write_csv_row(out, row);
  return out.str();
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + ' ' : s + std::string(width - s.size(), ' ');
}

struct CommonOutput {
  std::string output;
  std::string csv;
};

void add_output(CLI::App* cmd, CommonOutput& o, const char* what) {
  cmd->add_option("-o,--output", o.output, what);
  cmd->add_option("--csv", o.csv, "CSV file for the tabular output (default: next to --output)");
}

// fit ------------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string method;
  std::string stop;
  int max_stages = 10000;
  CommonOutput out;
};

void cmd_fit(const FitArgs& a, std::ostream& out) {
  const MethodSpec spec = usage_method(a.method, a.stop);
  if (a.max_stages < 1) fail(kExitUsage, "--max-stages must be >= 1");
  const auto [X, y] = read_input([&] { return read_prediction_csv_file(a.input); });
  MethodOptions opts;
  opts.max_stages = a.max_stages;
  ModelDocument doc{spec, kVersion, {}};
  try {
    doc.model = fit_method(spec, X, y, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kDimensionMismatch || e.kind() == ErrorKind::kEmpty) fail(kExitDimensions, e.what());
    fail(kExitMethod, "method '" + spec.label() + "' failed: " + e.what());
  }
  std::vector<std::vector<std::string>> rows{{"model", "weight"}};
  for (const auto& [id, w] : doc.model.weights) rows.push_back({id, format_double(w)});
  rows.push_back({"(bias)", format_double(doc.model.bias)});
  emit(out, a.out.output, a.out.csv, to_json(doc), csv_text(rows));
}

// evaluate ---------------------------------------------------------------------

const std::vector<std::string> kDefaultMethods = {"best", "bem", "iew", "gem", "ols", "caruana",
                                                  "fsr-aicc", "pcr-aicc", "pls-aicc", "boost-icm",
                                                  "rboost-icm"};

struct PipelineArgs {
  std::vector<std::string> methods = kDefaultMethods;
  std::string sampler = "rs";
  int trials = 36;
  std::uint64_t seed = 0;
  int folds = 3;
  double train_fraction = 2.0 / 3.0;
};

void add_pipeline(CLI::App* cmd, PipelineArgs& p) {
  cmd->add_option("-m,--methods", p.methods,
                  "Method labels, 'method' or 'method-stop' (e.g. rboost-icm); comma separated")
      ->capture_default_str();
  cmd->add_option("--sampler", p.sampler, "Hyperparameter sampler: gs or rs")->capture_default_str();
  cmd->add_option("--trials", p.trials, "Number of Ridge trials (columns of the prediction matrix)")
      ->capture_default_str();
  cmd->add_option("--seed", p.seed, "Seed for splits, folds and sampling")->capture_default_str();
  cmd->add_option("--folds", p.folds, "Inner cross-validation folds")->capture_default_str();
  cmd->add_option("--train-fraction", p.train_fraction, "Outer train share")->capture_default_str();
}

struct Pipeline {
  std::vector<MethodSpec> methods;
  std::vector<HyperparameterTrial> trials;
  EvaluationConfig cfg;
};

Pipeline make_pipeline(const PipelineArgs& p) {
  Pipeline out;
  out.methods = usage_methods(p.methods);
  if (out.methods.empty()) fail(kExitUsage, "no methods given");
  const auto sampler = parse_sampler(p.sampler);
  if (!sampler) fail(kExitUsage, "unknown sampler '" + p.sampler + "' (samplers: gs rs)");
  if (p.trials < 1) fail(kExitUsage, "--trials must be >= 1");
  if (p.folds < 2) fail(kExitUsage, "--folds must be >= 2");
  if (!(p.train_fraction > 0.0 && p.train_fraction < 1.0)) fail(kExitUsage, "--train-fraction must be in (0, 1)");
  out.trials = sample_trials(*sampler, p.trials, p.seed);
  out.cfg.train_fraction = p.train_fraction;
  out.cfg.inner_folds = p.folds;
  out.cfg.seed = p.seed;
  return out;
}

std::vector<MethodScore> run_pipeline(const Dataset& ds, const Pipeline& pl) {
  try {
    return evaluate_methods(ds, pl.trials, pl.methods, pl.cfg);
  } catch (const Error& e) {
    fail(kExitMethod, e.what());
  }
}

struct EvaluateArgs {
  std::string input;
  PipelineArgs pipeline;
  CommonOutput out;
};

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Pipeline pl = make_pipeline(a.pipeline);
  const Dataset ds = read_input([&] { return read_dataset_csv_file(a.input); });
  const auto scores = run_pipeline(ds, pl);

  std::ostringstream text;
  text << "dataset: " << ds.name << " (" << ds.rows() << " rows, " << ds.features.cols() << " features)\n";
  text << "trials: " << pl.trials.size() << "  seed: " << pl.cfg.seed << "\n\n";
  text << pad("method", 16) << "relative_mse\n";
  std::vector<std::vector<std::string>> rows{{"method", "relative_mse"}};
  for (const auto& s : scores) {
    text << pad(s.method, 16) << fmt(s.relative_mse, 8) << '\n';
    rows.push_back({s.method, format_double(s.relative_mse)});
  }
  emit(out, a.out.output, a.out.csv, text.str(), csv_text(rows));
}

// compare ----------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> inputs;
  int suite = 0;
  std::uint64_t suite_seed = 0;
  double confidence = 0.05;
  PipelineArgs pipeline;
  CommonOutput out;
};

void cmd_compare(const CompareArgs& a, std::ostream& out) {
  const Pipeline pl = make_pipeline(a.pipeline);
  const Confidence conf = usage_confidence(a.confidence);
  if (pl.methods.size() < 2) fail(kExitUsage, "compare needs at least 2 methods");
  if (a.suite < 0) fail(kExitUsage, "--suite must be >= 0");

  std::vector<Dataset> datasets;
  for (const auto& path : a.inputs) datasets.push_back(read_input([&] { return read_dataset_csv_file(path); }));
  for (auto& ds : make_collinear_suite(a.suite, a.suite_seed)) datasets.push_back(std::move(ds));
  if (datasets.size() < 2) fail(kExitUsage, "compare needs at least 2 datasets");

  const auto m = static_cast<Eigen::Index>(pl.methods.size());
  const auto N = static_cast<Eigen::Index>(datasets.size());
  Eigen::MatrixXd errors(m, N);
  for (Eigen::Index d = 0; d < N; ++d) {
    const auto scores = run_pipeline(datasets[static_cast<std::size_t>(d)], pl);
    for (Eigen::Index i = 0; i < m; ++i) errors(i, d) = scores[static_cast<std::size_t>(i)].relative_mse;
  }
  const RankTable table = friedman_ranks(errors, conf);

  std::vector<std::string> labels;
  for (const auto& spec : pl.methods) labels.push_back(spec.label());

  std::ostringstream text;
  text << "methods: " << m << "  datasets: " << N << "  confidence: " << (conf == Confidence::k90 ? "0.10" : "0.05")
       << "\n\n";
  text << pad("method", 16) << "mean_rank\n";
  for (Eigen::Index i = 0; i < m; ++i) {
    text << pad(labels[static_cast<std::size_t>(i)], 16) << fmt(table.mean_ranks(i), 4) << '\n';
  }
  text << "\nfriedman_statistic: " << fmt(table.friedman_statistic) << '\n';
  text << "critical_difference: " << fmt(table.nemenyi_cd) << '\n';
  text << "\npairs with mean-rank gap above CD:\n";
  bool any = false;
  if (std::isfinite(table.nemenyi_cd)) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i + 1; j < m; ++j) {
        const double gap = std::fabs(table.mean_ranks(i) - table.mean_ranks(j));
        if (gap > table.nemenyi_cd) {
          const bool i_better = table.mean_ranks(i) < table.mean_ranks(j);
          const auto& better = labels[static_cast<std::size_t>(i_better ? i : j)];
          const auto& worse = labels[static_cast<std::size_t>(i_better ? j : i)];
          text << "  " << better << " < " << worse << "  (gap " << fmt(gap, 4) << ")\n";
          any = true;
        }
      }
    }
  }
  if (!any) text << "  none\n";

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"method", "mean_rank", "friedman_statistic", "critical_difference"};
  for (const auto& ds : datasets) header.push_back("error:" + ds.name);
  for (const auto& ds : datasets) header.push_back("rank:" + ds.name);
  rows.push_back(header);
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<std::string> row{labels[static_cast<std::size_t>(i)], format_double(table.mean_ranks(i)),
                                 format_double(table.friedman_statistic), format_double(table.nemenyi_cd)};
    for (Eigen::Index d = 0; d < N; ++d) row.push_back(format_double(table.errors(i, d)));
    for (Eigen::Index d = 0; d < N; ++d) row.push_back(format_double(table.ranks(i, d)));
    rows.push_back(std::move(row));
  }
  emit(out, a.out.output, a.out.csv, text.str(), csv_text(rows));
}

// vif --------------------------------------------------------------------------

struct VifArgs {
  std::string input;
  CommonOutput out;
};

void cmd_vif(const VifArgs& a, std::ostream& out) {
  const auto [X, y] = read_input([&] { return read_prediction_csv_file(a.input); });
  VifReport report;
  try {
    report = vif(X);
  } catch (const Error& e) {
    fail(input_exit_code(e.kind()), e.what());
  }
  const char* bucket_names[] = {"[1,5)", "[5,10)", "[10,1000)", "[1000,inf)"};
  std::ostringstream text;
  text << "columns: " << X.cols() << "  rows: " << X.rows() << "\n\n";
  text << pad("vif", 12) << "percent\n";
  for (std::size_t b = 0; b < report.bucket_counts.size(); ++b) {
    text << pad(bucket_names[b], 12) << fmt(100.0 * report.bucket_fraction(b), 4) << "%\n";
  }
  text << "\nabove 10: " << fmt(100.0 * report.fraction_above(10.0), 4) << "%\n";

  std::vector<std::vector<std::string>> rows{{"model", "vif", "bucket"}};
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double v = report.vif[static_cast<std::size_t>(j)];
    std::size_t b = 0;
    while (b < report.thresholds.size() && v >= report.thresholds[b]) ++b;
    rows.push_back({X.id(j), std::isinf(v) ? "inf" : format_double(v), bucket_names[b]});
  }
  emit(out, a.out.output, a.out.csv, text.str(), csv_text(rows));
}

// generate ---------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "redundant";
  Eigen::Index rows = 120;
  Eigen::Index features = 8;
  double noise = 0.5;
  double offset = 5.0;
  std::uint64_t seed = 0;
  std::string output;
  std::string matrix;
  std::string sampler = "rs";
  int trials = 36;
  int folds = 3;
};

void cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto kind = parse_synthetic_kind(a.kind);
  if (!kind) fail(kExitUsage, "unknown generator '" + a.kind + "' (generators: linear redundant underfit)");
  const auto sampler = parse_sampler(a.sampler);
  if (!sampler) fail(kExitUsage, "unknown sampler '" + a.sampler + "' (samplers: gs rs)");
  if (a.trials < 1) fail(kExitUsage, "--trials must be >= 1");
  if (!(a.noise >= 0.0)) fail(kExitUsage, "--noise must be >= 0");
  Dataset ds;
  try {
    ds = make_synthetic(SyntheticSpec{*kind, a.rows, a.features, a.noise, a.offset, a.seed});
  } catch (const Error& e) {
    fail(kExitUsage, e.what());
  }
  std::ostringstream data;
  write_dataset_csv(data, ds);
  if (a.output.empty()) {
    out << data.str();
  } else {
    write_file(a.output, data.str());
  }
  if (!a.matrix.empty()) {
    const auto trials = sample_trials(*sampler, a.trials, a.seed);
    std::ostringstream matrix;
    try {
      const auto plan = make_cv_plan(ds.rows(), a.folds, a.seed);
      const auto [X, y] = build_prediction_matrix(ds, trials, plan);
      write_prediction_csv(matrix, X, y);
    } catch (const Error& e) {
      fail(kExitUsage, e.what());
    }
    write_file(a.matrix, matrix.str());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stacking ensembles over hyperparameter-search prediction matrices", "stackboost-cli"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.footer("methods: " + method_names() + "\nstops: " + stop_names() +
             "\n(icm applies to boost and rboost only; the other stops apply to fsr, pcr, pls, boost, rboost)");

  std::vector<std::string> method_choices;
  for (Method m : kAllMethods) method_choices.emplace_back(to_string(m));
  std::vector<std::string> stop_choices;
  for (CriterionKind c : kAllCriteria) stop_choices.emplace_back(to_string(c));
  stop_choices.emplace_back(to_string(StopKind::ICM));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one meta-learner on a prediction-matrix CSV");
  fit_cmd->add_option("-i,--input", fit.input, "Prediction-matrix CSV (last column __target__)")->required();
  fit_cmd->add_option("-m,--method", fit.method, "Method")->required()->check(CLI::IsMember(method_choices));
  fit_cmd->add_option("-s,--stop", fit.stop, "Stop criterion")->check(CLI::IsMember(stop_choices));
  fit_cmd->add_option("--max-stages", fit.max_stages, "Stage cap for boost/rboost")->capture_default_str();
  add_output(fit_cmd, fit.out, "Model document path (default: stdout)");

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Relative test MSE of each method on one dataset CSV");
  eval_cmd->add_option("-i,--input", evaluate.input, "Dataset CSV (last column is the target)")->required();
  add_pipeline(eval_cmd, evaluate.pipeline);
  add_output(eval_cmd, evaluate.out, "Text report path (default: stdout)");

  CompareArgs compare;
  auto* cmp_cmd = app.add_subcommand("compare", "Friedman ranks and Nemenyi critical difference over datasets");
  cmp_cmd->add_option("-i,--inputs", compare.inputs, "Dataset CSVs");
  cmp_cmd->add_option("--suite", compare.suite, "Number of bundled synthetic datasets to add")->capture_default_str();
  cmp_cmd->add_option("--suite-seed", compare.suite_seed, "Seed of the synthetic suite")->capture_default_str();
  cmp_cmd->add_option("--confidence", compare.confidence, "Significance level: 0.05 or 0.10")->capture_default_str();
  add_pipeline(cmp_cmd, compare.pipeline);
  add_output(cmp_cmd, compare.out, "Text report path (default: stdout)");

  VifArgs vif_args;
  auto* vif_cmd = app.add_subcommand("vif", "Variance inflation factors of a prediction-matrix CSV");
  vif_cmd->add_option("-i,--input", vif_args.input, "Prediction-matrix CSV")->required();
  add_output(vif_cmd, vif_args.out, "Text report path (default: stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset and optionally its prediction matrix");
  gen_cmd->add_option("--kind", gen.kind, "linear, redundant or underfit")->capture_default_str();
  gen_cmd->add_option("--rows", gen.rows, "Rows")->capture_default_str();
  gen_cmd->add_option("--features", gen.features, "Features")->capture_default_str();
  gen_cmd->add_option("--noise", gen.noise, "Noise sd relative to the signal sd")->capture_default_str();
  gen_cmd->add_option("--offset", gen.offset, "Target level")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Dataset CSV path (default: stdout)");
  gen_cmd->add_option("--matrix", gen.matrix, "Also write the cross-validated Ridge prediction matrix here");
  gen_cmd->add_option("--sampler", gen.sampler, "gs or rs")->capture_default_str();
  gen_cmd->add_option("--trials", gen.trials, "Ridge trials")->capture_default_str();
  gen_cmd->add_option("--folds", gen.folds, "Cross-validation folds")->capture_default_str();

  std::vector<const char*> argv{"stackboost-cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fit_cmd) cmd_fit(fit, out);
    if (*eval_cmd) cmd_evaluate(evaluate, out);
    if (*cmp_cmd) cmd_compare(compare, out);
    if (*vif_cmd) cmd_vif(vif_args, out);
    if (*gen_cmd) cmd_generate(gen, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitMethod;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace stackboost::cli
