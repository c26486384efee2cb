// splitkit: optimal train/test splitting via support points, with baseline
// splitters and benchmark studies. See README.md for the full interface.

#include "splitkit/serialize.hpp"
#include "splitkit/splitkit.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;

// Positions of `subset` rows (original numbering) inside the sorted row
// universe `universe`.
std::vector<splitkit::Index> remap_local(const std::vector<splitkit::Index>& universe,
                                         const std::vector<splitkit::Index>& subset) {
  std::vector<splitkit::Index> out;
  out.reserve(subset.size());
  for (splitkit::Index r : subset) {
    const auto it = std::lower_bound(universe.begin(), universe.end(), r);
    if (it == universe.end() || *it != r)
      throw std::runtime_error("split JSON does not match the dataset");
    out.push_back(static_cast<splitkit::Index>(it - universe.begin()));
  }
  return out;
}

struct SolverFlags {
  std::uint64_t seed = 1;
  int max_iter = 500;
  double tol = 1e-8;
  int workers = 1;
  bool strict = false;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Seed for the solver / sampler");
    app->add_option("--max-iter", max_iter, "Support-point solver iteration cap");
    app->add_option("--tol", tol, "Solver convergence tolerance (max point displacement)");
    app->add_option("--workers", workers, "Solver worker threads (result-invariant)");
    app->add_flag("--strict", strict, "Exit with status 3 when the solver did not converge");
  }

  splitkit::SolverConfig config() const {
    splitkit::SolverConfig cfg;
    cfg.seed = seed;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.workers = workers;
    return cfg;
  }
};

struct SchemaFlags {
  std::vector<std::string> categorical;
  std::vector<std::string> ordinal;

  void attach(CLI::App* app) {
    app->add_option("--categorical", categorical,
                    "Comma-separated column names to treat as categorical")
        ->delimiter(',');
    app->add_option("--ordinal", ordinal,
                    "Ordinal column as name=score1,score2,... (scores follow the "
                    "first-appearance order of the levels; omit '=...' for 1..m)");
  }

  splitkit::SchemaSpec spec() const {
    splitkit::SchemaSpec s;
    s.categorical = categorical;
    for (const auto& decl : ordinal) {
      const auto eq = decl.find('=');
      if (eq == std::string::npos) {
        s.ordinal[decl] = {};
        continue;
      }
      std::vector<double> scores;
      std::stringstream ss(decl.substr(eq + 1));
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        double v = 0.0;
        if (!splitkit::detail::parse_number(tok, v))
          throw std::runtime_error("bad ordinal score '" + tok + "' in --ordinal " + decl);
        scores.push_back(v);
      }
      s.ordinal[decl.substr(0, eq)] = scores;
    }
    return s;
  }
};

void print_summary(const splitkit::SplitResult& r, splitkit::Index n_rows) {
  std::cout << "method=" << r.method << " N=" << n_rows << " test=" << r.test_indices.size()
            << " train=" << r.train_indices.size() << " energy=" << r.diagnostics.energy
            << " objective=" << r.diagnostics.objective;
  if (r.method == "split" || r.method == "validation")
    std::cout << " iterations=" << r.diagnostics.iterations
              << " converged=" << (r.diagnostics.converged ? "yes" : "no");
  std::cout << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Optimal data splitting with support points"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // --- split ---------------------------------------------------------------
  auto* cmd_split = app.add_subcommand("split", "Split a CSV into test/train files");
  std::string data_path, test_out, train_out, json_out, method = "split", coding = "helmert";
  std::string label_column;
  double gamma = 0.2;
  SolverFlags solver;
  SchemaFlags schema;
  cmd_split->add_option("--data", data_path, "Input CSV with a header row")->required();
  cmd_split->add_option("--ratio", gamma, "Requested testing fraction in (0,1)")->required();
  cmd_split->add_option("--test-out", test_out, "Output CSV for the testing rows")->required();
  cmd_split->add_option("--train-out", train_out, "Output CSV for the training rows")->required();
  cmd_split->add_option("--method", method, "split|random|stratified|cadex|duplex")
      ->check(CLI::IsMember({"split", "random", "stratified", "cadex", "duplex"}));
  cmd_split->add_option("--coding", coding, "helmert|treatment|sum|polynomial")
      ->check(CLI::IsMember({"helmert", "treatment", "sum", "polynomial"}));
  cmd_split->add_option("--label", label_column,
                        "Stratification column (method=stratified; defaults to the only "
                        "categorical column)");
  cmd_split->add_option("--json", json_out, "Also write the split result as JSON");
  solver.attach(cmd_split);
  schema.attach(cmd_split);

  cmd_split->callback([&]() {
    const splitkit::Dataset data = splitkit::load_csv(data_path, schema.spec());
    const splitkit::CodingScheme scheme = splitkit::coding_from_name(coding);
    splitkit::SplitResult result;
    if (method == "split") {
      result = splitkit::split(data, gamma, solver.config(), scheme);
    } else if (method == "random") {
      result = splitkit::random_split(data, gamma, solver.seed, scheme);
    } else if (method == "stratified") {
      std::string label = label_column;
      if (label.empty()) {
        for (const auto& s : data.schema)
          if (s.kind == splitkit::ColumnKind::Categorical) {
            if (!label.empty())
              throw std::runtime_error("stratified: several categorical columns; pass --label");
            label = s.name;
          }
        if (label.empty())
          throw std::runtime_error("stratified: no categorical column; pass --label");
      }
      result = splitkit::stratified_split(data, gamma, label, solver.seed, scheme);
    } else if (method == "cadex") {
      result = splitkit::cadex_split(data, gamma, scheme);
    } else {
      result = splitkit::duplex_split(data, gamma, scheme);
    }
    splitkit::write_split(data, result, test_out, train_out);
    if (!json_out.empty()) splitkit::write_json_file(splitkit::to_json(result), json_out);
    print_summary(result, data.rows());
    if (solver.strict && !result.diagnostics.converged) exit_code = kExitNotConverged;
  });

  // --- validate --------------------------------------------------------------
  auto* cmd_validate =
      app.add_subcommand("validate", "Carve a validation set out of an existing split");
  std::string v_data, v_split, v_json, v_valid_out, v_rest_out, v_coding = "helmert";
  splitkit::Index n_valid = 0;
  SolverFlags v_solver;
  SchemaFlags v_schema;
  cmd_validate->add_option("--data", v_data, "Input CSV (same file the split was made from)")
      ->required();
  cmd_validate->add_option("--split", v_split, "Split JSON produced by `split --json`")
      ->required();
  cmd_validate->add_option("--n-valid", n_valid, "Number of validation rows")->required();
  cmd_validate->add_option("--coding", v_coding, "helmert|treatment|sum|polynomial")
      ->check(CLI::IsMember({"helmert", "treatment", "sum", "polynomial"}));
  cmd_validate->add_option("--json", v_json, "Write the validation split as JSON");
  cmd_validate->add_option("--valid-out", v_valid_out, "Output CSV for the validation rows");
  cmd_validate->add_option("--train-out", v_rest_out, "Output CSV for the remaining training rows");
  v_solver.attach(cmd_validate);
  v_schema.attach(cmd_validate);

  cmd_validate->callback([&]() {
    const splitkit::Dataset data = splitkit::load_csv(v_data, v_schema.spec());
    const splitkit::SplitResult existing =
        splitkit::split_from_json(splitkit::read_json_file(v_split));
    const splitkit::SplitResult result = splitkit::validation_split(
        data, existing, n_valid, v_solver.config(), splitkit::coding_from_name(v_coding));
    if (!v_json.empty()) splitkit::write_json_file(splitkit::to_json(result), v_json);
    if (!v_valid_out.empty() || !v_rest_out.empty()) {
      if (v_valid_out.empty() || v_rest_out.empty())
        throw std::runtime_error("validate: pass both --valid-out and --train-out");
      splitkit::write_split(splitkit::subset_rows(data, existing.train_indices),
                            remap_local(existing.train_indices, result.test_indices),
                            remap_local(existing.train_indices, result.train_indices),
                            v_valid_out, v_rest_out);
    }
    print_summary(result, static_cast<splitkit::Index>(existing.train_indices.size()));
    if (v_solver.strict && !result.diagnostics.converged) exit_code = kExitNotConverged;
  });

  // --- kfold -----------------------------------------------------------------
  auto* cmd_kfold = app.add_subcommand("kfold", "Divide the training set into K folds");
  std::string k_data, k_split, k_json, k_coding = "helmert";
  splitkit::Index k_folds = 5;
  SolverFlags k_solver;
  SchemaFlags k_schema;
  cmd_kfold->add_option("--data", k_data, "Input CSV")->required();
  cmd_kfold->add_option("--split", k_split, "Split JSON produced by `split --json`")->required();
  cmd_kfold->add_option("--k", k_folds, "Number of folds")->required();
  cmd_kfold->add_option("--coding", k_coding, "helmert|treatment|sum|polynomial")
      ->check(CLI::IsMember({"helmert", "treatment", "sum", "polynomial"}));
  cmd_kfold->add_option("--json", k_json, "Write the fold assignment as JSON");
  k_solver.attach(cmd_kfold);
  k_schema.attach(cmd_kfold);

  cmd_kfold->callback([&]() {
    const splitkit::Dataset data = splitkit::load_csv(k_data, k_schema.spec());
    const splitkit::SplitResult existing =
        splitkit::split_from_json(splitkit::read_json_file(k_split));
    const splitkit::FoldAssignment folds =
        splitkit::kfold(data, existing.train_indices, k_folds, k_solver.config(),
                        splitkit::coding_from_name(k_coding));
    const nlohmann::json j = splitkit::to_json(folds);
    if (!k_json.empty()) splitkit::write_json_file(j, k_json);
    else std::cout << j.dump(2) << '\n';
    std::cout << "folds=" << folds.folds.size();
    for (const auto& f : folds.folds) std::cout << ' ' << f.size();
    std::cout << '\n';
  });

  // --- bench -----------------------------------------------------------------
  auto* cmd_bench = app.add_subcommand("bench", "Reproduction studies (CSV + JSON sidecar)");
  cmd_bench->require_subcommand(1);
  std::uint64_t bench_seed = 1;
  std::string bench_out;

  auto* bench_marginal = cmd_bench->add_subcommand(
      "marginal", "Marginal KS / energy comparison on bivariate-normal data");
  int marginal_reps = 20, marginal_random_reps = 100;
  bench_marginal->add_option("--reps", marginal_reps, "SPlit replicates");
  bench_marginal->add_option("--random-reps", marginal_random_reps, "Random-split replicates");
  bench_marginal->add_option("--seed", bench_seed, "Master seed");
  bench_marginal->add_option("--out", bench_out, "Output CSV path");
  bench_marginal->callback([&]() {
    splitkit::MarginalStudyConfig cfg;
    cfg.sp_reps = marginal_reps;
    cfg.random_reps = marginal_random_reps;
    cfg.seed = bench_seed;
    const splitkit::StudyReport report = splitkit::run_marginal_study(cfg);
    const std::string out = bench_out.empty() ? "marginal.csv" : bench_out;
    splitkit::write_report_csv(report, out);
    splitkit::write_json_file(splitkit::to_json(report), out + ".json");
    std::cout << "wrote " << out << " (" << report.rows.size() << " rows)\n";
  });

  auto* bench_bias =
      cmd_bench->add_subcommand("bias", "Generalization-error bias on quadratic data");
  int bias_reps = 100;
  bool bias_fixed_data = false;
  bench_bias->add_option("--reps", bias_reps, "Replicates");
  bench_bias->add_flag("--fixed-data", bias_fixed_data,
                       "Reuse one dataset across replicates instead of regenerating");
  bench_bias->add_option("--seed", bench_seed, "Master seed");
  bench_bias->add_option("--out", bench_out, "Output CSV path");
  bench_bias->callback([&]() {
    splitkit::BiasStudyConfig cfg;
    cfg.reps = bias_reps;
    cfg.fixed_data = bias_fixed_data;
    cfg.seed = bench_seed;
    const splitkit::StudyReport report = splitkit::run_bias_study(cfg);
    const std::string out = bench_out.empty() ? "bias.csv" : bench_out;
    splitkit::write_report_csv(report, out);
    splitkit::write_json_file(splitkit::to_json(report), out + ".json");
    std::cout << "wrote " << out << " (" << report.rows.size() << " rows)\n";
  });

  auto* bench_coding =
      cmd_bench->add_subcommand("coding", "Contrast-coding comparison on replicated levels");
  splitkit::Index coding_m_max = 10;
  bench_coding->add_option("--m-max", coding_m_max, "Largest level count (default 10)");
  bench_coding->add_option("--seed", bench_seed, "Master seed");
  bench_coding->add_option("--out", bench_out, "Output CSV path");
  bench_coding->callback([&]() {
    splitkit::CodingStudyConfig cfg;
    cfg.m_max = coding_m_max;
    cfg.seed = bench_seed;
    const splitkit::StudyReport report = splitkit::run_coding_study(cfg);
    const std::string out = bench_out.empty() ? "coding.csv" : bench_out;
    splitkit::write_report_csv(report, out);
    splitkit::write_json_file(splitkit::to_json(report), out + ".json");
    std::cout << "wrote " << out << " (" << report.rows.size() << " rows)\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}
