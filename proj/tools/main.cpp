// lcm: simulate, fit and compare latent class models from the command line.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcm/bench.hpp"
#include "lcm/io.hpp"
#include "lcm/simplex.hpp"
#include "lcm/simulator.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNotConverged = 3;

struct Options {
  // data selection
  std::string bundle;
  std::string data;
  std::string scheme;
  std::string params;
  bool zero_based = false;
  std::size_t n = 0;
  int components = 0;
  std::optional<std::uint64_t> data_seed;

  // solvers
  std::string method = "all";
  int restarts = 10;
  std::uint64_t seed = 0;
  std::optional<double> epsilon;
  std::optional<int> max_iter;
  int memory = 5;
  std::string sigma = "curvature";
  std::string spg_step = "standard";
  double kkt_tol = 1e-6;

  // output
  std::string out;
  std::string format = "json";
  bool ci = false;
  double level = 0.95;
  bool emit_labels = false;
  bool list = false;
  std::string registry;

  // project / report
  std::string vector;
  std::vector<std::size_t> dims;
  std::string runs;
};

std::string coordinate_label(const lcm::BlockLayout& layout, std::size_t i) {
  const std::size_t b = layout.block_of(i);
  const std::size_t pos = i - layout.blocks()[b].offset + 1;
  if (b == 0) return "eta[" + std::to_string(pos) + "]";
  const int d = layout.scheme().num_variables();
  const int k = static_cast<int>(b - 1) / d + 1;
  const int j = static_cast<int>(b - 1) % d + 1;
  return "pi[" + std::to_string(k) + "][" + std::to_string(j) + "][" + std::to_string(pos) + "]";
}

std::vector<lcm::Method> selected_methods(const std::string& name) {
  if (name == "all") return {lcm::Method::em, lcm::Method::sqp, lcm::Method::pqn};
  return {lcm::parse_method(name)};
}

lcm::SolverSettings solver_settings(const Options& o) {
  lcm::SolverSettings s;
  if (o.epsilon) {
    s.em.epsilon = *o.epsilon;
    s.pqn.epsilon = *o.epsilon;
  }
  if (o.max_iter) {
    s.em.max_iter = *o.max_iter;
    s.pqn.max_iter = *o.max_iter;
    s.sqp.max_iter = *o.max_iter;
  }
  s.pqn.memory = o.memory;
  if (o.sigma == "printed") s.pqn.sigma = lcm::SigmaConvention::printed;
  if (o.spg_step == "printed") s.pqn.spg.step = lcm::SpectralStep::printed;
  s.sqp.kkt_tol = o.kkt_tol;
  return s;
}

struct Problem {
  std::string id;
  lcm::Dataset data;
  int components;
};

Problem load_problem(const Options& o, const lcm::BundleSpec* bundle) {
  if (bundle != nullptr) {
    const std::uint64_t seed = o.data_seed.value_or(o.seed);
    return {bundle->id, lcm::sample(bundle->params, o.n > 0 ? o.n : bundle->n, seed), bundle->params.components()};
  }
  if (o.data.empty()) throw lcm::InputError("give --bundle ID or --data PATH");
  if (o.components < 1) throw lcm::InputError("--components K is required with --data");
  lcm::CsvOptions csv;
  csv.zero_based = o.zero_based;
  if (!o.scheme.empty()) csv.scheme = lcm::read_scheme_json(o.scheme);
  return {std::filesystem::path(o.data).stem().string(), lcm::read_dataset_csv(o.data, csv), o.components};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    lcm::write_text_file(o.out, text);
  }
}

int cmd_simulate(const Options& o) {
  if (o.list) {
    for (const auto& b : lcm::bundle_registry()) {
      std::cout << b.id << "  K=" << b.params.components() << "  d=" << b.scheme().num_variables()
                << "  n=" << b.n << '\n';
    }
    return 0;
  }
  if (!o.registry.empty()) {
    lcm::write_text_file(o.registry, lcm::registry_to_json(lcm::bundle_registry()) + "\n");
    if (o.bundle.empty() && o.params.empty()) return 0;
  }
  lcm::LcmParams params;
  std::size_t n = o.n;
  if (!o.params.empty()) {
    params = lcm::read_params_json(o.params);
    if (n == 0) throw lcm::InputError("--n is required with --params");
  } else if (!o.bundle.empty()) {
    const auto& b = lcm::find_bundle(o.bundle);
    params = b.params;
    if (n == 0) n = b.n;
  } else {
    throw lcm::InputError("give --bundle ID or --params PATH");
  }
  const auto sample = lcm::sample_with_labels(params, n, o.seed);
  std::ostringstream ss;
  lcm::write_dataset_csv(ss, sample.data, o.emit_labels ? &sample.labels : nullptr);
  emit(o, ss.str());
  return 0;
}

int cmd_fit(const Options& o) {
  const auto methods = selected_methods(o.method);
  if (methods.size() != 1) throw lcm::InputError("fit runs one method; use bench for --method all");
  const lcm::BundleSpec* bundle = o.bundle.empty() ? nullptr : &lcm::find_bundle(o.bundle);
  const Problem p = load_problem(o, bundle);
  const lcm::BlockLayout layout(p.components, p.data.scheme());
  const lcm::LcmParams init = o.params.empty() ? lcm::restart_init(layout, o.seed, 0) : lcm::read_params_json(o.params);
  lcm::RunRecord rec =
      lcm::run_method(methods.front(), p.data, init, solver_settings(o), lcm::derive_seed(o.seed, 0));
  rec.dataset_id = p.id;

  std::vector<lcm::Interval> intervals;
  if (o.ci) intervals = lcm::confidence_report(rec, o.level);

  std::ostringstream ss;
  const auto& values = rec.params.pack().values;
  if (o.format == "csv") {
    ss << "parameter,estimate";
    if (o.ci) ss << ",standard_error,lower,upper";
    ss << '\n';
    ss.precision(17);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      ss << coordinate_label(layout, i) << ',' << values[static_cast<Eigen::Index>(i)];
      if (o.ci) ss << ',' << intervals[i].standard_error << ',' << intervals[i].lower << ',' << intervals[i].upper;
      ss << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["dataset"] = rec.dataset_id;
    j["method"] = std::string(lcm::to_string(rec.method));
    j["iterations"] = rec.iterations;
    j["converged"] = rec.converged;
    j["status"] = rec.status;
    j["log_likelihood"] = rec.log_likelihood;
    j["params"] = nlohmann::ordered_json::parse(lcm::params_to_json(rec.params));
    if (o.ci) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < intervals.size(); ++i) {
        arr.push_back({{"parameter", coordinate_label(layout, i)},
                       {"estimate", intervals[i].estimate},
                       {"standard_error", intervals[i].standard_error},
                       {"lower", intervals[i].lower},
                       {"upper", intervals[i].upper}});
      }
      j["intervals"] = std::move(arr);
    }
    ss << j.dump(2) << '\n';
  }
  emit(o, ss.str());
  if (!rec.converged) {
    std::cerr << "lcm fit: " << lcm::to_string(rec.method) << " did not converge (" << rec.status << ")\n";
    return kExitNotConverged;
  }
  return 0;
}

void print_summary(const Options& o, const lcm::ComparisonReport& report) {
  if (o.format == "csv") {
    lcm::write_summary_csv(std::cout, report);
    return;
  }
  for (const auto& s : report.summaries) {
    std::cout << report.dataset_id << "  " << lcm::to_string(s.method) << "  best loglik " << s.best_log_likelihood
              << "  iterations " << s.best_iterations << "  converged " << s.converged_runs << '/' << s.runs << '\n';
  }
}

int cmd_bench(const Options& o) {
  lcm::ExperimentConfig cfg;
  cfg.methods = selected_methods(o.method);
  cfg.restarts = o.restarts;
  cfg.base_seed = o.seed;
  cfg.solvers = solver_settings(o);

  std::vector<const lcm::BundleSpec*> bundles;
  if (o.bundle == "all") {
    for (const auto& b : lcm::bundle_registry()) bundles.push_back(&b);
  } else if (!o.bundle.empty()) {
    bundles.push_back(&lcm::find_bundle(o.bundle));
  } else {
    bundles.push_back(nullptr);
  }
  for (const lcm::BundleSpec* b : bundles) {
    const Problem p = load_problem(o, b);
    const auto records = lcm::run_experiment(p.data, p.components, p.id, cfg);
    print_summary(o, lcm::summarize(records));
    if (!o.out.empty()) {
      const std::filesystem::path dir = bundles.size() > 1 ? std::filesystem::path(o.out) / p.id : std::filesystem::path(o.out);
      lcm::emit_report(dir, records);
    }
  }
  return 0;
}

int cmd_project(const Options& o) {
  std::vector<double> values;
  std::stringstream ss(o.vector);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw lcm::InputError("--vector: cannot parse \"" + field + "\" as a number");
    }
  }
  if (values.empty()) throw lcm::InputError("--vector needs comma separated numbers");
  const auto dims = o.dims.empty() ? std::vector<std::size_t>{values.size()} : o.dims;
  const lcm::ProductSimplex geom(dims);
  if (geom.size() != values.size()) throw lcm::InputError("--dims do not add up to the vector length");
  const lcm::Vector x = Eigen::Map<const lcm::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  const lcm::Vector p = lcm::project_product(x, geom);
  std::cout.precision(17);
  for (Eigen::Index i = 0; i < p.size(); ++i) std::cout << (i > 0 ? "," : "") << p[i];
  std::cout << '\n';
  return 0;
}

int cmd_report(const Options& o) {
  if (o.runs.empty()) throw lcm::InputError("--runs PATH is required");
  const auto records = lcm::parse_records_json(lcm::read_text_file(o.runs));
  if (o.out.empty()) {
    print_summary(o, lcm::summarize(records));
  } else {
    lcm::emit_report(o.out, records);
  }
  return 0;
}

/// Appends "--key value" pairs from a JSON object for keys not given on the
/// command line, so the config file mirrors the flags.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  }
  if (path.empty()) return args;
  const auto cfg = nlohmann::json::parse(lcm::read_text_file(path), nullptr, false);
  if (!cfg.is_object()) throw lcm::InputError("--config: " + path + " is not a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        args.push_back(flag);
        args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      args.push_back(flag);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return args;
}

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--bundle", o.bundle, "Simulation bundle id (1A..4D)");
  cmd->add_option("--data", o.data, "CSV file with one observation per row");
  cmd->add_option("--scheme", o.scheme, "JSON {\"categories\": [...]} overriding the inferred scheme");
  cmd->add_flag("--zero-based", o.zero_based, "Shift 0-coded values up by one");
  cmd->add_option("--components,-K", o.components, "Number of latent classes (with --data)");
  cmd->add_option("--n", o.n, "Sample size for simulated data (defaults to the bundle's)");
  cmd->add_option("--data-seed", o.data_seed, "Seed of the simulated sample (defaults to --seed)");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "em, sqp, pqn or all")->check(CLI::IsMember({"em", "sqp", "pqn", "all"}));
  cmd->add_option("--seed", o.seed, "Base seed for initial points and randomised line searches");
  cmd->add_option("--epsilon", o.epsilon, "EM and PQN stopping tolerance");
  cmd->add_option("--max-iter", o.max_iter, "Iteration cap for every method");
  cmd->add_option("--memory", o.memory, "L-BFGS memory of PQN");
  cmd->add_option("--sigma-convention", o.sigma, "PQN sigma: curvature or printed")
      ->check(CLI::IsMember({"curvature", "printed"}));
  cmd->add_option("--spg-step", o.spg_step, "SPG spectral step: standard or printed")
      ->check(CLI::IsMember({"standard", "printed"}));
  cmd->add_option("--kkt-tol", o.kkt_tol, "SQP stopping tolerance");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Maximum likelihood for latent class models"};
  app.require_subcommand(1);
  app.set_config();  // disable CLI11's own config handling; --config is JSON

  auto* simulate = app.add_subcommand("simulate", "Draw a dataset from a bundle or a params file");
  simulate->add_option("--bundle", o.bundle, "Bundle id (1A..4D)");
  simulate->add_option("--params", o.params, "Params JSON to sample from");
  simulate->add_option("--n", o.n, "Number of rows");
  simulate->add_option("--seed", o.seed, "Sampling seed");
  simulate->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  simulate->add_flag("--emit-labels", o.emit_labels, "Append the latent class as a last column");
  simulate->add_flag("--list", o.list, "List the bundles");
  simulate->add_option("--export-registry", o.registry, "Write every bundle's parameters as JSON");

  auto* fit = app.add_subcommand("fit", "Fit one method from one initial point");
  add_data_flags(fit, o);
  add_solver_flags(fit, o);
  fit->add_option("--params", o.params, "Initial point as params JSON (random when omitted)");
  fit->add_option("--out", o.out, "Output file (stdout when omitted)");
  fit->add_flag("--ci", o.ci, "Report standard errors and confidence intervals (pqn, sqp)");
  fit->add_option("--level", o.level, "Confidence level for --ci");

  auto* bench = app.add_subcommand("bench", "Multi-restart comparison of the methods");
  add_data_flags(bench, o);
  add_solver_flags(bench, o);
  bench->add_option("--restarts", o.restarts, "Shared initial points per method");
  bench->add_option("--out", o.out, "Report directory");

  auto* project = app.add_subcommand("project", "Project a vector onto a product of simplexes");
  project->add_option("--vector", o.vector, "Comma separated values")->required();
  project->add_option("--dims", o.dims, "Block sizes (one block when omitted)")->delimiter(',');

  auto* report = app.add_subcommand("report", "Re-emit report files from runs.json");
  report->add_option("--runs", o.runs, "runs.json written by bench")->required();
  report->add_option("--out", o.out, "Report directory (summary to stdout when omitted)");
  report->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "lcm: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (fit->parsed()) return cmd_fit(o);
    if (bench->parsed()) return cmd_bench(o);
    if (project->parsed()) return cmd_project(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const lcm::InputError& e) {
    std::cerr << "lcm: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "lcm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
