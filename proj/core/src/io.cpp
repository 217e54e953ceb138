#include "lcm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lcm {

using Json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from(const Json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

Json params_json(const LcmParams& p) {
  Json pi = Json::array();
  for (int k = 0; k < p.components(); ++k) {
    Json comp = Json::array();
    for (int j = 0; j < p.scheme().num_variables(); ++j) comp.push_back(vector_json(p.pi_row(k, j)));
    pi.push_back(std::move(comp));
  }
  Json out;
  out["K"] = p.components();
  out["eta"] = vector_json(p.eta());
  out["pi"] = std::move(pi);
  return out;
}

LcmParams params_from(const Json& j) {
  if (!j.is_object() || !j.contains("eta") || !j.contains("pi")) {
    throw InputError("params JSON needs \"eta\" and \"pi\"");
  }
  const Vector eta = vector_from(j.at("eta"));
  std::vector<std::vector<Vector>> pi;
  for (const auto& comp : j.at("pi")) {
    std::vector<Vector> rows;
    for (const auto& row : comp) rows.push_back(vector_from(row));
    pi.push_back(std::move(rows));
  }
  if (j.contains("K") && j.at("K").get<int>() != static_cast<int>(eta.size())) {
    throw InputError("params JSON: K = " + std::to_string(j.at("K").get<int>()) + " but eta has " +
                     std::to_string(eta.size()) + " entries");
  }
  return LcmParams(eta, pi);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const CsvOptions& opts, const std::string& source) {
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<int> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      const auto v = parse_int(f);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v + (opts.zero_based ? 1 : 0));
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;
        width = fields.size();
        continue;  // header
      }
      throw InputError(source + ", line " + std::to_string(line_no) + ": non-integer value in \"" + trim(line) +
                       "\"");
    }
    first_content = false;
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw InputError(source + ", line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " columns, found " + std::to_string(row.size()));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] < 1) {
        throw InputError(source + ", line " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                         ": value " + std::to_string(row[j]) + " is below 1" +
                         (opts.zero_based ? "" : " (use --zero-based for 0-coded files)"));
      }
      if (opts.scheme && j < static_cast<std::size_t>(opts.scheme->num_variables()) &&
          row[j] > opts.scheme->categories(static_cast<int>(j))) {
        throw InputError(source + ", line " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                         ": value " + std::to_string(row[j]) + " exceeds the " +
                         std::to_string(opts.scheme->categories(static_cast<int>(j))) + " categories of the scheme");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(source + ": no data rows");

  CategoryScheme scheme;
  if (opts.scheme) {
    scheme = *opts.scheme;
  } else {
    std::vector<int> cats(width, 2);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < width; ++j) cats[j] = std::max(cats[j], r[j]);
    }
    scheme = CategoryScheme(std::move(cats));
  }
  try {
    return Dataset(scheme, std::move(rows));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

Dataset read_dataset_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_dataset_csv(in, opts, path.string());
}

void write_dataset_csv(std::ostream& out, const Dataset& data, const std::vector<int>* labels) {
  if (labels != nullptr && labels->size() != data.size()) {
    throw InputError("label count does not match the number of rows");
  }
  const int d = data.num_variables();
  for (int j = 0; j < d; ++j) out << (j > 0 ? "," : "") << 'y' << (j + 1);
  if (labels != nullptr) out << ",class";
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (int j = 0; j < d; ++j) out << (j > 0 ? "," : "") << row[static_cast<std::size_t>(j)];
    if (labels != nullptr) out << ',' << (*labels)[i];
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data, const std::vector<int>* labels) {
  std::ostringstream ss;
  write_dataset_csv(ss, data, labels);
  write_text_file(path, ss.str());
}

CategoryScheme parse_scheme_json(const std::string& text) {
  const Json j = parse_json(text, "scheme JSON");
  if (!j.is_object() || !j.contains("categories")) throw InputError("scheme JSON needs \"categories\"");
  return CategoryScheme(j.at("categories").get<std::vector<int>>());
}

CategoryScheme read_scheme_json(const std::filesystem::path& path) {
  return parse_scheme_json(read_text_file(path));
}

std::string params_to_json(const LcmParams& params, int indent) { return params_json(params).dump(indent); }

LcmParams parse_params_json(const std::string& text) {
  try {
    return params_from(parse_json(text, "params JSON"));
  } catch (const Json::exception& e) {
    throw InputError(std::string("params JSON: ") + e.what());
  }
}

LcmParams read_params_json(const std::filesystem::path& path) { return parse_params_json(read_text_file(path)); }

std::string registry_to_json(const std::vector<BundleSpec>& bundles, int indent) {
  Json arr = Json::array();
  for (const auto& b : bundles) {
    Json e;
    e["id"] = b.id;
    e["n"] = b.n;
    e["categories"] = b.scheme().all_categories();
    e["reported_true_loglik"] = b.reported_true_loglik;
    e["params"] = params_json(b.params);
    arr.push_back(std::move(e));
  }
  return arr.dump(indent);
}

std::string records_to_json(const std::vector<RunRecord>& records, int indent) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json e;
    e["dataset"] = r.dataset_id;
    e["method"] = std::string(to_string(r.method));
    e["init_id"] = r.init_id;
    e["seed"] = r.seed;
    e["iterations"] = r.iterations;
    e["converged"] = r.converged;
    e["status"] = r.status;
    e["log_likelihood"] = r.log_likelihood;
    e["categories"] = r.params.scheme().all_categories();
    e["initial"] = params_json(r.initial);
    e["params"] = params_json(r.params);
    Json trace = Json::array();
    for (const auto& t : r.trace.entries) {
      trace.push_back(Json::array({t.iteration, t.log_likelihood, t.step_length, t.change, t.feasibility}));
    }
    e["trace"] = std::move(trace);
    if (r.curvature) {
      Json rows = Json::array();
      for (Eigen::Index i = 0; i < r.curvature->rows(); ++i) rows.push_back(vector_json(r.curvature->row(i)));
      e["curvature"] = std::move(rows);
    } else {
      e["curvature"] = nullptr;
    }
    arr.push_back(std::move(e));
  }
  return arr.dump(indent);
}

std::vector<RunRecord> parse_records_json(const std::string& text) {
  const Json arr = parse_json(text, "run records JSON");
  if (!arr.is_array()) throw InputError("run records JSON must be an array");
  std::vector<RunRecord> out;
  try {
    for (const auto& e : arr) {
      RunRecord r;
      r.dataset_id = e.at("dataset").get<std::string>();
      r.method = parse_method(e.at("method").get<std::string>());
      r.init_id = e.at("init_id").get<int>();
      r.seed = e.at("seed").get<std::uint64_t>();
      r.iterations = e.at("iterations").get<int>();
      r.converged = e.at("converged").get<bool>();
      r.status = e.at("status").get<std::string>();
      r.log_likelihood = e.at("log_likelihood").get<double>();
      r.initial = params_from(e.at("initial"));
      r.params = params_from(e.at("params"));
      for (const auto& t : e.at("trace")) {
        r.trace.entries.push_back(TraceEntry{t.at(0).get<int>(), t.at(1).get<double>(), t.at(2).get<double>(),
                                             t.at(3).get<double>(), t.at(4).get<double>(), 0.0});
      }
      const Json& c = e.at("curvature");
      if (!c.is_null()) {
        const auto n = static_cast<Eigen::Index>(c.size());
        Matrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) m.row(i) = vector_from(c.at(static_cast<std::size_t>(i))).transpose();
        r.curvature = std::move(m);
      }
      out.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("run records JSON: ") + e.what());
  }
  return out;
}

RunRecord without_timings(RunRecord r) {
  r.wall_seconds = 0.0;
  for (auto& t : r.trace.entries) t.elapsed_seconds = 0.0;
  return r;
}

bool same_record(const RunRecord& a, const RunRecord& b) {
  auto same_params = [](const LcmParams& x, const LcmParams& y) {
    return x.layout() == y.layout() && x.pack().values == y.pack().values;
  };
  if (a.method != b.method || a.dataset_id != b.dataset_id || a.seed != b.seed || a.init_id != b.init_id ||
      a.iterations != b.iterations || a.converged != b.converged || a.status != b.status ||
      a.log_likelihood != b.log_likelihood || a.wall_seconds != b.wall_seconds ||
      !same_params(a.initial, b.initial) || !same_params(a.params, b.params) ||
      a.trace.entries.size() != b.trace.entries.size() || a.curvature.has_value() != b.curvature.has_value()) {
    return false;
  }
  for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
    const auto& s = a.trace.entries[i];
    const auto& t = b.trace.entries[i];
    if (s.iteration != t.iteration || s.log_likelihood != t.log_likelihood || s.step_length != t.step_length ||
        s.change != t.change || s.feasibility != t.feasibility || s.elapsed_seconds != t.elapsed_seconds) {
      return false;
    }
  }
  return !a.curvature || *a.curvature == *b.curvature;
}

void write_summary_csv(std::ostream& out, const ComparisonReport& report) {
  out << "dataset,method,runs,converged_runs,best_log_likelihood,best_iterations,median_iterations\n";
  for (const auto& s : report.summaries) {
    out << report.dataset_id << ',' << to_string(s.method) << ',' << s.runs << ',' << s.converged_runs << ','
        << fmt(s.best_log_likelihood) << ',' << s.best_iterations << ',' << fmt(s.median_iterations) << '\n';
  }
}

void write_boxplot_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "dataset,method,init_id,seed,iterations,log_likelihood,converged\n";
  for (const auto& r : records) {
    out << r.dataset_id << ',' << to_string(r.method) << ',' << r.init_id << ',' << r.seed << ',' << r.iterations
        << ',' << fmt(r.log_likelihood) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_rmse_csv(std::ostream& out, const ComparisonReport& report) {
  out << "dataset,method_a,method_b,rmse\n";
  const auto& m = report.rmse_methods;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      out << report.dataset_id << ',' << to_string(m[i]) << ',' << to_string(m[j]) << ','
          << fmt(report.rmse(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
    }
  }
}

void write_timing_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "dataset,method,init_id,iterations,wall_seconds,seconds_per_iteration\n";
  for (const auto& r : records) {
    const double per = r.iterations > 0 ? r.wall_seconds / r.iterations : 0.0;
    out << r.dataset_id << ',' << to_string(r.method) << ',' << r.init_id << ',' << r.iterations << ','
        << fmt(r.wall_seconds) << ',' << fmt(per) << '\n';
  }
}

ReportFiles emit_report(const std::filesystem::path& dir, const std::vector<RunRecord>& records) {
  std::filesystem::create_directories(dir);
  const ComparisonReport report = summarize(records);
  ReportFiles files{dir / "runs.json", dir / "summary.csv", dir / "boxplot.csv", dir / "rmse.csv",
                    dir / "timing.csv"};
  write_text_file(files.runs_json, records_to_json(records) + "\n");
  std::ostringstream summary, box, rmse, timing;
  write_summary_csv(summary, report);
  write_boxplot_csv(box, records);
  write_rmse_csv(rmse, report);
  write_timing_csv(timing, records);
  write_text_file(files.summary_csv, summary.str());
  write_text_file(files.boxplot_csv, box.str());
  write_text_file(files.rmse_csv, rmse.str());
  write_text_file(files.timing_csv, timing.str());
  return files;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace lcm
