#include "monoscan/commands.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoscan/errors.hpp"
#include "monoscan/random.hpp"

namespace monoscan {
namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string csv_path_for(const std::string& out) {
  constexpr std::string_view ext = ".json";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".csv";
  }
  return out + ".csv";
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw UsageError("cannot parse level '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void require_level(double alpha, const char* name) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError(std::string(name) + " must lie in (0, 1)");
  }
}

std::string_view to_string(ThresholdSource s) {
  return s == ThresholdSource::table ? "table" : "analytic";
}

Json spec_to_json(const AlternativeSpec& spec) {
  return Json{{"kind", to_string(spec.kind)},
              {"a", spec.a},
              {"sigma", spec.sigma},
              {"scale", spec.scale}};
}

Json report_to_json(const PowerReport& r) {
  return Json{{"spec", spec_to_json(r.spec)},
              {"model", to_string(r.model)},
              {"n", r.n},
              {"alpha", r.alpha},
              {"threshold_used", r.threshold_used},
              {"replications", r.replications},
              {"rejections", r.rejections},
              {"power", r.power},
              {"ci95", Json::array({r.ci95.first, r.ci95.second})}};
}

struct ScenarioRow {
  AlternativeSpec spec;
  Model model;
  std::size_t n;
  std::size_t r;
  double alpha;
};

ScenarioRow parse_scenario_row(const nlohmann::json& row, const QuantileTable& table) {
  ScenarioRow out{};
  out.spec.kind = parse_signal_kind(row.at("kind").get<std::string>());
  if (out.spec.kind == SignalKind::custom) {
    throw ConfigError("custom signals cannot be described in a scenario file");
  }
  if (row.contains("sigma")) {
    out.spec.sigma = row.at("sigma").get<double>();
  } else if (row.contains("sigma2")) {
    out.spec.sigma = std::sqrt(row.at("sigma2").get<double>());
  } else {
    throw ConfigError("scenario row needs 'sigma' or 'sigma2'");
  }
  out.spec.a = row.value("a", 0.0);
  out.spec.scale = row.value("scale", 1.0);
  out.spec.validate();
  out.model = row.contains("model") ? parse_model(row.at("model").get<std::string>())
                                    : table.model;
  out.n = row.value("n", table.n);
  out.r = out.model == Model::regression ? 1 : row.value("r", table.r);
  out.alpha = row.value("alpha", 0.05);
  if (out.model != table.model || out.n != table.n || out.r != table.r) {
    throw ConfigError("scenario row does not match the quantile table (model, n, r)");
  }
  if (!table.find(out.alpha)) {
    throw ConfigError("level " + format_double(out.alpha) + " is not in the quantile table");
  }
  return out;
}

}  // namespace

std::vector<double> read_values_csv(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (line_no == 1 && t.size() >= 3 && t.substr(0, 3) == "\xEF\xBB\xBF") t = trim(t.substr(3));
    if (t.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (t == "value") continue;
    }
    if (t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
      throw DataError(path + ":" + std::to_string(line_no) + ": not a number: '" +
                      std::string(t) + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError(path + ": no data");
  return values;
}

void write_values_csv(const std::string& path, const std::vector<double>& values) {
  std::string text = "value\n";
  for (double v : values) text += format_double(v) + "\n";
  write_file(path, text);
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_file(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 failed for '" + path + "'");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int k = 0; k < len; ++k) {
    out += kHex[md[k] >> 4];
    out += kHex[md[k] & 0xF];
  }
  return out;
}

QuantileTable read_quantile_table(const std::string& path) {
  return quantile_table_from_json(read_file(path));
}

std::string to_json(const TestReport& report) {
  Json doc;
  doc["model"] = to_string(report.model);
  doc["n"] = report.n;
  doc["grid_n"] = report.grid_n;
  doc["alpha"] = report.alpha;
  doc["threshold"] = report.threshold;
  doc["threshold_source"] = to_string(report.threshold_source);
  doc["statistic"] = report.statistic;
  doc["reject"] = report.reject;
  doc["violating"] = Json::array();
  const double cells = static_cast<double>(report.grid_n);
  for (const IntervalStat& v : report.violating) {
    doc["violating"].push_back({{"i", v.i},
                                {"j", v.j},
                                {"left", static_cast<double>(v.i) / cells},
                                {"right", static_cast<double>(v.j) / cells},
                                {"stat", v.stat}});
  }
  doc["input_digest"] = report.input_digest;
  return doc.dump(2) + "\n";
}

std::string to_json(const std::vector<PowerReport>& reports) {
  Json doc = Json::array();
  for (const PowerReport& r : reports) doc.push_back(report_to_json(r));
  return doc.dump(2) + "\n";
}

std::string to_csv(const std::vector<PowerReport>& reports) {
  std::string text =
      "kind,a,sigma,scale,model,n,alpha,threshold_used,replications,rejections,power,"
      "ci95_lo,ci95_hi\n";
  for (const PowerReport& r : reports) {
    text += std::string(to_string(r.spec.kind)) + "," + format_double(r.spec.a) + "," +
            format_double(r.spec.sigma) + "," + format_double(r.spec.scale) + "," +
            std::string(to_string(r.model)) + "," + std::to_string(r.n) + "," +
            format_double(r.alpha) + "," + format_double(r.threshold_used) + "," +
            std::to_string(r.replications) + "," + std::to_string(r.rejections) + "," +
            format_double(r.power) + "," + format_double(r.ci95.first) + "," +
            format_double(r.ci95.second) + "\n";
  }
  return text;
}

QuantileTable cmd_calibrate(const CalibrateOptions& options, std::ostream& out) {
  if (options.alphas.empty()) throw UsageError("--alphas is empty");
  for (double a : options.alphas) require_level(a, "--alphas");
  for (std::size_t k = 1; k < options.alphas.size(); ++k) {
    if (!(options.alphas[k] > options.alphas[k - 1])) {
      throw UsageError("--alphas must be strictly ascending");
    }
  }
  if (options.reps < 100) throw UsageError("--reps must be at least 100");
  if (options.model == Model::regression) {
    if (options.n < 4 || options.n % 2 != 0) {
      throw UsageError("--n must be even and >= 4 for the regression model");
    }
    if (options.r != 1) throw UsageError("--r does not apply to the regression model");
  } else if (options.n < 2 || options.r < 1) {
    throw UsageError("white noise model needs --n >= 2 and --r >= 1");
  }

  const QuantileTable table = calibrate(options.model, options.n, options.r, options.reps,
                                        options.alphas, options.seed);
  write_file(options.out, to_json(table));
  out << "model=" << to_string(table.model) << " n=" << table.n << " r=" << table.r
      << " C=" << table.replications << " seed=" << table.seed << "\n";
  for (const QuantileEntry& e : table.entries) {
    out << "alpha=" << format_double(e.alpha) << " quantile=" << fixed6(e.quantile) << "\n";
  }
  return table;
}

TestReport cmd_test(const TestOptions& options, std::ostream& out) {
  require_level(options.alpha, "--alpha");
  if (options.table.has_value() == options.analytic) {
    throw UsageError("give exactly one of --table and --analytic");
  }
  const std::vector<double> data = read_values_csv(options.data);

  TestReport report;
  report.model = options.model;
  report.alpha = options.alpha;
  report.input_digest = file_digest(options.data);

  std::optional<QuantileTable> table;
  if (options.table) table = read_quantile_table(*options.table);

  GridFunction path(0.0, 1.0, {0.0, 0.0});
  std::size_t r = 1;
  double noise_sq = 0.0;
  if (options.model == Model::regression) {
    if (data.size() % 2 != 0) throw DataError("regression data must have an even length");
    if (data.size() < 4) throw DataError("regression data needs at least 4 observations");
    const PairedSample sample = pair_and_estimate(data);
    if (!(sample.sigma0_hat_sq > 0.0)) {
      throw DataError("regression data has a zero variance estimate");
    }
    report.n = data.size();
    report.grid_n = sample.ybar.size();
    path = cumulative_sum_diagram(sample.ybar);
    noise_sq = sample.sigma0_hat_sq;
  } else {
    if (!options.sigma) throw UsageError("--sigma is required for the white noise model");
    if (!options.n) throw UsageError("--n is required for the white noise model");
    if (!(*options.sigma > 0.0)) throw UsageError("--sigma must be positive");
    if (*options.n < 1) throw UsageError("--n must be positive");
    if (data.size() < 2) throw DataError("white noise path needs at least 2 knots");
    if (data.front() != 0.0) throw DataError("white noise path must start at 0");
    const std::size_t cells = data.size() - 1;
    if (cells % *options.n != 0) {
      throw DataError("path has " + std::to_string(cells) +
                      " grid steps, not a multiple of --n");
    }
    r = cells / *options.n;
    report.n = *options.n;
    report.grid_n = *options.n;
    path = GridFunction(0.0, 1.0 / static_cast<double>(cells), data);
    noise_sq = *options.sigma * *options.sigma;
  }

  if (table) {
    if (table->model != options.model || table->n != report.n ||
        (options.model == Model::white && table->r != r)) {
      throw ConfigError("quantile table does not match the data (model, n, r)");
    }
    const auto q = table->find(options.alpha);
    if (!q) throw ConfigError("level " + format_double(options.alpha) + " is not in the table");
    report.threshold = *q;
    report.threshold_source = ThresholdSource::table;
  } else {
    report.threshold = analytic_threshold(options.alpha, report.grid_n);
    report.threshold_source = ThresholdSource::analytic;
  }

  const ScanResult result = scan(path, report.grid_n, noise_sq, report.threshold);
  report.statistic = result.max_stat;
  report.reject = report.statistic > report.threshold;
  report.violating = violating_intervals(result, report.threshold);

  write_file(options.out, to_json(report));
  out << "statistic=" << fixed6(report.statistic) << " threshold=" << fixed6(report.threshold)
      << " (" << to_string(report.threshold_source) << ") reject="
      << (report.reject ? "true" : "false") << " violating=" << report.violating.size() << "\n";
  return report;
}

std::vector<PowerReport> cmd_power(const PowerOptions& options, std::ostream& out) {
  if (options.reps < 100) throw UsageError("--reps must be at least 100");
  const QuantileTable table = read_quantile_table(options.table);
  std::vector<ScenarioRow> rows;
  try {
    const auto doc = nlohmann::json::parse(read_file(options.scenario));
    const auto& list = doc.is_object() ? doc.at("scenarios") : doc;
    if (!list.is_array()) throw ConfigError("scenario file must hold a list of scenarios");
    for (const auto& row : list) rows.push_back(parse_scenario_row(row, table));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario file: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }

  std::vector<PowerReport> reports;
  reports.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ScenarioRow& row = rows[k];
    reports.push_back(power_study(row.spec, row.model, row.n, row.r, row.alpha, table,
                                  options.reps, derive_seed(options.seed, k)));
    const PowerReport& rep = reports.back();
    out << to_string(rep.spec.kind) << " sigma=" << format_double(rep.spec.sigma)
        << " model=" << to_string(rep.model) << " n=" << rep.n << " power=" << fixed6(rep.power)
        << " ci95=[" << fixed6(rep.ci95.first) << ", " << fixed6(rep.ci95.second) << "]\n";
  }
  write_file(options.out, to_json(reports));
  write_file(csv_path_for(options.out), to_csv(reports));
  return reports;
}

void cmd_bound(const BoundOptions& options, std::ostream& out) {
  require_level(options.alpha, "--alpha");
  if (options.n < 1) throw UsageError("--n must be positive");
  if (options.beta) require_level(*options.beta, "--beta");
  char buf[128];
  std::snprintf(buf, sizeof buf, "analytic_threshold %.6f\n",
                analytic_threshold(options.alpha, options.n));
  out << buf;
  if (options.beta) {
    std::snprintf(buf, sizeof buf, "guarantee_threshold %.6f\n",
                  guarantee_threshold(options.alpha, *options.beta, options.n));
    out << buf;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale test of monotonicity based on local least concave majorants",
               "monoscan"};
  app.require_subcommand(1);

  std::string model_name;
  const auto model_check = CLI::IsMember({"white", "regression"});

  CalibrateOptions cal;
  std::string alphas_text = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1";
  std::optional<std::size_t> cal_r;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Monte Carlo critical values");
  calibrate_cmd->add_option("--model", model_name, "white | regression")->required()->check(model_check);
  calibrate_cmd->add_option("--n", cal.n, "coarse grid size (white) or sample size (regression)")->required();
  calibrate_cmd->add_option("--r", cal_r, "fine steps per coarse cell (white only, default 1000)");
  calibrate_cmd->add_option("--reps", cal.reps, "number of replications C")->capture_default_str();
  calibrate_cmd->add_option("--alphas", alphas_text, "comma-separated levels")->capture_default_str();
  calibrate_cmd->add_option("--seed", cal.seed, "64-bit seed")->capture_default_str();
  calibrate_cmd->add_option("--out", cal.out, "output JSON table")->required();

  TestOptions test;
  std::string table_path;
  auto* test_cmd = app.add_subcommand("test", "Test a data set for monotonicity");
  test_cmd->add_option("--model", model_name, "white | regression")->required()->check(model_check);
  test_cmd->add_option("--data", test.data, "CSV file, one value per line")->required();
  test_cmd->add_option("--alpha", test.alpha, "level")->required();
  auto* table_opt = test_cmd->add_option("--table", table_path, "quantile table JSON");
  auto* analytic_flag = test_cmd->add_flag("--analytic", test.analytic, "use the closed-form bound");
  table_opt->excludes(analytic_flag);
  test_cmd->add_option("--sigma", test.sigma, "noise standard deviation (white)");
  test_cmd->add_option("--n", test.n, "coarse grid size (white)");
  test_cmd->add_option("--out", test.out, "output JSON report")->required();

  PowerOptions power;
  auto* power_cmd = app.add_subcommand("power", "Power study over a scenario file");
  power_cmd->add_option("--scenario", power.scenario, "scenario JSON")->required();
  power_cmd->add_option("--table", power.table, "quantile table JSON")->required();
  power_cmd->add_option("--reps", power.reps, "replications per scenario")->capture_default_str();
  power_cmd->add_option("--seed", power.seed, "64-bit seed")->capture_default_str();
  power_cmd->add_option("--out", power.out, "output JSON (CSV written alongside)")->required();

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Closed-form thresholds");
  bound_cmd->add_option("--alpha", bound.alpha, "level")->required();
  bound_cmd->add_option("--n", bound.n, "coarse grid size")->required();
  bound_cmd->add_option("--beta", bound.beta, "type II error for the power guarantee");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (calibrate_cmd->parsed()) {
      cal.model = parse_model(model_name);
      cal.r = cal.model == Model::regression ? cal_r.value_or(1) : cal_r.value_or(1000);
      cal.alphas = parse_alpha_list(alphas_text);
      cmd_calibrate(cal, out);
    } else if (test_cmd->parsed()) {
      test.model = parse_model(model_name);
      if (!table_path.empty()) test.table = table_path;
      cmd_test(test, out);
    } else if (power_cmd->parsed()) {
      cmd_power(power, out);
    } else if (bound_cmd->parsed()) {
      cmd_bound(bound, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace monoscan
