#include "monoscan/calibration.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "monoscan/errors.hpp"
#include "monoscan/geometry.hpp"
#include "monoscan/parallel.hpp"
#include "monoscan/statistics.hpp"

namespace monoscan {

std::string_view to_string(Model model) {
  return model == Model::white ? "white" : "regression";
}

Model parse_model(std::string_view name) {
  if (name == "white") return Model::white;
  if (name == "regression") return Model::regression;
  throw DomainError("unknown model '" + std::string(name) + "'");
}

std::optional<double> QuantileTable::find(double alpha) const {
  for (const QuantileEntry& e : entries) {
    if (std::abs(e.alpha - alpha) <= 1e-12) return e.quantile;
  }
  return std::nullopt;
}

namespace {

std::vector<double> brownian_values(std::size_t m, double scale, RandomStream& stream) {
  std::vector<double> values(m + 1, 0.0);
  double sum = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    sum += stream.normal();
    values[k] = scale * sum;
  }
  return values;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("level alpha must lie in (0, 1)");
  }
}

}  // namespace

double null_white_statistic(std::size_t n, std::size_t r, RandomStream& stream) {
  if (n < 2 || r < 1) throw DomainError("null_white_statistic: need n >= 2, r >= 1");
  const std::size_t m = n * r;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(m));
  GridFunction path(0.0, 1.0 / static_cast<double>(m), brownian_values(m, scale, stream));
  return scan(path, n, 1.0).max_stat;
}

double null_regression_statistic(std::size_t n, RandomStream& stream) {
  if (n < 4 || n % 2 != 0) {
    throw DomainError("null_regression_statistic: n must be even and >= 4");
  }
  std::vector<double> y(n);
  for (double& v : y) v = stream.normal();
  return scan_regression(pair_and_estimate(y)).max_stat;
}

double null_z_statistic(std::size_t m, RandomStream& stream) {
  if (m < 1) throw DomainError("null_z_statistic: need m >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  GridFunction path(0.0, 1.0 / static_cast<double>(m), brownian_values(m, scale, stream));
  return max_deviation(lcm(path), path).dev;
}

std::size_t quantile_rank(double alpha, std::size_t count) {
  check_alpha(alpha);
  if (count == 0) throw DomainError("quantile_rank: empty sample");
  // The slack absorbs representation error in (1 - alpha) * count, e.g.
  // 0.95 * 2000 = 1900.0000000000002.
  const double target = (1.0 - alpha) * static_cast<double>(count);
  const auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
  return std::clamp<std::size_t>(rank, 1, count);
}

std::vector<QuantileEntry> empirical_quantiles(std::span<const double> sorted,
                                               std::span<const double> alphas) {
  std::vector<QuantileEntry> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    out.push_back({alpha, sorted[quantile_rank(alpha, sorted.size()) - 1]});
  }
  return out;
}

QuantileTable calibrate(Model model, std::size_t n, std::size_t r, std::size_t replications,
                        std::span<const double> alphas, std::uint64_t seed) {
  if (replications < 100) throw DomainError("calibrate: need at least 100 replications");
  if (alphas.empty()) throw DomainError("calibrate: no levels requested");
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    check_alpha(alphas[k]);
    if (k > 0 && !(alphas[k] > alphas[k - 1])) {
      throw DomainError("calibrate: levels must be strictly ascending");
    }
  }
  if (model == Model::regression) {
    if (r != 1) throw PreconditionError("calibrate: the regression model uses r = 1");
    if (n < 4 || n % 2 != 0) throw DomainError("calibrate: regression n must be even and >= 4");
  } else if (n < 2 || r < 1) {
    throw DomainError("calibrate: white noise model needs n >= 2 and r >= 1");
  }

  std::vector<double> stats(replications);
  parallel_for(replications, [&](std::size_t k) {
    RandomStream stream = RandomStream::child(seed, k);
    stats[k] = model == Model::white ? null_white_statistic(n, r, stream)
                                     : null_regression_statistic(n, stream);
  });
  std::sort(stats.begin(), stats.end());

  QuantileTable table;
  table.model = model;
  table.n = n;
  table.r = r;
  table.replications = replications;
  table.seed = seed;
  table.entries = empirical_quantiles(stats, alphas);
  for (const QuantileEntry& e : table.entries) {
    if (!(e.quantile > 0.0)) {
      throw DegenerateSampleError("calibrate: non-positive quantile at alpha = " +
                                  std::to_string(e.alpha));
    }
  }
  return table;
}

double analytic_threshold(double alpha, std::size_t n) {
  check_alpha(alpha);
  if (n < 1) throw DomainError("analytic_threshold: need n >= 1");
  const double dn = static_cast<double>(n);
  return 2.0 * std::sqrt(2.0 * std::log(dn * (dn + 1.0) / alpha));
}

double z_tail_bound(double x) {
  if (!(x >= 0.0)) throw DomainError("z_tail_bound: need x >= 0");
  return std::min(1.0, 2.0 * std::exp(-x * x / 8.0));
}

std::string to_json(const QuantileTable& table) {
  nlohmann::ordered_json doc;
  doc["model"] = to_string(table.model);
  doc["n"] = table.n;
  doc["r"] = table.r;
  doc["C"] = table.replications;
  doc["seed"] = table.seed;
  doc["generator_id"] = table.generator_id;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const QuantileEntry& e : table.entries) {
    doc["entries"].push_back({{"alpha", e.alpha}, {"quantile", e.quantile}});
  }
  return doc.dump(2) + "\n";
}

QuantileTable quantile_table_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    QuantileTable table;
    table.model = parse_model(doc.at("model").get<std::string>());
    table.n = doc.at("n").get<std::size_t>();
    table.r = doc.at("r").get<std::size_t>();
    table.replications = doc.at("C").get<std::size_t>();
    table.seed = doc.at("seed").get<std::uint64_t>();
    table.generator_id = doc.at("generator_id").get<std::string>();
    for (const auto& e : doc.at("entries")) {
      table.entries.push_back({e.at("alpha").get<double>(), e.at("quantile").get<double>()});
    }
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed quantile table: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("malformed quantile table: ") + e.what());
  }
}

}  // namespace monoscan
