#include "sgof/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sgof/asymptotics.hpp"
#include "sgof/edf_tests.hpp"

namespace sgof {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string double_text(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Normalized identity of a statistic's null distribution. Usual and
// centre-outward schemes share it (distribution-freeness of the statistics); the
// combined max does not.
std::string null_identity(const StatSpec& spec) {
  if (spec.combined_max) return spec.h.name() + "|max";
  if (spec.scheme.simple()) return spec.h.name() + "|simple";
  return spec.h.name() + "|m=" + std::to_string(spec.scheme.step) + ":" +
         to_string(spec.scheme.layout);
}

void check_feasible(const StatSpec& spec, int n_obs) {
  const int n_eff = n_obs + 1;
  if (spec.scheme.step > n_eff) {
    throw std::invalid_argument("statistic '" + spec.canonical +
                                "': step exceeds the spacing count at n = " +
                                std::to_string(n_obs));
  }
  if (!spec.scheme.simple() && spec.scheme.layout == Layout::Disjoint &&
      n_eff % spec.scheme.step != 0) {
    throw std::invalid_argument("statistic '" + spec.canonical +
                                "': disjoint step must divide n_obs + 1 = " +
                                std::to_string(n_eff));
  }
}

struct EvalPlan {
  std::vector<StatSpec> specs;
  bool needs_usual = false;
  bool needs_co = false;

  explicit EvalPlan(std::span<const StatSpec> source) {
    specs.assign(source.begin(), source.end());
    for (const StatSpec& s : specs) {
      if (s.combined_max) {
        needs_usual = needs_co = true;
      } else if (s.scheme.ordering == Ordering::CentreOutward) {
        needs_co = true;
      } else {
        needs_usual = true;
      }
    }
  }

  // For null simulation the centre-outward schemes may run on the usual
  // ordering; the distributions coincide under uniformity.
  void normalize_orderings() {
    bool usual = false, co = false;
    for (StatSpec& s : specs) {
      if (!s.combined_max) s.scheme.ordering = Ordering::Usual;
      if (s.combined_max) {
        usual = co = true;
      } else {
        usual = true;
      }
    }
    needs_usual = usual;
    needs_co = co;
  }
};

struct Scratch {
  std::vector<double> draws;
  std::vector<double> points;
  std::vector<double> usual_gaps;
  std::vector<double> co_gaps;
  std::vector<double> window;
};

void evaluate_plan(const EvalPlan& plan, Scratch& sc, std::span<double> out) {
  const std::size_t n = sc.draws.size();
  const int n_eff = static_cast<int>(n) + 1;

  if (plan.needs_usual) {
    sc.points.assign(sc.draws.begin(), sc.draws.end());
    std::sort(sc.points.begin(), sc.points.end());
    sc.usual_gaps.resize(n + 1);
    gaps_from_sorted(sc.points, sc.usual_gaps);
  }
  if (plan.needs_co) {
    sc.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sc.points[i] = std::fabs(2.0 * sc.draws[i] - 1.0);
    }
    std::sort(sc.points.begin(), sc.points.end());
    sc.co_gaps.resize(n + 1);
    gaps_from_sorted(sc.points, sc.co_gaps);
  }

  for (std::size_t i = 0; i < plan.specs.size(); ++i) {
    const StatSpec& spec = plan.specs[i];
    double value;
    if (spec.combined_max) {
      const double u = statistic_over_gaps(sc.usual_gaps, n_eff, 1, spec.h, nullptr);
      const double c = statistic_over_gaps(sc.co_gaps, n_eff, 1, spec.h, nullptr);
      value = std::fmax(u, c);
    } else {
      const std::vector<double>& gaps =
          spec.scheme.ordering == Ordering::CentreOutward ? sc.co_gaps
                                                          : sc.usual_gaps;
      if (spec.scheme.simple()) {
        value = statistic_over_gaps(gaps, n_eff, 1, spec.h, nullptr);
      } else {
        window_sums(gaps, spec.scheme.step, spec.scheme.layout, sc.window);
        value = statistic_over_gaps(sc.window, n_eff, spec.scheme.step, spec.h,
                                    nullptr);
      }
    }
    out[i] = value;
  }
}

// Shared engine for null simulations: uniform draws on one stream per
// replication, all statistics evaluated per draw.
void simulate_null_impl(std::uint64_t stream_purpose, const EvalPlan& plan,
                        int n_obs, std::uint64_t replications,
                        std::uint64_t master_seed, unsigned workers,
                        std::vector<std::vector<double>>& values) {
  const std::size_t count = plan.specs.size();
  values.assign(count, std::vector<double>(replications));
  const std::uint64_t cell = mix64(static_cast<std::uint64_t>(n_obs));

  parallel_chunks(replications, workers,
                  [&](std::uint64_t begin, std::uint64_t end, unsigned) {
                    Scratch sc;
                    std::vector<double> vals(count);
                    for (std::uint64_t rep = begin; rep < end; ++rep) {
                      RngStream rng(master_seed,
                                    stream_id_for(stream_purpose, cell, rep));
                      sc.draws.resize(static_cast<std::size_t>(n_obs));
                      for (double& d : sc.draws) d = rng.next_double();
                      evaluate_plan(plan, sc, vals);
                      for (std::size_t i = 0; i < count; ++i) {
                        values[i][rep] = vals[i];
                      }
                    }
                  });
}

double interpolate_quantile(const std::vector<double>& sorted, double index1) {
  const std::size_t r = sorted.size();
  if (index1 <= 1.0) return sorted.front();
  if (index1 >= static_cast<double>(r)) return sorted.back();
  const double lo = std::floor(index1);
  const double frac = index1 - lo;
  const std::size_t i = static_cast<std::size_t>(lo) - 1;
  const double a = sorted[i];
  const double b = sorted[i + 1];
  if (frac == 0.0 || a == b) return a;
  if (!std::isfinite(b)) return frac > 0.0 ? b : a;
  return a + frac * (b - a);
}

}  // namespace

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_chunks(
    std::uint64_t count, unsigned workers,
    const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn) {
  if (workers == 0) workers = default_workers();
  if (count == 0) return;
  if (workers <= 1 || count < 2 * workers) {
    fn(0, count, 0);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = count * w / workers;
    const std::uint64_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double empirical_upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw std::invalid_argument("empirical_upper_quantile: empty");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("empirical_upper_quantile: alpha outside [0,1]");
  }
  std::sort(values.begin(), values.end());
  const double index1 = (1.0 - alpha) * static_cast<double>(values.size() + 1);
  return interpolate_quantile(values, index1);
}

void simulate_null_statistics(std::span<const StatSpec> specs, int n_obs,
                              std::uint64_t replications,
                              std::uint64_t master_seed, unsigned workers,
                              std::vector<std::vector<double>>& values) {
  if (specs.empty()) throw std::invalid_argument("simulate_null_statistics: no specs");
  if (n_obs < 1) throw std::invalid_argument("simulate_null_statistics: n_obs < 1");
  if (replications < 1) {
    throw std::invalid_argument("simulate_null_statistics: replications < 1");
  }
  for (const StatSpec& s : specs) check_feasible(s, n_obs);
  EvalPlan plan(specs);
  plan.normalize_orderings();
  simulate_null_impl(purpose::kCriticalValue, plan, n_obs, replications,
                     master_seed, workers, values);
}

std::string CvCache::key(const StatSpec& spec, int n_obs, double alpha,
                         std::uint64_t replications, std::uint64_t master_seed) {
  std::string k = null_identity(spec);
  k += "|n=" + std::to_string(n_obs);
  k += "|alpha=" + double_text(alpha);
  k += "|reps=" + std::to_string(replications);
  k += "|rng=";
  k += RngStream::kAlgorithm;
  k += "|seed=" + std::to_string(master_seed);
  return k;
}

std::optional<double> CvCache::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CvCache::store(const std::string& key, double value) {
  entries_[key] = value;
}

bool CvCache::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;
  json j;
  try {
    in >> j;
  } catch (const json::exception&) {
    return false;
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_object()) {
    return false;
  }
  for (const auto& [k, v] : j["entries"].items()) {
    if (v.is_number()) entries_[k] = v.get<double>();
  }
  return true;
}

void CvCache::save_file(const std::string& path) const {
  json j;
  j["rng"] = RngStream::kAlgorithm;
  j["entries"] = json::object();
  for (const auto& [k, v] : entries_) j["entries"][k] = v;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("CvCache: cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

double critical_value(const StatSpec& spec, int n_obs, double alpha,
                      std::uint64_t replications, std::uint64_t master_seed,
                      unsigned workers, CvCache* cache) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("critical_value: alpha outside (0,1)");
  }
  const std::string key = CvCache::key(spec, n_obs, alpha, replications, master_seed);
  if (cache) {
    if (const auto hit = cache->lookup(key)) return *hit;
  }
  std::vector<std::vector<double>> values;
  const StatSpec one[] = {spec};
  simulate_null_statistics(one, n_obs, replications, master_seed, workers, values);
  const double cv = empirical_upper_quantile(std::move(values[0]), alpha);
  if (cache) cache->store(key, cv);
  return cv;
}

TestReport run_test(const Sample& s, const StatSpec& spec, double alpha,
                    PValueMethod method, std::uint64_t replications,
                    std::uint64_t master_seed, unsigned workers, CvCache* cache) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("run_test: alpha outside (0,1)");
  }
  const int n_obs = static_cast<int>(s.size());
  check_feasible(spec, n_obs);

  TestReport report;
  report.statistic = spec.evaluate(s);
  report.stat_spec = spec.canonical;
  report.alpha = alpha;
  report.method = method;
  report.degenerate = report.statistic.degenerate;

  if (method == PValueMethod::MonteCarlo) {
    if (replications < 1) throw std::invalid_argument("run_test: replications < 1");
    std::vector<std::vector<double>> values;
    const StatSpec one[] = {spec};
    simulate_null_statistics(one, n_obs, replications, master_seed, workers, values);
    const std::vector<double>& nulls = values[0];

    std::uint64_t at_least = 0;
    for (double v : nulls) {
      if (v >= report.statistic.value) ++at_least;
    }
    report.p_value = static_cast<double>(1 + at_least) /
                     static_cast<double>(replications + 1);
    report.critical_value = empirical_upper_quantile(nulls, alpha);
    report.replications = replications;
    report.seed = master_seed;
    if (cache) {
      cache->store(CvCache::key(spec, n_obs, alpha, replications, master_seed),
                   report.critical_value);
    }
  } else {
    if (spec.combined_max || !spec.scheme.simple()) {
      throw std::invalid_argument(
          "run_test: the asymptotic normal method covers simple-spacings "
          "statistics only");
    }
    const NullLimit limit = null_limit(spec.h);
    const double n_eff = static_cast<double>(n_obs) + 1.0;
    const double sd = std::sqrt(limit.variance / n_eff);
    const double z = (report.statistic.value - limit.mean) / sd;
    report.p_value = normal_cdf(-z);
    report.critical_value = limit.mean + normal_quantile(1.0 - alpha) * sd;
  }

  if (report.degenerate) {
    report.p_value = 0.0;
    report.decision = Decision::Reject;
  } else {
    report.decision = report.statistic.value > report.critical_value
                          ? Decision::Reject
                          : Decision::FailToReject;
  }
  return report;
}

double PowerTable::rate(std::size_t row, std::size_t col) const {
  return static_cast<double>(rows.at(row).reject_counts.at(col)) /
         static_cast<double>(replications);
}

std::optional<double> PowerTable::rate(const std::string& alternative, int n,
                                       const std::string& column) const {
  const auto cit = std::find(columns.begin(), columns.end(), column);
  if (cit == columns.end()) return std::nullopt;
  const std::size_t col = static_cast<std::size_t>(cit - columns.begin());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].alternative == alternative && rows[r].n == n) {
      return rate(r, col);
    }
  }
  return std::nullopt;
}

std::string PowerTable::to_csv() const {
  std::string out = "alternative,n";
  for (const std::string& c : columns) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (const Row& row : rows) {
    out += row.alternative;
    out += ',';
    out += std::to_string(row.n);
    for (std::uint64_t count : row.reject_counts) {
      out += ',';
      out += double_text(static_cast<double>(count) /
                         static_cast<double>(replications));
    }
    out += '\n';
  }
  return out;
}

PowerTable PowerTable::from_csv(const std::string& csv, std::uint64_t replications) {
  PowerTable table;
  table.replications = replications;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("from_csv: empty input");

  auto split = [](const std::string& text) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      fields.push_back(text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return fields;
  };

  const auto header = split(line);
  if (header.size() < 3 || header[0] != "alternative" || header[1] != "n") {
    throw std::invalid_argument("from_csv: bad header");
  }
  table.columns.assign(header.begin() + 2, header.end());

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("from_csv: ragged row");
    }
    Row row;
    row.alternative = fields[0];
    row.n = std::stoi(fields[1]);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      double rate = 0.0;
      const auto res = std::from_chars(fields[i].data(),
                                       fields[i].data() + fields[i].size(), rate);
      if (res.ec != std::errc()) throw std::invalid_argument("from_csv: bad cell");
      row.reject_counts.push_back(static_cast<std::uint64_t>(
          std::llround(rate * static_cast<double>(replications))));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string PowerTable::metadata_json(int indent) const {
  json j;
  j["alpha"] = alpha;
  j["replications"] = replications;
  j["cv_replications"] = cv_replications;
  j["master_seed"] = master_seed;
  j["rng"] = rng_algorithm;
  j["columns"] = columns;
  j["wall_seconds"] = wall_seconds;
  json jrows = json::array();
  for (const Row& r : rows) {
    json jr;
    jr["alternative"] = r.alternative;
    jr["n"] = r.n;
    jr["reject_counts"] = r.reject_counts;
    jrows.push_back(std::move(jr));
  }
  j["rows"] = std::move(jrows);
  return j.dump(indent);
}

PowerTable power_study(const PowerStudyConfig& config, CvCache* cache) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.alternatives.empty() || config.sample_sizes.empty() ||
      config.statistics.empty()) {
    throw std::invalid_argument("power_study: empty config");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("power_study: alpha outside (0,1)");
  }
  if (config.replications < 1 || config.cv_replications < 1) {
    throw std::invalid_argument("power_study: replications must be >= 1");
  }
  for (int n : config.sample_sizes) {
    if (n < 2) throw std::invalid_argument("power_study: sample sizes must be >= 2");
    for (const StatSpec& s : config.statistics) check_feasible(s, n);
  }
  const unsigned workers = config.workers ? config.workers : default_workers();
  const std::size_t n_stats = config.statistics.size();

  // Critical values, shared across alternatives (and across orderings,
  // which have the same null).
  std::vector<std::vector<double>> cv(config.sample_sizes.size(),
                                      std::vector<double>(n_stats));
  for (std::size_t j = 0; j < config.sample_sizes.size(); ++j) {
    const int n = config.sample_sizes[j];
    std::vector<std::string> keys(n_stats);
    bool all_cached = cache != nullptr;
    for (std::size_t i = 0; i < n_stats; ++i) {
      keys[i] = CvCache::key(config.statistics[i], n, config.alpha,
                             config.cv_replications, config.master_seed);
      if (all_cached && !cache->lookup(keys[i])) all_cached = false;
    }
    if (all_cached) {
      for (std::size_t i = 0; i < n_stats; ++i) cv[j][i] = *cache->lookup(keys[i]);
      continue;
    }
    std::vector<std::vector<double>> values;
    simulate_null_statistics(config.statistics, n, config.cv_replications,
                             config.master_seed, workers, values);
    for (std::size_t i = 0; i < n_stats; ++i) {
      cv[j][i] = empirical_upper_quantile(std::move(values[i]), config.alpha);
      if (cache) cache->store(keys[i], cv[j][i]);
    }
  }

  PowerTable table;
  table.columns.reserve(n_stats);
  for (const StatSpec& s : config.statistics) table.columns.push_back(s.canonical);
  table.alpha = config.alpha;
  table.replications = config.replications;
  table.cv_replications = config.cv_replications;
  table.master_seed = config.master_seed;
  table.rng_algorithm = RngStream::kAlgorithm;

  const EvalPlan plan(config.statistics);
  for (const AlternativeFamily& family : config.alternatives) {
    const std::uint64_t family_hash = fnv1a(family.name());
    for (std::size_t j = 0; j < config.sample_sizes.size(); ++j) {
      const int n = config.sample_sizes[j];
      const std::uint64_t cell =
          mix64(family_hash ^ mix64(static_cast<std::uint64_t>(n)));

      const unsigned used = workers;
      std::vector<std::vector<std::uint64_t>> local(
          used, std::vector<std::uint64_t>(n_stats, 0));
      parallel_chunks(
          config.replications, used,
          [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
            Scratch sc;
            std::vector<double> vals(n_stats);
            std::vector<std::uint64_t>& counts = local[w];
            for (std::uint64_t rep = begin; rep < end; ++rep) {
              RngStream rng(config.master_seed,
                            stream_id_for(purpose::kPower, cell, rep));
              family.sample_into(static_cast<std::size_t>(n), rng, sc.draws);
              evaluate_plan(plan, sc, vals);
              for (std::size_t i = 0; i < n_stats; ++i) {
                // "not <=" so that infinities and NaNs count as rejections
                if (!(vals[i] <= cv[j][i])) ++counts[i];
              }
            }
          });

      PowerTable::Row row;
      row.alternative = family.name();
      row.n = n;
      row.reject_counts.assign(n_stats, 0);
      for (const auto& part : local) {
        for (std::size_t i = 0; i < n_stats; ++i) row.reject_counts[i] += part[i];
      }
      table.rows.push_back(std::move(row));
    }
  }

  table.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

std::vector<FreenessResult> distribution_freeness_check(int n_obs, std::uint64_t replications,
                                       std::uint64_t master_seed, unsigned workers) {
  if (n_obs < 1) throw std::invalid_argument("distribution_freeness_check: n_obs < 1");
  if (replications < 2) throw std::invalid_argument("distribution_freeness_check: too few replications");
  if (workers == 0) workers = default_workers();

  std::vector<StatSpec> usual, co;
  for (const HFunction& h : HFunction::builtins()) {
    StatSpec u;
    u.h = h;
    u.scheme = SpacingScheme{Ordering::Usual, 1, Layout::Disjoint};
    u.canonical = h.name();
    usual.push_back(u);
    StatSpec c = u;
    c.scheme.ordering = Ordering::CentreOutward;
    c.canonical = h.name() + ":co";
    co.push_back(c);
  }

  std::vector<std::vector<double>> values_usual, values_co;
  simulate_null_impl(purpose::kFreenessUsual, EvalPlan(usual), n_obs, replications,
                     master_seed, workers, values_usual);
  simulate_null_impl(purpose::kFreenessCentreOutward, EvalPlan(co), n_obs,
                     replications, master_seed, workers, values_co);

  std::vector<FreenessResult> out;
  for (std::size_t i = 0; i < usual.size(); ++i) {
    const KsResult ks = ks_two_sample(values_usual[i], values_co[i]);
    out.push_back(FreenessResult{usual[i].h.name(), ks.statistic, ks.p_value});
  }
  return out;
}

}  // namespace sgof
