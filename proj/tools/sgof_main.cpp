// sgof: goodness-of-fit tests for uniformity built on sample spacings,
// including their centre-outward variants, with a seeded Monte Carlo
// engine for critical values, p-values and power tables.
//
// Exit codes: 0 success / no rejection, 1 malformed input data,
// 2 invalid configuration, 3 at least one test rejected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgof/asymptotics.hpp"
#include "sgof/edf_tests.hpp"
#include "sgof/families.hpp"
#include "sgof/montecarlo.hpp"
#include "sgof/statistics.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitRejected = 3;

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("cannot open input file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw BadInput("line " + std::to_string(lineno) + ": not a number: '" +
                       token + "'");
      }
    }
  }
  if (values.empty()) throw BadInput("input file '" + path + "' has no data");
  return values;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw BadInput("cannot write output file '" + out_path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

json report_to_json(const sgof::TestReport& r) {
  json j;
  j["statistic"] = r.stat_spec;
  j["value"] = r.statistic.value;
  j["n_effective"] = r.statistic.n_effective;
  j["degenerate"] = r.degenerate;
  j["p_value"] = r.p_value;
  j["critical_value"] = r.critical_value;
  j["alpha"] = r.alpha;
  j["decision"] = r.decision == sgof::Decision::Reject ? "reject" : "fail-to-reject";
  if (r.method == sgof::PValueMethod::MonteCarlo) {
    j["method"] = "monte-carlo";
    j["replications"] = r.replications;
    j["seed"] = r.seed;
    j["rng"] = sgof::RngStream::kAlgorithm;
  } else {
    j["method"] = "asymptotic-normal";
  }
  return j;
}

std::string reports_to_csv(const std::vector<sgof::TestReport>& reports) {
  std::string out = "statistic,value,p_value,critical_value,alpha,decision,degenerate\n";
  for (const auto& r : reports) {
    std::ostringstream row;
    row.precision(17);
    row << r.stat_spec << ',' << r.statistic.value << ',' << r.p_value << ','
        << r.critical_value << ',' << r.alpha << ','
        << (r.decision == sgof::Decision::Reject ? "reject" : "fail-to-reject") << ','
        << (r.degenerate ? "true" : "false") << '\n';
    out += row.str();
  }
  return out;
}

// Named perturbation directions for the efficacy subcommand.
sgof::RealFn make_direction(const std::string& name) {
  if (name == "linear") return [](double x) { return 2.0 * x - 1.0; };
  if (name == "cosine") {
    return [](double x) { return std::cos(2.0 * 3.14159265358979323846 * x); };
  }
  if (name == "quadratic") return [](double x) { return 2.0 * x - 3.0 * x * x; };
  throw CLI::ValidationError("--l", "unknown direction '" + name +
                                        "' (choose linear|cosine|quadratic)");
}

struct CommonOpts {
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::uint64_t reps = 10000;
  std::string format = "json";
  std::string out_path;
  std::string cv_cache_path;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_alpha = true) {
  cmd->add_option("--seed", o.seed, "master seed (64-bit)")->capture_default_str();
  if (with_alpha) {
    cmd->add_option("--alpha", o.alpha, "significance level")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
  }
  cmd->add_option("--reps", o.reps, "Monte Carlo replications")->capture_default_str();
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "write output to this file");
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

sgof::PowerStudyConfig config_from_json(const json& j) {
  sgof::PowerStudyConfig cfg;
  for (const auto& f : j.at("alternatives")) {
    cfg.alternatives.push_back(sgof::AlternativeFamily::parse(f.get<std::string>()));
  }
  for (const auto& n : j.at("sample_sizes")) cfg.sample_sizes.push_back(n.get<int>());
  for (const auto& s : j.at("statistics")) {
    cfg.statistics.push_back(sgof::StatSpec::parse(s.get<std::string>()));
  }
  cfg.alpha = j.value("alpha", 0.05);
  cfg.replications = j.value("replications", std::uint64_t{10000});
  cfg.cv_replications = j.value("cv_replications", std::uint64_t{100000});
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  return cfg;
}

int cmd_test(const CommonOpts& o, const std::string& input,
             const std::vector<std::string>& stat_specs,
             const std::string& null_family, const std::string& method_name) {
  std::vector<double> values = read_values(input);

  if (!null_family.empty()) {
    const auto family = sgof::AlternativeFamily::parse(null_family);
    for (double& v : values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw BadInput("value outside [0,1]; the probability integral transform "
                       "covers families supported on [0,1]");
      }
      v = family.cdf(v);
    }
  } else {
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw BadInput("value outside [0,1]; pass --null <family> to transform first");
      }
    }
  }

  const sgof::Sample sample(values);
  const auto method = method_name == "asymptotic"
                          ? sgof::PValueMethod::AsymptoticNormal
                          : sgof::PValueMethod::MonteCarlo;

  sgof::CvCache cache;
  const bool have_cache = !o.cv_cache_path.empty();
  if (have_cache) cache.load_file(o.cv_cache_path);

  std::vector<sgof::TestReport> reports;
  bool any_reject = false;
  for (const std::string& text : stat_specs) {
    const auto spec = sgof::StatSpec::parse(text);
    const auto report = sgof::run_test(sample, spec, o.alpha, method, o.reps,
                                       o.seed, o.threads,
                                       have_cache ? &cache : nullptr);
    any_reject = any_reject || report.decision == sgof::Decision::Reject;
    reports.push_back(report);
  }
  if (have_cache) cache.save_file(o.cv_cache_path);

  if (o.format == "csv") {
    write_output(reports_to_csv(reports), o.out_path);
  } else {
    json j;
    j["input"] = input;
    j["n_obs"] = sample.size();
    if (!null_family.empty()) j["null_family"] = null_family;
    j["reports"] = json::array();
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
    write_output(j.dump(2), o.out_path);
  }
  return any_reject ? kExitRejected : kExitOk;
}

int cmd_critical_values(const CommonOpts& o,
                        const std::vector<std::string>& stat_specs,
                        const std::vector<int>& sizes) {
  sgof::CvCache cache;
  if (!o.cv_cache_path.empty()) cache.load_file(o.cv_cache_path);

  json rows = json::array();
  std::string csv = "statistic,n,alpha,replications,critical_value\n";
  for (const std::string& text : stat_specs) {
    const auto spec = sgof::StatSpec::parse(text);
    for (int n : sizes) {
      const double cv = sgof::critical_value(spec, n, o.alpha, o.reps, o.seed,
                                             o.threads, &cache);
      json row;
      row["statistic"] = spec.canonical;
      row["n"] = n;
      row["alpha"] = o.alpha;
      row["replications"] = o.reps;
      row["critical_value"] = cv;
      rows.push_back(row);
      std::ostringstream line;
      line.precision(17);
      line << spec.canonical << ',' << n << ',' << o.alpha << ',' << o.reps << ','
           << cv << '\n';
      csv += line.str();
    }
  }
  if (!o.cv_cache_path.empty()) cache.save_file(o.cv_cache_path);

  if (o.format == "csv") {
    write_output(csv, o.out_path);
  } else {
    json j;
    j["rng"] = sgof::RngStream::kAlgorithm;
    j["seed"] = o.seed;
    j["critical_values"] = rows;
    write_output(j.dump(2), o.out_path);
  }
  return kExitOk;
}

int cmd_power(const CommonOpts& o, const std::string& config_path,
              const std::vector<std::string>& families,
              const std::vector<int>& sizes,
              const std::vector<std::string>& stat_specs,
              std::uint64_t cv_reps) {
  sgof::PowerStudyConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw BadInput("cannot open config '" + config_path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw BadInput("config parse error: " + std::string(e.what()));
    }
    cfg = config_from_json(j);
  } else {
    for (const auto& f : families) {
      cfg.alternatives.push_back(sgof::AlternativeFamily::parse(f));
    }
    cfg.sample_sizes = sizes;
    for (const auto& s : stat_specs) {
      cfg.statistics.push_back(sgof::StatSpec::parse(s));
    }
    cfg.alpha = o.alpha;
    cfg.replications = o.reps;
    cfg.cv_replications = cv_reps;
    cfg.master_seed = o.seed;
  }
  cfg.workers = o.threads;

  sgof::CvCache cache;
  const bool have_cache = !o.cv_cache_path.empty();
  if (have_cache) cache.load_file(o.cv_cache_path);
  const sgof::PowerTable table = sgof::power_study(cfg, have_cache ? &cache : nullptr);
  if (have_cache) cache.save_file(o.cv_cache_path);

  if (o.format == "json") {
    write_output(table.metadata_json(2), o.out_path);
    return kExitOk;
  }
  write_output(table.to_csv(), o.out_path);
  if (!o.out_path.empty()) {
    // sidecar with the full provenance next to the csv
    std::ofstream meta(o.out_path + ".meta.json");
    if (meta) meta << table.metadata_json(2) << '\n';
  }
  return kExitOk;
}

int cmd_efficacy(const CommonOpts& o, const std::vector<std::string>& h_names,
                 const std::string& direction, bool centre_outward) {
  json rows = json::array();
  const sgof::RealFn l = make_direction(direction);
  const sgof::RealFn used = centre_outward ? sgof::co_perturbation(l) : l;
  for (const std::string& name : h_names) {
    const auto h = sgof::HFunction::parse(name);
    const auto rep = sgof::efficacy_report(h, used);
    json j;
    j["h"] = h.name();
    j["family_or_l"] = centre_outward ? direction + " (centre-outward fold)" : direction;
    j["value"] = rep.value;
    j["quadrature_error"] = rep.quadrature_error;
    rows.push_back(j);
  }
  json out;
  out["efficacy"] = rows;
  write_output(out.dump(2), o.out_path);
  return kExitOk;
}

int cmd_hellinger(const CommonOpts& o, const std::vector<std::string>& families) {
  json rows = json::array();
  for (const std::string& name : families) {
    const auto fam = sgof::AlternativeFamily::parse(name);
    const auto hr = sgof::hellinger_vs_uniform(fam);
    json j;
    j["h"] = "hellinger";
    j["family_or_l"] = fam.name();
    j["value"] = hr.hd_direct;
    j["value_centre_outward"] = hr.hd_co;
    j["quadrature_error"] = hr.quadrature_error_bound;
    rows.push_back(j);
  }
  json out;
  out["hellinger"] = rows;
  write_output(out.dump(2), o.out_path);
  return kExitOk;
}

int cmd_lemma_checks(const CommonOpts& o, int n_obs) {
  json out;

  // distributional equality of usual and centre-outward spacings statistics
  const auto freeness = sgof::distribution_freeness_check(n_obs, o.reps, o.seed, o.threads);
  bool pass1 = true;
  json rows1 = json::array();
  for (const auto& r : freeness) {
    const bool ok = r.p_value > 0.01;
    pass1 = pass1 && ok;
    json j;
    j["h"] = r.h_name;
    j["ks_statistic"] = r.ks_statistic;
    j["p_value"] = r.p_value;
    j["pass"] = ok;
    rows1.push_back(j);
  }
  out["spacings_distribution"] = {
      {"n_obs", n_obs}, {"replications", o.reps}, {"tests", rows1}, {"pass", pass1}};

  // Hellinger contraction of the centre-outward fold
  bool pass2 = true;
  json rows2 = json::array();
  for (const char* kind : {"A", "B", "C", "beta"}) {
    for (double k : {0.5, 1.5, 2.5}) {
      char kbuf[16];
      std::snprintf(kbuf, sizeof(kbuf), "%g", k);
      const auto fam =
          sgof::AlternativeFamily::parse(std::string(kind) + ":" + kbuf);
      const auto hr = sgof::hellinger_vs_uniform(fam);
      const bool contracts = hr.hd_co <= hr.hd_direct + 1e-8;
      const bool symmetric = fam.symmetric_about_half();
      const bool equality_ok = !symmetric || std::fabs(hr.hd_co - hr.hd_direct) <= 1e-6;
      pass2 = pass2 && contracts && equality_ok;
      json j;
      j["family"] = fam.name();
      j["hd_direct"] = hr.hd_direct;
      j["hd_centre_outward"] = hr.hd_co;
      j["gap"] = hr.hd_direct - hr.hd_co;
      j["symmetric"] = symmetric;
      j["pass"] = contracts && equality_ok;
      rows2.push_back(j);
    }
  }
  out["hellinger_contraction"] = {{"grid", rows2}, {"pass", pass2}};
  out["pass"] = pass1 && pass2;

  write_output(out.dump(2), o.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sgof: spacings-based goodness-of-fit tests for uniformity\n"
      "Statistic specs: greenwood|moran|rao|entropy with optional suffixes\n"
      "  :co (centre-outward spacings), :max (max of usual and centre-outward),\n"
      "  :m=<int>:disjoint|overlap (m-step spacings)\n"
      "Family specs: uniform | A:<k> | B:<k> | C:<k> | beta:<k> (case-insensitive)"};
  app.require_subcommand(1);

  // test
  CommonOpts t_opts;
  t_opts.reps = 100000;
  std::string t_input, t_null, t_method = "mc";
  std::vector<std::string> t_stats{"greenwood"};
  auto* test_cmd = app.add_subcommand(
      "test", "test a data file (one value per line, '#' comments) for uniformity");
  test_cmd->add_option("--input", t_input, "input data file")->required();
  test_cmd->add_option("--stat", t_stats, "statistic spec (repeatable)")
      ->capture_default_str();
  test_cmd->add_option("--null", t_null,
                       "apply the probability integral transform of this family first");
  test_cmd->add_option("--method", t_method, "p-value method")
      ->check(CLI::IsMember({"mc", "asymptotic"}))
      ->capture_default_str();
  add_common(test_cmd, t_opts);
  test_cmd->add_option("--cv-cache", t_opts.cv_cache_path,
                       "critical-value cache file (read/write)");

  // critical-values
  CommonOpts c_opts;
  c_opts.reps = 100000;
  std::vector<std::string> c_stats{"greenwood"};
  std::vector<int> c_sizes;
  auto* cv_cmd =
      app.add_subcommand("critical-values", "tabulate Monte Carlo critical values");
  cv_cmd->add_option("--stat", c_stats, "statistic spec (repeatable)")
      ->capture_default_str();
  cv_cmd->add_option("--n", c_sizes, "sample size (repeatable)")->required();
  add_common(cv_cmd, c_opts);
  cv_cmd->add_option("--cv-cache", c_opts.cv_cache_path,
                     "critical-value cache file (read/write)");

  // power
  CommonOpts p_opts;
  p_opts.format = "csv";
  std::string p_config;
  std::vector<std::string> p_families, p_stats;
  std::vector<int> p_sizes;
  std::uint64_t p_cv_reps = 100000;
  auto* power_cmd = app.add_subcommand(
      "power", "empirical power table over (alternative, n, statistic)");
  power_cmd->add_option("--config", p_config, "JSON study config");
  power_cmd->add_option("--family", p_families, "alternative family spec (repeatable)");
  power_cmd->add_option("--n", p_sizes, "sample size (repeatable)");
  power_cmd->add_option("--stat", p_stats, "statistic spec (repeatable)");
  power_cmd->add_option("--cv-reps", p_cv_reps,
                        "null replications for critical values")
      ->capture_default_str();
  add_common(power_cmd, p_opts);
  power_cmd->add_option("--cv-cache", p_opts.cv_cache_path,
                        "critical-value cache file (read/write)");

  // efficacy
  CommonOpts e_opts;
  std::vector<std::string> e_stats{"greenwood", "moran", "rao", "entropy"};
  std::string e_direction = "linear";
  bool e_co = false;
  auto* eff_cmd = app.add_subcommand(
      "efficacy", "local-alternative efficacy of the statistics");
  eff_cmd->add_option("--stat", e_stats, "h function name (repeatable)")
      ->capture_default_str();
  eff_cmd->add_option("--l", e_direction,
                      "perturbation direction: linear|cosine|quadratic")
      ->capture_default_str();
  eff_cmd->add_flag("--co", e_co, "fold the direction for centre-outward spacings");
  add_common(eff_cmd, e_opts, false);

  // hellinger
  CommonOpts h_opts;
  std::vector<std::string> h_families;
  auto* hell_cmd = app.add_subcommand(
      "hellinger", "Hellinger distance to uniform, direct and centre-outward");
  hell_cmd->add_option("--family", h_families, "family spec (repeatable)")->required();
  add_common(hell_cmd, h_opts, false);

  // lemma-checks
  CommonOpts l_opts;
  l_opts.reps = 100000;
  int l_nobs = 19;
  auto* lemma_cmd = app.add_subcommand(
      "lemma-checks",
      "distributional equality and Hellinger contraction diagnostics");
  lemma_cmd->add_option("--n-obs", l_nobs, "sample size for the spacings check")
      ->capture_default_str();
  add_common(lemma_cmd, l_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (test_cmd->parsed()) {
      return cmd_test(t_opts, t_input, t_stats, t_null, t_method);
    }
    if (cv_cmd->parsed()) {
      return cmd_critical_values(c_opts, c_stats, c_sizes);
    }
    if (power_cmd->parsed()) {
      if (p_config.empty() &&
          (p_families.empty() || p_sizes.empty() || p_stats.empty())) {
        std::cerr << "power: pass --config or all of --family/--n/--stat\n";
        return kExitBadConfig;
      }
      return cmd_power(p_opts, p_config, p_families, p_sizes, p_stats, p_cv_reps);
    }
    if (eff_cmd->parsed()) {
      return cmd_efficacy(e_opts, e_stats, e_direction, e_co);
    }
    if (hell_cmd->parsed()) {
      return cmd_hellinger(h_opts, h_families);
    }
    if (lemma_cmd->parsed()) {
      return cmd_lemma_checks(l_opts, l_nobs);
    }
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  return kExitOk;
}
