#ifndef SGOF_MONTECARLO_HPP
#define SGOF_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgof/families.hpp"
#include "sgof/rng.hpp"
#include "sgof/statistics.hpp"

namespace sgof {

// Stream purposes. Distinct purposes put null-calibration draws, power
// draws and the diagnostic checks on disjoint substreams of one master
// seed; p-values reuse the null-calibration draws so they stay consistent
// with the cached critical values.
namespace purpose {
inline constexpr std::uint64_t kCriticalValue = 1;
inline constexpr std::uint64_t kPower = 2;
inline constexpr std::uint64_t kFreenessUsual = 4;
inline constexpr std::uint64_t kFreenessCentreOutward = 5;
}  // namespace purpose

unsigned default_workers();

// Runs fn(begin, end, worker) on contiguous chunks of [0, count). Results
// must not depend on the chunking; the engine guarantees that by drawing
// from a fresh stream per replication.
void parallel_chunks(
    std::uint64_t count, unsigned workers,
    const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn);

// Empirical upper quantile: linear interpolation at the 1-based index
// (1-alpha)(R+1), clamped to the data range.
double empirical_upper_quantile(std::vector<double> values, double alpha);

// Null statistic values for every spec at sample size n_obs, evaluated on
// shared uniform draws (one stream per replication). Distribution-freeness
// lets centre-outward schemes reuse usual-ordering draws, so the simulated
// null depends only on (step, layout, h) and n_obs.
void simulate_null_statistics(std::span<const StatSpec> specs, int n_obs,
                              std::uint64_t replications,
                              std::uint64_t master_seed, unsigned workers,
                              std::vector<std::vector<double>>& values);

// File-backed critical-value cache. Keys carry everything that determines
// the value: statistic, n, alpha, replication count, RNG algorithm, seed.
class CvCache {
 public:
  static std::string key(const StatSpec& spec, int n_obs, double alpha,
                         std::uint64_t replications, std::uint64_t master_seed);

  std::optional<double> lookup(const std::string& key) const;
  void store(const std::string& key, double value);
  std::size_t size() const { return entries_.size(); }

  bool load_file(const std::string& path);  // merges; false if unreadable
  void save_file(const std::string& path) const;

 private:
  std::map<std::string, double> entries_;
};

// Upper-tail Monte Carlo critical value under the uniform null.
double critical_value(const StatSpec& spec, int n_obs, double alpha,
                      std::uint64_t replications, std::uint64_t master_seed,
                      unsigned workers = 0, CvCache* cache = nullptr);

enum class PValueMethod { MonteCarlo, AsymptoticNormal };
enum class Decision { FailToReject, Reject };

struct TestReport {
  StatisticValue statistic;
  std::string stat_spec;
  double alpha = 0.05;
  double p_value = 1.0;
  double critical_value = 0.0;
  Decision decision = Decision::FailToReject;
  PValueMethod method = PValueMethod::MonteCarlo;
  std::uint64_t replications = 0;  // Monte Carlo only
  std::uint64_t seed = 0;          // Monte Carlo only
  bool degenerate = false;
};

// Upper-tail test of uniformity for one statistic spec. Monte Carlo
// p-values use the (1 + #{null >= observed}) / (R + 1) convention; a
// degenerate statistic (infinite, e.g. moran over a tied sample) rejects
// with p-value 0.
TestReport run_test(const Sample& s, const StatSpec& spec, double alpha,
                    PValueMethod method, std::uint64_t replications,
                    std::uint64_t master_seed, unsigned workers = 0,
                    CvCache* cache = nullptr);

struct PowerStudyConfig {
  std::vector<AlternativeFamily> alternatives;
  std::vector<int> sample_sizes;
  std::vector<StatSpec> statistics;
  double alpha = 0.05;
  std::uint64_t replications = 10000;
  std::uint64_t cv_replications = 100000;
  std::uint64_t master_seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct PowerTable {
  struct Row {
    std::string alternative;
    int n = 0;
    std::vector<std::uint64_t> reject_counts;
  };

  std::vector<std::string> columns;  // canonical stat specs
  std::vector<Row> rows;
  double alpha = 0.05;
  std::uint64_t replications = 0;
  std::uint64_t cv_replications = 0;
  std::uint64_t master_seed = 0;
  std::string rng_algorithm;
  double wall_seconds = 0.0;  // metadata only, never serialized to CSV

  double rate(std::size_t row, std::size_t col) const;
  std::optional<double> rate(const std::string& alternative, int n,
                             const std::string& column) const;

  // Header `alternative,n,<columns...>`; cells are shortest-round-trip
  // decimals, so re-reading restores the exact doubles and two runs with
  // one seed produce byte-identical text.
  std::string to_csv() const;
  static PowerTable from_csv(const std::string& csv, std::uint64_t replications);

  std::string metadata_json(int indent = 2) const;  // config + seed + wall time
};

// Full power study: per (alternative, n) cell, `replications` samples are
// drawn on per-replication streams and every statistic is evaluated against
// its shared Monte Carlo critical value. Deterministic for a fixed master
// seed regardless of worker count.
PowerTable power_study(const PowerStudyConfig& config, CvCache* cache = nullptr);

struct FreenessResult {
  std::string h_name;
  double ks_statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample KS comparison of the simulated null distributions of the
// usual-spacings and centre-outward-spacings statistics, one result per
// built-in h. Under uniformity the two distributions coincide, so the
// p-values should look uniform.
std::vector<FreenessResult> distribution_freeness_check(int n_obs, std::uint64_t replications,
                                       std::uint64_t master_seed,
                                       unsigned workers = 0);

}  // namespace sgof

#endif  // SGOF_MONTECARLO_HPP
