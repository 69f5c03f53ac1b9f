#ifndef SGOF_STATISTICS_HPP
#define SGOF_STATISTICS_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "sgof/spacings.hpp"

namespace sgof {

enum class HKind { Greenwood, Moran, Rao, Entropy, Custom };

// Convex score applied to scaled gaps:
//   greenwood  x^2
//   moran      -log x   (+inf at 0)
//   rao        |x - 1|
//   entropy    x log x  (0 at 0 by continuity)
// Custom callers assert convexity and the usual moment conditions
// themselves; nothing is checked beyond finiteness where tests probe it.
class HFunction {
 public:
  static HFunction greenwood();
  static HFunction moran();
  static HFunction rao();
  static HFunction entropy();
  static HFunction custom(std::string name, std::function<double(double)> fn);
  static HFunction parse(std::string_view name);  // the four built-in names
  static std::span<const HFunction> builtins();

  double operator()(double x) const;
  HKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  HFunction(HKind kind, std::string name, std::function<double(double)> fn);

  HKind kind_;
  std::string name_;
  std::function<double(double)> custom_;
};

struct StatisticValue {
  double value = 0.0;
  bool degenerate = false;  // infinite/NaN, e.g. moran over a zero gap
  std::string h_name;
  SpacingScheme scheme;
  int n_effective = 0;
};

// (1/K) sum h(n g_i / m) over the gap list, K = #gaps, n = n_effective.
// For simple spacings this is the plain (1/n) sum h(n g_i); the /m keeps
// each scaled m-step gap at null mean 1.
StatisticValue statistic(const SpacingsVector& gaps, const HFunction& h);

// max over the usual-spacings and centre-outward simple-spacings statistics
// of the same sample.
StatisticValue combined_max_statistic(const Sample& s, const HFunction& h);

// Fast kernel for the engine: no SpacingsVector materialization.
double statistic_over_gaps(std::span<const double> gaps, int n_effective,
                           int step, const HFunction& h, bool* degenerate);

// Parsed statistic spec. Grammar:
//   <h>                       usual simple spacings
//   <h>:co                    centre-outward simple spacings
//   <h>:max                   max(usual, centre-outward)
//   <h>[:co]:m=<int>:disjoint|overlap   m-step spacings
// where <h> is greenwood|moran|rao|entropy (case-insensitive).
struct StatSpec {
  HFunction h = HFunction::greenwood();
  SpacingScheme scheme;
  bool combined_max = false;
  std::string canonical;

  static StatSpec parse(std::string_view spec);
  StatisticValue evaluate(const Sample& s) const;
};

}  // namespace sgof

#endif  // SGOF_STATISTICS_HPP
