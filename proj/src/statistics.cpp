#include "sgof/statistics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sgof {

namespace {

double h_greenwood(double x) { return x * x; }

double h_moran(double x) {
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(x);
}

double h_rao(double x) { return std::fabs(x - 1.0); }

double h_entropy(double x) {
  if (x == 0.0) return 0.0;  // continuous extension of x log x
  return x * std::log(x);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char ch) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  });
  return out;
}

}  // namespace

HFunction::HFunction(HKind kind, std::string name, std::function<double(double)> fn)
    : kind_(kind), name_(std::move(name)), custom_(std::move(fn)) {}

HFunction HFunction::greenwood() { return HFunction(HKind::Greenwood, "greenwood", {}); }
HFunction HFunction::moran() { return HFunction(HKind::Moran, "moran", {}); }
HFunction HFunction::rao() { return HFunction(HKind::Rao, "rao", {}); }
HFunction HFunction::entropy() { return HFunction(HKind::Entropy, "entropy", {}); }

HFunction HFunction::custom(std::string name, std::function<double(double)> fn) {
  if (!fn) throw std::invalid_argument("HFunction::custom: empty function");
  return HFunction(HKind::Custom, std::move(name), std::move(fn));
}

HFunction HFunction::parse(std::string_view name) {
  const std::string s = lower(name);
  if (s == "greenwood") return greenwood();
  if (s == "moran") return moran();
  if (s == "rao") return rao();
  if (s == "entropy") return entropy();
  throw std::invalid_argument("unknown h function '" + std::string(name) + "'");
}

std::span<const HFunction> HFunction::builtins() {
  static const std::array<HFunction, 4> all = {greenwood(), moran(), rao(), entropy()};
  return all;
}

double HFunction::operator()(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("HFunction: argument must be >= 0");
  switch (kind_) {
    case HKind::Greenwood: return h_greenwood(x);
    case HKind::Moran: return h_moran(x);
    case HKind::Rao: return h_rao(x);
    case HKind::Entropy: return h_entropy(x);
    case HKind::Custom: return custom_(x);
  }
  return 0.0;
}

double statistic_over_gaps(std::span<const double> gaps, int n_effective,
                           int step, const HFunction& h, bool* degenerate) {
  const double scale = static_cast<double>(n_effective) / static_cast<double>(step);
  double sum = 0.0;
  bool degen = false;
  switch (h.kind()) {
    case HKind::Greenwood:
      for (double g : gaps) {
        const double x = scale * g;
        sum += x * x;
      }
      break;
    case HKind::Moran:
      for (double g : gaps) {
        const double x = scale * g;
        if (x <= 0.0) {
          degen = true;
          sum = std::numeric_limits<double>::infinity();
          break;
        }
        sum -= std::log(x);
      }
      break;
    case HKind::Rao:
      for (double g : gaps) sum += std::fabs(scale * g - 1.0);
      break;
    case HKind::Entropy:
      for (double g : gaps) {
        const double x = scale * g;
        if (x > 0.0) sum += x * std::log(x);
      }
      break;
    case HKind::Custom:
      for (double g : gaps) sum += h(scale * g);
      break;
  }
  const double value = sum / static_cast<double>(gaps.size());
  if (!std::isfinite(value)) degen = true;
  if (degenerate) *degenerate = degen;
  return value;
}

StatisticValue statistic(const SpacingsVector& gaps, const HFunction& h) {
  if (gaps.gaps.empty()) throw std::invalid_argument("statistic: empty gap list");
  StatisticValue out;
  out.h_name = h.name();
  out.scheme = gaps.scheme;
  out.n_effective = gaps.n_effective;
  out.value = statistic_over_gaps(gaps.gaps, gaps.n_effective, gaps.scheme.step, h,
                                  &out.degenerate);
  return out;
}

StatisticValue combined_max_statistic(const Sample& s, const HFunction& h) {
  const StatisticValue usual = statistic(simple_spacings(s, Ordering::Usual), h);
  const StatisticValue co = statistic(simple_spacings(s, Ordering::CentreOutward), h);
  StatisticValue out = usual.value >= co.value ? usual : co;
  // NaN from a custom h wins nothing above; fall back to the degenerate side.
  if (std::isnan(out.value)) out = std::isnan(usual.value) ? usual : co;
  return out;
}

StatSpec StatSpec::parse(std::string_view spec) {
  const std::string s = lower(spec);
  StatSpec out;
  std::size_t pos = s.find(':');
  out.h = HFunction::parse(s.substr(0, pos));
  out.scheme = SpacingScheme{};
  out.combined_max = false;

  while (pos != std::string::npos) {
    const std::size_t start = pos + 1;
    pos = s.find(':', start);
    const std::string token =
        s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (token == "co") {
      out.scheme.ordering = Ordering::CentreOutward;
    } else if (token == "max") {
      out.combined_max = true;
    } else if (token.rfind("m=", 0) == 0) {
      int m = 0;
      const char* first = token.data() + 2;
      const char* last = token.data() + token.size();
      const auto res = std::from_chars(first, last, m);
      if (res.ec != std::errc() || res.ptr != last || m < 1) {
        throw std::invalid_argument("statistic spec: bad step in '" + std::string(spec) + "'");
      }
      out.scheme.step = m;
      // the step token must be followed by the layout
      if (pos == std::string::npos) {
        throw std::invalid_argument("statistic spec: missing disjoint|overlap after m=");
      }
      const std::size_t lstart = pos + 1;
      pos = s.find(':', lstart);
      const std::string layout =
          s.substr(lstart, pos == std::string::npos ? std::string::npos : pos - lstart);
      if (layout == "disjoint") {
        out.scheme.layout = Layout::Disjoint;
      } else if (layout == "overlap") {
        out.scheme.layout = Layout::Overlapping;
      } else {
        throw std::invalid_argument("statistic spec: unknown layout '" + layout + "'");
      }
    } else {
      throw std::invalid_argument("statistic spec: unknown token '" + token + "'");
    }
  }
  if (out.combined_max &&
      (out.scheme.ordering != Ordering::Usual || !out.scheme.simple())) {
    throw std::invalid_argument("statistic spec: ':max' cannot combine with ':co' or ':m='");
  }

  out.canonical = out.h.name();
  if (out.combined_max) {
    out.canonical += ":max";
  } else {
    if (out.scheme.ordering == Ordering::CentreOutward) out.canonical += ":co";
    if (!out.scheme.simple()) {
      out.canonical += ":m=" + std::to_string(out.scheme.step) + ":" +
                       to_string(out.scheme.layout);
    }
  }
  return out;
}

StatisticValue StatSpec::evaluate(const Sample& s) const {
  if (combined_max) return combined_max_statistic(s, h);
  if (scheme.simple()) return statistic(simple_spacings(s, scheme.ordering), h);
  return statistic(m_step_spacings(s, scheme), h);
}

}  // namespace sgof
