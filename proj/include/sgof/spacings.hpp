#ifndef SGOF_SPACINGS_HPP
#define SGOF_SPACINGS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sgof {

enum class Ordering { Usual, CentreOutward };
enum class Layout { Disjoint, Overlapping };

struct SpacingScheme {
  Ordering ordering = Ordering::Usual;
  int step = 1;
  Layout layout = Layout::Disjoint;

  bool simple() const { return step == 1; }
  friend bool operator==(const SpacingScheme&, const SpacingScheme&) = default;
};

std::string to_string(Ordering o);
std::string to_string(Layout l);

// A batch of observations already on the null scale (values in [0,1]).
class Sample {
 public:
  explicit Sample(std::vector<double> values);  // validates range, non-empty
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Gaps between consecutive (anchored) order statistics. For a sample of N
// observations there are N+1 simple gaps summing to 1; n_effective is that
// simple-gap count regardless of step/layout.
struct SpacingsVector {
  std::vector<double> gaps;
  SpacingScheme scheme;
  int n_effective = 0;
};

// Centre-outward rank under the uniform null: |2x - 1|. Extremes map to 1,
// the median to 0.
double co_rank(double x);

SpacingsVector simple_spacings(const Sample& s, Ordering ordering);
SpacingsVector m_step_spacings(const Sample& s, const SpacingScheme& scheme);

// Low-level kernels used by the Monte Carlo engine on preallocated buffers.
// `sorted` must be ascending; writes sorted.size()+1 gaps anchored at 0 and 1.
void gaps_from_sorted(std::span<const double> sorted, std::span<double> gaps_out);
// Window sums of simple gaps: overlapping -> n-m+1 windows, disjoint -> n/m.
void window_sums(std::span<const double> simple_gaps, int step, Layout layout,
                 std::vector<double>& out);

}  // namespace sgof

#endif  // SGOF_SPACINGS_HPP
