#pragma once

#include <vector>

#include "pmsbm/enumerate.hpp"
#include "pmsbm/labelling.hpp"
#include "pmsbm/model_family.hpp"

namespace pmsbm {

// counts[a][b] = #{i : theta_i = a, eta_i = b} over canonical classes.
using Confusion = std::vector<std::vector<int>>;
Confusion confusion_matrix(const Labelling& theta, const Labelling& eta);

// Minimum over representations of the largest off-diagonal overlap count.
// A representation pair amounts to an injection of the smaller class set into
// the larger one (the "diagonal"); every other cell is off-diagonal. The
// optimum is therefore the smallest t such that the cells above t form a
// matching, i.e. the largest second-highest entry over all rows and columns.
int r_distance(const Labelling& theta, const Labelling& eta);
// Same quantity by trying every injection; Infeasible above the class cap.
int r_distance_exhaustive(const Labelling& theta, const Labelling& eta,
                          const EnumerationLimits& limits = {});

// Hamming distance minimized over representations: n minus the largest total
// agreement of an injection between class sets (Hungarian algorithm).
int m_distance(const Labelling& theta, const Labelling& eta);
int m_distance_exhaustive(const Labelling& theta, const Labelling& eta,
                          const EnumerationLimits& limits = {});

// Labellings of the center's class count at r-distance exactly k.
struct RingSpec {
  Labelling center;
  int k = 0;
};
std::vector<Labelling> ring_members(const RingSpec& spec, const ModelFamily& family,
                                    const EnumerationLimits& limits = {});

enum class BallMetric { Hamming, R };
// Hamming balls range over the whole family; r-balls stay inside the
// center's class count.
struct BallSpec {
  Labelling center;
  int k = 0;
  BallMetric metric = BallMetric::Hamming;
};
bool in_ball(const BallSpec& spec, const Labelling& theta);
std::vector<Labelling> ball_members(const BallSpec& spec, const ModelFamily& family,
                                    const EnumerationLimits& limits = {});

// Number of partitions of n elements into exactly ell nonempty blocks.
double stirling_second_kind(int n, int ell);

// log of 1/2 C(n, l) l^(n - l). The bound holds for 1 <= l <= n - 1; at
// l = n it gives 1/2 < 1, and at l = 1 the space is a single point, so both
// ends are reported as degenerate.
struct StirlingBound {
  double log_value = 0.0;
  bool degenerate = false;
  double value() const;
};
StirlingBound stirling_upper_bound(int n, int ell);

// log of 2^(k l (l-1)) C(n (l-1), l (l-1) k); -inf when the binomial is zero.
double log_ring_cardinality_bound(int n, int ell, int k);
// log of (2 e n / (k l))^(l (l-1) k), k >= 1.
double log_ring_cardinality_bound_loose(int n, int ell, int k);

// 1/2 n (m_min(l0 ^ l) - m_max(l0 v l)). Throws AssumptionViolation when the
// family breaks the class-size ordering.
double cross_model_d_lower_bound(const ModelFamily& family, int ell0, int ell);
// 2 k (m_min - k)^+.
long long ring_d_lower_bound(int m_min, int k);

double log_binomial(double n, double k);

}  // namespace pmsbm
