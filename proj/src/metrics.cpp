#include "pmsbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

void require_same_n(const Labelling& a, const Labelling& b) {
  if (a.n() != b.n()) throw InvalidArgument("labellings have different vertex counts");
}

// Rows index the smaller class set after this call.
Confusion oriented(const Labelling& theta, const Labelling& eta) {
  Confusion c = confusion_matrix(theta, eta);
  if (theta.ell() <= eta.ell()) return c;
  Confusion t(c[0].size(), std::vector<int>(c.size()));
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; b < c[a].size(); ++b) t[b][a] = c[a][b];
  return t;
}

// Visits every injection rows -> columns as a vector col_of_row.
template <typename F>
void for_each_injection(std::size_t rows, std::size_t cols, F&& f) {
  std::vector<int> cols_idx(cols);
  std::iota(cols_idx.begin(), cols_idx.end(), 0);
  // Permutations of all columns; the first `rows` entries give the injection.
  // Skip duplicates caused by the unused tail by requiring the tail sorted.
  do {
    if (std::is_sorted(cols_idx.begin() + static_cast<std::ptrdiff_t>(rows), cols_idx.end())) {
      f(cols_idx);
    }
  } while (std::next_permutation(cols_idx.begin(), cols_idx.end()));
}

void check_cap(const Labelling& theta, const Labelling& eta, const EnumerationLimits& limits) {
  if (std::max(theta.ell(), eta.ell()) > limits.max_perm_classes) {
    throw Infeasible("exhaustive search over " +
                     std::to_string(std::max(theta.ell(), eta.ell())) +
                     " classes exceeds the permutation cap " +
                     std::to_string(limits.max_perm_classes));
  }
}

// Maximum-weight injection of rows into columns (rows <= cols). Classic
// potential-based Hungarian method on costs = -weight.
long long max_assignment(const Confusion& w) {
  const std::size_t n = w.size(), m = w[0].size();
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      long long delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const long long cur = -static_cast<long long>(w[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long long total = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) total += w[p[j] - 1][j - 1];
  }
  return total;
}

}  // namespace

Confusion confusion_matrix(const Labelling& theta, const Labelling& eta) {
  require_same_n(theta, eta);
  Confusion c(static_cast<std::size_t>(theta.ell()),
              std::vector<int>(static_cast<std::size_t>(eta.ell()), 0));
  for (std::size_t i = 0; i < theta.n(); ++i) ++c[theta[i]][eta[i]];
  return c;
}

int r_distance(const Labelling& theta, const Labelling& eta) {
  const Confusion c = confusion_matrix(theta, eta);
  const std::size_t rows = c.size(), cols = c[0].size();
  int r = 0;
  auto second = [](std::vector<int> line) {
    if (line.size() < 2) return 0;
    std::nth_element(line.begin(), line.begin() + 1, line.end(), std::greater<>());
    return line[1];
  };
  for (std::size_t a = 0; a < rows; ++a) r = std::max(r, second(c[a]));
  for (std::size_t b = 0; b < cols; ++b) {
    std::vector<int> col(rows);
    for (std::size_t a = 0; a < rows; ++a) col[a] = c[a][b];
    r = std::max(r, second(std::move(col)));
  }
  return r;
}

int r_distance_exhaustive(const Labelling& theta, const Labelling& eta,
                          const EnumerationLimits& limits) {
  check_cap(theta, eta, limits);
  const Confusion c = oriented(theta, eta);
  const std::size_t rows = c.size(), cols = c[0].size();
  int best = std::numeric_limits<int>::max();
  for_each_injection(rows, cols, [&](const std::vector<int>& col_of) {
    int worst = 0;
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b)
        if (static_cast<int>(b) != col_of[a]) worst = std::max(worst, c[a][b]);
    best = std::min(best, worst);
  });
  return best;
}

int m_distance(const Labelling& theta, const Labelling& eta) {
  const Confusion c = oriented(theta, eta);
  return static_cast<int>(static_cast<long long>(theta.n()) - max_assignment(c));
}

int m_distance_exhaustive(const Labelling& theta, const Labelling& eta,
                          const EnumerationLimits& limits) {
  check_cap(theta, eta, limits);
  const Confusion c = oriented(theta, eta);
  int best_agree = 0;
  for_each_injection(c.size(), c[0].size(), [&](const std::vector<int>& col_of) {
    int agree = 0;
    for (std::size_t a = 0; a < c.size(); ++a) agree += c[a][col_of[a]];
    best_agree = std::max(best_agree, agree);
  });
  return static_cast<int>(theta.n()) - best_agree;
}

std::vector<Labelling> ring_members(const RingSpec& spec, const ModelFamily& family,
                                    const EnumerationLimits& limits) {
  const int ell0 = spec.center.ell();
  if (!family.contains(spec.center)) throw InvalidArgument("ring center is not in the family");
  if (spec.k < 0 || spec.k > family.m_max(ell0) / 2) {
    throw InvalidArgument("ring radius must lie in [0, m_max/2] = [0, " +
                          std::to_string(family.m_max(ell0) / 2) + "]");
  }
  std::vector<Labelling> out;
  for_each_labelling(
      family, ell0,
      [&](const Labelling& eta) {
        if (r_distance(spec.center, eta) == spec.k) out.push_back(eta);
      },
      limits);
  return out;
}

bool in_ball(const BallSpec& spec, const Labelling& theta) {
  if (spec.metric == BallMetric::R) {
    return theta.ell() == spec.center.ell() && r_distance(spec.center, theta) <= spec.k;
  }
  return m_distance(spec.center, theta) <= spec.k;
}

std::vector<Labelling> ball_members(const BallSpec& spec, const ModelFamily& family,
                                    const EnumerationLimits& limits) {
  if (spec.k < 0) throw InvalidArgument("ball radius must be nonnegative");
  std::vector<Labelling> out;
  std::optional<int> ell;
  if (spec.metric == BallMetric::R) ell = spec.center.ell();
  for_each_labelling(
      family, ell,
      [&](const Labelling& eta) {
        if (in_ball(spec, eta)) out.push_back(eta);
      },
      limits);
  return out;
}

double stirling_second_kind(int n, int ell) {
  if (n < 0 || ell < 0) throw InvalidArgument("stirling numbers need n, l >= 0");
  if (ell > n) return 0.0;
  // S(i, j) = j S(i-1, j) + S(i-1, j-1); exact in doubles while below 2^53.
  std::vector<double> row(static_cast<std::size_t>(ell) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, ell); j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0.0;
  }
  return row[ell];
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double StirlingBound::value() const { return std::exp(log_value); }

StirlingBound stirling_upper_bound(int n, int ell) {
  if (ell < 1 || ell > n) throw InvalidArgument("stirling bound needs 1 <= l <= n");
  StirlingBound b;
  b.log_value = std::log(0.5) + log_binomial(n, ell) + (n - ell) * std::log(ell);
  b.degenerate = ell == 1 || ell == n;
  return b;
}

double log_ring_cardinality_bound(int n, int ell, int k) {
  if (k < 0 || ell < 1) throw InvalidArgument("ring bound needs k >= 0, l >= 1");
  const double e = static_cast<double>(ell) * (ell - 1);
  return k * e * std::log(2.0) + log_binomial(static_cast<double>(n) * (ell - 1), e * k);
}

double log_ring_cardinality_bound_loose(int n, int ell, int k) {
  if (k < 1 || ell < 1) throw InvalidArgument("loose ring bound needs k >= 1, l >= 1");
  const double e = static_cast<double>(ell) * (ell - 1) * k;
  return e * std::log(2.0 * std::exp(1.0) * n / (static_cast<double>(k) * ell));
}

double cross_model_d_lower_bound(const ModelFamily& family, int ell0, int ell) {
  family.require_ordering();
  const int lo = std::min(ell0, ell), hi = std::max(ell0, ell);
  return 0.5 * family.n() * (family.m_min(lo) - family.m_max(hi));
}

long long ring_d_lower_bound(int m_min, int k) {
  if (k < 0) throw InvalidArgument("ring radius must be nonnegative");
  return 2LL * k * std::max(m_min - k, 0);
}

}  // namespace pmsbm
