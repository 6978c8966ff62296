#include "pmsbm/model_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

void partitions_rec(int remaining, int parts, int lo, int hi, SizeVector& cur,
                    std::vector<SizeVector>& out) {
  if (parts == 0) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int v = lo; v <= hi; ++v) {
    // The remaining parts are all >= v.
    if (static_cast<long long>(v) * parts > remaining) break;
    if (static_cast<long long>(hi) * (parts - 1) < remaining - v) continue;
    cur.push_back(v);
    partitions_rec(remaining - v, parts - 1, v, hi, cur, out);
    cur.pop_back();
  }
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

std::vector<SizeVector> integer_partitions(int n, int parts, int lo, int hi) {
  std::vector<SizeVector> out;
  if (parts <= 0 || n <= 0) return out;
  lo = std::max(lo, 1);
  SizeVector cur;
  partitions_rec(n, parts, lo, hi, cur, out);
  return out;
}

double log_count_with_sizes(const SizeVector& sizes) {
  double n = 0;
  double acc = 0;
  for (int m : sizes) {
    n += m;
    acc -= std::lgamma(m + 1.0);
  }
  acc += std::lgamma(n + 1.0);
  SizeVector sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    acc -= std::lgamma(static_cast<double>(j - i) + 1.0);
    i = j;
  }
  return acc;
}

std::uint64_t count_with_sizes(const SizeVector& sizes) {
  __extension__ typedef unsigned __int128 u128;
  const u128 limit = std::numeric_limits<std::uint64_t>::max();
  SizeVector sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  // Product of binomials C(total, m_i) over classes, then divide by the
  // multiplicities of equal sizes.
  u128 count = 1;
  int total = 0;
  for (int m : sorted) {
    total += m;
    // multiply by C(total, m) incrementally: C(t, m) = prod_{k=1..m} (t - m + k) / k
    u128 binom = 1;
    for (int k = 1; k <= m; ++k) {
      binom = binom * static_cast<u128>(total - m + k) / static_cast<u128>(k);
      if (binom > limit) throw Infeasible("labelling count overflows 64 bits");
    }
    count *= binom;
    if (count > limit) throw Infeasible("labelling count overflows 64 bits");
  }
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    for (std::size_t f = 2; f <= j - i; ++f) count /= f;
    i = j;
  }
  return static_cast<std::uint64_t>(count);
}

ModelFamily ModelFamily::from_size_vectors(int n, std::vector<SizeVector> vectors) {
  if (n < 1) throw InvalidArgument("family needs n >= 1");
  ModelFamily f;
  f.n_ = n;
  for (auto& v : vectors) {
    if (v.empty()) throw InvalidArgument("empty size vector");
    for (int m : v) {
      if (m < 1) throw InvalidArgument("class sizes must be positive");
    }
    if (std::accumulate(v.begin(), v.end(), 0) != n) {
      throw InvalidArgument("size vector " + format_sizes(v) + " does not sum to n = " +
                            std::to_string(n));
    }
    std::sort(v.begin(), v.end());
    auto& bucket = f.allowed_[static_cast<int>(v.size())];
    if (std::find(bucket.begin(), bucket.end(), v) == bucket.end()) bucket.push_back(v);
  }
  if (f.allowed_.empty()) throw InvalidArgument("family has no size vectors");
  for (auto& [ell, bucket] : f.allowed_) std::sort(bucket.begin(), bucket.end());
  f.max_classes_ = f.allowed_.rbegin()->first;
  return f;
}

ModelFamily ModelFamily::from_window(int n, int max_classes) {
  if (n < 1) throw InvalidArgument("family needs n >= 1");
  if (max_classes < 1 || max_classes > n) throw InvalidArgument("need 1 <= L <= n");
  ModelFamily f;
  f.n_ = n;
  f.max_classes_ = max_classes;
  const long long L2x4 = 4LL * max_classes * max_classes;
  for (int ell = 1; ell <= max_classes; ++ell) {
    // n/l - n/(4L^2) = n (4L^2 - l) / (4 l L^2), likewise for the upper end.
    const long long den = L2x4 * ell;
    const long long lo_num = static_cast<long long>(n) * (L2x4 - ell);
    const long long hi_num = static_cast<long long>(n) * (L2x4 + ell);
    SizeWindow w;
    w.lo = static_cast<int>(std::max<long long>(1, (lo_num + den - 1) / den));
    w.hi = static_cast<int>(hi_num / den);
    f.windows_[ell] = w;
    auto vectors = integer_partitions(n, ell, w.lo, w.hi);
    if (!vectors.empty()) f.allowed_[ell] = std::move(vectors);
  }
  if (f.allowed_.empty()) throw InvalidArgument("window family is empty");
  return f;
}

ModelFamily ModelFamily::all_partitions(int n, int max_classes) {
  if (n < 1) throw InvalidArgument("family needs n >= 1");
  if (max_classes < 1) throw InvalidArgument("need at least one class");
  ModelFamily f;
  f.n_ = n;
  f.max_classes_ = std::min(max_classes, n);
  for (int ell = 1; ell <= f.max_classes_; ++ell) {
    f.allowed_[ell] = integer_partitions(n, ell, 1, n);
  }
  return f;
}

std::optional<SizeWindow> ModelFamily::window(int ell) const {
  auto it = windows_.find(ell);
  if (it == windows_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> ModelFamily::class_counts() const {
  std::vector<int> out;
  for (const auto& [ell, v] : allowed_) out.push_back(ell);
  return out;
}

const std::vector<SizeVector>& ModelFamily::size_vectors(int ell) const {
  static const std::vector<SizeVector> kEmpty;
  auto it = allowed_.find(ell);
  return it == allowed_.end() ? kEmpty : it->second;
}

std::vector<SizeVector> ModelFamily::all_size_vectors() const {
  std::vector<SizeVector> out;
  for (const auto& [ell, v] : allowed_) out.insert(out.end(), v.begin(), v.end());
  return out;
}

bool ModelFamily::contains_sizes(const SizeVector& sizes) const {
  auto it = allowed_.find(static_cast<int>(sizes.size()));
  if (it == allowed_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), sizes);
}

bool ModelFamily::contains(const Labelling& theta) const {
  return static_cast<int>(theta.n()) == n_ && contains_sizes(theta.sizes());
}

int ModelFamily::m_min(int ell) const {
  const auto& vs = size_vectors(ell);
  if (vs.empty()) throw InvalidArgument("class count " + std::to_string(ell) + " not in family");
  int best = n_;
  for (const auto& v : vs) best = std::min(best, v.front());
  return best;
}

int ModelFamily::m_max(int ell) const {
  const auto& vs = size_vectors(ell);
  if (vs.empty()) throw InvalidArgument("class count " + std::to_string(ell) + " not in family");
  int best = 0;
  for (const auto& v : vs) best = std::max(best, v.back());
  return best;
}

int ModelFamily::largest_class_size() const {
  int best = 0;
  for (const auto& [ell, vs] : allowed_) best = std::max(best, m_max(ell));
  return best;
}

bool ModelFamily::satisfies_ordering() const {
  const auto ells = class_counts();
  for (std::size_t a = 0; a < ells.size(); ++a) {
    for (std::size_t b = a + 1; b < ells.size(); ++b) {
      if (m_min(ells[a]) < m_max(ells[b])) return false;
    }
  }
  return true;
}

void ModelFamily::require_ordering() const {
  if (!satisfies_ordering()) {
    throw AssumptionViolation(
        "class-size ordering violated: need m_min(l1) >= m_max(l2) for all l1 < l2 in " +
        describe());
  }
}

bool ModelFamily::satisfies_balance(int ell) const {
  return 2 * m_min(ell) >= m_max(ell);
}

bool ModelFamily::satisfies_balance() const {
  for (const auto& [ell, vs] : allowed_) {
    if (!satisfies_balance(ell)) return false;
  }
  return true;
}

double ModelFamily::log_cardinality(int ell) const {
  std::vector<double> logs;
  for (const auto& v : size_vectors(ell)) logs.push_back(log_count_with_sizes(v));
  return log_sum_exp(logs);
}

double ModelFamily::log_cardinality() const {
  std::vector<double> logs;
  for (const auto& [ell, vs] : allowed_) {
    for (const auto& v : vs) logs.push_back(log_count_with_sizes(v));
  }
  return log_sum_exp(logs);
}

std::uint64_t ModelFamily::cardinality(int ell) const {
  std::uint64_t total = 0;
  for (const auto& v : size_vectors(ell)) {
    const std::uint64_t c = count_with_sizes(v);
    if (total > std::numeric_limits<std::uint64_t>::max() - c) {
      throw Infeasible("family cardinality overflows 64 bits");
    }
    total += c;
  }
  return total;
}

std::uint64_t ModelFamily::cardinality() const {
  std::uint64_t total = 0;
  for (const auto& [ell, vs] : allowed_) {
    const std::uint64_t c = cardinality(ell);
    if (total > std::numeric_limits<std::uint64_t>::max() - c) {
      throw Infeasible("family cardinality overflows 64 bits");
    }
    total += c;
  }
  return total;
}

std::string ModelFamily::describe() const {
  std::string out = "n=" + std::to_string(n_) + " {";
  bool first = true;
  for (const auto& [ell, vs] : allowed_) {
    for (const auto& v : vs) {
      if (!first) out += ' ';
      first = false;
      out += format_sizes(v);
    }
  }
  return out + "}";
}

}  // namespace pmsbm
