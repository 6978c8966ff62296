#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmsbm/labelling.hpp"

namespace pmsbm {

// Integer bounds lo <= m_i <= hi of the size window n/l -+ n/(4 L^2), rounded
// toward the interior.
struct SizeWindow {
  int lo = 0;
  int hi = 0;
};

// The admissible size vectors M_{n,l} for every class count l. The labelling
// space of the family is the union over l of all labellings whose sorted size
// vector lies in M_{n,l}.
class ModelFamily {
 public:
  // Explicit size vectors; each is sorted ascending, duplicates are dropped.
  static ModelFamily from_size_vectors(int n, std::vector<SizeVector> vectors);
  // All l-vectors with entries in the window n/l -+ n/(4L^2), l = 1..L.
  static ModelFamily from_window(int n, int max_classes);
  // Every size vector with at most `max_classes` classes.
  static ModelFamily all_partitions(int n, int max_classes);

  int n() const noexcept { return n_; }
  // L_n: the largest class count considered (window parameter for window
  // families, otherwise the largest l with M_{n,l} non-empty).
  int max_classes() const noexcept { return max_classes_; }
  bool is_window() const noexcept { return !windows_.empty(); }
  std::optional<SizeWindow> window(int ell) const;

  // l with M_{n,l} non-empty, ascending.
  std::vector<int> class_counts() const;
  bool has_class_count(int ell) const { return allowed_.count(ell) != 0; }
  const std::vector<SizeVector>& size_vectors(int ell) const;
  std::vector<SizeVector> all_size_vectors() const;
  bool contains_sizes(const SizeVector& sizes) const;
  bool contains(const Labelling& theta) const;

  // Smallest / largest class size over M_{n,l}.
  int m_min(int ell) const;
  int m_max(int ell) const;
  // Largest class size over the whole family.
  int largest_class_size() const;

  // m_{l1,min} >= m_{l2,max} whenever l1 < l2.
  bool satisfies_ordering() const;
  void require_ordering() const;
  // m_{l,min} >= m_{l,max} / 2.
  bool satisfies_balance(int ell) const;
  bool satisfies_balance() const;

  // log |Theta_{n,l}| and log |Theta_n| from closed-form counts.
  double log_cardinality(int ell) const;
  double log_cardinality() const;
  // Exact counts; Infeasible if they overflow 64 bits.
  std::uint64_t cardinality(int ell) const;
  std::uint64_t cardinality() const;

  std::string describe() const;

 private:
  int n_ = 0;
  int max_classes_ = 0;
  std::map<int, std::vector<SizeVector>> allowed_;
  std::map<int, SizeWindow> windows_;
};

// Number of labellings (partitions) with the given class sizes:
// n! / (prod m_i! * prod over repeated sizes of multiplicity!).
double log_count_with_sizes(const SizeVector& sizes);
std::uint64_t count_with_sizes(const SizeVector& sizes);

// Nondecreasing vectors of `parts` integers in [lo, hi] summing to n.
std::vector<SizeVector> integer_partitions(int n, int parts, int lo, int hi);

}  // namespace pmsbm
