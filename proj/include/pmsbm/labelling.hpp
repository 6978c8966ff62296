#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmsbm {

// Class sizes of a labelling, sorted ascending.
using SizeVector = std::vector<int>;

// A class assignment modulo permutation of class names. Stored as the
// restricted-growth string: labels_[0] == 0 and the first occurrence of class
// c + 1 comes after the first occurrence of class c. Two labellings are equal
// iff they induce the same partition of the vertices.
class Labelling {
 public:
  Labelling() = default;

  // Accepts any integer class names and canonicalizes them.
  static Labelling from_labels(std::span<const int> labels);
  static Labelling from_labels(std::initializer_list<int> labels) {
    return from_labels(std::span<const int>(labels.begin(), labels.size()));
  }
  // Space-separated integers, e.g. "1 1 2 2".
  static Labelling parse(std::string_view text);
  // The labelling 0^{m1} 1^{m2} ... with class sizes in the given order.
  static Labelling blocks(std::span<const int> sizes);

  std::size_t n() const noexcept { return labels_.size(); }
  int ell() const noexcept { return static_cast<int>(sizes_.size()); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const SizeVector& sizes() const noexcept { return sizes_; }
  // Size of the class containing vertex i.
  int class_size_of(std::size_t i) const { return class_sizes_[labels_[i]]; }
  bool same_class(std::size_t i, std::size_t j) const { return labels_[i] == labels_[j]; }

  // 1-based canonical labels separated by single spaces.
  std::string to_string() const;

  friend bool operator==(const Labelling& a, const Labelling& b) { return a.labels_ == b.labels_; }
  friend std::strong_ordering operator<=>(const Labelling& a, const Labelling& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  struct Canonical {};
  Labelling(Canonical, std::vector<int> labels);

  std::vector<int> labels_;
  std::vector<int> class_sizes_;  // indexed by canonical class
  SizeVector sizes_;

  friend class LabellingBuilder;
};

struct LabellingHash {
  std::size_t operator()(const Labelling& theta) const noexcept;
};

// Canonical restricted-growth labels -> Labelling without re-canonicalizing.
// Used by enumerators that already produce canonical strings.
class LabellingBuilder {
 public:
  static Labelling from_canonical(std::vector<int> labels) {
    return Labelling(Labelling::Canonical{}, std::move(labels));
  }
};

std::string format_sizes(const SizeVector& sizes);

}  // namespace pmsbm
