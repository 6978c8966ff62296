#include "pmsbm/labelling.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "pmsbm/error.hpp"

namespace pmsbm {

Labelling::Labelling(Canonical, std::vector<int> labels) : labels_(std::move(labels)) {
  int ell = 0;
  for (int c : labels_) ell = std::max(ell, c + 1);
  class_sizes_.assign(static_cast<std::size_t>(ell), 0);
  for (int c : labels_) ++class_sizes_[static_cast<std::size_t>(c)];
  sizes_ = class_sizes_;
  std::sort(sizes_.begin(), sizes_.end());
}

Labelling Labelling::from_labels(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("labelling needs at least one vertex");
  std::unordered_map<int, int> rename;
  std::vector<int> canonical;
  canonical.reserve(labels.size());
  for (int raw : labels) {
    auto [it, inserted] = rename.try_emplace(raw, static_cast<int>(rename.size()));
    canonical.push_back(it->second);
  }
  return Labelling(Canonical{}, std::move(canonical));
}

Labelling Labelling::parse(std::string_view text) {
  std::vector<int> raw;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                 text[pos] == '\r' || text[pos] == ',')) {
      ++pos;
    }
    if (pos >= text.size()) break;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) {
      throw ParseError("labelling: expected an integer at offset " + std::to_string(pos));
    }
    raw.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  if (raw.empty()) throw ParseError("labelling: no labels");
  return from_labels(raw);
}

Labelling Labelling::blocks(std::span<const int> sizes) {
  std::vector<int> labels;
  int c = 0;
  for (int m : sizes) {
    if (m <= 0) throw InvalidArgument("class sizes must be positive");
    labels.insert(labels.end(), static_cast<std::size_t>(m), c++);
  }
  if (labels.empty()) throw InvalidArgument("labelling needs at least one vertex");
  return Labelling(Canonical{}, std::move(labels));
}

std::string Labelling::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(labels_[i] + 1);
  }
  return out;
}

std::size_t LabellingHash::operator()(const Labelling& theta) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (int c : theta.labels()) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string format_sizes(const SizeVector& sizes) {
  std::string out = "(";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes[i]);
  }
  return out + ")";
}

}  // namespace pmsbm
