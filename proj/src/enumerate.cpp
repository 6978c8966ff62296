#include "pmsbm/enumerate.hpp"

#include <algorithm>
#include <cmath>

#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

struct Walker {
  const ModelFamily& family;
  int n;
  int min_ell;
  int max_ell;
  int max_part;
  const std::function<void(const Labelling&)>& visit;
  std::optional<int> only_ell;
  std::vector<int> labels;
  std::vector<int> counts;

  void run(int pos, int used) {
    if (pos == n) {
      if (used < min_ell) return;
      if (only_ell && used != *only_ell) return;
      SizeVector sizes(counts.begin(), counts.begin() + used);
      std::sort(sizes.begin(), sizes.end());
      if (!family.contains_sizes(sizes)) return;
      visit(LabellingBuilder::from_canonical(labels));
      return;
    }
    // Not enough vertices left to open the classes still needed.
    if (used + (n - pos) < min_ell) return;
    const int top = std::min(used + 1, max_ell);
    for (int c = 0; c < top; ++c) {
      if (counts[c] >= max_part) continue;
      labels[pos] = c;
      ++counts[c];
      run(pos + 1, std::max(used, c + 1));
      --counts[c];
    }
  }
};

}  // namespace

void for_each_labelling(const ModelFamily& family, std::optional<int> ell,
                        const std::function<void(const Labelling&)>& visit,
                        const EnumerationLimits& limits) {
  const int n = family.n();
  if (n > limits.max_n) {
    throw Infeasible("enumeration of n = " + std::to_string(n) + " exceeds the cap n <= " +
                     std::to_string(limits.max_n) + "; use the mcmc engine");
  }
  const auto ells = family.class_counts();
  int min_ell = ells.front();
  int max_ell = ells.back();
  int max_part = family.largest_class_size();
  if (ell) {
    if (!family.has_class_count(*ell)) return;
    min_ell = max_ell = *ell;
    max_part = family.m_max(*ell);
  }
  Walker w{family, n, min_ell, max_ell, max_part, visit, ell,
           std::vector<int>(static_cast<std::size_t>(n), 0),
           std::vector<int>(static_cast<std::size_t>(max_ell), 0)};
  w.run(0, 0);
}

std::vector<Labelling> enumerate_space(const ModelFamily& family, std::optional<int> ell,
                                       const EnumerationLimits& limits) {
  std::vector<Labelling> out;
  for_each_labelling(family, ell, [&](const Labelling& t) { out.push_back(t); }, limits);
  return out;
}

Labelling sample_labelling_with_sizes(const SizeVector& sizes, Rng& rng) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] < 1) throw InvalidArgument("class sizes must be positive");
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[c]), static_cast<int>(c));
  }
  // Fisher-Yates with the generator's own bounded draw.
  for (std::size_t i = labels.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(labels[i - 1], labels[j]);
  }
  return Labelling::from_labels(labels);
}

Labelling sample_labelling_from_family(const ModelFamily& family, Rng& rng) {
  const auto vectors = family.all_size_vectors();
  std::vector<double> logw;
  for (const auto& v : vectors) logw.push_back(log_count_with_sizes(v));
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& w : logw) total += (w = std::exp(w - top));
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (u < logw[i] || i + 1 == vectors.size()) return sample_labelling_with_sizes(vectors[i], rng);
    u -= logw[i];
  }
  return sample_labelling_with_sizes(vectors.back(), rng);
}

}  // namespace pmsbm
