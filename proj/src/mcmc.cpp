#include "pmsbm/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "pmsbm/enumerate.hpp"
#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> class_sizes(const std::vector<int>& labels) {
  int k = 0;
  for (int c : labels) k = std::max(k, c + 1);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int c : labels) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

SizeVector sorted_sizes(const std::vector<int>& labels) {
  SizeVector s = class_sizes(labels);
  std::sort(s.begin(), s.end());
  return s;
}

// Keep class ids dense after a class empties: the last id takes its place.
void compact(std::vector<int>& labels, int emptied, int count) {
  const int last = count - 1;
  if (emptied == last) return;
  for (int& c : labels)
    if (c == last) c = emptied;
}

// Number of relabel targets for v: every other class, plus a fresh class
// when v does not sit alone.
int relabel_target_count(const std::vector<int>& sizes, int cls) {
  return static_cast<int>(sizes.size()) - 1 + (sizes[static_cast<std::size_t>(cls)] > 1 ? 1 : 0);
}

std::vector<int> apply_relabel(std::vector<int> labels, std::vector<int> sizes, std::size_t v,
                               int target) {
  const int from = labels[v];
  const int k = static_cast<int>(sizes.size());
  labels[v] = target;
  if (target == k) sizes.push_back(0);
  ++sizes[static_cast<std::size_t>(target)];
  if (--sizes[static_cast<std::size_t>(from)] == 0) compact(labels, from, static_cast<int>(sizes.size()));
  return labels;
}

}  // namespace

McmcSampler::McmcSampler(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
                         const McmcOptions& options, std::uint64_t seed)
    : graph_(graph), prior_(prior), n_(graph.n()), rng_(seed) {
  if (static_cast<int>(n_) != prior.family().n()) throw InvalidArgument("graph and family sizes differ");
  probs.validate_open();
  lp_ = std::log(probs.p);
  l1p_ = std::log1p(-probs.p);
  lq_ = std::log(probs.q);
  l1q_ = std::log1p(-probs.q);
  pairs_ = static_cast<long long>(graph.pair_count());
  edges_ = static_cast<long long>(graph.edge_count());
  adj_.assign(n_, std::vector<char>(n_, 0));
  for (auto [i, j] : graph.edges()) adj_[i][j] = adj_[j][i] = 1;
  const double total = options.swap_weight + options.relabel_weight + options.jump_weight;
  if (options.swap_weight < 0 || options.relabel_weight < 0 || options.jump_weight < 0 ||
      !(total > 0)) {
    throw InvalidArgument("move weights must be nonnegative with a positive sum");
  }
  w_swap_ = options.swap_weight / total;
  w_relabel_ = options.relabel_weight / total;
  w_jump_ = options.jump_weight / total;
  family_vectors_ = prior.family().all_size_vectors();
  for (const auto& m : family_vectors_) log_counts_.push_back(log_count_with_sizes(m));
  Labelling start = options.initial ? *options.initial
                                    : sample_labelling_from_family(prior.family(), rng_);
  reset(start);
}

void McmcSampler::reset(const Labelling& theta) {
  if (!prior_.family().contains(theta)) throw InvalidArgument("chain state must lie in the family");
  set_state(theta.labels());
}

void McmcSampler::set_state(std::vector<int> labels) {
  labels_ = std::move(labels);
  sizes_ = class_sizes(labels_);
  log_target_ = log_target_of(labels_);
}

Labelling McmcSampler::state() const { return Labelling::from_labels(labels_); }

double McmcSampler::log_prior_of(const std::vector<int>& labels) const {
  if (auto lm = prior_.log_mass_by_sizes(sorted_sizes(labels))) return *lm;
  return prior_.log_mass(Labelling::from_labels(labels));
}

double McmcSampler::log_target_of(const std::vector<int>& labels) const {
  const double lprior = log_prior_of(labels);
  if (std::isinf(lprior)) return kNegInf;
  long long wp = 0, we = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const int li = labels[i];
    const auto& row = adj_[i];
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (labels[j] == li) {
        ++wp;
        we += row[j];
      }
    }
  }
  return lprior + we * lp_ + (wp - we) * l1p_ + (edges_ - we) * lq_ +
         (pairs_ - wp - edges_ + we) * l1q_;
}

double McmcSampler::log_count_of(const std::vector<int>& labels) const {
  return log_count_with_sizes(sorted_sizes(labels));
}

void McmcSampler::accept_or_reject(MoveKind kind, std::vector<int> labels, double log_hastings) {
  auto& st = stats_[static_cast<int>(kind)];
  ++st.proposed;
  const double lt = log_target_of(labels);
  if (std::isinf(lt)) return;  // outside the family
  const double log_ratio = lt - log_target_ + log_hastings;
  if (log_ratio >= 0.0 || rng_.uniform() < std::exp(log_ratio)) {
    ++st.accepted;
    labels_ = std::move(labels);
    sizes_ = class_sizes(labels_);
    log_target_ = lt;
  }
}

void McmcSampler::step() {
  const double u = rng_.uniform();
  const int k = static_cast<int>(sizes_.size());
  if (u < w_swap_) {
    if (k < 2) return;  // nothing to swap; self loop
    const std::size_t i = static_cast<std::size_t>(rng_.below(n_));
    const int a = labels_[i];
    const std::uint64_t others = n_ - static_cast<std::size_t>(sizes_[static_cast<std::size_t>(a)]);
    std::uint64_t pick = rng_.below(others);
    std::size_t j = 0;
    for (;; ++j) {
      if (labels_[j] == a) continue;
      if (pick-- == 0) break;
    }
    std::vector<int> next = labels_;
    std::swap(next[i], next[j]);
    accept_or_reject(MoveKind::Swap, std::move(next), 0.0);
  } else if (u < w_swap_ + w_relabel_) {
    const std::size_t v = static_cast<std::size_t>(rng_.below(n_));
    const int a = labels_[v];
    const int targets = relabel_target_count(sizes_, a);
    if (targets == 0) return;
    int t = static_cast<int>(rng_.below(static_cast<std::uint64_t>(targets)));
    if (t >= a) ++t;  // skip v's own class; t == k opens a new class
    std::vector<int> next = apply_relabel(labels_, sizes_, v, t);
    const auto next_sizes = class_sizes(next);
    const double log_h = std::log(static_cast<double>(targets)) -
                         std::log(static_cast<double>(relabel_target_count(next_sizes, next[v])));
    accept_or_reject(MoveKind::Relabel, std::move(next), log_h);
  } else {
    const std::size_t m = static_cast<std::size_t>(rng_.below(family_vectors_.size()));
    const Labelling eta = sample_labelling_with_sizes(family_vectors_[m], rng_);
    const double log_h = log_counts_[m] - log_count_of(labels_);
    accept_or_reject(MoveKind::Jump, eta.labels(), log_h);
  }
}

std::vector<McmcSampler::Weighted> McmcSampler::local_proposals() const {
  std::vector<Weighted> out;
  const int k = static_cast<int>(sizes_.size());
  const double inv_n = 1.0 / static_cast<double>(n_);
  if (k < 2) {
    out.push_back({labels_, w_swap_, 0.0});
  } else {
    for (std::size_t i = 0; i < n_; ++i) {
      const int a = labels_[i];
      const double others = static_cast<double>(n_) - sizes_[static_cast<std::size_t>(a)];
      for (std::size_t j = 0; j < n_; ++j) {
        if (labels_[j] == a) continue;
        std::vector<int> next = labels_;
        std::swap(next[i], next[j]);
        out.push_back({std::move(next), w_swap_ * inv_n / others, 0.0});
      }
    }
  }
  for (std::size_t v = 0; v < n_; ++v) {
    const int a = labels_[v];
    const int targets = relabel_target_count(sizes_, a);
    if (targets == 0) {
      out.push_back({labels_, w_relabel_ * inv_n, 0.0});
      continue;
    }
    for (int t = 0; t <= k; ++t) {
      if (t == a || (t == k && sizes_[static_cast<std::size_t>(a)] == 1)) continue;
      std::vector<int> next = apply_relabel(labels_, sizes_, v, t);
      const auto next_sizes = class_sizes(next);
      const double log_h = std::log(static_cast<double>(targets)) -
                           std::log(static_cast<double>(relabel_target_count(next_sizes, next[v])));
      out.push_back({std::move(next), w_relabel_ * inv_n / targets, log_h});
    }
  }
  return out;
}

std::unordered_map<Labelling, double, LabellingHash> McmcSampler::kernel_row() const {
  std::unordered_map<Labelling, double, LabellingHash> row;
  const Labelling here = state();
  double moved = 0.0;
  auto add = [&](const std::vector<int>& labels, double prob, double log_h) {
    const double lt = log_target_of(labels);
    if (std::isinf(lt)) return;
    const double acc = std::min(1.0, std::exp(lt - log_target_ + log_h));
    const Labelling eta = Labelling::from_labels(labels);
    if (eta == here) return;
    row[eta] += prob * acc;
    moved += prob * acc;
  };
  for (const auto& w : local_proposals()) add(w.labels, w.prob, w.log_hastings);
  if (w_jump_ > 0) {
    const double here_count = log_count_of(labels_);
    for (std::size_t m = 0; m < family_vectors_.size(); ++m) {
      const auto single = ModelFamily::from_size_vectors(static_cast<int>(n_), {family_vectors_[m]});
      const double prob = w_jump_ / static_cast<double>(family_vectors_.size()) *
                          std::exp(-log_counts_[m]);
      for_each_labelling(single, std::nullopt, [&](const Labelling& eta) {
        add(eta.labels(), prob, log_counts_[m] - here_count);
      });
    }
  }
  row[here] += 1.0 - moved;
  return row;
}

Estimate McmcResult::estimate(const std::vector<char>& state_mask) const {
  Estimate e;
  const std::size_t n = trace.size();
  if (n == 0) return e;
  long long hits = 0;
  for (auto id : trace) hits += state_mask[id];
  e.mean = static_cast<double>(hits) / static_cast<double>(n);
  const std::size_t b = static_cast<std::size_t>(std::max(batches, 2));
  const std::size_t len = n / b;
  if (len < 2) {
    e.standard_error = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(n));
    return e;
  }
  std::vector<double> means(b, 0.0);
  for (std::size_t k = 0; k < b; ++k) {
    long long h = 0;
    for (std::size_t t = k * len; t < (k + 1) * len; ++t) h += state_mask[trace[t]];
    means[k] = static_cast<double>(h) / static_cast<double>(len);
  }
  double mu = 0.0;
  for (double m : means) mu += m;
  mu /= static_cast<double>(b);
  double ss = 0.0;
  for (double m : means) ss += (m - mu) * (m - mu);
  e.standard_error = std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
  return e;
}

Estimate McmcResult::estimate(const LabelSet& set) const {
  std::vector<char> mask(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) mask[i] = set(states[i]) ? 1 : 0;
  return estimate(mask);
}

std::unordered_map<Labelling, double, LabellingHash> McmcResult::distribution() const {
  std::unordered_map<Labelling, double, LabellingHash> out;
  const double total = static_cast<double>(trace.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (visits[i] > 0) out[states[i]] = static_cast<double>(visits[i]) / total;
  }
  return out;
}

bool size_vectors_connected(const ModelFamily& family) {
  const auto vectors = family.all_size_vectors();
  if (vectors.size() <= 1) return true;
  std::set<SizeVector> seen{vectors.front()};
  std::queue<SizeVector> todo;
  todo.push(vectors.front());
  while (!todo.empty()) {
    const SizeVector cur = todo.front();
    todo.pop();
    // Move one vertex from class a to class b, or to a fresh class.
    for (std::size_t a = 0; a < cur.size(); ++a) {
      for (std::size_t b = 0; b <= cur.size(); ++b) {
        if (a == b) continue;
        if (b == cur.size() && cur[a] == 1) continue;
        SizeVector next = cur;
        if (b == cur.size()) next.push_back(0);
        --next[a];
        ++next[b];
        next.erase(std::remove(next.begin(), next.end(), 0), next.end());
        std::sort(next.begin(), next.end());
        if (family.contains_sizes(next) && seen.insert(next).second) todo.push(next);
      }
    }
  }
  return seen.size() == vectors.size();
}

McmcResult mcmc_posterior(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
                          const McmcOptions& options, std::uint64_t seed) {
  if (options.steps < 1) throw InvalidArgument("mcmc needs at least one step");
  if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0)) {
    throw InvalidArgument("burn-in fraction must lie in [0, 1)");
  }
  McmcResult res;
  res.batches = options.batches;
  if (options.jump_weight == 0.0 && !size_vectors_connected(prior.family())) {
    res.warnings.push_back(
        "size vectors of the family are not linked by single-vertex relabels; the chain is "
        "reducible without the jump move");
  }
  McmcSampler sampler(graph, prior, probs, options, seed);
  const long long burn = static_cast<long long>(std::floor(options.burn_in_fraction *
                                                           static_cast<double>(options.steps)));
  std::unordered_map<Labelling, std::uint32_t, LabellingHash> ids;
  res.trace.reserve(static_cast<std::size_t>(options.steps - burn));
  for (long long t = 0; t < options.steps; ++t) {
    sampler.step();
    if (t < burn) continue;
    Labelling s = sampler.state();
    auto [it, fresh] = ids.emplace(s, static_cast<std::uint32_t>(res.states.size()));
    if (fresh) {
      res.states.push_back(std::move(s));
      res.visits.push_back(0);
    }
    ++res.visits[it->second];
    res.trace.push_back(it->second);
  }
  res.swap = sampler.stats(MoveKind::Swap);
  res.relabel = sampler.stats(MoveKind::Relabel);
  res.jump = sampler.stats(MoveKind::Jump);
  return res;
}

PosteriorTable empirical_posterior(const McmcResult& result, const Prior& prior) {
  auto space = std::make_shared<const PosteriorSpace>(prior, result.states);
  std::vector<double> log_mass(result.states.size());
  const double total = static_cast<double>(result.trace.size());
  for (std::size_t i = 0; i < log_mass.size(); ++i) {
    log_mass[i] = std::log(static_cast<double>(result.visits[i]) / total);
  }
  return PosteriorTable(std::move(space), std::move(log_mass), std::nan(""));
}

}  // namespace pmsbm
