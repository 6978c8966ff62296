#include "pmsbm/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "pmsbm/error.hpp"

namespace pmsbm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return kNegInf;
  const double m = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

PosteriorSpace::PosteriorSpace(Prior prior, const EnumerationLimits& limits)
    : prior_(std::move(prior)) {
  labellings_ = enumerate_space(prior_.family(), std::nullopt, limits);
  build_index();
}

PosteriorSpace::PosteriorSpace(Prior prior, std::vector<Labelling> labellings)
    : prior_(std::move(prior)), labellings_(std::move(labellings)) {
  build_index();
}

void PosteriorSpace::build_index() {
  log_prior_.reserve(labellings_.size());
  masks_.reserve(labellings_.size());
  index_.reserve(labellings_.size());
  for (std::size_t i = 0; i < labellings_.size(); ++i) {
    log_prior_.push_back(prior_.log_mass(labellings_[i]));
    masks_.emplace_back(labellings_[i]);
    if (!index_.emplace(labellings_[i], i).second) {
      throw InvalidArgument("duplicate labelling in posterior space");
    }
  }
}

std::size_t PosteriorSpace::index_of(const Labelling& theta) const {
  auto it = index_.find(theta);
  return it == index_.end() ? labellings_.size() : it->second;
}

std::vector<char> PosteriorSpace::mask(const LabelSet& set) const {
  std::vector<char> m(labellings_.size());
  for (std::size_t i = 0; i < labellings_.size(); ++i) m[i] = set(labellings_[i]) ? 1 : 0;
  return m;
}

PosteriorTable::PosteriorTable(std::shared_ptr<const PosteriorSpace> space,
                               std::vector<double> log_mass, double log_normalizer)
    : space_(std::move(space)), log_mass_(std::move(log_mass)), log_normalizer_(log_normalizer) {
  if (log_mass_.size() != space_->size()) throw InvalidArgument("table size mismatch");
  mass_.reserve(log_mass_.size());
  for (double lm : log_mass_) mass_.push_back(std::exp(lm));
}

double PosteriorTable::mass_of(const Labelling& theta) const {
  const std::size_t i = space_->index_of(theta);
  return i == size() ? 0.0 : mass_[i];
}

std::vector<std::size_t> PosteriorTable::order_by_mass() const {
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (log_mass_[a] != log_mass_[b]) return log_mass_[a] > log_mass_[b];
    return labelling(a) < labelling(b);
  });
  return idx;
}

void PosteriorTable::write_csv(std::ostream& out) const {
  out << "labelling,log_mass,mass\n";
  const auto old = out.precision(17);
  for (std::size_t i : order_by_mass()) {
    out << labelling(i).to_string() << ',' << log_mass_[i] << ',' << mass_[i] << '\n';
  }
  out.precision(old);
}

std::vector<double> log_likelihoods(const PosteriorSpace& space, const Graph& graph,
                                    const EdgeProbs& probs) {
  probs.validate_open();
  const long long pairs = static_cast<long long>(graph.pair_count());
  const long long edges = static_cast<long long>(graph.edge_count());
  const double lp = std::log(probs.p), l1p = std::log1p(-probs.p);
  const double lq = std::log(probs.q), l1q = std::log1p(-probs.q);
  std::vector<double> out(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const PairMask& m = space.pair_mask(i);
    if (m.n() != graph.n()) throw InvalidArgument("graph and family sizes differ");
    const long long wp = static_cast<long long>(m.count());
    const long long we = static_cast<long long>(m.count_edges(graph));
    out[i] = we * lp + (wp - we) * l1p + (edges - we) * lq + (pairs - wp - edges + we) * l1q;
  }
  return out;
}

PosteriorTable exact_posterior(std::shared_ptr<const PosteriorSpace> space, const Graph& graph,
                               const EdgeProbs& probs) {
  const auto ll = log_likelihoods(*space, graph, probs);
  std::vector<double> joint(space->size());
  for (std::size_t i = 0; i < joint.size(); ++i) joint[i] = space->log_prior(i) + ll[i];
  const double z = log_sum_exp(joint);
  std::vector<double> post(joint.size());
  if (probs.p == probs.q) {
    // Constant likelihood: the posterior is the prior.
    for (std::size_t i = 0; i < post.size(); ++i) post[i] = space->log_prior(i);
  } else {
    for (std::size_t i = 0; i < post.size(); ++i) post[i] = joint[i] - z;
  }
  return PosteriorTable(std::move(space), std::move(post), z);
}

PosteriorTable exact_posterior(const Graph& graph, const Prior& prior, const EdgeProbs& probs,
                               const EnumerationLimits& limits) {
  if (static_cast<int>(graph.n()) != prior.family().n()) {
    throw InvalidArgument("graph and family sizes differ");
  }
  return exact_posterior(std::make_shared<const PosteriorSpace>(prior, limits), graph, probs);
}

double set_mass(const PosteriorTable& table, const std::vector<char>& mask) {
  double s = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (mask[i]) s += table.mass(i);
  return std::min(s, 1.0);
}

double set_mass(const PosteriorTable& table, const LabelSet& set) {
  return set_mass(table, table.space().mask(set));
}

double log_set_mass(const PosteriorTable& table, const std::vector<char>& mask) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (mask[i]) xs.push_back(table.log_mass(i));
  return log_sum_exp(xs);
}

double posterior_odds(const PosteriorTable& table, const std::vector<char>& a,
                      const std::vector<char>& b) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (a[i] && b[i]) {
      throw NotDisjoint("hypotheses share the labelling " + table.labelling(i).to_string());
    }
  }
  const double la = log_set_mass(table, a);
  const double lb = log_set_mass(table, b);
  if (std::isinf(la) && std::isinf(lb)) throw UndefinedOdds("both hypotheses have zero mass");
  if (std::isinf(la)) return std::numeric_limits<double>::infinity();
  return std::exp(lb - la);
}

double posterior_odds(const PosteriorTable& table, const LabelSet& a, const LabelSet& b) {
  return posterior_odds(table, table.space().mask(a), table.space().mask(b));
}

}  // namespace pmsbm
