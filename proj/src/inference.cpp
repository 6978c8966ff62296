#include "pmsbm/inference.hpp"

#include <algorithm>
#include <cmath>

#include "pmsbm/error.hpp"

namespace pmsbm {

bool CredibleSet::contains(const Labelling& theta) const {
  return std::find(members.begin(), members.end(), theta) != members.end();
}

nlohmann::ordered_json CredibleSet::to_json() const {
  nlohmann::ordered_json j;
  j["construction"] = construction == CredibleConstruction::Hpd ? "hpd" : "custom";
  j["level"] = level;
  j["attained_mass"] = attained_mass;
  j["size"] = members.size();
  auto ms = nlohmann::ordered_json::array();
  for (const auto& m : members) ms.push_back(m.to_string());
  j["members"] = ms;
  return j;
}

CredibleSet hpd_credible_set(const PosteriorTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  CredibleSet cs;
  cs.level = 1.0 - alpha;
  double mass = 0.0;
  for (std::size_t i : table.order_by_mass()) {
    cs.members.push_back(table.labelling(i));
    mass += table.mass(i);
    if (mass >= cs.level) break;
  }
  cs.attained_mass = std::min(mass, 1.0);
  return cs;
}

CredibleSet custom_credible_set(const PosteriorTable& table, std::vector<Labelling> members,
                                double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (members.empty()) throw InvalidArgument("credible set must be nonempty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  double mass = 0.0;
  for (const auto& m : members) mass += table.mass_of(m);
  if (mass < 1.0 - alpha) {
    throw InvalidArgument("set carries posterior mass " + std::to_string(mass) + " < 1 - alpha");
  }
  CredibleSet cs;
  cs.members = std::move(members);
  cs.level = 1.0 - alpha;
  cs.attained_mass = std::min(mass, 1.0);
  cs.construction = CredibleConstruction::Custom;
  return cs;
}

std::vector<Labelling> enlarge(const std::vector<Labelling>& members, int k,
                               const ModelFamily& family, const EnumerationLimits& limits) {
  if (k < 0) throw InvalidArgument("enlargement radius must be nonnegative");
  std::vector<Labelling> out;
  for_each_labelling(
      family, std::nullopt,
      [&](const Labelling& theta) {
        for (const auto& eta : members) {
          if (m_distance(theta, eta) <= k) {
            out.push_back(theta);
            return;
          }
        }
      },
      limits);
  return out;
}

nlohmann::ordered_json ConfidenceStatement::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["alpha"] = alpha;
  j["x_n"] = x_n;
  j["k_n"] = k_n;
  j["set_size"] = set_size;
  j["informative"] = informative();
  return j;
}

ConfidenceStatement confidence_from_credible(double alpha, double x_n, int k_n,
                                             std::size_t set_size) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(x_n >= 0.0 && x_n <= 1.0)) throw InvalidArgument("x_n must lie in [0, 1]");
  if (k_n < 0) throw InvalidArgument("k_n must be nonnegative");
  ConfidenceStatement s;
  s.alpha = alpha;
  s.x_n = x_n;
  s.k_n = k_n;
  s.set_size = set_size;
  s.level = 1.0 - x_n / (1.0 - alpha);
  return s;
}

std::string_view to_string(Decision d) {
  return d == Decision::RejectH0 ? "reject-H0" : "accept-H0";
}

nlohmann::ordered_json OddsTestResult::to_json() const {
  nlohmann::ordered_json j;
  j["odds"] = std::isfinite(odds) ? nlohmann::ordered_json(odds) : nlohmann::ordered_json("inf");
  j["r"] = r;
  j["decision"] = std::string(to_string(decision));
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["first_kind_bound"] = opt(first_kind_bound);
  j["first_kind_bound_with_b"] = opt(first_kind_bound_b);
  j["power_lower_bound"] = opt(power_lower_bound);
  return j;
}

BoundReport odds_error_bound(double a, std::optional<double> b, double r) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("a must lie in (0, 1)");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  BoundReport rep;
  rep.name = "thm-odds";
  rep.inputs["a"] = a;
  rep.inputs["r"] = r;
  double v = 2.0 * a * (1.0 + 1.0 / r);
  if (b) {
    if (*b < 0.0) throw InvalidArgument("b must be nonnegative");
    rep.inputs["b"] = *b;
    v = std::min(v, 2.0 * a + 2.0 * *b / r);
  }
  rep.check("0 < a < 1", true);
  rep.log_value = std::log(v);
  return rep;
}

double odds_power_lower_bound(double second_kind, double r) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  return 1.0 - 2.0 * (1.0 + r) * second_kind;
}

OddsTestResult odds_test(const PosteriorTable& table, const LabelSet& a, const LabelSet& b,
                         double r, const OddsInputs& inputs) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  OddsTestResult res;
  res.r = r;
  res.odds = posterior_odds(table, a, b);
  res.decision = res.odds > r ? Decision::RejectH0 : Decision::AcceptH0;
  if (inputs.a) {
    res.first_kind_bound = 2.0 * *inputs.a * (1.0 + 1.0 / r);
    if (inputs.b) res.first_kind_bound_b = 2.0 * *inputs.a + 2.0 * *inputs.b / r;
  }
  if (inputs.second_kind) res.power_lower_bound = odds_power_lower_bound(*inputs.second_kind, r);
  return res;
}

double lemma1_event_bound(double a, double r) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("a must lie in (0, 1)");
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("r must lie in (0, 1)");
  return 1.0 - a / r;
}

}  // namespace pmsbm
