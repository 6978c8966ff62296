#include "pmsbm/edge_probs.hpp"

#include <cmath>

#include "pmsbm/error.hpp"

namespace pmsbm {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Dense: return "dense";
    case Phase::ChernoffHellinger: return "chernoff-hellinger";
    case Phase::KestenStigum: return "kesten-stigum";
    case Phase::Explicit: return "explicit";
  }
  return "explicit";
}

Phase parse_phase(std::string_view text) {
  if (text == "dense") return Phase::Dense;
  if (text == "chernoff-hellinger" || text == "ch") return Phase::ChernoffHellinger;
  if (text == "kesten-stigum" || text == "ks") return Phase::KestenStigum;
  if (text == "explicit") return Phase::Explicit;
  throw InvalidArgument("unknown phase '" + std::string(text) + "'");
}

EdgeProbs EdgeProbs::dense(double p, double q) {
  EdgeProbs e{p, q, Phase::Dense, std::nullopt};
  e.validate_for_sampling();
  return e;
}

EdgeProbs EdgeProbs::explicit_probs(double p, double q) {
  EdgeProbs e{p, q, Phase::Explicit, std::nullopt};
  e.validate_for_sampling();
  return e;
}

EdgeProbs EdgeProbs::chernoff_hellinger(double a, double b, int n) {
  if (n < 2) throw InvalidArgument("chernoff-hellinger scaling needs n >= 2");
  if (!(a > 0) || !(b > 0)) throw InvalidArgument("chernoff-hellinger constants must be positive");
  const double scale = std::log(static_cast<double>(n)) / n;
  EdgeProbs e{a * scale, b * scale, Phase::ChernoffHellinger, std::pair{a, b}};
  e.validate_for_sampling();
  return e;
}

EdgeProbs EdgeProbs::kesten_stigum(double c, double d, int n) {
  if (n < 1) throw InvalidArgument("kesten-stigum scaling needs n >= 1");
  if (!(c > 0) || !(d > 0)) throw InvalidArgument("kesten-stigum constants must be positive");
  EdgeProbs e{c / n, d / n, Phase::KestenStigum, std::pair{c, d}};
  e.validate_for_sampling();
  return e;
}

void EdgeProbs::validate_for_sampling() const {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw InvalidArgument("edge probabilities must lie in [0, 1]");
  }
}

void EdgeProbs::validate_open() const {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw InvalidArgument("likelihood requires edge probabilities strictly inside (0, 1)");
  }
}

}  // namespace pmsbm
