#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace pmsbm {

enum class Phase { Dense, ChernoffHellinger, KestenStigum, Explicit };

std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view text);

// Within-class (p) and between-class (q) edge probabilities at a fixed n.
// For the sparse phases the scaling constants are kept alongside:
// Chernoff-Hellinger p = a log(n)/n, q = b log(n)/n; Kesten-Stigum p = c/n, q = d/n.
struct EdgeProbs {
  double p = 0.5;
  double q = 0.5;
  Phase phase = Phase::Explicit;
  std::optional<std::pair<double, double>> phase_params;

  static EdgeProbs dense(double p, double q);
  static EdgeProbs explicit_probs(double p, double q);
  static EdgeProbs chernoff_hellinger(double a, double b, int n);
  static EdgeProbs kesten_stigum(double c, double d, int n);

  // p, q in [0, 1]; enough for sampling.
  void validate_for_sampling() const;
  // p, q in (0, 1); required by every likelihood computation.
  void validate_open() const;
};

}  // namespace pmsbm
