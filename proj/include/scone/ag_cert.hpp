#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scone/circuits.hpp"
#include "scone/sfunction.hpp"

namespace scone {

/// sum_{a in outer} c_a |x|^a + d |x|^b (even) or + d x^b (odd), with c >= 0.
/// For even parity the inner exponent is not among the outer ones.
struct AGFunction {
  std::size_t n = 0;
  Parity parity = Parity::Even;
  std::vector<Exponent> outer;
  std::vector<Scalar> c;
  Exponent inner;
  Scalar d;

  /// -d for even, |d| for odd: the value the AM-GM bound has to reach.
  Scalar threshold() const;
  bool all_exact() const;
  double scale() const;
  SFunction to_sfunction() const;
  void validate() const;
};

struct AGWitness {
  std::vector<Scalar> lambda;             // aligned with outer; empty = trivial witness
  std::optional<std::vector<double>> nu;  // unnormalized weights
  double value = 0.0;                     // prod (c_a / l_a)^{l_a}
  std::vector<double> y;                  // log-coordinates of the minimizer
};

enum class Verdict { Certified, Refuted, Indeterminate };
const char* verdict_name(Verdict v);

struct AGOptions {
  double tol = 1e-8;
  int max_iters = 200;
};

struct AGDecision {
  Verdict verdict = Verdict::Indeterminate;
  AGWitness witness;                  // Certified
  std::vector<double> point;          // Refuted
  double g_star = 0.0;                // inf_y sum c_a exp((a-b)^T y)
  double threshold = 0.0;
  double margin = 0.0;                // g_star - threshold
  std::vector<std::size_t> face;      // outer indices carrying weight in Lambda
  bool exact_decision = false;
};

AGDecision ag_nonneg_decide(const AGFunction& f, const AGOptions& opt = {});

enum class WitnessForm { Entropy, Product };

/// Checks the witness inequality. Exact when the function and lambda are
/// exact; otherwise with relative tolerance `rel_tol`.
bool check_witness(const AGFunction& f, const AGWitness& w, WitnessForm form, double rel_tol = 1e-9);

/// Relative entropy sum nu_a ln(nu_a / g_a) with 0 ln(0/g) = 0, nu ln(nu/0) = inf.
double relative_entropy(const std::vector<double>& nu, const std::vector<double>& g);

/// lambda = nu / sum(nu); checks the moment condition sum nu_a a = (sum nu) b.
std::vector<double> witness_from_entropy(const std::vector<Exponent>& outer, const Exponent& inner,
                                         const std::vector<double>& nu);
/// nu = Theta * lambda, for which D(nu, e c) = -Theta.
std::vector<double> witness_from_product(const std::vector<double>& c, const std::vector<double>& lambda);

json ag_witness_to_json(const AGWitness& w);
AGWitness ag_witness_from_json(const json& j, bool exact);
json ag_function_to_json(const AGFunction& f);
AGFunction ag_function_from_json(const json& j, std::size_t n, bool exact);

}  // namespace scone
