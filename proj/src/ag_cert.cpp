#include "scone/ag_cert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "scone/faces.hpp"
#include "scone/power_compare.hpp"

namespace scone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Lse {
  Eigen::VectorXd z;
  double value = 0.0;           // log sum exp(l_a + m_a^T z)
  Eigen::VectorXd weights;      // softmax
};

// Value, softmax weights, gradient and Hessian of log sum exp(l_a + m_a^T z).
double lse_eval(const Eigen::VectorXd& l, const Eigen::MatrixXd& M, const Eigen::VectorXd& z, Eigen::VectorXd* w,
                Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
  Eigen::VectorXd e = l + M.transpose() * z;
  double top = e.maxCoeff();
  Eigen::VectorXd p = (e.array() - top).exp();
  double s = p.sum();
  p /= s;
  if (w) *w = p;
  if (grad) *grad = M * p;
  if (hess) {
    Eigen::VectorXd g = M * p;
    *hess = M * p.asDiagonal() * M.transpose() - g * g.transpose();
  }
  return top + std::log(s);
}

// Damped Newton with backtracking; gradient steps when Newton fails to descend.
Lse minimize_lse(const Eigen::VectorXd& l, const Eigen::MatrixXd& M, int max_iters) {
  const Eigen::Index k = M.rows();
  Lse r;
  r.z = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double val = lse_eval(l, M, r.z, nullptr, &grad, &hess);
  for (int it = 0; it < max_iters && k > 0; ++it) {
    if (grad.norm() <= 1e-14) break;
    Eigen::VectorXd dir = -hess.ldlt().solve(grad);
    double slope = grad.dot(dir);
    if (!dir.allFinite() || slope >= -1e-300) {
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    double t = 1.0;
    double next = kInf;
    Eigen::VectorXd cand;
    if (-slope < 1e-12) {
      // Quadratic convergence region: objective changes are below rounding.
      Eigen::VectorXd z = r.z + dir;
      Eigen::VectorXd g2;
      lse_eval(l, M, z, nullptr, &g2, nullptr);
      if (g2.norm() >= grad.norm()) break;
      r.z = z;
      val = lse_eval(l, M, r.z, nullptr, &grad, &hess);
      continue;
    }
    for (int ls = 0; ls < 60; ++ls) {
      cand = r.z + t * dir;
      next = lse_eval(l, M, cand, nullptr, nullptr, nullptr);
      if (next <= val + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (!(next < val) && !(next <= val && t == 1.0)) break;
    r.z = cand;
    double prev = val;
    val = lse_eval(l, M, r.z, nullptr, &grad, &hess);
    if (prev - val < 1e-16 * std::max(1.0, std::abs(val)) && grad.norm() < 1e-10) break;
  }
  r.value = lse_eval(l, M, r.z, &r.weights, nullptr, nullptr);
  return r;
}

std::vector<double> to_point(const std::vector<double>& y, const AGFunction& f) {
  std::vector<double> x(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) x[j] = std::exp(y[j]);
  if (f.parity == Parity::Odd && f.d.sign() != 0) {
    double sx = signed_power(x, f.inner);
    if ((sx > 0) == (f.d.sign() > 0)) {
      for (std::size_t j = 0; j < y.size(); ++j)
        if (mpz_odd_p(f.inner[j].get_num_mpz_t())) {
          x[j] = -x[j];
          break;
        }
    }
  }
  return x;
}

// Walks y + t * tau for growing t until f goes negative.
std::optional<std::vector<double>> escape_point(const AGFunction& f, const std::vector<double>& y0,
                                                const std::vector<double>& tau) {
  SFunction sf = f.to_sfunction();
  const std::size_t n = y0.size();
  double t = 0.0;
  for (int k = 0; k < 80; ++k) {
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) y[j] = y0[j] + t * tau[j];
    auto x = to_point(y, f);
    bool finite = std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v) && v != 0.0; });
    if (!finite) break;
    if (evaluate(sf, x) < 0) return x;
    t = t == 0.0 ? 0.5 : 2 * t;
  }
  return std::nullopt;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Refuted: return "refuted";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

Scalar AGFunction::threshold() const { return parity == Parity::Even ? -d : d.abs(); }

bool AGFunction::all_exact() const {
  return d.is_exact() && std::all_of(c.begin(), c.end(), [](const Scalar& x) { return x.is_exact(); });
}

double AGFunction::scale() const {
  double s = std::abs(d.value());
  for (const auto& x : c) s = std::max(s, std::abs(x.value()));
  return std::max(s, 1e-300);
}

void AGFunction::validate() const {
  if (outer.size() != c.size()) throw Error("AG function coefficient count does not match");
  if (inner.size() != n) throw Error("inner exponent has wrong length");
  for (const auto& e : outer)
    if (e.size() != n) throw Error("outer exponent has wrong length");
  for (const auto& x : c)
    if (x.sign() < 0) throw Error("AG function has a negative outer coefficient");
  if (parity == Parity::Even && std::find(outer.begin(), outer.end(), inner) != outer.end())
    throw Error("even AG function: inner exponent must not be an outer exponent");
  if (parity == Parity::Odd && !is_odd_exponent(inner)) throw Error("odd AG function needs an odd inner exponent");
}

SFunction AGFunction::to_sfunction() const {
  std::vector<std::pair<Exponent, Scalar>> even, odd;
  for (std::size_t i = 0; i < outer.size(); ++i) even.emplace_back(outer[i], c[i]);
  if (parity == Parity::Even)
    even.emplace_back(inner, d);
  else
    odd.emplace_back(inner, d);
  return SFunction::from_terms(n, even, odd);
}

AGDecision ag_nonneg_decide(const AGFunction& f, const AGOptions& opt) {
  f.validate();
  AGDecision out;
  const std::size_t n = f.n;
  const Scalar thr = f.threshold();
  out.threshold = thr.value();
  const double scale = f.scale();

  std::vector<std::size_t> active;
  std::vector<Exponent> act_exps;
  for (std::size_t i = 0; i < f.outer.size(); ++i)
    if (f.c[i].sign() > 0) {
      active.push_back(i);
      act_exps.push_back(f.outer[i]);
    }

  std::optional<LambdaFace> lf;
  if (!active.empty()) lf = lambda_face(act_exps, f.inner);

  if (!lf) {
    // Lambda empty: the posynomial infimum is 0.
    out.g_star = 0.0;
    out.margin = -out.threshold;
    if (thr.sign() <= 0) {
      out.verdict = Verdict::Certified;
      out.witness.y.assign(n, 0.0);
      out.exact_decision = thr.is_exact();
      return out;
    }
    std::vector<double> tau(n, 1.0);
    if (!active.empty()) {
      auto t = exposing_direction(act_exps, f.inner, {});
      for (std::size_t j = 0; j < n; ++j) tau[j] = t[j].get_d();
    } else {
      std::fill(tau.begin(), tau.end(), 0.0);
    }
    auto x = escape_point(f, std::vector<double>(n, 0.0), tau);
    if (x) {
      out.verdict = Verdict::Refuted;
      out.point = *x;
    }
    return out;
  }

  for (auto k : lf->face) out.face.push_back(active[k]);
  std::vector<Exponent> face_exps;
  for (auto i : out.face) face_exps.push_back(f.outer[i]);

  // Minimize log sum_{a in face} c_a exp((a - b)^T y) over the face's span.
  auto Q = difference_basis(face_exps, f.inner);
  const std::size_t k = Q.size(), m = face_exps.size();
  Eigen::MatrixXd M(k, m);
  Eigen::VectorXd l(m);
  for (std::size_t a = 0; a < m; ++a) {
    l(a) = std::log(f.c[out.face[a]].value());
    for (std::size_t r = 0; r < k; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += Q[r][j] * Rational(face_exps[a][j] - f.inner[j]).get_d();
      M(r, a) = s;
    }
  }
  Lse lse = minimize_lse(l, M, opt.max_iters);
  std::vector<double> y(n, 0.0);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < n; ++j) y[j] += Q[r][j] * lse.z(r);

  out.g_star = std::exp(lse.value);
  AGWitness& w = out.witness;
  w.y = y;
  w.lambda.assign(f.outer.size(), Scalar(0));
  bool exact_lambda = false;
  if (affinely_independent_exps(face_exps)) {
    auto sol = lambda_unique(face_exps, f.inner);
    for (std::size_t a = 0; a < m; ++a) w.lambda[out.face[a]] = Scalar(sol.lambda[a]);
    exact_lambda = true;
  } else {
    for (std::size_t a = 0; a < m; ++a) w.lambda[out.face[a]] = Scalar(lse.weights(a));
  }
  {
    std::vector<double> cv, lv;
    for (std::size_t i = 0; i < f.outer.size(); ++i) {
      cv.push_back(f.c[i].value());
      lv.push_back(w.lambda[i].value());
    }
    w.value = circuit_number(cv, lv);
    if (exact_lambda) out.g_star = w.value;
  }
  out.margin = out.g_star - out.threshold;

  if (thr.sign() <= 0) {
    out.verdict = Verdict::Certified;
    out.exact_decision = thr.is_exact();
    return out;
  }

  if (exact_lambda && f.all_exact()) {
    std::vector<Rational> bases, lam;
    for (std::size_t a = 0; a < m; ++a) {
      bases.push_back(f.c[out.face[a]].exact() / w.lambda[out.face[a]].exact());
      lam.push_back(w.lambda[out.face[a]].exact());
    }
    out.exact_decision = true;
    if (power_compare_exact(thr.exact(), bases, lam) <= 0) {
      out.verdict = Verdict::Certified;
      return out;
    }
    out.verdict = Verdict::Refuted;
  } else if (out.margin >= -1e-10 * scale) {
    out.verdict = Verdict::Certified;
    return out;
  } else if (out.margin > -opt.tol * scale) {
    out.verdict = Verdict::Indeterminate;
    return out;
  } else {
    out.verdict = Verdict::Refuted;
  }

  // Refutation: push the off-face terms to zero along an exposing direction.
  std::vector<double> tau(n, 0.0);
  if (lf->face.size() < active.size()) {
    auto t = exposing_direction(act_exps, f.inner, lf->face);
    for (std::size_t j = 0; j < n; ++j) tau[j] = t[j].get_d();
  }
  auto x = escape_point(f, y, tau);
  if (x) {
    out.point = *x;
  } else {
    out.verdict = Verdict::Indeterminate;
  }
  return out;
}

double relative_entropy(const std::vector<double>& nu, const std::vector<double>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (nu[i] == 0.0) continue;
    if (g[i] <= 0.0) return kInf;
    s += nu[i] * std::log(nu[i] / g[i]);
  }
  return s;
}

std::vector<double> witness_from_entropy(const std::vector<Exponent>& outer, const Exponent& inner,
                                         const std::vector<double>& nu) {
  if (nu.size() != outer.size()) throw Error("weights do not match the outer exponents");
  double total = 0.0;
  for (double v : nu) {
    if (v < 0) throw Error("entropy weights must be non-negative");
    total += v;
  }
  if (total <= 0) throw Error("entropy weights are all zero");
  for (std::size_t j = 0; j < inner.size(); ++j) {
    double mom = 0.0;
    for (std::size_t i = 0; i < outer.size(); ++i) mom += nu[i] * outer[i][j].get_d();
    if (std::abs(mom - total * inner[j].get_d()) > 1e-10 * std::max(1.0, total))
      throw Error("entropy weights violate the moment condition");
  }
  std::vector<double> lambda(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) lambda[i] = nu[i] / total;
  return lambda;
}

std::vector<double> witness_from_product(const std::vector<double>& c, const std::vector<double>& lambda) {
  double theta = circuit_number(c, lambda);
  std::vector<double> nu(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) nu[i] = theta * lambda[i];
  return nu;
}

bool check_witness(const AGFunction& f, const AGWitness& w, WitnessForm form, double rel_tol) {
  f.validate();
  const Scalar thr = f.threshold();
  const double scale = f.scale();
  if (form == WitnessForm::Entropy) {
    if (!w.nu) return false;
    const auto& nu = *w.nu;
    if (nu.size() != f.outer.size()) return false;
    double total = 0.0;
    for (double v : nu) {
      if (v < 0) return false;
      total += v;
    }
    for (std::size_t j = 0; j < f.n; ++j) {
      double mom = 0.0;
      for (std::size_t i = 0; i < nu.size(); ++i) mom += nu[i] * f.outer[i][j].get_d();
      if (std::abs(mom - total * f.inner[j].get_d()) > 1e-10 * std::max(1.0, total)) return false;
    }
    std::vector<double> ec;
    for (const auto& x : f.c) ec.push_back(std::exp(1.0) * x.value());
    double D = relative_entropy(nu, ec);
    return D <= -thr.value() + rel_tol * scale;
  }

  if (w.lambda.empty()) return thr.sign() <= 0;
  if (w.lambda.size() != f.outer.size()) return false;
  bool exact = f.all_exact() &&
               std::all_of(w.lambda.begin(), w.lambda.end(), [](const Scalar& x) { return x.is_exact(); });
  if (exact) {
    Rational total(0);
    Exponent mom(f.n, Rational(0));
    std::vector<Rational> bases, lam;
    for (std::size_t i = 0; i < f.outer.size(); ++i) {
      const Rational& li = w.lambda[i].exact();
      if (sgn(li) < 0) return false;
      total += li;
      for (std::size_t j = 0; j < f.n; ++j) mom[j] += li * f.outer[i][j];
      if (sgn(li) == 0) continue;
      if (f.c[i].sign() == 0) return thr.sign() <= 0;
      bases.push_back(f.c[i].exact() / li);
      lam.push_back(li);
    }
    if (total != 1 || mom != f.inner) return false;
    if (thr.sign() <= 0) return true;
    return power_compare_exact(thr.exact(), bases, lam) <= 0;
  }
  double total = 0.0;
  std::vector<double> mom(f.n, 0.0), cv, lv;
  for (std::size_t i = 0; i < f.outer.size(); ++i) {
    double li = w.lambda[i].value();
    if (li < -1e-10) return false;
    li = std::max(li, 0.0);
    total += li;
    for (std::size_t j = 0; j < f.n; ++j) mom[j] += li * f.outer[i][j].get_d();
    cv.push_back(f.c[i].value());
    lv.push_back(li);
  }
  if (std::abs(total - 1.0) > 1e-10) return false;
  for (std::size_t j = 0; j < f.n; ++j)
    if (std::abs(mom[j] - f.inner[j].get_d()) > 1e-10 * std::max(1.0, std::abs(f.inner[j].get_d()))) return false;
  if (thr.sign() <= 0) return true;
  double prod = circuit_number(cv, lv);
  return prod >= thr.value() - rel_tol * scale;
}

json ag_witness_to_json(const AGWitness& w) {
  json lam = json::array();
  for (const auto& x : w.lambda) lam.push_back(scalar_to_json(x));
  json j{{"kind", "ag-witness"}, {"lambda", lam}, {"value", w.value}, {"y", w.y}};
  if (w.nu) j["nu"] = *w.nu;
  return j;
}

AGWitness ag_witness_from_json(const json& j, bool exact) {
  AGWitness w;
  for (const auto& x : j.at("lambda")) w.lambda.push_back(scalar_from_json(x, exact));
  w.value = j.value("value", 0.0);
  if (j.contains("y")) w.y = j.at("y").get<std::vector<double>>();
  if (j.contains("nu")) w.nu = j.at("nu").get<std::vector<double>>();
  return w;
}

json ag_function_to_json(const AGFunction& f) {
  json outer = json::array(), c = json::array();
  for (std::size_t i = 0; i < f.outer.size(); ++i) {
    outer.push_back(exponent_to_json(f.outer[i]));
    c.push_back(scalar_to_json(f.c[i]));
  }
  return json{{"parity", parity_name(f.parity)},
              {"outer", outer},
              {"c", c},
              {"inner", exponent_to_json(f.inner)},
              {"d", scalar_to_json(f.d)}};
}

AGFunction ag_function_from_json(const json& j, std::size_t n, bool exact) {
  AGFunction f;
  f.n = n;
  f.parity = parse_parity(j.at("parity").get<std::string>());
  for (const auto& e : j.at("outer")) f.outer.push_back(exponent_from_json(e));
  for (const auto& x : j.at("c")) f.c.push_back(scalar_from_json(x, exact));
  f.inner = exponent_from_json(j.at("inner"));
  f.d = scalar_from_json(j.at("d"), exact);
  f.validate();
  return f;
}

}  // namespace scone
