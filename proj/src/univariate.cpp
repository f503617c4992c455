#include "scone/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scone/dual_cone.hpp"
#include "scone/lp.hpp"

namespace scone {

namespace {

Exponent E1(long k) { return Exponent{Rational(k)}; }

Support full_support(int top) {
  std::vector<Exponent> ev, od;
  for (int i = 0; i <= top; ++i) (i % 2 == 0 ? ev : od).push_back(E1(i));
  return Support(1, ev, od);
}

double abs_sum(const UniPoly& p) {
  double s = 0.0;
  for (const auto& c : p.c) s += std::abs(c.value());
  return s;
}

}  // namespace

UniPoly::UniPoly(std::vector<Scalar> coeffs) : c(std::move(coeffs)) {}

int UniPoly::degree() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (!c[i].is_zero()) return i;
  return -1;
}

Scalar UniPoly::coeff(int i) const { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : Scalar(0); }

double UniPoly::eval(double x) const {
  double r = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) r = r * x + c[i].value();
  return r;
}

bool UniPoly::all_exact() const {
  return std::all_of(c.begin(), c.end(), [](const Scalar& s) { return s.is_exact(); });
}

SFunction to_sfunction(const UniPoly& p, int top) {
  top = std::max(top, p.degree());
  if (top < 0) top = 0;
  SFunction f(full_support(top));
  for (int i = 0; i <= top; ++i) {
    if (i % 2 == 0)
      f.c[i / 2] = p.coeff(i);
    else
      f.d[i / 2] = p.coeff(i);
  }
  return f;
}

UniPoly uni_from_sfunction(const SFunction& f) {
  if (f.n() != 1) throw Error("univariate input must have n = 1");
  std::vector<std::pair<long, Scalar>> terms;
  auto degree_of = [](const Exponent& e) {
    if (e[0] < 0 || e[0].get_den() != 1) throw Error("univariate exponents must be non-negative integers");
    return e[0].get_num().get_si();
  };
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    long k = degree_of(f.support.even[i]);
    if (k % 2 != 0) throw Error("odd degree " + std::to_string(k) + " listed as an even term");
    terms.emplace_back(k, f.c[i]);
  }
  for (std::size_t i = 0; i < f.d.size(); ++i) terms.emplace_back(degree_of(f.support.odd[i]), f.d[i]);
  long top = 0;
  for (const auto& [k, v] : terms) top = std::max(top, k);
  UniPoly p(std::vector<Scalar>(top + 1, Scalar(0)));
  for (const auto& [k, v] : terms) p.c[k] += v;
  return p;
}

json unipoly_to_json(const UniPoly& p) {
  json a = json::array();
  for (const auto& c : p.c) a.push_back(scalar_to_json(c));
  return json{{"coeffs", a}};
}

UniPoly unipoly_from_json(const json& j, bool exact) {
  if (j.is_object() && j.contains("coeffs")) {
    UniPoly p;
    for (const auto& c : j.at("coeffs")) p.c.push_back(scalar_from_json(c, exact));
    return p;
  }
  return uni_from_sfunction(parse_sfunction(j, exact));
}

UniPoly sage_representative(const UniPoly& f) {
  const int d = f.degree();
  if (f.coeff(0).sign() <= 0) throw Error("sage_representative needs c0 > 0");
  UniPoly r(std::vector<Scalar>(std::max(d, 0) + 1, Scalar(0)));
  for (int i = 0; i <= d; ++i) r.c[i] = (i == 0 || i == d) ? f.c[i] : -f.c[i].abs();
  return r;
}

double compute_x0(const UniPoly& fhat) {
  const int d = fhat.degree();
  if (d < 0 || fhat.coeff(0).sign() <= 0) throw Error("compute_x0 needs fhat(0) > 0");
  for (int i = 1; i < d; ++i)
    if (fhat.c[i].sign() > 0) throw Error("compute_x0 needs non-positive middle coefficients");
  if (d >= 1 && fhat.c[d].sign() < 0 && d >= 2) throw Error("compute_x0 needs a non-negative leading coefficient");
  if (d <= 0) return std::numeric_limits<double>::infinity();

  // Cauchy bound from the top nonzero coefficient.
  const double lead = std::abs(fhat.c[d].value());
  double R = 0.0;
  for (int i = 0; i < d; ++i) R = std::max(R, std::abs(fhat.c[i].value()) / lead);
  R += 1.0;

  auto mag = [&](double x) {
    double s = 0.0, p = 1.0;
    for (int i = 0; i <= d; ++i, p *= x) s += std::abs(fhat.c[i].value()) * p;
    return s;
  };
  auto negative = [&](double x) { return fhat.eval(x) < -1e-14 * mag(x); };

  constexpr int kScan = 20000;
  const double h = R / kScan;
  int first = -1, best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kScan; ++k) {
    double x = k * h, v = fhat.eval(x) / mag(x);
    if (negative(x)) {
      first = k;
      break;
    }
    if (v < best_val) best_val = v, best = k;
  }
  double lo, hi;
  if (first >= 0) {
    lo = (first - 1) * h;
    hi = first * h;
  } else {
    // A narrow dip can hide between grid points: refine around the smallest sample.
    double a = std::max(0.0, (best - 1) * h), b = (best + 1) * h;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      double m1 = b - g * (b - a), m2 = a + g * (b - a);
      if (fhat.eval(m1) < fhat.eval(m2))
        b = m2;
      else
        a = m1;
    }
    double xm = (a + b) / 2;
    if (!negative(xm)) return std::numeric_limits<double>::infinity();
    lo = std::max(0.0, (best - 1) * h);
    hi = xm;
  }
  while (hi - lo > 1e-12) {
    double mid = (lo + hi) / 2;
    if (negative(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ApproxStep approx_step(const UniPoly& f, int N, const ApproxOptions& opt) {
  const int d = f.degree();
  if (f.coeff(0).sign() <= 0) throw Error("approx_step needs c0 > 0");
  if (N % 2 != 0) --N;
  if (N <= d) throw Error("approx_step needs N > deg f");
  const double x0 = compute_x0(sage_representative(f));
  if (!std::isfinite(x0))
    throw Error("operation not applicable: fhat >= 0 on the positive axis, so f itself is SONC");

  // Decide on g(z) = p_N(x0 z): same membership, coefficients of moderate size.
  UniPoly scaled(std::vector<Scalar>(N + 1, Scalar(0)));
  for (int i = 0; i <= d; ++i) scaled.c[i] = Scalar(f.c[i].value() * std::pow(x0, i));

  ApproxStep step;
  step.N = N;
  step.x0 = x0;
  MembershipOptions mopt = opt.membership;
  auto try_c = [&](double c) {
    scaled.c[N] = Scalar(c);
    ++step.queries;
    return scone_membership(to_sfunction(scaled, N), mopt);
  };

  const double cap = opt.cap.value_or(10.0 * (1.0 + abs_sum(f)) * 2.0);
  MembershipResult best = try_c(cap);
  if (best.verdict != Verdict::Certified)
    throw Error("no certified c* up to the cap " + std::to_string(cap));
  // Descend by decades first: c* spans many orders of magnitude across N.
  double lo = 0.0, hi = cap;
  for (int k = 0; k < 300 && hi > 1e-250; ++k) {
    auto r = try_c(hi / 10);
    if (r.verdict != Verdict::Certified) {
      lo = hi / 10;
      break;
    }
    hi /= 10;
    best = std::move(r);
  }
  while (hi - lo > opt.c_tol * hi) {
    double mid = (lo + hi) / 2;
    auto r = try_c(mid);
    if (r.verdict == Verdict::Certified) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  step.c_star = hi;

  step.pN = UniPoly(std::vector<Scalar>(N + 1, Scalar(0)));
  for (int i = 0; i <= d; ++i) step.pN.c[i] = f.c[i];
  step.pN.c[N] = Scalar(hi / std::pow(x0, N));

  // Undo the substitution x = x0 z in the certificate; barycentric weights are unchanged.
  auto unscale = [&](const Exponent& e) { return Scalar(std::pow(x0, -e[0].get_d())); };
  const SFunction target = to_sfunction(step.pN, N);
  if (auto* dec = std::get_if<AGDecomposition>(&*best.cert)) {
    dec->support = target.support;
    for (auto& p : dec->parts) {
      for (std::size_t i = 0; i < p.f.outer.size(); ++i) p.f.c[i] = (p.f.c[i] * unscale(p.f.outer[i])).inexact();
      p.f.d = (p.f.d * unscale(p.f.inner)).inexact();
      p.witness.value *= unscale(p.f.inner).value();
      for (auto& y : p.witness.y) y += std::log(x0);
      p.witness.nu.reset();
    }
    for (auto& m : dec->monomials) m.t = (m.t * unscale(m.beta)).inexact();
  } else if (auto* dec = std::get_if<CircuitDecomposition>(&*best.cert)) {
    dec->support = target.support;
    for (auto& p : dec->parts) {
      for (std::size_t i = 0; i < p.c.size(); ++i) p.c[i] = (p.c[i] * unscale(p.circuit.outer[i])).inexact();
      p.d = (p.d * unscale(p.circuit.inner)).inexact();
    }
    for (auto& m : dec->monomials) m.t = (m.t * unscale(m.beta)).inexact();
  }
  step.cert = std::move(*best.cert);
  return step;
}

UniPoly putinar_polynomial() {
  // (x - 1/2)^4 = x^4 - 2x^3 + 3/2 x^2 - 1/2 x + 1/16
  return UniPoly({Scalar(Rational(1, 16) + Rational(1, 1000)), Scalar(Rational(-1, 2)), Scalar(Rational(3, 2)),
                  Scalar(-2), Scalar(1)});
}

bool PutinarReport::all_ok() const {
  return pairing == Rational(-1, 480) && pairing_no_shift == Rational(-1, 288) &&
         std::all_of(checks.begin(), checks.end(), [](const PutinarCheck& c) { return c.ok; });
}

namespace {

DualVector cs_dual(const std::vector<Rational>& u) {
  const int r = static_cast<int>(u.size()) - 1;
  std::vector<Scalar> v, w;
  for (int i = 0; i <= r; ++i) (i % 2 == 0 ? v : w).push_back(Scalar(u[i]));
  return DualVector(full_support(r), v, w);
}

Rational pair_exact(const std::vector<Rational>& v, const UniPoly& f) {
  Rational s = 0;
  for (int i = 0; i < static_cast<int>(f.c.size()); ++i) s += v.at(i) * f.c[i].exact();
  return s;
}

PutinarCheck member_check(const std::string& name, const std::vector<Rational>& u) {
  auto rep = dual_membership(cs_dual(u), DualMode::Reduced);
  return {name, rep.member && rep.exact, rep.member ? "" : rep.reason};
}

}  // namespace

PutinarReport putinar_verify(int d) {
  if (d < 4) throw Error("putinar_verify needs d >= 4");
  PutinarReport r;
  r.d = d;
  r.v = {Rational(25, 18), Rational(5, 9)};
  Rational p(1, 4);
  for (int i = 2; i <= d + 2; ++i, p /= 2) r.v.push_back(p);

  UniPoly f = putinar_polynomial();
  r.pairing = pair_exact(r.v, f);
  f.c[0] = Scalar(Rational(1, 16));
  r.pairing_no_shift = pair_exact(r.v, f);

  const auto& v = r.v;
  std::vector<Rational> shifted(v.begin() + 1, v.end()), diff, diff2;
  for (int i = 0; i <= d + 1; ++i) diff.push_back(v[i] - v[i + 1]);
  for (int i = 0; i <= d; ++i) diff2.push_back(v[i + 1] - v[i + 2]);
  r.checks.push_back(member_check("v in CS(d+2)*", v));
  r.checks.push_back(member_check("x-shift in CS(d+1)*", shifted));
  r.checks.push_back(member_check("(1-x)-shift in CS(d+1)*", diff));
  r.checks.push_back(member_check("x(1-x)-shift in CS(d)*", diff2));
  r.checks.push_back({"v(f) < 0", r.pairing < 0, format_rational(r.pairing)});
  return r;
}

json putinar_report_to_json(const PutinarReport& r) {
  json v = json::array();
  for (const auto& q : r.v) v.push_back(format_rational(q));
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return {{"d", r.d},
          {"v", v},
          {"pairing", format_rational(r.pairing)},
          {"pairing_without_constant", format_rational(r.pairing_no_shift)},
          {"checks", checks},
          {"ok", r.all_ok()}};
}

namespace {

// x^{2k} g(x)^2 type atoms: monomial, (x -+ p)^2 and (x^2 - p^2)^2 shifted by x^{2k}.
struct Atom {
  std::vector<Rational> poly;  // coefficients by degree
  int low = 0;                 // shift 2k
  int kind = 0;                // 0 monomial, 1 odd circuit, 2 even circuit
  Rational p;
};

std::vector<Atom> sonc_atoms(int d) {
  static const std::vector<Rational> grid = {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                             Rational(1),    Rational(3, 2), Rational(2),    Rational(4),
                                             Rational(8)};
  std::vector<Atom> out;
  for (int k = 0; 2 * k <= d; ++k) {
    const int s = 2 * k;
    Atom m;
    m.poly.assign(s + 1, 0);
    m.poly[s] = 1;
    m.low = s;
    out.push_back(m);
    for (const auto& p : grid) {
      if (s + 2 <= d)
        for (int sg : {-1, 1}) {
          Atom a;
          a.poly.assign(s + 3, 0);
          a.poly[s] = p * p;
          a.poly[s + 1] = Rational(2 * sg) * p;
          a.poly[s + 2] = 1;
          a.low = s, a.kind = 1, a.p = p;
          out.push_back(a);
        }
      if (s + 4 <= d) {
        Atom a;
        a.poly.assign(s + 5, 0);
        a.poly[s] = p * p * p * p;
        a.poly[s + 2] = -2 * p * p;
        a.poly[s + 4] = 1;
        a.low = s, a.kind = 2, a.p = p;
        out.push_back(a);
      }
    }
  }
  return out;
}

std::vector<Rational> times(const std::vector<Rational>& a, int g) {
  static const std::vector<std::vector<Rational>> mult = {{1}, {0, 1}, {1, -1}, {0, 1, -1}};
  const auto& m = mult[g];
  std::vector<Rational> r(a.size() + m.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r[i + j] += a[i] * m[j];
  return r;
}

CircuitDecomposition atoms_certificate(const std::vector<std::pair<Rational, const Atom*>>& used, int d) {
  CircuitDecomposition dec;
  dec.support = full_support(d);
  for (const auto& [mu, a] : used) {
    const int s = a->low;
    if (a->kind == 0) {
      dec.monomials.push_back({E1(s), Scalar(mu)});
      continue;
    }
    const int top = a->kind == 1 ? s + 2 : s + 4;
    const int mid = a->kind == 1 ? s + 1 : s + 2;
    CircuitFunction cf;
    cf.circuit = make_circuit({E1(s), E1(top)}, E1(mid), a->kind == 1 ? Parity::Odd : Parity::Even,
                              dec.support.even);
    cf.c = {Scalar(mu * a->poly[s]), Scalar(mu * a->poly[top])};
    cf.d = Scalar(mu * a->poly[mid]);
    dec.parts.push_back(cf);
  }
  return dec;
}

}  // namespace

QModuleResult qmodule_search(const UniPoly& f, int d, const MembershipOptions& opt) {
  (void)opt;
  QModuleResult res;
  if (d < 0 || d > 40) throw Error("qmodule_search degree must lie in [0, 40]");
  if (!f.all_exact()) throw Error("qmodule_search needs exact coefficients");
  const int rows = std::max(f.degree(), d + 2) + 1;
  if (f.degree() > d + 2) {
    res.note = "deg f exceeds d + 2";
    return res;
  }
  const auto atoms = sonc_atoms(d);
  std::vector<std::pair<int, std::size_t>> cols;
  Matrix<Rational> A(rows);
  for (int g = 0; g < 4; ++g)
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      auto prod = times(atoms[k].poly, g);
      cols.emplace_back(g, k);
      for (int i = 0; i < rows; ++i) A[i].push_back(i < static_cast<int>(prod.size()) ? prod[i] : Rational(0));
    }
  std::vector<Rational> b(rows, 0);
  for (int i = 0; i <= f.degree(); ++i) b[i] = f.c[i].exact();
  // Prefer low multipliers and small atoms so trivial representations come out verbatim.
  std::vector<Rational> cost;
  for (const auto& [g, k] : cols) {
    Rational w = 0;
    for (const auto& q : atoms[k].poly) w += abs(q);
    cost.push_back(w * Rational((1 << g) * static_cast<int>(atoms[k].poly.size())));
  }
  auto lp = solve_lp(A, b, cost);
  if (lp.status != LpStatus::Optimal) {
    res.note = "no representation over the atom dictionary (" + std::to_string(atoms.size()) + " atoms per multiplier)";
    return res;
  }
  res.found = true;
  std::vector<std::vector<std::pair<Rational, const Atom*>>> used(4);
  res.p.assign(4, UniPoly(std::vector<Scalar>(d + 1, Scalar(0))));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (lp.x[j] == 0) continue;
    const auto [g, k] = cols[j];
    used[g].emplace_back(lp.x[j], &atoms[k]);
    for (std::size_t i = 0; i < atoms[k].poly.size(); ++i) res.p[g].c[i] += Scalar(lp.x[j] * atoms[k].poly[i]);
  }
  for (int g = 0; g < 4; ++g) res.certs.push_back(atoms_certificate(used[g], d));
  return res;
}

json qmodule_result_to_json(const QModuleResult& r) {
  json j{{"found", r.found}};
  if (!r.found) {
    j["result"] = "NoCertificateFound";
    j["note"] = r.note;
    return j;
  }
  json ps = json::array();
  for (std::size_t g = 0; g < r.p.size(); ++g)
    ps.push_back({{"poly", unipoly_to_json(r.p[g])}, {"certificate", certificate_to_json(r.certs[g])}});
  j["p"] = ps;
  return j;
}

}  // namespace scone
