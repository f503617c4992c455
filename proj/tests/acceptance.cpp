// One PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "helpers.hpp"
#include "scone/dual_cone.hpp"
#include "scone/oracle.hpp"
#include "scone/scone_member.hpp"
#include "scone/univariate.hpp"

using namespace scone;
using namespace th;
using gen::E2;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail << "exception: " << e.what();
  }
  const double secs = seconds_since(t0);
  std::printf("%s  %2d  %-34s %6.2fs  %s\n", o.ok ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

void putinar(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto r = putinar_verify(4);
  const double secs = seconds_since(t0);
  o.require(r.pairing == Rational(-1, 480), "pairing = -1/480");
  o.require(r.pairing_no_shift == Rational(-1, 288), "pairing without the constant = -1/288");
  int memberships = 0;
  for (const auto& c : r.checks) {
    o.require(c.ok, c.name);
    if (c.name.find("CS(") != std::string::npos) ++memberships;
  }
  o.require(memberships == 4, "four dual memberships checked");
  o.require(secs < 1.0, "runtime < 1 s");
  o.detail << "v(f) = " << format_rational(r.pairing) << ", v(f - 1/1000) = " << format_rational(r.pairing_no_shift)
           << ", " << memberships << "/4 memberships exact";
}

void dual_strictness(Outcome& o) {
  // Odd reading (A = {0, 2}, B = {1}) and the even one with |x| (A = {0, 1, 2}).
  auto odd_f = F(1, {{E({0}), 1}, {E({2}), 1}}, {{E({1}), -2}});
  auto even_f = F(1, {{E({0}), 1}, {E({1}), -2}, {E({2}), 1}});
  for (const auto& f : {odd_f, even_f}) {
    auto r = scone_membership(f);
    o.require(r.verdict == Verdict::Certified, "primal certified");
    o.require(r.cert && verify_certificate(f, *r.cert, 0.0).ok, "exact certificate verifies");
    DualVector u(f.support, f.c, f.d);
    for (auto mode : {DualMode::AllLambda, DualMode::Circuits, DualMode::Reduced}) {
      auto rep = dual_membership(u, mode);
      o.require(!rep.member && rep.exact, std::string("rejected exactly in mode ") + dual_mode_name(mode));
    }
  }
  auto rep = dual_membership(DualVector(odd_f.support, odd_f.c, odd_f.d), DualMode::Reduced);
  o.require(rep.violated && rep.violated->circuit.outer == std::vector<Exponent>{E({0}), E({2})},
            "violated circuit ({0,2},1)");
  o.detail << "(1,1,-2): primal certified, dual rejected (" << rep.reason << ")";
}

void circuit_regression(Outcome& o) {
  const double theta = 4.0 * std::pow(3.0, -0.75), r3 = std::sqrt(3.0);
  auto f = F(1, {{E({0}), 1}, {E({2}), 0}, {E({4}), 1}}, {{E({1}), Scalar(-theta)}});
  auto r = scone_membership(f);
  o.require(r.verdict == Verdict::Certified, "certified");
  if (!r.cert || !std::holds_alternative<AGDecomposition>(*r.cert)) {
    o.require(false, "AG decomposition");
    return;
  }
  auto cd = decompose_to_circuits(std::get<AGDecomposition>(*r.cert), true);
  o.require(cd.parts.size() == 2, "two summands");
  auto near = [](const Scalar& a, double b) { return std::abs(a.value() - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  bool odd_seen = false, even_seen = false;
  for (const auto& cf : cd.parts) {
    if (cf.circuit.parity == Parity::Odd && cf.circuit.outer == std::vector<Exponent>{E({0}), E({2})}) {
      odd_seen = near(cf.c[0], 2.0 / 3) && near(cf.d, -theta) && near(cf.c[1], 2 * r3 / 3);
    } else if (cf.circuit.parity == Parity::Even && cf.circuit.outer == std::vector<Exponent>{E({0}), E({4})}) {
      even_seen = near(cf.c[0], 1.0 / 3) && near(cf.d, -2 * r3 / 3) && near(cf.c[1], 1.0);
    }
  }
  for (const auto& m : cd.monomials) o.require(std::abs(m.t.value()) <= 1e-9, "no leftover monomials");
  o.require(odd_seen, "summand (2/3, 4*3^(-3/4), (2/3)sqrt3)");
  o.require(even_seen, "summand (1/3, (2/3)sqrt3, 1)");
  o.require(verify_certificate(f, cd).ok, "verify_certificate");
  o.detail << cd.parts.size() << " reduced summands match to 1e-9";
}

void ag_vs_oracle(Outcome& o) {
  std::mt19937_64 rng(2024);
  auto t0 = std::chrono::steady_clock::now();
  int compared = 0, disagreements = 0, certified = 0, refuted = 0, indet = 0, generated = 0;
  for (; generated < 2000 && compared < 200; ++generated) {
    auto f = gen::random_ag(rng);
    auto r = ag_nonneg_decide(f);
    certified += r.verdict == Verdict::Certified;
    refuted += r.verdict == Verdict::Refuted;
    indet += r.verdict == Verdict::Indeterminate;
    auto sf = f.to_sfunction();
    auto gm = gen::ag_grid_min(sf);
    if (std::abs(gm.value) <= 1e-4 * sf.scale()) continue;
    ++compared;
    bool agree = gm.value < 0 ? r.verdict == Verdict::Refuted : r.verdict == Verdict::Certified;
    if (!agree) ++disagreements;
  }
  o.require(compared >= 200, "at least 200 compared instances");
  o.require(disagreements == 0, "zero disagreements");
  o.require(seconds_since(t0) < 60.0, "runtime < 60 s");
  o.detail << generated << " generated, " << compared << " compared, " << disagreements << " disagreements (" << certified << " certified, "
           << refuted << " refuted, " << indet << " indeterminate)";
}

void circuit_number_consistency(Outcome& o) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> cu(0.2, 3.0), du(-3.0, 3.0);
  std::uniform_int_distribution<int> ki(1, 6);
  int agree = 0, boundary_bad = 0, boundary = 0;
  for (int k = 0; k < 100; ++k) {
    Parity p = k % 2 ? Parity::Odd : Parity::Even;
    auto circ = gen::random_circuit(rng, p, 1 + k % 3);
    AGFunction f;
    f.n = circ.inner.size();
    f.parity = p;
    f.outer = circ.outer;
    f.inner = circ.inner;
    for (std::size_t i = 0; i < circ.outer.size(); ++i) f.c.emplace_back(cu(rng));
    f.d = Scalar(du(rng));
    CircuitFunction cf{circ, f.c, f.d};
    const double theta = circuit_number(cf);
    const double rel = (std::abs(f.d.value()) - theta) / theta;
    auto r = ag_nonneg_decide(f);
    bool ok;
    if (p == Parity::Even && f.d.sign() >= 0)
      ok = r.verdict == Verdict::Certified;
    else if (rel < -1e-9)
      ok = r.verdict == Verdict::Certified;
    else if (rel > 1e-9)
      ok = r.verdict == Verdict::Refuted;
    else
      ok = r.verdict != Verdict::Refuted;
    agree += ok;

    // Boundary |d| = Theta: c_a = k lambda_a gives Theta = k exactly.
    AGFunction b = f;
    Rational kk(ki(rng));
    for (std::size_t i = 0; i < b.c.size(); ++i) b.c[i] = Scalar(Rational(kk * circ.lambda[i]));
    b.d = Scalar(Rational(p == Parity::Even || k % 4 == 1 ? -kk : kk));
    AGFunction h = b;
    for (auto& c : h.c) c = c.inexact();
    h.d = h.d.inexact();
    for (const auto& g : {b, h}) {
      ++boundary;
      if (ag_nonneg_decide(g).verdict == Verdict::Refuted) ++boundary_bad;
    }
  }
  o.require(agree == 100, "all 100 agree with the threshold test");
  o.require(boundary_bad == 0, "boundary never refuted");
  o.detail << agree << "/100 agree, " << boundary << " boundary cases, " << boundary_bad << " refuted";
}

bool lp_member(const DualVector& u, LpVariant variant) {
  for (const auto& x : u.v)
    if (x.sign() < 0) return false;
  const auto& s = u.support;
  for (std::size_t i = 0; i < s.even.size(); ++i)
    if (!dual_lp_characterization(u.v, u.v[i], s.even, s.even[i], variant)) return false;
  for (std::size_t i = 0; i < s.odd.size(); ++i)
    if (!dual_lp_characterization(u.v, u.w[i], s.even, s.odd[i], variant)) return false;
  return true;
}

void dual_modes(Outcome& o) {
  std::mt19937_64 rng(606);
  int mismatch = 0, lp_mismatch = 0, members = 0;
  for (int k = 0; k < 100; ++k) {
    auto s = gen::random_support(rng);
    auto u = gen::random_dual(rng, s);
    auto all = dual_membership(u, DualMode::AllLambda);
    auto circ = dual_membership(u, DualMode::Circuits);
    auto red = dual_membership(u, DualMode::Reduced);
    o.require(all.exact && circ.exact && red.exact, "exact decisions");
    if (all.member != circ.member || all.member != red.member) ++mismatch;
    if (lp_member(u, LpVariant::EntropyShift) != all.member || lp_member(u, LpVariant::ScaledTau) != all.member)
      ++lp_mismatch;
    members += all.member;
  }
  o.require(mismatch == 0, "allLambda / circuits / reduced agree");
  o.require(lp_mismatch == 0, "both LP variants agree");
  o.require(members > 0 && members < 100, "corpus has members and non-members");
  o.detail << "100 vectors (" << members << " members), " << mismatch << " mode mismatches, " << lp_mismatch
           << " LP mismatches";
}

void lower_bound(Outcome& o) {
  auto f = F(1, {{E({0}), 1}, {E({2}), -3}, {E({4}), 1}});
  auto t0 = std::chrono::steady_clock::now();
  auto lb = sonc_lower_bound(f);
  const double secs = seconds_since(t0);
  o.require(std::abs(lb.gamma + 1.25) <= 1e-6, "gamma within 1e-6 of -1.25");
  o.require(secs < 5.0, "runtime < 5 s");
  // f - gamma over the same support, constant shifted.
  SFunction g = f;
  g.c[0] = g.c[0] - Scalar(lb.gamma);
  o.require(verify_certificate(g, lb.cert).ok, "certificate for f - gamma verifies");
  char buf[64];
  std::snprintf(buf, sizeof buf, "gamma = %.9f, %d queries", lb.gamma, lb.queries);
  o.detail << buf;
}

void approximation(Outcome& o) {
  const UniPoly f = putinar_polynomial();
  std::vector<ApproxStep> steps;
  for (int N : {10, 20, 40}) {
    auto st = approx_step(f, N);
    o.require(st.N == N, "N kept");
    o.require(verify_certificate(to_sfunction(st.pN, N), st.cert).ok, "p_N certified");
    // p_N - f is the single term (c*/x0^N) x^N; everything below x^N is identical.
    bool congruent = true;
    for (int i = 0; i < N; ++i) congruent = congruent && st.pN.coeff(i) == f.coeff(i);
    o.require(congruent, "p_N = f mod x^N exactly");
    o.require(st.pN.degree() == N, "single extra term");
    // sup of |p_N - f| over [-0.9 x0, 0.9 x0], taken over the difference polynomial
    double sup = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      double x = -0.9 * st.x0 + 1.8 * st.x0 * k / 4000;
      double diff = 0.0;
      for (int i = 0; i <= N; ++i) diff += (st.pN.coeff(i) - f.coeff(i)).value() * std::pow(x, i);
      sup = std::max(sup, std::abs(diff));
    }
    const double expect = st.c_star * std::pow(0.9, N);
    o.require(std::abs(sup - expect) <= 1e-12 * expect, "sup gap = c* 0.9^N");
    steps.push_back(st);
    o.detail << "N=" << N << " c*=" << st.c_star << " ";
  }
  const double c40 = steps.back().c_star;
  double prev = INFINITY;
  for (const auto& st : steps) {
    double gap = c40 / std::pow(st.x0, st.N) * std::pow(0.9 * st.x0, st.N);
    o.require(gap < prev, "gap strictly decreasing at fixed c*");
    prev = gap;
  }
}

void extreme_rays(Outcome& o) {
  Support s(1, {E({0}), E({1}), E({2})}, {E({1})});
  const Rational a(3, 2), b(1, 2);
  auto cf = [&](Parity p, Scalar d) {
    return CircuitFunction{make_circuit({E({0}), E({2})}, E({1}), p, s.even), {Scalar(a * a), Scalar(b * b)}, d};
  };
  auto even = cf(Parity::Even, Scalar(Rational(-2 * a * b)));
  o.require(classify_extreme(even, s, 0.0).kind == ExtremeKind::ExtremeEven, "even circuit extreme");
  auto odd = cf(Parity::Odd, Scalar(Rational(2 * a * b)));
  o.require(classify_extreme(odd, s, 0.0).kind == ExtremeKind::NotExtreme, "odd version not extreme");
  // a^2 + 2ab x + b^2 x^2 = (a^2 - 2ab|x| + b^2 x^2) + 2ab (|x| + x), summed over (A, B) exactly
  const Rational t = 2 * a * b;
  // even part: (a^2, -t, b^2) on A, 0 on B; single part: (0, t, 0) on A, t on B
  const std::vector<Rational> c_sum{a * a + 0, -t + t, b * b + 0};
  const Rational d_sum = 0 + t;
  o.require(c_sum == std::vector<Rational>{a * a, 0, b * b} && Scalar(d_sum) == odd.d, "explicit split sums back");
  o.require(classify_extreme(even, s, 0.0).kind == ExtremeKind::ExtremeEven, "first summand extreme");
  o.require(classify_extreme(MonomialRay{E({1}), 1}, s).kind == ExtremeKind::ExtremeSingle, "|x| + x extreme");
  // |x| = 1/2 (|x| + x) + 1/2 (|x| - x)
  o.require(classify_extreme(MonomialRay{E({1}), 0}, s).kind == ExtremeKind::NotExtreme, "|x| not extreme");
  o.require(classify_extreme(MonomialRay{E({1}), -1}, s).kind == ExtremeKind::ExtremeSingle, "|x| - x extreme");

  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> cu(0.2, 3.0);
  int members_ok = 0, perturbed_ok = 0;
  for (int k = 0; k < 50; ++k) {
    Parity p = k % 2 ? Parity::Odd : Parity::Even;
    auto circ = gen::random_circuit(rng, p, 1 + k % 2);
    std::vector<Exponent> ev = circ.outer, od;
    if (p == Parity::Even)
      ev.push_back(circ.inner);
    else
      od.push_back(circ.inner);
    std::sort(ev.begin(), ev.end());
    Support amb(circ.inner.size(), ev, od);
    CircuitFunction g{circ, {}, Scalar(0)};
    for (std::size_t i = 0; i < circ.outer.size(); ++i) g.c.emplace_back(cu(rng));
    const double theta = circuit_number(g);
    g.d = Scalar(p == Parity::Even || k % 4 == 1 ? -theta : theta);
    const auto want = p == Parity::Even ? ExtremeKind::ExtremeEven : ExtremeKind::ExtremeOdd;
    members_ok += classify_extreme(g, amb).kind == want;
    g.d = Scalar(g.d.value() * (1 - 1e-3));
    perturbed_ok += classify_extreme(g, amb).kind == ExtremeKind::NotExtreme;
  }
  o.require(members_ok == 50, "50 E-set members classified extreme");
  o.require(perturbed_ok == 50, "50 perturbed members classified not extreme");
  o.detail << "line example reproduced; " << members_ok << "/50 members, " << perturbed_ok << "/50 perturbed";
}

void simplex(Outcome& o) {
  auto motz = F(2, {{E2(0, 0), 1}, {E2(4, 2), 1}, {E2(2, 4), 1}, {E2(2, 2), -3}});
  auto r = simplex_fast_path(motz);
  o.require(r.status == SimplexStatus::Certified || r.status == SimplexStatus::Indeterminate,
            "Motzkin certified or indeterminate");
  CircuitFunction cf{make_circuit({E2(0, 0), E2(2, 4), E2(4, 2)}, E2(2, 2), Parity::Even, motz.support.even),
                     {1, 1, 1}, -3};
  o.require(compare_inner_to_theta(cf, 0.0) == 0, "Theta = 3 exactly");
  if (r.status == SimplexStatus::Certified) o.require(verify_certificate(motz, *r.cert, 0.0).ok, "exact certificate");

  auto non = F(2, {{E2(0, 0), 1}, {E2(4, 0), 1}, {E2(0, 4), 1}}, {{E2(1, 1), -3}});
  auto q = simplex_fast_path(non);
  o.require(q.status == SimplexStatus::Refuted, "1 + x^4 + y^4 - 3xy refuted");
  const auto* pt = q.cert ? std::get_if<PointRefutation>(&*q.cert) : nullptr;
  o.require(pt && evaluate(non, pt->x) < 0, "witness point with negative value");
  o.detail << "Motzkin " << simplex_status_name(r.status) << ", non-example " << simplex_status_name(q.status);
  if (pt) o.detail << " at (" << pt->x[0] << ", " << pt->x[1] << ") value " << evaluate(non, pt->x);
}

void no_cancellation(Outcome& o) {
  std::mt19937_64 rng(1111);
  int done = 0, failed = 0;
  for (int k = 0; k < 400 && done < 20; ++k) {
    auto f = gen::random_sfunction(rng, true);
    std::vector<std::pair<Exponent, Scalar>> ev, od;
    for (std::size_t i = 0; i < f.c.size(); ++i) ev.emplace_back(f.support.even[i], f.c[i]);
    for (std::size_t i = 0; i < f.d.size(); ++i) od.emplace_back(f.support.odd[i], f.d[i]);
    ev.emplace_back(Exponent(f.n(), Rational(2)), 0);
    ev.emplace_back(Exponent(f.n(), Rational(6)), 0);
    od.emplace_back(Exponent(f.n(), Rational(3)), 0);
    auto big = SFunction::from_terms(f.n(), ev, od);
    auto r = scone_membership(big);
    if (r.verdict != Verdict::Certified) continue;
    ++done;
    auto rr = restrict_support(big, std::get<AGDecomposition>(*r.cert));
    auto small = trim_support(big);
    if (rr.verdict != Verdict::Certified || !verify_certificate(small, *rr.cert).ok) {
      ++failed;
      continue;
    }
    const auto& dec = std::get<AGDecomposition>(*rr.cert);
    if (!(dec.support == small.support)) ++failed;
  }
  o.require(done == 20, "20 certified instances");
  o.require(failed == 0, "zero failures");
  o.detail << done << " instances, " << failed << " failures";
}

}  // namespace

int main() {
  run(1, "Putinar exact reproduction", putinar);
  run(2, "dual strictness", dual_strictness);
  run(3, "circuit decomposition regression", circuit_regression);
  run(4, "AG decision vs oracle", ag_vs_oracle);
  run(5, "circuit-number consistency", circuit_number_consistency);
  run(6, "dual mode equivalence", dual_modes);
  run(7, "lower bound exactness", lower_bound);
  run(8, "approximation convergence", approximation);
  run(9, "extreme-ray classification", extreme_rays);
  run(10, "simplex fast path", simplex);
  run(11, "no-cancellation", no_cancellation);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
