#include <algorithm>
#include <cmath>
#include <map>

#include "scone/dual_cone.hpp"
#include "scone/scone_member.hpp"

namespace scone {

namespace {

struct Sums {
  std::map<Exponent, Scalar> even, odd;
  double mag = 0.0;
  void add_even(const Exponent& e, const Scalar& c) {
    auto [it, fresh] = even.try_emplace(e, c);
    if (!fresh) it->second += c;
    mag = std::max(mag, std::abs(c.value()));
  }
  void add_odd(const Exponent& e, const Scalar& c) {
    auto [it, fresh] = odd.try_emplace(e, c);
    if (!fresh) it->second += c;
    mag = std::max(mag, std::abs(c.value()));
  }
};

VerifyResult compare_sums(const SFunction& f, Sums& s, double rel_tol) {
  for (std::size_t i = 0; i < f.c.size(); ++i) s.add_even(f.support.even[i], -f.c[i]);
  for (std::size_t i = 0; i < f.d.size(); ++i) s.add_odd(f.support.odd[i], -f.d[i]);
  const double tol = rel_tol * std::max(1.0, s.mag);
  auto bad = [&](const Scalar& x) { return x.is_exact() ? !x.is_zero() : std::abs(x.value()) > tol; };
  for (const auto& [e, x] : s.even)
    if (bad(x)) return {false, "coefficient mismatch at even exponent " + format_exponent(e)};
  for (const auto& [e, x] : s.odd)
    if (bad(x)) return {false, "coefficient mismatch at odd exponent " + format_exponent(e)};
  return {true, ""};
}

VerifyResult add_monomials(Sums& s, const std::vector<MonomialTerm>& ms) {
  for (const auto& m : ms) {
    if (m.t.sign() < 0) return {false, "negative monomial coefficient at " + format_exponent(m.beta)};
    s.add_even(m.beta, m.t);
  }
  return {true, ""};
}

json monomials_to_json(const std::vector<MonomialTerm>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(json::array({exponent_to_json(m.beta), scalar_to_json(m.t)}));
  return a;
}

std::vector<MonomialTerm> monomials_from_json(const json& j, bool exact) {
  std::vector<MonomialTerm> out;
  for (const auto& t : j) out.push_back({exponent_from_json(t.at(0)), scalar_from_json(t.at(1), exact)});
  return out;
}

}  // namespace

VerifyResult verify_certificate(const SFunction& f, const Certificate& cert, double rel_tol) {
  try {
    if (const auto* dec = std::get_if<AGDecomposition>(&cert)) {
      Sums s;
      for (std::size_t k = 0; k < dec->parts.size(); ++k) {
        const auto& p = dec->parts[k];
        p.f.validate();
        if (p.f.n != f.n()) return {false, "part dimension mismatch"};
        if (!check_witness(p.f, p.witness, WitnessForm::Product, rel_tol))
          return {false, "AG part " + std::to_string(k) + " fails its witness check"};
        for (std::size_t i = 0; i < p.f.outer.size(); ++i) s.add_even(p.f.outer[i], p.f.c[i]);
        if (p.f.parity == Parity::Even)
          s.add_even(p.f.inner, p.f.d);
        else
          s.add_odd(p.f.inner, p.f.d);
      }
      if (auto r = add_monomials(s, dec->monomials); !r.ok) return r;
      return compare_sums(f, s, rel_tol);
    }
    if (const auto* dec = std::get_if<CircuitDecomposition>(&cert)) {
      Sums s;
      for (std::size_t k = 0; k < dec->parts.size(); ++k) {
        const auto& cf = dec->parts[k];
        const auto& C = cf.circuit;
        if (cf.c.size() != C.outer.size()) return {false, "circuit part " + std::to_string(k) + " is malformed"};
        auto fresh = make_circuit(C.outer, C.inner, C.parity, {});
        if (fresh.outer != C.outer || fresh.lambda != C.lambda)
          return {false, "circuit part " + std::to_string(k) + " has inconsistent barycentric weights"};
        for (const auto& c : cf.c)
          if (c.sign() < 0) return {false, "circuit part " + std::to_string(k) + " has a negative outer coefficient"};
        CircuitFunction check = cf;
        check.circuit = fresh;
        if (C.parity == Parity::Even && cf.d.sign() > 0) {
          // positive inner term: trivially non-negative
        } else if (!circuit_nonnegative(check, rel_tol)) {
          return {false, "circuit part " + std::to_string(k) + " exceeds its circuit number"};
        }
        for (std::size_t i = 0; i < C.outer.size(); ++i) s.add_even(C.outer[i], cf.c[i]);
        if (C.parity == Parity::Even)
          s.add_even(C.inner, cf.d);
        else
          s.add_odd(C.inner, cf.d);
      }
      if (auto r = add_monomials(s, dec->monomials); !r.ok) return r;
      return compare_sums(f, s, rel_tol);
    }
    if (const auto* ref = std::get_if<DualRefutation>(&cert)) {
      if (!(ref->u.support == f.support)) return {false, "dual vector support differs from the function"};
      auto rep = dual_membership(ref->u, DualMode::Reduced);
      if (!rep.member) return {false, "dual vector is not in the dual cone: " + rep.reason};
      Scalar p = pair(ref->u, f);
      if (p.is_exact()) {
        if (p.sign() >= 0) return {false, "pairing is not negative"};
      } else {
        double mag = 0.0;
        for (std::size_t i = 0; i < f.c.size(); ++i) mag += std::abs(ref->u.v[i].value() * f.c[i].value());
        for (std::size_t i = 0; i < f.d.size(); ++i) mag += std::abs(ref->u.w[i].value() * f.d[i].value());
        if (!(p.value() < -1e-12 * mag)) return {false, "pairing is not negative"};
      }
      return {true, ""};
    }
    const auto& pt = std::get<PointRefutation>(cert);
    if (pt.x.size() != f.n()) return {false, "point has the wrong dimension"};
    double v = evaluate(f, pt.x);
    if (!std::isfinite(v) || !(v < -1e-12 * f.scale())) return {false, "function is not negative at the point"};
    return {true, ""};
  } catch (const Error& e) {
    return {false, e.what()};
  }
}

json certificate_to_json(const Certificate& c) {
  json j{{"kind", certificate_kind(c)}};
  if (const auto* dec = std::get_if<AGDecomposition>(&c)) {
    j["n"] = dec->support.n;
    json parts = json::array();
    for (const auto& p : dec->parts)
      parts.push_back({{"function", ag_function_to_json(p.f)}, {"witness", ag_witness_to_json(p.witness)}});
    j["parts"] = parts;
    j["monomials"] = monomials_to_json(dec->monomials);
  } else if (const auto* dec = std::get_if<CircuitDecomposition>(&c)) {
    j["n"] = dec->support.n;
    json parts = json::array();
    for (const auto& p : dec->parts) parts.push_back(circuit_function_to_json(p));
    j["parts"] = parts;
    j["monomials"] = monomials_to_json(dec->monomials);
  } else if (const auto* ref = std::get_if<DualRefutation>(&c)) {
    j["dual"] = serialize_dual_vector(ref->u);
    j["pairing"] = scalar_to_json(ref->pairing);
  } else {
    const auto& pt = std::get<PointRefutation>(c);
    j["x"] = pt.x;
    j["value"] = pt.value;
  }
  return j;
}

Certificate certificate_from_json(const json& j, const SFunction& f, bool exact) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ag-decomposition") {
    AGDecomposition dec;
    dec.support = f.support;
    for (const auto& p : j.at("parts"))
      dec.parts.push_back({ag_function_from_json(p.at("function"), f.n(), exact),
                           ag_witness_from_json(p.at("witness"), exact)});
    dec.monomials = monomials_from_json(j.value("monomials", json::array()), exact);
    return dec;
  }
  if (kind == "circuit-decomposition") {
    CircuitDecomposition dec;
    dec.support = f.support;
    for (const auto& p : j.at("parts")) dec.parts.push_back(circuit_function_from_json(p, f.support.even, exact));
    dec.monomials = monomials_from_json(j.value("monomials", json::array()), exact);
    return dec;
  }
  if (kind == "dual-refutation") {
    DualRefutation ref;
    ref.u = parse_dual_vector(j.at("dual"), exact);
    ref.pairing = j.contains("pairing") ? scalar_from_json(j.at("pairing"), exact) : Scalar(0);
    return ref;
  }
  if (kind == "point-refutation") {
    PointRefutation pt;
    pt.x = j.at("x").get<std::vector<double>>();
    pt.value = j.value("value", 0.0);
    return pt;
  }
  throw Error("unknown certificate kind: " + kind);
}

}  // namespace scone
