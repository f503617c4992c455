#include "scone/sfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace scone {

namespace {

void sort_unique(std::vector<Exponent>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::optional<std::size_t> find_sorted(const std::vector<Exponent>& v, const Exponent& e) {
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || *it != e) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

double term_power(double x, const Rational& a, bool signed_base) {
  if (sgn(a) == 0) return 1.0;
  double ax = std::abs(x);
  if (ax == 0.0) return sgn(a) < 0 ? std::numeric_limits<double>::infinity() : 0.0;
  double p = std::pow(ax, a.get_d());
  if (signed_base && x < 0 && mpz_odd_p(a.get_num_mpz_t())) p = -p;
  return p;
}

}  // namespace

bool is_odd_exponent(const Exponent& e) {
  bool any_odd = false;
  for (const auto& q : e) {
    if (!is_integer(q) || sgn(q) < 0) return false;
    if (mpz_odd_p(q.get_num_mpz_t())) any_odd = true;
  }
  return any_odd;
}

std::vector<double> to_double(const Exponent& e) {
  std::vector<double> r;
  r.reserve(e.size());
  for (const auto& q : e) r.push_back(q.get_d());
  return r;
}

std::string format_exponent(const Exponent& e) {
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += format_rational(e[i]);
  }
  return s + ")";
}

Support::Support(std::size_t dim, std::vector<Exponent> evens, std::vector<Exponent> odds)
    : n(dim), even(std::move(evens)), odd(std::move(odds)) {
  if (n == 0) throw Error("dimension must be at least 1");
  sort_unique(even);
  sort_unique(odd);
  for (const auto& e : even)
    if (e.size() != n) throw Error("exponent " + format_exponent(e) + " has wrong length");
  for (const auto& e : odd) {
    if (e.size() != n) throw Error("exponent " + format_exponent(e) + " has wrong length");
    if (!is_odd_exponent(e))
      throw Error("odd exponent " + format_exponent(e) + " must be a non-negative integer vector with an odd entry");
  }
}

std::optional<std::size_t> Support::even_index(const Exponent& e) const { return find_sorted(even, e); }
std::optional<std::size_t> Support::odd_index(const Exponent& e) const { return find_sorted(odd, e); }

SFunction::SFunction(Support s) : support(std::move(s)) {
  c.assign(support.even.size(), Scalar(0));
  d.assign(support.odd.size(), Scalar(0));
}

SFunction::SFunction(Support s, std::vector<Scalar> cs, std::vector<Scalar> ds)
    : support(std::move(s)), c(std::move(cs)), d(std::move(ds)) {
  if (c.size() != support.even.size() || d.size() != support.odd.size())
    throw Error("coefficient count does not match support");
}

SFunction SFunction::from_terms(std::size_t n, const std::vector<std::pair<Exponent, Scalar>>& even,
                                const std::vector<std::pair<Exponent, Scalar>>& odd) {
  std::vector<Exponent> es, os;
  for (const auto& t : even) es.push_back(t.first);
  for (const auto& t : odd) os.push_back(t.first);
  SFunction f(Support(n, es, os));
  for (const auto& [e, v] : even) f.c[*f.support.even_index(e)] += v;
  for (const auto& [e, v] : odd) f.d[*f.support.odd_index(e)] += v;
  return f;
}

bool SFunction::all_exact() const {
  return std::all_of(c.begin(), c.end(), [](const Scalar& s) { return s.is_exact(); }) &&
         std::all_of(d.begin(), d.end(), [](const Scalar& s) { return s.is_exact(); });
}

double SFunction::scale() const {
  double s = 1e-300;
  for (const auto& x : c) s = std::max(s, std::abs(x.value()));
  for (const auto& x : d) s = std::max(s, std::abs(x.value()));
  return s;
}

SFunction SFunction::inexact() const {
  SFunction g(*this);
  for (auto& x : g.c) x = x.inexact();
  for (auto& x : g.d) x = x.inexact();
  return g;
}

SFunction SFunction::exactified() const {
  SFunction g(*this);
  for (auto& x : g.c)
    if (!x.is_exact()) x = Scalar(rational_from_double(x.value()));
  for (auto& x : g.d)
    if (!x.is_exact()) x = Scalar(rational_from_double(x.value()));
  return g;
}

Scalar SFunction::even_coeff(const Exponent& e) const {
  auto i = support.even_index(e);
  return i ? c[*i] : Scalar(0);
}

Scalar SFunction::odd_coeff(const Exponent& e) const {
  auto i = support.odd_index(e);
  return i ? d[*i] : Scalar(0);
}

DualVector::DualVector(Support s, std::vector<Scalar> vs, std::vector<Scalar> ws)
    : support(std::move(s)), v(std::move(vs)), w(std::move(ws)) {
  if (v.size() != support.even.size() || w.size() != support.odd.size())
    throw Error("dual vector size does not match support");
}

bool DualVector::all_exact() const {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_exact(); }) &&
         std::all_of(w.begin(), w.end(), [](const Scalar& s) { return s.is_exact(); });
}

double abs_power(const std::vector<double>& x, const Exponent& e) {
  double p = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) p *= term_power(x[j], e[j], false);
  return p;
}

double signed_power(const std::vector<double>& x, const Exponent& e) {
  double p = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) p *= term_power(x[j], e[j], true);
  return p;
}

double evaluate(const SFunction& f, const std::vector<double>& x) {
  if (x.size() != f.n()) throw Error("point dimension does not match");
  double total = 0.0;
  bool infinite = false;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i].is_zero()) continue;
    double p = abs_power(x, f.support.even[i]);
    if (std::isinf(p)) {
      infinite = true;
      continue;
    }
    total += f.c[i].value() * p;
  }
  for (std::size_t i = 0; i < f.d.size(); ++i) {
    if (f.d[i].is_zero()) continue;
    total += f.d[i].value() * signed_power(x, f.support.odd[i]);
  }
  return infinite ? std::numeric_limits<double>::infinity() : total;
}

Scalar pair(const DualVector& u, const SFunction& f) {
  if (!(u.support == f.support)) throw Error("dual vector and function have different supports");
  Scalar s(0);
  for (std::size_t i = 0; i < f.c.size(); ++i) s += u.v[i] * f.c[i];
  for (std::size_t i = 0; i < f.d.size(); ++i) s += u.w[i] * f.d[i];
  return s;
}

DualVector point_functional(const Support& s, const std::vector<double>& x) {
  std::vector<Scalar> v, w;
  for (const auto& e : s.even) v.emplace_back(abs_power(x, e));
  for (const auto& e : s.odd) w.emplace_back(signed_power(x, e));
  return DualVector(s, std::move(v), std::move(w));
}

Scalar scalar_from_json(const json& j, bool exact) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Scalar(Rational(j.dump()));
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) throw Error("non-finite coefficient");
    return exact ? Scalar(rational_from_double(v)) : Scalar(v);
  }
  throw Error("coefficient must be a number or a string");
}

json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return format_rational(s.exact());
  return s.value();
}

Exponent exponent_from_json(const json& j) {
  if (!j.is_array()) throw Error("exponent must be an array");
  Exponent e;
  for (const auto& x : j) e.push_back(scalar_from_json(x, true).exact());
  return e;
}

json exponent_to_json(const Exponent& e) {
  json a = json::array();
  for (const auto& q : e) {
    if (is_integer(q) && q.get_num().fits_slong_p())
      a.push_back(q.get_num().get_si());
    else
      a.push_back(format_rational(q));
  }
  return a;
}

namespace {

using Terms = std::vector<std::pair<Exponent, Scalar>>;

Terms read_terms(const json& doc, const char* key, std::size_t n, bool exact) {
  Terms terms;
  if (!doc.contains(key)) return terms;
  const json& list = doc.at(key);
  if (!list.is_array()) throw Error(std::string("\"") + key + "\" must be an array");
  for (const auto& entry : list) {
    if (!entry.is_array() || entry.size() != 2) throw Error(std::string("malformed term in \"") + key + "\"");
    Exponent e = exponent_from_json(entry[0]);
    if (e.size() != n) throw Error("exponent " + format_exponent(e) + " has wrong length");
    terms.emplace_back(std::move(e), scalar_from_json(entry[1], exact));
  }
  return terms;
}

std::size_t read_dim(const json& doc) {
  if (!doc.is_object()) throw Error("document must be an object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) throw Error("missing integer field \"n\"");
  long n = doc.at("n").get<long>();
  if (n < 1) throw Error("\"n\" must be positive");
  return static_cast<std::size_t>(n);
}

json write_terms(const std::vector<Exponent>& exps, const std::vector<Scalar>& coeffs) {
  json a = json::array();
  for (std::size_t i = 0; i < exps.size(); ++i) a.push_back(json::array({exponent_to_json(exps[i]), scalar_to_json(coeffs[i])}));
  return a;
}

}  // namespace

SFunction parse_sfunction(const json& doc, bool exact) {
  std::size_t n = read_dim(doc);
  Terms even = read_terms(doc, "even", n, exact);
  Terms odd = read_terms(doc, "odd", n, exact);
  if (even.empty()) throw Error("the even exponent set must be non-empty");
  for (const auto& t : odd)
    if (!is_odd_exponent(t.first))
      throw Error("odd exponent " + format_exponent(t.first) + " must be a non-negative integer vector with an odd entry");
  return SFunction::from_terms(n, even, odd);
}

json serialize_sfunction(const SFunction& f) {
  return json{{"n", f.n()}, {"even", write_terms(f.support.even, f.c)}, {"odd", write_terms(f.support.odd, f.d)}};
}

DualVector parse_dual_vector(const json& doc, bool exact) {
  std::size_t n = read_dim(doc);
  Terms even = read_terms(doc, "even", n, exact);
  Terms odd = read_terms(doc, "odd", n, exact);
  if (even.empty()) throw Error("the even exponent set must be non-empty");
  SFunction tmp = SFunction::from_terms(n, even, odd);
  return DualVector(tmp.support, tmp.c, tmp.d);
}

json serialize_dual_vector(const DualVector& u) {
  return json{{"n", u.support.n}, {"even", write_terms(u.support.even, u.v)}, {"odd", write_terms(u.support.odd, u.w)}};
}

}  // namespace scone
