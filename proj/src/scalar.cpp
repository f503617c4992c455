#include "scone/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace scone {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view ex = s.substr(e + 1);
    bool exp_negative = false;
    if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
      exp_negative = ex.front() == '-';
      ex.remove_prefix(1);
    }
    if (!all_digits(ex)) throw Error("malformed number: " + std::string(text));
    exponent = std::stol(std::string(ex));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw Error("malformed number: " + std::string(text));
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw Error("malformed number: " + std::string(text));
    digits = std::string(s);
  }
  if (digits.empty()) digits = "0";
  mpz_class num(digits, 10);
  long scale = exponent - frac_len;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational q = scale >= 0 ? Rational(num * p10) : Rational(num, p10);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view ns = text.substr(0, slash), ds = text.substr(slash + 1);
    std::string_view nd = ns;
    if (!nd.empty() && (nd.front() == '-' || nd.front() == '+')) nd.remove_prefix(1);
    if (!all_digits(nd) || !all_digits(ds)) throw Error("malformed rational: " + std::string(text));
    mpz_class num(std::string(nd), 10), den(std::string(ds), 10);
    if (den == 0) throw Error("zero denominator: " + std::string(text));
    if (!ns.empty() && ns.front() == '-') num = -num;
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw Error("non-finite value has no rational form");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("cannot format double");
  return parse_decimal(std::string_view(buf, static_cast<size_t>(end - buf)));
}

Scalar Scalar::operator-() const {
  Scalar r(*this);
  r.value_ = -value_;
  if (r.exact_) *r.exact_ = -*r.exact_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (exact_ && o.exact_) {
    *exact_ += *o.exact_;
    value_ = exact_->get_d();
  } else {
    exact_.reset();
    value_ += o.value_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (exact_ && o.exact_) {
    *exact_ *= *o.exact_;
    value_ = exact_->get_d();
  } else {
    exact_.reset();
    value_ *= o.value_;
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (exact_ && o.exact_) {
    if (*o.exact_ == 0) throw Error("division by zero");
    *exact_ /= *o.exact_;
    value_ = exact_->get_d();
  } else {
    exact_.reset();
    value_ /= o.value_;
  }
  return *this;
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(*a.exact_, *b.exact_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.value_ <=> b.value_;
}

bool operator==(const Scalar& a, const Scalar& b) { return (a <=> b) == 0; }

int Scalar::sign() const {
  if (exact_) return sgn(*exact_);
  return (value_ > 0) - (value_ < 0);
}

}  // namespace scone
