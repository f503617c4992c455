#include "scone/power_compare.hpp"

namespace scone {

namespace {

mpz_class pow_z(const mpz_class& base, const mpz_class& e) {
  if (!e.fits_ulong_p()) throw Error("exponent too large for exact power comparison");
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e.get_ui());
  return r;
}

}  // namespace

std::strong_ordering power_compare_exact(const Rational& target, const std::vector<Rational>& bases,
                                         const std::vector<Rational>& lambda) {
  if (bases.size() != lambda.size()) throw Error("bases and weights differ in length");
  Rational total(0);
  mpz_class q(1);
  for (const auto& l : lambda) {
    if (sgn(l) < 0) throw Error("negative weight in power comparison");
    total += l;
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), l.get_den_mpz_t());
  }
  if (total != 1) throw Error("weights must sum to one");

  // |t|^q  vs  prod b_i^{p_i}, all as fractions num/den.
  Rational t = abs(target);
  mpz_class lhs_num = pow_z(t.get_num(), q), lhs_den = pow_z(t.get_den(), q);
  mpz_class rhs_num(1), rhs_den(1);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (sgn(lambda[i]) == 0) continue;
    if (sgn(bases[i]) < 0) throw Error("negative base in power comparison");
    mpz_class p = lambda[i].get_num() * (q / lambda[i].get_den());
    rhs_num *= pow_z(bases[i].get_num(), p);
    rhs_den *= pow_z(bases[i].get_den(), p);
  }
  mpz_class a = lhs_num * rhs_den, b = rhs_num * lhs_den;
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace scone
