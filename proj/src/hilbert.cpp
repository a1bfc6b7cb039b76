#include "ctp/hilbert.hpp"

#include <set>

#include "ctp/localsearch.hpp"

namespace ctp {

bool g_inject_symbol_fault = false;

namespace {

// Unit part of a at p as a residue mod m (m a power of p): with
// a = p^k u, num(u) and den(u) are prime to p, so u mod m is num/den mod m.
Int unit_part_mod(const Rat& a, const Int& p, const Int& m) {
  Rat u = a;
  long k = valuation(a, p);
  Rat pk(p);
  for (long i = 0; i < k; ++i) u /= pk;
  for (long i = 0; i < -k; ++i) u *= pk;
  return div_mod(Int(u.get_num()), Int(u.get_den()), m);
}

// (u-1)/2 mod 2 and (u^2-1)/8 mod 2 for odd residues mod 8.
int eps_of(const Int& u8) { return (u8 == 3 || u8 == 7) ? 1 : 0; }
int omega_of(const Int& u8) { return (u8 == 3 || u8 == 5) ? 1 : 0; }

int legendre_of_unit(const Rat& a, const Int& p) {
  // (num/den | p) = (num|p)(den|p) for p dividing neither.
  return legendre_symbol(Int(a.get_num()), p) *
         legendre_symbol(Int(a.get_den()), p);
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Place& v) {
  if (a == 0 || b == 0)
    throw InvalidInput("hilbert_symbol: arguments must be nonzero");
  int result;
  if (v.is_real()) {
    result = (a < 0 && b < 0) ? -1 : 1;
  } else if (v.p() == 2) {
    long alpha = valuation(a, Int(2)), beta = valuation(b, Int(2));
    Int u = unit_part_mod(a, 2, 8), w = unit_part_mod(b, 2, 8);
    long e = eps_of(u) * eps_of(w) + alpha * omega_of(w) + beta * omega_of(u);
    result = (e % 2) ? -1 : 1;
  } else {
    const Int& p = v.p();
    long alpha = valuation(a, p), beta = valuation(b, p);
    Rat ua = a, ub = b;
    int sign = 1;
    if ((alpha * beta) % 2 != 0 && ((p - 1) / 2) % 2 != 0) sign = -sign;
    Rat pr(p);
    for (long i = 0; i < alpha; ++i) ua /= pr;
    for (long i = 0; i < -alpha; ++i) ua *= pr;
    for (long i = 0; i < beta; ++i) ub /= pr;
    for (long i = 0; i < -beta; ++i) ub *= pr;
    if (beta % 2 != 0) sign *= legendre_of_unit(ua, p);
    if (alpha % 2 != 0) sign *= legendre_of_unit(ub, p);
    result = sign;
  }
  if (g_inject_symbol_fault && !v.is_real() && v.p() == 2) result = -result;
  return result;
}

bool solvability_oracle(const Rat& a, const Rat& b, const Place& v,
                        long level) {
  if (a == 0 || b == 0)
    throw InvalidInput("solvability_oracle: arguments must be nonzero");
  if (v.is_real()) return !(a < 0 && b < 0);
  const Int& p = v.p();
  // Same Q_v-class, integer coefficients, v_p in {0, 1}: multiply by
  // den^2 and strip even powers of p (solutions rescale accordingly).
  auto reduce = [&p](const Rat& q) {
    Int n = Int(q.get_num()) * Int(q.get_den());
    long k = valuation(n, p);
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k - (k % 2 + 2) % 2));
    return Int(n / pk);
  };
  Int ra = reduce(a), rb = reduce(b);
  QForm f;
  f.nvars = 3;
  f.c[qform_pair_index(0, 0)] = 1;
  f.c[qform_pair_index(1, 1)] = -ra;
  f.c[qform_pair_index(2, 2)] = -rb;
  long base = level > 0 ? level : (p == 2 ? 5 : 2);
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      PadicCertificate cert;
      return padic_solve({f}, p, base << attempt, &cert) ==
             LocalVerdict::Solvable;
    } catch (const IndeterminatePrecision&) {
      if (attempt == 2) throw;
    }
  }
  return false;  // unreachable
}

bool reciprocity_check(const Rat& a, const Rat& b, std::map<Place, int>* terms) {
  std::set<Int> primes{2};
  for (const Rat* q : {&a, &b}) {
    for (const Int& part : {Int(q->get_num()), Int(q->get_den())})
      for (auto& [p, e] : factorize(part).factors) primes.insert(p);
  }
  int prod = hilbert_symbol(a, b, Place::real());
  if (terms) (*terms)[Place::real()] = prod;
  for (const Int& p : primes) {
    int s = hilbert_symbol(a, b, Place::finite(p));
    if (terms) (*terms)[Place::finite(p)] = s;
    prod *= s;
  }
  return prod == 1;
}

int algebra_symbol(const AlgebraClass& gamma, const AlgebraClass& delta,
                   const Place& v) {
  int s = 1;
  for (int j = 0; j < 3; ++j)
    s *= hilbert_symbol(Rat(gamma.c[j].value()), Rat(delta.c[j].value()), v);
  return s;
}

bool locally_square(const Rat& a, const Place& v) {
  if (a == 0) throw InvalidInput("locally_square: argument must be nonzero");
  if (v.is_real()) return a > 0;
  const Int& p = v.p();
  long k = valuation(a, p);
  if (k % 2 != 0) return false;
  if (p == 2) return unit_part_mod(a, 2, 8) == 1;
  Rat u = a, pr(p);
  for (long i = 0; i < k; ++i) u /= pr;
  for (long i = 0; i < -k; ++i) u *= pr;
  return legendre_of_unit(u, p) == 1;
}

}  // namespace ctp
