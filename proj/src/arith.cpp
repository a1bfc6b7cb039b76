#include "ctp/arith.hpp"

#include <algorithm>

namespace ctp {

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int powmod(const Int& b, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

bool is_square(const Int& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

// One Miller-Rabin round; n odd > 2, n-1 = d * 2^s.
bool mr_witness(const Int& n, const Int& d, unsigned long s, const Int& a) {
  Int x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(const Int& n) {
  Int m = abs(n);
  if (m < 2) return false;
  static const unsigned long small[] = {2,  3,  5,  7,  11, 13,
                                        17, 19, 23, 29, 31, 37};
  for (unsigned long p : small) {
    if (m == p) return true;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;
  }
  // Witness set proven complete for n < 3.317e24 (Sorenson-Webster).
  static const Int mr_limit("3317044064679887385961981");
  if (m < mr_limit) {
    Int d = m - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    for (unsigned long a : small)
      if (!mr_witness(m, d, s, Int(a))) return false;
    return true;
  }
  return mpz_probab_prime_p(m.get_mpz_t(), 64) > 0;
}

namespace {

// Deterministic Pollard rho (Floyd cycle) for odd composite m with no small
// factors.  Effort is bounded: enough for any least prime factor up to
// ~1e10, far beyond what squarefree parts of descent coordinates produce.
// Returns a nontrivial factor or 0 on give-up.
Int rho_split(const Int& m) {
  for (unsigned long c = 1; c <= 7; c += 2) {
    Int x = 2, y = 2, d = 1;
    for (long i = 0; i < (1L << 18) && d == 1; ++i) {
      x = (x * x + c) % m;
      y = (y * y + c) % m;
      y = (y * y + c) % m;
      Int diff = x > y ? x - y : y - x;
      if (diff == 0) break;  // closed cycle, no factor; reseed
      d = gcd(diff, m);
    }
    if (d > 1 && d < m) return d;
  }
  return 0;
}

}  // namespace

Factorization factorize(const Int& n, unsigned long bound) {
  if (n == 0) throw InvalidInput("factorize: zero has no factorization");
  Factorization out;
  Int m = n;
  if (m < 0) {
    out.sign = -1;
    m = -m;
  }
  auto push = [&out](const Int& p, unsigned e) {
    if (e) out.factors.emplace_back(p, e);
  };
  unsigned e2 = 0;
  while (mpz_even_p(m.get_mpz_t())) {
    m >>= 1;
    ++e2;
  }
  push(2, e2);
  for (unsigned long p = 3; p <= bound && m > 1; p += 2) {
    if (Int(p) * p > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    push(p, e);
  }
  if (m > 1) {
    if (m <= Int(bound) * bound || is_prime(m)) {
      // Cofactor below bound^2 is prime (no factor <= bound survives).
      push(m, 1);
    } else if (mpz_perfect_power_p(m.get_mpz_t())) {
      // p^k with p prime is still an exact answer; anything else is not.
      for (unsigned long k = 2;; ++k) {
        Int r;
        if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), k)) {
          if (is_prime(r)) {
            push(r, static_cast<unsigned>(k));
            break;
          }
          // Root is composite; recurse on it with exponent k.
          Factorization sub = factorize(r, bound);
          for (auto& [p, e] : sub.factors) push(p, e * static_cast<unsigned>(k));
          break;
        }
      }
    } else {
      // Composite cofactor with only large factors: split it.
      Int d = rho_split(m);
      if (d == 0)
        throw InvalidInput("factorize: composite cofactor " + m.get_str() +
                           " resists factorization");
      for (const Int& part : {d, Int(m / d)})
        for (auto& [p, e] : factorize(part, bound).factors) push(p, e);
    }
  }
  std::sort(out.factors.begin(), out.factors.end());
  // recursive splits can repeat a prime across parts
  std::vector<std::pair<Int, unsigned>> merged;
  for (auto& [p, e] : out.factors) {
    if (!merged.empty() && merged.back().first == p)
      merged.back().second += e;
    else
      merged.emplace_back(p, e);
  }
  out.factors = std::move(merged);
  return out;
}

long valuation(const Int& a, const Int& p) {
  if (a == 0) throw InvalidInput("valuation: value is zero");
  if (!is_prime(p)) throw InvalidInput("valuation: modulus " + p.get_str() + " is not prime");
  Int rem;
  return static_cast<long>(
      mpz_remove(rem.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& a, const Int& p) {
  if (a == 0) throw InvalidInput("valuation: value is zero");
  return valuation(Int(a.get_num()), p) - valuation(Int(a.get_den()), p);
}

int legendre_symbol(const Int& a, const Int& p) {
  if (p == 2 || !is_prime(p))
    throw InvalidInput("legendre_symbol: modulus " + p.get_str() +
                       " is not an odd prime");
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

std::pair<Int, Rat> squarefree_part(const Rat& q) {
  if (q == 0) throw InvalidInput("squarefree_part: value is zero");
  // num/den = (num*den)/den^2, so the square class is that of num*den.
  Int nd = Int(q.get_num()) * Int(q.get_den());
  Factorization f = factorize(nd);
  Int s = f.sign;
  for (auto& [p, e] : f.factors)
    if (e & 1u) s *= p;
  Rat r2 = q / Rat(s);
  Rat r(isqrt(Int(r2.get_num())), isqrt(Int(r2.get_den())));
  if (r * r != r2)
    throw InvariantViolation("squarefree_part: internal square extraction failed");
  return {s, r};
}

SquareClass::SquareClass(const Int& n) {
  if (n == 0) throw InvalidInput("SquareClass: zero is not a square class");
  v_ = squarefree_part(Rat(n)).first;
}

SquareClass::SquareClass(const Rat& q) { v_ = squarefree_part(q).first; }

SquareClass SquareClass::operator*(const SquareClass& o) const {
  // Both operands squarefree: product class is (a/g)*(b/g), g = gcd.
  Int g;
  mpz_gcd(g.get_mpz_t(), v_.get_mpz_t(), o.v_.get_mpz_t());
  SquareClass r;
  r.v_ = (v_ / g) * (o.v_ / g);
  return r;
}

Place Place::real() { return Place(true, 0); }

Place Place::finite(const Int& p) {
  if (!is_prime(p) || p < 0)
    throw InvalidInput("Place: " + p.get_str() + " is not prime");
  return Place(false, p);
}

Int sqrt_mod_p(const Int& a, const Int& p) {
  Int am = mod_pos(a, p);
  if (am == 0) return 0;
  if (legendre_symbol(am, p) != 1)
    throw InvalidInput("sqrt_mod_p: not a quadratic residue");
  Int x;
  if (mod_pos(p, 4) == 3) {
    x = powmod(am, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks with the smallest non-residue as generator.
    Int q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    Int z = 2;
    while (legendre_symbol(z, p) != -1) ++z;
    Int c = powmod(z, q, p);
    x = powmod(am, (q + 1) / 2, p);
    Int t = powmod(am, q, p);
    unsigned long m = s;
    while (t != 1) {
      Int tt = t;
      unsigned long i = 0;
      while (tt != 1) {
        tt = (tt * tt) % p;
        ++i;
      }
      Int b = c;
      for (unsigned long j = 0; j + i + 1 < m; ++j) b = (b * b) % p;
      x = (x * b) % p;
      c = (b * b) % p;
      t = (t * c) % p;
      m = i;
    }
  }
  if ((x * x - am) % p != 0)
    throw InvariantViolation("sqrt_mod_p: verification failed");
  if (x > p / 2) x = p - x;
  return x;
}

Int div_mod(const Int& a, const Int& b, const Int& m) {
  Int inv;
  if (!mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t()))
    throw InvalidInput("div_mod: divisor not invertible");
  return mod_pos(a * inv, m);
}

}  // namespace ctp
