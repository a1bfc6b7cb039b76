#pragma once
// Exact arithmetic primitives: canonical rationals, square classes, places,
// factorization with an explicit bound, Legendre symbols.
// All values are exact (GMP); nothing here ever rounds.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctp {

using Int = mpz_class;
using Rat = mpq_class;

// Error taxonomy. CLI maps these to exit codes (1, 2, 3).
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& m) : std::runtime_error(m) {}
};
struct IndeterminatePrecision : std::runtime_error {
  explicit IndeterminatePrecision(const std::string& m) : std::runtime_error(m) {}
};
struct ConstructionFailure : std::runtime_error {
  explicit ConstructionFailure(const std::string& m) : std::runtime_error(m) {}
};
struct InvariantViolation : std::runtime_error {
  explicit InvariantViolation(const std::string& m) : std::runtime_error(m) {}
};

// Deterministic primality: Miller-Rabin with the 12-witness set proven
// complete below 3.3e24, then BPSW-style mpz_probab_prime_p beyond that
// (inputs that large never arise from the desk-scale curves handled here).
bool is_prime(const Int& n);

// Prime factorization by trial division up to `bound`, then primality /
// perfect-power analysis of the cofactor, then a bounded deterministic
// Pollard rho split. A cofactor that resists all of it (least prime factor
// beyond ~1e10) raises InvalidInput.
struct Factorization {
  int sign = 1;                                // -1 for negative input
  std::vector<std::pair<Int, unsigned>> factors;  // (p, e), p ascending
};
Factorization factorize(const Int& n, unsigned long bound = 1000000UL);

// p-adic valuation; p must be prime. Rejects value == 0.
long valuation(const Int& a, const Int& p);
long valuation(const Rat& a, const Int& p);

// (a|p) for odd prime p; 0 when p | a.
int legendre_symbol(const Int& a, const Int& p);

// q = s * r^2 with s a squarefree integer carrying the sign of q.
// squarefree_part(18) = (2, 3); squarefree_part(-4/9) = (-1, 2/3).
std::pair<Int, Rat> squarefree_part(const Rat& q);

// Nonzero squarefree integer representing a rational square class.
class SquareClass {
 public:
  SquareClass() : v_(1) {}
  explicit SquareClass(const Int& n);
  explicit SquareClass(const Rat& q);
  const Int& value() const { return v_; }
  bool is_one() const { return v_ == 1; }
  SquareClass operator*(const SquareClass& o) const;
  bool operator==(const SquareClass& o) const { return v_ == o.v_; }
  bool operator!=(const SquareClass& o) const { return v_ != o.v_; }
  bool operator<(const SquareClass& o) const { return v_ < o.v_; }
  std::string str() const { return v_.get_str(); }

 private:
  Int v_;  // squarefree, nonzero; sign carries the real class
};

// A place of Q: the real place or a finite prime (2 allowed).
class Place {
 public:
  static Place real();
  static Place finite(const Int& p);  // validates primality
  bool is_real() const { return real_; }
  const Int& p() const { return p_; }
  bool operator==(const Place& o) const { return real_ == o.real_ && p_ == o.p_; }
  bool operator<(const Place& o) const {
    if (real_ != o.real_) return real_;  // real sorts first
    return p_ < o.p_;
  }
  std::string str() const { return real_ ? "real" : p_.get_str(); }

 private:
  Place(bool r, Int p) : real_(r), p_(std::move(p)) {}
  bool real_;
  Int p_;
};

// Exact helpers.
bool is_square(const Int& n);                  // n >= 0 perfect square
Int isqrt(const Int& n);                       // floor sqrt, n >= 0
Int powmod(const Int& b, const Int& e, const Int& m);
// Square root mod odd prime p (Tonelli-Shanks, deterministic non-residue
// scan). Requires (a|p) = 1. Returns the root in [0, p/2].
Int sqrt_mod_p(const Int& a, const Int& p);
// a/b mod m for gcd(b, m) = 1; result in [0, m).
Int div_mod(const Int& a, const Int& b, const Int& m);
Int mod_pos(const Int& a, const Int& m);

}  // namespace ctp
