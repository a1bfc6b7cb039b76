#pragma once
// Quadratic Hilbert symbols (a,b)_v over Q, an independent solvability
// oracle for z^2 = a x^2 + b y^2, symbols over the split etale algebra
// Q x Q x Q, and the product-formula check.

#include <array>
#include <map>
#include <vector>

#include "ctp/arith.hpp"

namespace ctp {

// Closed-form (a,b)_v in {+1,-1} (Serre, A Course in Arithmetic, III.1):
// real: -1 iff a < 0 and b < 0; odd p: (-1)^(ab e(p)) via Legendre symbols
// of the unit parts; p = 2: (-1)^(e(u)e(w) + a w(w) + b w(u)).
int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);

// Independent oracle: certified search for a nonzero Q_v-solution of
// z^2 = a x^2 + b y^2. `level` 0 means the default residue depth
// (mod 8 plus two lifts at p = 2, mod p^2 at odd p), internally doubled
// twice before IndeterminatePrecision escapes.
bool solvability_oracle(const Rat& a, const Rat& b, const Place& v,
                        long level = 0);

// Product over the real place and all primes in the supports of a, b
// (2 always included). Fills `terms` when given; returns product == +1.
bool reciprocity_check(const Rat& a, const Rat& b,
                       std::map<Place, int>* terms = nullptr);

// Class in the split algebra A = Q x Q x Q modulo squares.
struct AlgebraClass {
  std::array<SquareClass, 3> c;
  AlgebraClass() = default;
  AlgebraClass(SquareClass a, SquareClass b, SquareClass d) : c{a, b, d} {}
  AlgebraClass operator*(const AlgebraClass& o) const {
    return {c[0] * o.c[0], c[1] * o.c[1], c[2] * o.c[2]};
  }
  bool is_one() const { return c[0].is_one() && c[1].is_one() && c[2].is_one(); }
  bool operator==(const AlgebraClass& o) const { return c == o.c; }
  std::string str() const {
    return "(" + c[0].str() + "," + c[1].str() + "," + c[2].str() + ")";
  }
};

// (gamma, delta)_{A_v}: componentwise product of Hilbert symbols.
int algebra_symbol(const AlgebraClass& gamma, const AlgebraClass& delta,
                   const Place& v);

// Whether a nonzero rational is a square in Q_v: positive at the real place;
// even valuation and unit part a residue (mod p, resp. mod 8) at finite v.
bool locally_square(const Rat& a, const Place& v);

// Test hook for the CLI verify fault-injection path: flips every symbol
// computed at the finite place 2.
extern bool g_inject_symbol_fault;

}  // namespace ctp
