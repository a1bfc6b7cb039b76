#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctp/arith.hpp"
#include "ctp/localsearch.hpp"

namespace ctp {

// Sparse polynomial in z0..z3 with rational coefficients.  Used for the
// symbolic side: quadric ideals, tangent-plane products, square identities.
struct Poly4 {
    using Mono = std::array<int, 4>;
    std::map<Mono, Rat> t;  // monomial exponents -> coefficient, zeros erased

    static Poly4 zero() { return {}; }
    static Poly4 constant(const Rat& c);
    static Poly4 var(int i, int power = 1);

    bool is_zero() const { return t.empty(); }
    int degree() const;

    Poly4& add_term(const Mono& m, const Rat& c);
    Poly4 operator+(const Poly4& o) const;
    Poly4 operator-(const Poly4& o) const;
    Poly4 operator*(const Poly4& o) const;
    Poly4 operator*(const Rat& c) const;
    bool operator==(const Poly4& o) const { return t == o.t; }

    Rat eval(const std::array<Rat, 4>& z) const;
    std::string str() const;  // z0..z3, integer-cleared not assumed

    // gcd of coefficient numerators / lcm of denominators, sign of leading term
    Rat content() const;
};

// Conversions between the dense quadratic-form representation used by the
// p-adic search and the sparse symbolic one.
Poly4 qform_to_poly(const QForm& q);
QForm poly_to_qform(const Poly4& p);  // requires homogeneous of degree 2 in <= 4 vars

// Homogeneous binary form of degree n: c[i] is the coefficient of x^(n-i) y^i.
struct Bin {
    std::vector<Rat> c;  // size n+1; Bin() is the zero form of degree -1

    static Bin zero() { return {}; }
    int degree() const { return (int)c.size() - 1; }
    bool is_zero() const;

    Bin operator+(const Bin& o) const;
    Bin operator-(const Bin& o) const;
    Bin operator*(const Bin& o) const;
    Bin operator*(const Rat& s) const;
    bool operator==(const Bin& o) const;

    Rat eval(const Rat& x, const Rat& y) const;
    std::string str() const;
};

// Exact division a / b; returns nothing if b does not divide a.
std::optional<Bin> bin_divide(const Bin& a, const Bin& b);

// Writes t = gamma * s^2 with s an integral primitive form (positive leading
// coefficient) and gamma rational; returns nothing if t is not a square up to
// a constant.  t must be nonzero of even degree.
std::optional<std::pair<Rat, Bin>> bin_sqrt_up_to_constant(const Bin& t);

// Dense rational linear algebra, deterministic pivoting (first nonzero).
// Solves A x = b; returns the solution with all free variables set to 0, or
// nothing if inconsistent.
std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> A,
                                             std::vector<Rat> b);

// Closed interval with exact rational endpoints; the real-place evaluations
// use these so that every sign decision is certified, never floating point.
struct IntervalRat {
    Rat lo, hi;

    static IntervalRat point(const Rat& r) { return {r, r}; }
    IntervalRat operator+(const IntervalRat& o) const;
    IntervalRat operator-(const IntervalRat& o) const;
    IntervalRat operator*(const IntervalRat& o) const;
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    int sign() const;  // +1, -1, or 0 when the interval straddles zero
};

// Encloses sqrt(r) for r >= 0 within 2^-prec_bits.
IntervalRat interval_sqrt(const Rat& r, int prec_bits);

}  // namespace ctp
