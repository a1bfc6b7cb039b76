#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ctp/arith.hpp"

namespace ctp {

// Point on an elliptic curve in affine coordinates, plus the point at
// infinity.  Coordinates are exact rationals.
struct CurvePoint {
    bool inf = true;
    Rat x = 0;
    Rat y = 0;

    CurvePoint() = default;
    CurvePoint(const Rat& x_, const Rat& y_) : inf(false), x(x_), y(y_) {}

    bool operator==(const CurvePoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
    bool operator!=(const CurvePoint& o) const { return !(*this == o); }

    std::string str() const;
};

// y^2 = (x - e1)(x - e2)(x - e3) with distinct integer roots, i.e. a curve
// with fully rational 2-torsion.  Expanded form y^2 = x^3 + a2 x^2 + a4 x + a6.
struct Curve2T {
    std::array<Int, 3> e;
    Int a2, a4, a6;
    Int disc;  // 16 * prod_{i<j} (e_i - e_j)^2

    bool on_curve(const CurvePoint& p) const;

    CurvePoint neg(const CurvePoint& p) const;
    CurvePoint add(const CurvePoint& p, const CurvePoint& q) const;
    CurvePoint mul(const Int& n, const CurvePoint& p) const;

    // The 2-torsion point (e_j, 0), j in {0,1,2}.
    CurvePoint torsion_point(int j) const;

    // F'(e_j) = (e_j - e_k)(e_j - e_l), the derivative of the cubic at a root.
    Int cubic_derivative_at_root(int j) const;

    std::string str() const;
};

// Validates that the roots are pairwise distinct.  Roots are kept in the
// given order (the order fixes the coordinates of the descent map).
Curve2T new_curve(const Int& e1, const Int& e2, const Int& e3);

// Naive search for affine rational points with x = m/n, |m|,|n^2| bounded by
// the height bound, n^2 a divisor-compatible denominator (x has square
// denominator for integral models).  Returns points with y >= 0 only; the
// negatives are implied.  Deterministic order: increasing denominator, then
// increasing numerator.
std::vector<CurvePoint> point_search(const Curve2T& E, const Int& height_bound);

}  // namespace ctp
