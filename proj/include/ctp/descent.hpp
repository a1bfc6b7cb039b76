#pragma once

#include <vector>

#include "ctp/covering.hpp"
#include "ctp/curve.hpp"
#include "ctp/hilbert.hpp"

namespace ctp {

// delta : E(Q) -> (Q*/Q*^2)^3, the connecting homomorphism of the 2-descent.
// Generic point: (sf(x-e1), sf(x-e2), sf(x-e3)); O maps to (1,1,1); the
// 2-torsion point T_j replaces the vanishing component by sf of the
// derivative of the cubic at e_j.
AlgebraClass descent_map(const Curve2T& E, const CurvePoint& P);

// All candidate classes (d1,d2,d3): d1, d2 run over squarefree integers
// supported on {-1} union primes dividing 2 disc, d3 = sf(d1 d2).
// Deterministic order: d1 outer, d2 inner, support masks ascending with
// generator order (-1, 2, odd primes ascending).
std::vector<AlgebraClass> selmer_candidates(const Curve2T& E);

// Everywhere-local solvability of C_d at one place.  precision 0 = default.
bool local_solvable(const Curve2T& E, const AlgebraClass& d, const Place& v,
                    long precision = 0, unsigned seed = 0);

struct SelmerGroup {
    Curve2T E;
    std::vector<AlgebraClass> basis;  // F2-independent, deterministic
    std::vector<Place> places_checked;
    int dimension() const { return (int)basis.size(); }
    // Full group in fixed order: identity first, then spans of basis
    // prefixes (element k = product of basis elements in bits of k).
    std::vector<AlgebraClass> elements() const;
    bool contains(const AlgebraClass& a) const;
};

// Computes the 2-Selmer group by intersecting, place by place, the subgroup
// of candidates that are locally solvable.  Places: real, odd p | disc, 2.
// Uses the subgroup structure of the local image to prune searches: once a
// coset has a decided verdict the rest of the coset is never searched.
SelmerGroup selmer2(const Curve2T& E, long precision = 0, unsigned seed = 0);

}  // namespace ctp
