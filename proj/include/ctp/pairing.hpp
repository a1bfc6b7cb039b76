#pragma once

#include <map>
#include <vector>

#include "ctp/descent.hpp"
#include "ctp/ftriple.hpp"

namespace ctp {

struct PairingValue {
    int value = 1;  // +1 or -1
    std::map<Place, int> local_terms;
};

// Caches the covering model, function triple and certified local points for
// one Selmer basis element so repeated pairings reuse the heavy work.
struct PairingContext {
    CoveringModel C;
    FTriple f;
    std::map<Place, std::pair<LocalPoint, AlgebraClass>> points;  // per place
};

// The place set over which <a,a'> is evaluated: real, 2, odd p | disc,
// supports of a and a', plus any odd prime dividing a stored coefficient of
// f whose local term turns out nontrivial.  Deterministic, sorted.
std::vector<Place> relevant_places(const Curve2T& E, const AlgebraClass& a,
                                   const AlgebraClass& a2, const FTriple& f);

// <a, a'> = prod_v (f_j(P_v), a'_j over components)_v.  Identity arguments
// short-circuit to +1.  choice shifts every local-point selection, for
// independence checks.
PairingValue cassels_pairing(const Curve2T& E, PairingContext& ctx,
                             const AlgebraClass& a2, long precision = 0,
                             unsigned seed = 0, int choice = 0);

PairingContext make_context(const Curve2T& E, const AlgebraClass& a,
                            const std::vector<std::array<Int, 4>>& avoid = {});

struct PairingMatrix {
    std::vector<AlgebraClass> basis;
    std::vector<std::vector<int>> entries;        // 0 (= +1) / 1 (= -1) over F2
    std::vector<std::vector<PairingValue>> values; // full local-term breakdown
    int rank() const;                              // F2 rank
};

PairingMatrix pairing_matrix(const Curve2T& E, const SelmerGroup& S,
                             long precision = 0, unsigned seed = 0);

// Same, but exposes the per-basis contexts (built when `ctxs` is empty) so
// callers can harvest the certified local points afterwards.
PairingMatrix pairing_matrix(const Curve2T& E, const SelmerGroup& S,
                             std::vector<PairingContext>& ctxs, long precision,
                             unsigned seed);

}  // namespace ctp
