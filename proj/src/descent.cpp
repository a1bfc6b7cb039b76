#include "ctp/descent.hpp"

#include <algorithm>
#include <cstdint>

namespace ctp {

namespace {

// Generators of the candidate square classes: -1, 2, then the odd primes of
// the discriminant, ascending.
std::vector<Int> support_generators(const Curve2T& E) {
    std::vector<Int> g{-1, 2};
    for (const auto& [p, e] : factorize(E.disc).factors) {
        (void)e;
        if (p != 2) g.push_back(p);
    }
    return g;
}

Int mask_to_squarefree(const std::vector<Int>& gens, uint32_t mask) {
    Int d = 1;
    for (size_t i = 0; i < gens.size(); ++i)
        if (mask >> i & 1) d *= gens[i];
    return d;
}

// Inverse of mask_to_squarefree; nullopt when a is not supported on gens.
std::optional<uint32_t> squarefree_to_mask(const std::vector<Int>& gens,
                                           const Int& a) {
    uint32_t m = 0;
    Int rest = a;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (gens[i] == -1) {
            if (rest < 0) {
                m |= 1u << i;
                rest = -rest;
            }
        } else if (mod_pos(rest, gens[i]) == 0) {
            m |= 1u << i;
            rest /= gens[i];
        }
    }
    return rest == 1 ? std::optional<uint32_t>(m) : std::nullopt;
}

AlgebraClass mask_to_class(const std::vector<Int>& gens, uint64_t mask) {
    size_t k = gens.size();
    Int d1 = mask_to_squarefree(gens, (uint32_t)(mask & ((1u << k) - 1)));
    Int d2 = mask_to_squarefree(gens, (uint32_t)(mask >> k));
    return AlgebraClass(SquareClass(d1), SquareClass(d2),
                        SquareClass(Rat(d1 * d2)));
}

// Row reduction over F2 on 64-bit masks.
uint64_t reduce_mask(uint64_t v, const std::vector<uint64_t>& echelon) {
    for (uint64_t row : echelon) {
        uint64_t pivot = row & ~(row - 1);  // lowest set bit
        if (v & pivot) v ^= row;
    }
    return v;
}

void echelon_insert(std::vector<uint64_t>& echelon, uint64_t v) {
    v = reduce_mask(v, echelon);
    if (v == 0) throw InvariantViolation("dependent vector inserted");
    echelon.push_back(v);
    // keep rows reduced against each other so pivots stay unique
    for (uint64_t& row : echelon) {
        if (row == v) continue;
        uint64_t pivot = v & ~(v - 1);
        if (row & pivot) row ^= v;
    }
}

}  // namespace

AlgebraClass descent_map(const Curve2T& E, const CurvePoint& P) {
    if (!E.on_curve(P)) throw InvalidInput("point is not on the curve");
    if (P.inf) return AlgebraClass();
    std::array<SquareClass, 3> c;
    for (int j = 0; j < 3; ++j) {
        if (P.x == Rat(E.e[j]))
            c[j] = SquareClass(Rat(E.cubic_derivative_at_root(j)));
        else
            c[j] = SquareClass(P.x - Rat(E.e[j]));
    }
    AlgebraClass out(c[0], c[1], c[2]);
    if (!(out.c[0] * out.c[1] * out.c[2]).is_one())
        throw InvariantViolation("descent image left the norm kernel");
    return out;
}

std::vector<AlgebraClass> selmer_candidates(const Curve2T& E) {
    std::vector<Int> gens = support_generators(E);
    size_t k = gens.size();
    std::vector<AlgebraClass> out;
    out.reserve(1u << (2 * k));
    for (uint32_t m1 = 0; m1 < (1u << k); ++m1)
        for (uint32_t m2 = 0; m2 < (1u << k); ++m2)
            out.push_back(mask_to_class(gens, (uint64_t)m2 << k | m1));
    return out;
}

bool local_solvable(const Curve2T& E, const AlgebraClass& d, const Place& v,
                    long precision, unsigned seed) {
    CoveringModel C = make_covering(E, d);
    if (v.is_real()) return covering_real_solvable(C);
    return covering_padic_solvable(C, v.p(), precision, seed);
}

std::vector<AlgebraClass> SelmerGroup::elements() const {
    std::vector<AlgebraClass> out;
    out.reserve(1u << basis.size());
    for (uint64_t k = 0; k < (1ull << basis.size()); ++k) {
        AlgebraClass a;
        for (size_t i = 0; i < basis.size(); ++i)
            if (k >> i & 1) a = a * basis[i];
        out.push_back(a);
    }
    return out;
}

bool SelmerGroup::contains(const AlgebraClass& a) const {
    std::vector<Int> gens = support_generators(E);
    size_t k = gens.size();
    auto to_mask = [&](const AlgebraClass& x) -> std::optional<uint64_t> {
        auto m1 = squarefree_to_mask(gens, x.c[0].value());
        auto m2 = squarefree_to_mask(gens, x.c[1].value());
        if (!m1 || !m2) return std::nullopt;
        return (uint64_t)*m2 << k | *m1;
    };
    auto target = to_mask(a);
    if (!target) return false;
    std::vector<uint64_t> ech;
    for (const AlgebraClass& b : basis) {
        auto m = to_mask(b);
        if (!m) throw InvariantViolation("basis outside the candidate space");
        echelon_insert(ech, *m);
    }
    return reduce_mask(*target, ech) == 0;
}

SelmerGroup selmer2(const Curve2T& E, long precision, unsigned seed) {
    SelmerGroup S;
    S.E = E;
    std::vector<Int> gens = support_generators(E);
    size_t k = gens.size(), n = 2 * k;
    if (n > 30) throw InvalidInput("discriminant support too large");

    std::vector<Place> places{Place::real()};
    for (const Int& g : gens)
        if (g != -1 && g != 2) places.push_back(Place::finite(g));
    places.push_back(Place::finite(2));

    // current subgroup basis; starts as the full candidate space
    std::vector<uint64_t> basis;
    for (size_t i = 0; i < n; ++i) basis.push_back(1ull << i);

    for (const Place& v : places) {
        std::vector<uint64_t> keep_ech;     // verified-solvable subgroup
        std::vector<uint64_t> keep;
        std::vector<uint64_t> bad;          // reps of insolvable cosets
        for (uint64_t idx = 1; idx < (1ull << basis.size()); ++idx) {
            uint64_t e = 0;
            for (size_t i = 0; i < basis.size(); ++i)
                if (idx >> i & 1) e ^= basis[i];
            if (reduce_mask(e, keep_ech) == 0) continue;  // known solvable
            bool known_bad = false;
            for (uint64_t b : bad)
                if (reduce_mask(e ^ b, keep_ech) == 0) {
                    known_bad = true;  // same coset as a failed class
                    break;
                }
            if (known_bad) continue;
            if (local_solvable(E, mask_to_class(gens, e), v, precision, seed)) {
                echelon_insert(keep_ech, e);
                keep.push_back(e);
            } else {
                bad.push_back(e);
            }
        }
        basis = keep;
        S.places_checked.push_back(v);
        if (basis.empty()) break;
    }

    // canonical reduced echelon basis, ascending pivot order
    std::vector<uint64_t> ech;
    for (uint64_t b : basis) echelon_insert(ech, b);
    std::sort(ech.begin(), ech.end());
    for (uint64_t b : ech) S.basis.push_back(mask_to_class(gens, b));
    return S;
}

}  // namespace ctp
