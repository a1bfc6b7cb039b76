#include "ctp/pairing.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace ctp {

namespace {

// odd primes dividing the integer content of a stored coefficient form
void absorb_content_primes(const Poly4& p, std::set<Int>& out) {
    if (p.is_zero()) return;
    Int g = 0;
    for (const auto& [m, c] : p.t)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
    for (const auto& [q, e] : factorize(g).factors) {
        (void)e;
        if (q != 2) out.insert(q);
    }
}

// real, 2, odd primes of the discriminant and of both class supports: the
// places where a local term can be nontrivial regardless of the function
// triple's coefficients
std::set<Place> fixed_places(const Curve2T& E, const AlgebraClass& a,
                             const AlgebraClass& a2) {
    std::set<Place> s{Place::real(), Place::finite(2)};
    auto add = [&](const Int& n) {
        for (const auto& [q, e] : factorize(n).factors) {
            (void)e;
            if (q != 2) s.insert(Place::finite(q));
        }
    };
    add(E.disc);
    for (int j = 0; j < 3; ++j) {
        add(a.c[j].value());
        add(a2.c[j].value());
    }
    return s;
}

std::vector<Int> extra_candidates(const FTriple& f,
                                  const std::set<Place>& fixed) {
    std::set<Int> extra;
    for (int j = 0; j < 3; ++j) {
        absorb_content_primes(f.num[j], extra);
        absorb_content_primes(f.den[j], extra);
    }
    std::vector<Int> out;
    for (const Int& q : extra)
        if (!fixed.count(Place::finite(q))) out.push_back(q);
    return out;
}

}  // namespace

std::vector<Place> relevant_places(const Curve2T& E, const AlgebraClass& a,
                                   const AlgebraClass& a2, const FTriple& f) {
    std::set<Place> fixed = fixed_places(E, a, a2);
    std::vector<Place> out(fixed.begin(), fixed.end());
    CoveringModel C = make_covering(E, a);
    for (const Int& q : extra_candidates(f, fixed)) {
        Place v = Place::finite(q);
        auto pr = evaluate_at_place(C, f, v, 0, 0, 0);
        if (algebra_symbol(pr.second, a2, v) != 1) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

PairingContext make_context(const Curve2T& E, const AlgebraClass& a,
                            const std::vector<std::array<Int, 4>>& avoid) {
    PairingContext ctx;
    ctx.C = make_covering(E, a);
    ctx.f = construct_f(ctx.C, avoid);
    return ctx;
}

PairingValue cassels_pairing(const Curve2T& E, PairingContext& ctx,
                             const AlgebraClass& a2, long precision,
                             unsigned seed, int choice) {
    PairingValue out;
    // the identity class pairs trivially with everything
    if (ctx.C.d.is_one() || a2.is_one()) return out;

    std::set<Place> fixed = fixed_places(E, ctx.C.d, a2);
    std::vector<Place> places(fixed.begin(), fixed.end());
    for (const Int& q : extra_candidates(ctx.f, fixed))
        places.push_back(Place::finite(q));
    std::sort(places.begin(), places.end());

    for (const Place& v : places) {
        AlgebraClass fv;
        if (choice == 0) {
            auto it = ctx.points.find(v);
            if (it == ctx.points.end()) {
                auto pr = evaluate_at_place(ctx.C, ctx.f, v, precision, seed, 0);
                it = ctx.points.emplace(v, pr).first;
            }
            fv = it->second.second;
        } else {
            fv = evaluate_at_place(ctx.C, ctx.f, v, precision, seed, choice)
                     .second;
        }
        int term = algebra_symbol(fv, a2, v);
        if (fixed.count(v) || term != 1) out.local_terms[v] = term;
        out.value *= term;
    }
    return out;
}

int PairingMatrix::rank() const {
    std::vector<uint64_t> rows;
    for (const auto& r : entries) {
        uint64_t m = 0;
        for (size_t j = 0; j < r.size(); ++j)
            if (r[j]) m |= 1ull << j;
        rows.push_back(m);
    }
    int rank = 0;
    for (size_t c = 0; c < entries.size(); ++c) {
        size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot] >> c & 1)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[(size_t)rank]);
        for (size_t r = 0; r < rows.size(); ++r)
            if (r != (size_t)rank && (rows[r] >> c & 1)) rows[r] ^= rows[(size_t)rank];
        ++rank;
    }
    return rank;
}

PairingMatrix pairing_matrix(const Curve2T& E, const SelmerGroup& S,
                             long precision, unsigned seed) {
    std::vector<PairingContext> ctxs;
    return pairing_matrix(E, S, ctxs, precision, seed);
}

PairingMatrix pairing_matrix(const Curve2T& E, const SelmerGroup& S,
                             std::vector<PairingContext>& ctxs, long precision,
                             unsigned seed) {
    PairingMatrix m;
    m.basis = S.basis;
    size_t n = S.basis.size();
    if (ctxs.empty()) {
        ctxs.reserve(n);
        for (const AlgebraClass& a : S.basis) ctxs.push_back(make_context(E, a));
    }
    m.entries.assign(n, std::vector<int>(n, 0));
    m.values.assign(n, std::vector<PairingValue>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            PairingValue v =
                cassels_pairing(E, ctxs[i], S.basis[j], precision, seed, 0);
            m.entries[i][j] = v.value == -1 ? 1 : 0;
            m.values[i][j] = v;
        }
    return m;
}

}  // namespace ctp
