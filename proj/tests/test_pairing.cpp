#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <vector>

#include "ctp/pairing.hpp"

using namespace ctp;

namespace {

AlgebraClass cls(long a, long b, long c) {
    return AlgebraClass(SquareClass(Int(a)), SquareClass(Int(b)),
                        SquareClass(Int(c)));
}

struct Fixture {
    Curve2T E;
    SelmerGroup S;
    std::vector<PairingContext> ctxs;
    PairingMatrix M;
    explicit Fixture(const Curve2T& curve) : E(curve), S(selmer2(E)) {
        M = pairing_matrix(E, S, ctxs, 0, 0);
    }
};

}  // namespace

TEST_CASE("pairing matrix is alternating and even-rank") {
    for (auto roots : std::vector<std::array<long, 3>>{
             {-1, 0, 1}, {-6, 0, 6}, {0, 7, 13}}) {
        Fixture fx(new_curve(roots[0], roots[1], roots[2]));
        size_t n = fx.S.basis.size();
        REQUIRE(fx.M.entries.size() == n);
        CHECK(fx.M.basis.size() == n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(fx.M.entries[i][i] == 0);  // <a, a> always trivial here
            for (size_t j = 0; j < n; ++j) {
                CHECK(fx.M.entries[i][j] == fx.M.entries[j][i]);
                int v = fx.M.values[i][j].value;
                CHECK((v == 1 || v == -1));
                CHECK(fx.M.entries[i][j] == (v == -1 ? 1 : 0));
                // the global value is the product of the local terms
                int prod = 1;
                for (auto& [place, t] : fx.M.values[i][j].local_terms) {
                    CHECK((t == 1 || t == -1));
                    prod *= t;
                }
                CHECK(prod == v);
            }
        }
        CHECK(fx.M.rank() % 2 == 0);
    }
}

TEST_CASE("identity arguments short-circuit to the trivial value") {
    Curve2T E = new_curve(-6, 0, 6);
    SelmerGroup S = selmer2(E);
    REQUIRE(S.dimension() >= 1);
    PairingContext ctx = make_context(E, S.basis[0]);
    CHECK(cassels_pairing(E, ctx, AlgebraClass()).value == 1);
    PairingContext ctx1 = make_context(E, AlgebraClass());
    CHECK(cassels_pairing(E, ctx1, S.basis[0]).value == 1);
    CHECK(cassels_pairing(E, ctx1, AlgebraClass()).value == 1);
}

TEST_CASE("pairing is bilinear in the second argument") {
    Fixture fx(new_curve(-6, 0, 6));
    REQUIRE(fx.S.dimension() == 3);
    std::vector<AlgebraClass> els = fx.S.elements();
    for (size_t i = 0; i < fx.S.basis.size(); ++i)
        for (const AlgebraClass& b : els)
            for (const AlgebraClass& c : els) {
                int vb = cassels_pairing(fx.E, fx.ctxs[i], b).value;
                int vc = cassels_pairing(fx.E, fx.ctxs[i], c).value;
                int vbc = cassels_pairing(fx.E, fx.ctxs[i], b * c).value;
                CHECK(vbc == vb * vc);
            }
}

TEST_CASE("images of rational points pair trivially with everything") {
    for (auto roots : std::vector<std::array<long, 3>>{{-6, 0, 6},
                                                       {0, 7, 13}}) {
        Fixture fx(new_curve(roots[0], roots[1], roots[2]));
        std::set<std::string> done;
        for (const CurvePoint& P : point_search(fx.E, 2000)) {
            AlgebraClass img = descent_map(fx.E, P);
            if (img.is_one() || !done.insert(img.str()).second) continue;
            REQUIRE(fx.S.contains(img));
            for (size_t i = 0; i < fx.S.basis.size(); ++i)
                CHECK(cassels_pairing(fx.E, fx.ctxs[i], img).value == 1);
        }
        CHECK(done.size() >= 2);
    }
}

TEST_CASE("value does not depend on the chosen local points") {
    Fixture fx(new_curve(-6, 0, 6));
    size_t n = fx.S.basis.size();
    REQUIRE(n == 3);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (int choice = 1; choice <= 3; ++choice) {
                int v = cassels_pairing(fx.E, fx.ctxs[i], fx.S.basis[j], 0, 0,
                                        choice)
                            .value;
                CHECK(v == fx.M.values[i][j].value);
            }
}

TEST_CASE("value does not depend on the function normalization") {
    Curve2T E = new_curve(-6, 0, 6);
    SelmerGroup S = selmer2(E);
    REQUIRE(S.dimension() == 3);
    const AlgebraClass& a = S.basis[1];

    PairingContext base = make_context(E, a);
    std::vector<int> ref;
    for (const AlgebraClass& b : S.basis)
        ref.push_back(cassels_pairing(E, base, b).value);

    // constant rescale of one component
    PairingContext cs = make_context(E, a);
    cs.f = rescale_constant(cs.f, 0, Rat(5));
    cs.f = rescale_constant(cs.f, 2, Rat(-7) / Rat(3));
    for (size_t j = 0; j < S.basis.size(); ++j)
        CHECK(cassels_pairing(E, cs, S.basis[j]).value == ref[j]);

    // square-of-linear-ratio rescale
    PairingContext sq = make_context(E, a);
    sq.f = rescale_square(sq.f, 1, Poly4::var(0) + Poly4::var(2),
                          Poly4::var(0));
    for (size_t j = 0; j < S.basis.size(); ++j)
        CHECK(cassels_pairing(E, sq, S.basis[j]).value == ref[j]);
}

TEST_CASE("seed and precision overrides leave the values fixed") {
    Curve2T E = new_curve(-6, 0, 6);
    SelmerGroup S = selmer2(E);
    PairingMatrix M0 = pairing_matrix(E, S, 0, 0);
    PairingMatrix M1 = pairing_matrix(E, S, 0, 12345);
    PairingMatrix Mp = pairing_matrix(E, S, 14, 0);
    REQUIRE(M0.entries.size() == M1.entries.size());
    REQUIRE(M0.entries.size() == Mp.entries.size());
    for (size_t i = 0; i < M0.entries.size(); ++i) {
        CHECK(M0.entries[i] == M1.entries[i]);
        CHECK(M0.entries[i] == Mp.entries[i]);
    }
}

TEST_CASE("matrix rank refines the size bound on the quotient") {
    // 2-Selmer dimension 4 but pairing rank 2: half of the Selmer classes
    // are killed, cutting the bound from 2 to 0.
    Curve2T E = new_curve(-17, 0, 17);
    SelmerGroup S = selmer2(E);
    REQUIRE(S.dimension() == 4);
    std::vector<PairingContext> ctxs;
    PairingMatrix M = pairing_matrix(E, S, ctxs, 0, 0);
    CHECK(M.rank() == 2);
    CHECK(S.dimension() - 2 - M.rank() == 0);

    // curves whose Selmer group is all realized by points pair to zero
    Fixture fx(new_curve(-6, 0, 6));
    CHECK(fx.M.rank() == 0);
    Fixture fr(new_curve(-1, 0, 1));
    CHECK(fr.M.rank() == 0);
}

TEST_CASE("place set covers supports and bad primes") {
    Curve2T E = new_curve(-6, 0, 6);
    SelmerGroup S = selmer2(E);
    PairingContext ctx = make_context(E, S.basis[1]);
    std::vector<Place> places =
        relevant_places(E, S.basis[1], S.basis[2], ctx.f);
    REQUIRE(!places.empty());
    CHECK(places.front().is_real());
    for (size_t k = 1; k < places.size(); ++k)
        CHECK(places[k - 1] < places[k]);  // sorted, distinct
    auto has = [&](long p) {
        for (const Place& v : places)
            if (!v.is_real() && v.p() == p) return true;
        return false;
    };
    CHECK(has(2));
    CHECK(has(3));  // divides the discriminant
    // supports of both arguments are present
    for (const AlgebraClass& a : {S.basis[1], S.basis[2]})
        for (int j = 0; j < 3; ++j)
            for (auto& [p, e] : factorize(a.c[j].value()).factors)
                CHECK(has(p.get_si()));
}
