#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "ctp/curve.hpp"

using namespace ctp;

namespace {

// Checks y^2 = x^3 + a2 x^2 + a4 x + a6 straight from the coefficients.
bool slow_on_curve(const Curve2T& E, const CurvePoint& P) {
    if (P.inf) return true;
    Rat rhs = P.x * P.x * P.x + Rat(E.a2) * P.x * P.x + Rat(E.a4) * P.x +
              Rat(E.a6);
    return P.y * P.y == rhs;
}

}  // namespace

TEST_CASE("curve expansion from roots") {
    Curve2T E = new_curve(-1, 0, 1);
    CHECK(E.a2 == 0);
    CHECK(E.a4 == -1);
    CHECK(E.a6 == 0);
    CHECK(E.disc == 64);  // 16 * ((-1)(-2)(-1))^2

    Curve2T F = new_curve(-6, 0, 6);
    CHECK(F.a2 == 0);
    CHECK(F.a4 == -36);
    CHECK(F.a6 == 0);
    CHECK(F.disc == Int(16) * Int(6 * 12 * 6) * Int(6 * 12 * 6));

    Curve2T G = new_curve(2, 5, -3);
    CHECK(G.a2 == -(2 + 5 - 3));
    CHECK(G.a4 == 2 * 5 + 2 * -3 + 5 * -3);
    CHECK(G.a6 == -(2 * 5 * -3));

    CHECK_THROWS_AS(new_curve(1, 1, 2), InvalidInput);
    CHECK_THROWS_AS(new_curve(0, 3, 0), InvalidInput);
}

TEST_CASE("derivative of the cubic at each root") {
    Curve2T E = new_curve(-6, 0, 6);
    CHECK(E.cubic_derivative_at_root(0) == (-6 - 0) * (-6 - 6));  // 72
    CHECK(E.cubic_derivative_at_root(1) == (0 + 6) * (0 - 6));    // -36
    CHECK(E.cubic_derivative_at_root(2) == (6 + 6) * (6 - 0));    // 72
}

TEST_CASE("membership test matches the equation") {
    Curve2T E = new_curve(-6, 0, 6);
    CHECK(E.on_curve(CurvePoint()));
    CHECK(E.on_curve(CurvePoint(Rat(-3), Rat(9))));
    CHECK(E.on_curve(CurvePoint(Rat(12), Rat(36))));
    CHECK(E.on_curve(CurvePoint(Rat(294), Rat(5040))));
    CHECK(!E.on_curve(CurvePoint(Rat(1), Rat(1))));
    CHECK(!E.on_curve(CurvePoint(Rat(-3), Rat(8))));
    for (int j = 0; j < 3; ++j) {
        CurvePoint T = E.torsion_point(j);
        CHECK(T.y == 0);
        CHECK(T.x == E.e[j]);
        CHECK(E.on_curve(T));
    }
}

TEST_CASE("group law identities") {
    Curve2T E = new_curve(-6, 0, 6);
    CurvePoint O;
    CurvePoint P(Rat(-3), Rat(9));
    CurvePoint Q(Rat(12), Rat(36));

    CHECK(E.add(P, O) == P);
    CHECK(E.add(O, P) == P);
    CHECK(E.add(P, E.neg(P)) == O);
    CHECK(E.add(P, Q) == E.add(Q, P));

    // results stay on the curve and match the slow membership test
    CurvePoint S = E.add(P, Q);
    CHECK(slow_on_curve(E, S));
    CurvePoint D = E.add(P, P);
    CHECK(slow_on_curve(E, D));

    // associativity on a sample
    CurvePoint T = E.torsion_point(1);
    CHECK(E.add(E.add(P, Q), T) == E.add(P, E.add(Q, T)));
    CHECK(E.add(E.add(P, T), Q) == E.add(P, E.add(Q, T)));

    // doubling a 2-torsion point gives O; adding two gives the third
    for (int j = 0; j < 3; ++j)
        CHECK(E.add(E.torsion_point(j), E.torsion_point(j)) == O);
    CHECK(E.add(E.torsion_point(0), E.torsion_point(1)) == E.torsion_point(2));
}

TEST_CASE("scalar multiples agree with repeated addition") {
    Curve2T E = new_curve(-6, 0, 6);
    CurvePoint P(Rat(-3), Rat(9));
    CurvePoint acc;  // O
    for (long n = 0; n <= 6; ++n) {
        CHECK(E.mul(n, P) == acc);
        CHECK(slow_on_curve(E, acc));
        acc = E.add(acc, P);
    }
    CHECK(E.mul(-3, P) == E.neg(E.mul(3, P)));
    CHECK(E.mul(0, P) == CurvePoint());
    // heights grow: a point of infinite order never cycles back
    CHECK(E.mul(5, P) != P);
    CHECK(E.mul(4, P) != CurvePoint());
}

TEST_CASE("point search finds the expected small points") {
    Curve2T E = new_curve(-1, 0, 1);
    std::vector<CurvePoint> pts = point_search(E, 100);
    // rank 0 curve: exactly the three 2-torsion points (affine only)
    CHECK(pts.size() == 3);
    for (const CurvePoint& P : pts) CHECK(E.on_curve(P));
    auto has = [&](const CurvePoint& P) {
        return std::find(pts.begin(), pts.end(), P) != pts.end();
    };
    CHECK(has(CurvePoint(Rat(-1), Rat(0))));
    CHECK(has(CurvePoint(Rat(0), Rat(0))));
    CHECK(has(CurvePoint(Rat(1), Rat(0))));

    Curve2T F = new_curve(-6, 0, 6);
    std::vector<CurvePoint> fpts = point_search(F, 300);
    auto fhas = [&](const CurvePoint& P) {
        return std::find(fpts.begin(), fpts.end(), P) != fpts.end();
    };
    CHECK(fhas(CurvePoint(Rat(-3), Rat(9))));
    CHECK(fhas(CurvePoint(Rat(12), Rat(36))));
    CHECK(fhas(CurvePoint(Rat(294), Rat(5040))));
    for (const CurvePoint& P : fpts) {
        CHECK(F.on_curve(P));
        CHECK((P.inf || P.y >= 0));  // negatives are implied
    }
    // deterministic: same call, same order
    CHECK(point_search(F, 300) == fpts);
}

TEST_CASE("point search sees non-integral points") {
    // y^2 = x(x-7)(x-13) has (25/4, 45/8): the search must cover square
    // denominators, not just integers.
    Curve2T E = new_curve(0, 7, 13);
    std::vector<CurvePoint> pts = point_search(E, 200);
    bool quarter = false;
    for (const CurvePoint& P : pts) {
        CHECK(E.on_curve(P));
        if (!P.inf && P.x.get_den() == 4) quarter = true;
    }
    CHECK(quarter);
}
