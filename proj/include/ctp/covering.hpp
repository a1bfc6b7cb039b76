#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ctp/conic.hpp"
#include "ctp/curve.hpp"
#include "ctp/hilbert.hpp"
#include "ctp/localsearch.hpp"
#include "ctp/quadform.hpp"

namespace ctp {

// The 2-covering C_d of E attached to d = (d1,d2,d3), d3 = sf(d1 d2), as an
// intersection of two diagonal quadrics in P^3(z0,z1,z2,z3):
//   Q1 = d1 z1^2 - d2 z2^2 - (e2-e1) z0^2
//   Q2 = d1 z1^2 - d1 d2 z3^2 - (e3-e1) z0^2
// The covering map is x = e1 + d1 (z1/z0)^2, y = d1 d2 z1 z2 z3 / z0^3.
struct CoveringModel {
    Curve2T E;
    AlgebraClass d;
    Int d1, d2, d3;
    QForm q1, q2;  // integer forms for the p-adic search
    Poly4 Q1, Q2;  // the same forms, symbolically
};

// Validates the norm-kernel condition and the d3 representative, builds the
// quadrics, and certifies the covering-map identities symbolically.
CoveringModel make_covering(const Curve2T& E, const AlgebraClass& d);

// Exact sign analysis: C_d(R) is nonempty iff some x region of the cubic is
// compatible with the signs of all d_j.
bool covering_real_solvable(const CoveringModel& C);

// Decides solvability over Q_p exactly, by scanning x-line residue classes
// with frozen square conditions; precision 0 picks the documented default
// certificate depth 6 + v_p(2 disc d1 d2).
bool covering_padic_solvable(const CoveringModel& C, const Int& p,
                             long precision, unsigned seed = 0);

// A certified point of C(Q_v).  Finite places carry a Hensel certificate;
// the real place carries an exact rational x sample in a valid sign region
// (z0 = 1, z_j = +sqrt((x - e_j)/d_j) determined up to the deck action).
struct LocalPoint {
    Place place = Place::real();
    PadicCertificate cert;  // finite places
    Rat real_x;             // real place
};

// The `choice`-th certified local point in a deterministic ladder
// (good odd primes: residue pattern scan; bad primes: x-line scan with disk
// deepening, plus deck transforms; real place: region samples).  Throws when
// the covering is locally unsolvable, IndeterminatePrecision when the supply
// is exhausted.
LocalPoint local_point(const CoveringModel& C, const Place& v, long precision,
                       unsigned seed, int choice);

// Exact preimage of a rational point under the trivial covering (d = 1):
// an integral representative of the section E -> C_(1,1,1).
std::array<Int, 4> theta_lift(const Curve2T& E, const CurvePoint& P);

// x-coordinate data of the image of a covering point on E, for tests:
// x = e1 + d1 (z1/z0)^2 over Q (only valid for exact rational points).
CurvePoint covering_image(const CoveringModel& C, const std::array<Int, 4>& z);

}  // namespace ctp
