#include "ctp/covering.hpp"

#include <algorithm>
#include <climits>

namespace ctp {

namespace {

Poly4 poly_pow(const Poly4& b, int n) {
    Poly4 r = Poly4::constant(1);
    for (int i = 0; i < n; ++i) r = r * b;
    return r;
}

// Replaces z2^(2a) z3^(2b) by r2^a r3^b; the input must be even in z2, z3.
Poly4 subst_even(const Poly4& A, const Poly4& r2, const Poly4& r3) {
    Poly4 out;
    for (const auto& [m, c] : A.t) {
        if (m[2] % 2 || m[3] % 2)
            throw InvariantViolation("substitution on an odd monomial");
        Poly4 part = Poly4::var(0, m[0]) * Poly4::var(1, m[1]) * c;
        part = part * poly_pow(r2, m[2] / 2) * poly_pow(r3, m[3] / 2);
        out = out + part;
    }
    return out;
}

long bad_level(const CoveringModel& C, const Int& p) {
    return 6 + valuation(Int(2 * C.E.disc * C.d1 * C.d2), p);
}

bool is_bad_prime(const CoveringModel& C, const Int& p) {
    return p == 2 || mod_pos(C.E.disc * C.d1 * C.d2, p) == 0;
}

// Sorted-root sign data: signs of d_j listed by increasing root.
std::array<int, 3> sorted_signs(const CoveringModel& C) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return C.E.e[a] < C.E.e[b]; });
    std::array<Int, 3> d{C.d1, C.d2, C.d3};
    std::array<int, 3> s;
    for (int k = 0; k < 3; ++k) s[k] = d[idx[k]] > 0 ? 1 : -1;
    return s;
}

// k-th sample in a deterministic ladder over the first sign-compatible open
// interval of the cubic's x-line.
Rat real_sample(const CoveringModel& C, int k) {
    std::array<Int, 3> se = C.E.e;
    std::sort(se.begin(), se.end());
    std::array<int, 3> s = sorted_signs(C);
    // regions high to low; the pattern is sign(x - e_j) over sorted roots
    const int patterns[4][3] = {
        {1, 1, 1}, {1, 1, -1}, {1, -1, -1}, {-1, -1, -1}};
    int region = -1;
    for (int r = 0; r < 4; ++r)
        if (s[0] == patterns[r][0] && s[1] == patterns[r][1] &&
            s[2] == patterns[r][2]) {
            region = r;
            break;
        }
    if (region < 0)
        throw ConstructionFailure("covering has no real points");
    if (region == 0) return Rat(se[2] + (k + 1));
    if (region == 3) return Rat(se[0] - (k + 1));
    Rat a(region == 1 ? se[1] : se[0]), b(region == 1 ? se[2] : se[1]);
    // dyadic interior ladder: midpoint, then quarters, ...
    int seen = 0;
    for (int m = 1;; ++m) {
        for (long i = 1; i < (1L << m); i += 2) {
            if (seen == k) return a + (b - a) * Rat(i, 1L << m);
            ++seen;
        }
    }
}

// Stripped deck transforms: coordinate sign flips fixing the quadrics.
// Index 0 is the identity; 1..3 flip the pairs (z2,z3), (z1,z3), (z1,z2).
void apply_deck(PadicCertificate& c, int which) {
    static const int flips[4][2] = {{-1, -1}, {2, 3}, {1, 3}, {1, 2}};
    if (which == 0) return;
    c.z[flips[which][0]] = -c.z[flips[which][0]];
    c.z[flips[which][1]] = -c.z[flips[which][1]];
}

// Direct residue construction at a good odd prime: x with F(x) a nonzero
// square pattern compatible with (d1, d2) gives a smooth mod-p point with
// unit Jacobian minor in (z2, z3).
std::optional<PadicCertificate> good_prime_point(const CoveringModel& C,
                                                 const Int& p, int choice) {
    std::vector<Int> good_x;
    for (Int x0 = 0; x0 < p; ++x0) {
        Int f1 = mod_pos((x0 - C.E.e[0]) * C.d1, p);
        Int f2 = mod_pos((x0 - C.E.e[1]) * C.d2, p);
        Int f3 = mod_pos((x0 - C.E.e[2]) * C.d1 * C.d2, p);
        if (f1 == 0 || f2 == 0 || f3 == 0) continue;
        if (legendre_symbol(f1, p) != 1 || legendre_symbol(f2, p) != 1 ||
            legendre_symbol(f3, p) != 1)
            continue;
        good_x.push_back(x0);
        if (good_x.size() > size_t(choice)) break;  // early exit, deck 0
    }
    if (good_x.empty()) return std::nullopt;
    // choices beyond the residue supply wrap through the sign-flip deck
    // transformations, which preserve the forms, values and minor
    size_t n = good_x.size();
    int deck = int((size_t(choice) / n) % 4);
    Int x0 = good_x[size_t(choice) % n];
    Int z1 = sqrt_mod_p(div_mod(x0 - C.E.e[0], C.d1, p), p);
    Int z2 = sqrt_mod_p(div_mod(x0 - C.E.e[1], C.d2, p), p);
    Int z3 = sqrt_mod_p(div_mod(x0 - C.E.e[2], C.d1 * C.d2, p), p);
    PadicCertificate cert;
    cert.z = {1, z1, z2, z3};
    cert.level = 1;
    Int v1 = C.q1.eval(cert.z), v2 = C.q2.eval(cert.z);
    cert.value_val = std::min(v1 == 0 ? LONG_MAX / 2 : valuation(v1, p),
                              v2 == 0 ? LONG_MAX / 2 : valuation(v2, p));
    auto g1 = C.q1.grad(cert.z), g2 = C.q2.grad(cert.z);
    Int det = g1[2] * g2[3] - g1[3] * g2[2];
    if (mod_pos(det, p) == 0)
        throw InvariantViolation("good-prime minor unexpectedly singular");
    cert.minor_val = 0;
    cert.minor_i = 2;
    cert.minor_j = 3;
    if (cert.value_val <= 0)
        throw InvariantViolation("good-prime point does not satisfy the forms");
    apply_deck(cert, deck);
    return cert;
}

Int p_pow(const Int& p, long k) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), (unsigned long)k);
    return r;
}

// Square test in Q_p for a nonzero integer.
bool padic_square(const Int& a, const Int& p) {
    long v = valuation(a, p);
    if (v % 2) return false;
    Int u = a / p_pow(p, v);
    if (p == 2) return mod_pos(u, 8) == 1;
    return legendre_symbol(mod_pos(u, p), p) == 1;
}

// r >= 0 with v_p(r^2 - c) >= prec. Requires c to be a square in Q_p;
// c = 0 returns 0 exactly.
Int sqrt_padic(const Int& c, const Int& p, long prec) {
    if (c == 0) return Int(0);
    long v = valuation(c, p);
    if (v % 2) throw InvariantViolation("sqrt_padic: odd valuation");
    Int u = c / p_pow(p, v);
    long K = std::max<long>(prec - v, p == 2 ? 4 : 2);
    Int s;
    if (p == 2) {
        if (mod_pos(u, 8) != 1)
            throw InvariantViolation("sqrt_padic: unit is not a square");
        s = 1;
        // bit-by-bit lift: s^2 = u mod 2^k entering step k
        for (long k = 3; k < K; ++k)
            if (mod_pos(s * s - u, p_pow(p, k + 1)) != 0) s += p_pow(p, k - 1);
    } else {
        if (legendre_symbol(mod_pos(u, p), p) != 1)
            throw InvariantViolation("sqrt_padic: unit is not a square");
        s = sqrt_mod_p(mod_pos(u, p), p);
        long have = 1;
        while (have < K) {
            have = std::min(2 * have, K);
            Int m = p_pow(p, have);
            s = mod_pos(s - div_mod(mod_pos(s * s - u, m), 2 * s, m), m);
        }
    }
    return s * p_pow(p, v / 2);
}

// Exact Hensel data for an integer vector near a covering point: true form
// values plus the best 2x2 Jacobian minor. Mirrors the certification rule
// of the residue search so downstream refinement is interchangeable.
std::optional<PadicCertificate> exact_cert(const CoveringModel& C,
                                           const std::vector<Int>& z,
                                           const Int& p, long level) {
    constexpr long kInf = LONG_MAX / 2;
    PadicCertificate c;
    c.z = z;
    c.level = level;
    Int v1 = C.q1.eval(z), v2 = C.q2.eval(z);
    c.value_val = std::min(v1 == 0 ? kInf : valuation(v1, p),
                           v2 == 0 ? kInf : valuation(v2, p));
    auto g1 = C.q1.grad(z), g2 = C.q2.grad(z);
    c.minor_val = kInf;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Int det = g1[i] * g2[j] - g1[j] * g2[i];
            if (det == 0) continue;
            long mv = valuation(det, p);
            if (mv < c.minor_val) {
                c.minor_val = mv;
                c.minor_i = i;
                c.minor_j = j;
            }
        }
    bool ok = c.value_val >= kInf ||
              (c.minor_val < kInf && c.value_val > 2 * c.minor_val);
    if (c.minor_val >= kInf) c.minor_val = 0;
    if (!ok) return std::nullopt;
    return c;
}

// Certified points of the covering over Q_p, built from the x-line: a point
// with x-coordinate x in P^1(Q_p) exists iff (x - e_j) d_j is a square in
// Q_p for every j, a vanishing factor being absorbed by z_j = 0. Residue
// branches of the scan freeze once x is p-adically separated from the
// roots, so the tree has width O(p) and bounded depth, and an empty result
// is an exact emptiness verdict. A reciprocal scan covers x of negative
// valuation; x hugging a root and x of deeply negative valuation have
// frozen conditions handled by family tests. Returns at most `want`
// certificates in an order that is a stable prefix as `want` grows.
std::vector<PadicCertificate> xline_points(const CoveringModel& C, const Int& p,
                                           size_t want, long prec,
                                           unsigned seed) {
    const std::array<Int, 3> dj = {C.d1, C.d2, C.d1 * C.d2};
    const std::array<Int, 3>& e = C.E.e;
    const long g = p == 2 ? 3 : 1;  // digits fixing a unit square class
    long maxsep = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            maxsep = std::max(maxsep, valuation(Int(e[i] - e[j]), p));
    const long F = maxsep + g + 2;
    const long level = prec > 0 ? prec : bad_level(C, p) + 4;
    if (!p.fits_slong_p() || p > 1000000)
        throw IndeterminatePrecision("x-line scan at an oversized prime");
    const long pl = p.get_si();

    std::vector<PadicCertificate> out;
    // certificate for the exact x = xn / xd; xd must be a square p-power and
    // all three (x - e_j) d_j squares in Q_p (zero allowed)
    auto push_x = [&](const Int& xn, const Int& xd) {
        for (long K = level;; K *= 2) {
            std::vector<Int> z(4);
            z[0] = dj[2] * xd;
            std::array<Int, 3> S;
            for (int j = 0; j < 3; ++j)
                S[j] = sqrt_padic(Int((xn - e[j] * xd) * xd * dj[j]), p, K);
            z[1] = C.d2 * S[0];
            z[2] = C.d1 * S[1];
            z[3] = S[2];
            Int g0 = 0;
            for (const Int& zc : z) g0 = gcd(g0, zc);
            if (g0 > 1)
                for (Int& zc : z) zc /= g0;
            auto cert = exact_cert(C, z, p, K);
            if (cert) {
                out.push_back(*cert);
                return;
            }
            if (K > 64 * level)
                throw InvariantViolation("x-line point failed to certify");
        }
    };
    // family viability: all points p-adically close to the root e_j, and all
    // points of negative valuation, have frozen square conditions
    auto root_ok = [&](int j) {
        for (int i = 0; i < 3; ++i)
            if (i != j && !padic_square(Int((e[j] - e[i]) * dj[i]), p))
                return false;
        return true;
    };

    struct Node {
        Int x;
        long k;
    };
    // certified residue disks; every deeper representative of a disk
    // satisfies the same frozen square conditions, so disks are an
    // unbounded reserve of distinct points
    std::vector<Node> xdisks, wdisks;
    std::vector<Node> cur;
    for (long t = 0; t < pl; ++t) cur.push_back({Int((t + seed) % pl), 1});
    for (long k = 1; !cur.empty() && k <= F; ++k) {
        Int pkk = p_pow(p, k);
        std::vector<Node> nxt;
        for (const auto& nd : cur) {
            bool dead = false, all_res = true;
            for (int j = 0; j < 3 && !dead; ++j) {
                Int delta = nd.x - e[j];
                if (delta == 0 || mod_pos(delta, pkk) == 0 ||
                    valuation(delta, p) + g > k) {
                    all_res = false;  // class not yet constant on the branch
                    continue;
                }
                if (!padic_square(Int(delta * dj[j]), p)) dead = true;
            }
            if (dead) continue;
            if (all_res) {
                xdisks.push_back({nd.x, k});
                if (out.size() < want) push_x(nd.x, 1);
                continue;
            }
            if (k == F) continue;  // deep branches belong to a root family
            for (long t = 0; t < pl; ++t)
                nxt.push_back({nd.x + Int((t + seed + k) % pl) * pkk, k + 1});
        }
        cur = std::move(nxt);
    }

    // negative-valuation x: substitute w = 1/x = p t and scan t; the square
    // conditions become (1 - e_j p t) p t d_j, which resolve with the unit
    // class of t, leaving only the deep regime v(w) > g to the family test
    std::vector<Node> wq;
    for (long t = 0; t < pl; ++t) wq.push_back({Int((t + seed) % pl), 1});
    const long G = 2 * g;
    for (long k = 1; !wq.empty() && k <= G; ++k) {
        Int pkk = p_pow(p, k);
        std::vector<Node> nxt;
        for (const auto& nd : wq) {
            if (nd.x != 0 && mod_pos(nd.x, pkk) != 0 &&
                valuation(nd.x, p) + g <= k) {
                bool dead = false;
                for (int j = 0; j < 3 && !dead; ++j)
                    if (!padic_square(
                            Int((1 - e[j] * p * nd.x) * p * nd.x * dj[j]), p))
                        dead = true;
                if (!dead) {
                    wdisks.push_back(nd);
                    if (out.size() < want) push_x(Int(1), Int(p * nd.x));
                }
                continue;
            }
            if (k == G) continue;  // deep branches: x close to infinity
            for (long t = 0; t < pl; ++t)
                nxt.push_back({nd.x + Int((t + seed + k) % pl) * pkk, k + 1});
        }
        wq = std::move(nxt);
    }

    // near-root members: x = e_j + p^m u with m past the separation depth
    // and u chosen to make (x - e_j) d_j a square
    const long m0base = maxsep + g + 1;
    for (int j = 0; j < 3 && out.size() < want; ++j) {
        if (!root_ok(j)) continue;
        long a = valuation(dj[j], p);
        Int w = dj[j] / p_pow(p, a);
        // odd p: u = w gives unit part w^2; at 2 every odd residue is
        // self-inverse mod 8, so u = w mod 8 gives unit part 1
        Int u = p == 2 ? mod_pos(w, 8) : mod_pos(w, p);
        long m = m0base + ((m0base + a) % 2);
        for (; out.size() < want; m += 2) push_x(Int(e[j] + p_pow(p, m) * u), 1);
    }
    // deep-x members: x = p^(-2s) exists iff d1 and d2 are squares in Q_p
    if (out.size() < want && padic_square(C.d1, p) && padic_square(C.d2, p))
        for (long s = g + 1; out.size() < want; ++s) push_x(1, p_pow(p, 2 * s));
    // deepen certified disks: distinct representatives of the same disk are
    // distinct points of the covering
    for (long t = 1; out.size() < want && !(xdisks.empty() && wdisks.empty());
         ++t) {
        for (const auto& nd : xdisks) {
            if (out.size() >= want) break;
            push_x(Int(nd.x + Int(t) * p_pow(p, nd.k)), 1);
        }
        for (const auto& nd : wdisks) {
            if (out.size() >= want) break;
            push_x(Int(1), Int(p * (nd.x + Int(t) * p_pow(p, nd.k))));
        }
    }
    return out;
}

}  // namespace

CoveringModel make_covering(const Curve2T& E, const AlgebraClass& d) {
    CoveringModel C;
    C.E = E;
    C.d = d;
    C.d1 = d.c[0].value();
    C.d2 = d.c[1].value();
    C.d3 = d.c[2].value();
    auto [sf, rest] = squarefree_part(Rat(C.d1 * C.d2));
    (void)rest;
    if (sf != C.d3)
        throw InvalidInput(
            "third component must be the squarefree part of d1*d2");
    Int e21 = E.e[1] - E.e[0], e31 = E.e[2] - E.e[0];
    C.q1 = QForm::diagonal({-e21, C.d1, -C.d2, 0});
    C.q2 = QForm::diagonal({-e31, C.d1, 0, -C.d1 * C.d2});
    C.Q1 = qform_to_poly(C.q1);
    C.Q2 = qform_to_poly(C.q2);

    // Certify the covering map symbolically: with X_j = d1 z1^2 - (e_j-e1) z0^2
    // the cubic evaluated at x = e1 + d1 (z1/z0)^2, cleared by z0^6, satisfies
    // X1 X2 X3 = (d1 d2 z1 z2 z3)^2 modulo (Q1, Q2).
    Poly4 z0sq = Poly4::var(0, 2), z1sq = Poly4::var(1, 2);
    Poly4 X1 = z1sq * Rat(C.d1);
    Poly4 X2 = X1 - z0sq * Rat(e21);
    Poly4 X3 = X1 - z0sq * Rat(e31);
    Poly4 y2 = Poly4::var(1, 2) * Poly4::var(2, 2) * Poly4::var(3, 2) *
               Rat(C.d1 * C.d1 * C.d2 * C.d2);
    Poly4 T = X1 * X2 * X3 - y2;
    Poly4 r2 = X2 * (Rat(1) / Rat(C.d2));             // z2^2 modulo Q1
    Poly4 r3 = X3 * (Rat(1) / Rat(C.d1 * C.d2));      // z3^2 modulo Q2
    if (!subst_even(T, r2, r3).is_zero())
        throw InvariantViolation("covering-map identity failed symbolically");
    return C;
}

bool covering_real_solvable(const CoveringModel& C) {
    std::array<int, 3> s = sorted_signs(C);
    return s[0] >= s[1] && s[1] >= s[2];
}

bool covering_padic_solvable(const CoveringModel& C, const Int& p,
                             long precision, unsigned seed) {
    return !xline_points(C, p, 1, precision, seed).empty();
}

LocalPoint local_point(const CoveringModel& C, const Place& v, long precision,
                       unsigned seed, int choice) {
    LocalPoint P;
    P.place = v;
    if (v.is_real()) {
        if (!covering_real_solvable(C))
            throw ConstructionFailure("covering has no real points");
        P.real_x = real_sample(C, choice);
        return P;
    }
    const Int& p = v.p();
    if (!is_bad_prime(C, p)) {
        auto cert = good_prime_point(C, p, choice);
        if (cert) {
            P.cert = *cert;
            return P;
        }
        // at tiny primes every residue x can be degenerate; fall through to
        // the certified search (Weil bounds make this unreachable for p > 70)
        if (p > 70)
            throw InvariantViolation("no good residue point at a large prime");
    }
    std::vector<PadicCertificate> pts =
        xline_points(C, p, (size_t)choice + 1, precision, seed);
    if (pts.empty())
        throw ConstructionFailure("covering has no points over Q_" +
                                  p.get_str());
    if ((size_t)choice < pts.size()) {
        P.cert = pts[(size_t)choice];
        return P;
    }
    // extend the supply with deck transforms of the found points
    size_t n = pts.size();
    size_t deck = ((size_t)choice - n) / n + 1;
    if (deck > 3)
        throw IndeterminatePrecision("local point ladder exhausted");
    P.cert = pts[((size_t)choice - n) % n];
    apply_deck(P.cert, (int)deck);
    return P;
}

std::array<Int, 4> theta_lift(const Curve2T& E, const CurvePoint& P) {
    std::array<Int, 4> z;
    if (P.inf) {
        z = {0, 1, 1, 1};
        return z;
    }
    Int xn = P.x.get_num(), xd = P.x.get_den();
    Int yn = P.y.get_num(), yd = P.y.get_den();
    Int w = isqrt(xd);
    if (w * w != xd || yd != w * w * w)
        throw InvalidInput("point is not in lowest Weierstrass form");
    Int u1 = xn - E.e[0] * xd, u2 = xn - E.e[1] * xd, u3 = xn - E.e[2] * xd;
    z[0] = 2 * yn * w;
    z[1] = u1 * u2 + u1 * u3 - u2 * u3;
    z[2] = u1 * u2 - u1 * u3 + u2 * u3;
    z[3] = -u1 * u2 + u1 * u3 + u2 * u3;
    Int g = 0;
    for (const Int& c : z) g = gcd(g, c);
    if (g == 0) throw InvariantViolation("theta lift degenerated");
    for (Int& c : z) c /= g;
    for (const Int& c : z) {
        if (c != 0) {
            if (c < 0)
                for (Int& q : z) q = -q;
            break;
        }
    }
    // the lift lands on the trivial covering
    Int q1 = z[1] * z[1] - z[2] * z[2] - (E.e[1] - E.e[0]) * z[0] * z[0];
    Int q2 = z[1] * z[1] - z[3] * z[3] - (E.e[2] - E.e[0]) * z[0] * z[0];
    if (q1 != 0 || q2 != 0)
        throw InvariantViolation("theta lift violates the covering equations");
    return z;
}

CurvePoint covering_image(const CoveringModel& C, const std::array<Int, 4>& z) {
    if (C.q1.eval({z[0], z[1], z[2], z[3]}) != 0 ||
        C.q2.eval({z[0], z[1], z[2], z[3]}) != 0)
        throw InvalidInput("not a point of the covering");
    if (z[0] == 0) return CurvePoint();
    Rat x = Rat(C.E.e[0]) + Rat(C.d1) * Rat(z[1] * z[1]) / Rat(z[0] * z[0]);
    Rat y = Rat(C.d1 * C.d2) * Rat(z[1] * z[2] * z[3]) / Rat(z[0] * z[0] * z[0]);
    CurvePoint P(x, y);
    if (!C.E.on_curve(P))
        throw InvariantViolation("covering image is not on the curve");
    return P;
}

}  // namespace ctp
