#include "ctp/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace ctp {

std::string CurvePoint::str() const {
    if (inf) return "O";
    std::ostringstream os;
    os << "(" << x.get_str() << ", " << y.get_str() << ")";
    return os.str();
}

Curve2T new_curve(const Int& e1, const Int& e2, const Int& e3) {
    if (e1 == e2 || e1 == e3 || e2 == e3)
        throw InvalidInput("curve roots must be pairwise distinct");
    Curve2T E;
    E.e = {e1, e2, e3};
    E.a2 = -(e1 + e2 + e3);
    E.a4 = e1 * e2 + e1 * e3 + e2 * e3;
    E.a6 = -e1 * e2 * e3;
    Int d12 = e1 - e2, d13 = e1 - e3, d23 = e2 - e3;
    E.disc = 16 * d12 * d12 * d13 * d13 * d23 * d23;
    return E;
}

bool Curve2T::on_curve(const CurvePoint& p) const {
    if (p.inf) return true;
    Rat rhs = (p.x - e[0]) * (p.x - e[1]) * (p.x - e[2]);
    return p.y * p.y == rhs;
}

CurvePoint Curve2T::neg(const CurvePoint& p) const {
    if (p.inf) return p;
    return CurvePoint(p.x, -p.y);
}

CurvePoint Curve2T::add(const CurvePoint& p, const CurvePoint& q) const {
    if (p.inf) return q;
    if (q.inf) return p;
    Rat lam;
    if (p.x == q.x) {
        if (p.y == -q.y) return CurvePoint();  // vertical chord
        // doubling; p.y != 0 here since y = -y was excluded
        lam = (3 * p.x * p.x + 2 * Rat(a2) * p.x + a4) / (2 * p.y);
    } else {
        lam = (q.y - p.y) / (q.x - p.x);
    }
    Rat x3 = lam * lam - a2 - p.x - q.x;
    Rat y3 = lam * (p.x - x3) - p.y;
    x3.canonicalize();
    y3.canonicalize();
    return CurvePoint(x3, y3);
}

CurvePoint Curve2T::mul(const Int& n, const CurvePoint& p) const {
    Int m = n >= 0 ? n : Int(-n);
    CurvePoint base = n >= 0 ? p : neg(p);
    CurvePoint acc;  // O
    for (long bit = mpz_sizeinbase(m.get_mpz_t(), 2) - 1; bit >= 0; --bit) {
        acc = add(acc, acc);
        if (mpz_tstbit(m.get_mpz_t(), bit)) acc = add(acc, base);
    }
    if (m == 0) return CurvePoint();
    return acc;
}

CurvePoint Curve2T::torsion_point(int j) const { return CurvePoint(Rat(e[j]), Rat(0)); }

Int Curve2T::cubic_derivative_at_root(int j) const {
    int k = (j + 1) % 3, l = (j + 2) % 3;
    return (e[j] - e[k]) * (e[j] - e[l]);
}

std::string Curve2T::str() const {
    std::ostringstream os;
    os << "y^2 =";
    for (int j = 0; j < 3; ++j) {
        if (e[j] == 0)
            os << " x";
        else
            os << " (x " << (e[j] > 0 ? "- " : "+ ")
               << Int(abs(e[j])).get_str() << ")";
    }
    return os.str();
}

namespace {

// Bitmaps marking quadratic residues modulo 64, 63, 65, 11: a cheap filter
// that rejects ~99% of non-squares before an exact square-root check.
struct SquareFilter {
    bool m64[64] = {}, m63[63] = {}, m65[65] = {}, m11[11] = {};
    SquareFilter() {
        for (int i = 0; i < 64; ++i) m64[(i * i) % 64] = true;
        for (int i = 0; i < 63; ++i) m63[(i * i) % 63] = true;
        for (int i = 0; i < 65; ++i) m65[(i * i) % 65] = true;
        for (int i = 0; i < 11; ++i) m11[(i * i) % 11] = true;
    }
    bool maybe_square(unsigned __int128 n) const {
        return m64[(uint64_t)(n & 63)] && m63[(uint64_t)(n % 63)] &&
               m65[(uint64_t)(n % 65)] && m11[(uint64_t)(n % 11)];
    }
};

bool int128_sqrt(unsigned __int128 n, unsigned __int128& root) {
    if (n == 0) {
        root = 0;
        return true;
    }
    // initial estimate from long double, then Newton to fixpoint
    unsigned __int128 r = (unsigned __int128)sqrtl((long double)n);
    for (int i = 0; i < 6; ++i) {
        if (r == 0) r = 1;
        unsigned __int128 nr = (r + n / r) / 2;
        if (nr >= r && nr - r <= 1 && r * r <= n) break;
        r = nr;
    }
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    root = r;
    return r * r == n;
}

}  // namespace

std::vector<CurvePoint> point_search(const Curve2T& E, const Int& height_bound) {
    if (height_bound < 1) throw InvalidInput("height bound must be positive");
    static const SquareFilter filter;

    std::vector<CurvePoint> out;
    std::vector<Rat> seen_x;
    auto emit = [&](const Rat& x, const Rat& y) {
        for (const Rat& s : seen_x)
            if (s == x) return;
        seen_x.push_back(x);
        out.emplace_back(x, y);
    };

    // x = m/d^2 with naive height max(|m|, d^2) <= H; y then has denominator
    // d^3.  gcd(m, d) != 1 revisits earlier x values; dedup handles that.
    bool small = height_bound.fits_slong_p() && E.e[0].fits_slong_p() &&
                 E.e[1].fits_slong_p() && E.e[2].fits_slong_p();
    long H = small ? height_bound.get_si() : 0;
    long emax = 0;
    if (small)
        for (int i = 0; i < 3; ++i) emax = std::max(emax, std::labs(E.e[i].get_si()));
    // each factor |m - e d^2| <= H (1 + emax); keep the product below 2^126
    bool fast = small && H > 0 && (double)H * (1.0 + (double)emax) < 1.9e12;

    if (fast) {
        long e0 = E.e[0].get_si(), e1 = E.e[1].get_si(), e2 = E.e[2].get_si();
        for (long d = 1; d * d <= H; ++d) {
            long dd = d * d;
            for (long m = -H; m <= H; ++m) {
                __int128 f0 = (__int128)m - (__int128)e0 * dd;
                __int128 f1 = (__int128)m - (__int128)e1 * dd;
                __int128 f2 = (__int128)m - (__int128)e2 * dd;
                __int128 prod = f0 * f1 * f2;
                if (prod < 0) continue;
                unsigned __int128 n = (unsigned __int128)prod;
                if (!filter.maybe_square(n)) continue;
                unsigned __int128 root;
                if (!int128_sqrt(n, root)) continue;
                Rat x(Int((long)m), Int(dd));
                x.canonicalize();
                Int num((long)0);
                // root fits in 126/2 = 63 bits; assemble via two limbs
                num = Int((unsigned long)(root >> 32));
                num <<= 32;
                num += Int((unsigned long)(root & 0xffffffffu));
                Rat y(num, Int(dd) * d);
                y.canonicalize();
                emit(x, y);
            }
        }
    } else {
        for (Int d = 1; d * d <= height_bound; ++d) {
            Int dd = d * d;
            for (Int m = -height_bound; m <= height_bound; ++m) {
                Int prod = (m - E.e[0] * dd) * (m - E.e[1] * dd) * (m - E.e[2] * dd);
                if (prod < 0 || !is_square(prod)) continue;
                Int root = isqrt(prod);
                Rat x(m, dd);
                x.canonicalize();
                Rat y(root, dd * d);
                y.canonicalize();
                emit(x, y);
            }
        }
    }
    return out;
}

}  // namespace ctp
