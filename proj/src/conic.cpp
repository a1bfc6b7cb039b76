#include "ctp/conic.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace ctp {

namespace {

Int abs_int(const Int& x) { return x >= 0 ? x : Int(-x); }

void primitive_reduce(std::array<Int, 3>& v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (Int& x : v) x /= g;
    for (const Int& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (Int& y : v) y = -y;
        break;
    }
}

bool verify(const std::array<Int, 3>& a, const std::array<Int, 3>& v) {
    return a[0] * v[0] * v[0] + a[1] * v[1] * v[1] + a[2] * v[2] * v[2] == 0 &&
           !(v[0] == 0 && v[1] == 0 && v[2] == 0);
}

// Exhaustive search within Holzer's bound |x_i| <= sqrt(|a_j a_k|): a
// solvable normalized conic always has a solution there, so failure proves
// unsolvability.
std::optional<std::array<Int, 3>> brute(const std::array<Int, 3>& a) {
    Int r1 = isqrt(abs_int(a[0] * a[2])) + 1, r2 = isqrt(abs_int(a[0] * a[1])) + 1;
    for (Int x1 = 0; x1 <= r1; ++x1)
        for (Int x2 = 0; x2 <= r2; ++x2) {
            if (x1 == 0 && x2 == 0) continue;
            Int rest = -(a[1] * x1 * x1 + a[2] * x2 * x2);
            Int q = rest / a[0];
            if (q * a[0] != rest || q < 0 || !is_square(q)) continue;
            std::array<Int, 3> v{isqrt(q), x1, x2};
            if (verify(a, v)) return v;
        }
    return std::nullopt;
}

std::optional<std::array<Int, 3>> solve_any(std::array<Int, 3> a, int depth);

// a squarefree, pairwise coprime, nonzero.
std::optional<std::array<Int, 3>> solve_normalized(const std::array<Int, 3>& a_in,
                                                   int depth) {
    if ((a_in[0] > 0 && a_in[1] > 0 && a_in[2] > 0) ||
        (a_in[0] < 0 && a_in[1] < 0 && a_in[2] < 0))
        return std::nullopt;  // definite over R
    if (abs_int(a_in[0] * a_in[1] * a_in[2]) <= 10000000) return brute(a_in);

    // reduce the largest coefficient; remember the coordinate order
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        return std::make_tuple(abs_int(a_in[i]), i) <
               std::make_tuple(abs_int(a_in[j]), j);
    });
    std::array<Int, 3> s{a_in[idx[0]], a_in[idx[1]], a_in[idx[2]]};
    Int c = abs_int(s[2]);

    // t^2 = -s0 s1 mod c via roots mod each prime factor + CRT
    Int target = mod_pos(-s[0] * s[1], c);
    Int t = 0, mod = 1;
    for (const auto& [p, e] : factorize(c).factors) {
        (void)e;
        Int tp;
        if (p == 2) {
            tp = mod_pos(target, 2);
        } else {
            Int ap = mod_pos(target, p);
            if (ap == 0) {
                tp = 0;
            } else if (legendre_symbol(ap, p) != 1) {
                return std::nullopt;  // Legendre obstruction: unsolvable
            } else {
                tp = sqrt_mod_p(ap, p);
            }
        }
        Int k = mod_pos((tp - t) * div_mod(1, mod, p), p);
        t += mod * k;
        mod *= p;
    }
    if (2 * t > c) t -= c;

    // t^2 + s0 s1 = s2 * m (signed); from s0 u^2 + s1 v^2 + m w^2 = 0,
    // the identity s0 (tu+s1 v)^2 + s1 (s0 u - tv)^2 = (t^2+s0 s1)(s0 u^2+s1 v^2)
    // lifts to s0 x^2 + s1 y^2 + s2 (m w)^2 = 0.
    Int m = (t * t + s[0] * s[1]) / s[2];
    if (m * s[2] != t * t + s[0] * s[1])
        throw InvariantViolation("conic descent: nondivisible remainder");

    std::array<Int, 3> sol;
    if (m == 0) {
        sol = {t, s[0], Int(0)};  // s0 t^2 + s1 s0^2 = s0 (t^2 + s0 s1) = 0
    } else {
        auto inner = solve_any({s[0], s[1], m}, depth + 1);
        if (!inner) return std::nullopt;
        const std::array<Int, 3>& u = *inner;
        sol = {t * u[0] + s[1] * u[1], s[0] * u[0] - t * u[1], m * u[2]};
    }
    if (!verify(s, sol)) throw InvariantViolation("conic descent: lift mismatch");
    std::array<Int, 3> out;
    for (int i = 0; i < 3; ++i) out[idx[i]] = sol[i];
    return out;
}

// Normalizes (common factor, square parts, pairwise coprimality), solves,
// and maps the solution back through the per-coordinate rational scalings.
std::optional<std::array<Int, 3>> solve_any(std::array<Int, 3> a, int depth) {
    if (depth > 300) throw ConstructionFailure("conic descent did not terminate");
    Int g = 0;
    for (const Int& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    for (Int& x : a) x /= g;

    std::array<Rat, 3> mult{Rat(1), Rat(1), Rat(1)};
    for (;;) {
        bool changed = false;
        for (int i = 0; i < 3; ++i) {
            auto [sf, r] = squarefree_part(Rat(a[i]));
            if (r != 1) {
                // a_i x_i^2 = sf (r x_i)^2: inner solves with sf, x_i = w_i / r
                a[i] = sf;
                mult[i] /= r;
                changed = true;
            }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Int gij;
                mpz_gcd(gij.get_mpz_t(), a[i].get_mpz_t(), a[j].get_mpz_t());
                if (gij <= 1) continue;
                const Int p = factorize(gij).factors[0].first;
                int k = 3 - i - j;
                // (a_i/p) X^2 + (a_j/p) Y^2 + (p a_k) Z^2 = 0 scaled by p
                // gives a_i X^2 + a_j Y^2 + a_k (pZ)^2 = 0
                a[i] /= p;
                a[j] /= p;
                a[k] *= p;
                mult[k] *= p;
                changed = true;
            }
        if (!changed) break;
    }

    auto inner = solve_normalized(a, depth);
    if (!inner) return std::nullopt;
    std::array<Rat, 3> wr;
    for (int i = 0; i < 3; ++i) {
        wr[i] = Rat((*inner)[i]) * mult[i];
        wr[i].canonicalize();
    }
    Int lcm = 1;
    for (int i = 0; i < 3; ++i)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), wr[i].get_den().get_mpz_t());
    std::array<Int, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = Rat(wr[i] * lcm).get_num();
    return out;
}

}  // namespace

std::optional<std::array<Int, 3>> solve_conic(const std::array<Int, 3>& a) {
    for (const Int& x : a)
        if (x == 0) throw InvalidInput("solve_conic: zero coefficient");
    auto sol = solve_any(a, 0);
    if (!sol) return std::nullopt;
    std::array<Int, 3> out = *sol;
    primitive_reduce(out);
    if (!verify(a, out))
        throw InvariantViolation("solve_conic: back-transform failed");
    return out;
}

ConicParam conic_parametrize(const std::array<Int, 3>& a,
                             const std::array<Int, 3>& pt) {
    if (a[0] * pt[0] * pt[0] + a[1] * pt[1] * pt[1] + a[2] * pt[2] * pt[2] != 0)
        throw InvalidInput("conic_parametrize: point not on conic");
    int i0 = 0;
    while (pt[i0] == 0) ++i0;
    int v1 = (i0 + 1) % 3, v2 = (i0 + 2) % 3;
    // line direction m(xi,eta) = xi e_{v1} + eta e_{v2};
    // residual point beta = Q(m) pt - 2 B(pt,m) m, B the polar bilinear form
    Bin qm;
    qm.c = {Rat(a[v1]), Rat(0), Rat(a[v2])};
    Bin bpm;
    bpm.c = {Rat(a[v1] * pt[v1]), Rat(a[v2] * pt[v2])};
    Bin xi, eta;
    xi.c = {Rat(1), Rat(0)};
    eta.c = {Rat(0), Rat(1)};
    ConicParam par;
    par.a = a;
    par.base = pt;
    for (int i = 0; i < 3; ++i) par.beta[i] = qm * Rat(pt[i]);
    par.beta[v1] = par.beta[v1] - bpm * xi * Rat(2);
    par.beta[v2] = par.beta[v2] - bpm * eta * Rat(2);
    Int g = 0;
    for (int i = 0; i < 3; ++i)
        for (const Rat& cc : par.beta[i].c) {
            if (cc.get_den() != 1)
                throw InvariantViolation("conic_parametrize: non-integral beta");
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cc.get_num().get_mpz_t());
        }
    if (g > 1)
        for (int i = 0; i < 3; ++i) par.beta[i] = par.beta[i] * Rat(Int(1), g);
    return par;
}

std::vector<std::pair<long, long>> parameter_ladder(size_t count) {
    std::vector<std::pair<long, long>> out;
    for (long h = 1; out.size() < count; ++h) {
        for (long eta = 0; eta <= h && out.size() < count; ++eta)
            for (long xi = -h; xi <= h && out.size() < count; ++xi) {
                if (std::max(std::labs(xi), eta) != h) continue;
                if (std::gcd(std::labs(xi), eta) != 1) continue;
                if (eta == 0 && xi != 1) continue;
                out.emplace_back(xi, eta);
            }
        if (h > 1000000) throw InvariantViolation("parameter ladder runaway");
    }
    return out;
}

std::vector<std::array<Int, 3>> conic_points(const ConicParam& par, size_t count) {
    std::vector<std::array<Int, 3>> out;
    for (auto [xi, eta] : parameter_ladder(count)) {
        std::array<Int, 3> p;
        for (int i = 0; i < 3; ++i) {
            Rat v = par.beta[i].eval(Rat(xi), Rat(eta));
            if (v.get_den() != 1)
                throw InvariantViolation("conic_points: non-integral value");
            p[i] = v.get_num();
        }
        if (p[0] == 0 && p[1] == 0 && p[2] == 0) continue;
        primitive_reduce(p);
        if (!verify(par.a, p))
            throw InvariantViolation("conic_points: parametrized point off conic");
        out.push_back(p);
    }
    return out;
}

std::array<Int, 3> conic_tangent(const std::array<Int, 3>& a,
                                 const std::array<Int, 3>& pt) {
    std::array<Int, 3> L{a[0] * pt[0], a[1] * pt[1], a[2] * pt[2]};
    Int g = 0;
    for (const Int& x : L) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (Int& x : L) x /= g;
    return L;
}

}  // namespace ctp
