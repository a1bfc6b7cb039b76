#include "ctp/ftriple.hpp"

#include <algorithm>
#include <climits>

namespace ctp {

namespace {

// The four singular quadrics of the pencil through C_d, each a cone whose
// vertex avoids C: their tangent planes cut out the divisors the function
// triple is built from.  Index 0 is the cone whose plane sections realize the
// fiber over infinity; 1..3 realize the fibers over the three 2-torsion
// points.  vars lists the three coordinates the rank-3 form uses.
struct ConeData {
    std::array<Int, 3> a;
    std::array<int, 3> vars;
};

std::array<ConeData, 4> cone_list(const CoveringModel& C) {
    Int e21 = C.E.e[1] - C.E.e[0];
    Int e31 = C.E.e[2] - C.E.e[0];
    Int e32 = C.E.e[2] - C.E.e[1];
    std::array<ConeData, 4> out{
        ConeData{{e32 * C.d1, -e31 * C.d2, e21 * C.d1 * C.d2}, {1, 2, 3}},
        ConeData{{e32, -C.d2, C.d1 * C.d2}, {0, 2, 3}},
        ConeData{{-e31, C.d1, -C.d1 * C.d2}, {0, 1, 3}},
        ConeData{{-e21, C.d1, -C.d2}, {0, 1, 2}}};
    for (auto& cone : out) {
        Int g = gcd(gcd(abs(cone.a[0]), abs(cone.a[1])), abs(cone.a[2]));
        for (Int& c : cone.a) c /= g;
    }
    return out;
}

Poly4 lift_form(const std::array<Int, 3>& a, const std::array<int, 3>& vars) {
    Poly4 p;
    for (int k = 0; k < 3; ++k) p = p + Poly4::var(vars[k], 2) * Rat(a[k]);
    return p;
}

Poly4 lift_linear(const std::array<Int, 3>& a, const std::array<int, 3>& vars) {
    Poly4 p;
    for (int k = 0; k < 3; ++k) p = p + Poly4::var(vars[k]) * Rat(a[k]);
    return p;
}

// Each cone form lies in the pencil spanned by the quadrics; a failed check
// here means the cone table does not match the covering.
void check_cone_in_pencil(const CoveringModel& C, const Poly4& cone) {
    // cone == u Q1 + v Q2 for rational u, v; Q1 alone carries z2^2 and Q2
    // alone carries z3^2, so those two coefficients determine (u, v)
    auto coeff = [](const Poly4& p, int var) {
        Poly4::Mono m{0, 0, 0, 0};
        m[var] = 2;
        auto it = p.t.find(m);
        return it == p.t.end() ? Rat(0) : it->second;
    };
    // Q1 and Q2 share the z1^2 coefficient d1 and differ in z2^2 / z3^2
    Rat c2 = coeff(cone, 2), c3 = coeff(cone, 3);
    Rat u = c2 / Rat(-C.d2), v = c3 / Rat(-C.d1 * C.d2);
    if (!(C.Q1 * u + C.Q2 * v == cone))
        throw InvariantViolation("cone is not in the quadric pencil");
}

// Pullback of a linear form along the conic parametrization: the z0
// coefficient is returned separately (z0 is not parametrized).
std::pair<Rat, Bin> split_pullback(const Poly4& L, const ConicParam& par) {
    Rat alpha = 0;
    Bin rest = Bin::zero();
    for (const auto& [m, c] : L.t) {
        int var = -1;
        for (int i = 0; i < 4; ++i)
            if (m[i] == 1) var = i;
        if (m[0] + m[1] + m[2] + m[3] != 1 || var < 0)
            throw InvariantViolation("tangent plane is not linear");
        if (var == 0)
            alpha = c;
        else
            rest = rest + par.beta[var - 1] * c;
    }
    return {alpha, rest};
}

std::vector<Poly4::Mono> monomials_of_degree(int d) {
    std::vector<Poly4::Mono> out;
    for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b)
            for (int c = d - a - b; c >= 0; --c)
                out.push_back({a, b, c, d - a - b - c});
    return out;
}

std::vector<Rat> coeff_vector(const Poly4& p,
                              const std::vector<Poly4::Mono>& basis) {
    std::map<Poly4::Mono, int> pos;
    for (size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = (int)i;
    std::vector<Rat> v(basis.size(), Rat(0));
    for (const auto& [m, c] : p.t) {
        auto it = pos.find(m);
        if (it == pos.end())
            throw InvariantViolation("polynomial leaves the expected degree");
        v[it->second] = c;
    }
    return v;
}

// Clears denominators by a square and strips the square part of the integer
// content; both operations preserve every square class the form takes.
void normalize_square_content(Poly4& p) {
    if (p.is_zero()) return;
    Int den_lcm = 1;
    for (const auto& [m, c] : p.t)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                c.get_den().get_mpz_t());
    p = p * Rat(den_lcm * den_lcm);
    Int num_gcd = 0;
    for (const auto& [m, c] : p.t)
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                c.get_num().get_mpz_t());
    auto [s, r] = squarefree_part(Rat(num_gcd));
    (void)s;
    Int ri = r.get_num();  // r is a positive integer here
    p = p * (Rat(1) / Rat(ri * ri));
}

Int eval_int(const Poly4& p, const std::vector<Int>& z) {
    Int acc = 0;
    for (const auto& [m, c] : p.t) {
        if (c.get_den() != 1)
            throw InvariantViolation("expected integral coefficients");
        Int term = c.get_num();
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < m[i]; ++k) term *= z[i];
        acc += term;
    }
    return acc;
}

IntervalRat interval_eval(const Poly4& p, const std::array<IntervalRat, 4>& z) {
    IntervalRat acc = IntervalRat::point(Rat(0));
    for (const auto& [m, c] : p.t) {
        IntervalRat term = IntervalRat::point(c);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < m[i]; ++k) term = term * z[i];
        acc = acc + term;
    }
    return acc;
}

// Square class of a p-adic number given v_p and the unit part of an exact
// integer representative (known to sufficient precision by the caller).
SquareClass padic_class(const Int& value, const Int& p, long v) {
    Int unit = value;
    for (long i = 0; i < v; ++i) unit /= p;
    if (p == 2) {
        Int u8 = mod_pos(unit, 8);
        Int rep = (v % 2 ? Int(2) : Int(1)) * u8;
        return SquareClass(rep);
    }
    Int nr = 2;
    while (legendre_symbol(nr, p) != -1) ++nr;
    Int rep = v % 2 ? p : Int(1);
    if (legendre_symbol(unit, p) == -1) rep *= nr;
    return SquareClass(rep);
}

}  // namespace

FTriple construct_f(const CoveringModel& C,
                    const std::vector<std::array<Int, 4>>& avoid_in) {
    auto cones = cone_list(C);
    std::vector<std::array<Int, 4>> avoid = avoid_in;
    if (C.d.is_one()) avoid.push_back({0, 1, 1, 1});

    FTriple f;
    std::array<std::array<Int, 3>, 4> tan;
    std::array<Poly4, 4> L;
    for (int i = 0; i < 4; ++i) {
        Poly4 cone_poly = lift_form(cones[i].a, cones[i].vars);
        check_cone_in_pencil(C, cone_poly);
        auto pt = solve_conic(cones[i].a);
        if (!pt)
            throw ConstructionFailure(
                "a pencil cone has no rational point; the class is not "
                "everywhere locally solvable");
        auto candidates = conic_points(conic_parametrize(cones[i].a, *pt), 200);
        bool found = false;
        for (const auto& b : candidates) {
            auto t3 = conic_tangent(cones[i].a, b);
            Poly4 Ltry = lift_linear(t3, cones[i].vars);
            bool ok = true;
            for (const auto& s : avoid)
                if (eval_int(Ltry, {s[0], s[1], s[2], s[3]}) == 0) {
                    ok = false;
                    break;
                }
            if (ok) {
                tan[i] = b;
                L[i] = Ltry;
                found = true;
                break;
            }
        }
        if (!found)
            throw ConstructionFailure("no tangent plane avoids the sample points");
    }
    f.L = L;
    f.tangency = tan;

    // parametrize the infinity cone from its own tangency point, so the
    // tangent plane pulls back to a constant times a perfect square
    ConicParam par = conic_parametrize(cones[0].a, tan[0]);
    {
        Bin vanish = Bin::zero();
        for (int k = 0; k < 3; ++k)
            vanish = vanish + par.beta[k] * par.beta[k] * Rat(cones[0].a[k]);
        if (!vanish.is_zero())
            throw InvariantViolation("parametrization left the cone");
    }

    Int e21 = C.E.e[1] - C.E.e[0], e31 = C.E.e[2] - C.E.e[0];
    Bin Ut = (par.beta[0] * par.beta[0] * Rat(C.d1) -
              par.beta[1] * par.beta[1] * Rat(C.d2)) *
             (Rat(1) / Rat(e21));
    {
        Bin Ut2 = (par.beta[0] * par.beta[0] * Rat(C.d1) -
                   par.beta[2] * par.beta[2] * Rat(C.d1 * C.d2)) *
                  (Rat(1) / Rat(e31));
        if (!(Ut == Ut2))
            throw InvariantViolation("quartic invariant disagrees between quadrics");
    }

    auto [alpha0, l0pull] = split_pullback(L[0], par);
    if (alpha0 != 0)
        throw InvariantViolation("infinity tangent plane involves z0");
    auto c0split = bin_sqrt_up_to_constant(l0pull);
    if (!c0split)
        throw InvariantViolation("tangent pullback is not a square");
    Rat c0 = c0split->first;
    Bin ell0 = c0split->second;

    std::array<Rat, 3> alpha;
    std::array<Bin, 3> B, F, Croot;
    std::array<Rat, 3> gam;
    for (int j = 0; j < 3; ++j) {
        auto [a, rest] = split_pullback(L[j + 1], par);
        alpha[j] = a;
        B[j] = rest;
        F[j] = B[j] * B[j] - Ut * (alpha[j] * alpha[j]);
        if (F[j].is_zero())
            throw InvariantViolation("degenerate tangent-plane norm");
        auto sq = bin_sqrt_up_to_constant(F[j]);
        if (!sq)
            throw ConstructionFailure(
                "tangent-plane norm is not a square times a constant");
        gam[j] = sq->first;
        Croot[j] = sq->second;
    }

    Rat Gam = gam[0] * gam[1] * gam[2];
    auto [gs, gr] = squarefree_part(Gam);
    if (gs != 1)
        throw ConstructionFailure(
            "norm constants do not multiply to a rational square");
    Bin S = Croot[0] * Croot[1] * Croot[2] * gr;

    Bin Pb = B[0] * B[1] * B[2] +
             Ut * (B[0] * (alpha[1] * alpha[2]) + B[1] * (alpha[0] * alpha[2]) +
                   B[2] * (alpha[0] * alpha[1]));
    Bin Qb = B[1] * B[2] * alpha[0] + B[0] * B[2] * alpha[1] +
             B[0] * B[1] * alpha[2] + Ut * (alpha[0] * alpha[1] * alpha[2]);
    Bin Nprod = F[0] * F[1] * F[2];
    if (!(Pb * Pb - Qb * Qb * Ut == Nprod))
        throw InvariantViolation("norm-form expansion failed");
    if (!(S * S == Nprod))
        throw InvariantViolation("square root of the norm product failed");

    Rat gA;
    Bin A, Bb;
    if (Qb.is_zero()) {
        auto sq = bin_sqrt_up_to_constant(Pb);
        if (!sq) throw ConstructionFailure("split of a zero-trace norm failed");
        gA = sq->first;
        A = sq->second;
        Bb = Bin::zero();
    } else {
        bool done = false;
        for (int sgn : {1, -1}) {
            Bin R = (Pb + S * Rat(sgn)) * Rat(1, 2);
            if (R.is_zero()) continue;
            auto sq = bin_sqrt_up_to_constant(R);
            if (!sq) continue;
            auto quot = bin_divide(Qb, sq->second);
            if (!quot) continue;
            gA = sq->first;
            A = sq->second;
            Bb = *quot * (Rat(1) / (gA * 2));
            if (Pb == (A * A + Bb * Bb * Ut) * gA && Qb == A * Bb * (gA * 2)) {
                done = true;
                break;
            }
        }
        if (!done)
            throw ConstructionFailure("norm product does not split over the quartic");
    }

    // push the halves forward to a quadric G: even part against the products
    // beta_i beta_j plus a z0^2 multiple of the invariant, odd part against
    // beta alone
    std::vector<Bin> cols;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) cols.push_back(par.beta[i] * par.beta[j]);
    cols.push_back(Ut);
    Bin target_even = A * ell0;
    std::vector<std::vector<Rat>> Aeven(5, std::vector<Rat>(7, Rat(0)));
    std::vector<Rat> beven(5, Rat(0));
    for (int r = 0; r < 5; ++r) {
        for (int cidx = 0; cidx < 7; ++cidx) Aeven[r][cidx] = cols[cidx].c[r];
        beven[r] = target_even.c[r];
    }
    auto qsol = solve_linear(Aeven, beven);
    if (!qsol)
        throw ConstructionFailure("even pushforward system is inconsistent");
    Poly4 G;
    {
        int idx = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                Poly4::Mono m{0, 0, 0, 0};
                m[i + 1] += 1;
                m[j + 1] += 1;
                G.add_term(m, (*qsol)[idx++]);
            }
        G.add_term({2, 0, 0, 0}, (*qsol)[6]);
    }
    {
        Bin target_odd = Bb * ell0;
        std::vector<std::vector<Rat>> Aodd(3, std::vector<Rat>(3, Rat(0)));
        std::vector<Rat> bodd(3, Rat(0));
        for (int r = 0; r < 3; ++r) {
            for (int cidx = 0; cidx < 3; ++cidx)
                Aodd[r][cidx] = par.beta[cidx].c[r];
            if (!target_odd.is_zero()) bodd[r] = target_odd.c[r];
        }
        auto lsol = solve_linear(Aodd, bodd);
        if (!lsol)
            throw ConstructionFailure("odd pushforward system is inconsistent");
        for (int i = 0; i < 3; ++i) {
            Poly4::Mono m{1, 0, 0, 0};
            m[i + 1] += 1;
            G.add_term(m, (*lsol)[i]);
        }
    }
    f.G = G;

    f.num[0] = L[1] * L[0];
    f.num[1] = L[2] * L[0];
    f.num[2] = L[3] * L[0] * (gA * c0);
    for (int j = 0; j < 3; ++j) {
        f.den[j] = L[0] * L[0];
        normalize_square_content(f.num[j]);
        normalize_square_content(f.den[j]);
    }

    // pin the trivial covering to the descent map: rescale so the lift of the
    // origin evaluates to the identity class
    if (C.d.is_one()) {
        std::array<Rat, 4> P0{Rat(0), Rat(1), Rat(1), Rat(1)};
        for (int j = 0; j < 3; ++j) {
            Rat nv = f.num[j].eval(P0), dv = f.den[j].eval(P0);
            if (nv == 0 || dv == 0)
                throw InvariantViolation("normalization point lies on a divisor");
            SquareClass s(nv * dv);
            f.num[j] = f.num[j] * Rat(s.value());
        }
    }

    // certify num1 num2 num3 = gscale^2 G^2 L0^2 modulo the quadric ideal,
    // solving for the constant and the quartic cofactors in one system
    Poly4 W0 = f.num[0] * f.num[1] * f.num[2];
    Poly4 K = G * G * (L[0] * L[0]);
    auto mono4 = monomials_of_degree(4);
    auto mono6 = monomials_of_degree(6);
    std::vector<std::vector<Rat>> M(mono6.size(),
                                    std::vector<Rat>(1 + 2 * mono4.size(), Rat(0)));
    std::vector<Rat> rhs = coeff_vector(W0, mono6);
    {
        std::vector<Rat> kv = coeff_vector(K, mono6);
        for (size_t r = 0; r < mono6.size(); ++r) M[r][0] = kv[r];
        for (size_t k = 0; k < mono4.size(); ++k) {
            Poly4 mono;
            mono.add_term(mono4[k], Rat(1));
            std::vector<Rat> q1v = coeff_vector(mono * C.Q1, mono6);
            std::vector<Rat> q2v = coeff_vector(mono * C.Q2, mono6);
            for (size_t r = 0; r < mono6.size(); ++r) {
                M[r][1 + k] = q1v[r];
                M[r][1 + mono4.size() + k] = q2v[r];
            }
        }
    }
    auto sol = solve_linear(M, rhs);
    if (!sol)
        throw ConstructionFailure("product identity has no quadric certificate");
    Rat csq = (*sol)[0];
    if (csq <= 0)
        throw ConstructionFailure("product identity constant is not positive");
    auto [cs, cr] = squarefree_part(csq);
    if (cs != 1)
        throw ConstructionFailure("product identity constant is not a square");
    f.gscale = cr;
    for (size_t k = 0; k < mono4.size(); ++k) {
        f.U6.add_term(mono4[k], (*sol)[1 + k]);
        f.V6.add_term(mono4[k], (*sol)[1 + mono4.size() + k]);
    }
    verify_f_properties(C, f);
    return f;
}

FTriple rescale_constant(const FTriple& f, int component, const Rat& c) {
    if (c == 0) throw InvalidInput("rescale by zero");
    FTriple out = f;
    // multiply by numerator*denominator: an integer in the same square class
    out.num[component] = out.num[component] * Rat(c.get_num() * c.get_den());
    out.U6 = Poly4::zero();
    out.V6 = Poly4::zero();
    return out;
}

FTriple rescale_square(const FTriple& f, int component, const Poly4& lin_num,
                       const Poly4& lin_den) {
    if (lin_num.is_zero() || lin_den.is_zero())
        throw InvalidInput("rescale by a zero form");
    FTriple out = f;
    out.num[component] = out.num[component] * lin_num * lin_num;
    out.den[component] = out.den[component] * lin_den * lin_den;
    normalize_square_content(out.num[component]);
    normalize_square_content(out.den[component]);
    out.U6 = Poly4::zero();
    out.V6 = Poly4::zero();
    return out;
}

std::optional<AlgebraClass> evaluate_f(const CoveringModel& C, const FTriple& f,
                                       LocalPoint& P, long max_precision) {
    if (P.place.is_real()) {
        std::array<Int, 3> dd{C.d1, C.d2, C.d1 * C.d2};
        for (int bits = 96; bits <= 1536; bits *= 2) {
            std::array<IntervalRat, 4> z;
            z[0] = IntervalRat::point(Rat(1));
            for (int j = 0; j < 3; ++j) {
                Rat t = (P.real_x - Rat(C.E.e[j])) / Rat(dd[j]);
                if (t < 0)
                    throw InvariantViolation("real sample outside the sign region");
                z[j + 1] = interval_sqrt(t, bits);
            }
            std::array<SquareClass, 3> cls;
            bool undecided = false;
            for (int j = 0; j < 3; ++j) {
                int s = interval_eval(f.num[j], z).sign() *
                        interval_eval(f.den[j], z).sign();
                if (s == 0) {
                    undecided = true;
                    break;
                }
                cls[j] = SquareClass(Int(s));
            }
            if (!undecided) return AlgebraClass(cls[0], cls[1], cls[2]);
        }
        return std::nullopt;
    }

    const Int& p = P.place.p();
    std::vector<QForm> forms{C.q1, C.q2};
    long need = p == 2 ? 3 : 1;
    long base = 6 + valuation(Int(2 * C.E.disc * C.d1 * C.d2), p);
    long cap = max_precision > 0 ? max_precision : std::max(3 * base, 40L);
    for (;;) {
        long M = P.cert.value_val - P.cert.minor_val;
        bool exact_zero = false;
        long worst = 0;
        std::array<Int, 3> prod;
        for (int j = 0; j < 3; ++j) {
            Int nv = eval_int(f.num[j], P.cert.z);
            Int dv = eval_int(f.den[j], P.cert.z);
            if (nv == 0 || dv == 0) {
                exact_zero = true;
                break;
            }
            prod[j] = nv * dv;
            worst = std::max({worst, valuation(nv, p), valuation(dv, p)});
        }
        if (!exact_zero && worst + need <= M) {
            std::array<SquareClass, 3> cls;
            for (int j = 0; j < 3; ++j)
                cls[j] = padic_class(prod[j], p, valuation(prod[j], p));
            return AlgebraClass(cls[0], cls[1], cls[2]);
        }
        // an exact rational point of the covering that zeroes a coefficient
        // form lies on a divisor of f; no refinement can move it
        if (exact_zero && P.cert.value_val >= LONG_MAX / 4)
            return std::nullopt;
        long target = exact_zero ? 2 * M + 8 : worst + need;
        if (target > cap) return std::nullopt;
        padic_refine(forms, p, P.cert, P.cert.minor_val + target);
    }
}

AlgebraClass evaluate_f_exact(const FTriple& f, const std::array<Int, 4>& z) {
    std::array<SquareClass, 3> cls;
    std::vector<Int> zz{z[0], z[1], z[2], z[3]};
    for (int j = 0; j < 3; ++j) {
        Int nv = eval_int(f.num[j], zz);
        Int dv = eval_int(f.den[j], zz);
        if (nv == 0 || dv == 0)
            throw InvalidInput("point lies on a divisor of the function triple");
        cls[j] = SquareClass(Rat(nv) / Rat(dv));
    }
    return AlgebraClass(cls[0], cls[1], cls[2]);
}

std::pair<LocalPoint, AlgebraClass> evaluate_at_place(const CoveringModel& C,
                                                      const FTriple& f,
                                                      const Place& v,
                                                      long precision,
                                                      unsigned seed,
                                                      int choice) {
    int successes = 0;
    for (int cand = 0; cand < 24; ++cand) {
        LocalPoint P;
        try {
            P = local_point(C, v, precision, seed, cand);
        } catch (const IndeterminatePrecision&) {
            break;
        }
        auto r = evaluate_f(C, f, P, precision);
        if (!r) continue;
        if (successes++ == choice) return {P, *r};
    }
    throw IndeterminatePrecision(
        "no certifiable local point off the divisors at " + v.str());
}

void verify_f_properties(const CoveringModel& C, const FTriple& f) {
    auto cones = cone_list(C);
    for (int i = 0; i < 4; ++i) {
        Int val = 0;
        for (int k = 0; k < 3; ++k)
            val += cones[i].a[k] * f.tangency[i][k] * f.tangency[i][k];
        if (val != 0)
            throw InvariantViolation("stored tangency point is off its cone");
        // stored plane must be proportional to the polar form at the point
        std::array<Rat, 3> polar;
        for (int k = 0; k < 3; ++k)
            polar[k] = Rat(cones[i].a[k] * f.tangency[i][k]);
        std::array<Rat, 3> stored{Rat(0), Rat(0), Rat(0)};
        for (const auto& [m, c] : f.L[i].t)
            for (int k = 0; k < 3; ++k)
                if (m[cones[i].vars[k]] == 1) stored[k] = c;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                if (polar[a] * stored[b] != polar[b] * stored[a])
                    throw InvariantViolation("stored tangent plane mismatch");
    }
    if (f.gscale <= 0) throw InvariantViolation("negative product constant");
    Poly4 W0 = f.num[0] * f.num[1] * f.num[2];
    Poly4 K = f.G * f.G * (f.L[0] * f.L[0]) * (f.gscale * f.gscale);
    Poly4 R = W0 - K - f.U6 * C.Q1 - f.V6 * C.Q2;
    if (!R.is_zero())
        throw InvariantViolation("product identity certificate failed");
}

std::vector<std::string> second_covering(const CoveringModel& C,
                                         const FTriple& f) {
    std::vector<std::string> out;
    out.push_back(C.Q1.str() + " = 0");
    out.push_back(C.Q2.str() + " = 0");
    for (int j = 0; j < 3; ++j)
        out.push_back("u" + std::to_string(j + 1) + "^2*(" + f.den[j].str() +
                      ") = " + f.num[j].str());
    return out;
}

}  // namespace ctp
