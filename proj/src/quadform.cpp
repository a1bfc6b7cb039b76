#include "ctp/quadform.hpp"

#include <algorithm>
#include <sstream>

namespace ctp {

Poly4 Poly4::constant(const Rat& c) {
    Poly4 p;
    p.add_term({0, 0, 0, 0}, c);
    return p;
}

Poly4 Poly4::var(int i, int power) {
    Poly4 p;
    Mono m{0, 0, 0, 0};
    m[i] = power;
    p.add_term(m, 1);
    return p;
}

int Poly4::degree() const {
    int d = -1;
    for (const auto& [m, c] : t) d = std::max(d, m[0] + m[1] + m[2] + m[3]);
    return d;
}

Poly4& Poly4::add_term(const Mono& m, const Rat& c) {
    if (c == 0) return *this;
    auto it = t.find(m);
    if (it == t.end()) {
        t.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) t.erase(it);
    }
    return *this;
}

Poly4 Poly4::operator+(const Poly4& o) const {
    Poly4 r = *this;
    for (const auto& [m, c] : o.t) r.add_term(m, c);
    return r;
}

Poly4 Poly4::operator-(const Poly4& o) const {
    Poly4 r = *this;
    for (const auto& [m, c] : o.t) r.add_term(m, -c);
    return r;
}

Poly4 Poly4::operator*(const Poly4& o) const {
    Poly4 r;
    for (const auto& [m1, c1] : t)
        for (const auto& [m2, c2] : o.t) {
            Mono m{m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3]};
            r.add_term(m, c1 * c2);
        }
    return r;
}

Poly4 Poly4::operator*(const Rat& c) const {
    Poly4 r;
    if (c == 0) return r;
    for (const auto& [m, k] : t) r.t.emplace(m, k * c);
    return r;
}

Rat Poly4::eval(const std::array<Rat, 4>& z) const {
    Rat acc = 0;
    for (const auto& [m, c] : t) {
        Rat term = c;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < m[i]; ++k) term *= z[i];
        acc += term;
    }
    return acc;
}

std::string Poly4::str() const {
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : t) {
        Rat cc = c;
        if (first) {
            if (cc < 0) {
                os << "-";
                cc = -cc;
            }
        } else {
            os << (cc < 0 ? " - " : " + ");
            if (cc < 0) cc = -cc;
        }
        first = false;
        bool has_var = m[0] + m[1] + m[2] + m[3] > 0;
        if (cc != 1 || !has_var) os << cc.get_str();
        bool star = cc != 1 || !has_var;
        for (int i = 0; i < 4; ++i) {
            if (m[i] == 0) continue;
            if (star) os << "*";
            os << "z" << i;
            if (m[i] > 1) os << "^" << m[i];
            star = true;
        }
    }
    return os.str();
}

Rat Poly4::content() const {
    if (t.empty()) return 0;
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& [m, c] : t) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                c.get_den().get_mpz_t());
    }
    Rat g(num_gcd, den_lcm);
    g.canonicalize();
    if (t.begin()->second < 0) g = -g;
    return g;
}

Poly4 qform_to_poly(const QForm& q) {
    Poly4 p;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const Int& c = q.c[qform_pair_index(i, j)];
            if (c == 0) continue;
            Poly4::Mono m{0, 0, 0, 0};
            m[i] += 1;
            m[j] += 1;
            p.add_term(m, Rat(c));
        }
    return p;
}

QForm poly_to_qform(const Poly4& p) {
    QForm q;
    q.nvars = 4;
    for (const auto& [m, c] : p.t) {
        if (m[0] + m[1] + m[2] + m[3] != 2)
            throw InvariantViolation("poly_to_qform: not homogeneous quadratic");
        if (c.get_den() != 1)
            throw InvariantViolation("poly_to_qform: non-integral coefficient");
        int i = -1, j = -1;
        for (int k = 0; k < 4; ++k) {
            if (m[k] == 2) i = j = k;
            if (m[k] == 1) (i < 0 ? i : j) = k;
        }
        q.c[qform_pair_index(i, j)] = c.get_num();
    }
    return q;
}

bool Bin::is_zero() const {
    for (const Rat& x : c)
        if (x != 0) return false;
    return true;
}

Bin Bin::operator+(const Bin& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (degree() != o.degree())
        throw InvariantViolation("Bin: degree mismatch in +");
    Bin r = *this;
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

Bin Bin::operator-(const Bin& o) const { return *this + o * Rat(-1); }

Bin Bin::operator*(const Bin& o) const {
    if (is_zero() || o.is_zero()) return zero();
    Bin r;
    r.c.assign(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
}

Bin Bin::operator*(const Rat& s) const {
    if (s == 0) return zero();
    Bin r = *this;
    for (Rat& x : r.c) x *= s;
    return r;
}

bool Bin::operator==(const Bin& o) const {
    return (*this - o).is_zero();
}

Rat Bin::eval(const Rat& x, const Rat& y) const {
    Rat acc = 0;
    int n = degree();
    for (int i = 0; i <= n; ++i) {
        Rat term = c[i];
        for (int k = 0; k < n - i; ++k) term *= x;
        for (int k = 0; k < i; ++k) term *= y;
        acc += term;
    }
    return acc;
}

std::string Bin::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    int n = degree();
    bool first = true;
    for (int i = 0; i <= n; ++i) {
        if (c[i] == 0) continue;
        os << (first ? "" : " + ") << c[i].get_str();
        if (n - i > 0) os << "*x^" << n - i;
        if (i > 0) os << "*y^" << i;
        first = false;
    }
    return os.str();
}

namespace {

// trailing y-multiplicity: number of leading zero coefficients
int ymult(const Bin& b) {
    int k = 0;
    while (k < (int)b.c.size() && b.c[k] == 0) ++k;
    return k;
}
int xmult(const Bin& b) {
    int k = 0;
    int n = (int)b.c.size();
    while (k < n && b.c[n - 1 - k] == 0) ++k;
    return k;
}

// coefficients as univariate in t = x/y: u[j] = coefficient of t^j
std::vector<Rat> dehom(const Bin& b) {
    std::vector<Rat> u(b.c.size());
    for (size_t j = 0; j < u.size(); ++j) u[j] = b.c[b.c.size() - 1 - j];
    return u;
}

}  // namespace

std::optional<Bin> bin_divide(const Bin& a, const Bin& b) {
    if (b.is_zero()) throw InvalidInput("bin_divide by zero");
    if (a.is_zero()) return Bin::zero();
    // univariate long division in t = x/y; the final homogeneous product
    // check catches quotients that would need negative y powers
    std::vector<Rat> u = dehom(a), v = dehom(b);
    while (!u.empty() && u.back() == 0) u.pop_back();
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (u.size() < v.size()) return std::nullopt;
    std::vector<Rat> q(u.size() - v.size() + 1, Rat(0));
    for (int i = (int)q.size() - 1; i >= 0; --i) {
        Rat coef = u[i + v.size() - 1] / v.back();
        q[i] = coef;
        if (coef != 0)
            for (size_t j = 0; j < v.size(); ++j) u[i + j] -= coef * v[j];
    }
    for (const Rat& r : u)
        if (r != 0) return std::nullopt;
    // quotient as homogeneous form of degree deg a - deg b
    int n = a.degree() - b.degree();
    Bin out;
    out.c.assign(n + 1, Rat(0));
    for (int j = 0; j < (int)q.size(); ++j) {
        int i = n - j;  // q[j] multiplies t^j = x^j y^(n-j)
        if (q[j] != 0) {
            if (i < 0 || i > n) return std::nullopt;
            out.c[i] = q[j];
        }
    }
    // exactness of the homogeneous division includes the y-multiplicities
    if (!(out * b == Bin(a))) return std::nullopt;
    return out;
}

std::optional<std::pair<Rat, Bin>> bin_sqrt_up_to_constant(const Bin& t) {
    if (t.is_zero() || t.degree() % 2 != 0) return std::nullopt;
    int ym = ymult(t), xm = xmult(t);
    if (ym % 2 != 0 || xm % 2 != 0) return std::nullopt;
    // strip x^xm y^ym, dehomogenize to u(s), s = x/y; u has nonzero
    // constant and leading coefficients
    int n = t.degree();
    std::vector<Rat> u;
    for (int i = n - xm; i >= ym; --i) u.push_back(t.c[i]);  // u[j]: s^j
    int d = (int)u.size() - 1;  // even
    if (d % 2 != 0) return std::nullopt;
    int k = d / 2;
    Rat lc = u[d];
    std::vector<Rat> a(k + 1, Rat(0));
    a[k] = 1;
    for (int i = 1; i <= k; ++i) {
        // coefficient of s^(d-i) in (sum a_j s^j)^2 equals u[d-i]/lc
        Rat acc = 0;
        for (int j = 1; j < i; ++j) acc += a[k - j] * a[k - i + j];
        a[k - i] = (u[d - i] / lc - acc) / 2;
    }
    // verify the full product
    std::vector<Rat> sq(d + 1, Rat(0));
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) sq[i + j] += a[i] * a[j];
    for (int i = 0; i <= d; ++i)
        if (sq[i] * lc != u[i]) return std::nullopt;
    // rehomogenize: root = x^(xm/2) y^(ym/2) * hom(a), degree n/2
    Bin root;
    root.c.assign(n / 2 + 1, Rat(0));
    for (int j = 0; j <= k; ++j) {
        // a[j] multiplies s^j -> x^(j + xm/2) y^(n/2 - j - xm/2)
        int xe = j + xm / 2;
        root.c[n / 2 - xe] = a[j];
    }
    // canonicalize root: integral, primitive, positive leading coefficient
    Int num_gcd = 0, den_lcm = 1;
    for (const Rat& r : root.c) {
        if (r == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), r.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.get_den().get_mpz_t());
    }
    Rat scale(den_lcm, num_gcd);
    scale.canonicalize();
    root = root * scale;
    for (const Rat& r : root.c) {
        if (r == 0) continue;
        if (r < 0) root = root * Rat(-1);
        break;
    }
    Rat gamma = lc;
    // t = lc * (pre-scale root)^2; after root *= s_eff, gamma = lc / s_eff^2
    // recompute gamma exactly from one nonzero coefficient to avoid sign slips
    Bin rsq = root * root;
    for (size_t i = 0; i < rsq.c.size(); ++i) {
        if (rsq.c[i] != 0) {
            gamma = t.c[i] / rsq.c[i];
            break;
        }
    }
    if (!(root * root * gamma == t)) return std::nullopt;
    return std::make_pair(gamma, root);
}

std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> A,
                                             std::vector<Rat> b) {
    size_t m = A.size();
    size_t n = m ? A[0].size() : 0;
    std::vector<int> pivot_col_of_row(m, -1);
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t pr = row;
        while (pr < m && A[pr][col] == 0) ++pr;
        if (pr == m) continue;
        std::swap(A[pr], A[row]);
        std::swap(b[pr], b[row]);
        Rat inv = 1 / A[row][col];
        for (size_t j = col; j < n; ++j) A[row][j] *= inv;
        b[row] *= inv;
        for (size_t r = 0; r < m; ++r) {
            if (r == row || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (size_t j = col; j < n; ++j) A[r][j] -= f * A[row][j];
            b[r] -= f * b[row];
        }
        pivot_col_of_row[row] = (int)col;
        ++row;
    }
    for (size_t r = row; r < m; ++r)
        if (b[r] != 0) return std::nullopt;
    std::vector<Rat> x(n, Rat(0));
    for (size_t r = 0; r < row; ++r) x[pivot_col_of_row[r]] = b[r];
    return x;
}

IntervalRat IntervalRat::operator+(const IntervalRat& o) const {
    return {lo + o.lo, hi + o.hi};
}
IntervalRat IntervalRat::operator-(const IntervalRat& o) const {
    return {lo - o.hi, hi - o.lo};
}
IntervalRat IntervalRat::operator*(const IntervalRat& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = std::min(std::min(a, b), std::min(c, d));
    Rat mx = std::max(std::max(a, b), std::max(c, d));
    return {mn, mx};
}
int IntervalRat::sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    return 0;
}

IntervalRat interval_sqrt(const Rat& r, int prec_bits) {
    if (r < 0) throw InvalidInput("interval_sqrt of negative value");
    if (r == 0) return IntervalRat::point(Rat(0));
    // s = floor(2^prec sqrt(r)); bounds s/2^prec <= sqrt(r) <= (s+1)/2^prec
    Int scale = Int(1) << (2 * prec_bits);
    Int scaled = (r.get_num() * scale) / r.get_den();
    Int s = isqrt(scaled);
    Int denom = Int(1) << prec_bits;
    Rat lo(s, denom), hi(s + 1, denom);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

}  // namespace ctp
