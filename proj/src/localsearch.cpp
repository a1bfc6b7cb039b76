#include "ctp/localsearch.hpp"

#include <climits>

namespace ctp {

namespace {
constexpr long kInfVal = LONG_MAX / 2;
constexpr size_t kFrontierCap = 200000;

long val_or_inf(const Int& x, const Int& p) {
  if (x == 0) return kInfVal;
  Int rem;
  return static_cast<long>(
      mpz_remove(rem.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}
}  // namespace

int qform_pair_index(int i, int j) {
  static const int tab[4][4] = {
      {0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
  return tab[i][j];
}

Int QForm::eval(const std::vector<Int>& z) const {
  Int s = 0;
  for (int i = 0; i < nvars; ++i)
    for (int j = i; j < nvars; ++j) {
      const Int& a = c[qform_pair_index(i, j)];
      if (a != 0) s += a * z[i] * z[j];
    }
  return s;
}

std::array<Int, 4> QForm::grad(const std::vector<Int>& z) const {
  std::array<Int, 4> g{};
  for (int k = 0; k < nvars; ++k) {
    Int s = 0;
    for (int i = 0; i < nvars; ++i) {
      const Int& a = c[qform_pair_index(std::min(i, k), std::max(i, k))];
      if (a == 0) continue;
      if (i == k)
        s += 2 * a * z[k];
      else
        s += a * z[i];
    }
    g[k] = s;
  }
  return g;
}

QForm QForm::diagonal(const std::vector<Int>& d) {
  QForm f;
  f.nvars = static_cast<int>(d.size());
  for (int i = 0; i < f.nvars; ++i) f.c[qform_pair_index(i, i)] = d[i];
  return f;
}

namespace {

struct Node {
  int branch;  // pinned coordinate (== 1); earlier coordinates are = 0 mod p
  std::vector<Int> z;
};

// Exact-value Hensel check at a node. Returns true when certified.
bool certify(const std::vector<QForm>& forms, const std::vector<Int>& z,
             const Int& p, PadicCertificate* out) {
  long value_val = kInfVal;
  for (const auto& f : forms) value_val = std::min(value_val, val_or_inf(f.eval(z), p));
  long minor_val = kInfVal;
  int mi = -1, mj = -1;
  const int n = forms[0].nvars;
  if (forms.size() == 1) {
    auto g = forms[0].grad(z);
    for (int i = 0; i < n; ++i) {
      long v = val_or_inf(g[i], p);
      if (v < minor_val) minor_val = v, mi = i;
    }
  } else {
    auto g1 = forms[0].grad(z), g2 = forms[1].grad(z);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        long v = val_or_inf(g1[i] * g2[j] - g1[j] * g2[i], p);
        if (v < minor_val) minor_val = v, mi = i, mj = j;
      }
  }
  bool ok = (value_val >= kInfVal) ||
            (minor_val < kInfVal && value_val > 2 * minor_val);
  if (ok && out) {
    out->z = z;
    out->value_val = value_val;
    out->minor_val = (minor_val >= kInfVal) ? 0 : minor_val;
    out->minor_i = mi;
    out->minor_j = mj;
  }
  return ok;
}

// Enumeration of starting nodes (level 1) and digit expansions share the
// seed-rotated digit order; the rotation changes which certified node is
// met first, never the search space.
struct Searcher {
  const std::vector<QForm>& forms;
  Int p;
  int n;
  unsigned seed;
  std::vector<PadicCertificate> found;
  size_t want = 1;

  // Certified nodes whose residues agree mod p^2 (p^3 at p = 2, where the
  // square classes are coarser) approximate the same zero for our purposes
  // and are collapsed.
  bool note(const std::vector<Int>& z, long level) {
    PadicCertificate c;
    if (!certify(forms, z, p, &c)) return false;
    c.level = level;
    Int pd = p * p;
    if (p == 2) pd *= p;
    for (const auto& f : found) {
      bool same = true;
      for (size_t i = 0; i < z.size() && same; ++i)
        same = (mod_pos(f.z[i], pd) == mod_pos(c.z[i], pd));
      if (same) return false;
    }
    found.push_back(c);
    return found.size() >= want;
  }

  // Children of `node` at level k: add p^k * digit to every coordinate
  // except the pinned one; keep those vanishing mod p^(k+1).
  bool expand(const Node& node, long k, const Int& pk, const Int& pk1,
              std::vector<Node>& next) {
    std::vector<int> freev;
    for (int i = 0; i < n; ++i)
      if (i != node.branch) freev.push_back(i);
    const int nf = static_cast<int>(freev.size());
    unsigned long pu = p.get_ui();
    std::vector<unsigned long> digit(nf, 0);
    while (true) {
      Node child{node.branch, node.z};
      for (int t = 0; t < nf; ++t) {
        unsigned long d = (digit[t] + seed) % pu;
        if (d) child.z[freev[t]] += pk * static_cast<unsigned long>(d);
      }
      bool zero = true;
      for (const auto& f : forms)
        if (mod_pos(f.eval(child.z), pk1) != 0) {
          zero = false;
          break;
        }
      if (zero) {
        if (note(child.z, k + 1)) return true;
        next.push_back(std::move(child));
      }
      int t = 0;
      while (t < nf && ++digit[t] == pu) digit[t++] = 0;
      if (t == nf) break;
    }
    return false;
  }

  // Returns the verdict; fills `found` with up to `want` certificates.
  LocalVerdict run(long max_level) {
    std::vector<Node> frontier;
    unsigned long pu = p.get_ui();
    // Level 1: projectively normalized residues mod p.
    for (int b = 0; b < n; ++b) {
      std::vector<int> freev;
      for (int i = b + 1; i < n; ++i) freev.push_back(i);
      const int nf = static_cast<int>(freev.size());
      std::vector<unsigned long> digit(nf, 0);
      while (true) {
        Node node{b, std::vector<Int>(n, 0)};
        node.z[b] = 1;
        for (int t = 0; t < nf; ++t)
          node.z[freev[t]] = (digit[t] + seed) % pu;
        bool zero = true;
        for (const auto& f : forms)
          if (mod_pos(f.eval(node.z), p) != 0) {
            zero = false;
            break;
          }
        if (zero) {
          if (note(node.z, 1)) return LocalVerdict::Solvable;
          frontier.push_back(std::move(node));
        }
        if (nf == 0) break;
        int t = 0;
        while (t < nf && ++digit[t] == pu) digit[t++] = 0;
        if (t == nf) break;
      }
    }
    Int pk = p, pk1 = p * p;
    for (long k = 1; k < max_level; ++k) {
      if (frontier.empty()) return LocalVerdict::Unsolvable;
      std::vector<Node> next;
      for (const auto& node : frontier)
        if (expand(node, k, pk, pk1, next)) return LocalVerdict::Solvable;
      // solvability is settled once anything was certified; a partial
      // supply of distinct points is still a valid (shorter) ladder, so cut
      // the search once the frontier balloons instead of grinding on
      if (!found.empty() && next.size() > 4096) return LocalVerdict::Solvable;
      if (next.size() > kFrontierCap)
        throw IndeterminatePrecision("padic_solve: frontier overflow at level " +
                                     std::to_string(k + 1));
      frontier = std::move(next);
      pk = pk1;
      pk1 *= p;
    }
    if (frontier.empty()) return LocalVerdict::Unsolvable;
    if (!found.empty()) return LocalVerdict::Solvable;
    throw IndeterminatePrecision(
        "padic_solve: residue solutions remain uncertified at level " +
        std::to_string(max_level) + " for p = " + p.get_str());
  }
};

}  // namespace

LocalVerdict padic_solve(const std::vector<QForm>& forms, const Int& p,
                         long max_level, PadicCertificate* cert,
                         unsigned seed) {
  if (forms.empty() || max_level < 1)
    throw InvalidInput("padic_solve: empty system or bad level");
  Searcher s{forms, p, forms[0].nvars, seed % static_cast<unsigned>(p.get_ui())};
  LocalVerdict v = s.run(max_level);
  if (v == LocalVerdict::Solvable && cert) *cert = s.found.front();
  return v;
}

std::vector<PadicCertificate> padic_points(const std::vector<QForm>& forms,
                                           const Int& p, long max_level,
                                           size_t want, unsigned seed) {
  Searcher s{forms, p, forms[0].nvars, seed % static_cast<unsigned>(p.get_ui())};
  s.want = want;
  LocalVerdict v = s.run(max_level);
  if (v != LocalVerdict::Solvable)
    throw InvalidInput("padic_points: system has no p-adic point");
  return s.found;
}

void padic_refine(const std::vector<QForm>& forms, const Int& p,
                  PadicCertificate& cert, long target_value_val) {
  if (cert.value_val >= kInfVal) return;  // exact zero, nothing to do
  const long m = cert.minor_val;
  for (int iter = 0; iter < 80; ++iter) {
    if (cert.value_val >= target_value_val) return;
    long K = std::max<long>(cert.level, 2 * (cert.value_val - m) + m + 4);
    Int pK;
    mpz_pow_ui(pK.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(K));
    Int pm;
    mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(m));
    std::vector<Int>& z = cert.z;
    if (forms.size() == 1) {
      Int fv = forms[0].eval(z);
      Int gv = forms[0].grad(z)[cert.minor_i];
      Int delta = div_mod(fv / pm, gv / pm, pK);
      z[cert.minor_i] = mod_pos(z[cert.minor_i] - delta, pK);
    } else {
      auto g1 = forms[0].grad(z), g2 = forms[1].grad(z);
      int i = cert.minor_i, j = cert.minor_j;
      Int det = g1[i] * g2[j] - g1[j] * g2[i];
      Int f1 = forms[0].eval(z), f2 = forms[1].eval(z);
      // delta = adj(M) * f / det, with p^m stripped so the unit divides.
      Int di = (g2[j] * f1 - g1[j] * f2) / pm;
      Int dj = (-g2[i] * f1 + g1[i] * f2) / pm;
      Int du = det / pm;
      z[i] = mod_pos(z[i] - div_mod(di, du, pK), pK);
      z[j] = mod_pos(z[j] - div_mod(dj, du, pK), pK);
    }
    long vv = kInfVal;
    for (const auto& f : forms) vv = std::min(vv, val_or_inf(f.eval(z), p));
    if (vv <= cert.value_val)
      throw InvariantViolation("padic_refine: Newton step failed to improve");
    cert.value_val = vv;
    cert.level = std::max(cert.level, vv >= kInfVal ? K : vv - m);
  }
  throw IndeterminatePrecision("padic_refine: refinement did not converge");
}

}  // namespace ctp
