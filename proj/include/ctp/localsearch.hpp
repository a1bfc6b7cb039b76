#pragma once
// Certified p-adic solvability for systems of 1 or 2 homogeneous integer
// quadratic forms in 3 or 4 variables.
//
// Method: breadth-first refinement over projectively normalized residue
// vectors (the first p-adic unit coordinate is pinned to 1, coordinates
// before it are divisible by p). Every node carries an exact integer
// representative, so Hensel certificates are checked on true values:
//   single form:  v_p(f(z)) > 2 * min_i v_p(df/dz_i(z))
//   two forms:    min_k v_p(f_k(z)) > 2 * min over 2x2 Jacobian minors M
//                 of v_p(det M)
// (multivariable Hensel lemma). A certified node proves solvability; an
// exhausted frontier proves unsolvability, because a primitive p-adic zero
// would survive normalization and reduction at every level.

#include <array>
#include <optional>
#include <vector>

#include "ctp/arith.hpp"

namespace ctp {

// Index of the coefficient of z_i z_j (i <= j) among the 10 degree-2
// monomials in 4 variables.
int qform_pair_index(int i, int j);

struct QForm {
  int nvars = 4;
  std::array<Int, 10> c{};  // c[qform_pair_index(i,j)] * z_i z_j

  Int eval(const std::vector<Int>& z) const;
  std::array<Int, 4> grad(const std::vector<Int>& z) const;
  static QForm diagonal(const std::vector<Int>& d);  // sum d_i z_i^2
};

enum class LocalVerdict { Solvable, Unsolvable };

struct PadicCertificate {
  std::vector<Int> z;    // representative; z = zeta mod p^(value_val - minor_val)
  long level = 0;        // residue digits searched
  long minor_val = 0;    // v_p of the certifying gradient / Jacobian minor
  long value_val = 0;    // min v_p of the form values (LONG_MAX/2 for exact zero)
  int minor_i = -1, minor_j = -1;  // Newton coordinates (single form: minor_i)
};

// Decides existence of a primitive zero of the system over Z_p.
// Throws IndeterminatePrecision if max_level is exhausted while
// uncertified residue solutions remain.
LocalVerdict padic_solve(const std::vector<QForm>& forms, const Int& p,
                         long max_level, PadicCertificate* cert,
                         unsigned seed = 0);

// Enumerates up to `want` distinct certified zeros (deterministic order,
// shifted by seed). Used where several independent local points are needed.
std::vector<PadicCertificate> padic_points(const std::vector<QForm>& forms,
                                           const Int& p, long max_level,
                                           size_t want, unsigned seed);

// Newton refinement: raises value_val to at least `target_value_val`
// (exact arithmetic; the approximated true zero is unchanged).
void padic_refine(const std::vector<QForm>& forms, const Int& p,
                  PadicCertificate& cert, long target_value_val);

}  // namespace ctp
