#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ctp/covering.hpp"
#include "ctp/quadform.hpp"

namespace ctp {

// The function triple f = (f1,f2,f3) on C_d with div(f_j) = 2 k_j where
// k_j = [cone_j cap C] - [cone_inf cap C] realizes x - e_j after the
// covering map, up to squares.  Each f_j is stored as num_j / den_j with
// integer coefficient forms; canonically den_j = L0^2 for the common tangent
// plane L0 of the cone over infinity (rescaled variants may differ).  g with
// g^2 = f1 f2 f3 is stored via G and gscale: g = gscale * G / L0^2.  U6, V6
// certify the product identity
//   num1 num2 num3 - gscale^2 G^2 L0^2 = U6 Q1 + V6 Q2
// as an exact polynomial identity (zeroed by the rescale helpers, which
// deliberately leave the product relation behind).
struct FTriple {
    std::array<Poly4, 3> num;
    std::array<Poly4, 3> den;
    Poly4 G;
    Rat gscale;
    std::array<Poly4, 4> L;  // tangent planes: L[0] = infinity cone, L[j] = T_j cone
    Poly4 U6, V6;
    std::array<std::array<Int, 3>, 4> tangency;  // conic points used
};

// Builds f for the covering, avoiding tangent planes through any point of
// `avoid` (projective integer representatives).  For the trivial covering the
// triple is normalized so that f(theta(R)) = delta(R) exactly as classes.
// Throws ConstructionFailure when a required square root or division does
// not exist (possible only for non-Selmer input or genuine failure).
FTriple construct_f(const CoveringModel& C,
                    const std::vector<std::array<Int, 4>>& avoid = {});

// Criterion helpers: multiply one component by a nonzero rational constant,
// or by the square of a ratio of linear forms, preserving all classes.
FTriple rescale_constant(const FTriple& f, int component, const Rat& c);
FTriple rescale_square(const FTriple& f, int component, const Poly4& lin_num,
                       const Poly4& lin_den);

// Certified evaluation of all three components at a local point as classes
// in Q_v*/squares.  May refine the point's certificate in place.  Returns
// nullopt when the point cannot be certified away from the divisor at the
// target precision (caller should move to another point).
std::optional<AlgebraClass> evaluate_f(const CoveringModel& C, const FTriple& f,
                                       LocalPoint& P, long max_precision = 0);

// Exact evaluation at a rational covering point (all z integral, z not on
// any divisor plane): the global class triple.
AlgebraClass evaluate_f_exact(const FTriple& f, const std::array<Int, 4>& z);

// Deterministic certified local point whose f-values are all defined:
// walks the local_point ladder and returns the (choice+1)-th success.
std::pair<LocalPoint, AlgebraClass> evaluate_at_place(const CoveringModel& C,
                                                      const FTriple& f,
                                                      const Place& v,
                                                      long precision,
                                                      unsigned seed,
                                                      int choice = 0);

// Re-checks the symbolic certificates of f: the product identity via
// U6, V6 and the tangency data.  Throws InvariantViolation on failure.
void verify_f_properties(const CoveringModel& C, const FTriple& f);

// The second 2-covering as a plain-text system: Q1, Q2, and
// u_j^2 (den f_j) = (num f_j) for j = 1,2,3, in variables z0..z3, u1..u3.
std::vector<std::string> second_covering(const CoveringModel& C,
                                         const FTriple& f);

}  // namespace ctp
