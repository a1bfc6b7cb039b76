#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ctp/arith.hpp"
#include "ctp/quadform.hpp"

namespace ctp {

// Primitive integer zero of a0 x0^2 + a1 x1^2 + a2 x2^2 (all a_i nonzero),
// or nothing when the conic has no rational point.  Lagrange descent: reduce
// the largest coefficient via t^2 = -a0 a1 mod a2, brute force at the base.
// Deterministic; the returned solution is verified exactly.
std::optional<std::array<Int, 3>> solve_conic(const std::array<Int, 3>& a);

// Parametrization of the conic from a rational point: beta(xi,eta) sweeps the
// residual intersection of the line through `base` with direction in the
// plane spanned by two coordinate vectors.  All rational points arise exactly
// once from coprime (xi : eta).
struct ConicParam {
    std::array<Int, 3> a;     // the diagonal form
    std::array<Int, 3> base;  // the rational point used
    std::array<Bin, 3> beta;  // three integral binary quadratics
};
ConicParam conic_parametrize(const std::array<Int, 3>& a,
                             const std::array<Int, 3>& pt);

// Coprime parameter pairs (xi, eta) in height order, eta >= 0 and xi = 1
// when eta = 0.  Used everywhere a deterministic scan of conic points or
// tangency choices is required.
std::vector<std::pair<long, long>> parameter_ladder(size_t count);

// First `count` points of the parametrized conic in ladder order, each
// primitive with positive first nonzero coordinate.
std::vector<std::array<Int, 3>> conic_points(const ConicParam& par, size_t count);

// Tangent line of the diagonal conic at a point of it: the polar form
// sum_i a_i pt_i x_i, divided by coefficient content.
std::array<Int, 3> conic_tangent(const std::array<Int, 3>& a,
                                 const std::array<Int, 3>& pt);

}  // namespace ctp
