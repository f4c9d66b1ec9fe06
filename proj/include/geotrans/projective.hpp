#pragma once

// Hermitian model Herm(2,B) of the space X, its ideal boundary P^1 B and
// the cross-ratio / validity tests for ideal simplices.

#include <array>
#include <tuple>

#include "geotrans/kappa_algebra.hpp"

namespace geotrans
{

/** @brief [[x1+x2, x3-x4 k], [x3+x4 k, x1-x2]]. */
struct HermMatrix {
    double x1{0.0};
    double x2{0.0};
    double x3{0.0};
    double x4{0.0};
    AlgebraTag tag{};
};

/** @brief Homogeneous point [u:v] of the projective line over B. */
struct PB1Point {
    BNum u;
    BNum v;

    static PB1Point infinity(AlgebraTag tag) noexcept;
    static PB1Point affine(const BNum& z) noexcept;

    AlgebraTag tag() const noexcept { return u.tag; }
};

struct Moebius {
    BNum a;
    BNum b;
    BNum c;
    BNum d;

    BNum det() const;
};

PB1Point apply(const Moebius& m, const PB1Point& p);

/** @brief Affine coordinate u/v; throws Chart when v is a zero divisor. */
BNum to_affine(const PB1Point& p);

/** @brief u_i v_j - u_j v_i. */
BNum det(const PB1Point& pi, const PB1Point& pj);

/** @brief <X,Y> = -x1 y1 + x2 y2 + x3 y3 - q x4 y4. */
double herm_inner(const HermMatrix& X, const HermMatrix& Y);

/** @brief The rank-one matrix [u v]^T [u v]^*. */
HermMatrix point_to_herm(const PB1Point& p);

/** @brief True iff some choice of signs makes every pairwise inner product negative. */
bool simplex_valid_herm(const std::array<PB1Point, 4>& points);

/** @brief Same sign test on an ideal triangle. */
bool triangle_valid_herm(const std::array<PB1Point, 3>& points);

/** @brief A with A z1 = inf, A z2 = 0, A z3 = 1. */
Moebius standard_position(const PB1Point& z1, const PB1Point& z2, const PB1Point& z3);

/** @brief (z1,z2;z3,z4) = A z4 for A = standard_position(z1,z2,z3). */
BNum cross_ratio(const PB1Point& z1, const PB1Point& z2, const PB1Point& z3, const PB1Point& z4);

/** @brief (z, 1/(1-z), (z-1)/z). */
std::tuple<BNum, BNum, BNum> edge_shapes(const BNum& z);

bool shape_valid(AlgebraTag tag, const BNum& z);
bool is_positively_oriented(const BNum& z) noexcept;

enum class AngleFlag { Zero, Pi };

/** @brief Discrete dihedral angle of a shape for q >= 0. */
AngleFlag angle_flag(AlgebraTag tag, const BNum& z);

}  // namespace geotrans
