#include "geotrans/projective.hpp"

#include <cmath>
#include <string>

#include "geotrans/error.hpp"

namespace geotrans
{

namespace
{

double coord_norm(const HermMatrix& X) { return std::sqrt(X.x1 * X.x1 + X.x2 * X.x2 + X.x3 * X.x3 + X.x4 * X.x4); }

template <std::size_t K>
bool signs_exist(const std::array<PB1Point, K>& points)
{
    std::array<HermMatrix, K> Z;
    for (std::size_t i = 0; i < K; ++i) Z[i] = point_to_herm(points[i]);

    std::array<std::array<double, K>, K> g{};
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = i + 1; j < K; ++j) {
            const double tol = 1e-12 * coord_norm(Z[i]) * coord_norm(Z[j]);
            const double ip = herm_inner(Z[i], Z[j]);
            g[i][j] = std::abs(ip) <= tol ? 0.0 : ip;
        }
    }

    // the first sign is fixed, a global flip changes nothing
    for (unsigned mask = 0; mask < (1u << (K - 1)); ++mask) {
        auto eps = [mask](std::size_t i) { return i == 0 ? 1.0 : ((mask >> (i - 1)) & 1u ? -1.0 : 1.0); };
        bool ok = true;
        for (std::size_t i = 0; i < K && ok; ++i) {
            for (std::size_t j = i + 1; j < K && ok; ++j) ok = eps(i) * eps(j) * g[i][j] < 0.0;
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

PB1Point PB1Point::infinity(AlgebraTag tag) noexcept { return {BNum::real(1.0, tag), BNum::real(0.0, tag)}; }

PB1Point PB1Point::affine(const BNum& z) noexcept { return {z, BNum::real(1.0, z.tag)}; }

BNum Moebius::det() const { return a * d - b * c; }

PB1Point apply(const Moebius& m, const PB1Point& p) { return {m.a * p.u + m.b * p.v, m.c * p.u + m.d * p.v}; }

BNum to_affine(const PB1Point& p)
{
    if (!invertible(p.v)) throw Error(ErrorCode::Chart, "point lies outside the affine chart");
    return p.u / p.v;
}

BNum det(const PB1Point& pi, const PB1Point& pj) { return pi.u * pj.v - pj.u * pi.v; }

double herm_inner(const HermMatrix& X, const HermMatrix& Y)
{
    if (!(X.tag == Y.tag)) throw Error(ErrorCode::InvalidOperand, "herm_inner: mixed algebra tags");
    return -X.x1 * Y.x1 + X.x2 * Y.x2 + X.x3 * Y.x3 - X.tag.q * X.x4 * Y.x4;
}

HermMatrix point_to_herm(const PB1Point& p)
{
    if (!(p.u.tag == p.v.tag)) throw Error(ErrorCode::InvalidOperand, "point_to_herm: mixed algebra tags");
    const double uu = sqnorm(p.u);
    const double vv = sqnorm(p.v);
    const BNum vu = p.v * conj(p.u);
    HermMatrix X{(uu + vv) / 2.0, (uu - vv) / 2.0, vu.re, vu.im, p.u.tag};
    if (X.x1 == 0.0 && X.x2 == 0.0 && X.x3 == 0.0 && X.x4 == 0.0) {
        throw Error(ErrorCode::Degenerate, "homogeneous pair spans a zero matrix");
    }
    return X;
}

bool simplex_valid_herm(const std::array<PB1Point, 4>& points) { return signs_exist(points); }

bool triangle_valid_herm(const std::array<PB1Point, 3>& points) { return signs_exist(points); }

Moebius standard_position(const PB1Point& z1, const PB1Point& z2, const PB1Point& z3)
{
    if (!triangle_valid_herm({z1, z2, z3})) throw Error(ErrorCode::NoIdealTriangle, "points do not span an ideal triangle");
    const BNum d31 = det(z3, z1);
    const BNum d32 = det(z3, z2);
    return {z2.v * d31, -(z2.u * d31), z1.v * d32, -(z1.u * d32)};
}

BNum cross_ratio(const PB1Point& z1, const PB1Point& z2, const PB1Point& z3, const PB1Point& z4)
{
    const BNum d21 = det(z2, z1);
    const BNum d31 = det(z3, z1);
    const BNum d32 = det(z3, z2);
    if (!invertible(d21) || !invertible(d31) || !invertible(d32)) {
        throw Error(ErrorCode::UndefinedCrossRatio, "first three points are not pairwise in general position");
    }
    if (!triangle_valid_herm({z1, z2, z3})) throw Error(ErrorCode::NoIdealTriangle, "points do not span an ideal triangle");
    const BNum d41 = det(z4, z1);
    if (!invertible(d41)) throw Error(ErrorCode::Chart, "fourth point maps outside the affine chart");
    return det(z4, z2) * d31 / (d41 * d32);
}

std::tuple<BNum, BNum, BNum> edge_shapes(const BNum& z)
{
    const BNum one_minus = 1.0 - z;
    if (!invertible(z) || !invertible(one_minus)) {
        throw Error(ErrorCode::DegenerateShape, "shape " + std::to_string(z.re) + " + " + std::to_string(z.im) +
                                                    "k has a zero-divisor edge parameter");
    }
    return {z, inv(one_minus), (z + (-1.0)) / z};
}

bool shape_valid(AlgebraTag tag, const BNum& z)
{
    if (!(z.tag == tag)) return false;
    if (!std::isfinite(z.re) || !std::isfinite(z.im)) return false;
    if (tag.q < 0) return !(z.im == 0.0 && (z.re == 0.0 || z.re == 1.0));
    if (tag.q > 0) return sqnorm(z) > 0.0 && sqnorm(1.0 - z) > 0.0;
    return z.re != 0.0 && z.re != 1.0;
}

bool is_positively_oriented(const BNum& z) noexcept { return z.im > 0.0; }

AngleFlag angle_flag(AlgebraTag tag, const BNum& z)
{
    if (tag.q < 0) throw Error(ErrorCode::UnsupportedRegime, "discrete angle flags are defined for q >= 0 only");
    return z.re < 0.0 ? AngleFlag::Pi : AngleFlag::Zero;
}

}  // namespace geotrans
