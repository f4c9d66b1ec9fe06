#pragma once

// Arithmetic in the two-dimensional real algebras B = R + R k with k^2 = q.
//   q < 0 : isomorphic to the complex numbers (hyperbolic shapes)
//   q = 0 : dual numbers (half-pipe shapes)
//   q > 0 : split-complex numbers (anti de Sitter shapes)

#include <complex>

namespace geotrans
{

/** @brief Value of k^2 selecting one algebra of the family. */
struct AlgebraTag {
    double q{-1.0};

    friend bool operator==(AlgebraTag a, AlgebraTag b) noexcept { return a.q == b.q; }

    static constexpr AlgebraTag complex() noexcept { return {-1.0}; }
    static constexpr AlgebraTag dual() noexcept { return {0.0}; }
    static constexpr AlgebraTag split_complex() noexcept { return {1.0}; }
    /** @brief Tag of the transition algebra B_t, k_t^2 = -t|t|. */
    static AlgebraTag transition(double t) noexcept;
};

/** @brief Element re + im k of the algebra selected by tag. */
struct BNum {
    double re{0.0};
    double im{0.0};
    AlgebraTag tag{};

    BNum() = default;
    constexpr BNum(double re_, double im_, AlgebraTag tag_) noexcept : re{re_}, im{im_}, tag{tag_} {}

    static constexpr BNum real(double x, AlgebraTag tag) noexcept { return {x, 0.0, tag}; }
    static constexpr BNum unit(AlgebraTag tag) noexcept { return {0.0, 1.0, tag}; }
};

BNum operator+(const BNum& a, const BNum& b);
BNum operator-(const BNum& a, const BNum& b);
BNum operator*(const BNum& a, const BNum& b);
BNum operator/(const BNum& a, const BNum& b);
BNum operator-(const BNum& a) noexcept;
BNum operator*(double s, const BNum& a) noexcept;
BNum operator+(const BNum& a, double s) noexcept;
BNum operator-(double s, const BNum& a) noexcept;

BNum mul(const BNum& a, const BNum& b);
BNum conj(const BNum& z) noexcept;
/** @brief z * conj(z) = re^2 - q im^2. */
double sqnorm(const BNum& z) noexcept;
/** @brief True when |sqnorm| is above the zero-divisor threshold. */
bool invertible(const BNum& z) noexcept;
/** @brief conj(z) / sqnorm(z); throws NonInvertible on zero divisors. */
BNum inv(const BNum& z);
/** @brief Integer power, negative exponents through inv. */
BNum pow(const BNum& z, int n);

/** @brief exp(k phi) in closed form for each regime. */
BNum exp_imaginary(AlgebraTag tag, double phi);

/** @brief Idempotent coordinates lambda = re + im sqrt(q), mu = re - im sqrt(q) (q > 0 only). */
struct SplitPair {
    double lambda{0.0};
    double mu{0.0};
};

SplitPair split(const BNum& z);
BNum unsplit(const SplitPair& p, AlgebraTag tag);

/** @brief Image under re + im k -> re + i im sqrt(|q|) (q < 0 only). */
std::complex<double> to_complex(const BNum& z);
BNum from_complex(std::complex<double> w, AlgebraTag tag);

/** @brief Element c1 + ci i + ct t + cit it of the algebra <1, i, t | i^2=-1, t^2=1, it=-ti>. */
struct CliffordNum {
    double c1{0.0};
    double ci{0.0};
    double ct{0.0};
    double cit{0.0};
};

CliffordNum operator*(const CliffordNum& a, const CliffordNum& b) noexcept;
double distance(const CliffordNum& a, const CliffordNum& b) noexcept;

/**
 * @brief Embed z in B_t into the Clifford container via
 * k_t = ((1 + t|t|) i + (1 - t|t|) t) / 2.
 */
CliffordNum clifford_embed(double t, const BNum& z);

}  // namespace geotrans
