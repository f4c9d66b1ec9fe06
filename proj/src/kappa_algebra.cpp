#include "geotrans/kappa_algebra.hpp"

#include <cmath>
#include <string>

#include "geotrans/error.hpp"

namespace geotrans
{

namespace
{

void require_same_tag(const BNum& a, const BNum& b)
{
    if (!(a.tag == b.tag)) {
        throw Error(ErrorCode::InvalidOperand,
                    "mixed algebra tags q=" + std::to_string(a.tag.q) + " and q=" + std::to_string(b.tag.q));
    }
}

}  // namespace

AlgebraTag AlgebraTag::transition(double t) noexcept { return {-t * std::abs(t)}; }

BNum operator+(const BNum& a, const BNum& b)
{
    require_same_tag(a, b);
    return {a.re + b.re, a.im + b.im, a.tag};
}

BNum operator-(const BNum& a, const BNum& b)
{
    require_same_tag(a, b);
    return {a.re - b.re, a.im - b.im, a.tag};
}

BNum operator*(const BNum& a, const BNum& b) { return mul(a, b); }

BNum operator/(const BNum& a, const BNum& b) { return mul(a, inv(b)); }

BNum operator-(const BNum& a) noexcept { return {-a.re, -a.im, a.tag}; }

BNum operator*(double s, const BNum& a) noexcept { return {s * a.re, s * a.im, a.tag}; }

BNum operator+(const BNum& a, double s) noexcept { return {a.re + s, a.im, a.tag}; }

BNum operator-(double s, const BNum& a) noexcept { return {s - a.re, -a.im, a.tag}; }

BNum mul(const BNum& a, const BNum& b)
{
    require_same_tag(a, b);
    const double q = a.tag.q;
    return {a.re * b.re + q * a.im * b.im, a.re * b.im + a.im * b.re, a.tag};
}

BNum conj(const BNum& z) noexcept { return {z.re, -z.im, z.tag}; }

double sqnorm(const BNum& z) noexcept { return z.re * z.re - z.tag.q * z.im * z.im; }

bool invertible(const BNum& z) noexcept
{
    const double q = z.tag.q;
    const double scale = z.re * z.re + q * q * z.im * z.im + 1.0;
    return std::abs(sqnorm(z)) >= 1e-13 * scale;
}

BNum inv(const BNum& z)
{
    if (!invertible(z)) {
        throw Error(ErrorCode::NonInvertible, "zero divisor " + std::to_string(z.re) + " + " +
                                                  std::to_string(z.im) + "k (q=" + std::to_string(z.tag.q) + ")");
    }
    const double n = sqnorm(z);
    return {z.re / n, -z.im / n, z.tag};
}

BNum pow(const BNum& z, int n)
{
    BNum base = n < 0 ? inv(z) : z;
    unsigned k = n < 0 ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
    BNum r = BNum::real(1.0, z.tag);
    while (k) {
        if (k & 1u) r = mul(r, base);
        base = mul(base, base);
        k >>= 1u;
    }
    return r;
}

BNum exp_imaginary(AlgebraTag tag, double phi)
{
    const double q = tag.q;
    if (q < 0) {
        const double r = std::sqrt(-q);
        return {std::cos(r * phi), std::sin(r * phi) / r, tag};
    }
    if (q == 0) return {1.0, phi, tag};
    const double r = std::sqrt(q);
    return {std::cosh(r * phi), std::sinh(r * phi) / r, tag};
}

SplitPair split(const BNum& z)
{
    if (!(z.tag.q > 0)) {
        throw Error(ErrorCode::UnsupportedRegime, "split coordinates need q > 0, got q=" + std::to_string(z.tag.q));
    }
    const double r = std::sqrt(z.tag.q);
    return {z.re + r * z.im, z.re - r * z.im};
}

BNum unsplit(const SplitPair& p, AlgebraTag tag)
{
    if (!(tag.q > 0)) {
        throw Error(ErrorCode::UnsupportedRegime, "split coordinates need q > 0, got q=" + std::to_string(tag.q));
    }
    const double r = std::sqrt(tag.q);
    return {(p.lambda + p.mu) / 2.0, (p.lambda - p.mu) / (2.0 * r), tag};
}

std::complex<double> to_complex(const BNum& z)
{
    if (!(z.tag.q < 0)) {
        throw Error(ErrorCode::UnsupportedRegime, "complex image needs q < 0, got q=" + std::to_string(z.tag.q));
    }
    return {z.re, z.im * std::sqrt(-z.tag.q)};
}

BNum from_complex(std::complex<double> w, AlgebraTag tag)
{
    if (!(tag.q < 0)) {
        throw Error(ErrorCode::UnsupportedRegime, "complex image needs q < 0, got q=" + std::to_string(tag.q));
    }
    return {w.real(), w.imag() / std::sqrt(-tag.q), tag};
}

CliffordNum operator*(const CliffordNum& a, const CliffordNum& b) noexcept
{
    // i*t = it, t*i = -it, i*it = -t, it*i = t, t*it = -i, it*t = i, it*it = 1
    return {a.c1 * b.c1 - a.ci * b.ci + a.ct * b.ct + a.cit * b.cit,
            a.c1 * b.ci + a.ci * b.c1 - a.ct * b.cit + a.cit * b.ct,
            a.c1 * b.ct + a.ct * b.c1 - a.ci * b.cit + a.cit * b.ci,
            a.c1 * b.cit + a.cit * b.c1 + a.ci * b.ct - a.ct * b.ci};
}

double distance(const CliffordNum& a, const CliffordNum& b) noexcept
{
    return std::hypot(std::hypot(a.c1 - b.c1, a.ci - b.ci), std::hypot(a.ct - b.ct, a.cit - b.cit));
}

CliffordNum clifford_embed(double t, const BNum& z)
{
    if (!(z.tag == AlgebraTag::transition(t))) {
        throw Error(ErrorCode::InvalidOperand, "clifford_embed: tag q=" + std::to_string(z.tag.q) +
                                                   " does not match t=" + std::to_string(t));
    }
    const double s = t * std::abs(t);
    return {z.re, z.im * (1.0 + s) / 2.0, z.im * (1.0 - s) / 2.0, 0.0};
}

}  // namespace geotrans
