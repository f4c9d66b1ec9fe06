#pragma once

// Monodromy triangulations of punctured torus bundles and their gluing equations.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geotrans/kappa_algebra.hpp"

namespace geotrans
{

/** @brief Row-major integer 2x2 matrix (a, b, c, d). */
using IntMatrix = std::array<std::int64_t, 4>;

IntMatrix multiply(const IntMatrix& m, const IntMatrix& n) noexcept;
IntMatrix parse_matrix(const std::string& text);

/** @brief Cyclic word in R = [[1,1],[0,1]] and L = [[1,0],[1,1]], kept in canonical rotation. */
class LRWord
{
public:
    /** @brief Validates and canonicalizes; throws InvalidWord. */
    explicit LRWord(const std::string& letters);

    const std::string& letters() const noexcept { return letters_; }
    int size() const noexcept { return static_cast<int>(letters_.size()); }
    /** @brief Letter at a cyclic 1-based position. */
    char letter(int j) const noexcept;

    /** @brief Lengths s_1..s_K of the maximal runs, alternating and starting with R. */
    const std::vector<int>& blocks() const noexcept { return blocks_; }
    /** @brief Hinge indices M_p = 1 + s_1 + ... + s_{p-1}, p = 1..K+1. */
    std::vector<int> hinges() const;

    IntMatrix matrix() const noexcept;
    /** @brief Product of the first k letters. */
    IntMatrix prefix_matrix(int k) const noexcept;

    /** @brief Lexicographically least rotation that starts with R and ends with L. */
    static std::string canonical_rotation(const std::string& letters);

    friend bool operator==(const LRWord& a, const LRWord& b) { return a.letters_ == b.letters_; }

private:
    std::string letters_;
    std::vector<int> blocks_;
};

LRWord factor_anosov(const IntMatrix& m);

enum class Slot { Z, X, Y };

char slot_char(Slot s) noexcept;

/** @brief Zero-based tetrahedron index and edge slot. */
using SlotKey = std::pair<int, Slot>;

/** @brief sign * prod (slot value)^exponent with x = (z-1)/z and y = 1/(1-z). */
struct ShapeMonomial {
    int sign{1};
    std::map<SlotKey, int> exponents;

    void multiply_slot(int tet, Slot slot, int e);
    ShapeMonomial inverse() const;
};

ShapeMonomial operator*(const ShapeMonomial& a, const ShapeMonomial& b);
ShapeMonomial pow(const ShapeMonomial& m, int n);

/**
 * @brief The same monomial written in z alone: sign * prod z_j^p_j (1-z_j)^r_j,
 * using z^a x^b y^c = (-1)^b z^(a-b) (1-z)^(b-c).
 */
struct ReducedMonomial {
    struct Factor {
        int tet;
        int p;
        int r;
    };
    int sign{1};
    std::vector<Factor> factors;

    bool trivial() const noexcept { return sign == 1 && factors.empty(); }
};

ReducedMonomial reduce(const ShapeMonomial& m);

template <class S>
S ipow(S base, int n)
{
    const S one(1.0);
    if (n < 0) {
        base = one / base;
        n = -n;
    }
    S r = one;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

/** @brief Value of a reduced monomial at shapes z, for S = double or std::complex<double>. */
template <class S>
S evaluate_reduced(const ReducedMonomial& m, const std::vector<S>& z)
{
    S v = S(static_cast<double>(m.sign));
    for (const auto& f : m.factors) {
        const S zj = z[static_cast<std::size_t>(f.tet)];
        if (f.p) v = v * ipow(zj, f.p);
        if (f.r) v = v * ipow(S(1.0) - zj, f.r);
    }
    return v;
}

/** @brief d log m / d z_j = p_j / z_j - r_j / (1 - z_j); accumulated into grad. */
template <class S>
void dlog_reduced(const ReducedMonomial& m, const std::vector<S>& z, std::vector<S>& grad)
{
    grad.assign(z.size(), S(0.0));
    for (const auto& f : m.factors) {
        const S zj = z[static_cast<std::size_t>(f.tet)];
        grad[static_cast<std::size_t>(f.tet)] += S(static_cast<double>(f.p)) / zj - S(static_cast<double>(f.r)) / (S(1.0) - zj);
    }
}

enum class TetLabel { RR, LL, RLHinge, LRHinge };

const char* to_string(TetLabel label) noexcept;

/** @brief Tetrahedra plus one consistency monomial per edge class and named boundary monomials. */
struct IdealTriangulation {
    std::string word;  // empty for triangulations loaded from an equation file
    int n_tets{0};
    std::vector<TetLabel> labels;
    std::vector<ShapeMonomial> equations;
    std::map<std::string, ShapeMonomial> boundary;

    /** @brief Equations used by square solvers: the last one is dropped when the product is formally 1. */
    std::vector<ShapeMonomial> independent_equations() const;
};

/** @brief True when the product of all equations reduces to the constant 1 in z. */
bool formally_trivial_product(const std::vector<ShapeMonomial>& equations);

IdealTriangulation build_triangulation(const LRWord& w);
std::vector<ShapeMonomial> gluing_equations(const LRWord& w);

struct BoundaryMonomials {
    ShapeMonomial H_eps;
    /** @brief H(eps)^(N/2) as a product of negative powers, valid in sign case 1. */
    ShapeMonomial product_form_case1;
    /** @brief The same for sign case 2, obtained from the reversed word. */
    ShapeMonomial product_form_case2;
};

BoundaryMonomials boundary_monomials(const LRWord& w);

/** @brief sign * prod slot values; throws Evaluation naming the tet and slot of a failed inverse. */
BNum evaluate_monomial(const ShapeMonomial& m, const std::vector<BNum>& shapes);
double evaluate_monomial(const ShapeMonomial& m, const std::vector<double>& shapes);

}  // namespace geotrans
