#pragma once

// Gluing equations over a fixed algebra B_q: hyperbolic (q < 0), half-pipe (q = 0)
// and anti de Sitter (q > 0) structures, regeneration from collapsed solutions,
// transition paths through B_t and tachyon structures.

#include <functional>
#include <string>
#include <vector>

#include "geotrans/kappa_algebra.hpp"
#include "geotrans/real_variety.hpp"
#include "geotrans/triangulation.hpp"

namespace geotrans
{

struct BSolution {
    AlgebraTag tag{};
    std::vector<BNum> z;
    /** @brief max over all equations of max(|re g - 1|, |im g|). */
    double residual{0.0};
    /** @brief im z_j > 0 for every j. */
    bool oriented{false};
};

/** @brief monomial = target, the extra equation that makes the system square. */
struct Constraint {
    ShapeMonomial monomial;
    BNum target;
};

enum class SolveMethod {
    /** @brief complex image for q < 0, split coordinates for q > 0, real part plus tangent for q = 0 */
    Dispatch,
    /** @brief Newton on the 2N real coordinates (re, im) directly */
    Direct
};

struct SolveOptions {
    double tol{1e-10};
    int max_iterations{60};
    SolveMethod method{SolveMethod::Dispatch};
    /** @brief finish with a few direct iterations to polish the (re, im) coordinates */
    bool polish{true};
    bool require_oriented{false};
    bool check_angles{true};
};

/** @brief max over equations of max(|re g - 1|, |im g|). */
double b_residual(const std::vector<ShapeMonomial>& equations, const std::vector<BNum>& z);

BSolution make_bsolution(AlgebraTag tag, const std::vector<ShapeMonomial>& equations, std::vector<BNum> z);

/**
 * @brief Newton solution of the independent gluing equations plus one constraint.
 * Throws NoConvergence with the final residual or InvalidStructure naming the failed check.
 */
BSolution solve_gluing(AlgebraTag tag, const std::vector<ShapeMonomial>& equations, const Constraint& constraint,
                       const BSolution& seed, const SolveOptions& opts = {});

enum class Geometry { H3, AdS, HP };

const char* to_string(Geometry g) noexcept;
Geometry parse_geometry(const std::string& text);

/**
 * @brief Structure near the collapsed solution s in direction v.
 * hp: s + sigma t v.  ads: unsplit of the real points a(t), a(-t) with <v, a - s> = +-t <v, v>.
 * h3: Newton over q = -1 from s + i t v, with the boundary monomial pinned to H(s) + i t dH(s)[v].
 */
BSolution regenerate(const IdealTriangulation& tri, const std::string& boundary, const RealSolution& s,
                     const TangentVector& v, Geometry geometry, double t, const SolveOptions& opts = {});

struct TransitionProblem {
    IdealTriangulation tri;
    /** @brief key into tri.boundary */
    std::string boundary;
    /** @brief target of the boundary monomial as an element of B_t */
    std::function<BNum(double)> target;
    /** @brief approximate half-pipe solution (q = 0) the path starts from */
    BSolution hp_seed;
};

/** @brief H(l) = e^{-k_t} on the two-tetrahedron figure eight complement. */
TransitionProblem fig8_problem();
IdealTriangulation fig8_triangulation();

/** @brief H(eps) = e^{-k_t} on the monodromy triangulation, seeded from the plus Sol solution. */
TransitionProblem bundle_problem(const LRWord& w);

struct TransitionSample {
    double t{0.0};
    BSolution solution;
    std::vector<CliffordNum> clifford;
    BNum boundary_value;
    CliffordNum boundary_clifford;
};

struct TransitionPath {
    std::vector<TransitionSample> samples;
};

/** @brief Solutions at the requested t values, continued outward from t = 0 on each side. */
TransitionPath transition_samples(const TransitionProblem& problem, std::vector<double> ts, const SolveOptions& opts = {});

/** @brief steps equally spaced samples on [t_min, t_max]. */
TransitionPath transition_path(const TransitionProblem& problem, double t_min, double t_max, int steps,
                               const SolveOptions& opts = {});

enum class CompletionKind { CompleteCusp, Cone, Tachyon, InfinitesimalCone, DenseModuli };

const char* to_string(CompletionKind k) noexcept;

struct CompletionReport {
    CompletionKind kind{CompletionKind::DenseModuli};
    BNum H;
    double modulus{0.0};
    /** @brief cone angle (q < 0), boost (q > 0) or infinitesimal angle (q = 0) */
    double angle_or_boost{0.0};
    /** @brief multiple of pi */
    double rotational_part{0.0};
};

CompletionReport classify_completion(const BSolution& sol, const ShapeMonomial& boundary);

struct TachyonStructure {
    RealSolution lambda_sol;
    RealSolution mu_sol;
    double mass{0.0};
    BSolution ads;
    CompletionReport completion;
};

/** @brief Pairing of the plus-branch points with H(eps) = e^mass and e^-mass; mass must be negative. */
TachyonStructure tachyon(const LRWord& w, double mass, const PathOptions& opts = {});

}  // namespace geotrans
