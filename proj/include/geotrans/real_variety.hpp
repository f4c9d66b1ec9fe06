#pragma once

// Real deformation variety V+ of a punctured torus bundle: collapsed solutions
// with every diagonal-exchange shape z_j > 0.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geotrans/triangulation.hpp"

namespace geotrans
{

enum class Branch { Plus, Minus };

/** @brief case1: x_1 < 0, case2: y_1 < 0. */
enum class SignCase { Case1, Case2, None };

const char* to_string(Branch b) noexcept;
const char* to_string(SignCase c) noexcept;
Branch parse_branch(const std::string& text);

struct RealSolution {
    std::string word;
    Branch branch{Branch::Plus};
    std::vector<double> z;
    SignCase sign_case{SignCase::None};
    double residual{0.0};
    double H_eps{1.0};
};

struct TangentVector {
    /** @brief dz_j/ds, all entries positive, largest entry 1. */
    std::vector<double> v;
};

struct LogJacobian {
    /** @brief d log g_i / d log z_j, rows in equation order. */
    Eigen::MatrixXd z_basis;
    /** @brief Rows indexed by the tet whose negative slot is squared in that equation, columns by xi_j. */
    Eigen::MatrixXd xi_basis;
    /** @brief xi_basis row r comes from equation xi_rows[r]. */
    std::vector<int> xi_rows;
    RealSolution point;
};

/** @brief max_i |g_i(z) - 1| over every equation. */
double gluing_residual(const std::vector<ShapeMonomial>& equations, const std::vector<double>& z);

/** @brief Classifies the sign pattern of (x_j, y_j); None unless it matches case 1 or case 2 on every tet. */
SignCase sign_case_of(const IdealTriangulation& t, const std::vector<double>& z);

RealSolution sol_solution(const LRWord& w, Branch branch);

/**
 * @brief Every edge equation has exactly two negative factors, counted with multiplicity,
 * at a point that solves the equations to tol.
 */
bool angle_condition(const IdealTriangulation& t, const std::vector<double>& z, double tol = 1e-8);
bool angle_condition(const IdealTriangulation& t, const RealSolution& s, double tol = 1e-8);

LogJacobian log_jacobian(const LRWord& w, const RealSolution& s);

TangentVector kernel_tangent(const LogJacobian& J);

/** @brief Kernel vector of the xi-basis matrix, sign fixed so the sum is positive, largest |entry| 1. */
Eigen::VectorXd xi_kernel(const LogJacobian& J);

struct PathOptions {
    double initial_step{0.05};
    double max_step{0.25};
    double min_step{1e-12};
    int max_steps{20000};
    double newton_tol{1e-13};
    int newton_iterations{30};
    double residual_tol{1e-10};
};

/** @brief Continuation from the Sol solution to H(eps) = target_H, parameterized by log H(eps). */
RealSolution follow_path(const LRWord& w, Branch branch, double target_H, const PathOptions& opts = {});

/** @brief Same continuation returning every accepted point, starting with the Sol solution. */
std::vector<RealSolution> trace_path(const LRWord& w, Branch branch, double target_H, const PathOptions& opts = {});

/** @brief Continuation from an arbitrary point of V+ along the real variety; used by regeneration. */
std::vector<RealSolution> trace_path_from(const LRWord& w, const RealSolution& start, double target_H,
                                          const PathOptions& opts = {});

}  // namespace geotrans
