#include "geotrans/real_variety.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geotrans/error.hpp"
#include "geotrans/projective.hpp"

namespace geotrans
{

namespace
{

std::vector<ReducedMonomial> reduce_all(const std::vector<ShapeMonomial>& eqs)
{
    std::vector<ReducedMonomial> out;
    out.reserve(eqs.size());
    for (const auto& e : eqs) out.push_back(reduce(e));
    return out;
}

/** d log m / d log z_j */
Eigen::RowVectorXd dlog_row(const ReducedMonomial& m, const std::vector<double>& z)
{
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(z.size()));
    for (const auto& f : m.factors) {
        const double zj = z[static_cast<std::size_t>(f.tet)];
        row(f.tet) += f.p - f.r * zj / (1.0 - zj);
    }
    return row;
}

double slot_value(double z, Slot s)
{
    switch (s) {
        case Slot::Z: return z;
        case Slot::X: return (z - 1.0) / z;
        case Slot::Y: return 1.0 / (1.0 - z);
    }
    return z;
}

struct PathSystem {
    std::vector<ReducedMonomial> eqs;  // N-1 independent equations
    ReducedMonomial H;
    IdealTriangulation tri;
    std::vector<ShapeMonomial> all_eqs;
};

PathSystem make_system(const LRWord& w)
{
    PathSystem ps;
    ps.tri = build_triangulation(w);
    ps.all_eqs = ps.tri.equations;
    ps.eqs = reduce_all(ps.tri.independent_equations());
    ps.H = reduce(ps.tri.boundary.at("eps"));
    return ps;
}

Eigen::MatrixXd eq_jacobian(const PathSystem& ps, const std::vector<double>& z)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    Eigen::MatrixXd J(static_cast<Eigen::Index>(ps.eqs.size()), n);
    for (std::size_t i = 0; i < ps.eqs.size(); ++i) J.row(static_cast<Eigen::Index>(i)) = dlog_row(ps.eqs[i], z);
    return J;
}

bool log_values(const PathSystem& ps, const std::vector<double>& z, double log_target, Eigen::VectorXd& F)
{
    const auto m = static_cast<Eigen::Index>(ps.eqs.size());
    F.resize(m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double g = evaluate_reduced(ps.eqs[static_cast<std::size_t>(i)], z);
        if (!(g > 0.0) || !std::isfinite(g)) return false;
        F(i) = std::log(g);
    }
    const double h = evaluate_reduced(ps.H, z);
    if (!(h > 0.0) || !std::isfinite(h)) return false;
    F(m) = std::log(h) - log_target;
    return true;
}

/** Newton in log z on the square system {log g_i = 0, log H = log_target}. */
bool correct(const PathSystem& ps, std::vector<double>& z, double log_target, const PathOptions& opts)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index j = 0; j < n; ++j) y(j) = std::log(z[static_cast<std::size_t>(j)]);
    Eigen::VectorXd F;
    for (int it = 0; it <= opts.newton_iterations; ++it) {
        for (Eigen::Index j = 0; j < n; ++j) z[static_cast<std::size_t>(j)] = std::exp(y(j));
        if (!log_values(ps, z, log_target, F)) return false;
        if (F.cwiseAbs().maxCoeff() <= opts.newton_tol) return true;
        if (it == opts.newton_iterations) break;
        Eigen::MatrixXd J(n, n);
        J.topRows(n - 1) = eq_jacobian(ps, z);
        J.row(n - 1) = dlog_row(ps.H, z);
        const Eigen::VectorXd dy = J.fullPivLu().solve(-F);
        if (!dy.allFinite()) return false;
        y += dy;
    }
    return false;
}

RealSolution make_solution(const LRWord& w, Branch branch, const PathSystem& ps, const std::vector<double>& z)
{
    RealSolution s;
    s.word = w.letters();
    s.branch = branch;
    s.z = z;
    s.sign_case = sign_case_of(ps.tri, z);
    s.residual = gluing_residual(ps.all_eqs, z);
    s.H_eps = evaluate_monomial(ps.tri.boundary.at("eps"), z);
    return s;
}

}  // namespace

const char* to_string(Branch b) noexcept { return b == Branch::Plus ? "plus" : "minus"; }

const char* to_string(SignCase c) noexcept
{
    switch (c) {
        case SignCase::Case1: return "case1";
        case SignCase::Case2: return "case2";
        case SignCase::None: return "none";
    }
    return "none";
}

Branch parse_branch(const std::string& text)
{
    if (text == "plus") return Branch::Plus;
    if (text == "minus") return Branch::Minus;
    throw Error(ErrorCode::Usage, "branch must be 'plus' or 'minus', got '" + text + "'");
}

double gluing_residual(const std::vector<ShapeMonomial>& equations, const std::vector<double>& z)
{
    double r = 0.0;
    for (const auto& e : equations) r = std::max(r, std::abs(evaluate_monomial(e, z) - 1.0));
    return r;
}

SignCase sign_case_of(const IdealTriangulation& t, const std::vector<double>& z)
{
    if (t.labels.size() != z.size()) return SignCase::None;
    bool case1 = true;
    bool case2 = true;
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(z[j] > 0.0) || z[j] == 1.0) return SignCase::None;
        const bool x_neg = (z[j] - 1.0) / z[j] < 0.0;
        const TetLabel lab = t.labels[j];
        // y < 0 on RR and x < 0 on LL in both cases; the hinges decide the case
        const bool x_case1 = lab == TetLabel::LRHinge || lab == TetLabel::LL;
        const bool x_case2 = lab == TetLabel::RLHinge || lab == TetLabel::LL;
        if (x_neg != x_case1) case1 = false;
        if (x_neg != x_case2) case2 = false;
    }
    if (case1) return SignCase::Case1;
    if (case2) return SignCase::Case2;
    return SignCase::None;
}

RealSolution sol_solution(const LRWord& w, Branch branch)
{
    const IntMatrix W = w.matrix();
    const double a = static_cast<double>(W[0]), b = static_cast<double>(W[1]);
    const double tr = static_cast<double>(W[0] + W[3]);
    if (std::abs(tr) <= 2.0) throw Error(ErrorCode::NotAnosov, "word matrix is not Anosov");
    const double root = std::sqrt(tr * tr - 4.0);
    const double lp = (tr + root) / 2.0;
    const double lm = (tr - root) / 2.0;

    Eigen::Matrix2d basis;
    basis << b, -b, lp - a, -(lm - a);
    const Eigen::Matrix2d to_eigen = basis.inverse();
    const Eigen::Index idx = branch == Branch::Plus ? 0 : 1;

    const int N = w.size();
    std::vector<double> z(static_cast<std::size_t>(N));
    for (int j = 1; j <= N; ++j) {
        const IntMatrix P = w.prefix_matrix(j - 1);
        const Eigen::Vector2d e1(static_cast<double>(P[0]), static_cast<double>(P[2]));
        const Eigen::Vector2d e2(static_cast<double>(P[1]), static_cast<double>(P[3]));
        const double A = (to_eigen * e1)(idx);
        const double B = (to_eigen * e2)(idx);
        z[static_cast<std::size_t>(j - 1)] = (B / A) * (B / A);
    }
    // rounding in long words accumulates, so polish with H(eps) held fixed
    const PathSystem ps = make_system(w);
    std::vector<double> polished = z;
    if (correct(ps, polished, std::log(evaluate_reduced(ps.H, z)), PathOptions{}) &&
        gluing_residual(ps.all_eqs, polished) <= gluing_residual(ps.all_eqs, z)) {
        z = polished;
    }
    return make_solution(w, branch, ps, z);
}

bool angle_condition(const IdealTriangulation& t, const std::vector<double>& z, double tol)
{
    if (static_cast<int>(z.size()) != t.n_tets) return false;
    for (double zj : z) {
        if (!std::isfinite(zj) || zj == 0.0 || zj == 1.0) return false;
    }
    for (const auto& eq : t.equations) {
        int negatives = 0;
        for (const auto& [key, e] : eq.exponents) {
            if (slot_value(z[static_cast<std::size_t>(key.first)], key.second) < 0.0) negatives += std::abs(e);
        }
        if (negatives != 2) return false;
        if (std::abs(evaluate_monomial(eq, z) - 1.0) > tol) return false;
    }
    return true;
}

bool angle_condition(const IdealTriangulation& t, const RealSolution& s, double tol)
{
    return angle_condition(t, s.z, tol);
}

LogJacobian log_jacobian(const LRWord& w, const RealSolution& s)
{
    const int N = w.size();
    if (static_cast<int>(s.z.size()) != N) throw Error(ErrorCode::InvalidOperand, "solution does not match the word");
    for (double zj : s.z) {
        if (!std::isfinite(zj) || std::abs(zj) < 1e-14 || std::abs(zj - 1.0) < 1e-14) {
            throw Error(ErrorCode::SingularPoint, "a shape sits at 0 or 1");
        }
        if (zj < 0.0) throw Error(ErrorCode::SingularPoint, "a shape is negative, the point is outside V+");
    }

    const std::vector<ShapeMonomial> eqs = gluing_equations(w);
    LogJacobian J;
    J.point = s;
    J.z_basis = Eigen::MatrixXd::Zero(N, N);
    J.xi_basis = Eigen::MatrixXd::Zero(N, N);
    J.xi_rows.assign(static_cast<std::size_t>(N), -1);

    for (int i = 0; i < N; ++i) {
        J.z_basis.row(i) = dlog_row(reduce(eqs[static_cast<std::size_t>(i)]), s.z);

        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(N);
        int diag = -1;
        for (const auto& [key, e] : eqs[static_cast<std::size_t>(i)].exponents) {
            const auto [tet, slot] = key;
            const double zt = s.z[static_cast<std::size_t>(tet)];
            const bool x_neg = zt < 1.0;
            double coef = 0.0;
            if (x_neg) {
                const double c = zt, t = 1.0 - zt;
                coef = slot == Slot::X ? 1.0 : (slot == Slot::Y ? -c : -t);
            } else {
                const double c = 1.0 / zt, t = (zt - 1.0) / zt;
                coef = slot == Slot::X ? -c : (slot == Slot::Y ? 1.0 : -t);
            }
            row(tet) += e * coef;
            const bool negative_slot = (slot == Slot::X && x_neg) || (slot == Slot::Y && !x_neg);
            if (e == 2 && negative_slot) diag = tet;
        }
        if (diag < 0 || J.xi_rows[static_cast<std::size_t>(diag)] >= 0) {
            throw Error(ErrorCode::SingularPoint, "sign pattern does not single out one squared negative slot per equation");
        }
        J.xi_rows[static_cast<std::size_t>(diag)] = i;
        J.xi_basis.row(diag) = row;
    }
    return J;
}

TangentVector kernel_tangent(const LogJacobian& J)
{
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.z_basis, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index n = sv.size();
    if (n < 2 || !(sv(n - 2) > 1e-8 * sv(0))) {
        throw Error(ErrorCode::Rank, "kernel of the log-Jacobian is not one dimensional");
    }
    const Eigen::VectorXd w = svd.matrixV().col(n - 1);
    Eigen::VectorXd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = J.point.z[static_cast<std::size_t>(j)] * w(j);
    if (v.sum() < 0) v = -v;
    v /= v.cwiseAbs().maxCoeff();
    if (!(v.minCoeff() > 0.0)) throw Error(ErrorCode::Rank, "kernel vector is not positive, the point left V+");
    TangentVector t;
    t.v.assign(v.data(), v.data() + n);
    return t;
}

Eigen::VectorXd xi_kernel(const LogJacobian& J)
{
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.xi_basis, Eigen::ComputeFullV);
    Eigen::VectorXd u = svd.matrixV().col(svd.matrixV().cols() - 1);
    if (u.sum() < 0) u = -u;
    return u / u.cwiseAbs().maxCoeff();
}

std::vector<RealSolution> trace_path_from(const LRWord& w, const RealSolution& start, double target_H,
                                          const PathOptions& opts)
{
    if (!(target_H > 0.0) || !std::isfinite(target_H)) {
        throw Error(ErrorCode::InvalidOperand, "target H(eps) must be a positive finite number");
    }
    const PathSystem ps = make_system(w);
    const auto n = static_cast<Eigen::Index>(w.size());
    const Branch branch = start.branch;

    std::vector<double> z = start.z;
    double s = std::log(evaluate_reduced(ps.H, z));
    const double s_target = std::log(target_H);

    std::vector<RealSolution> out{make_solution(w, branch, ps, z)};
    double h = opts.initial_step;
    int steps = 0;
    while (std::abs(s_target - s) > 0.0) {
        if (++steps > opts.max_steps) {
            throw Error(ErrorCode::ContinuationBudget, "step budget exhausted at H(eps) = " + std::to_string(std::exp(s)));
        }
        // tangent d log z / ds from the kernel of the equation block
        const Eigen::MatrixXd Je = eq_jacobian(ps, z);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Je, Eigen::ComputeFullV);
        const Eigen::VectorXd k = svd.matrixV().col(n - 1);
        const double dH = dlog_row(ps.H, z).dot(k);
        if (std::abs(dH) < 1e-14) throw Error(ErrorCode::SingularPoint, "H(eps) is not a local parameter here");
        const Eigen::VectorXd dyds = k / dH;

        const double dir = s_target > s ? 1.0 : -1.0;
        const double s_next = std::abs(s_target - s) <= h ? s_target : s + dir * h;

        std::vector<double> trial(z.size());
        for (Eigen::Index j = 0; j < n; ++j) {
            trial[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] * std::exp((s_next - s) * dyds(j));
        }
        const bool ok = correct(ps, trial, s_next, opts) && angle_condition(ps.tri, trial, opts.residual_tol) &&
                        sign_case_of(ps.tri, trial) == sign_case_of(ps.tri, z);
        if (!ok) {
            h /= 2.0;
            if (h < opts.min_step) {
                throw Error(ErrorCode::ContinuationBudget, "step size underflow at H(eps) = " + std::to_string(std::exp(s)));
            }
            continue;
        }
        z = trial;
        s = s_next;
        out.push_back(make_solution(w, branch, ps, z));
        h = std::min(h * 1.5, opts.max_step);
    }
    return out;
}

std::vector<RealSolution> trace_path(const LRWord& w, Branch branch, double target_H, const PathOptions& opts)
{
    return trace_path_from(w, sol_solution(w, branch), target_H, opts);
}

RealSolution follow_path(const LRWord& w, Branch branch, double target_H, const PathOptions& opts)
{
    return trace_path(w, branch, target_H, opts).back();
}

}  // namespace geotrans
