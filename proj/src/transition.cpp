#include "geotrans/transition.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "geotrans/error.hpp"
#include "geotrans/projective.hpp"

namespace geotrans
{

namespace
{

using cplx = std::complex<double>;

struct System {
    std::vector<ReducedMonomial> eqs;
    ReducedMonomial cons;
};

System make_system(const std::vector<ShapeMonomial>& equations, const ShapeMonomial& constraint, int n_tets)
{
    std::vector<ShapeMonomial> used = equations;
    if (!used.empty() && formally_trivial_product(used)) used.pop_back();
    if (static_cast<int>(used.size()) + 1 != n_tets) {
        throw Error(ErrorCode::InvalidOperand, std::to_string(used.size()) + " independent equations plus one constraint do not match " +
                                                   std::to_string(n_tets) + " tetrahedra");
    }
    System sys;
    for (const auto& e : used) sys.eqs.push_back(reduce(e));
    sys.cons = reduce(constraint);
    return sys;
}

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <class S>
bool finite(const S& s)
{
    return std::isfinite(std::abs(s));
}

template <class S>
bool eval_system(const System& sys, const S& target, const std::vector<S>& z, Vec<S>& F, Mat<S>* J)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    F.resize(n);
    if (J) J->resize(n, n);
    std::vector<S> grad;
    auto row = [&](Eigen::Index i, const ReducedMonomial& m, const S& rhs) {
        const S v = evaluate_reduced(m, z);
        F(i) = v - rhs;
        if (J) {
            dlog_reduced(m, z, grad);
            for (Eigen::Index j = 0; j < n; ++j) (*J)(i, j) = v * grad[static_cast<std::size_t>(j)];
        }
    };
    for (std::size_t i = 0; i < sys.eqs.size(); ++i) row(static_cast<Eigen::Index>(i), sys.eqs[i], S(1.0));
    row(n - 1, sys.cons, target);
    if (!F.allFinite()) return false;
    return !J || J->allFinite();
}

/** Damped Newton on a real or complex system; returns the final max |F| (infinity on failure). */
template <class S>
double scalar_newton(const System& sys, const S& target, std::vector<S>& z, int max_iterations)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    Vec<S> F, Ft;
    Mat<S> J;
    if (!eval_system(sys, target, z, F, &J)) return INFINITY;
    double res = F.cwiseAbs().maxCoeff();
    for (int it = 0; it < max_iterations && res > 1e-15; ++it) {
        const Vec<S> dz = J.fullPivLu().solve(-F);
        if (!dz.allFinite()) break;
        bool accepted = false;
        double alpha = 1.0;
        for (int k = 0; k < 12 && !accepted; ++k, alpha /= 2.0) {
            std::vector<S> trial(z);
            for (Eigen::Index j = 0; j < n; ++j) trial[static_cast<std::size_t>(j)] += alpha * dz(j);
            if (eval_system<S>(sys, target, trial, Ft, nullptr) && Ft.cwiseAbs().maxCoeff() < res) {
                z = trial;
                accepted = true;
            }
        }
        if (!accepted) break;
        eval_system(sys, target, z, F, &J);
        const double next = F.cwiseAbs().maxCoeff();
        const bool tiny_step = alpha * 2.0 * dz.cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + std::abs(z[0]));
        res = next;
        if (tiny_step) break;
    }
    return res;
}

BNum eval_b(const ReducedMonomial& m, const std::vector<BNum>& z, AlgebraTag tag)
{
    BNum v = BNum::real(static_cast<double>(m.sign), tag);
    for (const auto& f : m.factors) {
        const BNum& zj = z[static_cast<std::size_t>(f.tet)];
        if (f.p) v = v * pow(zj, f.p);
        if (f.r) v = v * pow(1.0 - zj, f.r);
    }
    return v;
}

bool eval_direct(const System& sys, const BNum& target, const std::vector<BNum>& z, Eigen::VectorXd& F, Eigen::MatrixXd* J)
{
    const AlgebraTag tag = target.tag;
    const auto n = static_cast<Eigen::Index>(z.size());
    F.resize(2 * n);
    if (J) J->setZero(2 * n, 2 * n);
    try {
        auto row = [&](Eigen::Index i, const ReducedMonomial& m, const BNum& rhs) {
            const BNum v = eval_b(m, z, tag);
            const BNum f = v - rhs;
            F(2 * i) = f.re;
            F(2 * i + 1) = f.im;
            if (!J) return;
            for (const auto& fac : m.factors) {
                const BNum& zj = z[static_cast<std::size_t>(fac.tet)];
                const BNum d = v * (static_cast<double>(fac.p) * inv(zj) - static_cast<double>(fac.r) * inv(1.0 - zj));
                // d acts on (dre, dim) by [[a, q b], [b, a]]
                const Eigen::Index c = 2 * fac.tet;
                (*J)(2 * i, c) += d.re;
                (*J)(2 * i, c + 1) += tag.q * d.im;
                (*J)(2 * i + 1, c) += d.im;
                (*J)(2 * i + 1, c + 1) += d.re;
            }
        };
        for (std::size_t i = 0; i < sys.eqs.size(); ++i) row(static_cast<Eigen::Index>(i), sys.eqs[i], BNum::real(1.0, tag));
        row(n - 1, sys.cons, target);
    } catch (const Error&) {
        return false;
    }
    return F.allFinite() && (!J || J->allFinite());
}

double direct_newton(const System& sys, const BNum& target, std::vector<BNum>& z, int max_iterations)
{
    const auto n = static_cast<Eigen::Index>(z.size());
    Eigen::VectorXd F, Ft;
    Eigen::MatrixXd J;
    if (!eval_direct(sys, target, z, F, &J)) return INFINITY;
    double res = F.cwiseAbs().maxCoeff();
    for (int it = 0; it < max_iterations && res > 1e-15; ++it) {
        const Eigen::VectorXd dz = J.fullPivLu().solve(-F);
        if (!dz.allFinite()) break;
        bool accepted = false;
        double alpha = 1.0;
        for (int k = 0; k < 12 && !accepted; ++k, alpha /= 2.0) {
            std::vector<BNum> trial(z);
            for (Eigen::Index j = 0; j < n; ++j) {
                trial[static_cast<std::size_t>(j)].re += alpha * dz(2 * j);
                trial[static_cast<std::size_t>(j)].im += alpha * dz(2 * j + 1);
            }
            if (eval_direct(sys, target, trial, Ft, nullptr) && Ft.cwiseAbs().maxCoeff() < res) {
                z = trial;
                accepted = true;
            }
        }
        if (!accepted) break;
        eval_direct(sys, target, z, F, &J);
        res = F.cwiseAbs().maxCoeff();
    }
    return res;
}

void dispatch_solve(const System& sys, AlgebraTag tag, const BNum& target, std::vector<BNum>& z, int max_iterations)
{
    const std::size_t n = z.size();
    if (tag.q < 0) {
        std::vector<cplx> w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = to_complex(z[j]);
        scalar_newton<cplx>(sys, to_complex(target), w, max_iterations);
        for (std::size_t j = 0; j < n; ++j) z[j] = from_complex(w[j], tag);
    } else if (tag.q > 0) {
        std::vector<double> lam(n), mu(n);
        for (std::size_t j = 0; j < n; ++j) {
            const SplitPair p = split(z[j]);
            lam[j] = p.lambda;
            mu[j] = p.mu;
        }
        const SplitPair tp = split(target);
        scalar_newton<double>(sys, tp.lambda, lam, max_iterations);
        scalar_newton<double>(sys, tp.mu, mu, max_iterations);
        for (std::size_t j = 0; j < n; ++j) z[j] = unsplit({lam[j], mu[j]}, tag);
    } else {
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = z[j].re;
        scalar_newton<double>(sys, target.re, a, max_iterations);
        // sigma parts solve the differential of the system at the real point
        Eigen::VectorXd F;
        Eigen::MatrixXd J;
        if (!eval_system<double>(sys, target.re, a, F, &J)) {
            throw Error(ErrorCode::NoConvergence, "half-pipe real part left the domain of the equations");
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        rhs(static_cast<Eigen::Index>(n) - 1) = target.im;
        const Eigen::VectorXd b = J.fullPivLu().solve(rhs);
        for (std::size_t j = 0; j < n; ++j) z[j] = BNum(a[j], b(static_cast<Eigen::Index>(j)), tag);
    }
}

double constraint_residual(const ShapeMonomial& m, const BNum& target, const std::vector<BNum>& z)
{
    try {
        const BNum v = evaluate_monomial(m, z);
        return std::max(std::abs(v.re - target.re), std::abs(v.im - target.im));
    } catch (const Error&) {
        return INFINITY;
    }
}

BNum slot_value(const BNum& z, Slot s)
{
    switch (s) {
        case Slot::Z: return z;
        case Slot::X: return (z + (-1.0)) / z;
        case Slot::Y: return inv(1.0 - z);
    }
    return z;
}

bool real_counts_ok(const std::vector<ShapeMonomial>& equations, const std::vector<double>& x)
{
    for (const auto& eq : equations) {
        int negatives = 0;
        for (const auto& [key, e] : eq.exponents) {
            const double z = x[static_cast<std::size_t>(key.first)];
            const double v = key.second == Slot::Z ? z : (key.second == Slot::X ? (z - 1.0) / z : 1.0 / (1.0 - z));
            if (v < 0.0) negatives += std::abs(e);
        }
        if (negatives != 2) return false;
    }
    return true;
}

std::string angle_failure(AlgebraTag tag, const std::vector<ShapeMonomial>& equations, const std::vector<BNum>& z)
{
    const std::size_t n = z.size();
    if (tag.q < 0) {
        int sign = 0;
        for (std::size_t i = 0; i < equations.size(); ++i) {
            double sum = 0.0;
            for (const auto& [key, e] : equations[i].exponents) {
                sum += e * std::arg(to_complex(slot_value(z[static_cast<std::size_t>(key.first)], key.second)));
            }
            const int s = std::abs(sum - 2.0 * std::numbers::pi) <= 1e-6 ? 1 : (std::abs(sum + 2.0 * std::numbers::pi) <= 1e-6 ? -1 : 0);
            if (s == 0 || (sign != 0 && s != sign)) return "total dihedral angle around edge " + std::to_string(i + 1) + " is not 2pi";
            sign = s;
        }
        return {};
    }
    std::vector<double> lam(n), mu(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (tag.q > 0) {
            const SplitPair p = split(z[j]);
            lam[j] = p.lambda;
            mu[j] = p.mu;
        } else {
            lam[j] = mu[j] = z[j].re;
        }
    }
    if (!real_counts_ok(equations, lam) || !real_counts_ok(equations, mu)) {
        return "some edge does not have exactly two pi-angle corners";
    }
    return {};
}

}  // namespace

double b_residual(const std::vector<ShapeMonomial>& equations, const std::vector<BNum>& z)
{
    double r = 0.0;
    for (const auto& e : equations) {
        const BNum v = evaluate_monomial(e, z);
        r = std::max({r, std::abs(v.re - 1.0), std::abs(v.im)});
    }
    return r;
}

BSolution make_bsolution(AlgebraTag tag, const std::vector<ShapeMonomial>& equations, std::vector<BNum> z)
{
    BSolution s;
    s.tag = tag;
    s.z = std::move(z);
    s.residual = b_residual(equations, s.z);
    s.oriented = !s.z.empty() && std::all_of(s.z.begin(), s.z.end(), [](const BNum& x) { return is_positively_oriented(x); });
    return s;
}

BSolution solve_gluing(AlgebraTag tag, const std::vector<ShapeMonomial>& equations, const Constraint& constraint,
                       const BSolution& seed, const SolveOptions& opts)
{
    const int n = static_cast<int>(seed.z.size());
    const System sys = make_system(equations, constraint.monomial, n);
    if (!(constraint.target.tag == tag)) throw Error(ErrorCode::InvalidOperand, "constraint target has the wrong algebra tag");

    std::vector<BNum> z;
    for (const BNum& s : seed.z) {
        const BNum zj(s.re, s.im, tag);
        if (!shape_valid(tag, zj)) throw Error(ErrorCode::InvalidOperand, "seed shape is not valid for this algebra");
        z.push_back(zj);
    }

    if (opts.method == SolveMethod::Direct) {
        direct_newton(sys, constraint.target, z, opts.max_iterations);
    } else {
        dispatch_solve(sys, tag, constraint.target, z, opts.max_iterations);
        if (opts.polish) {
            std::vector<BNum> polished = z;
            direct_newton(sys, constraint.target, polished, 4);
            try {
                if (b_residual(equations, polished) + constraint_residual(constraint.monomial, constraint.target, polished) <
                    b_residual(equations, z) + constraint_residual(constraint.monomial, constraint.target, z)) {
                    z = polished;
                }
            } catch (const Error&) {
            }
        }
    }

    double res = INFINITY;
    try {
        res = std::max(b_residual(equations, z), constraint_residual(constraint.monomial, constraint.target, z));
    } catch (const Error&) {
    }
    if (!(res <= opts.tol)) {
        throw Error(ErrorCode::NoConvergence, "Newton stopped with residual " + std::to_string(res));
    }

    BSolution out = make_bsolution(tag, equations, z);
    for (int j = 0; j < n; ++j) {
        if (!shape_valid(tag, out.z[static_cast<std::size_t>(j)])) {
            throw Error(ErrorCode::InvalidStructure, "shape check failed at tet " + std::to_string(j + 1));
        }
    }
    if (opts.require_oriented && !out.oriented) throw Error(ErrorCode::InvalidStructure, "orientation check failed");
    if (opts.check_angles) {
        const std::string why = angle_failure(tag, equations, out.z);
        if (!why.empty()) throw Error(ErrorCode::InvalidStructure, "angle check failed: " + why);
    }
    return out;
}

const char* to_string(Geometry g) noexcept
{
    switch (g) {
        case Geometry::H3: return "h3";
        case Geometry::AdS: return "ads";
        case Geometry::HP: return "hp";
    }
    return "?";
}

Geometry parse_geometry(const std::string& text)
{
    if (text == "h3") return Geometry::H3;
    if (text == "ads") return Geometry::AdS;
    if (text == "hp") return Geometry::HP;
    throw Error(ErrorCode::Usage, "geometry must be h3, ads or hp, got '" + text + "'");
}

namespace
{

/** Real point a with g(a) = 1 and <v, a - s> = u <v, v>, continued from s. */
std::vector<double> real_offset_point(const System& eq_only, const std::vector<double>& s, const std::vector<double>& v, double u)
{
    const auto n = static_cast<Eigen::Index>(s.size());
    const Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
    const double vnorm2 = vv.squaredNorm();

    auto solve_at = [&](std::vector<double>& a, double uu) {
        for (int it = 0; it < 50; ++it) {
            Eigen::VectorXd F(n);
            Eigen::MatrixXd J(n, n);
            std::vector<double> grad;
            for (std::size_t i = 0; i < eq_only.eqs.size(); ++i) {
                const double g = evaluate_reduced(eq_only.eqs[i], a);
                dlog_reduced(eq_only.eqs[i], a, grad);
                F(static_cast<Eigen::Index>(i)) = g - 1.0;
                for (Eigen::Index j = 0; j < n; ++j) J(static_cast<Eigen::Index>(i), j) = g * grad[static_cast<std::size_t>(j)];
            }
            double lin = -uu * vnorm2;
            for (Eigen::Index j = 0; j < n; ++j) lin += v[static_cast<std::size_t>(j)] * (a[static_cast<std::size_t>(j)] - s[static_cast<std::size_t>(j)]);
            F(n - 1) = lin;
            J.row(n - 1) = vv.transpose();
            if (!F.allFinite() || !J.allFinite()) return false;
            if (F.cwiseAbs().maxCoeff() <= 1e-15) return true;
            const Eigen::VectorXd d = J.fullPivLu().solve(-F);
            for (Eigen::Index j = 0; j < n; ++j) a[static_cast<std::size_t>(j)] += d(j);
            if (d.cwiseAbs().maxCoeff() <= 1e-16 * (1.0 + std::abs(a[0]))) return true;
        }
        return false;
    };

    std::vector<double> a = s;
    double done = 0.0;
    double h = u;
    int budget = 10000;
    while (done != u) {
        if (--budget < 0) throw Error(ErrorCode::ContinuationBudget, "real continuation for regeneration did not finish");
        const double next = std::abs(u - done) <= std::abs(h) ? u : done + h;
        std::vector<double> trial = a;
        for (Eigen::Index j = 0; j < n; ++j) trial[static_cast<std::size_t>(j)] += (next - done) * v[static_cast<std::size_t>(j)];
        if (solve_at(trial, next) && std::all_of(trial.begin(), trial.end(), [](double x) { return x > 0.0; })) {
            a = trial;
            done = next;
            h *= 1.5;
        } else {
            h /= 2.0;
            if (std::abs(h) < 1e-14) throw Error(ErrorCode::ContinuationBudget, "real continuation for regeneration stalled");
        }
    }
    return a;
}

}  // namespace

BSolution regenerate(const IdealTriangulation& tri, const std::string& boundary, const RealSolution& s,
                     const TangentVector& v, Geometry geometry, double t, const SolveOptions& opts)
{
    const std::size_t n = s.z.size();
    if (static_cast<int>(n) != tri.n_tets || v.v.size() != n) {
        throw Error(ErrorCode::InvalidOperand, "solution and tangent do not match the triangulation");
    }
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidOperand, "regeneration parameter t must be positive");
    if (!std::all_of(v.v.begin(), v.v.end(), [](double x) { return x > 0.0; })) {
        throw Error(ErrorCode::InvalidOperand, "tangent vector must be positive");
    }
    const auto it = tri.boundary.find(boundary);
    if (it == tri.boundary.end()) throw Error(ErrorCode::InvalidOperand, "unknown boundary monomial '" + boundary + "'");

    switch (geometry) {
        case Geometry::HP: {
            std::vector<BNum> z;
            for (std::size_t j = 0; j < n; ++j) z.emplace_back(s.z[j], t * v.v[j], AlgebraTag::dual());
            return make_bsolution(AlgebraTag::dual(), tri.equations, std::move(z));
        }
        case Geometry::AdS: {
            const System sys = make_system(tri.equations, it->second, static_cast<int>(n));
            const std::vector<double> lam = real_offset_point(sys, s.z, v.v, t);
            const std::vector<double> mu = real_offset_point(sys, s.z, v.v, -t);
            std::vector<BNum> z;
            for (std::size_t j = 0; j < n; ++j) {
                if (!(lam[j] > mu[j])) throw Error(ErrorCode::Orientation, "lambda_j > mu_j fails at tet " + std::to_string(j + 1));
                z.push_back(unsplit({lam[j], mu[j]}, AlgebraTag::split_complex()));
            }
            BSolution out = make_bsolution(AlgebraTag::split_complex(), tri.equations, std::move(z));
            if (out.residual > opts.tol) throw Error(ErrorCode::NoConvergence, "AdS regeneration residual " + std::to_string(out.residual));
            return out;
        }
        case Geometry::H3: {
            const ReducedMonomial H = reduce(it->second);
            const double h0 = evaluate_reduced(H, s.z);
            std::vector<double> grad;
            dlog_reduced(H, s.z, grad);
            double dH = 0.0;
            for (std::size_t j = 0; j < n; ++j) dH += h0 * grad[j] * v.v[j];

            const AlgebraTag tag = AlgebraTag::complex();
            BSolution seed;
            seed.tag = tag;
            for (std::size_t j = 0; j < n; ++j) seed.z.emplace_back(s.z[j], t * v.v[j], tag);
            SolveOptions o = opts;
            o.require_oriented = true;
            return solve_gluing(tag, tri.equations, {it->second, BNum(h0, t * dH, tag)}, seed, o);
        }
    }
    throw Error(ErrorCode::InvalidOperand, "unknown geometry");
}

IdealTriangulation fig8_triangulation()
{
    IdealTriangulation t;
    t.n_tets = 2;
    ShapeMonomial e1, e2, l, m;
    // z1(1-z1)z2(1-z2) = 1 written edge by edge
    e1.multiply_slot(0, Slot::Z, 2);
    e1.multiply_slot(0, Slot::X, 1);
    e1.multiply_slot(1, Slot::Z, 2);
    e1.multiply_slot(1, Slot::X, 1);
    e2.multiply_slot(0, Slot::X, 1);
    e2.multiply_slot(0, Slot::Y, 2);
    e2.multiply_slot(1, Slot::X, 1);
    e2.multiply_slot(1, Slot::Y, 2);
    t.equations = {e1, e2};
    l.multiply_slot(0, Slot::Z, 2);
    l.multiply_slot(0, Slot::Y, -2);
    m.multiply_slot(1, Slot::Z, 1);
    m.multiply_slot(0, Slot::Y, -1);
    t.boundary["l"] = l;
    t.boundary["m"] = m;
    return t;
}

TransitionProblem fig8_problem()
{
    TransitionProblem p;
    p.tri = fig8_triangulation();
    p.boundary = "l";
    p.target = [](double t) { return exp_imaginary(AlgebraTag::transition(t), -1.0); };
    p.hp_seed.tag = AlgebraTag::dual();
    p.hp_seed.z = {BNum(-0.6, 0.2, AlgebraTag::dual()), BNum(1.6, 0.2, AlgebraTag::dual())};
    return p;
}

TransitionProblem bundle_problem(const LRWord& w)
{
    TransitionProblem p;
    p.tri = build_triangulation(w);
    p.boundary = "eps";
    p.target = [](double t) { return exp_imaginary(AlgebraTag::transition(t), -1.0); };

    const RealSolution s = sol_solution(w, Branch::Plus);
    const TangentVector v = kernel_tangent(log_jacobian(w, s));
    const ReducedMonomial H = reduce(p.tri.boundary.at("eps"));
    std::vector<double> grad;
    dlog_reduced(H, s.z, grad);
    double dH = 0.0;
    for (std::size_t j = 0; j < s.z.size(); ++j) dH += evaluate_reduced(H, s.z) * grad[j] * v.v[j];
    if (std::abs(dH) < 1e-14) throw Error(ErrorCode::SingularPoint, "H(eps) does not vary along the kernel");

    p.hp_seed.tag = AlgebraTag::dual();
    for (std::size_t j = 0; j < s.z.size(); ++j) p.hp_seed.z.emplace_back(s.z[j], -v.v[j] / dH, AlgebraTag::dual());
    return p;
}

namespace
{

TransitionSample make_sample(const TransitionProblem& problem, double t, const BSolution& sol)
{
    TransitionSample smp;
    smp.t = t;
    smp.solution = sol;
    for (const BNum& z : sol.z) smp.clifford.push_back(clifford_embed(t, z));
    smp.boundary_value = evaluate_monomial(problem.tri.boundary.at(problem.boundary), sol.z);
    smp.boundary_clifford = clifford_embed(t, smp.boundary_value);
    return smp;
}

struct Marcher {
    const TransitionProblem& problem;
    const SolveOptions& opts;
    const ShapeMonomial& mono;
    double t_prev;
    BSolution prev;
    bool have_older{false};
    double t_older{0.0};
    BSolution older;

    BSolution attempt(double t) const
    {
        const AlgebraTag tag = AlgebraTag::transition(t);
        BSolution seed;
        seed.tag = tag;
        for (std::size_t j = 0; j < prev.z.size(); ++j) {
            double re = prev.z[j].re, im = prev.z[j].im;
            if (have_older) {
                const double f = (t - t_prev) / (t_prev - t_older);
                re += f * (prev.z[j].re - older.z[j].re);
                im += f * (prev.z[j].im - older.z[j].im);
            }
            seed.z.emplace_back(re, im, tag);
        }
        return solve_gluing(tag, problem.tri.equations, {mono, problem.target(t)}, seed, opts);
    }

    void advance(double t, int depth = 0)
    {
        try {
            BSolution next = attempt(t);
            older = prev;
            t_older = t_prev;
            have_older = true;
            prev = std::move(next);
            t_prev = t;
        } catch (const Error& err) {
            if (depth > 24) {
                throw Error(ErrorCode::ContinuationBudget, "transition path failed near t=" + std::to_string(t) +
                                                               ", last good sample t=" + std::to_string(t_prev) + ": " + err.what());
            }
            const double mid = (t_prev + t) / 2.0;
            advance(mid, depth + 1);
            advance(t, depth + 1);
        }
    }
};

}  // namespace

TransitionPath transition_samples(const TransitionProblem& problem, std::vector<double> ts, const SolveOptions& opts)
{
    if (ts.empty()) throw Error(ErrorCode::InvalidOperand, "no sample parameters requested");
    const auto it = problem.tri.boundary.find(problem.boundary);
    if (it == problem.tri.boundary.end()) throw Error(ErrorCode::InvalidOperand, "unknown boundary monomial '" + problem.boundary + "'");
    const ShapeMonomial& mono = it->second;

    const BSolution base = solve_gluing(AlgebraTag::dual(), problem.tri.equations, {mono, problem.target(0.0)}, problem.hp_seed, opts);

    std::sort(ts.begin(), ts.end());
    std::vector<TransitionSample> pos, neg;
    for (int side : {1, -1}) {
        Marcher m{problem, opts, mono, 0.0, base, false, 0.0, {}};
        std::vector<double> targets;
        for (double t : ts) {
            if ((side > 0 && t > 0.0) || (side < 0 && t < 0.0)) targets.push_back(t);
        }
        if (side < 0) std::reverse(targets.begin(), targets.end());
        for (double t : targets) {
            m.advance(t);
            (side > 0 ? pos : neg).push_back(make_sample(problem, t, m.prev));
        }
    }

    TransitionPath path;
    std::reverse(neg.begin(), neg.end());
    path.samples = std::move(neg);
    for (double t : ts) {
        if (t == 0.0) path.samples.push_back(make_sample(problem, 0.0, base));
    }
    for (auto& s : pos) path.samples.push_back(std::move(s));
    return path;
}

TransitionPath transition_path(const TransitionProblem& problem, double t_min, double t_max, int steps, const SolveOptions& opts)
{
    if (steps < 1 || !(t_max >= t_min)) throw Error(ErrorCode::InvalidOperand, "need steps >= 1 and t_min <= t_max");
    std::vector<double> ts;
    for (int k = 0; k < steps; ++k) {
        double t = steps == 1 ? t_min : t_min + (t_max - t_min) * k / (steps - 1);
        if (std::abs(t) < 1e-15 * std::max(1.0, std::abs(t_max - t_min))) t = 0.0;
        ts.push_back(t);
    }
    return transition_samples(problem, ts, opts);
}

const char* to_string(CompletionKind k) noexcept
{
    switch (k) {
        case CompletionKind::CompleteCusp: return "complete-cusp";
        case CompletionKind::Cone: return "cone";
        case CompletionKind::Tachyon: return "tachyon";
        case CompletionKind::InfinitesimalCone: return "infinitesimal-cone";
        case CompletionKind::DenseModuli: return "dense-moduli";
    }
    return "?";
}

CompletionReport classify_completion(const BSolution& sol, const ShapeMonomial& boundary)
{
    const AlgebraTag tag = sol.tag;
    CompletionReport rep;
    try {
        rep.H = evaluate_monomial(boundary, sol.z);
    } catch (const Error& err) {
        throw Error(ErrorCode::Evaluation, std::string("boundary monomial is not evaluable: ") + err.what());
    }
    const BNum& H = rep.H;
    constexpr double tol = 1e-8;
    constexpr double pi = std::numbers::pi;

    double turns = 0.0;
    double arg_sum = 0.0;
    for (const auto& [key, e] : boundary.exponents) {
        const BNum c = slot_value(sol.z[static_cast<std::size_t>(key.first)], key.second);
        if (tag.q < 0) arg_sum += e * std::arg(to_complex(c));
        else if (c.re < 0.0) turns += e;
    }
    const bool unit_H = std::abs(H.re - 1.0) <= tol && std::abs(H.im) <= tol;

    if (tag.q < 0) {
        const cplx h = to_complex(H);
        rep.modulus = std::abs(h);
        rep.rotational_part = 2.0 * pi * std::ceil(arg_sum / (2.0 * pi) - 1e-9);
        rep.angle_or_boost = arg_sum;
        if (unit_H) rep.kind = CompletionKind::CompleteCusp;
        else if (std::abs(rep.modulus - 1.0) <= tol && std::abs(rep.rotational_part - 2.0 * pi) <= 1e-9) rep.kind = CompletionKind::Cone;
        else rep.kind = CompletionKind::DenseModuli;
        return rep;
    }

    rep.rotational_part = pi * turns;
    const bool two_pi = std::abs(turns - 2.0) < 0.5;
    if (tag.q > 0) {
        const SplitPair p = split(H);
        rep.modulus = std::sqrt(std::abs(sqnorm(H)));
        if (unit_H) rep.kind = CompletionKind::CompleteCusp;
        else if (p.lambda > 0.0 && p.mu > 0.0 && std::abs(p.lambda * p.mu - 1.0) <= tol && two_pi) {
            rep.kind = CompletionKind::Tachyon;
            rep.angle_or_boost = (std::log(p.lambda) - std::log(p.mu)) / 2.0;
        } else {
            rep.kind = CompletionKind::DenseModuli;
        }
        return rep;
    }

    rep.modulus = std::abs(H.re);
    if (unit_H) rep.kind = CompletionKind::CompleteCusp;
    else if (std::abs(H.re - 1.0) <= tol && two_pi) {
        rep.kind = CompletionKind::InfinitesimalCone;
        rep.angle_or_boost = H.im / H.re;
    } else {
        rep.kind = CompletionKind::DenseModuli;
    }
    return rep;
}

TachyonStructure tachyon(const LRWord& w, double mass, const PathOptions& opts)
{
    if (!(mass < 0.0)) throw Error(ErrorCode::Orientation, "tachyon mass must be negative, the pairing would reverse orientation");
    TachyonStructure ts;
    ts.mass = mass;
    ts.lambda_sol = follow_path(w, Branch::Plus, std::exp(mass), opts);
    ts.mu_sol = follow_path(w, Branch::Plus, std::exp(-mass), opts);

    const IdealTriangulation tri = build_triangulation(w);
    std::vector<BNum> z;
    for (std::size_t j = 0; j < ts.lambda_sol.z.size(); ++j) {
        if (!(ts.lambda_sol.z[j] > ts.mu_sol.z[j])) {
            throw Error(ErrorCode::Orientation, "lambda_j > mu_j fails at tet " + std::to_string(j + 1));
        }
        z.push_back(unsplit({ts.lambda_sol.z[j], ts.mu_sol.z[j]}, AlgebraTag::split_complex()));
    }
    ts.ads = make_bsolution(AlgebraTag::split_complex(), tri.equations, std::move(z));
    ts.completion = classify_completion(ts.ads, tri.boundary.at("eps"));
    return ts;
}

}  // namespace geotrans
