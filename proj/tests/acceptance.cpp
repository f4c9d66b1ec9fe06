// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geotrans/error.hpp"
#include "geotrans/projective.hpp"
#include "geotrans/real_variety.hpp"
#include "geotrans/transition.hpp"

using namespace geotrans;
using cplx = std::complex<double>;

namespace
{

const double pi = std::numbers::pi;

// pinned tolerances
constexpr double kConeTol = 1e-9;
constexpr double kHpTol = 1e-10;
constexpr double kKernelTol = 1e-12;
constexpr double kResidualTol = 1e-10;
constexpr double kProductTol = 1e-9;
constexpr double kSplitTol = 1e-10;
constexpr double kBoostTol = 1e-8;
constexpr double kTachyonResidualTol = 1e-9;
constexpr double kContinuityFactor = 5.0;
constexpr double kNearZeroTol = 1e-2;
constexpr double kSlopeTol = 1e-3;

struct Outcome {
    bool pass{true};
    std::string detail;
};

std::vector<std::string> exhaustive_words(int max_len)
{
    std::set<std::string> out;
    for (int n = 2; n <= max_len; ++n)
        for (unsigned bits = 1; bits + 1 < (1u << n); ++bits) {
            std::string w;
            for (int i = 0; i < n; ++i) w += (bits >> i) & 1u ? 'R' : 'L';
            out.insert(LRWord::canonical_rotation(w));
        }
    return {out.begin(), out.end()};
}

std::vector<std::string> random_words(int count, int max_len, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> len(2, max_len);
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < count) {
        const int n = len(rng);
        std::string w;
        for (int i = 0; i < n; ++i) w += rng() % 2 ? 'R' : 'L';
        if (w.find('R') != std::string::npos && w.find('L') != std::string::npos) out.push_back(w);
    }
    return out;
}

std::vector<std::string> word_set()
{
    std::vector<std::string> w = exhaustive_words(10);
    for (const auto& r : random_words(50, 16, 2024)) w.push_back(r);
    return w;
}

double slot_value(Slot s, double z) { return s == Slot::Z ? z : s == Slot::X ? (z - 1) / z : 1 / (1 - z); }

double residual_of(const IdealTriangulation& t, const std::vector<double>& z)
{
    double r = 0;
    for (const auto& g : t.equations) {
        double v = g.sign;
        for (const auto& [key, e] : g.exponents) v *= std::pow(slot_value(key.second, z[static_cast<std::size_t>(key.first)]), e);
        r = std::max(r, std::abs(v - 1));
    }
    return r;
}

/** case1: y < 0 on RR and RL hinges, x < 0 on LL and LR hinges; case2 swaps the hinges */
int sign_case(const std::string& w, const std::vector<double>& z)
{
    const std::size_t n = w.size();
    bool c1 = true, c2 = true;
    for (std::size_t j = 0; j < n; ++j) {
        const char prev = w[(j + n - 1) % n], cur = w[j];
        const bool xneg = slot_value(Slot::X, z[j]) < 0, yneg = slot_value(Slot::Y, z[j]) < 0;
        bool want_x1, want_x2;
        if (prev == cur) {
            want_x1 = want_x2 = cur == 'L';
        } else {
            want_x1 = prev == 'L';
            want_x2 = !want_x1;
        }
        c1 = c1 && (want_x1 ? xneg && !yneg : yneg && !xneg);
        c2 = c2 && (want_x2 ? xneg && !yneg : yneg && !xneg);
    }
    return c1 ? 1 : c2 ? 2 : 0;
}

bool two_negative_factors(const IdealTriangulation& t, const std::vector<double>& z)
{
    for (const auto& g : t.equations) {
        int c = 0;
        for (const auto& [key, e] : g.exponents)
            if (slot_value(key.second, z[static_cast<std::size_t>(key.first)]) < 0) c += std::abs(e);
        if (c != 2) return false;
    }
    return true;
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome criterion1()
{
    const IdealTriangulation tri = fig8_triangulation();
    const AlgebraTag C = AlgebraTag::complex();
    double worst = 0;
    for (double theta : {pi / 2, pi, 3 * pi / 2}) {
        BSolution s;
        s.tag = C;
        s.z = {BNum(0.5, std::sqrt(3.0) / 2, C), BNum(0.5, std::sqrt(3.0) / 2, C)};
        for (int k = 1; k <= 60; ++k) {
            const double th = k * theta / 60;
            s = solve_gluing(C, tri.equations, {tri.boundary.at("l"), BNum(std::cos(th), std::sin(th), C)}, s);
        }
        const cplx r = std::sqrt(1.0 - 4.0 * std::exp(cplx(0, theta / 2)));
        const cplx a = (1.0 + r) / 2.0, b = (1.0 - r) / 2.0;
        const cplx expect = a.imag() > 0 ? a : b;
        worst = std::max(worst, std::abs(to_complex(s.z[0]) - expect));
    }
    return {worst <= kConeTol, fmt("max |z1 - closed form| = %.2e", worst)};
}

Outcome criterion2()
{
    const IdealTriangulation tri = fig8_triangulation();
    const AlgebraTag D = AlgebraTag::dual();
    BSolution seed;
    seed.tag = D;
    seed.z = {BNum(-0.6, 0.2, D), BNum(1.6, 0.2, D)};
    const BSolution s = solve_gluing(D, tri.equations, {tri.boundary.at("l"), exp_imaginary(D, -1.0)}, seed);
    const double r5 = std::sqrt(5.0);
    double err = std::max({std::abs(s.z[0].re - (1 - r5) / 2), std::abs(s.z[0].im - 1 / (2 * r5)), std::abs(s.z[1].re - (1 + r5) / 2),
                           std::abs(s.z[1].im - 1 / (2 * r5))});
    const BNum H = evaluate_monomial(tri.boundary.at("l"), s.z);
    err = std::max({err, std::abs(H.re - 1), std::abs(H.im + 1)});
    return {err <= kHpTol, fmt("max deviation from closed form and from H(l) = 1 - sigma: %.2e", err)};
}

Outcome criterion3()
{
    int points = 0, diag_fail = 0, col_fail = 0, rank_fail = 0, pos_fail = 0;
    std::set<std::string> diag_words;
    const double targets[] = {0.25, 0.5, 2.0, 4.0, 8.0};
    for (const auto& s : word_set()) {
        const LRWord w(s);
        std::vector<RealSolution> pts{sol_solution(w, Branch::Plus)};
        for (double h : targets) pts.push_back(follow_path(w, Branch::Plus, h));
        for (const auto& p : pts) {
            ++points;
            const LogJacobian J = log_jacobian(w, p);
            const Eigen::Index n = J.xi_basis.rows();
            if ((J.xi_basis.diagonal().array() - 2.0).abs().maxCoeff() > kKernelTol) {
                ++diag_fail;
                diag_words.insert(w.letters());
            }
            if (J.xi_basis.colwise().sum().cwiseAbs().maxCoeff() > kKernelTol) ++col_fail;
            const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.z_basis);
            const auto sv = svd.singularValues();
            if (!(sv(n - 2) > 1e-8 * sv(0)) || sv(n - 1) > 1e-10 * sv(0)) ++rank_fail;
            try {
                const TangentVector v = kernel_tangent(J);
                Eigen::VectorXd dl(n);
                for (Eigen::Index j = 0; j < n; ++j) dl(j) = v.v[static_cast<std::size_t>(j)] / p.z[static_cast<std::size_t>(j)];
                const bool in_kernel = (J.z_basis * dl).cwiseAbs().maxCoeff() <= 1e-9 * J.z_basis.norm();
                if (!in_kernel || *std::min_element(v.v.begin(), v.v.end()) <= 0) ++pos_fail;
            } catch (const Error&) {
                ++pos_fail;
            }
        }
    }
    std::string d = std::to_string(points) + " points; diagonal-2 failures " + std::to_string(diag_fail) + " (" +
                    std::to_string(diag_words.size()) + " words), column-sum failures " + std::to_string(col_fail) +
                    ", rank failures " + std::to_string(rank_fail) + ", positivity failures " + std::to_string(pos_fail);
    if (!diag_words.empty()) {
        d += "; diagonal fails on";
        int k = 0;
        for (const auto& w : diag_words) {
            if (k++ == 8) {
                d += " ...";
                break;
            }
            d += " " + w;
        }
    }
    return {diag_fail + col_fail + rank_fail + pos_fail == 0, d};
}

Outcome criterion4()
{
    int checked = 0, failures = 0;
    double worst = 0;
    for (const auto& s : word_set()) {
        const LRWord w(s);
        const IdealTriangulation t = build_triangulation(w);
        for (Branch br : {Branch::Plus, Branch::Minus}) {
            const RealSolution sol = sol_solution(w, br);
            ++checked;
            const double r = residual_of(t, sol.z);
            worst = std::max(worst, r);
            const bool positive = std::all_of(sol.z.begin(), sol.z.end(), [](double z) { return z > 0; });
            const int expect = br == Branch::Plus ? 1 : 2;
            if (r > kResidualTol || !positive || !two_negative_factors(t, sol.z) || sign_case(w.letters(), sol.z) != expect) ++failures;
        }
    }
    return {failures == 0, std::to_string(checked) + " solutions, " + std::to_string(failures) + " failures, max residual " + fmt("%.2e", worst)};
}

Outcome criterion5()
{
    const char* words[] = {"RL", "RRL", "RLL", "RRLL", "RLRLL", "RRRLL", "RRLRL", "RRRRLLLLL", "RLRRLLRL", "RRRLLRLL"};
    double worst = 0;
    int points = 0;
    for (const char* s : words) {
        const LRWord w(s);
        const BoundaryMonomials bm = boundary_monomials(w);
        for (Branch br : {Branch::Plus, Branch::Minus})
            for (int k = 0; k < 10; ++k) {
                const double target = std::exp(-1.5 + 3.0 * k / 9);
                const RealSolution p = follow_path(w, br, target);
                const double h = std::pow(evaluate_monomial(bm.H_eps, p.z), w.size() / 2.0);
                const ShapeMonomial& form = sign_case(w.letters(), p.z) == 1 ? bm.product_form_case1 : bm.product_form_case2;
                worst = std::max(worst, std::abs(evaluate_monomial(form, p.z) - h) / std::abs(h));
                ++points;
            }
    }
    return {worst <= kProductTol, std::to_string(points) + " points, max relative deviation " + fmt("%.2e", worst)};
}

Outcome criterion6()
{
    bool ok = true;
    double worst = 0;
    for (const char* s : {"RL", "RRLLL"}) {
        const LRWord w(s);
        const IdealTriangulation t = build_triangulation(w);
        for (double target : {0.1, 0.5, 2.0, 10.0}) {
            const auto path = trace_path(w, Branch::Plus, target);
            const RealSolution& end = path.back();
            const double r = residual_of(t, end.z);
            worst = std::max(worst, r);
            ok = ok && r <= kResidualTol && std::abs(end.H_eps - target) <= 1e-10 * target;
            for (std::size_t i = 1; i < path.size(); ++i) {
                const double dh = path[i].H_eps - path[i - 1].H_eps;
                ok = ok && (target > 1 ? dh > 0 : dh < 0);
            }
        }
    }
    return {ok, "targets 0.1, 0.5, 2, 10 on RL and RRLLL, max residual " + fmt("%.2e", worst)};
}

Outcome criterion7()
{
    const AlgebraTag S = AlgebraTag::split_complex();
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> logt(-1.5, 1.5);
    const auto words = random_words(10, 8, 99);
    double worst = 0;
    for (const auto& s : words) {
        const LRWord w(s);
        const IdealTriangulation tri = build_triangulation(w);
        const double a = logt(rng), b = logt(rng);
        const RealSolution la = follow_path(w, Branch::Plus, std::exp(a));
        const RealSolution mu = follow_path(w, Branch::Plus, std::exp(b));
        BSolution seed;
        seed.tag = S;
        for (std::size_t j = 0; j < la.z.size(); ++j) seed.z.push_back(unsplit({la.z[j] * 1.02, mu.z[j] * 0.98}, S));
        const Constraint c{tri.boundary.at("eps"), unsplit({std::exp(a), std::exp(b)}, S)};
        SolveOptions o;
        o.polish = false;
        const BSolution split_sol = solve_gluing(S, tri.equations, c, seed, o);
        o.method = SolveMethod::Direct;
        const BSolution direct = solve_gluing(S, tri.equations, c, seed, o);
        for (std::size_t j = 0; j < la.z.size(); ++j)
            worst = std::max({worst, std::abs(direct.z[j].re - split_sol.z[j].re), std::abs(direct.z[j].im - split_sol.z[j].im)});
    }
    return {worst <= kSplitTol, "10 instances, max componentwise difference " + fmt("%.2e", worst)};
}

Outcome criterion8()
{
    bool ok = true;
    double worst = 0;
    for (const char* s : {"RL", "RLRL", "RLRLRL"})
        for (double m : {-0.25, -1.0, -4.0}) {
            const TachyonStructure t = tachyon(LRWord(s), m);
            bool above = true;
            for (std::size_t j = 0; j < t.lambda_sol.z.size(); ++j) above = above && t.lambda_sol.z[j] > t.mu_sol.z[j];
            for (const auto& z : t.ads.z) above = above && shape_valid(z.tag, z);
            const double dev = std::abs(t.completion.angle_or_boost - m);
            worst = std::max(worst, dev);
            ok = ok && above && t.ads.oriented && t.ads.residual <= kTachyonResidualTol && t.completion.kind == CompletionKind::Tachyon &&
                 dev <= kBoostTol && std::abs(t.completion.rotational_part - 2 * pi) <= 1e-12;
        }
    bool rejected = false;
    try {
        (void)tachyon(LRWord("RL"), 0.5);
    } catch (const Error& e) {
        rejected = e.code() == ErrorCode::Orientation;
    }
    return {ok && rejected, "9 structures, max |boost - mass| " + fmt("%.2e", worst) + (rejected ? ", mass +0.5 rejected" : ", mass +0.5 accepted")};
}

Outcome criterion9()
{
    const TransitionProblem p = fig8_problem();
    const TransitionPath path = transition_path(p, -0.3, 0.3, 61);
    bool ok = path.samples.size() == 61;
    double worst_ratio = 0;
    for (std::size_t i = 1; i < path.samples.size(); ++i) {
        const double dt = path.samples[i].t - path.samples[i - 1].t;
        for (std::size_t j = 0; j < 2; ++j)
            worst_ratio = std::max(worst_ratio, distance(path.samples[i].clifford[j], path.samples[i - 1].clifford[j]) / dt);
    }
    ok = ok && worst_ratio <= kContinuityFactor;

    const TransitionPath near = transition_samples(p, {-1e-3, 0.0, 1e-3, 5e-3, 1e-2});
    const TransitionSample& base = near.samples[1];
    double near_dev = 0;
    for (int i : {0, 2})
        for (std::size_t j = 0; j < 2; ++j) near_dev = std::max(near_dev, distance(near.samples[static_cast<std::size_t>(i)].clifford[j], base.clifford[j]));
    ok = ok && near_dev <= kNearZeroTol;

    // kernel of the real gluing equation at the collapsed point, by central differences
    const IdealTriangulation tri = p.tri;
    const std::vector<double> s{base.solution.z[0].re, base.solution.z[1].re};
    const ShapeMonomial& g = tri.equations[0];
    double grad[2];
    for (int j = 0; j < 2; ++j) {
        auto zp = s, zm = s;
        zp[static_cast<std::size_t>(j)] += 1e-6;
        zm[static_cast<std::size_t>(j)] -= 1e-6;
        grad[j] = (evaluate_monomial(g, zp) - evaluate_monomial(g, zm)) / 2e-6;
    }
    Eigen::Vector2d kernel(grad[1], -grad[0]);
    kernel.normalize();

    // imaginary parts over B_t are first-order slopes; extrapolate to t = 0
    Eigen::Vector2d d1, d2;
    for (int j = 0; j < 2; ++j) {
        d1(j) = near.samples[4].solution.z[static_cast<std::size_t>(j)].im;
        d2(j) = near.samples[3].solution.z[static_cast<std::size_t>(j)].im;
    }
    const Eigen::Vector2d slope = 2 * d2 - d1;
    const Eigen::Vector2d hp(base.solution.z[0].im, base.solution.z[1].im);
    const double along = slope.dot(kernel) * (kernel.dot(hp) < 0 ? -1 : 1);
    const double dir_err = (slope / slope.norm() - kernel * (along > 0 ? 1 : -1)).norm();
    const double hp_err = (slope - hp).norm() / hp.norm();
    ok = ok && dir_err <= kSlopeTol && hp_err <= kSlopeTol;
    return {ok, fmt("max adjacent Clifford step / dt = %.3f", worst_ratio) + fmt(", |t| = 1e-3 deviation %.2e", near_dev) +
                    fmt(", slope direction error %.2e", dir_err) + fmt(", slope vs HP tangent %.2e", hp_err)};
}

Outcome criterion10()
{
    std::mt19937 rng(1010);
    std::uniform_real_distribution<double> u(-2, 2);
    int defined = 0, disagree = 0;
    for (AlgebraTag tag : {AlgebraTag::complex(), AlgebraTag::dual(), AlgebraTag::split_complex()}) {
        for (int k = 0; k < 500; ++k) {
            std::array<PB1Point, 4> p;
            for (auto& x : p) x = PB1Point{BNum(u(rng), u(rng), tag), BNum(u(rng), u(rng), tag)};
            BNum z;
            try {
                z = cross_ratio(p[0], p[1], p[2], p[3]);
            } catch (const Error&) {
                continue;
            }
            ++defined;
            if (simplex_valid_herm(p) != shape_valid(tag, z)) ++disagree;
        }
    }
    return {disagree == 0, std::to_string(defined) + " defined tuples of 1500, " + std::to_string(disagree) + " disagreements"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"fig-8 hyperbolic cone structures", criterion1},
        {"fig-8 half-pipe structure", criterion2},
        {"kernel structure of the log Jacobian", criterion3},
        {"Sol solutions", criterion4},
        {"product formula for H(eps)", criterion5},
        {"H(eps) parameterization", criterion6},
        {"AdS split equivalence", criterion7},
        {"tachyon structures", criterion8},
        {"transition continuity", criterion9},
        {"Hermitian oracle equivalence", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const Error& e) {
            o = {false, std::string("error ") + std::string(to_string(e.code())) + ": " + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
