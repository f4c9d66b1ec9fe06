#include "geotrans/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "geotrans/error.hpp"
#include "geotrans/projective.hpp"
#include "geotrans/real_variety.hpp"
#include "geotrans/serialization.hpp"
#include "geotrans/transition.hpp"
#include "geotrans/triangulation.hpp"

namespace geotrans
{

namespace
{

struct Options {
    std::string word;
    std::string matrix;
    std::string in;
    std::string out;
    std::string branch{"plus"};
    std::string geometry{"h3"};
    double tol{1e-10};
    double t{0.01};
    double mass{0.0};
    double target_h{1.0};
    double t_min{-0.5};
    double t_max{0.5};
    int steps{101};
};

double tolerance_scale()
{
    const char* env = std::getenv("GEOTRANS_TOL");
    if (!env || !*env) return 1.0;
    char* end = nullptr;
    const double s = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(s > 0.0) || !std::isfinite(s)) {
        throw Error(ErrorCode::Usage, std::string("GEOTRANS_TOL must be a positive number, got '") + env + "'");
    }
    return s;
}

int count_sources(const Options& o) { return !o.word.empty() + !o.matrix.empty() + !o.in.empty(); }

LRWord input_word(const Options& o)
{
    if (!o.in.empty() || count_sources(o) != 1) throw Error(ErrorCode::Usage, "give exactly one of --word or --matrix");
    if (!o.word.empty()) return LRWord(o.word);
    return factor_anosov(parse_matrix(o.matrix));
}

json read_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Io, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    f << text;
    if (!f) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

void emit(const json& j, const std::string& path, std::ostream& out) { write_text(path, j.dump(2) + "\n", out); }

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

PathOptions path_options(double tol)
{
    PathOptions p;
    p.residual_tol = tol;
    return p;
}

SolveOptions solve_options(double tol)
{
    SolveOptions s;
    s.tol = tol;
    return s;
}

json tet_flags(const std::vector<BNum>& z)
{
    json flags = json::array();
    for (std::size_t j = 0; j < z.size(); ++j) {
        json f{{"tet", j + 1}};
        try {
            const auto [a, b, c] = edge_shapes(z[j]);
            const BNum slots[3] = {a, c, b};
            const char* names[3] = {"z", "x", "y"};
            for (int k = 0; k < 3; ++k) {
                if (z[j].tag.q < 0) f[names[k]] = std::arg(to_complex(slots[k]));
                else f[names[k]] = angle_flag(z[j].tag, slots[k]) == AngleFlag::Pi ? "pi" : "zero";
            }
        } catch (const Error&) {
            f["degenerate"] = true;
        }
        flags.push_back(f);
    }
    return flags;
}

std::vector<BNum> as_bnums(const std::vector<double>& z)
{
    std::vector<BNum> out;
    for (double x : z) out.push_back(BNum::real(x, AlgebraTag::dual()));
    return out;
}

json verify_real(const RealSolution& s, double tol)
{
    const LRWord w(s.word);
    const IdealTriangulation tri = build_triangulation(w);
    if (static_cast<int>(s.z.size()) != tri.n_tets) throw Error(ErrorCode::Io, "shape count does not match the word");
    json residuals = json::array();
    double worst = 0.0;
    for (const auto& e : tri.equations) {
        const double r = std::abs(evaluate_monomial(e, s.z) - 1.0);
        residuals.push_back(r);
        worst = std::max(worst, r);
    }
    return json{{"type", "real-solution"},
                {"word", s.word},
                {"residuals", residuals},
                {"max_residual", worst},
                {"H_eps", evaluate_monomial(tri.boundary.at("eps"), s.z)},
                {"angle_flags", tet_flags(as_bnums(s.z))},
                {"angle_condition", angle_condition(tri, s.z, 2.0 * tol)},
                {"sign_case", to_string(sign_case_of(tri, s.z))},
                {"ok", worst <= 2.0 * tol}};
}

json verify_b(const IdealTriangulation& tri, const BSolution& s, const std::string& boundary, double tol)
{
    if (static_cast<int>(s.z.size()) != tri.n_tets) throw Error(ErrorCode::Io, "shape count does not match the triangulation");
    json residuals = json::array();
    double worst = 0.0;
    for (const auto& e : tri.equations) {
        const BNum g = evaluate_monomial(e, s.z);
        const double r = std::max(std::abs(g.re - 1.0), std::abs(g.im));
        residuals.push_back(r);
        worst = std::max(worst, r);
    }
    bool valid = true;
    for (const BNum& z : s.z) valid = valid && shape_valid(s.tag, z);
    const BSolution fresh = make_bsolution(s.tag, tri.equations, s.z);
    json rep{{"type", "b-solution"},
             {"q", s.tag.q},
             {"residuals", residuals},
             {"max_residual", worst},
             {"shapes_valid", valid},
             {"oriented", fresh.oriented},
             {"angle_flags", tet_flags(s.z)}};
    if (!boundary.empty() && tri.boundary.count(boundary)) {
        rep["completion"] = to_json(classify_completion(fresh, tri.boundary.at(boundary)));
    }
    rep["ok"] = worst <= 2.0 * tol;
    return rep;
}

IdealTriangulation triangulation_of(const json& j)
{
    if (j.contains("triangulation")) return triangulation_from_json(j.at("triangulation"));
    if (j.contains("word")) return build_triangulation(LRWord(j.at("word").get<std::string>()));
    throw Error(ErrorCode::Io, "solution file names neither a word nor a triangulation");
}

std::string default_boundary(const IdealTriangulation& tri, const json& j)
{
    if (j.contains("boundary_monomial")) return j.at("boundary_monomial").get<std::string>();
    if (tri.boundary.count("eps")) return "eps";
    if (tri.boundary.count("l")) return "l";
    return tri.boundary.empty() ? std::string{} : tri.boundary.begin()->first;
}

json verify_file(const std::string& path, double tol)
{
    const json j = read_json(path);
    if (!j.is_object()) throw Error(ErrorCode::Io, "expected a JSON object in '" + path + "'");

    if (j.contains("lambda") && j.contains("mu") && j.contains("ads")) {
        const RealSolution lam = real_solution_from_json(j.at("lambda"));
        const RealSolution mu = real_solution_from_json(j.at("mu"));
        const IdealTriangulation tri = build_triangulation(LRWord(lam.word));
        json rl = verify_real(lam, tol), rm = verify_real(mu, tol);
        json ra = verify_b(tri, bsolution_from_json(j.at("ads")), "eps", tol);
        bool paired = lam.z.size() == mu.z.size();
        for (std::size_t k = 0; paired && k < lam.z.size(); ++k) paired = lam.z[k] > mu.z[k];
        const double worst = std::max({rl["max_residual"].get<double>(), rm["max_residual"].get<double>(), ra["max_residual"].get<double>()});
        return json{{"type", "tachyon"},   {"word", lam.word},  {"lambda", rl},
                    {"mu", rm},            {"ads", ra},         {"lambda_above_mu", paired},
                    {"max_residual", worst}, {"ok", paired && worst <= 2.0 * tol}};
    }
    if (j.contains("samples")) {
        const IdealTriangulation tri = triangulation_of(j);
        const std::string boundary = default_boundary(tri, j);
        json samples = json::array();
        double worst = 0.0;
        for (const auto& s : j.at("samples")) {
            json r = verify_b(tri, bsolution_from_json(s.at("solution")), boundary, tol);
            worst = std::max(worst, r["max_residual"].get<double>());
            samples.push_back(json{{"t", s.at("t")}, {"report", r}});
        }
        return json{{"type", "transition"}, {"samples", samples}, {"max_residual", worst}, {"ok", worst <= 2.0 * tol}};
    }
    if (j.contains("branch")) return verify_real(real_solution_from_json(j), tol);
    if (j.contains("q") && j.contains("z")) {
        const IdealTriangulation tri = triangulation_of(j);
        return verify_b(tri, bsolution_from_json(j), default_boundary(tri, j), tol);
    }
    if (j.contains("equations")) {
        const IdealTriangulation tri = triangulation_from_json(j);
        const bool trivial = formally_trivial_product(tri.equations);
        return json{{"type", "triangulation"},
                    {"n_tets", tri.n_tets},
                    {"n_equations", tri.equations.size()},
                    {"product_formally_one", trivial},
                    {"independent_equations", tri.independent_equations().size()},
                    {"ok", static_cast<int>(tri.independent_equations().size()) + 1 == tri.n_tets}};
    }
    throw Error(ErrorCode::Io, "unrecognized file contents in '" + path + "'");
}

TransitionProblem transition_problem(const Options& o)
{
    const int sources = count_sources(o);
    if (sources == 0) return fig8_problem();
    if (sources != 1) throw Error(ErrorCode::Usage, "give at most one of --word, --matrix or --in");
    if (o.in.empty()) return bundle_problem(input_word(o));

    const json j = read_json(o.in);
    TransitionProblem p;
    p.tri = triangulation_from_json(j);
    if (!p.tri.word.empty()) return bundle_problem(LRWord(p.tri.word));
    if (!j.contains("transition")) throw Error(ErrorCode::Io, "triangulation file needs a 'transition' block with a seed");
    const json& tr = j.at("transition");
    p.boundary = tr.value("boundary", std::string("l"));
    if (!p.tri.boundary.count(p.boundary)) throw Error(ErrorCode::Io, "unknown boundary monomial '" + p.boundary + "'");
    p.target = [](double t) { return exp_imaginary(AlgebraTag::transition(t), -1.0); };
    p.hp_seed.tag = AlgebraTag::dual();
    for (const auto& z : tr.at("hp_seed")) {
        BNum b = bnum_from_json(z);
        p.hp_seed.z.emplace_back(b.re, b.im, AlgebraTag::dual());
    }
    if (static_cast<int>(p.hp_seed.z.size()) != p.tri.n_tets) throw Error(ErrorCode::Io, "seed size does not match n_tets");
    return p;
}

int dispatch(const std::string& verb, const Options& o, double tol, std::ostream& out)
{
    if (verb == "factor") {
        if (o.matrix.empty() || !o.word.empty() || !o.in.empty()) throw Error(ErrorCode::Usage, "factor takes exactly --matrix");
        write_text(o.out, factor_anosov(parse_matrix(o.matrix)).letters() + "\n", out);
    } else if (verb == "triangulate") {
        emit(to_json(build_triangulation(input_word(o))), o.out, out);
    } else if (verb == "sol") {
        emit(to_json(sol_solution(input_word(o), parse_branch(o.branch))), o.out, out);
    } else if (verb == "path") {
        emit(to_json(follow_path(input_word(o), parse_branch(o.branch), o.target_h, path_options(tol))), o.out, out);
    } else if (verb == "regenerate") {
        const LRWord w = input_word(o);
        const RealSolution s = sol_solution(w, parse_branch(o.branch));
        const TangentVector v = kernel_tangent(log_jacobian(w, s));
        const Geometry g = parse_geometry(o.geometry);
        const BSolution b = regenerate(build_triangulation(w), "eps", s, v, g, o.t, solve_options(tol));
        json j = to_json(b);
        j["word"] = w.letters();
        j["geometry"] = to_string(g);
        j["t"] = o.t;
        emit(j, o.out, out);
    } else if (verb == "transition") {
        const TransitionProblem p = transition_problem(o);
        const TransitionPath path = transition_path(p, o.t_min, o.t_max, o.steps, solve_options(tol));
        if (ends_with(o.out, ".json")) {
            json samples = json::array();
            for (const auto& s : path.samples) samples.push_back(json{{"t", s.t}, {"solution", to_json(s.solution)}});
            json j{{"triangulation", to_json(p.tri)}, {"boundary_monomial", p.boundary}, {"samples", samples}};
            emit(j, o.out, out);
        } else {
            std::ostringstream csv;
            emit_transition_csv(path, csv);
            write_text(o.out, csv.str(), out);
        }
    } else if (verb == "tachyon") {
        emit(to_json(tachyon(input_word(o), o.mass, path_options(tol))), o.out, out);
    } else if (verb == "verify") {
        if (o.in.empty() || !o.word.empty() || !o.matrix.empty()) throw Error(ErrorCode::Usage, "verify takes exactly --in");
        const json rep = verify_file(o.in, tol);
        emit(rep, o.out, out);
        return rep.value("ok", false) ? kExitOk : kExitMath;
    }
    return kExitOk;
}

void report(std::ostream& err, std::string_view code, const std::string& detail)
{
    err << json{{"error", code}, {"detail", detail}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Geometric structures on ideal triangulations over R + Rk"};
    app.require_subcommand(1);
    Options o;

    auto add_input = [&o](CLI::App* sub, bool with_in) {
        sub->add_option("--word", o.word, "RL word of the monodromy");
        sub->add_option("--matrix", o.matrix, "monodromy matrix a,b,c,d (row-major)");
        if (with_in) sub->add_option("--in", o.in, "input file");
    };
    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
    };

    CLI::App* factor = app.add_subcommand("factor", "RL factorization of an Anosov matrix");
    factor->add_option("--matrix", o.matrix, "matrix a,b,c,d (row-major)")->required();
    factor->add_option("--out", o.out, "output file (default stdout)");

    CLI::App* tri = app.add_subcommand("triangulate", "monodromy triangulation and gluing equations");
    add_input(tri, false);
    add_common(tri);

    CLI::App* sol = app.add_subcommand("sol", "Sol solution on a branch of V+");
    add_input(sol, false);
    add_common(sol);
    sol->add_option("--branch", o.branch, "plus or minus");

    CLI::App* path = app.add_subcommand("path", "follow V+ to a target value of H(eps)");
    add_input(path, false);
    add_common(path);
    path->add_option("--branch", o.branch, "plus or minus");
    path->add_option("--target-h", o.target_h, "target H(eps) > 0")->required();

    CLI::App* regen = app.add_subcommand("regenerate", "regenerate an h3, ads or hp structure from the Sol solution");
    add_input(regen, false);
    add_common(regen);
    regen->add_option("--branch", o.branch, "plus or minus");
    regen->add_option("--geometry", o.geometry, "h3, ads or hp");
    regen->add_option("--t", o.t, "regeneration parameter t > 0");

    CLI::App* trans = app.add_subcommand("transition", "transition path through B_t (figure eight by default)");
    add_input(trans, true);
    add_common(trans);
    trans->add_option("--t-min", o.t_min, "first sample");
    trans->add_option("--t-max", o.t_max, "last sample");
    trans->add_option("--steps", o.steps, "number of samples")->check(CLI::PositiveNumber);

    CLI::App* tach = app.add_subcommand("tachyon", "AdS tachyon structure of a given mass");
    add_input(tach, false);
    add_common(tach);
    tach->add_option("--mass", o.mass, "tachyon mass < 0")->required();

    CLI::App* ver = app.add_subcommand("verify", "re-evaluate a file written by another command");
    ver->add_option("--in", o.in, "input file")->required();
    add_common(ver);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report(err, to_string(ErrorCode::Usage), e.what());
        return kExitUsage;
    }

    try {
        const double tol = o.tol * tolerance_scale();
        return dispatch(app.get_subcommands().front()->get_name(), o, tol, out);
    } catch (const Error& e) {
        report(err, to_string(e.code()), e.what());
        return is_math_error(e.code()) ? kExitMath : kExitUsage;
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return kExitMath;
    }
}

}  // namespace geotrans
