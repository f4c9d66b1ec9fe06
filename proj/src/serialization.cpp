#include "geotrans/serialization.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "geotrans/error.hpp"

namespace geotrans
{

namespace
{

double number(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) throw Error(ErrorCode::Io, std::string("missing numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::string slot_key(const SlotKey& k) { return std::to_string(k.first + 1) + "." + slot_char(k.second); }

SlotKey parse_slot_key(const std::string& s)
{
    const auto dot = s.find('.');
    if (dot == std::string::npos || dot + 2 != s.size()) throw Error(ErrorCode::Io, "bad slot key '" + s + "'");
    int tet = 0;
    try {
        tet = std::stoi(s.substr(0, dot));
    } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "bad slot key '" + s + "'");
    }
    if (tet < 1) throw Error(ErrorCode::Io, "tet indices start at 1: '" + s + "'");
    Slot slot;
    switch (s[dot + 1]) {
        case 'z': slot = Slot::Z; break;
        case 'x': slot = Slot::X; break;
        case 'y': slot = Slot::Y; break;
        default: throw Error(ErrorCode::Io, "slot must be z, x or y: '" + s + "'");
    }
    return {tet - 1, slot};
}

}  // namespace

std::string format_double(double x)
{
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

json to_json(const BNum& z) { return json{{"re", z.re}, {"im", z.im}, {"q", z.tag.q}}; }

BNum bnum_from_json(const json& j)
{
    if (!j.is_object()) throw Error(ErrorCode::Io, "BNum must be an object");
    return {number(j, "re"), number(j, "im"), AlgebraTag{number(j, "q")}};
}

json to_json(const PB1Point& p) { return json{{"u", to_json(p.u)}, {"v", to_json(p.v)}}; }

PB1Point pb1point_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("u") || !j.contains("v")) throw Error(ErrorCode::Io, "point needs 'u' and 'v'");
    return {bnum_from_json(j.at("u")), bnum_from_json(j.at("v"))};
}

json to_json(const ShapeMonomial& m)
{
    json ex = json::object();
    for (const auto& [k, e] : m.exponents) ex[slot_key(k)] = e;
    return json{{"sign", m.sign}, {"exponents", ex}};
}

ShapeMonomial monomial_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("exponents") || !j.at("exponents").is_object()) {
        throw Error(ErrorCode::Io, "monomial needs an 'exponents' object");
    }
    ShapeMonomial m;
    m.sign = j.value("sign", 1);
    if (m.sign != 1 && m.sign != -1) throw Error(ErrorCode::Io, "monomial sign must be +1 or -1");
    for (const auto& [key, val] : j.at("exponents").items()) {
        if (!val.is_number_integer()) throw Error(ErrorCode::Io, "exponent of '" + key + "' is not an integer");
        const SlotKey k = parse_slot_key(key);
        m.multiply_slot(k.first, k.second, val.get<int>());
    }
    return m;
}

json to_json(const IdealTriangulation& t)
{
    json eqs = json::array();
    for (const auto& e : t.equations) eqs.push_back(to_json(e));
    json boundary = json::object();
    for (const auto& [name, m] : t.boundary) boundary[name] = to_json(m);
    json out{{"word", t.word}, {"n_tets", t.n_tets}};
    if (!t.labels.empty()) {
        json labels = json::array();
        for (TetLabel l : t.labels) labels.push_back(to_string(l));
        out["labels"] = labels;
    }
    out["equations"] = eqs;
    out["boundary"] = boundary;
    return out;
}

IdealTriangulation triangulation_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("n_tets") || !j.contains("equations")) {
        throw Error(ErrorCode::Io, "triangulation needs 'n_tets' and 'equations'");
    }
    const std::string word = j.value("word", std::string{});
    if (!word.empty()) {
        IdealTriangulation t = build_triangulation(LRWord(word));
        if (t.n_tets != j.at("n_tets").get<int>()) throw Error(ErrorCode::Io, "n_tets does not match the word");
        return t;
    }
    IdealTriangulation t;
    t.n_tets = j.at("n_tets").get<int>();
    if (t.n_tets < 1) throw Error(ErrorCode::Io, "n_tets must be positive");
    for (const auto& e : j.at("equations")) t.equations.push_back(monomial_from_json(e));
    if (j.contains("boundary")) {
        for (const auto& [name, m] : j.at("boundary").items()) t.boundary[name] = monomial_from_json(m);
    }
    for (const auto& e : t.equations) {
        for (const auto& [k, v] : e.exponents) {
            if (k.first >= t.n_tets) throw Error(ErrorCode::Io, "equation refers to a tet beyond n_tets");
        }
    }
    return t;
}

json to_json(const RealSolution& s)
{
    return json{{"word", s.word},         {"branch", to_string(s.branch)}, {"z", s.z},
                {"H_eps", s.H_eps},       {"residual", s.residual},        {"sign_case", to_string(s.sign_case)}};
}

RealSolution real_solution_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("word") || !j.contains("z")) throw Error(ErrorCode::Io, "real solution needs 'word' and 'z'");
    RealSolution s;
    s.word = LRWord(j.at("word").get<std::string>()).letters();
    s.branch = parse_branch(j.value("branch", std::string("plus")));
    s.z = j.at("z").get<std::vector<double>>();
    s.H_eps = j.value("H_eps", 1.0);
    s.residual = j.value("residual", 0.0);
    const std::string sc = j.value("sign_case", std::string("none"));
    s.sign_case = sc == "case1" ? SignCase::Case1 : (sc == "case2" ? SignCase::Case2 : SignCase::None);
    return s;
}

json to_json(const BSolution& s)
{
    json z = json::array();
    for (const BNum& x : s.z) z.push_back(to_json(x));
    return json{{"q", s.tag.q}, {"z", z}, {"residual", s.residual}, {"oriented", s.oriented}};
}

BSolution bsolution_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("z") || !j.at("z").is_array()) throw Error(ErrorCode::Io, "B-solution needs a 'z' array");
    BSolution s;
    s.tag = AlgebraTag{number(j, "q")};
    for (const auto& x : j.at("z")) {
        const BNum b = bnum_from_json(x);
        if (!(b.tag == s.tag)) throw Error(ErrorCode::Io, "shape tag does not match the solution tag");
        s.z.push_back(b);
    }
    s.residual = j.value("residual", 0.0);
    s.oriented = j.value("oriented", false);
    return s;
}

json to_json(const CompletionReport& r)
{
    return json{{"kind", to_string(r.kind)},
                {"H", to_json(r.H)},
                {"modulus", r.modulus},
                {"angle_or_boost", r.angle_or_boost},
                {"rotational_part", r.rotational_part}};
}

json to_json(const TachyonStructure& t)
{
    return json{{"word", t.lambda_sol.word},       {"mass", t.mass}, {"lambda", to_json(t.lambda_sol)},
                {"mu", to_json(t.mu_sol)},         {"ads", to_json(t.ads)}, {"completion", to_json(t.completion)}};
}

void emit_transition_csv(const TransitionPath& path, std::ostream& out)
{
    if (path.samples.empty()) throw Error(ErrorCode::InvalidOperand, "empty transition path");
    out << kTransitionCsvHeader << '\n';
    auto row = [&out](double t, const std::string& j, const BNum& z, const CliffordNum& c) {
        out << format_double(t) << ',' << j << ',' << format_double(z.re) << ',' << format_double(z.im) << ','
            << format_double(c.c1) << ',' << format_double(c.ci) << ',' << format_double(c.ct) << ',' << format_double(c.cit)
            << '\n';
    };
    for (const auto& s : path.samples) {
        for (std::size_t j = 0; j < s.solution.z.size(); ++j) row(s.t, std::to_string(j + 1), s.solution.z[j], s.clifford[j]);
        row(s.t, "H", s.boundary_value, s.boundary_clifford);
    }
    if (!out) throw Error(ErrorCode::Io, "failed to write transition CSV");
}

}  // namespace geotrans
