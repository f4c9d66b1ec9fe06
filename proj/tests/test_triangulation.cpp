#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "geotrans/error.hpp"
#include "geotrans/triangulation.hpp"

using namespace geotrans;

namespace
{

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Usage;
}

/** every cyclic class of words over {R, L} using both letters, up to length n */
std::vector<std::string> all_words(int max_len)
{
    std::set<std::string> out;
    for (int n = 2; n <= max_len; ++n) {
        for (unsigned bits = 0; bits < (1u << n); ++bits) {
            std::string w;
            for (int i = 0; i < n; ++i) w += (bits >> i) & 1u ? 'R' : 'L';
            if (w.find('R') == std::string::npos || w.find('L') == std::string::npos) continue;
            out.insert(LRWord::canonical_rotation(w));
        }
    }
    return {out.begin(), out.end()};
}

IntMatrix word_product(const std::string& w)
{
    IntMatrix m{1, 0, 0, 1};
    for (char c : w) m = multiply(m, c == 'R' ? IntMatrix{1, 1, 0, 1} : IntMatrix{1, 0, 1, 1});
    return m;
}

using Exps = std::map<SlotKey, int>;

/** fan and 4-valent equations expanded directly from the run structure, indexed by first letter */
std::vector<Exps> reference_equations(const std::string& w)
{
    const int n = static_cast<int>(w.size());
    auto tet = [n](int j) { return ((j - 1) % n + n) % n; };
    auto letter = [&](int j) { return w[static_cast<std::size_t>(tet(j))]; };
    std::vector<Exps> eqs(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        if (letter(j - 1) == letter(j)) continue;
        int k = j;
        while (letter(k + 1) == letter(j)) ++k;
        const Slot fan = letter(j) == 'R' ? Slot::X : Slot::Y;
        const Slot four = letter(j) == 'R' ? Slot::Y : Slot::X;
        Exps& g = eqs[static_cast<std::size_t>(j - 1)];
        g[{tet(j - 1), Slot::Z}] += 1;
        for (int i = j; i <= k + 1; ++i) g[{tet(i), fan}] += 2;
        g[{tet(k + 2), Slot::Z}] += 1;
        for (int q = j + 1; q <= k; ++q) {
            Exps& h = eqs[static_cast<std::size_t>(q - 1)];
            h[{tet(q - 1), Slot::Z}] += 1;
            h[{tet(q), four}] += 2;
            h[{tet(q + 1), Slot::Z}] += 1;
        }
    }
    return eqs;
}

}  // namespace

TEST_CASE("matrix parsing")
{
    CHECK(parse_matrix("2,1,1,1") == IntMatrix{2, 1, 1, 1});
    CHECK(parse_matrix("-3, 2, -2, 1") == IntMatrix{-3, 2, -2, 1});
    CHECK(code_of([] { (void)parse_matrix("2,1,1"); }) == ErrorCode::Usage);
    CHECK(code_of([] { (void)parse_matrix("2,1,1,1,0"); }) == ErrorCode::Usage);
    CHECK(code_of([] { (void)parse_matrix("2,a,1,1"); }) == ErrorCode::Usage);
}

TEST_CASE("word validation and canonical rotation")
{
    CHECK(LRWord("LR").letters() == "RL");
    CHECK(LRWord("LRR").letters() == "RRL");
    CHECK(LRWord("LLLLLRRRR").letters() == "RRRRLLLLL");
    CHECK(LRWord("RLLRRL") == LRWord("RRLRLL"));
    CHECK(code_of([] { LRWord w("RR"); }) == ErrorCode::InvalidWord);
    CHECK(code_of([] { LRWord w(""); }) == ErrorCode::InvalidWord);
    CHECK(code_of([] { LRWord w("RXL"); }) == ErrorCode::InvalidWord);

    const LRWord w("RRRRLLLLL");
    CHECK(w.size() == 9);
    CHECK(w.blocks() == std::vector<int>{4, 5});
    CHECK(w.hinges() == std::vector<int>{1, 5, 10});
    CHECK(w.letter(0) == 'L');
    CHECK(w.letter(10) == 'R');
    CHECK(w.matrix() == word_product("RRRRLLLLL"));
    CHECK(w.prefix_matrix(4) == IntMatrix{1, 4, 0, 1});
    CHECK(w.prefix_matrix(0) == IntMatrix{1, 0, 0, 1});

    for (const auto& s : all_words(8)) {
        const LRWord v(s);
        CHECK(v.letters().front() == 'R');
        CHECK(v.letters().back() == 'L');
        CHECK(v.blocks().size() % 2 == 0);
        std::string rebuilt;
        for (std::size_t p = 0; p < v.blocks().size(); ++p) rebuilt += std::string(static_cast<std::size_t>(v.blocks()[p]), p % 2 ? 'L' : 'R');
        CHECK(rebuilt == s);
        std::string rot = s;
        for (int r = 0; r < v.size(); ++r) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            CHECK(LRWord(rot) == v);
        }
    }
}

TEST_CASE("Anosov factorization")
{
    CHECK(factor_anosov({2, 1, 1, 1}).letters() == "RL");
    CHECK(factor_anosov({1, 1, 1, 2}).letters() == "RL");
    CHECK(factor_anosov({-2, -1, -1, -1}).letters() == "RL");
    CHECK(code_of([] { (void)factor_anosov({1, 1, 0, 1}); }) == ErrorCode::NotAnosov);
    CHECK(code_of([] { (void)factor_anosov({0, -1, 1, 0}); }) == ErrorCode::NotAnosov);
    CHECK(code_of([] { (void)factor_anosov({2, 0, 0, 1}); }) == ErrorCode::InvalidMatrix);

    const auto words = all_words(12);
    for (const auto& s : words) {
        const IntMatrix m = word_product(s);
        const LRWord f = factor_anosov(m);
        CHECK(f.letters() == s);
        CHECK(f.matrix()[0] + f.matrix()[3] == m[0] + m[3]);
        const IntMatrix neg{-m[0], -m[1], -m[2], -m[3]};
        CHECK(factor_anosov(neg).letters() == s);
    }

    // conjugates by random elements of SL(2,Z)
    std::mt19937 rng(5);
    const IntMatrix gens[4] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1}};
    const IntMatrix inverses[4] = {{1, -1, 0, 1}, {1, 1, 0, 1}, {1, 0, -1, 1}, {1, 0, 1, 1}};
    for (int k = 0; k < 200; ++k) {
        const std::string& s = words[rng() % words.size()];
        if (s.size() > 8) continue;
        IntMatrix p{1, 0, 0, 1}, pinv{1, 0, 0, 1};
        for (int i = 0; i < 6; ++i) {
            const auto g = rng() % 4;
            p = multiply(p, gens[g]);
            pinv = multiply(inverses[g], pinv);
        }
        const IntMatrix conj = multiply(multiply(p, word_product(s)), pinv);
        CHECK(factor_anosov(conj).letters() == s);
    }
}

TEST_CASE("triangulation labels and hinges")
{
    const IdealTriangulation rl = build_triangulation(LRWord("RL"));
    CHECK(rl.n_tets == 2);
    CHECK(rl.equations.size() == 2);
    CHECK(rl.labels == std::vector<TetLabel>{TetLabel::LRHinge, TetLabel::RLHinge});

    const IdealTriangulation t = build_triangulation(LRWord("RRRRLLLLL"));
    CHECK(t.n_tets == 9);
    CHECK(t.labels[0] == TetLabel::LRHinge);
    CHECK(t.labels[4] == TetLabel::RLHinge);
    for (int j : {1, 2, 3}) CHECK(t.labels[static_cast<std::size_t>(j)] == TetLabel::RR);
    for (int j : {5, 6, 7, 8}) CHECK(t.labels[static_cast<std::size_t>(j)] == TetLabel::LL);
    CHECK(t.boundary.count("eps") == 1);
}

TEST_CASE("gluing equations match the fan and 4-valent formulas")
{
    const auto rl = gluing_equations(LRWord("RL"));
    REQUIRE(rl.size() == 2);
    CHECK(rl[0].exponents == Exps{{{0, Slot::Z}, 1}, {{0, Slot::X}, 2}, {{1, Slot::Z}, 1}, {{1, Slot::X}, 2}});
    CHECK(rl[1].exponents == Exps{{{0, Slot::Z}, 1}, {{0, Slot::Y}, 2}, {{1, Slot::Z}, 1}, {{1, Slot::Y}, 2}});

    for (const auto& s : all_words(10)) {
        const auto eqs = gluing_equations(LRWord(s));
        const auto ref = reference_equations(s);
        REQUIRE(eqs.size() == ref.size());
        for (std::size_t j = 0; j < eqs.size(); ++j) {
            CHECK(eqs[j].sign == 1);
            CHECK(eqs[j].exponents == ref[j]);
        }
    }
}

TEST_CASE("sparsity of the R4L5 equations")
{
    const auto eqs = gluing_equations(LRWord("RRRRLLLLL"));
    // tets (1-based) appearing in each equation
    const std::vector<std::set<int>> support = {
        {1, 2, 3, 4, 5, 6, 9}, {1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {1, 2, 4, 5, 6, 7, 8, 9}, {5, 6, 7}, {6, 7, 8}, {7, 8, 9}, {1, 8, 9}};
    REQUIRE(eqs.size() == support.size());
    for (std::size_t j = 0; j < eqs.size(); ++j) {
        std::set<int> got;
        for (const auto& [key, e] : eqs[j].exponents) got.insert(key.first + 1);
        CHECK(got == support[j]);
    }
}

TEST_CASE("slot degrees and formal product")
{
    for (const auto& s : all_words(10)) {
        const LRWord w(s);
        const IdealTriangulation t = build_triangulation(w);
        std::map<SlotKey, int> degree;
        for (const auto& g : t.equations)
            for (const auto& [key, e] : g.exponents) degree[key] += e;
        for (int j = 0; j < t.n_tets; ++j)
            for (Slot sl : {Slot::Z, Slot::X, Slot::Y}) CHECK(degree[{j, sl}] == 2);
        CHECK(formally_trivial_product(t.equations));
        CHECK(t.independent_equations().size() == static_cast<std::size_t>(t.n_tets - 1));

        ShapeMonomial prod;
        for (const auto& g : t.equations) prod = prod * g;
        CHECK(reduce(prod).trivial());

        for (int j = 0; j < t.n_tets; ++j) {
            const Slot squared = t.labels[static_cast<std::size_t>(j)] == TetLabel::RR   ? Slot::Y
                                 : t.labels[static_cast<std::size_t>(j)] == TetLabel::LL ? Slot::X
                                                                                         : Slot::Z;
            if (squared == Slot::Z) continue;
            int count = 0;
            for (const auto& g : t.equations) {
                const auto it = g.exponents.find({j, squared});
                if (it != g.exponents.end() && it->second == 2) ++count;
            }
            CHECK(count == 1);
        }
    }
}

TEST_CASE("monomial algebra and reduction")
{
    ShapeMonomial a;
    a.multiply_slot(0, Slot::X, 2);
    a.multiply_slot(1, Slot::Z, -1);
    const ShapeMonomial b = a.inverse();
    CHECK((a * b).exponents.empty());
    CHECK(pow(a, 3).exponents.at({0, Slot::X}) == 6);
    CHECK(pow(a, 0).exponents.empty());

    // z^a x^b y^c = (-1)^b z^(a-b) (1-z)^(b-c)
    ShapeMonomial m;
    m.multiply_slot(0, Slot::Z, 2);
    m.multiply_slot(0, Slot::X, 3);
    m.multiply_slot(0, Slot::Y, 1);
    const ReducedMonomial r = reduce(m);
    CHECK(r.sign == -1);
    REQUIRE(r.factors.size() == 1);
    CHECK(r.factors[0].p == -1);
    CHECK(r.factors[0].r == 2);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int k = 0; k < 200; ++k) {
        ShapeMonomial g;
        g.sign = k % 2 ? 1 : -1;
        for (int j = 0; j < 3; ++j)
            for (Slot s : {Slot::Z, Slot::X, Slot::Y}) g.multiply_slot(j, s, e(rng));
        std::vector<double> z{u(rng), u(rng), u(rng)};
        const double direct = evaluate_monomial(g, z);
        const double viaz = evaluate_reduced(reduce(g), z);
        CHECK(viaz == doctest::Approx(direct).epsilon(1e-10));

        std::vector<BNum> zb;
        for (double v : z) zb.push_back(BNum(v, u(rng), AlgebraTag::dual()));
        const BNum bv = evaluate_monomial(g, zb);
        CHECK(bv.re == doctest::Approx(direct).epsilon(1e-9));

        std::vector<std::complex<double>> zc{{z[0], 0.3}, {z[1], -0.2}, {z[2], 0.7}};
        std::vector<BNum> zcb;
        for (auto c : zc) zcb.push_back(from_complex(c, AlgebraTag::complex()));
        const auto cv = evaluate_reduced(reduce(g), zc);
        const auto bc = to_complex(evaluate_monomial(g, zcb));
        CHECK(std::abs(cv - bc) <= 1e-9 * (1 + std::abs(cv)));
    }
}

TEST_CASE("monomial evaluation")
{
    ShapeMonomial sq;
    sq.multiply_slot(0, Slot::Z, 2);
    CHECK(evaluate_monomial(sq, std::vector<double>{2.0}) == 4.0);
    const BNum four = evaluate_monomial(sq, std::vector<BNum>{BNum(2, 0, AlgebraTag::complex())});
    CHECK(four.re == 4.0);
    CHECK(four.im == 0.0);

    const ShapeMonomial empty;
    CHECK(evaluate_monomial(empty, std::vector<double>{0.5}) == 1.0);
    CHECK(evaluate_monomial(empty, std::vector<BNum>{}).re == 1.0);

    ShapeMonomial bad;
    bad.multiply_slot(1, Slot::X, 1);
    try {
        (void)evaluate_monomial(bad, std::vector<BNum>{BNum(2, 0, AlgebraTag::dual()), BNum(0, 3, AlgebraTag::dual())});
        FAIL("expected an error");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::Evaluation);
        CHECK(std::string(err.what()).find("2.x") != std::string::npos);
    }
}

TEST_CASE("boundary monomials")
{
    const BoundaryMonomials rl = boundary_monomials(LRWord("RL"));
    CHECK(rl.H_eps.exponents == Exps{{{0, Slot::X}, 2}, {{0, Slot::Y}, -2}});

    const BoundaryMonomials b = boundary_monomials(LRWord("RRRRLLLLL"));
    CHECK(b.H_eps.exponents == Exps{{{8, Slot::Z}, 2}, {{0, Slot::X}, 2}, {{1, Slot::Z}, -2}, {{0, Slot::Y}, -2}});
    for (const auto* form : {&b.product_form_case1, &b.product_form_case2}) {
        std::set<int> tets;
        for (const auto& [key, e] : form->exponents) tets.insert(key.first);
        CHECK(tets.size() == 9);
    }
}
