#include "geotrans/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geotrans/error.hpp"

namespace geotrans
{

namespace
{

constexpr IntMatrix kR{1, 1, 0, 1};
constexpr IntMatrix kL{1, 0, 1, 1};
constexpr IntMatrix kIdentity{1, 0, 0, 1};

std::int64_t trace(const IntMatrix& m) noexcept { return m[0] + m[3]; }

std::int64_t isqrt(std::int64_t n)
{
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
    while (s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int cyc(int j, int n) { return ((j - 1) % n + n) % n; }

}  // namespace

IntMatrix multiply(const IntMatrix& m, const IntMatrix& n) noexcept
{
    return {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3], m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
}

IntMatrix parse_matrix(const std::string& text)
{
    IntMatrix m{};
    std::stringstream ss(text);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k == 4) throw Error(ErrorCode::Usage, "matrix needs exactly four entries: " + text);
        try {
            std::size_t used = 0;
            m[static_cast<std::size_t>(k)] = std::stoll(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Usage, "matrix entry is not an integer: '" + item + "'");
        }
        ++k;
    }
    if (k != 4) throw Error(ErrorCode::Usage, "matrix needs exactly four entries: " + text);
    return m;
}

LRWord::LRWord(const std::string& letters)
{
    if (letters.empty()) throw Error(ErrorCode::InvalidWord, "empty word");
    for (char c : letters) {
        if (c != 'R' && c != 'L') throw Error(ErrorCode::InvalidWord, "word may only contain R and L: " + letters);
    }
    if (letters.find('R') == std::string::npos || letters.find('L') == std::string::npos) {
        throw Error(ErrorCode::InvalidWord, "word must contain both letters: " + letters);
    }
    letters_ = canonical_rotation(letters);
    for (std::size_t i = 0; i < letters_.size();) {
        std::size_t j = i;
        while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
        blocks_.push_back(static_cast<int>(j - i));
        i = j;
    }
}

std::string LRWord::canonical_rotation(const std::string& letters)
{
    std::string best;
    const std::size_t n = letters.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::string rot = letters.substr(i) + letters.substr(0, i);
        if (rot.front() != 'R' || rot.back() != 'L') continue;
        if (best.empty() || rot < best) best = rot;
    }
    if (best.empty()) throw Error(ErrorCode::InvalidWord, "word must contain both letters: " + letters);
    return best;
}

char LRWord::letter(int j) const noexcept { return letters_[static_cast<std::size_t>(cyc(j, size()))]; }

std::vector<int> LRWord::hinges() const
{
    std::vector<int> M{1};
    for (int s : blocks_) M.push_back(M.back() + s);
    return M;
}

IntMatrix LRWord::matrix() const noexcept { return prefix_matrix(size()); }

IntMatrix LRWord::prefix_matrix(int k) const noexcept
{
    IntMatrix m = kIdentity;
    for (int i = 0; i < k; ++i) m = multiply(m, letters_[static_cast<std::size_t>(i)] == 'R' ? kR : kL);
    return m;
}

LRWord factor_anosov(const IntMatrix& input)
{
    if (input[0] * input[3] - input[1] * input[2] != 1) throw Error(ErrorCode::InvalidMatrix, "determinant is not 1");
    if (std::abs(trace(input)) <= 2) throw Error(ErrorCode::NotAnosov, "|trace| <= 2, matrix is not Anosov");

    IntMatrix m = input;
    if (trace(m) < 0) m = {-m[0], -m[1], -m[2], -m[3]};
    const std::int64_t a = m[0], b = m[1], c = m[2], d = m[3];
    const std::int64_t tr = a + d;

    // continued fraction of the expanding slope (P + sqrt D) / Q
    const std::int64_t D = tr * tr - 4;
    const std::int64_t s = isqrt(D);
    std::int64_t P = a - d;
    std::int64_t Q = 2 * c;
    (void)b;

    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
    std::vector<std::int64_t> coeffs;
    std::size_t start = 0;
    for (;;) {
        auto [it, fresh] = seen.emplace(std::make_pair(P, Q), coeffs.size());
        if (!fresh) {
            start = it->second;
            break;
        }
        const std::int64_t ai = Q > 0 ? floor_div(P + s, Q) : floor_div(-P - s - 1, -Q);
        coeffs.push_back(ai);
        P = ai * Q - P;
        Q = (D - P * P) / Q;
    }

    std::vector<std::pair<char, std::int64_t>> period;
    for (std::size_t i = start; i < coeffs.size(); ++i) period.emplace_back(i % 2 == 0 ? 'R' : 'L', coeffs[i]);
    if (period.size() % 2 == 1) {
        const std::size_t n = period.size();
        for (std::size_t i = 0; i < n; ++i) period.emplace_back(period[i].first == 'R' ? 'L' : 'R', period[i].second);
    }
    std::string root;
    for (const auto& [ch, k] : period) root.append(static_cast<std::size_t>(k), ch);

    std::string word = root;
    for (;;) {
        const std::int64_t t = trace(LRWord(word).matrix());
        if (t == tr) break;
        if (t > tr) throw Error(ErrorCode::InvalidMatrix, "factorization did not reproduce the trace");
        word += root;
    }
    return LRWord(word);
}

char slot_char(Slot s) noexcept
{
    switch (s) {
        case Slot::Z: return 'z';
        case Slot::X: return 'x';
        case Slot::Y: return 'y';
    }
    return '?';
}

void ShapeMonomial::multiply_slot(int tet, Slot slot, int e)
{
    const SlotKey key{tet, slot};
    const int v = exponents[key] + e;
    if (v == 0) exponents.erase(key);
    else exponents[key] = v;
}

ShapeMonomial ShapeMonomial::inverse() const
{
    ShapeMonomial r;
    r.sign = sign;
    for (const auto& [k, e] : exponents) r.exponents[k] = -e;
    return r;
}

ShapeMonomial operator*(const ShapeMonomial& a, const ShapeMonomial& b)
{
    ShapeMonomial r = a;
    r.sign *= b.sign;
    for (const auto& [k, e] : b.exponents) r.multiply_slot(k.first, k.second, e);
    return r;
}

ShapeMonomial pow(const ShapeMonomial& m, int n)
{
    ShapeMonomial r;
    r.sign = (n % 2 == 0) ? 1 : m.sign;
    for (const auto& [k, e] : m.exponents) {
        if (e * n != 0) r.exponents[k] = e * n;
    }
    return r;
}

ReducedMonomial reduce(const ShapeMonomial& m)
{
    std::map<int, std::array<int, 3>> per_tet;
    for (const auto& [k, e] : m.exponents) per_tet[k.first][static_cast<std::size_t>(k.second)] += e;
    ReducedMonomial r;
    r.sign = m.sign;
    for (const auto& [tet, abc] : per_tet) {
        const int az = abc[0], bx = abc[1], cy = abc[2];
        if (bx % 2 != 0) r.sign = -r.sign;
        const int p = az - bx;
        const int q = bx - cy;
        if (p != 0 || q != 0) r.factors.push_back({tet, p, q});
    }
    return r;
}

const char* to_string(TetLabel label) noexcept
{
    switch (label) {
        case TetLabel::RR: return "RR";
        case TetLabel::LL: return "LL";
        case TetLabel::RLHinge: return "RL-hinge";
        case TetLabel::LRHinge: return "LR-hinge";
    }
    return "?";
}

bool formally_trivial_product(const std::vector<ShapeMonomial>& equations)
{
    ShapeMonomial prod;
    for (const auto& e : equations) prod = prod * e;
    return reduce(prod).trivial();
}

std::vector<ShapeMonomial> IdealTriangulation::independent_equations() const
{
    std::vector<ShapeMonomial> eqs = equations;
    if (!eqs.empty() && formally_trivial_product(eqs)) eqs.pop_back();
    return eqs;
}

std::vector<ShapeMonomial> gluing_equations(const LRWord& w)
{
    const int N = w.size();
    std::vector<ShapeMonomial> rows(static_cast<std::size_t>(N));
    auto add = [N](ShapeMonomial& m, int j, Slot s, int e) { m.multiply_slot(cyc(j, N), s, e); };

    const std::vector<int> M = w.hinges();
    for (std::size_t p = 0; p < w.blocks().size(); ++p) {
        const int j = M[p];
        const int k = M[p + 1] - 1;
        const bool is_r = w.letter(j) == 'R';
        const Slot fan = is_r ? Slot::X : Slot::Y;
        const Slot valent = is_r ? Slot::Y : Slot::X;

        ShapeMonomial& g = rows[static_cast<std::size_t>(j - 1)];
        add(g, j - 1, Slot::Z, 1);
        for (int t = j; t <= k + 1; ++t) add(g, t, fan, 2);
        add(g, k + 2, Slot::Z, 1);

        for (int q = j + 1; q <= k; ++q) {
            ShapeMonomial& h = rows[static_cast<std::size_t>(q - 1)];
            add(h, q - 1, Slot::Z, 1);
            add(h, q, valent, 2);
            add(h, q + 1, Slot::Z, 1);
        }
    }
    return rows;
}

namespace
{

ShapeMonomial product_form_case1_of(const LRWord& w, const std::vector<TetLabel>& labels)
{
    const int N = w.size();
    const std::vector<int> M = w.hinges();
    ShapeMonomial P;
    for (std::size_t p = 0; p < w.blocks().size(); ++p) {
        const int sp = w.blocks()[p];
        P.multiply_slot(cyc(1 + M[p + 1], N), Slot::Z, -sp);
        for (int j = 1 + M[p]; j <= M[p + 1]; ++j) {
            const int t = cyc(j, N);
            const TetLabel lab = labels[static_cast<std::size_t>(t)];
            const Slot beta = (lab == TetLabel::RLHinge || lab == TetLabel::RR) ? Slot::X : Slot::Y;
            P.multiply_slot(t, beta, -2 * j + 2 * M[p]);
        }
    }
    return P;
}

std::vector<TetLabel> tet_labels(const LRWord& w)
{
    std::vector<TetLabel> labels;
    for (int j = 1; j <= w.size(); ++j) {
        const char a = w.letter(j - 1), b = w.letter(j);
        if (a == 'R' && b == 'R') labels.push_back(TetLabel::RR);
        else if (a == 'L' && b == 'L') labels.push_back(TetLabel::LL);
        else if (a == 'R') labels.push_back(TetLabel::RLHinge);
        else labels.push_back(TetLabel::LRHinge);
    }
    return labels;
}

}  // namespace

BoundaryMonomials boundary_monomials(const LRWord& w)
{
    const int N = w.size();
    BoundaryMonomials out;

    ShapeMonomial h;
    h.multiply_slot(cyc(N, N), Slot::Z, 1);
    h.multiply_slot(0, Slot::X, 1);
    h.multiply_slot(cyc(2, N), Slot::Z, -1);
    h.multiply_slot(0, Slot::Y, -1);
    out.H_eps = pow(h, 2);

    out.product_form_case1 = product_form_case1_of(w, tet_labels(w));

    // tet j of w corresponds to tet N+2-j of the reversed word; case 2 of w is case 1 there, with H inverted
    std::string rev(w.letters().rbegin(), w.letters().rend());
    const LRWord wr(rev);
    int shift = 0;
    for (int i = 0; i < N; ++i) {
        if (rev.substr(static_cast<std::size_t>(i)) + rev.substr(0, static_cast<std::size_t>(i)) == wr.letters()) {
            shift = i;
            break;
        }
    }
    const ShapeMonomial pr = product_form_case1_of(wr, tet_labels(wr));
    ShapeMonomial p2;
    p2.sign = pr.sign;
    for (const auto& [key, e] : pr.exponents) {
        const int orig = ((N - (key.first + shift)) % N + N) % N;
        p2.multiply_slot(orig, key.second, -e);
    }
    out.product_form_case2 = p2;
    return out;
}

IdealTriangulation build_triangulation(const LRWord& w)
{
    IdealTriangulation t;
    t.word = w.letters();
    t.n_tets = w.size();
    t.labels = tet_labels(w);
    t.equations = gluing_equations(w);
    t.boundary["eps"] = boundary_monomials(w).H_eps;
    return t;
}

BNum evaluate_monomial(const ShapeMonomial& m, const std::vector<BNum>& shapes)
{
    const AlgebraTag tag = shapes.empty() ? AlgebraTag{} : shapes.front().tag;
    BNum v = BNum::real(static_cast<double>(m.sign), tag);
    for (const auto& [key, e] : m.exponents) {
        const auto [tet, slot] = key;
        if (tet < 0 || tet >= static_cast<int>(shapes.size())) {
            throw Error(ErrorCode::Evaluation, "monomial refers to tet " + std::to_string(tet + 1) + " outside the shape vector");
        }
        const BNum& z = shapes[static_cast<std::size_t>(tet)];
        try {
            BNum s = z;
            if (slot == Slot::X) s = (z + (-1.0)) / z;
            else if (slot == Slot::Y) s = inv(1.0 - z);
            v = v * pow(s, e);
        } catch (const Error& err) {
            throw Error(ErrorCode::Evaluation, "cannot evaluate slot " + std::to_string(tet + 1) + "." + slot_char(slot) +
                                                   ": " + err.what());
        }
    }
    return v;
}

double evaluate_monomial(const ShapeMonomial& m, const std::vector<double>& shapes)
{
    double v = static_cast<double>(m.sign);
    for (const auto& [key, e] : m.exponents) {
        const auto [tet, slot] = key;
        if (tet < 0 || tet >= static_cast<int>(shapes.size())) {
            throw Error(ErrorCode::Evaluation, "monomial refers to tet " + std::to_string(tet + 1) + " outside the shape vector");
        }
        const double z = shapes[static_cast<std::size_t>(tet)];
        if (z == 0.0 || z == 1.0) {
            throw Error(ErrorCode::Evaluation, "cannot evaluate slot " + std::to_string(tet + 1) + "." + slot_char(slot) +
                                                   ": shape is 0 or 1");
        }
        double s = z;
        if (slot == Slot::X) s = (z - 1.0) / z;
        else if (slot == Slot::Y) s = 1.0 / (1.0 - z);
        v *= std::pow(s, e);
    }
    return v;
}

}  // namespace geotrans
