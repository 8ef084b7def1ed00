#pragma once

// Application layer: quadratic forms with one secret, pseudo-isometry by
// basis enumeration, and p-group isomorphism through the commutator bilinear
// map of a Cayley table.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "isometry.hpp"

namespace starform {

// ---------------------------------------------------------------- quadratic forms

struct QuadraticForm {
    int n = 0;
    std::map<std::pair<int, int>, Fel> terms;  // (i <= j), 0-based variable indices

    Mat gram(const FieldCtx& F) const {
        Mat g(F, n, n);
        Fel half = F.inv(F.from_int(2));
        for (const auto& [ij, c] : terms) {
            auto [i, j] = ij;
            if (i == j) {
                g.at(i, i) = c;
            } else {
                Fel h = F.mul(c, half);
                g.at(i, j) = h;
                g.at(j, i) = h;
            }
        }
        return g;
    }
};

// Term grammar: "c*xi^2" or "c*xi*xj" joined by '+', whitespace-insensitive;
// the coefficient is an element literal and may be omitted.
inline QuadraticForm parse_quadratic(const std::string& text, const FieldCtx& F, int n_vars = 0) {
    QuadraticForm out;
    out.n = n_vars;
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    require(!s.empty(), "quadratic form: empty input");
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('+', pos);
        std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        pos = next == std::string::npos ? s.size() : next + 1;
        require(!term.empty(), "quadratic form: empty term");

        Fel coeff = F.one();
        std::vector<int> vars;
        std::size_t tp = 0;
        bool coeff_seen = false;
        while (tp < term.size()) {
            std::size_t star = term.find('*', tp);
            std::string factor = term.substr(tp, star == std::string::npos ? std::string::npos : star - tp);
            tp = star == std::string::npos ? term.size() : star + 1;
            require(!factor.empty(), "quadratic form: empty factor");
            if (factor[0] == 'x') {
                std::size_t caret = factor.find('^');
                int idx = std::stoi(factor.substr(1, caret == std::string::npos ? std::string::npos
                                                                                : caret - 1)) - 1;
                require(idx >= 0, "quadratic form: variables are x1, x2, ...");
                int power = 1;
                if (caret != std::string::npos) power = std::stoi(factor.substr(caret + 1));
                require(power == 1 || power == 2, "quadratic form: only degree-2 terms allowed");
                for (int t = 0; t < power; ++t) vars.push_back(idx);
            } else {
                require(!coeff_seen, "quadratic form: two coefficients in one term");
                coeff = fel_from_string(F, factor);
                coeff_seen = true;
            }
        }
        require(vars.size() == 2, "quadratic form: every term must be quadratic");
        int i = std::min(vars[0], vars[1]);
        int j = std::max(vars[0], vars[1]);
        out.n = std::max(out.n, j + 1);
        auto key = std::make_pair(i, j);
        Fel prev = out.terms.count(key) ? out.terms[key] : F.zero();
        out.terms[key] = F.add(prev, coeff);
        if (out.terms[key] == 0) out.terms.erase(key);
    }
    return out;
}

inline std::string print_quadratic(const QuadraticForm& f, const FieldCtx& F) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [ij, c] : f.terms) {
        if (!first) os << " + ";
        first = false;
        auto [i, j] = ij;
        os << fel_to_string(F, c) << "*x" << (i + 1);
        if (i == j)
            os << "^2";
        else
            os << "*x" << (j + 1);
    }
    if (first) os << "0*x1^2";
    return os.str();
}

// A in GL(n, q) with A^t Gram(f_k) A = Gram(g_k) for all k — equivalently
// f_k composed with x_i -> sum_j a_{i,j} x_j equals g_k.
inline std::optional<Mat> iqf1s(const std::vector<QuadraticForm>& f,
                                const std::vector<QuadraticForm>& g, const FieldCtx& F, Rng& rng) {
    require(f.size() == g.size() && !f.empty(), "iqf1s: tuple sizes differ or empty");
    int n = 0;
    for (const auto& q : f) n = std::max(n, q.n);
    for (const auto& q : g) n = std::max(n, q.n);
    MatTuple B, C;
    B.sig = std::vector<int>(f.size(), 1);
    C.sig = B.sig;
    for (const auto& q : f) {
        QuadraticForm padded = q;
        padded.n = n;
        B.mats.push_back(padded.gram(F));
    }
    for (const auto& q : g) {
        QuadraticForm padded = q;
        padded.n = n;
        C.mats.push_back(padded.gram(F));
    }
    auto out = isometry_test(B, C, rng);
    if (!out.witness) return std::nullopt;
    return out.witness->F;
}

// ---------------------------------------------------------------- pseudo-isometry

struct PseudoIsometry {
    Mat X;            // the congruence transformation
    Mat basis_change; // T in GL(m', q) matching the reduced span bases
};

// X with <X^t B_i X> = <C_i> as matrix spaces, found by enumerating the
// bases of the target span. Requires a uniform signature.
inline std::optional<PseudoIsometry> pseudo_isometry(const MatTuple& B, const MatTuple& C, Rng& rng,
                                                     std::uint64_t budget = 1024) {
    require(B.sig.has_value() && C.sig.has_value(), "pseudo_isometry: signatures required");
    require(B.n() == C.n(), "pseudo_isometry: sizes differ");
    for (int e : *B.sig) require(e == (*B.sig)[0], "pseudo_isometry: signature must be uniform");
    for (int e : *C.sig) require(e == (*C.sig)[0], "pseudo_isometry: signature must be uniform");
    require(B.m() == 0 || C.m() == 0 || (*B.sig)[0] == (*C.sig)[0],
            "pseudo_isometry: signatures disagree");
    require((B.m() == 0 || B.slotwise_symmetric()) && (C.m() == 0 || C.slotwise_symmetric()),
            "pseudo_isometry: tuples must be slotwise epsilon-symmetric");
    const FieldCtx& F = B.field();
    const int n = B.n();
    const int eps = B.m() ? (*B.sig)[0] : 1;

    auto reduce_span = [&](const MatTuple& T) {
        Subspace s(F, n * n);
        std::vector<Mat> basis;
        for (const Mat& M : T.mats)
            if (s.insert(M.flatten())) basis.push_back(M);
        // echelonized spanning set as a tuple
        MatTuple out;
        out.mats.clear();
        for (int i = 0; i < s.dim(); ++i) out.mats.push_back(Mat::unflatten(F, n, n, s.basis_vector(i)));
        out.sig = std::vector<int>(s.dim(), eps);
        return out;
    };
    MatTuple Bred = reduce_span(B);
    MatTuple Cred = reduce_span(C);
    if (Bred.m() != Cred.m()) return std::nullopt;
    const int m = Bred.m();
    if (m == 0) return PseudoIsometry{Mat::identity(F, n), Mat(F, 0, 0)};

    // enumeration size q^(m^2), guarded by the budget
    std::uint64_t total = 1;
    for (int i = 0; i < m * m; ++i) {
        if (total > budget) break;
        total *= F.q();
    }
    if (total > budget)
        throw budget_exceeded_error("pseudo_isometry: GL(m, q) enumeration exceeds the budget");

    auto span_contains = [&](const MatTuple& sp, const Mat& M) {
        Subspace s(F, n * n);
        for (const Mat& Mi : sp.mats) s.insert(Mi.flatten());
        return s.contains(M.flatten());
    };

    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Mat T(F, m, m);
        std::uint64_t t = idx;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                T.at(i, j) = t % F.q();
                t /= F.q();
            }
        if (!mat_invertible(T)) continue;
        MatTuple Cprime;
        Cprime.sig = Bred.sig;
        for (int i = 0; i < m; ++i) {
            Mat acc(F, n, n);
            for (int j = 0; j < m; ++j)
                if (T.at(i, j) != 0) acc = acc + Cred.mats[j].scaled(T.at(i, j));
            Cprime.mats.push_back(acc);
        }
        auto iso = isometry_test(Bred, Cprime, rng);
        if (iso.witness) {
            const Mat& X = iso.witness->F;
            // span equality of {X^t B_i X} and {C_i} by mutual membership
            for (const Mat& Bi : Bred.mats)
                check_internal(span_contains(Cred, X.transpose() * Bi * X),
                               "pseudo_isometry: image escapes the target span");
            return PseudoIsometry{X, T};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- p-groups

struct CayleyTable {
    int order = 0;
    int identity = 0;
    std::vector<std::vector<int>> table;

    int mul(int a, int b) const { return table[a][b]; }

    int inv(int a) const {
        for (int b = 0; b < order; ++b)
            if (mul(a, b) == identity) return b;
        throw input_error("cayley table: element without inverse");
    }

    int power(int a, int e) const {
        int r = identity;
        for (int i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }

    int comm(int a, int b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

    // rows and columns are permutations, identity behaves, associativity
    // checked on random triples (all triples under strict)
    void validate(Rng& rng, bool strict = false) const {
        require(order >= 1 && static_cast<int>(table.size()) == order, "cayley table: bad size");
        for (const auto& row : table)
            require(static_cast<int>(row.size()) == order, "cayley table: ragged row");
        require(identity >= 0 && identity < order, "cayley table: identity out of range");
        for (int a = 0; a < order; ++a) {
            require(mul(identity, a) == a && mul(a, identity) == a, "cayley table: identity fails");
            std::vector<bool> seen_row(order, false), seen_col(order, false);
            for (int b = 0; b < order; ++b) {
                int r = mul(a, b), c = mul(b, a);
                require(r >= 0 && r < order && c >= 0 && c < order, "cayley table: entry out of range");
                require(!seen_row[r] && !seen_col[c], "cayley table: row or column not a permutation");
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        if (strict) {
            for (int a = 0; a < order; ++a)
                for (int b = 0; b < order; ++b)
                    for (int c = 0; c < order; ++c)
                        require(mul(mul(a, b), c) == mul(a, mul(b, c)), "cayley table: not associative");
        } else {
            for (int t = 0; t < 50 * order; ++t) {
                int a = static_cast<int>(rng.below(order));
                int b = static_cast<int>(rng.below(order));
                int c = static_cast<int>(rng.below(order));
                require(mul(mul(a, b), c) == mul(a, mul(b, c)), "cayley table: not associative");
            }
        }
    }
};

struct PGroupPresentation {
    std::uint32_t p = 3;
    int n = 0;   // dim G/[G,G]
    int m = 0;   // dim [G,G]
    MatTuple b;  // m skew n x n slots over F_p, sig all -1
};

namespace detail {

inline int plog(std::uint64_t order, std::uint32_t p) {
    int l = 0;
    while (order % p == 0) {
        order /= p;
        ++l;
    }
    if (order != 1) return -1;
    return l;
}

}  // namespace detail

// Commutator bilinear map of a class-2 exponent-p group given by its Cayley
// table, with coordinates on chosen bases of G/[G,G] and [G,G]. The prime
// field context is caller-owned and must outlive the returned matrices.
inline PGroupPresentation baer_reduce(const CayleyTable& G, const FieldCtx& F, Rng& rng,
                                      bool strict = false) {
    require(F.k() == 1, "baer_reduce: prime field expected");
    const std::uint32_t p = F.p();
    G.validate(rng, strict);
    const int N = G.order;
    int ell = detail::plog(N, p);
    require(ell >= 0, "baer_reduce: group order is not a power of p");

    // exponent p
    for (int x = 0; x < N; ++x)
        if (G.power(x, static_cast<int>(p)) != G.identity)
            throw input_error("baer_reduce: element " + std::to_string(x) + " violates exponent p");

    // distinct commutators, each must be central (class <= 2)
    std::set<int> comm_values;
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) comm_values.insert(G.comm(x, y));
    for (int c : comm_values)
        for (int z = 0; z < N; ++z)
            if (G.mul(c, z) != G.mul(z, c))
                throw input_error("baer_reduce: commutator " + std::to_string(c) +
                                  " is not central (class exceeds 2)");

    // [G, G] = closure of the commutators
    std::vector<bool> in_comm(N, false);
    {
        std::vector<int> frontier(comm_values.begin(), comm_values.end());
        for (int c : frontier) in_comm[c] = true;
        while (!frontier.empty()) {
            int a = frontier.back();
            frontier.pop_back();
            for (int c : comm_values) {
                int prod = G.mul(a, c);
                if (!in_comm[prod]) {
                    in_comm[prod] = true;
                    frontier.push_back(prod);
                }
            }
        }
    }
    std::vector<int> commutator_subgroup;
    for (int x = 0; x < N; ++x)
        if (in_comm[x]) commutator_subgroup.push_back(x);
    int m = detail::plog(commutator_subgroup.size(), p);
    check_internal(m >= 0, "baer_reduce: commutator subgroup size not a power of p");

    // basis of [G,G] and coordinates by enumeration (elementary abelian)
    std::vector<int> zbasis;
    std::map<int, std::vector<std::uint32_t>> zcoords;
    zcoords[G.identity] = {};
    {
        std::vector<int> span{G.identity};
        for (int x : commutator_subgroup) {
            if (zcoords.count(x)) continue;
            zbasis.push_back(x);
            std::vector<int> bigger;
            std::map<int, std::vector<std::uint32_t>> coords2;
            for (int s : span) {
                int cur = s;
                for (std::uint32_t c = 0; c < p; ++c) {
                    auto v = zcoords[s];
                    v.push_back(c);
                    if (!coords2.count(cur)) {
                        coords2[cur] = v;
                        bigger.push_back(cur);
                    }
                    cur = G.mul(cur, x);
                }
            }
            span = std::move(bigger);
            zcoords = std::move(coords2);
        }
        check_internal(static_cast<int>(zbasis.size()) == m, "baer_reduce: [G,G] basis extraction");
        for (auto& [elt, v] : zcoords) v.resize(m, 0);
    }

    // coset representatives generating G modulo [G,G]
    int n = ell - m;
    std::vector<int> hbasis;
    {
        std::vector<bool> in_h = in_comm;  // subgroup generated by [G,G] and chosen h's
        std::vector<int> members = commutator_subgroup;
        for (int x = 0; x < N && static_cast<int>(hbasis.size()) < n; ++x) {
            if (in_h[x]) continue;
            hbasis.push_back(x);
            // close the subgroup under the new generator
            std::vector<int> grown = members;
            for (int s : members) {
                int cur = s;
                for (std::uint32_t c = 1; c < p; ++c) {
                    cur = G.mul(cur, x);
                    if (!in_h[cur]) {
                        in_h[cur] = true;
                        grown.push_back(cur);
                    }
                }
            }
            members = std::move(grown);
        }
        check_internal(static_cast<int>(hbasis.size()) == n, "baer_reduce: coset basis extraction");
    }

    PGroupPresentation out;
    out.p = p;
    out.n = n;
    out.m = m;
    out.b.sig = std::vector<int>(m, -1);
    for (int k = 0; k < m; ++k) out.b.mats.push_back(Mat(F, n, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int c = G.comm(hbasis[i], hbasis[j]);
            check_internal(zcoords.count(c) > 0, "baer_reduce: commutator outside [G,G]");
            const auto& v = zcoords[c];
            for (int k = 0; k < m; ++k) out.b.mats[k].at(i, j) = v[k];
        }
    check_internal(out.b.m() == 0 || out.b.slotwise_symmetric(),
                   "baer_reduce: commutator matrix not skew");
    // bilinearity spot check: [xy, z] = [x,z][y,z] in class 2
    for (int t = 0; t < 20; ++t) {
        int x = static_cast<int>(rng.below(N));
        int y = static_cast<int>(rng.below(N));
        int z = static_cast<int>(rng.below(N));
        if (G.mul(G.comm(x, z), G.comm(y, z)) != G.comm(G.mul(x, y), z))
            throw input_error("baer_reduce: commutator map is not bilinear");
    }
    return out;
}

inline bool pgroup_iso(const CayleyTable& G, const CayleyTable& H, const FieldCtx& F, Rng& rng,
                       std::uint64_t budget = 1024, bool strict = false) {
    PGroupPresentation pg = baer_reduce(G, F, rng, strict);
    PGroupPresentation ph = baer_reduce(H, F, rng, strict);
    if (pg.n != ph.n || pg.m != ph.m) return false;
    if (pg.m == 0) return true;  // both elementary abelian of the same rank
    return pseudo_isometry(pg.b, ph.b, rng, budget).has_value();
}

}  // namespace starform
