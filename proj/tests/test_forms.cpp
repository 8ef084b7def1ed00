#include <catch2/catch_amalgamated.hpp>

#include "starform/forms.hpp"

using namespace starform;

namespace {

Mat sym_from(const FieldCtx& F, std::vector<std::vector<Fel>> rows) { return Mat::from_rows(F, rows); }

Mat random_symmetric_invertible(const FieldCtx& F, int n, Rng& rng) {
    while (true) {
        Mat M(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Fel x = F.random(rng);
                M.at(i, j) = x;
                M.at(j, i) = x;
            }
        if (mat_invertible(M)) return M;
    }
}

Mat random_skew_invertible(const FieldCtx& F, int n, Rng& rng) {
    while (true) {
        Mat M(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Fel x = F.random(rng);
                M.at(i, j) = x;
                M.at(j, i) = F.neg(x);
            }
        if (mat_invertible(M)) return M;
    }
}

Fel det2(const FieldCtx& F, const Mat& M) {
    return F.sub(F.mul(M.at(0, 0), M.at(1, 1)), F.mul(M.at(0, 1), M.at(1, 0)));
}

}  // namespace

TEST_CASE("gram_schmidt") {
    Rng rng(53);
    FieldCtx F5(5);
    SECTION("hyperbolic symmetric 2x2") {
        FormInstance f(sym_from(F5, {{0, 1}, {1, 0}}), FormType::orthogonal);
        auto gs = gram_schmidt(f);
        REQUIRE(gs.blocked.at(0, 1) == 0);
        REQUIRE(gs.blocked.at(1, 0) == 0);
        REQUIRE(gs.blocked.at(0, 0) != 0);
        REQUIRE(gs.blocked.at(1, 1) != 0);
        REQUIRE(gs.basis.transpose() * f.gram * gs.basis == gs.blocked);
    }
    SECTION("already diagonal") {
        FormInstance f(sym_from(F5, {{2, 0}, {0, 3}}), FormType::orthogonal);
        auto gs = gram_schmidt(f);
        REQUIRE(gs.blocked == f.gram);
    }
    SECTION("standard symplectic block stays one block") {
        FormInstance f(sym_from(F5, {{0, 1}, {4, 0}}), FormType::symplectic);
        auto gs = gram_schmidt(f);
        REQUIRE(gs.blocked == f.gram);
    }
    SECTION("random symmetric forms diagonalize exactly") {
        for (int t = 0; t < 20; ++t) {
            int n = 2 + static_cast<int>(rng.below(4));
            FormInstance f(random_symmetric_invertible(F5, n, rng), FormType::orthogonal);
            auto gs = gram_schmidt(f);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) REQUIRE(gs.blocked.at(i, j) == 0);
        }
    }
}

TEST_CASE("canonicalize orthogonal") {
    Rng rng(59);
    FieldCtx F5(5);
    SECTION("diag(2,3): discriminant 6 = 1 is square, label diag(1,1)") {
        FormInstance f(sym_from(F5, {{2, 0}, {0, 3}}), FormType::orthogonal);
        auto c = canonicalize(f, rng);
        REQUIRE(c.omega_count == 0);
        REQUIRE(c.canonical == Mat::identity(F5, 2));
    }
    SECTION("diag(1,2): discriminant 2 non-square, label diag(1,w)") {
        FormInstance f(sym_from(F5, {{1, 0}, {0, 2}}), FormType::orthogonal);
        auto c = canonicalize(f, rng);
        REQUIRE(c.omega_count == 1);
    }
    SECTION("transform identity holds on random forms incl. F_9") {
        FieldCtx F9(3, 2, {1, 0, 1});
        for (int t = 0; t < 20; ++t) {
            const FieldCtx& F = t % 2 ? F5 : F9;
            int n = 1 + static_cast<int>(rng.below(4));
            FormInstance f(random_symmetric_invertible(F, n, rng), FormType::orthogonal);
            auto c = canonicalize(f, rng);
            REQUIRE(c.transform.transpose() * f.gram * c.transform == c.canonical);
        }
    }
}

TEST_CASE("canonical label is a complete invariant for invertible symmetric 2x2 over F_5") {
    Rng rng(61);
    FieldCtx F5(5);
    int class0 = 0, class1 = 0;
    std::vector<std::pair<Mat, int>> all;
    for (Fel a = 0; a < 5; ++a)
        for (Fel b = 0; b < 5; ++b)
            for (Fel d = 0; d < 5; ++d) {
                Mat M = sym_from(F5, {{a, b}, {b, d}});
                if (!mat_invertible(M)) continue;
                FormInstance f(M, FormType::orthogonal);
                auto c = canonicalize(f, rng);
                REQUIRE((c.omega_count == 0 || c.omega_count == 1));
                (c.omega_count == 0 ? class0 : class1)++;
                // label matches the discriminant square class exactly
                REQUIRE((c.omega_count == 0) == F5.is_square(det2(F5, M)));
                all.emplace_back(M, c.omega_count);
            }
    REQUIRE(class0 > 0);
    REQUIRE(class1 > 0);
    // isometry_single agrees with label equality on every pair
    for (std::size_t i = 0; i < all.size(); i += 7)
        for (std::size_t j = 0; j < all.size(); j += 11) {
            FormInstance f(all[i].first, FormType::orthogonal);
            FormInstance g(all[j].first, FormType::orthogonal);
            auto iso = isometry_single(f, g, rng);
            REQUIRE(iso.has_value() == (all[i].second == all[j].second));
        }
}

TEST_CASE("canonicalize symplectic") {
    Rng rng(67);
    FieldCtx F5(5);
    for (int t = 0; t < 15; ++t) {
        int n = 2 * (1 + static_cast<int>(rng.below(3)));
        FormInstance f(random_skew_invertible(F5, n, rng), FormType::symplectic);
        auto c = canonicalize(f, rng);
        REQUIRE(c.transform.transpose() * f.gram * c.transform == c.canonical);
        // equal even rank implies isometric
        FormInstance g(random_skew_invertible(F5, n, rng), FormType::symplectic);
        REQUIRE(isometry_single(f, g, rng).has_value());
    }
    // odd-size invertible alternating forms are rejected at construction
    REQUIRE_THROWS_AS(FormInstance(sym_from(F5, {{0, 1, 1}, {4, 0, 1}, {4, 4, 0}}), FormType::symplectic),
                      input_error);
}

TEST_CASE("canonicalize hermitian") {
    Rng rng(71);
    FieldCtx F9(3, 2, {1, 0, 1});
    SubfieldTower t9 = subfield_tower(F9, 1);
    SECTION("1x1 conjugation-fixed entries reach (1)") {
        for (Fel alpha : {Fel{1}, Fel{2}}) {
            Mat g(F9, 1, 1);
            g.at(0, 0) = alpha;
            FormInstance f(g, FormType::hermitian, t9);
            auto c = canonicalize(f, rng);
            REQUIRE(c.canonical == Mat::identity(F9, 1));
        }
    }
    SECTION("random hermitian forms canonicalize to the identity") {
        for (int t = 0; t < 15; ++t) {
            int n = 1 + static_cast<int>(rng.below(3));
            Mat g(F9, n, n);
            while (true) {
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        if (i == j) {
                            // conjugation-fixed diagonal
                            Fel x = F9.random(rng);
                            g.at(i, i) = F9.add(x, t9.conj(x));
                        } else {
                            Fel x = F9.random(rng);
                            g.at(i, j) = x;
                            g.at(j, i) = t9.conj(x);
                        }
                    }
                if (mat_invertible(g)) break;
            }
            FormInstance f(g, FormType::hermitian, t9);
            auto c = canonicalize(f, rng);
            REQUIRE(c.canonical == Mat::identity(F9, n));
            Mat tbar = f.bar_mat(c.transform);
            REQUIRE(c.transform.transpose() * f.gram * tbar == c.canonical);
            // any two of the same size are isometric
            FormInstance h(Mat::identity(F9, n), FormType::hermitian, t9);
            REQUIRE(isometry_single(f, h, rng).has_value());
        }
    }
}

TEST_CASE("isometry_single examples") {
    Rng rng(73);
    FieldCtx F5(5);
    SECTION("same form accepts") {
        FormInstance f(sym_from(F5, {{1, 0}, {0, 2}}), FormType::orthogonal);
        REQUIRE(isometry_single(f, f, rng).has_value());
    }
    SECTION("diag(1,1) vs diag(4,4): isometric, witness verified") {
        FormInstance f(Mat::identity(F5, 2), FormType::orthogonal);
        FormInstance g(sym_from(F5, {{4, 0}, {0, 4}}), FormType::orthogonal);
        auto Y = isometry_single(f, g, rng);
        REQUIRE(Y.has_value());
        REQUIRE(Y->transpose() * f.gram * *Y == g.gram);
    }
    SECTION("diag(1,1) vs diag(1,2): different discriminant class") {
        FormInstance f(Mat::identity(F5, 2), FormType::orthogonal);
        FormInstance g(sym_from(F5, {{1, 0}, {0, 2}}), FormType::orthogonal);
        REQUIRE_FALSE(isometry_single(f, g, rng).has_value());
    }
}
