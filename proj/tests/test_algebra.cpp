#include <catch2/catch_amalgamated.hpp>

#include "starform/algebra.hpp"

using namespace starform;

namespace {

Mat unit(const FieldCtx& F, int n, int i, int j) {
    Mat m(F, n, n);
    m.at(i, j) = F.one();
    return m;
}

bool coords_in(const Subspace& s, const std::vector<Fel>& v) { return s.contains(v); }

}  // namespace

TEST_CASE("close_algebra") {
    FieldCtx F5(5);
    SECTION("nilpotent E12 alone") {
        AlgebraRep A = close_algebra(F5, {unit(F5, 2, 0, 1)}, false);
        REQUIRE(A.dim() == 1);
    }
    SECTION("identity alone, unital") {
        AlgebraRep A = close_algebra(F5, {Mat::identity(F5, 2)}, true);
        REQUIRE(A.dim() == 1);
    }
    SECTION("E12, E21 generate all of M(2)") {
        AlgebraRep A = close_algebra(F5, {unit(F5, 2, 0, 1), unit(F5, 2, 1, 0)}, true);
        REQUIRE(A.dim() == 4);
    }
    SECTION("closure is product-closed on random generated algebras") {
        Rng rng(23);
        for (int t = 0; t < 10; ++t) {
            int n = 2 + static_cast<int>(rng.below(3));
            std::vector<Mat> gens{Mat::random(F5, n, n, rng)};
            if (t % 2) gens.push_back(Mat::random(F5, n, n, rng));
            AlgebraRep A = close_algebra(F5, gens, true);
            for (int a = 0; a < A.dim(); ++a)
                for (int b = 0; b < A.dim(); ++b)
                    REQUIRE(A.contains(A.basis(a) * A.basis(b)));
        }
    }
}

TEST_CASE("idempotent_from") {
    FieldCtx F5(5);
    SECTION("already idempotent diag(1,0)") {
        Mat d = unit(F5, 2, 0, 0);
        AlgebraRep A = close_algebra(F5, {d, Mat::identity(F5, 2)}, true);
        auto e = idempotent_from(A, A.coords(d));
        REQUIRE(e.has_value());
        REQUIRE(A.to_mat(*e) == d);
    }
    SECTION("nilpotent gives none") {
        Mat n12 = unit(F5, 2, 0, 1);
        AlgebraRep A = close_algebra(F5, {n12}, true);
        REQUIRE_FALSE(idempotent_from(A, A.coords(n12)).has_value());
    }
    SECTION("diag(2,0) over F_5 gives diag(1,0)") {
        Mat d(F5, 2, 2);
        d.at(0, 0) = 2;
        AlgebraRep A = close_algebra(F5, {d}, true);
        auto e = idempotent_from(A, A.coords(d));
        REQUIRE(e.has_value());
        REQUIRE(A.to_mat(*e) == unit(F5, 2, 0, 0));
    }
}

TEST_CASE("radical") {
    FieldCtx F5(5);
    SECTION("upper triangular 2x2") {
        AlgebraRep A = close_algebra(F5, {unit(F5, 2, 0, 0), unit(F5, 2, 1, 1), unit(F5, 2, 0, 1)}, true);
        REQUIRE(A.dim() == 3);
        Subspace r = radical(A);
        REQUIRE(r.dim() == 1);
        REQUIRE(coords_in(r, A.coords(unit(F5, 2, 0, 1))));
    }
    SECTION("full matrix algebra is semisimple") {
        std::vector<Mat> gens;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens.push_back(unit(F5, 2, i, j));
        FieldCtx F3(3);
        std::vector<Mat> gens3;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens3.push_back(unit(F3, 2, i, j));
        REQUIRE(radical(close_algebra(F5, gens, true)).dim() == 0);
        REQUIRE(radical(close_algebra(F3, gens3, true)).dim() == 0);
    }
    SECTION("span{I, E12}") {
        AlgebraRep A = close_algebra(F5, {Mat::identity(F5, 2), unit(F5, 2, 0, 1)}, true);
        Subspace r = radical(A);
        REQUIRE(r.dim() == 1);
        REQUIRE(coords_in(r, A.coords(unit(F5, 2, 0, 1))));
    }
    SECTION("scalars embedded with multiplicity p: trace form degenerates but chain recovers") {
        FieldCtx F3(3);
        AlgebraRep A = close_algebra(F3, {Mat::identity(F3, 3)}, true);
        REQUIRE(radical(A).dim() == 0);
    }
    SECTION("radical is a nilpotent two-sided ideal with semisimple quotient") {
        Rng rng(29);
        FieldCtx F3(3);
        for (int t = 0; t < 8; ++t) {
            const FieldCtx& F = t % 2 ? F5 : F3;
            int n = 2 + static_cast<int>(rng.below(3));
            AlgebraRep A = close_algebra(F, {Mat::random(F, n, n, rng), Mat::random(F, n, n, rng)}, true);
            Subspace r = radical(A);
            // ideal: R*A and A*R stay inside R
            for (int i = 0; i < r.dim(); ++i)
                for (int b = 0; b < A.dim(); ++b) {
                    Mat ri = A.to_mat(r.basis_vector(i));
                    REQUIRE(coords_in(r, A.coords(ri * A.basis(b))));
                    REQUIRE(coords_in(r, A.coords(A.basis(b) * ri)));
                }
            // nilpotent: R^dim = 0 via explicit power of the span
            if (r.dim() > 0) {
                std::vector<Mat> cur;
                for (int i = 0; i < r.dim(); ++i) cur.push_back(A.to_mat(r.basis_vector(i)));
                for (int e = 1; e < A.ambient() + 1; ++e) {
                    std::vector<Mat> nxt;
                    for (const Mat& x : cur)
                        for (int i = 0; i < r.dim(); ++i) nxt.push_back(x * A.to_mat(r.basis_vector(i)));
                    cur = nxt;
                    bool all_zero = true;
                    for (const Mat& x : cur) all_zero &= x.is_zero();
                    if (all_zero) break;
                }
                for (const Mat& x : cur) REQUIRE(x.is_zero());
            }
        }
    }
}

TEST_CASE("wedderburn structure") {
    Rng rng(31);
    FieldCtx F5(5);
    SECTION("embedded F_25 is one summand with n=1, q=25") {
        // {[a, 2b; b, a]} over F_5
        Mat gen(F5, 2, 2);
        gen.at(0, 1) = 2;
        gen.at(1, 0) = 1;
        AlgebraRep A = close_algebra(F5, {gen}, true);
        REQUIRE(A.dim() == 2);
        Structure sd(A, rng);
        REQUIRE(sd.radical_space().dim() == 0);
        REQUIRE(sd.summands().size() == 1);
        REQUIRE(sd.summands()[0].ni == 1);
        REQUIRE(sd.summands()[0].field.q() == 25);
    }
    SECTION("full M(2, F_3)") {
        FieldCtx F3(3);
        std::vector<Mat> gens;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) gens.push_back(unit(F3, 2, i, j));
        AlgebraRep A = close_algebra(F3, gens, true);
        Structure sd(A, rng);
        REQUIRE(sd.summands().size() == 1);
        REQUIRE(sd.summands()[0].ni == 2);
        REQUIRE(sd.summands()[0].field.q() == 3);
    }
    SECTION("diagonal pairs split into two scalar summands") {
        AlgebraRep A = close_algebra(F5, {unit(F5, 2, 0, 0), unit(F5, 2, 1, 1)}, true);
        Structure sd(A, rng);
        REQUIRE(sd.summands().size() == 2);
        for (const auto& s : sd.summands()) {
            REQUIRE(s.ni == 1);
            REQUIRE(s.field.q() == 5);
        }
    }
    SECTION("pi is multiplicative and lift is a right inverse, randomized algebras") {
        FieldCtx F3(3);
        FieldCtx F9(3, 2, {1, 0, 1});
        int cases = 0;
        for (int t = 0; t < 14; ++t) {
            const FieldCtx& F = t % 3 == 0 ? F9 : (t % 3 == 1 ? F3 : F5);
            int n = 2 + static_cast<int>(rng.below(3));
            AlgebraRep A =
                close_algebra(F, {Mat::random(F, n, n, rng), Mat::random(F, n, n, rng)}, true);
            Structure sd(A, rng);
            int total = 0;
            for (const auto& s : sd.summands()) total += s.ni * s.ni * s.di;
            REQUIRE(total + sd.radical_space().dim() == A.dim());
            for (int probe = 0; probe < 8; ++probe) {
                auto x = A.random_coords(rng);
                auto y = A.random_coords(rng);
                auto px = sd.pi(x), py = sd.pi(y), pxy = sd.pi(A.mul_coords(x, y));
                for (std::size_t i = 0; i < px.size(); ++i) REQUIRE(px[i] * py[i] == pxy[i]);
                // pi(lift(s)) = s for random component tuples
                std::vector<Mat> comp;
                for (const auto& s : sd.summands())
                    comp.push_back(Mat::random(s.field, s.ni, s.ni, rng));
                auto lifted = sd.lift(comp);
                auto back = sd.pi(lifted);
                for (std::size_t i = 0; i < comp.size(); ++i) REQUIRE(back[i] == comp[i]);
            }
            ++cases;
        }
        REQUIRE(cases == 14);
    }
    SECTION("quotient modulo the radical is semisimple") {
        FieldCtx F3(3);
        for (int t = 0; t < 8; ++t) {
            const FieldCtx& F = t % 2 ? F3 : F5;
            int n = 2 + static_cast<int>(rng.below(3));
            AlgebraRep A =
                close_algebra(F, {Mat::random(F, n, n, rng), Mat::random(F, n, n, rng)}, true);
            Structure sd(A, rng);
            // left-regular representation of the quotient on itself
            int Q = sd.quotient_dim();
            std::vector<Mat> regular;
            for (const auto& b : sd.qbasis()) {
                Mat L(F, Q, Q);
                for (int u = 0; u < Q; ++u) {
                    auto col = sd.qcoords(sd.qmul(b, sd.qbasis()[u]));
                    for (int i = 0; i < Q; ++i) L.at(i, u) = col[i];
                }
                regular.push_back(L);
            }
            AlgebraRep quo = close_algebra(F, regular, true);
            REQUIRE(radical(quo).dim() == 0);
        }
    }
}

TEST_CASE("every basis of a non-nilpotent algebra contains a non-nilpotent element") {
    Rng rng(37);
    FieldCtx F5(5);
    for (int t = 0; t < 10; ++t) {
        int n = 2 + static_cast<int>(rng.below(3));
        AlgebraRep A = close_algebra(F5, {Mat::random(F5, n, n, rng)}, true);
        bool found = false;
        for (int i = 0; i < A.dim() && !found; ++i) {
            std::vector<Fel> c(A.dim(), 0);
            c[i] = F5.one();
            if (idempotent_from(A, c).has_value()) found = true;
        }
        REQUIRE(found);
    }
}
