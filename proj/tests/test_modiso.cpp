#include <catch2/catch_amalgamated.hpp>

#include "starform/modiso.hpp"

using namespace starform;

namespace {

Mat unit(const FieldCtx& F, int n, int i, int j) {
    Mat m(F, n, n);
    m.at(i, j) = F.one();
    return m;
}

Mat diag(const FieldCtx& F, std::vector<Fel> d) {
    Mat m(F, static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

// enumerate GL(n, q) and test conjugacy directly
bool conjugate_brute(const MatTuple& B, const MatTuple& C) {
    const FieldCtx& F = B.field();
    int n = B.n();
    std::uint64_t total = 1;
    for (int i = 0; i < n * n; ++i) total *= F.q();
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Mat A(F, n, n);
        std::uint64_t t = idx;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                A.at(i, j) = t % F.q();
                t /= F.q();
            }
        if (!mat_invertible(A)) continue;
        bool ok = true;
        for (int i = 0; i < B.m() && ok; ++i) ok = (A * B.mats[i] == C.mats[i] * A);
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("module_iso examples") {
    Rng rng(41);
    FieldCtx F5(5);
    SECTION("conjugate diagonals via a permutation") {
        MatTuple B{{diag(F5, {1, 2})}, std::nullopt};
        MatTuple C{{diag(F5, {2, 1})}, std::nullopt};
        auto A = module_iso(B, C, rng);
        REQUIRE(A.has_value());
        REQUIRE(*A * B.mats[0] == C.mats[0] * *A);
    }
    SECTION("B = C accepts") {
        MatTuple B{{diag(F5, {1, 2}), unit(F5, 2, 0, 1)}, std::nullopt};
        REQUIRE(module_iso(B, B, rng).has_value());
    }
    SECTION("rank is a conjugation invariant") {
        MatTuple B{{Mat(F5, 2, 2)}, std::nullopt};
        MatTuple C{{unit(F5, 2, 0, 1)}, std::nullopt};
        REQUIRE_FALSE(module_iso(B, C, rng).has_value());
    }
}

TEST_CASE("module_iso agrees with brute force at desk scale") {
    Rng rng(43);
    for (std::uint32_t q : {3u, 5u}) {
        FieldCtx F(q);
        for (int n = 2; n <= 2; ++n) {
            for (int trial = 0; trial < 60; ++trial) {
                int m = 1 + static_cast<int>(rng.below(2));
                MatTuple B, C;
                for (int i = 0; i < m; ++i) {
                    B.mats.push_back(Mat::random(F, n, n, rng));
                    C.mats.push_back(Mat::random(F, n, n, rng));
                }
                // mix in planted positives
                if (trial % 3 == 0) {
                    Mat A = Mat::random(F, n, n, rng);
                    while (!mat_invertible(A)) A = Mat::random(F, n, n, rng);
                    Mat Ai = *mat_inverse(A);
                    C.mats.clear();
                    for (int i = 0; i < m; ++i) C.mats.push_back(A * B.mats[i] * Ai);
                }
                auto got = module_iso(B, C, rng);
                REQUIRE(got.has_value() == conjugate_brute(B, C));
            }
        }
    }
}

TEST_CASE("equivalence") {
    Rng rng(47);
    FieldCtx F5(5);
    SECTION("E12 and E21 are equivalent via the swap") {
        MatTuple B{{unit(F5, 2, 0, 1)}, std::nullopt};
        MatTuple C{{unit(F5, 2, 1, 0)}, std::nullopt};
        auto r = equivalence(B, C, rng);
        REQUIRE(r.has_value());
        auto& [A, D] = *r;
        REQUIRE(A * B.mats[0] == C.mats[0] * D);
        REQUIRE(mat_invertible(A));
        REQUIRE(mat_invertible(D));
    }
    SECTION("identity tuple") {
        MatTuple B{{Mat::identity(F5, 2)}, std::nullopt};
        REQUIRE(equivalence(B, B, rng).has_value());
    }
    SECTION("slot ranks are equivalence invariants") {
        MatTuple B{{Mat::identity(F5, 2), Mat(F5, 2, 2)}, std::nullopt};
        MatTuple C{{Mat::identity(F5, 2), Mat::identity(F5, 2)}, std::nullopt};
        REQUIRE_FALSE(equivalence(B, C, rng).has_value());
    }
    SECTION("planted equivalences are found, q = 3 small field path") {
        FieldCtx F3(3);
        for (int trial = 0; trial < 25; ++trial) {
            int n = 2 + static_cast<int>(rng.below(3));
            int m = 1 + static_cast<int>(rng.below(3));
            MatTuple B, C;
            for (int i = 0; i < m; ++i) B.mats.push_back(Mat::random(F3, n, n, rng));
            Mat A = Mat::random(F3, n, n, rng), D = Mat::random(F3, n, n, rng);
            while (!mat_invertible(A)) A = Mat::random(F3, n, n, rng);
            while (!mat_invertible(D)) D = Mat::random(F3, n, n, rng);
            for (int i = 0; i < m; ++i) C.mats.push_back(A * B.mats[i] * D);
            auto r = equivalence(B, C, rng);
            REQUIRE(r.has_value());
            for (int i = 0; i < m; ++i) REQUIRE(r->first * B.mats[i] == C.mats[i] * r->second);
        }
    }
}
