#pragma once

// Module isomorphism (conjugacy of matrix tuples) and equivalence of tuples.
// Conjugacy searches the solution space {X : X B_i = C_i X} for an invertible
// element: seeded random sampling first, then the deterministic greedy rank
// climb, then an exhaustive sweep when the field is too small to certify a
// negative and the space is small enough to enumerate.

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace starform {

inline constexpr std::uint64_t kEnumBudget = std::uint64_t(1) << 22;

namespace detail {

inline std::vector<Mat> hom_space(const MatTuple& B, const MatTuple& C) {
    const FieldCtx& F = B.field();
    MatrixConstraints mc(F, B.n(), B.n());
    for (int i = 0; i < B.m(); ++i) mc.add_intertwine(B.mats[i], C.mats[i]);
    return mc.solve();
}

inline std::optional<Mat> find_invertible(const FieldCtx& F, const std::vector<Mat>& basis, Rng& rng,
                                          std::uint64_t enum_budget) {
    if (basis.empty()) return std::nullopt;
    const int n = basis[0].rows();
    const int dim = static_cast<int>(basis.size());

    auto combine = [&](const std::vector<Fel>& c) {
        Mat X(F, n, n);
        for (int i = 0; i < dim; ++i)
            if (c[i] != 0) X = X + basis[i].scaled(c[i]);
        return X;
    };

    // 1. seeded random sampling; invertible elements are plentiful whenever
    //    one exists, so this settles almost every positive instance
    for (int t = 0; t < kRetryFactor * (dim + 4); ++t) {
        std::vector<Fel> c(dim);
        for (auto& x : c) x = F.random(rng);
        Mat X = combine(c);
        if (mat_invertible(X)) return X;
    }

    // 2. greedy rank climb: scan (basis element, scalar) pairs for a strict
    //    rank increase of lambda*X + Z_i, first improvement wins
    const std::uint64_t scalars = std::min<std::uint64_t>(F.q(), static_cast<std::uint64_t>(n) * n + 1);
    Mat X = basis[0];
    int rank = mat_rank(X);
    bool improved = true;
    while (improved && rank < n) {
        improved = false;
        for (int i = 0; i < dim && !improved; ++i)
            for (std::uint64_t lam = 0; lam < scalars && !improved; ++lam) {
                Mat cand = X.scaled(static_cast<Fel>(lam)) + basis[i];
                int r = mat_rank(cand);
                if (r > rank) {
                    X = std::move(cand);
                    rank = r;
                    improved = true;
                }
            }
    }
    if (rank == n) return X;

    // 3. the stall is a certificate when the scalar set exceeded n^2
    if (F.q() > static_cast<std::uint64_t>(n) * n) return std::nullopt;

    // 4. exhaustive sweep over the space, projectivized on the leading
    //    nonzero coefficient
    std::uint64_t count = 1;
    for (int i = 0; i < dim; ++i) {
        if (count > enum_budget / F.q() + 1) {
            count = enum_budget + 1;
            break;
        }
        count *= F.q();
    }
    if (count > enum_budget)
        throw field_too_small_error(
            "module isomorphism: field too small to certify and space too large to enumerate");
    std::vector<Fel> c(dim, 0);
    for (std::uint64_t idx = 1; idx < count; ++idx) {
        std::uint64_t t = idx;
        bool leading_seen = false;
        bool skip = false;
        for (int i = 0; i < dim; ++i) {
            c[i] = t % F.q();
            t /= F.q();
            if (!leading_seen && c[i] != 0) {
                leading_seen = true;
                if (c[i] != 1) skip = true;  // projective normalization
            }
        }
        if (skip) continue;
        Mat cand = combine(c);
        if (mat_invertible(cand)) return cand;
    }
    return std::nullopt;
}

}  // namespace detail

// Invertible A with A B_i = C_i A for all i, or none.
inline std::optional<Mat> module_iso(const MatTuple& B, const MatTuple& C, Rng& rng,
                                     std::uint64_t enum_budget = kEnumBudget) {
    require(B.n() == C.n() && B.m() == C.m(), "module_iso: shape mismatch");
    if (B.n() == 0) return Mat(B.field(), 0, 0);
    auto basis = detail::hom_space(B, C);
    auto X = detail::find_invertible(B.field(), basis, rng, enum_budget);
    if (X)
        for (int i = 0; i < B.m(); ++i)
            check_internal(*X * B.mats[i] == C.mats[i] * *X, "module_iso: witness fails");
    return X;
}

// Invertible (A, D) with A B_i = C_i D for all i, or none: the 2n-dimensional
// conjugacy reduction with the rank-selector slot prepended.
inline std::optional<std::pair<Mat, Mat>> equivalence(const MatTuple& B, const MatTuple& C, Rng& rng,
                                                      std::uint64_t enum_budget = kEnumBudget) {
    require(B.n() == C.n() && B.m() == C.m(), "equivalence: shape mismatch");
    const FieldCtx& F = B.field();
    const int n = B.n();
    auto embed = [&](const MatTuple& T) {
        MatTuple out;
        Mat sel(F, 2 * n, 2 * n);
        for (int i = 0; i < n; ++i) sel.at(i, i) = F.one();
        out.mats.push_back(sel);
        for (const Mat& M : T.mats) {
            Mat big(F, 2 * n, 2 * n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) big.at(i, n + j) = M.at(i, j);
            out.mats.push_back(big);
        }
        return out;
    };
    auto E = module_iso(embed(B), embed(C), rng, enum_budget);
    if (!E) return std::nullopt;
    Mat A(F, n, n), D(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A.at(i, j) = E->at(i, j);
            D.at(i, j) = E->at(n + i, n + j);
            check_internal(E->at(i, n + j) == 0 && E->at(n + i, j) == 0,
                           "equivalence: conjugator not block diagonal");
        }
    for (int i = 0; i < B.m(); ++i)
        check_internal(A * B.mats[i] == C.mats[i] * D, "equivalence: witness fails");
    return std::make_pair(A, D);
}

}  // namespace starform
