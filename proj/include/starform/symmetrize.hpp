#pragma once

// Epsilon-symmetrizability of arbitrary matrix tuples: decide whether an
// invertible E makes every E B_i epsilon_i-symmetric and produce the witness
// pair. The search maintains Z in the solution space L and climbs the
// dimension of the right ideal Z L' Adj(B) modulo the radical of Adj(B).
// Also the two singular-space recognizers built on top of it.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "matrix.hpp"

namespace starform {

struct SymSpace {
    std::vector<Mat> L;    // {Z : Z B_i = eps_i B_i^t Z^t}
    std::vector<Mat> Lt;   // the companion space for the flipped tuple
    AlgebraRep adj;        // second-component projection of the paired adjoint
};

struct SymWitness {
    Mat E;        // invertible; E B_i is eps_i-symmetric for all i
    Mat A, D;     // the two-sided pair: A B_i D eps_i-symmetric (A = E, D = I)
};

inline bool dim_precheck(const MatTuple& B) {
    return tuple_kernel(B).dim() + tuple_image(B).dim() == B.n();
}

namespace detail {

inline std::vector<Mat> solve_l_space(const MatTuple& B, bool transpose_side) {
    const FieldCtx& F = B.field();
    MatrixConstraints mc(F, B.n(), B.n());
    for (int i = 0; i < B.m(); ++i) {
        int eps = (*B.sig)[i];
        Mat P = transpose_side ? B.mats[i].transpose() : B.mats[i];
        Mat Q = transpose_side ? B.mats[i] : B.mats[i].transpose();
        if (eps == -1) Q = Q.negated();
        mc.add_right_mul_vs_transpose(P, Q);
    }
    return mc.solve();
}

// Second-component projection of {(A, D) : A^t B_i = B_i D} for an arbitrary
// tuple; faithful and product-closed once the tuple is non-degenerate.
inline AlgebraRep general_adjoint(const MatTuple& B) {
    const FieldCtx& F = B.field();
    const int n = B.n();
    std::vector<std::vector<Fel>> rows;
    for (const Mat& Bi : B.mats)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                std::vector<Fel> row(static_cast<std::size_t>(2) * n * n, 0);
                for (int l = 0; l < n; ++l)
                    row[n * n + l * n + r] = F.add(row[n * n + l * n + r], Bi.at(l, c));
                for (int l = 0; l < n; ++l) row[l * n + c] = F.sub(row[l * n + c], Bi.at(r, l));
                rows.push_back(std::move(row));
            }
    Mat sys = Mat::from_rows(F, rows);
    Subspace pairs = Subspace::span(F, 2 * n * n, mat_kernel(sys));
    std::vector<Mat> dbasis;
    for (int i = 0; i < pairs.dim(); ++i) {
        auto v = pairs.basis_vector(i);
        Mat D(F, n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) D.at(r, c) = v[r * n + c];
        dbasis.push_back(D);
    }
    return AlgebraRep(F, n, dbasis, true);
}

struct CoreReduction {
    MatTuple core;
    Mat P;   // column change: B_i P has its last d columns zero
    Mat Q;   // row change: Q B_i P = diag(core_i, 0)
    int d = 0;
};

inline CoreReduction reduce_to_core(const MatTuple& B) {
    const FieldCtx& F = B.field();
    const int n = B.n();
    Subspace ker = tuple_kernel(B);
    Subspace im = tuple_image(B);
    const int d = ker.dim();
    check_internal(im.dim() == n - d, "core reduction requires the dimension precheck");

    auto extend_basis = [&](const Subspace& first, bool first_goes_first) {
        Mat M(F, n, n);
        Subspace span = first;
        std::vector<std::vector<Fel>> extra;
        for (int j = 0; j < n && static_cast<int>(extra.size()) < n - first.dim(); ++j) {
            std::vector<Fel> e(n, 0);
            e[j] = F.one();
            if (span.insert(e)) extra.push_back(e);
        }
        int col = 0;
        if (first_goes_first)
            for (int i = 0; i < first.dim(); ++i) {
                auto v = first.basis_vector(i);
                for (int r = 0; r < n; ++r) M.at(r, col) = v[r];
                ++col;
            }
        for (const auto& v : extra) {
            for (int r = 0; r < n; ++r) M.at(r, col) = v[r];
            ++col;
        }
        if (!first_goes_first)
            for (int i = 0; i < first.dim(); ++i) {
                auto v = first.basis_vector(i);
                for (int r = 0; r < n; ++r) M.at(r, col) = v[r];
                ++col;
            }
        return M;
    };

    CoreReduction out;
    out.d = d;
    out.P = extend_basis(ker, false);        // kernel basis in the last d columns
    Mat U = extend_basis(im, true);          // image basis first
    out.Q = *mat_inverse(U);
    out.core.sig = B.sig;
    for (const Mat& Bi : B.mats) {
        Mat T = out.Q * Bi * out.P;
        Mat core(F, n - d, n - d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i < n - d && j < n - d)
                    core.at(i, j) = T.at(i, j);
                else
                    check_internal(T.at(i, j) == 0, "core reduction: off-core block nonzero");
            }
        out.core.mats.push_back(core);
    }
    return out;
}

inline bool slotwise_witness_ok(const MatTuple& B, const Mat& E) {
    for (int i = 0; i < B.m(); ++i) {
        Mat EB = E * B.mats[i];
        Mat want = (*B.sig)[i] == 1 ? EB : EB.negated();
        if (!(EB.transpose() == want)) return false;
    }
    return mat_invertible(E);
}

// The main climb on a non-degenerate tuple. Returns an invertible element of
// L or none.
inline std::optional<Mat> symmetrize_core(const MatTuple& B) {
    const FieldCtx& F = B.field();
    const int n = B.n();
    if (n == 0) return Mat(F, 0, 0);

    std::vector<Mat> L = solve_l_space(B, false);
    if (L.empty()) return std::nullopt;
    std::vector<Mat> Lt = solve_l_space(B, true);
    AlgebraRep adj = general_adjoint(B);

    // the scalar scan must exceed the dimension of the adjoint algebra for
    // the stall to certify a negative
    if (F.q() <= static_cast<std::uint64_t>(adj.dim()))
        throw field_too_small_error("symmetrize: field no larger than dim Adj(B)");

    Subspace rad = radical(adj);
    Subspace rad_flat(F, n * n);
    for (int i = 0; i < rad.dim(); ++i) rad_flat.insert(adj.to_mat(rad.basis_vector(i)).flatten());

    auto ideal_dim = [&](const Mat& Z) {
        Subspace s = rad_flat;
        for (const Mat& W : Lt)
            for (int b = 0; b < adj.dim(); ++b) s.insert((Z * W * adj.basis(b)).flatten());
        return s.dim();
    };

    const std::uint64_t scalars =
        std::min<std::uint64_t>(F.q(), static_cast<std::uint64_t>(n) * n + 1);

    Mat Z = L[0];
    int guard = 0;
    while (true) {
        if (mat_invertible(Z)) return Z;
        check_internal(++guard <= adj.dim() + 2, "symmetrize climb did not terminate");
        int cur = ideal_dim(Z);
        bool improved = false;
        for (std::size_t i = 0; i < L.size() && !improved; ++i)
            for (std::uint64_t lam = 0; lam < scalars && !improved; ++lam) {
                Mat cand = Z.scaled(static_cast<Fel>(lam)) + L[i];
                if (mat_invertible(cand)) return cand;
                if (ideal_dim(cand) > cur) {
                    Z = std::move(cand);
                    improved = true;
                }
            }
        if (!improved) return std::nullopt;
    }
}

}  // namespace detail

inline SymSpace sym_space(const MatTuple& B) {
    require(B.sig.has_value(), "sym_space: signature required");
    B.validate_shapes();
    return SymSpace{detail::solve_l_space(B, false), detail::solve_l_space(B, true),
                    detail::general_adjoint(B)};
}

inline std::optional<SymWitness> symmetrize(const MatTuple& B) {
    require(B.sig.has_value(), "symmetrize: signature (epsilon vector) required");
    B.validate_shapes();
    const FieldCtx& F = B.field();
    const int n = B.n();
    if (!dim_precheck(B)) return std::nullopt;
    detail::CoreReduction red = detail::reduce_to_core(B);
    auto Ecore = detail::symmetrize_core(red.core);
    if (!Ecore) return std::nullopt;

    // assemble E = P^{-t} diag(E_core, I_d) Q; the zero blocks keep every
    // E B_i slotwise symmetric
    Mat big(F, n, n);
    for (int i = 0; i < n - red.d; ++i)
        for (int j = 0; j < n - red.d; ++j) big.at(i, j) = Ecore->at(i, j);
    for (int j = n - red.d; j < n; ++j) big.at(j, j) = F.one();
    Mat E = mat_inverse(red.P.transpose()).value() * big * red.Q;
    check_internal(detail::slotwise_witness_ok(B, E), "symmetrize: assembled witness fails");
    SymWitness out{E, E, Mat::identity(F, n)};
    return out;
}

// Column flip: the i-th output matrix collects the i-th columns of the
// inputs. An involution on n-tuples of n x n matrices.
inline MatTuple lovasz_flip(const std::vector<Mat>& basis) {
    require(!basis.empty(), "lovasz_flip: empty input");
    const FieldCtx& F = basis[0].field();
    const int n = basis[0].rows();
    require(static_cast<int>(basis.size()) == n, "lovasz_flip: need exactly n matrices of size n");
    for (const Mat& M : basis) require(M.is_square() && M.rows() == n, "lovasz_flip: shape mismatch");
    MatTuple out;
    for (int i = 0; i < n; ++i) {
        Mat Bi(F, n, n);
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r) Bi.at(r, j) = basis[j].at(r, i);
        out.mats.push_back(Bi);
    }
    return out;
}

struct PitReport {
    std::optional<SymWitness> skew_subspace;   // equivalent to a skew subspace
    std::optional<SymWitness> skew_induced;    // flip is skew-symmetrizable
    std::string note;
};

inline PitReport pit_witness(const std::vector<Mat>& basis) {
    require(!basis.empty(), "pit_witness: empty basis");
    const int n = basis[0].rows();
    PitReport out;
    MatTuple tup;
    tup.mats = basis;
    tup.sig = std::vector<int>(basis.size(), -1);
    out.skew_subspace = symmetrize(tup);

    if (static_cast<int>(basis.size()) == n) {
        MatTuple flipped = lovasz_flip(basis);
        flipped.sig = std::vector<int>(n, -1);
        out.skew_induced = symmetrize(flipped);
    } else {
        out.note = "skew-induced test skipped: basis size differs from the matrix size";
    }
    return out;
}

}  // namespace starform
