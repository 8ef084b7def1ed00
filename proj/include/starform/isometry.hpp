#pragma once

// The isometry pipeline for epsilon-symmetric matrix tuples: degenerate
// reduction, twisted equivalence, construction of the *-symmetric element,
// decomposition in the adjoint algebra, witness recovery. Also the
// general-tuple variant via symmetric/skew splitting.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "staralg.hpp"

namespace starform {

struct IsometryWitness {
    Mat F;
    std::vector<std::string> trace;   // pipeline stage notes for diagnostics
};

struct IsometryOutcome {
    std::optional<IsometryWitness> witness;
    std::string refutation_stage;     // set when no witness exists
    int lift_rounds = 0;

    bool isometric() const { return witness.has_value(); }
};

struct NondegenerateCore {
    MatTuple core;      // size (n - d), same signature
    Mat change;         // S with S^t B_i S = diag(core_i, 0)
    int kernel_dim = 0;
};

inline NondegenerateCore extract_nondegenerate(const MatTuple& B) {
    require(B.sig.has_value(), "extract_nondegenerate: signature required");
    B.validate_shapes();
    require(B.slotwise_symmetric(), "extract_nondegenerate: tuple is not slotwise symmetric");
    const FieldCtx& F = B.field();
    const int n = B.n();
    Subspace ker = tuple_kernel(B);
    const int d = ker.dim();
    // columns: a complement of the kernel first, then the kernel basis
    Mat S(F, n, n);
    {
        Subspace span(F, n);
        std::vector<std::vector<Fel>> complement;
        for (int i = 0; i < d; ++i) span.insert(ker.basis_vector(i));
        for (int j = 0; j < n && static_cast<int>(complement.size()) < n - d; ++j) {
            std::vector<Fel> e(n, 0);
            e[j] = F.one();
            if (span.insert(e)) complement.push_back(e);
        }
        check_internal(static_cast<int>(complement.size()) == n - d, "kernel complement failed");
        for (int j = 0; j < n - d; ++j)
            for (int i = 0; i < n; ++i) S.at(i, j) = complement[j][i];
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < n; ++i) S.at(i, n - d + j) = ker.basis_vector(j)[i];
    }
    NondegenerateCore out;
    out.change = S;
    out.kernel_dim = d;
    out.core.sig = B.sig;
    for (const Mat& Bi : B.mats) {
        Mat T = S.transpose() * Bi * S;
        Mat core(F, n - d, n - d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i < n - d && j < n - d)
                    core.at(i, j) = T.at(i, j);
                else
                    check_internal(T.at(i, j) == 0, "extract_nondegenerate: off-core block nonzero");
            }
        out.core.mats.push_back(core);
    }
    check_internal(out.core.m() == 0 || tuple_nondegenerate(out.core),
                   "extract_nondegenerate: core still degenerate");
    return out;
}

inline bool verify_isometry(const MatTuple& B, const MatTuple& C, const Mat& F) {
    if (B.n() != C.n() || B.m() != C.m() || F.rows() != B.n() || !F.is_square()) return false;
    if (!mat_invertible(F)) return false;
    for (int i = 0; i < B.m(); ++i)
        if (!(F.transpose() * B.mats[i] * F == C.mats[i])) return false;
    return true;
}

inline IsometryOutcome isometry_test(const MatTuple& B, const MatTuple& C, Rng& rng,
                                     std::uint64_t enum_budget = kEnumBudget) {
    require(B.sig.has_value() && C.sig.has_value(), "isometry_test: signatures required");
    require(B.n() == C.n() && B.m() == C.m() && *B.sig == *C.sig,
            "isometry_test: shapes or signatures differ");
    const FieldCtx& F = B.field();
    require(F.same_field(C.field()), "isometry_test: fields differ");

    IsometryOutcome out;
    std::vector<std::string> trace;

    NondegenerateCore nb = extract_nondegenerate(B);
    NondegenerateCore nc = extract_nondegenerate(C);
    trace.push_back("kernel dimensions " + std::to_string(nb.kernel_dim) + " / " +
                    std::to_string(nc.kernel_dim));
    if (nb.kernel_dim != nc.kernel_dim) {
        out.refutation_stage = "kernel-dimension";
        return out;
    }
    const int n = B.n();
    const int ncore = n - nb.kernel_dim;

    Mat Fcore(F, ncore, ncore);
    if (ncore > 0) {
        auto eq = equivalence(nb.core, nc.core, rng, enum_budget);
        if (!eq) {
            out.refutation_stage = "twisted-equivalence";
            return out;
        }
        // twisted orientation: with A B'_i = C'_i D, the pair (A^t, D)
        // satisfies (A^t)^t B' = C' D, and E = A^{-t} D^{-1} is *-symmetric
        // in Adj(C')
        Mat Ahat = eq->first.transpose();
        Mat D = eq->second;
        trace.push_back("twisted equivalence found");
        Mat E = *mat_inverse(Ahat) * *mat_inverse(D);
        AdjointAlgebra adj = adjoint(nc.core);
        check_internal(adj.alg.contains(E), "pipeline: E escaped the adjoint algebra");
        {
            auto ec = adj.alg.coords(E);
            check_internal(adj.star(ec) == ec, "pipeline: E is not *-symmetric");
        }
        auto dec = decompose(adj, E, rng);
        out.lift_rounds = dec.lift_rounds;
        if (!dec.X) {
            out.refutation_stage = "summand-form";
            if (dec.refuting_summand >= 0)
                out.refutation_stage += " (summand " + std::to_string(dec.refuting_summand) + ")";
            return out;
        }
        trace.push_back("decomposition solved, lift rounds " + std::to_string(dec.lift_rounds));
        Fcore = *mat_inverse(D) * *mat_inverse(*dec.X);
        check_internal(verify_isometry(nb.core, nc.core, Fcore), "pipeline: core witness fails");
    }

    // extend back through the degenerate coordinates: identity on the kernels
    Mat big(F, n, n);
    for (int i = 0; i < ncore; ++i)
        for (int j = 0; j < ncore; ++j) big.at(i, j) = Fcore.at(i, j);
    for (int j = ncore; j < n; ++j) big.at(j, j) = F.one();
    Mat full = nb.change * big * *mat_inverse(nc.change);
    check_internal(verify_isometry(B, C, full), "pipeline: full witness fails");
    trace.push_back("witness verified");
    out.witness = IsometryWitness{full, std::move(trace)};
    return out;
}

// Arbitrary square tuples, char != 2: split into symmetric and skew parts,
// with signature (+1,...,+1,-1,...,-1), and delegate.
inline IsometryOutcome isometry_general(const MatTuple& B, const MatTuple& C, Rng& rng,
                                        std::uint64_t enum_budget = kEnumBudget) {
    require(B.n() == C.n() && B.m() == C.m(), "isometry_general: shape mismatch");
    B.validate_shapes();
    C.validate_shapes();
    const FieldCtx& F = B.field();
    Fel half = F.inv(F.from_int(2));
    auto split = [&](const MatTuple& T) {
        MatTuple out;
        out.sig = std::vector<int>{};
        for (const Mat& M : T.mats) {
            out.mats.push_back((M + M.transpose()).scaled(half));
            out.sig->push_back(1);
        }
        for (const Mat& M : T.mats) {
            out.mats.push_back((M - M.transpose()).scaled(half));
            out.sig->push_back(-1);
        }
        return out;
    };
    IsometryOutcome out = isometry_test(split(B), split(C), rng, enum_budget);
    if (out.witness) {
        check_internal(verify_isometry(B, C, out.witness->F),
                       "isometry_general: witness fails on the original tuples");
    }
    return out;
}

}  // namespace starform
