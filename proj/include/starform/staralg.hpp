#pragma once

// The *-algebra layer: adjoint algebras of epsilon-symmetric tuples with the
// involution as an explicit coordinate map, recognition of the involution
// type on simple summands, and the *-symmetric decomposition solver (solve in
// the semisimple quotient summand by summand, then correct through the
// radical).

#include <optional>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "forms.hpp"
#include "modiso.hpp"

namespace starform {

struct AdjointAlgebra {
    AlgebraRep alg;   // second-component projection {D : exists A, A^t B_i = B_i D}
    Mat star_mat;     // involution in basis coordinates: D -> the paired A
    MatTuple source;

    std::vector<Fel> star(const std::vector<Fel>& c) const {
        const FieldCtx& F = alg.field();
        std::vector<Fel> out(alg.dim(), 0);
        for (int i = 0; i < alg.dim(); ++i) {
            Fel acc = 0;
            for (int j = 0; j < alg.dim(); ++j) acc = F.add(acc, F.mul(star_mat.at(i, j), c[j]));
            out[i] = acc;
        }
        return out;
    }
};

// Adjoint algebra of a non-degenerate slotwise epsilon-symmetric tuple,
// identified with its second-component projection; the star map is read off
// the paired solutions of A^t B_i = B_i D.
inline AdjointAlgebra adjoint(const MatTuple& B) {
    require(B.sig.has_value(), "adjoint: tuple needs a signature vector");
    B.validate_shapes();
    require(B.slotwise_symmetric(), "adjoint: tuple is not slotwise epsilon-symmetric");
    require(tuple_nondegenerate(B), "adjoint: tuple is degenerate");
    const FieldCtx& F = B.field();
    const int n = B.n();

    // unknowns: D entries then A entries
    std::vector<std::vector<Fel>> rows;
    for (const Mat& Bi : B.mats)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                std::vector<Fel> row(static_cast<std::size_t>(2) * n * n, 0);
                // (A^t B_i)[r][c] = sum_l A[l][r] B_i[l][c]
                for (int l = 0; l < n; ++l)
                    row[n * n + l * n + r] = F.add(row[n * n + l * n + r], Bi.at(l, c));
                // -(B_i D)[r][c] = -sum_l B_i[r][l] D[l][c]
                for (int l = 0; l < n; ++l)
                    row[l * n + c] = F.sub(row[l * n + c], Bi.at(r, l));
                rows.push_back(std::move(row));
            }
    Mat sys = Mat::from_rows(F, rows);
    Subspace pairs = Subspace::span(F, 2 * n * n, mat_kernel(sys));

    std::vector<Mat> dbasis;
    std::vector<Mat> abasis;
    for (int i = 0; i < pairs.dim(); ++i) {
        auto v = pairs.basis_vector(i);
        Mat D(F, n, n), A(F, n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                D.at(r, c) = v[r * n + c];
                A.at(r, c) = v[n * n + r * n + c];
            }
        dbasis.push_back(D);
        abasis.push_back(A);
    }
    AdjointAlgebra out{AlgebraRep(F, n, dbasis, true), Mat(F, pairs.dim(), pairs.dim()), B};
    // pairs are echelonized by the D block, so D-parts coincide with the
    // algebra basis in order; the star of basis element i is its A-part
    for (int i = 0; i < pairs.dim(); ++i) {
        check_internal(out.alg.basis(i) == dbasis[i], "adjoint: echelon order mismatch");
        auto c = out.alg.try_coords(abasis[i]);
        check_internal(c.has_value(), "adjoint: star image escapes the algebra");
        for (int r = 0; r < pairs.dim(); ++r) out.star_mat.at(r, i) = (*c)[r];
    }
    return out;
}

enum class StarKind { orthogonal, symplectic, hermitian, exchange };

inline const char* star_kind_name(StarKind k) {
    switch (k) {
        case StarKind::orthogonal: return "orthogonal";
        case StarKind::symplectic: return "symplectic";
        case StarKind::hermitian: return "hermitian";
        default: return "exchange";
    }
}

struct FixedSummandStar {
    StarKind kind = StarKind::orthogonal;
    Mat witness;                          // over the summand field
    std::optional<SubfieldTower> tower;   // hermitian only
};

struct StarStructure {
    std::vector<int> pairing;                           // involution on summand indices
    std::vector<std::optional<FixedSummandStar>> fixed; // populated where pairing[i] == i

    int summand_count() const { return static_cast<int>(pairing.size()); }
};

namespace detail {

// Induced involution on one summand, transported to M(n_i, F_{q_i}).
struct SummandStarMap {
    const Structure* sd;
    const AdjointAlgebra* adj;
    const SimpleSummand* s;

    Mat operator()(const Mat& X) const {
        auto inside = sd->from_matrix(*s, X);
        auto starred = sd->reduce(adj->star(inside));
        return sd->to_matrix(*s, sd->qmul(s->central_idem, starred));
    }
};

}  // namespace detail

// Determines the summand pairing and, on fixed summands, the involution type
// with its Gram witness.
inline StarStructure induced_star_structure(const AdjointAlgebra& adj, const Structure& sd, Rng& rng) {
    const auto& summands = sd.summands();
    const int count = static_cast<int>(summands.size());
    StarStructure out;
    out.pairing.assign(count, -1);
    out.fixed.resize(count);

    // the radical is a *-ideal, so the involution descends; push the central
    // idempotents through to read the pairing
    for (int i = 0; i < count; ++i) {
        auto img = sd.reduce(adj.star(summands[i].central_idem));
        int match = -1;
        for (int j = 0; j < count; ++j)
            if (img == summands[j].central_idem) {
                match = j;
                break;
            }
        check_internal(match >= 0, "star does not permute the central idempotents");
        out.pairing[i] = match;
    }
    for (int i = 0; i < count; ++i)
        check_internal(out.pairing[out.pairing[i]] == i, "summand pairing is not an involution");

    for (int i = 0; i < count; ++i) {
        if (out.pairing[i] != i) continue;
        const SimpleSummand& s = summands[i];
        const FieldCtx& E = s.field;
        detail::SummandStarMap sigma{&sd, &adj, &s};

        // involution induced on the center field: apply the transported star
        // to a scalar matrix built from the field generator
        Fel gconj;
        {
            Mat gscalar = Mat::identity(E, s.ni).scaled(s.gamma_fel);
            Mat gstar = sigma(gscalar);
            gconj = gstar.at(0, 0);
            check_internal(gstar == Mat::identity(E, s.ni).scaled(gconj),
                           "star image of a central element is not central");
        }
        bool field_involution = gconj != s.gamma_fel;
        std::optional<SubfieldTower> tower;
        if (field_involution) {
            check_internal(E.k() % 2 == 0, "center involution on an odd-degree extension");
            tower = subfield_tower(E, E.k() / 2);
            check_internal(tower->conj(s.gamma_fel) == gconj,
                           "center involution is not the quadratic Frobenius");
        }
        auto bar = [&](Fel x) { return field_involution ? tower->conj(x) : x; };
        auto bar_mat = [&](const Mat& M) { return M.map_entries([&](Fel x) { return bar(x); }); };

        // Gram witness: Y sigma(U) = bar(U)^t Y over the standard units
        MatrixConstraints mc(E, s.ni, s.ni);
        std::vector<std::pair<Mat, Mat>> unit_images;
        for (int a = 0; a < s.ni; ++a)
            for (int b = 0; b < s.ni; ++b) {
                Mat U(E, s.ni, s.ni);
                U.at(a, b) = E.one();
                Mat P = sigma(U);
                Mat Q = bar_mat(U).transpose();
                mc.add_intertwine(P, Q);
                unit_images.emplace_back(std::move(P), std::move(Q));
            }
        auto sols = mc.solve();
        check_internal(!sols.empty(), "no Gram witness for the induced involution");
        Mat W = sols[0];
        if (!mat_invertible(W)) {
            bool found = false;
            for (int t = 0; t < kRetryFactor && !found; ++t) {
                Mat cand(E, s.ni, s.ni);
                for (const Mat& b : sols) cand = cand + b.scaled(E.random(rng));
                if (mat_invertible(cand)) {
                    W = cand;
                    found = true;
                }
            }
            check_internal(found, "Gram witness space has no invertible element");
        }

        FixedSummandStar data;
        data.tower = tower;
        if (!field_involution) {
            if (W.transpose() == W)
                data.kind = StarKind::orthogonal;
            else if (W.transpose() == W.negated())
                data.kind = StarKind::symplectic;
            else
                throw internal_error("witness is neither symmetric nor skew");
        } else {
            data.kind = StarKind::hermitian;
            // the solution space is a scalar line, so W = c A for the true
            // conjugate-symmetric witness A; symmetrize away the scalar
            Mat Wc = bar_mat(W).transpose();
            Mat Wsym = W + Wc;
            if (!Wsym.is_zero()) {
                W = Wsym;
            } else {
                // c purely trace-zero: twist by another trace-zero element
                Fel tau = 0;
                for (Fel cand = 1; cand < E.q(); ++cand)
                    if (tower->conj(cand) == E.neg(cand)) {
                        tau = cand;
                        break;
                    }
                check_internal(tau != 0, "no trace-zero element for witness normalization");
                W = (W - Wc).scaled(tau);
            }
            check_internal(bar_mat(W).transpose() == W && mat_invertible(W),
                           "hermitian witness normalization failed");
        }
        data.witness = W;

        // the reconstructed involution matches sigma on every unit
        Mat Winv = *mat_inverse(W);
        for (const auto& [P, Q] : unit_images)
            check_internal(P == Winv * Q * W, "reconstructed involution mismatch");
        out.fixed[i] = std::move(data);
    }
    return out;
}

// X_i with sigma(X_i) X_i = E_i inside one fixed simple summand, or none if
// the single-form comparison refutes.
inline std::optional<Mat> solve_simple(const SimpleSummand& s, const FixedSummandStar& data,
                                       const Mat& Ei, Rng& rng) {
    check_internal(Ei.rows() == s.ni && Ei.field().same_field(s.field),
                   "solve_simple: component does not live in the summand");
    FormType ft = data.kind == StarKind::orthogonal    ? FormType::orthogonal
                  : data.kind == StarKind::symplectic ? FormType::symplectic
                                                       : FormType::hermitian;
    FormInstance fA(data.witness, ft, data.tower);
    Mat F = data.witness * Ei;
    FormInstance fF(F, ft, data.tower);
    auto Y = isometry_single(fA, fF, rng);
    if (!Y) return std::nullopt;
    Mat X = ft == FormType::hermitian ? Y->map_entries([&](Fel x) { return data.tower->conj(x); }) : *Y;
    // sigma(X) X = W^{-1} bar(X)^t W X
    Mat check = *mat_inverse(data.witness) * fA.bar_mat(X).transpose() * data.witness * X;
    check_internal(check == Ei, "solve_simple: X*X != E in the summand");
    return X;
}

struct SemisimpleSolution {
    std::vector<Fel> xbar;    // reduced coordinates in the quotient
    int refuting_summand = -1;
};

// Assemble the quotient solution summand by summand: swapped pairs always
// contribute (E_i, I); fixed summands go through the single-form solver.
inline std::optional<SemisimpleSolution> solve_semisimple(const AdjointAlgebra& adj,
                                                          const Structure& sd,
                                                          const StarStructure& ss,
                                                          const std::vector<Fel>& Ebar, Rng& rng) {
    const auto& summands = sd.summands();
    std::vector<Mat> components;
    components.reserve(summands.size());
    std::vector<Mat> Ecomp = sd.pi(Ebar);
    for (std::size_t i = 0; i < summands.size(); ++i) {
        int j = ss.pairing[static_cast<int>(i)];
        if (j == static_cast<int>(i)) {
            auto X = solve_simple(summands[i], *ss.fixed[i], Ecomp[i], rng);
            if (!X) return std::nullopt;
            components.push_back(std::move(*X));
        } else if (j > static_cast<int>(i)) {
            components.push_back(Ecomp[i]);
        } else {
            components.push_back(Mat::identity(summands[i].field, summands[i].ni));
        }
    }
    SemisimpleSolution out;
    out.xbar = sd.lift(components);
    // exact check in the quotient
    auto starred = sd.reduce(adj.star(out.xbar));
    check_internal(sd.qmul(starred, out.xbar) == sd.reduce(Ebar),
                   "solve_semisimple: X*X != E in the quotient");
    return out;
}

struct LiftResult {
    std::vector<Fel> x;
    int rounds = 0;
};

// Correct a quotient solution through the radical: with U = (E - Y*Y)/2 and
// Z = Y^{-*} U, the update Y + Z squares the residual ideal each round.
inline LiftResult lift_through_radical(const AdjointAlgebra& adj, const std::vector<Fel>& E,
                                       const std::vector<Fel>& Ybar) {
    const AlgebraRep& A = adj.alg;
    const FieldCtx& F = A.field();
    LiftResult out{Ybar, 0};
    int max_rounds = 1;
    while ((1 << max_rounds) < A.ambient() + 1) ++max_rounds;
    while (true) {
        std::vector<Fel> resid = A.sub_coords(E, A.mul_coords(adj.star(out.x), out.x));
        if (AlgebraRep::coords_zero(resid)) return out;
        check_internal(out.rounds < max_rounds + 1, "radical lifting exceeded the round bound");
        std::vector<Fel> U = A.scale_coords(resid, F.inv(F.from_int(2)));
        Mat Ystar = A.to_mat(adj.star(out.x));
        auto Yinv = mat_inverse(Ystar);
        check_internal(Yinv.has_value(), "radical lifting: intermediate Y not invertible");
        std::vector<Fel> Z = A.coords(*Yinv * A.to_mat(U));
        out.x = A.add_coords(out.x, Z);
        ++out.rounds;
    }
}

struct DecomposeOutcome {
    std::optional<Mat> X;
    int refuting_summand = -1;
    int lift_rounds = 0;
};

// Full chain for X* X = E in the adjoint algebra: structure, star
// recognition, semisimple solution, radical correction.
inline DecomposeOutcome decompose(const AdjointAlgebra& adj, const Structure& sd,
                                  const StarStructure& ss, const Mat& E, Rng& rng) {
    const AlgebraRep& A = adj.alg;
    require(A.contains(E), "decompose: E is not in the adjoint algebra");
    require(mat_invertible(E), "decompose: E must be invertible");
    std::vector<Fel> ec = A.coords(E);
    require(adj.star(ec) == ec, "decompose: E must be *-symmetric");

    DecomposeOutcome out;
    auto semi = solve_semisimple(adj, sd, ss, sd.reduce(ec), rng);
    if (!semi) {
        // recover which summand refused for the diagnostic trace
        std::vector<Mat> Ecomp = sd.pi(ec);
        for (std::size_t i = 0; i < sd.summands().size(); ++i) {
            if (ss.pairing[static_cast<int>(i)] != static_cast<int>(i)) continue;
            if (!solve_simple(sd.summands()[i], *ss.fixed[i], Ecomp[i], rng))
                out.refuting_summand = static_cast<int>(i);
        }
        return out;
    }
    auto lifted = lift_through_radical(adj, ec, semi->xbar);
    out.lift_rounds = lifted.rounds;
    Mat X = A.to_mat(lifted.x);
    check_internal(A.to_mat(adj.star(lifted.x)) * X == E, "decompose: X*X != E");
    out.X = X;
    return out;
}

inline DecomposeOutcome decompose(const AdjointAlgebra& adj, const Mat& E, Rng& rng) {
    Structure sd(adj.alg, rng);
    StarStructure ss = induced_star_structure(adj, sd, rng);
    return decompose(adj, sd, ss, E, rng);
}

}  // namespace starform
