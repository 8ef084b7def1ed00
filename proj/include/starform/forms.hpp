#pragma once

// Single classical forms over F_q: generalized Gram-Schmidt, canonical forms,
// and single-form isometry with an explicit transformation. Orthogonal forms
// canonicalize to diag(1,...,1) or diag(1,...,1,w) by discriminant class,
// symplectic forms to standard J blocks, Hermitian forms to the identity.

#include <optional>
#include <utility>
#include <vector>

#include "field.hpp"
#include "matrix.hpp"

namespace starform {

enum class FormType { orthogonal, symplectic, hermitian };

inline const char* form_type_name(FormType t) {
    switch (t) {
        case FormType::orthogonal: return "orthogonal";
        case FormType::symplectic: return "symplectic";
        default: return "hermitian";
    }
}

struct FormInstance {
    Mat gram;
    FormType type = FormType::orthogonal;
    std::optional<SubfieldTower> conj;  // hermitian only

    FormInstance() = default;
    FormInstance(Mat g, FormType t, std::optional<SubfieldTower> c = std::nullopt)
        : gram(std::move(g)), type(t), conj(std::move(c)) {
        const FieldCtx& F = gram.field();
        require(gram.is_square(), "form: gram matrix must be square");
        require(mat_invertible(gram), "form: gram matrix must be invertible");
        switch (type) {
            case FormType::orthogonal:
                require(gram.transpose() == gram, "orthogonal form: gram not symmetric");
                break;
            case FormType::symplectic:
                require(gram.transpose() == gram.negated(), "symplectic form: gram not skew");
                require(gram.rows() % 2 == 0,
                        "symplectic form: invertible alternating forms have even size");
                break;
            case FormType::hermitian:
                require(conj.has_value() && conj->field->same_field(F) && conj->sub_k * 2 == F.k(),
                        "hermitian form: quadratic subfield tower required");
                require(gram.map_entries([&](Fel x) { return conj->conj(x); }).transpose() == gram,
                        "hermitian form: gram not conjugate-symmetric");
                break;
        }
    }

    int n() const { return gram.rows(); }
    const FieldCtx& field() const { return gram.field(); }

    Fel bar(Fel x) const { return type == FormType::hermitian ? conj->conj(x) : x; }

    Mat bar_mat(const Mat& M) const {
        return type == FormType::hermitian ? M.map_entries([&](Fel x) { return conj->conj(x); }) : M;
    }

    // b(u, v) = u^t G v'  (v' conjugated in the hermitian case)
    Fel eval(const std::vector<Fel>& u, const std::vector<Fel>& v) const {
        const FieldCtx& F = field();
        Fel acc = 0;
        for (int i = 0; i < n(); ++i) {
            if (u[i] == 0) continue;
            Fel row = 0;
            for (int j = 0; j < n(); ++j) row = F.add(row, F.mul(gram.at(i, j), bar(v[j])));
            acc = F.add(acc, F.mul(u[i], row));
        }
        return acc;
    }
};

struct GramSchmidtResult {
    Mat basis;   // columns; basis^t G basis' is block diagonal
    Mat blocked; // the block-diagonalized gram
};

struct CanonicalForm {
    FormType type = FormType::orthogonal;
    int n = 0;
    int omega_count = 0;  // orthogonal only: 0 or 1
    Fel omega = 0;        // the non-square used for the label
    Mat transform;        // T with T^t G T' = canonical
    Mat canonical;

    bool same_label(const CanonicalForm& o) const {
        return type == o.type && n == o.n && omega_count == o.omega_count;
    }
};

namespace detail {

inline Mat basis_transformed_gram(const FormInstance& f, const Mat& T) {
    return T.transpose() * f.gram * f.bar_mat(T);
}

}  // namespace detail

inline GramSchmidtResult gram_schmidt(const FormInstance& f) {
    const FieldCtx& F = f.field();
    const int n = f.n();
    std::vector<std::vector<Fel>> pending;
    for (int j = 0; j < n; ++j) {
        std::vector<Fel> e(n, 0);
        e[j] = F.one();
        pending.push_back(std::move(e));
    }
    std::vector<std::vector<Fel>> done;

    auto scale_vec = [&](std::vector<Fel> v, Fel s) {
        for (auto& x : v) x = F.mul(x, s);
        return v;
    };
    auto add_scaled = [&](std::vector<Fel> v, const std::vector<Fel>& w, Fel s) {
        for (int i = 0; i < n; ++i) v[i] = F.add(v[i], F.mul(s, w[i]));
        return v;
    };

    if (f.type == FormType::symplectic) {
        while (!pending.empty()) {
            // locate a non-orthogonal pair and build a hyperbolic block
            int pi = -1, pj = -1;
            for (std::size_t i = 0; i < pending.size() && pi < 0; ++i)
                for (std::size_t j = i + 1; j < pending.size(); ++j)
                    if (f.eval(pending[i], pending[j]) != 0) {
                        pi = static_cast<int>(i);
                        pj = static_cast<int>(j);
                        break;
                    }
            check_internal(pi >= 0, "gram_schmidt: alternating form degenerate on the residual");
            std::vector<Fel> e = pending[pi];
            Fel c = f.eval(e, pending[pj]);
            std::vector<Fel> h = scale_vec(pending[pj], F.inv(c));
            std::vector<std::vector<Fel>> rest;
            for (std::size_t k = 0; k < pending.size(); ++k) {
                if (static_cast<int>(k) == pi || static_cast<int>(k) == pj) continue;
                std::vector<Fel> u = pending[k];
                u = add_scaled(u, e, f.eval(h, u));
                u = add_scaled(u, h, F.neg(f.eval(e, u)));
                rest.push_back(std::move(u));
            }
            done.push_back(std::move(e));
            done.push_back(std::move(h));
            pending = std::move(rest);
        }
    } else {
        while (!pending.empty()) {
            int piv = -1;
            for (std::size_t i = 0; i < pending.size(); ++i)
                if (f.eval(pending[i], pending[i]) != 0) {
                    piv = static_cast<int>(i);
                    break;
                }
            if (piv < 0) {
                // all isotropic: repair a pair; char != 2 makes the sum work
                int pi = -1, pj = -1;
                for (std::size_t i = 0; i < pending.size() && pi < 0; ++i)
                    for (std::size_t j = i + 1; j < pending.size(); ++j)
                        if (f.eval(pending[i], pending[j]) != 0) {
                            pi = static_cast<int>(i);
                            pj = static_cast<int>(j);
                            break;
                        }
                check_internal(pi >= 0, "gram_schmidt: form degenerate on the residual");
                Fel c = f.eval(pending[pi], pending[pj]);
                // lambda with lambda' c = 1 keeps the value away from zero
                Fel lam = f.bar(F.inv(c));
                pending[pi] = add_scaled(pending[pi], pending[pj], lam);
                piv = pi;
            }
            std::vector<Fel> v = pending[piv];
            Fel vv = f.eval(v, v);
            std::vector<std::vector<Fel>> rest;
            for (std::size_t k = 0; k < pending.size(); ++k) {
                if (static_cast<int>(k) == piv) continue;
                Fel alpha = f.bar(F.div(f.eval(v, pending[k]), vv));
                rest.push_back(add_scaled(pending[k], v, F.neg(alpha)));
            }
            done.push_back(std::move(v));
            pending = std::move(rest);
        }
    }

    Mat T(F, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) T.at(i, j) = done[j][i];
    GramSchmidtResult out{T, detail::basis_transformed_gram(f, T)};
    // off-block entries vanish exactly
    if (f.type != FormType::symplectic) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                check_internal(i == j || out.blocked.at(i, j) == 0, "gram_schmidt: not diagonal");
    }
    return out;
}

// Fixed once per field so canonical labels are comparable across calls: the
// first non-square in the enumeration.
inline Fel canonical_nonsquare(const FieldCtx& F) {
    for (Fel a = 1; a < F.q(); ++a)
        if (!F.is_square(a)) return a;
    throw internal_error("no non-square in a field of odd order");
}

inline CanonicalForm canonicalize(const FormInstance& f, Rng& rng) {
    const FieldCtx& F = f.field();
    const int n = f.n();
    GramSchmidtResult gs = gram_schmidt(f);
    Mat T = gs.basis;
    CanonicalForm out;
    out.type = f.type;
    out.n = n;

    auto scale_col = [&](Mat& M, int j, Fel s) {
        for (int i = 0; i < M.rows(); ++i) M.at(i, j) = F.mul(M.at(i, j), s);
    };

    if (f.type == FormType::symplectic) {
        for (int b = 0; b + 1 < n; b += 2) {
            Fel c = gs.blocked.at(b, b + 1);
            scale_col(T, b + 1, F.inv(c));
        }
    } else if (f.type == FormType::orthogonal) {
        Fel omega = canonical_nonsquare(F);
        out.omega = omega;
        std::vector<int> omega_cols;
        for (int j = 0; j < n; ++j) {
            Fel d = gs.blocked.at(j, j);
            if (auto r = F.sqrt(d, rng)) {
                scale_col(T, j, F.inv(*r));
            } else {
                Fel r2 = *F.sqrt(F.div(d, omega), rng);
                scale_col(T, j, F.inv(r2));
                omega_cols.push_back(j);
            }
        }
        // permute the omega columns to the tail
        {
            Mat P(F, n, n);
            int pos = 0;
            std::vector<bool> is_omega(n, false);
            for (int j : omega_cols) is_omega[j] = true;
            for (int j = 0; j < n; ++j)
                if (!is_omega[j]) P.at(j, pos++) = F.one();
            for (int j : omega_cols) P.at(j, pos++) = F.one();
            T = T * P;
        }
        // merge omega pairs: with a^2 + b^2 = w, M = [a b; b -a] satisfies
        // M M^t = diag(w, w), so the pair transforms by M^{-t}
        int wc = static_cast<int>(omega_cols.size());
        while (wc >= 2) {
            int j = n - wc;
            auto [a, b] = F.two_squares(out.omega, rng);
            Mat M(F, 2, 2);
            M.at(0, 0) = a;
            M.at(0, 1) = b;
            M.at(1, 0) = b;
            M.at(1, 1) = F.neg(a);
            Mat Minv = *mat_inverse(M);
            // columns j, j+1 of T times M^{-t}
            for (int i = 0; i < n; ++i) {
                Fel c0 = T.at(i, j), c1 = T.at(i, j + 1);
                T.at(i, j) = F.add(F.mul(c0, Minv.at(0, 0)), F.mul(c1, Minv.at(0, 1)));
                T.at(i, j + 1) = F.add(F.mul(c0, Minv.at(1, 0)), F.mul(c1, Minv.at(1, 1)));
            }
            wc -= 2;
        }
        out.omega_count = wc;
    } else {
        // hermitian: solve the norm equation per diagonal entry
        SubfieldTower sub = *f.conj;
        Fel tau = 0;
        for (Fel cand = 1; cand < F.q(); ++cand)
            if (sub.conj(cand) == F.neg(cand) && cand != 0) {
                tau = cand;
                break;
            }
        check_internal(tau != 0, "hermitian canonicalize: no trace-zero element");
        Fel omega_sub = F.mul(tau, tau);
        for (int j = 0; j < n; ++j) {
            Fel d = gs.blocked.at(j, j);
            check_internal(sub.in_subfield(d), "hermitian diagonal entry not conjugation-fixed");
            auto [x, y] = norm_eq(sub, d, omega_sub, rng);
            Fel beta = F.add(x, F.mul(y, tau));
            check_internal(F.mul(beta, sub.conj(beta)) == d, "norm equation solution invalid");
            scale_col(T, j, F.inv(beta));
        }
    }

    out.transform = T;
    out.canonical = detail::basis_transformed_gram(f, T);
    // exact transform identity
    Mat expect(F, n, n);
    if (f.type == FormType::symplectic) {
        for (int b = 0; b + 1 < n; b += 2) {
            expect.at(b, b + 1) = F.one();
            expect.at(b + 1, b) = F.neg(F.one());
        }
    } else {
        for (int j = 0; j < n; ++j)
            expect.at(j, j) = (f.type == FormType::orthogonal && j >= n - out.omega_count)
                                  ? out.omega
                                  : F.one();
    }
    check_internal(out.canonical == expect, "canonicalize: transform does not reach the label");
    return out;
}

// Y with Y^t G_f Y' = G_g when the canonical labels match, none otherwise.
inline std::optional<Mat> isometry_single(const FormInstance& f, const FormInstance& g, Rng& rng) {
    require(f.type == g.type && f.field().same_field(g.field()) && f.n() == g.n(),
            "isometry_single: type, field and size must match");
    CanonicalForm cf = canonicalize(f, rng);
    CanonicalForm cg = canonicalize(g, rng);
    if (!cf.same_label(cg)) return std::nullopt;
    Mat Y = cf.transform * *mat_inverse(cg.transform);
    check_internal(Y.transpose() * f.gram * f.bar_mat(Y) == g.gram, "isometry_single: witness fails");
    return Y;
}

}  // namespace starform
