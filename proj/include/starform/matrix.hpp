#pragma once

// Dense exact linear algebra over F_q: Gauss-Jordan with recorded transform,
// solving, kernels/images, echelonized subspaces, and the matrix-tuple
// container with its per-slot signature vector.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "field.hpp"

namespace starform {

class Mat {
  public:
    Mat() = default;
    Mat(const FieldCtx& F, int rows, int cols)
        : F_(&F), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

    static Mat identity(const FieldCtx& F, int n) {
        Mat m(F, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
        return m;
    }

    static Mat random(const FieldCtx& F, int rows, int cols, Rng& rng) {
        Mat m(F, rows, cols);
        for (auto& x : m.a_) x = F.random(rng);
        return m;
    }

    static Mat from_rows(const FieldCtx& F, std::vector<std::vector<Fel>> rows) {
        Mat m(F, static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows_; ++i)
            for (int j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        return m;
    }

    const FieldCtx& field() const { return *F_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Fel& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    Fel at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero() const {
        for (Fel x : a_) if (x != 0) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    Mat transpose() const {
        Mat t(*F_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Mat map_entries(auto&& f) const {
        Mat r = *this;
        for (auto& x : r.a_) x = f(x);
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->add(a_[i], o.a_[i]);
        return r;
    }

    Mat operator-(const Mat& o) const {
        Mat r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = F_->sub(a_[i], o.a_[i]);
        return r;
    }

    Mat operator*(const Mat& o) const {
        const FieldCtx& F = *F_;
        Mat r(F, rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int l = 0; l < cols_; ++l) {
                Fel x = at(i, l);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j)
                    r.at(i, j) = F.add(r.at(i, j), F.mul(x, o.at(l, j)));
            }
        return r;
    }

    Mat scaled(Fel s) const {
        Mat r = *this;
        for (auto& x : r.a_) x = F_->mul(x, s);
        return r;
    }

    Mat negated() const {
        Mat r = *this;
        for (auto& x : r.a_) x = F_->neg(x);
        return r;
    }

    std::vector<Fel> flatten() const { return a_; }

    static Mat unflatten(const FieldCtx& F, int rows, int cols, const std::vector<Fel>& v) {
        Mat m(F, rows, cols);
        m.a_ = v;
        return m;
    }

    Fel trace() const {
        Fel t = 0;
        for (int i = 0; i < rows_; ++i) t = F_->add(t, at(i, i));
        return t;
    }

  private:
    const FieldCtx* F_ = nullptr;
    int rows_ = 0, cols_ = 0;
    std::vector<Fel> a_;
};

struct RrefResult {
    Mat R;                      // reduced row echelon form
    Mat T;                      // invertible, T * M = R
    std::vector<int> pivots;    // pivot column per nonzero row
    int rank = 0;
};

inline RrefResult rref(const Mat& M) {
    const FieldCtx& F = M.field();
    RrefResult res{M, Mat::identity(F, M.rows()), {}, 0};
    Mat& R = res.R;
    Mat& T = res.T;
    int r = 0;
    for (int c = 0; c < M.cols() && r < M.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < M.rows(); ++i)
            if (R.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < M.cols() || j < M.rows(); ++j) {
                if (j < M.cols()) std::swap(R.at(piv, j), R.at(r, j));
                if (j < M.rows()) std::swap(T.at(piv, j), T.at(r, j));
            }
        Fel inv = F.inv(R.at(r, c));
        for (int j = 0; j < M.cols(); ++j) R.at(r, j) = F.mul(R.at(r, j), inv);
        for (int j = 0; j < M.rows(); ++j) T.at(r, j) = F.mul(T.at(r, j), inv);
        for (int i = 0; i < M.rows(); ++i) {
            if (i == r || R.at(i, c) == 0) continue;
            Fel f = R.at(i, c);
            for (int j = 0; j < M.cols(); ++j) R.at(i, j) = F.sub(R.at(i, j), F.mul(f, R.at(r, j)));
            for (int j = 0; j < M.rows(); ++j) T.at(i, j) = F.sub(T.at(i, j), F.mul(f, T.at(r, j)));
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline int mat_rank(const Mat& M) {
    // rank-only elimination, no transform bookkeeping
    const FieldCtx& F = M.field();
    Mat R = M;
    int r = 0;
    for (int c = 0; c < R.cols() && r < R.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < R.rows(); ++i)
            if (R.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = c; j < R.cols(); ++j) std::swap(R.at(piv, j), R.at(r, j));
        Fel inv = F.inv(R.at(r, c));
        for (int i = r + 1; i < R.rows(); ++i) {
            Fel f = F.mul(R.at(i, c), inv);
            if (f == 0) continue;
            for (int j = c; j < R.cols(); ++j) R.at(i, j) = F.sub(R.at(i, j), F.mul(f, R.at(r, j)));
        }
        ++r;
    }
    return r;
}

inline bool mat_invertible(const Mat& M) {
    return M.is_square() && mat_rank(M) == M.rows();
}

inline std::optional<Mat> mat_inverse(const Mat& M) {
    if (!M.is_square()) return std::nullopt;
    RrefResult r = rref(M);
    if (r.rank != M.rows()) return std::nullopt;
    return r.T;
}

// Solves A x = b. Returns a particular solution and a kernel basis (columns).
struct LinSolve {
    std::vector<Fel> particular;
    std::vector<std::vector<Fel>> kernel;
};

inline std::optional<LinSolve> solve_linear(const Mat& A, const std::vector<Fel>& b) {
    const FieldCtx& F = A.field();
    RrefResult r = rref(A);
    std::vector<Fel> tb(A.rows(), 0);
    for (int i = 0; i < A.rows(); ++i) {
        Fel s = 0;
        for (int j = 0; j < A.rows(); ++j) s = F.add(s, F.mul(r.T.at(i, j), b[j]));
        tb[i] = s;
    }
    for (int i = r.rank; i < A.rows(); ++i)
        if (tb[i] != 0) return std::nullopt;
    LinSolve out;
    out.particular.assign(A.cols(), 0);
    for (int i = 0; i < r.rank; ++i) out.particular[r.pivots[i]] = tb[i];
    std::vector<bool> is_pivot(A.cols(), false);
    for (int c : r.pivots) is_pivot[c] = true;
    for (int c = 0; c < A.cols(); ++c) {
        if (is_pivot[c]) continue;
        std::vector<Fel> v(A.cols(), 0);
        v[c] = F.one();
        for (int i = 0; i < r.rank; ++i) v[r.pivots[i]] = F.neg(r.R.at(i, c));
        out.kernel.push_back(std::move(v));
    }
    return out;
}

inline std::vector<std::vector<Fel>> mat_kernel(const Mat& A) {
    return solve_linear(A, std::vector<Fel>(A.rows(), 0))->kernel;
}

// An echelonized subspace of F^d (row basis in RREF); equality of subspaces
// is literal equality of the canonical bases.
class Subspace {
  public:
    Subspace() = default;
    Subspace(const FieldCtx& F, int ambient) : F_(&F), ambient_(ambient), basis_(F, 0, ambient) {}

    static Subspace span(const FieldCtx& F, int ambient, const std::vector<std::vector<Fel>>& gens) {
        Subspace s(F, ambient);
        for (const auto& g : gens) s.insert(g);
        return s;
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Mat& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    std::vector<Fel> basis_vector(int i) const {
        std::vector<Fel> v(ambient_);
        for (int j = 0; j < ambient_; ++j) v[j] = basis_.at(i, j);
        return v;
    }

    // Reduce v against the basis; returns the remainder.
    std::vector<Fel> reduce(std::vector<Fel> v) const {
        const FieldCtx& F = *F_;
        for (int i = 0; i < basis_.rows(); ++i) {
            Fel c = v[pivots_[i]];
            if (c == 0) continue;
            for (int j = 0; j < ambient_; ++j) v[j] = F.sub(v[j], F.mul(c, basis_.at(i, j)));
        }
        return v;
    }

    bool contains(const std::vector<Fel>& v) const {
        auto r = reduce(v);
        for (Fel x : r)
            if (x != 0) return false;
        return true;
    }

    // Insert v; returns true if the dimension grew.
    bool insert(const std::vector<Fel>& v) {
        const FieldCtx& F = *F_;
        std::vector<Fel> r = reduce(v);
        int piv = -1;
        for (int j = 0; j < ambient_; ++j)
            if (r[j] != 0) {
                piv = j;
                break;
            }
        if (piv < 0) return false;
        Fel inv = F.inv(r[piv]);
        for (auto& x : r) x = F.mul(x, inv);
        // keep full reduction: clear column piv in existing rows, insert sorted
        Mat nb(F, basis_.rows() + 1, ambient_);
        int insert_at = 0;
        while (insert_at < basis_.rows() && pivots_[insert_at] < piv) ++insert_at;
        std::vector<int> np;
        np.reserve(pivots_.size() + 1);
        int src = 0;
        for (int i = 0; i < nb.rows(); ++i) {
            if (i == insert_at) {
                for (int j = 0; j < ambient_; ++j) nb.at(i, j) = r[j];
                np.push_back(piv);
            } else {
                Fel c = basis_.at(src, piv);
                for (int j = 0; j < ambient_; ++j)
                    nb.at(i, j) = F.sub(basis_.at(src, j), F.mul(c, r[j]));
                np.push_back(pivots_[src]);
                ++src;
            }
        }
        basis_ = std::move(nb);
        pivots_ = std::move(np);
        return true;
    }

    Subspace sum(const Subspace& o) const {
        Subspace s = *this;
        for (int i = 0; i < o.dim(); ++i) s.insert(o.basis_vector(i));
        return s;
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && basis_ == o.basis_;
    }

  private:
    const FieldCtx* F_ = nullptr;
    int ambient_ = 0;
    Mat basis_;
    std::vector<int> pivots_;
};

// An m-tuple of n x n matrices with an optional signature vector in {+1,-1}^m.
struct MatTuple {
    std::vector<Mat> mats;
    std::optional<std::vector<int>> sig;

    int n() const { return mats.empty() ? 0 : mats[0].rows(); }
    int m() const { return static_cast<int>(mats.size()); }

    const FieldCtx& field() const {
        require(!mats.empty(), "empty tuple has no field");
        return mats[0].field();
    }

    void validate_shapes() const {
        for (const Mat& M : mats)
            require(M.is_square() && M.rows() == n(), "tuple: non-uniform dimensions");
        if (sig) {
            require(static_cast<int>(sig->size()) == m(), "tuple: signature length mismatch");
            for (int e : *sig) require(e == 1 || e == -1, "tuple: signature entries must be +-1");
        }
    }

    // Checks B_i^t = eps_i B_i for every slot (requires sig).
    bool slotwise_symmetric() const {
        require(sig.has_value(), "slotwise_symmetric: tuple has no signature");
        for (int i = 0; i < m(); ++i) {
            const Mat t = mats[i].transpose();
            const Mat want = (*sig)[i] == 1 ? mats[i] : mats[i].negated();
            if (!(t == want)) return false;
        }
        return true;
    }
};

// ker(B) = intersection of the slot kernels, computed on the stacked matrix.
inline Subspace tuple_kernel(const MatTuple& B) {
    const FieldCtx& F = B.field();
    int n = B.n();
    Mat stacked(F, n * B.m(), n);
    for (int s = 0; s < B.m(); ++s)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) stacked.at(s * n + i, j) = B.mats[s].at(i, j);
    return Subspace::span(F, n, mat_kernel(stacked));
}

// im(B) = span of the union of the slot column spaces.
inline Subspace tuple_image(const MatTuple& B) {
    const FieldCtx& F = B.field();
    int n = B.n();
    Subspace s(F, n);
    for (const Mat& M : B.mats)
        for (int j = 0; j < n; ++j) {
            std::vector<Fel> col(n);
            for (int i = 0; i < n; ++i) col[i] = M.at(i, j);
            s.insert(col);
        }
    return s;
}

inline bool tuple_nondegenerate(const MatTuple& B) { return tuple_kernel(B).dim() == 0; }

// Solution space of a list of homogeneous linear constraints on the entries
// of an unknown r x c matrix X. Each constraint is one row over the r*c
// entry coordinates (row-major).
class MatrixConstraints {
  public:
    MatrixConstraints(const FieldCtx& F, int r, int c)
        : F_(&F), r_(r), c_(c) {}

    int unknowns() const { return r_ * c_; }

    // X P = Q X   (entrywise: sum_l X[i][l] P[l][j] - Q[i][l] X[l][j] = 0)
    void add_intertwine(const Mat& P, const Mat& Q) {
        const FieldCtx& F = *F_;
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < P.cols(); ++j) {
                std::vector<Fel> row(unknowns(), 0);
                for (int l = 0; l < c_; ++l)
                    row[i * c_ + l] = F.add(row[i * c_ + l], P.at(l, j));
                for (int l = 0; l < r_; ++l)
                    row[l * c_ + j] = F.sub(row[l * c_ + j], Q.at(i, l));
                rows_.push_back(std::move(row));
            }
    }

    // X P = Q X^t, all shapes n x n.
    void add_right_mul_vs_transpose(const Mat& P, const Mat& Q) {
        const FieldCtx& F = *F_;
        // (X P)[i][j] = sum_l X[i][l] P[l][j];  (Q X^t)[i][j] = sum_l Q[i][l] X[j][l]
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) {
                std::vector<Fel> row(unknowns(), 0);
                for (int l = 0; l < c_; ++l)
                    row[i * c_ + l] = F.add(row[i * c_ + l], P.at(l, j));
                for (int l = 0; l < c_; ++l)
                    row[j * c_ + l] = F.sub(row[j * c_ + l], Q.at(i, l));
                rows_.push_back(std::move(row));
            }
    }

    void add_custom_row(std::vector<Fel> row) { rows_.push_back(std::move(row)); }

    // Echelonized basis of all solutions, as matrices.
    std::vector<Mat> solve() const {
        const FieldCtx& F = *F_;
        Mat sys = rows_.empty() ? Mat(F, 1, unknowns()) : Mat::from_rows(F, rows_);
        std::vector<Mat> out;
        Subspace sol = Subspace::span(F, unknowns(), mat_kernel(sys));
        out.reserve(sol.dim());
        for (int i = 0; i < sol.dim(); ++i)
            out.push_back(Mat::unflatten(F, r_, c_, sol.basis_vector(i)));
        return out;
    }

  private:
    const FieldCtx* F_;
    int r_, c_;
    std::vector<std::vector<Fel>> rows_;
};

}  // namespace starform
