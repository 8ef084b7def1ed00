#pragma once

// Structure theory of matrix algebras over F_q: closure of a generating set,
// idempotents, the Jacobson radical in characteristic p (layered trace chain
// on integral lifts of the regular representation), and the Wedderburn
// decomposition with explicit isomorphisms onto matrix rings over the
// summand center fields.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "poly.hpp"

namespace starform {

// A matrix algebra given by an echelonized linear basis that is closed under
// products; the multiplication table is cached in basis coordinates.
class AlgebraRep {
  public:
    AlgebraRep() = default;

    // The basis must already span a product-closed space.
    AlgebraRep(const FieldCtx& F, int n, const std::vector<Mat>& basis, bool unital)
        : F_(&F), n_(n), unital_(unital), span_(F, n * n) {
        for (const Mat& b : basis) span_.insert(b.flatten());
        basis_.reserve(span_.dim());
        for (int i = 0; i < span_.dim(); ++i)
            basis_.push_back(Mat::unflatten(F, n, n, span_.basis_vector(i)));
        if (unital_)
            require(span_.contains(Mat::identity(F, n).flatten()),
                    "AlgebraRep: unital flag set but identity not in span");
        build_table();
    }

    const FieldCtx& field() const { return *F_; }
    int ambient() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    bool unital() const { return unital_; }
    const Mat& basis(int i) const { return basis_[i]; }

    bool contains(const Mat& M) const { return span_.contains(M.flatten()); }

    std::optional<std::vector<Fel>> try_coords(const Mat& M) const {
        const FieldCtx& F = *F_;
        std::vector<Fel> flat = M.flatten();
        std::vector<Fel> c(dim(), 0);
        for (int i = 0; i < dim(); ++i) {
            Fel coef = flat[pivots_[i]];
            c[i] = coef;
            if (coef == 0) continue;
            auto bflat = basis_[i].flatten();
            for (std::size_t j = 0; j < flat.size(); ++j)
                flat[j] = F.sub(flat[j], F.mul(coef, bflat[j]));
        }
        for (Fel x : flat)
            if (x != 0) return std::nullopt;
        return c;
    }

    std::vector<Fel> coords(const Mat& M) const {
        auto c = try_coords(M);
        check_internal(c.has_value(), "AlgebraRep::coords: matrix outside the algebra");
        return *c;
    }

    Mat to_mat(const std::vector<Fel>& c) const {
        const FieldCtx& F = *F_;
        Mat M(F, n_, n_);
        for (int i = 0; i < dim(); ++i) {
            if (c[i] == 0) continue;
            for (int r = 0; r < n_; ++r)
                for (int s = 0; s < n_; ++s)
                    M.at(r, s) = F.add(M.at(r, s), F.mul(c[i], basis_[i].at(r, s)));
        }
        return M;
    }

    std::vector<Fel> mul_coords(const std::vector<Fel>& x, const std::vector<Fel>& y) const {
        const FieldCtx& F = *F_;
        std::vector<Fel> z(dim(), 0);
        for (int a = 0; a < dim(); ++a) {
            if (x[a] == 0) continue;
            for (int b = 0; b < dim(); ++b) {
                if (y[b] == 0) continue;
                Fel c = F.mul(x[a], y[b]);
                const auto& row = table_[a][b];
                for (int k = 0; k < dim(); ++k)
                    if (row[k] != 0) z[k] = F.add(z[k], F.mul(c, row[k]));
            }
        }
        return z;
    }

    std::vector<Fel> add_coords(const std::vector<Fel>& x, const std::vector<Fel>& y) const {
        std::vector<Fel> z(dim());
        for (int i = 0; i < dim(); ++i) z[i] = F_->add(x[i], y[i]);
        return z;
    }

    std::vector<Fel> sub_coords(const std::vector<Fel>& x, const std::vector<Fel>& y) const {
        std::vector<Fel> z(dim());
        for (int i = 0; i < dim(); ++i) z[i] = F_->sub(x[i], y[i]);
        return z;
    }

    std::vector<Fel> scale_coords(const std::vector<Fel>& x, Fel s) const {
        std::vector<Fel> z(dim());
        for (int i = 0; i < dim(); ++i) z[i] = F_->mul(x[i], s);
        return z;
    }

    std::vector<Fel> zero_coords() const { return std::vector<Fel>(dim(), 0); }

    std::vector<Fel> identity_coords() const {
        require(unital_, "identity_coords: algebra is not unital");
        return coords(Mat::identity(*F_, n_));
    }

    std::vector<Fel> random_coords(Rng& rng) const {
        std::vector<Fel> c(dim());
        for (auto& x : c) x = F_->random(rng);
        return c;
    }

    std::vector<Fel> pow_coords(std::vector<Fel> base, std::uint64_t e) const {
        std::vector<Fel> acc;
        while (e) {
            if (e & 1) acc = acc.empty() ? base : mul_coords(acc, base);
            e >>= 1;
            if (e) base = mul_coords(base, base);
        }
        return acc.empty() ? identity_coords() : acc;
    }

    static bool coords_zero(const std::vector<Fel>& c) {
        for (Fel x : c)
            if (x != 0) return false;
        return true;
    }

  private:
    void build_table() {
        pivots_.resize(dim());
        for (int i = 0; i < dim(); ++i) {
            auto flat = basis_[i].flatten();
            int piv = -1;
            for (std::size_t j = 0; j < flat.size(); ++j)
                if (flat[j] != 0) {
                    piv = static_cast<int>(j);
                    break;
                }
            check_internal(piv >= 0, "AlgebraRep: zero basis vector");
            pivots_[i] = piv;
        }
        table_.assign(dim(), std::vector<std::vector<Fel>>(dim()));
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                auto c = try_coords(basis_[a] * basis_[b]);
                check_internal(c.has_value(), "AlgebraRep: basis is not product-closed");
                table_[a][b] = std::move(*c);
            }
    }

    const FieldCtx* F_ = nullptr;
    int n_ = 0;
    bool unital_ = false;
    std::vector<Mat> basis_;
    Subspace span_;
    std::vector<int> pivots_;
    std::vector<std::vector<std::vector<Fel>>> table_;
};

// Smallest product-closed subspace containing the generators (and I when
// unital): iterated span-and-multiply until the dimension stabilizes.
inline AlgebraRep close_algebra(const FieldCtx& F, const std::vector<Mat>& generators, bool unital) {
    require(!generators.empty(), "close_algebra: no generators");
    int n = generators[0].rows();
    for (const Mat& g : generators)
        require(g.is_square() && g.rows() == n, "close_algebra: shapes differ");
    Subspace span(F, n * n);
    std::vector<Mat> basis;
    auto add = [&](const Mat& M) {
        if (span.insert(M.flatten())) {
            basis.push_back(M);
            return true;
        }
        return false;
    };
    if (unital) add(Mat::identity(F, n));
    for (const Mat& g : generators) add(g);
    std::size_t checked = 0;
    while (checked < basis.size()) {
        std::size_t cur = basis.size();
        for (std::size_t a = 0; a < cur; ++a)
            for (std::size_t b = (a < checked ? checked : 0); b < cur; ++b) add(basis[a] * basis[b]);
        checked = cur;
    }
    return AlgebraRep(F, n, basis, unital);
}

// Idempotent from a non-nilpotent element: with x = y^N for N past the
// Fitting stabilization, solve e = sum_{j>=1} c_j x^j subject to e x = x.
// Returns none iff y is nilpotent.
inline std::optional<std::vector<Fel>> idempotent_from(const AlgebraRep& A, const std::vector<Fel>& y) {
    const FieldCtx& F = A.field();
    std::uint64_t N = static_cast<std::uint64_t>(std::max(A.dim(), A.ambient())) + 1;
    std::vector<Fel> x;
    {
        std::vector<Fel> acc, base = y;
        std::uint64_t e = N;
        while (e) {
            if (e & 1) acc = acc.empty() ? base : A.mul_coords(acc, base);
            e >>= 1;
            if (e) base = A.mul_coords(base, base);
        }
        x = std::move(acc);
    }
    if (AlgebraRep::coords_zero(x)) return std::nullopt;

    int D = A.dim();
    std::vector<std::vector<Fel>> pw;  // pw[j] = x^{j+1}
    pw.push_back(x);
    for (int j = 1; j < D; ++j) pw.push_back(A.mul_coords(pw.back(), x));
    Mat sys(F, D, D);  // column j: coords of pw[j] * x, solving e x = x
    for (int j = 0; j < D; ++j) {
        std::vector<Fel> col = A.mul_coords(pw[j], x);
        for (int i = 0; i < D; ++i) sys.at(i, j) = col[i];
    }
    auto sol = solve_linear(sys, x);
    check_internal(sol.has_value(), "idempotent_from: e x = x unsolvable for non-nilpotent y");
    std::vector<Fel> e(D, 0);
    for (int j = 0; j < D; ++j)
        if (sol->particular[j] != 0) e = A.add_coords(e, A.scale_coords(pw[j], sol->particular[j]));
    check_internal(A.mul_coords(e, e) == e && !AlgebraRep::coords_zero(e), "idempotent_from: bad e");
    return e;
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

struct BigMat {
    int n = 0;
    std::vector<BigInt> a;
    BigInt& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const BigInt& at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline BigMat bigmul(const BigMat& x, const BigMat& y) {
    BigMat r{x.n, std::vector<BigInt>(static_cast<std::size_t>(x.n) * x.n)};
    for (int i = 0; i < x.n; ++i)
        for (int l = 0; l < x.n; ++l) {
            const BigInt& v = x.at(i, l);
            if (v == 0) continue;
            for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(l, j);
        }
    return r;
}

inline BigInt bigpow_trace(BigMat m, std::uint64_t e) {
    BigMat acc;
    bool have = false;
    while (e) {
        if (e & 1) {
            acc = have ? bigmul(acc, m) : m;
            have = true;
        }
        e >>= 1;
        if (e) m = bigmul(m, m);
    }
    BigInt t = 0;
    for (int i = 0; i < acc.n; ++i) t += acc.at(i, i);
    return t;
}

// Entrywise regular-representation blow-up M(n, F_q) -> M(nk, F_p), entries
// lifted to non-negative integers.
inline BigMat blow_up_lift(const FieldCtx& F, const Mat& M) {
    int n = M.rows(), k = static_cast<int>(F.k());
    BigMat r{n * k, std::vector<BigInt>(static_cast<std::size_t>(n) * k * n * k)};
    Fel xg = k > 1 ? F.from_coeffs({0, 1}) : F.one();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Fel a = M.at(i, j);
            if (a == 0) continue;
            Fel as = a;
            for (int s = 0; s < k; ++s) {
                auto c = F.coeffs(as);
                for (int t = 0; t < k; ++t) r.at(i * k + t, j * k + s) = c[t];
                as = F.mul(as, xg);
            }
        }
    return r;
}

}  // namespace detail

// Jacobson radical in characteristic p via the layered trace chain: layer 0
// is the plain trace form (no lifts needed), layer i >= 1 evaluates
// tr((XY)^{p^i})/p^i on integral lifts over F_p, with k layers for p^k <= nk.
// Deterministic; returns the radical as a subspace of algebra coordinates.
inline Subspace radical(const AlgebraRep& A) {
    const FieldCtx& F = A.field();
    const std::uint32_t p = F.p();
    const int k = static_cast<int>(F.k());
    const int rep_dim = A.ambient() * k;

    FieldCtx Fp(p);
    Fel x_gen = k > 1 ? F.from_coeffs({0, 1}) : F.one();
    std::vector<Mat> layer;
    for (int i = 0; i < A.dim(); ++i) {
        Fel s = F.one();
        for (int t = 0; t < k; ++t) {
            layer.push_back(A.basis(i).scaled(s));
            s = F.mul(s, x_gen);
        }
    }

    auto flatten_p = [&](const Mat& M) {
        std::vector<Fel> out;
        out.reserve(static_cast<std::size_t>(M.rows()) * M.cols() * k);
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                for (std::uint32_t t : F.coeffs(M.at(i, j))) out.push_back(t);
        return out;
    };
    auto echelon_layer = [&](const std::vector<Mat>& gens) {
        Subspace s(Fp, A.ambient() * A.ambient() * k);
        std::vector<Mat> basis;
        for (const Mat& g : gens)
            if (s.insert(flatten_p(g))) basis.push_back(g);
        return basis;
    };
    layer = echelon_layer(layer);

    std::uint64_t pi = 1;
    for (int i = 0; pi <= static_cast<std::uint64_t>(rep_dim); ++i, pi *= p) {
        if (layer.empty()) break;
        int d = static_cast<int>(layer.size());
        Mat sys(Fp, d, d);
        if (i == 0) {
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    sys.at(b, a) = F.trace_to_prime((layer[a] * layer[b]).trace());
        } else {
            std::vector<detail::BigMat> lifts;
            lifts.reserve(d);
            for (const Mat& m : layer) lifts.push_back(detail::blow_up_lift(F, m));
            detail::BigInt P = p, Pi = 1;
            for (int t = 0; t < i; ++t) Pi *= P;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    detail::BigInt tr = detail::bigpow_trace(detail::bigmul(lifts[a], lifts[b]), pi);
                    check_internal(tr % Pi == 0, "radical: layered trace not divisible by p^i");
                    detail::BigInt red = (tr / Pi) % P;
                    if (red < 0) red += P;
                    sys.at(b, a) = static_cast<Fel>(red.convert_to<std::uint64_t>());
                }
        }
        auto kernel = mat_kernel(sys);
        std::vector<Mat> next;
        for (const auto& kv : kernel) {
            Mat m(F, A.ambient(), A.ambient());
            for (int a = 0; a < d; ++a)
                if (kv[a] != 0) m = m + layer[a].scaled(F.from_int(static_cast<std::int64_t>(kv[a])));
            next.push_back(m);
        }
        layer = echelon_layer(next);
    }

    Subspace rad(F, A.dim());
    for (const Mat& m : layer) rad.insert(A.coords(m));
    return rad;
}

// One simple summand M(n_i, F_{q_i}) of the semisimple quotient, with the
// data backing the explicit coordinate isomorphism.
struct SimpleSummand {
    FieldCtx field{3};                    // F_{q_i}
    int ni = 0;                           // matrix size
    int di = 0;                           // [F_{q_i} : F_q]
    std::vector<Fel> central_idem;        // reduced quotient coordinates
    std::vector<Fel> prim_idem;           // primitive idempotent f (= gamma^0)
    std::vector<Fel> gamma;               // generator of f S f, quotient coords
    Fel gamma_fel = 0;                    // the same generator inside `field`
    std::vector<std::vector<Fel>> lbasis;  // F_{q_i}-basis of the minimal left ideal
    Mat lambda_T;                         // transform solving the ideal-coordinate system
    int lambda_rank = 0;
    Mat pbasis_T;                         // F_p transform for to_field
    int pbasis_rank = 0;
    std::vector<std::vector<Fel>> from_cols;  // quotient coords per F_p matrix unit
};

// Wedderburn decomposition of a unital matrix algebra: radical, quotient
// arithmetic, simple summands, the epimorphism pi and a right inverse.
class Structure {
  public:
    Structure(const AlgebraRep& A, Rng& rng)
        : A_(&A), fp_(A.field().p()), rad_(radical(A)) {
        require(A.unital(), "wedderburn: algebra must be unital");
        build(rng);
    }

    Structure(const Structure&) = delete;
    Structure& operator=(const Structure&) = delete;
    Structure(Structure&&) = default;

    const AlgebraRep& algebra() const { return *A_; }
    const Subspace& radical_space() const { return rad_; }
    int quotient_dim() const { return A_->dim() - rad_.dim(); }
    const std::vector<SimpleSummand>& summands() const { return summands_; }
    const std::vector<std::vector<Fel>>& qbasis() const { return qbasis_; }

    // Coordinates of a reduced vector with respect to qbasis(): the quotient
    // basis consists of coordinate units away from the radical pivots, so the
    // coordinates read off directly.
    std::vector<Fel> qcoords(const std::vector<Fel>& reduced) const {
        std::vector<Fel> out(qpositions_.size());
        for (std::size_t i = 0; i < qpositions_.size(); ++i) out[i] = reduced[qpositions_[i]];
        return out;
    }

    // ---- quotient arithmetic on reduced coordinate vectors ----

    std::vector<Fel> reduce(const std::vector<Fel>& x) const { return rad_.reduce(x); }

    std::vector<Fel> qmul(const std::vector<Fel>& x, const std::vector<Fel>& y) const {
        return reduce(A_->mul_coords(x, y));
    }

    std::vector<Fel> qidentity() const { return reduce(A_->identity_coords()); }

    // ---- the epimorphism pi and its right inverse ----

    std::vector<Mat> pi(const std::vector<Fel>& algebra_coords) const {
        std::vector<Mat> out;
        std::vector<Fel> x = reduce(algebra_coords);
        out.reserve(summands_.size());
        for (const auto& s : summands_) out.push_back(to_matrix(s, qmul(s.central_idem, x)));
        return out;
    }

    std::vector<Fel> lift(const std::vector<Mat>& components) const {
        check_internal(components.size() == summands_.size(), "lift: component count mismatch");
        std::vector<Fel> acc = A_->zero_coords();
        for (std::size_t i = 0; i < summands_.size(); ++i)
            acc = A_->add_coords(acc, from_matrix(summands_[i], components[i]));
        return acc;
    }

    // Restriction of pi to one summand: s's slice of the quotient onto
    // M(n_i, F_{q_i}) via the left action on the minimal ideal.
    Mat to_matrix(const SimpleSummand& s, const std::vector<Fel>& x) const {
        const FieldCtx& F = A_->field();
        const FieldCtx& E = s.field;
        Mat out(E, s.ni, s.ni);
        for (int j = 0; j < s.ni; ++j) {
            std::vector<Fel> target = qmul(x, s.lbasis[j]);
            std::vector<Fel> tb(s.lambda_T.rows(), 0);
            for (int r = 0; r < s.lambda_T.rows(); ++r) {
                Fel acc = 0;
                for (int c = 0; c < s.lambda_T.cols(); ++c)
                    acc = F.add(acc, F.mul(s.lambda_T.at(r, c), target[c]));
                tb[r] = acc;
            }
            for (int r = s.lambda_rank; r < s.lambda_T.rows(); ++r)
                check_internal(tb[r] == 0, "to_matrix: element does not preserve the ideal");
            for (int t = 0; t < s.ni; ++t) {
                Fel entry = 0;
                for (int u = 0; u < s.di; ++u) {
                    Fel coef = tb[t * s.di + u];
                    if (coef == 0) continue;
                    entry = E.add(entry, E.mul(embed_scalar(s, coef), E.pow(s.gamma_fel, u)));
                }
                out.at(t, j) = entry;
            }
        }
        return out;
    }

    std::vector<Fel> from_matrix(const SimpleSummand& s, const Mat& M) const {
        const FieldCtx& E = s.field;
        std::vector<Fel> acc = A_->zero_coords();
        int K = static_cast<int>(E.k());
        int idx = 0;
        for (int i = 0; i < s.ni; ++i)
            for (int j = 0; j < s.ni; ++j) {
                auto digits = E.coeffs(M.at(i, j));
                for (int t = 0; t < K; ++t, ++idx) {
                    if (digits[t] == 0) continue;
                    acc = A_->add_coords(
                        acc, A_->scale_coords(s.from_cols[idx], A_->field().from_int(digits[t])));
                }
            }
        return acc;
    }

    // F_q scalars land in the summand field as c * f.
    Fel embed_scalar(const SimpleSummand& s, Fel c) const {
        return to_field(s, A_->scale_coords(s.prim_idem, c));
    }

    // Field isomorphism f S f -> F_{q_i} (power-basis coordinates of gamma).
    Fel to_field(const SimpleSummand& s, const std::vector<Fel>& x) const {
        std::vector<Fel> flat = flatten_p(x);
        std::vector<Fel> tb(s.pbasis_T.rows(), 0);
        for (int r = 0; r < s.pbasis_T.rows(); ++r) {
            Fel acc = 0;
            for (int c = 0; c < s.pbasis_T.cols(); ++c)
                acc = fp_.add(acc, fp_.mul(s.pbasis_T.at(r, c), flat[c]));
            tb[r] = acc;
        }
        for (int r = s.pbasis_rank; r < s.pbasis_T.rows(); ++r)
            check_internal(tb[r] == 0, "to_field: element outside the summand field");
        std::vector<std::uint32_t> digits(s.field.k(), 0);
        for (int r = 0; r < s.pbasis_rank; ++r) digits[r] = static_cast<std::uint32_t>(tb[r]);
        return s.field.from_coeffs(digits);
    }

    std::vector<Fel> from_field(const SimpleSummand& s, Fel a) const {
        const FieldCtx& F = A_->field();
        std::vector<Fel> acc = A_->zero_coords();
        std::vector<Fel> pw = s.prim_idem;
        auto digits = s.field.coeffs(a);
        for (std::uint32_t t = 0; t < s.field.k(); ++t) {
            if (digits[t] != 0) acc = A_->add_coords(acc, A_->scale_coords(pw, F.from_int(digits[t])));
            if (t + 1 < s.field.k()) pw = qmul(pw, s.gamma);
        }
        return acc;
    }

    // Minimal polynomial of a quotient element over F_q, relative to a given
    // identity element (the summand idempotent for subalgebra work).
    Poly qminpoly(const std::vector<Fel>& x, const std::vector<Fel>& unit) const {
        const FieldCtx& F = A_->field();
        int D = A_->dim();
        std::vector<std::vector<Fel>> pw{unit};
        Subspace seen(F, D);
        seen.insert(unit);
        while (true) {
            std::vector<Fel> nxt = qmul(pw.back(), x);
            if (seen.contains(nxt)) {
                // nxt = sum c_j pw[j]
                Mat sys(F, D, static_cast<int>(pw.size()));
                for (std::size_t j = 0; j < pw.size(); ++j)
                    for (int i = 0; i < D; ++i) sys.at(i, static_cast<int>(j)) = pw[j][i];
                auto sol = solve_linear(sys, nxt);
                check_internal(sol.has_value(), "qminpoly: dependence vanished");
                Poly mu;
                mu.c.assign(pw.size() + 1, 0);
                for (std::size_t j = 0; j < pw.size(); ++j) mu.c[j] = F.neg(sol->particular[j]);
                mu.c[pw.size()] = F.one();
                return mu;
            }
            seen.insert(nxt);
            pw.push_back(std::move(nxt));
        }
    }

    // Evaluate a polynomial at a quotient element, relative to a unit.
    std::vector<Fel> qeval(const Poly& f, const std::vector<Fel>& x,
                           const std::vector<Fel>& unit) const {
        std::vector<Fel> acc = A_->zero_coords();
        for (std::size_t i = f.c.size(); i-- > 0;) {
            acc = qmul(acc, x);
            if (f.c[i] != 0) acc = A_->add_coords(acc, A_->scale_coords(unit, f.c[i]));
        }
        return acc;
    }

  private:
    std::vector<Fel> flatten_p(const std::vector<Fel>& coords) const {
        const FieldCtx& F = A_->field();
        std::vector<Fel> out;
        out.reserve(coords.size() * F.k());
        for (Fel c : coords)
            for (std::uint32_t d : F.coeffs(c)) out.push_back(d);
        return out;
    }

    void build(Rng& rng);
    void build_summand(const std::vector<std::vector<Fel>>& piece_basis,
                       const std::vector<Fel>& piece_unit, Rng& rng);

    const AlgebraRep* A_;
    FieldCtx fp_;
    Subspace rad_;
    std::vector<std::vector<Fel>> qbasis_;
    std::vector<int> qpositions_;
    std::vector<SimpleSummand> summands_;
};

inline void Structure::build(Rng& rng) {
    const FieldCtx& F = A_->field();
    const int D = A_->dim();

    // quotient basis: coordinate units at the non-pivot positions of the
    // radical echelon (these are reduced already, and reduced vectors are
    // supported exactly there)
    {
        std::vector<bool> is_pivot(D, false);
        for (int piv : rad_.pivots()) is_pivot[piv] = true;
        for (int t = 0; t < D; ++t) {
            if (is_pivot[t]) continue;
            std::vector<Fel> unit(D, 0);
            unit[t] = F.one();
            qbasis_.push_back(std::move(unit));
            qpositions_.push_back(t);
        }
        check_internal(static_cast<int>(qbasis_.size()) == quotient_dim(),
                       "quotient basis extraction failed");
    }
    const int Q = quotient_dim();
    check_internal(Q > 0, "unital algebra with zero semisimple quotient");

    // center of the quotient: z with z b = b z for all quotient basis b
    std::vector<std::vector<Fel>> center;
    {
        std::vector<std::vector<Fel>> rows;
        for (const auto& b : qbasis_) {
            // row block for condition [z, b] = 0, z = sum c_u qbasis_[u]
            for (int coordinate = 0; coordinate < D; ++coordinate) rows.emplace_back(Q, 0);
            std::size_t base = rows.size() - D;
            for (int u = 0; u < Q; ++u) {
                std::vector<Fel> comm =
                    A_->sub_coords(qmul(qbasis_[u], b), qmul(b, qbasis_[u]));
                for (int coordinate = 0; coordinate < D; ++coordinate)
                    rows[base + coordinate][u] = comm[coordinate];
            }
        }
        Mat sys = Mat::from_rows(F, rows);
        for (const auto& kv : mat_kernel(sys)) {
            std::vector<Fel> z = A_->zero_coords();
            for (int u = 0; u < Q; ++u)
                if (kv[u] != 0) z = A_->add_coords(z, A_->scale_coords(qbasis_[u], kv[u]));
            center.push_back(reduce(z));
        }
    }
    check_internal(!center.empty(), "center of semisimple quotient is zero");

    // split the commutative semisimple center into its primitive idempotents
    struct Piece {
        std::vector<std::vector<Fel>> basis;
        std::vector<Fel> unit;
    };
    std::vector<Piece> fields;
    std::vector<Piece> todo{{center, qidentity()}};
    auto echelon_vectors = [&](const std::vector<std::vector<Fel>>& gens) {
        Subspace s(F, D);
        std::vector<std::vector<Fel>> basis;
        for (const auto& g : gens)
            if (s.insert(g)) basis.push_back(g);
        return basis;
    };
    while (!todo.empty()) {
        Piece piece = std::move(todo.back());
        todo.pop_back();
        piece.basis = echelon_vectors(piece.basis);
        int dim_piece = static_cast<int>(piece.basis.size());
        check_internal(dim_piece > 0, "empty center piece");
        bool settled = false;
        bool is_field = false;
        for (int tries = 0; tries < kRetryFactor * (dim_piece + 1) && !settled; ++tries) {
            std::vector<Fel> z = A_->zero_coords();
            for (const auto& b : piece.basis)
                z = A_->add_coords(z, A_->scale_coords(b, F.random(rng)));
            if (AlgebraRep::coords_zero(z)) continue;
            Poly mu = qminpoly(z, piece.unit);
            auto fac = poly_factor(F, mu, rng);
            if (fac.size() == 1 && fac[0].second == 1) {
                if (mu.deg() == dim_piece) {
                    is_field = true;
                    settled = true;
                }
                continue;  // otherwise a subfield element; resample
            }
            // CRT idempotents for the coprime factor powers
            for (const auto& [g, mult] : fac) {
                Poly gm = g;
                for (int t = 1; t < mult; ++t) gm = poly_mul(F, gm, g);
                Poly h = poly_divmod(F, mu, gm).first;
                // u = h^{-1} mod gm via extended Euclid
                Poly r0 = gm, r1 = poly_mod(F, h, gm);
                Poly s0, s1 = poly_const(F.one());
                while (!r1.is_zero()) {
                    auto [qq, rr] = poly_divmod(F, r0, r1);
                    Poly s2 = poly_sub(F, s0, poly_mul(F, qq, s1));
                    r0 = std::move(r1);
                    r1 = std::move(rr);
                    s0 = std::move(s1);
                    s1 = std::move(s2);
                }
                check_internal(r0.deg() == 0, "center split: factor powers not coprime");
                Poly u = poly_scale(F, s0, F.inv(r0.c[0]));
                Poly idem_poly = poly_mul(F, u, h);
                std::vector<Fel> eps = qeval(idem_poly, z, piece.unit);
                check_internal(qmul(eps, eps) == eps, "center split: CRT element not idempotent");
                check_internal(!AlgebraRep::coords_zero(eps), "center split: zero idempotent");
                Piece sub;
                sub.unit = eps;
                for (const auto& b : piece.basis) sub.basis.push_back(qmul(eps, b));
                todo.push_back(std::move(sub));
            }
            settled = true;
        }
        check_internal(settled, "center split: sampling budget exhausted");
        if (is_field) fields.push_back(std::move(piece));
    }

    // deterministic order: by echelon position of the idempotent
    std::sort(fields.begin(), fields.end(), [](const Piece& a, const Piece& b) {
        return a.unit < b.unit;
    });

    for (const Piece& piece : fields) build_summand(piece.basis, piece.unit, rng);

    // dimension identity: sum n_i^2 d_i = dim of the quotient
    int total = 0;
    for (const auto& s : summands_) total += s.ni * s.ni * s.di;
    check_internal(total == Q, "Wedderburn dimension identity failed");
}

inline void Structure::build_summand(const std::vector<std::vector<Fel>>& piece_basis,
                                     const std::vector<Fel>& piece_unit, Rng& rng) {
    const FieldCtx& F = A_->field();
    const int D = A_->dim();
    const int di = static_cast<int>(piece_basis.size());

    SimpleSummand s;
    s.di = di;
    s.central_idem = piece_unit;

    auto echelon_vectors = [&](const std::vector<std::vector<Fel>>& gens) {
        Subspace sp(F, D);
        std::vector<std::vector<Fel>> basis;
        for (const auto& g : gens)
            if (sp.insert(g)) basis.push_back(g);
        return basis;
    };

    // summand basis: e_i * quotient
    std::vector<std::vector<Fel>> sbasis;
    {
        std::vector<std::vector<Fel>> gens;
        for (const auto& b : qbasis_) gens.push_back(qmul(s.central_idem, b));
        sbasis = echelon_vectors(gens);
    }

    // descend to a primitive idempotent: f S f is the center field iff
    // dim f S f = d_i
    std::vector<Fel> f = s.central_idem;
    std::vector<std::vector<Fel>> fsf;
    auto compute_fsf = [&]() {
        std::vector<std::vector<Fel>> gens;
        for (const auto& b : sbasis) gens.push_back(qmul(qmul(f, b), f));
        fsf = echelon_vectors(gens);
    };
    compute_fsf();
    int guard = 0;
    while (static_cast<int>(fsf.size()) > di) {
        check_internal(++guard <= A_->ambient() + 2, "primitive idempotent descent did not converge");
        bool descended = false;
        for (int tries = 0; tries < kRetryFactor * (static_cast<int>(fsf.size()) + 1) && !descended;
             ++tries) {
            std::vector<Fel> y = A_->zero_coords();
            for (const auto& b : fsf) y = A_->add_coords(y, A_->scale_coords(b, F.random(rng)));
            if (AlgebraRep::coords_zero(y)) continue;
            Poly mu = qminpoly(y, f);
            auto fac = poly_factor(F, mu, rng);
            if (fac.size() < 2) continue;
            // CRT idempotent for the first factor power
            const auto& [g, mult] = fac[0];
            Poly gm = g;
            for (int t = 1; t < mult; ++t) gm = poly_mul(F, gm, g);
            Poly h = poly_divmod(F, mu, gm).first;
            Poly r0 = gm, r1 = poly_mod(F, h, gm);
            Poly s0, s1 = poly_const(F.one());
            while (!r1.is_zero()) {
                auto [qq, rr] = poly_divmod(F, r0, r1);
                Poly s2 = poly_sub(F, s0, poly_mul(F, qq, s1));
                r0 = std::move(r1);
                r1 = std::move(rr);
                s0 = std::move(s1);
                s1 = std::move(s2);
            }
            check_internal(r0.deg() == 0, "idempotent descent: factors not coprime");
            Poly u = poly_scale(F, s0, F.inv(r0.c[0]));
            std::vector<Fel> eps = qeval(poly_mul(F, u, h), y, f);
            if (AlgebraRep::coords_zero(eps) || eps == f) continue;
            check_internal(qmul(eps, eps) == eps, "idempotent descent: not an idempotent");
            f = eps;
            compute_fsf();
            descended = true;
        }
        check_internal(descended, "idempotent descent: sampling budget exhausted");
    }
    check_internal(static_cast<int>(fsf.size()) == di, "f S f dimension below center dimension");
    s.prim_idem = f;

    // a generator of the field f S f over F_p
    const int K = di * static_cast<int>(F.k());
    {
        bool found = false;
        for (int tries = 0; tries < kRetryFactor * (K + 1) && !found; ++tries) {
            std::vector<Fel> g = A_->zero_coords();
            for (const auto& b : fsf) g = A_->add_coords(g, A_->scale_coords(b, F.random(rng)));
            if (AlgebraRep::coords_zero(g)) continue;
            // F_p-minimal polynomial: powers of g until F_p-linear dependence
            std::vector<std::vector<Fel>> pw{f};
            Subspace seen(fp_, D * static_cast<int>(F.k()));
            seen.insert(flatten_p(f));
            std::vector<Fel> cur = f;
            while (true) {
                cur = qmul(cur, g);
                if (!seen.insert(flatten_p(cur))) break;
                pw.push_back(cur);
            }
            if (static_cast<int>(pw.size()) != K) continue;  // minpoly degree = pw.size()
            // modulus: g^K = sum c_t g^t solved over F_p
            Mat sys(fp_, D * static_cast<int>(F.k()), K);
            for (int j = 0; j < K; ++j) {
                auto flat = flatten_p(pw[j]);
                for (int i = 0; i < sys.rows(); ++i) sys.at(i, j) = flat[i];
            }
            auto sol = solve_linear(sys, flatten_p(cur));
            check_internal(sol.has_value(), "field generator: dependence vanished");
            std::vector<std::uint32_t> modulus(K + 1, 0);
            for (int j = 0; j < K; ++j)
                modulus[j] = static_cast<std::uint32_t>(fp_.neg(sol->particular[j]));
            modulus[K] = 1;
            s.field = FieldCtx(F.p(), K, modulus);
            s.gamma = g;
            s.gamma_fel = K == 1 ? s.field.from_int(-static_cast<std::int64_t>(modulus[0]))
                                 : s.field.from_coeffs({0, 1});
            // to_field solve data: F_p power basis of gamma
            Mat P(fp_, D * static_cast<int>(F.k()), K);
            for (int j = 0; j < K; ++j) {
                auto flat = flatten_p(pw[j]);
                for (int i = 0; i < P.rows(); ++i) P.at(i, j) = flat[i];
            }
            auto rr = rref(P);
            s.pbasis_T = rr.T;
            s.pbasis_rank = rr.rank;
            check_internal(rr.rank == K, "field power basis is dependent");
            found = true;
        }
        check_internal(found, "field generator sampling budget exhausted");
    }

    // minimal left ideal L = S f and an F_{q_i}-basis of it
    std::vector<std::vector<Fel>> lfull;
    {
        std::vector<std::vector<Fel>> gens;
        for (const auto& b : sbasis) gens.push_back(qmul(b, f));
        lfull = echelon_vectors(gens);
    }
    check_internal(static_cast<int>(lfull.size()) % di == 0, "ideal dimension not divisible by d_i");
    s.ni = static_cast<int>(lfull.size()) / di;
    check_internal(s.ni * s.ni * di == static_cast<int>(sbasis.size()),
                   "summand dimension is not n_i^2 d_i");

    {
        // gamma powers spanning F_{q_i} over F_q
        std::vector<std::vector<Fel>> gpow{f};
        for (int u = 1; u < di; ++u) gpow.push_back(qmul(gpow.back(), s.gamma));
        Subspace espan(F, D);
        for (const auto& l : lfull) {
            if (static_cast<int>(s.lbasis.size()) == s.ni) break;
            if (espan.contains(l)) continue;
            s.lbasis.push_back(l);
            for (const auto& gp : gpow) espan.insert(qmul(l, gp));
        }
        check_internal(static_cast<int>(s.lbasis.size()) == s.ni, "ideal E-basis extraction failed");

        // Lambda: columns (t, u) -> l_t * gamma^u
        Mat lambda(F, D, s.ni * di);
        for (int t = 0; t < s.ni; ++t)
            for (int u = 0; u < di; ++u) {
                std::vector<Fel> col = qmul(s.lbasis[t], gpow[u]);
                for (int i = 0; i < D; ++i) lambda.at(i, t * di + u) = col[i];
            }
        auto rr = rref(lambda);
        // full column rank: every column is a pivot, so solution coordinates
        // read off as tb[0..rank)
        check_internal(rr.rank == s.ni * di, "ideal coordinate system is degenerate");
        s.lambda_T = rr.T;
        s.lambda_rank = rr.rank;
    }

    // from_matrix: invert to_matrix on the F_p-basis of the summand
    {
        const int total = s.ni * s.ni * K;
        std::vector<std::vector<Fel>> pbasis_elems;
        Fel x_gen = F.k() > 1 ? F.from_coeffs({0, 1}) : F.one();
        for (const auto& b : sbasis) {
            Fel sc = F.one();
            for (std::uint32_t t = 0; t < F.k(); ++t) {
                pbasis_elems.push_back(A_->scale_coords(b, sc));
                sc = F.mul(sc, x_gen);
            }
        }
        check_internal(static_cast<int>(pbasis_elems.size()) == total, "summand F_p-basis size");
        Mat img(fp_, total, total);
        for (int j = 0; j < total; ++j) {
            Mat m = to_matrix(s, pbasis_elems[j]);
            int r = 0;
            for (int a = 0; a < s.ni; ++a)
                for (int bcol = 0; bcol < s.ni; ++bcol)
                    for (std::uint32_t t : s.field.coeffs(m.at(a, bcol))) img.at(r++, j) = t;
        }
        auto inv = mat_inverse(img);
        check_internal(inv.has_value(), "to_matrix is not invertible on the summand");
        s.from_cols.assign(total, {});
        for (int unit = 0; unit < total; ++unit) {
            std::vector<Fel> acc = A_->zero_coords();
            for (int j = 0; j < total; ++j) {
                Fel c = inv->at(j, unit);
                if (c != 0)
                    acc = A_->add_coords(acc, A_->scale_coords(pbasis_elems[j], F.from_int(static_cast<std::int64_t>(c))));
            }
            s.from_cols[unit] = reduce(acc);
        }
    }

    summands_.push_back(std::move(s));
}

inline Structure wedderburn(const AlgebraRep& A, Rng& rng) { return Structure(A, rng); }

}  // namespace starform
