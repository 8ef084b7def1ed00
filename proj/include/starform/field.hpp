#pragma once

// Exact arithmetic in F_{p^k} for odd p, plus the number-theoretic helpers
// the canonical-form machinery needs (square roots, non-squares, sums of two
// squares, norm equations, subfield towers).
//
// An element is stored as its index in [0, q): the base-p digits of the index
// are the coordinates in the power basis of the modulus polynomial. This
// keeps elements trivially copyable and makes "the fixed enumeration of the
// field" literally 0, 1, 2, ...

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace starform {

using Fel = std::uint64_t;

namespace detail {

inline bool is_small_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace detail

class FieldCtx {
  public:
    // Prime field F_p.
    explicit FieldCtx(std::uint32_t p) : FieldCtx(p, 1, {0, 1}) {}

    // F_{p^k} with an explicit monic modulus of degree k (coefficients low
    // to high, length k+1). For k = 1 the modulus is irrelevant.
    FieldCtx(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
        : p_(p), k_(k), modulus_(std::move(modulus)) {
        require(detail::is_small_prime(p_) && p_ % 2 == 1, "FieldCtx: p must be an odd prime");
        require(k_ >= 1, "FieldCtx: k must be >= 1");
        require(modulus_.size() == k_ + 1 && modulus_.back() % p_ == 1,
                "FieldCtx: modulus must be monic of degree k");
        for (auto& c : modulus_) c %= p_;
        q_ = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            require(q_ <= UINT64_MAX / p_, "FieldCtx: q overflows 64 bits");
            q_ *= p_;
        }
        if (k_ > 1)
            require(modulus_irreducible(), "FieldCtx: modulus is reducible over F_p");
    }

    // F_{p^k} with a random irreducible modulus.
    static FieldCtx extension(std::uint32_t p, std::uint32_t k, Rng& rng) {
        if (k == 1) return FieldCtx(p);
        for (int tries = 0; tries < kRetryFactor * static_cast<int>(k); ++tries) {
            std::vector<std::uint32_t> m(k + 1);
            m[k] = 1;
            for (std::uint32_t i = 0; i < k; ++i)
                m[i] = static_cast<std::uint32_t>(rng.below(p));
            try {
                return FieldCtx(p, k, m);
            } catch (const input_error&) {
            }
        }
        throw budget_exceeded_error("FieldCtx::extension: no irreducible modulus found");
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t q() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    bool same_field(const FieldCtx& o) const {
        return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
    }

    Fel zero() const { return 0; }
    Fel one() const { return 1; }

    Fel from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Fel>(r);
    }

    std::vector<std::uint32_t> coeffs(Fel a) const {
        std::vector<std::uint32_t> c(k_);
        for (std::uint32_t i = 0; i < k_; ++i) {
            c[i] = static_cast<std::uint32_t>(a % p_);
            a /= p_;
        }
        return c;
    }

    Fel from_coeffs(const std::vector<std::uint32_t>& c) const {
        require(c.size() <= k_, "from_coeffs: too many coordinates");
        Fel a = 0;
        for (std::size_t i = c.size(); i-- > 0;) a = a * p_ + (c[i] % p_);
        return a;
    }

    Fel add(Fel a, Fel b) const {
        if (k_ == 1) return (a + b) % p_;
        Fel r = 0, mul = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            r += ((a % p_ + b % p_) % p_) * mul;
            a /= p_;
            b /= p_;
            mul *= p_;
        }
        return r;
    }

    Fel neg(Fel a) const {
        if (k_ == 1) return a == 0 ? 0 : p_ - a;
        Fel r = 0, mul = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint64_t d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * mul;
            a /= p_;
            mul *= p_;
        }
        return r;
    }

    Fel sub(Fel a, Fel b) const { return add(a, neg(b)); }

    Fel mul(Fel a, Fel b) const {
        if (k_ == 1) return (a * b) % p_;
        std::array<std::uint64_t, 2 * kMaxK> prod{};
        std::array<std::uint32_t, kMaxK> da{}, db{};
        decode(a, da);
        decode(b, db);
        for (std::uint32_t i = 0; i < k_; ++i) {
            if (da[i] == 0) continue;
            for (std::uint32_t j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + std::uint64_t(da[i]) * db[j]) % p_;
        }
        // reduce by the monic modulus
        for (std::uint32_t d = 2 * k_ - 2; d + 1 > k_; --d) {
            std::uint64_t c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            for (std::uint32_t j = 0; j < k_; ++j) {
                std::uint64_t t = c * modulus_[j] % p_;
                std::uint64_t idx = d - k_ + j;
                prod[idx] = (prod[idx] + p_ - t) % p_;
            }
        }
        Fel r = 0;
        for (std::uint32_t i = k_; i-- > 0;) r = r * p_ + prod[i];
        return r;
    }

    Fel pow(Fel a, std::uint64_t e) const {
        Fel r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Fel inv(Fel a) const {
        require(a != 0, "inv of zero");
        if (k_ == 1) {
            // extended Euclid on integers
            std::int64_t t = 0, nt = 1, r = p_, nr = static_cast<std::int64_t>(a);
            while (nr != 0) {
                std::int64_t qq = r / nr;
                std::swap(t -= qq * nt, nt);
                std::swap(r -= qq * nr, nr);
            }
            if (t < 0) t += p_;
            return static_cast<Fel>(t);
        }
        return pow(a, q_ - 2);
    }

    Fel div(Fel a, Fel b) const { return mul(a, inv(b)); }

    Fel half(Fel a) const { return mul(a, inv(from_int(2))); }

    Fel random(Rng& rng) const { return rng.below(q_); }

    Fel random_nonzero(Rng& rng) const { return 1 + rng.below(q_ - 1); }

    // Frobenius x -> x^{p^i}.
    Fel frobenius(Fel a, std::uint32_t i = 1) const {
        Fel r = a;
        for (std::uint32_t j = 0; j < i; ++j) r = pow(r, p_);
        return r;
    }

    // Trace down to F_p, returned as an element of the prime field.
    std::uint32_t trace_to_prime(Fel a) const {
        Fel s = 0, t = a;
        for (std::uint32_t i = 0; i < k_; ++i) {
            s = add(s, t);
            t = pow(t, p_);
        }
        check_internal(s < p_, "trace left the prime field");
        return static_cast<std::uint32_t>(s);
    }

    bool is_square(Fel a) const {
        if (a == 0) return true;
        return pow(a, (q_ - 1) / 2) == one();
    }

    // Tonelli-Shanks. Returns none iff a is a non-square.
    std::optional<Fel> sqrt(Fel a, Rng& rng) const {
        if (a == 0) return Fel{0};
        if (!is_square(a)) return std::nullopt;
        std::uint64_t s = q_ - 1;
        std::uint32_t e = 0;
        while (s % 2 == 0) {
            s /= 2;
            ++e;
        }
        if (e == 1) {
            Fel r = pow(a, (s + 1) / 2);
            check_internal(mul(r, r) == a, "sqrt: q = 3 mod 4 shortcut failed");
            return r;
        }
        Fel g = pow(find_nonsquare(rng), s);
        Fel x = pow(a, (s + 1) / 2);
        Fel b = pow(a, s);
        std::uint32_t r = e;
        while (b != one()) {
            std::uint32_t m = 0;
            Fel t = b;
            while (t != one()) {
                t = mul(t, t);
                ++m;
                check_internal(m <= r, "sqrt: order computation ran away");
            }
            Fel gs = g;
            for (std::uint32_t i = 0; i + m + 1 < r; ++i) gs = mul(gs, gs);
            x = mul(x, gs);
            g = mul(gs, gs);
            b = mul(b, g);
            r = m;
        }
        check_internal(mul(x, x) == a, "sqrt: verification failed");
        return x;
    }

    Fel find_nonsquare(Rng& rng) const {
        for (int tries = 0; tries < kRetryFactor * static_cast<int>(k_ + 1); ++tries) {
            Fel a = random_nonzero(rng);
            if (!is_square(a)) return a;
        }
        throw budget_exceeded_error("find_nonsquare: budget exhausted");
    }

    // (alpha, beta) with alpha^2 + beta^2 = w; always solvable for q odd.
    std::pair<Fel, Fel> two_squares(Fel w, Rng& rng) const {
        require(w != 0, "two_squares: w must be nonzero");
        for (int tries = 0; tries < kRetryFactor * static_cast<int>(k_ + 1); ++tries) {
            Fel alpha = random(rng);
            Fel rest = sub(w, mul(alpha, alpha));
            if (auto beta = sqrt(rest, rng)) return {alpha, *beta};
        }
        throw budget_exceeded_error("two_squares: budget exhausted");
    }

  private:
    static constexpr std::uint32_t kMaxK = 24;

    void decode(Fel a, std::array<std::uint32_t, kMaxK>& out) const {
        for (std::uint32_t i = 0; i < k_; ++i) {
            out[i] = static_cast<std::uint32_t>(a % p_);
            a /= p_;
        }
    }

    // Irreducibility of the modulus over F_p: f is irreducible of degree k
    // iff x^{p^k} = x mod f and gcd(x^{p^d} - x, f) = 1 for proper prime
    // divisors d of k. Runs on raw digit vectors, before field ops exist.
    bool modulus_irreducible() const;

    std::uint32_t p_, k_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;
};

namespace detail {

// Minimal F_p[x] arithmetic on digit vectors, used only for the modulus check.
using PPoly = std::vector<std::uint32_t>;

inline void ppoly_trim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PPoly ppoly_mod(PPoly f, const PPoly& g, std::uint64_t p) {
    ppoly_trim(f);
    std::uint64_t lead_inv = 1;
    {
        std::uint64_t lg = g.back(), t = 1, b = lg, e = p - 2;
        while (e) {
            if (e & 1) t = t * b % p;
            b = b * b % p;
            e >>= 1;
        }
        lead_inv = t;
    }
    while (f.size() >= g.size()) {
        std::uint64_t c = std::uint64_t(f.back()) * lead_inv % p;
        std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::uint64_t t = c * g[i] % p;
            f[shift + i] = static_cast<std::uint32_t>((f[shift + i] + p - t) % p);
        }
        ppoly_trim(f);
    }
    return f;
}

inline PPoly ppoly_mulmod(const PPoly& a, const PPoly& b, const PPoly& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    return ppoly_mod(std::move(r), m, p);
}

inline PPoly ppoly_gcd(PPoly a, PPoly b, std::uint64_t p) {
    ppoly_trim(a);
    ppoly_trim(b);
    while (!b.empty()) {
        PPoly r = ppoly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// x^{p^e} mod m
inline PPoly ppoly_xqpow(std::uint32_t e, const PPoly& m, std::uint64_t p) {
    PPoly r = {0, 1};
    r = ppoly_mod(std::move(r), m, p);
    for (std::uint32_t i = 0; i < e; ++i) {
        // raise to the p-th power by square-and-multiply
        PPoly base = r;
        PPoly acc = {1};
        std::uint64_t ee = p;
        while (ee) {
            if (ee & 1) acc = ppoly_mulmod(acc, base, m, p);
            base = ppoly_mulmod(base, base, m, p);
            ee >>= 1;
        }
        r = std::move(acc);
    }
    return r;
}

}  // namespace detail

inline bool FieldCtx::modulus_irreducible() const {
    using namespace detail;
    PPoly m(modulus_.begin(), modulus_.end());
    if (m[0] == 0) return false;  // x divides f
    PPoly xqk = ppoly_xqpow(k_, m, p_);
    PPoly x = ppoly_mod({0, 1}, m, p_);
    PPoly diff(std::max(xqk.size(), x.size()), 0);
    for (std::size_t i = 0; i < xqk.size(); ++i) diff[i] = xqk[i];
    for (std::size_t i = 0; i < x.size(); ++i)
        diff[i] = static_cast<std::uint32_t>((diff[i] + p_ - x[i]) % p_);
    ppoly_trim(diff);
    if (!diff.empty()) return false;
    for (std::uint32_t d = 1; d <= k_ / 2; ++d) {
        if (k_ % d != 0) continue;
        PPoly xqd = ppoly_xqpow(d, m, p_);
        PPoly g(std::max<std::size_t>(xqd.size(), 2), 0);
        for (std::size_t i = 0; i < xqd.size(); ++i) g[i] = xqd[i];
        g[1] = static_cast<std::uint32_t>((g[1] + p_ - 1) % p_);
        ppoly_trim(g);
        PPoly gc = ppoly_gcd(g, m, p_);
        if (gc.size() != 1) return false;
    }
    return true;
}

// Embedding data for F_{p^{k'}} inside F_{p^k}, k' | k: an F_p-basis of the
// subfield and the conjugation x -> x^{q'} generating Gal(F_q / F_{q'}).
struct SubfieldTower {
    const FieldCtx* field = nullptr;
    std::uint32_t sub_k = 0;
    std::uint64_t sub_q = 0;             // q' = p^{k'}
    std::vector<Fel> basis;              // F_p-basis of the subfield inside F_q

    Fel conj(Fel a) const { return field->pow(a, sub_q); }

    bool in_subfield(Fel a) const { return conj(a) == a; }
};

inline SubfieldTower subfield_tower(const FieldCtx& F, std::uint32_t sub_k) {
    if (sub_k == 0 || F.k() % sub_k != 0)
        throw input_error("subfield_tower: k' does not divide k");
    SubfieldTower t;
    t.field = &F;
    t.sub_k = sub_k;
    t.sub_q = 1;
    for (std::uint32_t i = 0; i < sub_k; ++i) t.sub_q *= F.p();
    // The subfield is the kernel of x -> x^{q'} - x; collect an F_p-basis by
    // scanning the fixed enumeration (q is desk-scale small in every caller).
    std::vector<Fel> basis;
    std::vector<Fel> span;  // all current F_p-combinations, incl. 0
    span.push_back(0);
    for (Fel a = 1; a < F.q() && basis.size() < sub_k; ++a) {
        if (!t.in_subfield(a)) continue;
        bool fresh = true;
        for (Fel s : span)
            if (s == a) {
                fresh = false;
                break;
            }
        if (!fresh) continue;
        basis.push_back(a);
        std::vector<Fel> bigger;
        for (Fel s : span) {
            Fel t2 = s;
            for (std::uint32_t c = 0; c < F.p(); ++c) {
                bigger.push_back(t2);
                t2 = F.add(t2, a);
            }
        }
        span = std::move(bigger);
    }
    check_internal(basis.size() == sub_k, "subfield_tower: basis extraction failed");
    t.basis = std::move(basis);
    return t;
}

// Square root within the subfield fixed by the tower (Tonelli-Shanks with
// the subfield's group order). Returns none iff a is a non-square there.
inline std::optional<Fel> subfield_sqrt(const SubfieldTower& t, Fel a, Rng& rng) {
    const FieldCtx& F = *t.field;
    if (a == 0) return Fel{0};
    check_internal(t.in_subfield(a), "subfield_sqrt: argument outside subfield");
    std::uint64_t qp = t.sub_q;
    if (F.pow(a, (qp - 1) / 2) != F.one()) return std::nullopt;
    std::uint64_t s = qp - 1;
    std::uint32_t e = 0;
    while (s % 2 == 0) {
        s /= 2;
        ++e;
    }
    Fel n = 0;
    for (int tries = 0;; ++tries) {
        if (tries >= kRetryFactor * static_cast<int>(F.k() + 1))
            throw budget_exceeded_error("subfield_sqrt: no subfield non-square found");
        // random subfield element via the F_p-basis
        Fel cand = 0;
        for (Fel b : t.basis) cand = F.add(cand, F.mul(F.from_int(static_cast<std::int64_t>(rng.below(F.p()))), b));
        if (cand != 0 && F.pow(cand, (qp - 1) / 2) != F.one()) {
            n = cand;
            break;
        }
    }
    Fel g = F.pow(n, s);
    Fel x = F.pow(a, (s + 1) / 2);
    Fel b = F.pow(a, s);
    std::uint32_t r = e;
    while (b != F.one()) {
        std::uint32_t m = 0;
        Fel tt = b;
        while (tt != F.one()) {
            tt = F.mul(tt, tt);
            ++m;
            check_internal(m <= r, "subfield_sqrt: order ran away");
        }
        Fel gs = g;
        for (std::uint32_t i = 0; i + m + 1 < r; ++i) gs = F.mul(gs, gs);
        x = F.mul(x, gs);
        g = F.mul(gs, gs);
        b = F.mul(b, g);
        r = m;
    }
    check_internal(F.mul(x, x) == a && t.in_subfield(x), "subfield_sqrt: verification failed");
    return x;
}

// (x, y) in the subfield with x^2 - omega y^2 = alpha, omega a subfield
// non-square. Solvable for every alpha in the subfield.
inline std::pair<Fel, Fel> norm_eq(const SubfieldTower& t, Fel alpha, Fel omega, Rng& rng) {
    const FieldCtx& F = *t.field;
    check_internal(t.in_subfield(alpha) && t.in_subfield(omega), "norm_eq: arguments outside subfield");
    if (alpha == 0) return {0, 0};
    for (int tries = 0; tries < kRetryFactor * static_cast<int>(F.k() + 2); ++tries) {
        Fel y = 0;
        for (Fel b : t.basis) y = F.add(y, F.mul(F.from_int(static_cast<std::int64_t>(rng.below(F.p()))), b));
        Fel rhs = F.add(alpha, F.mul(omega, F.mul(y, y)));
        if (auto x = subfield_sqrt(t, rhs, rng)) return {*x, y};
    }
    throw budget_exceeded_error("norm_eq: budget exhausted");
}

inline std::string fel_to_string(const FieldCtx& F, Fel a) {
    auto c = F.coeffs(a);
    std::ostringstream os;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) os << ',';
        os << c[i];
    }
    return os.str();
}

inline Fel fel_from_string(const FieldCtx& F, const std::string& s) {
    std::vector<std::uint32_t> c;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        require(!tok.empty(), "element literal: empty coordinate");
        c.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    require(c.size() <= F.k(), "element literal: too many coordinates for this field");
    for (auto& d : c) d %= F.p();
    return F.from_coeffs(c);
}

}  // namespace starform
