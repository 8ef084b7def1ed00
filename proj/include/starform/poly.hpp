#pragma once

// Dense univariate polynomials over F_q and complete factorization into monic
// irreducibles: squarefree split via gcd with the derivative (including the
// p-th power case), distinct-degree, then seeded equal-degree splitting.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "field.hpp"

namespace starform {

// Coefficients low to high; canonical form has a nonzero leading coefficient
// (the zero polynomial is the empty vector).
struct Poly {
    std::vector<Fel> c;

    bool is_zero() const { return c.empty(); }
    int deg() const { return static_cast<int>(c.size()) - 1; }
    Fel lead() const { return c.back(); }

    bool operator==(const Poly& o) const = default;
};

inline Poly poly_trim(Poly f) {
    while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
    return f;
}

inline Poly poly_from(std::vector<Fel> c) { return poly_trim(Poly{std::move(c)}); }

inline Poly poly_x() { return Poly{{0, 1}}; }

inline Poly poly_const(Fel a) { return poly_trim(Poly{{a}}); }

inline Poly poly_add(const FieldCtx& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = F.add(r.c[i], b.c[i]);
    return poly_trim(std::move(r));
}

inline Poly poly_sub(const FieldCtx& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = F.sub(r.c[i], b.c[i]);
    return poly_trim(std::move(r));
}

inline Poly poly_mul(const FieldCtx& F, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    return r;
}

inline Poly poly_scale(const FieldCtx& F, const Poly& a, Fel s) {
    Poly r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return poly_trim(std::move(r));
}

inline std::pair<Poly, Poly> poly_divmod(const FieldCtx& F, Poly a, const Poly& b) {
    require(!b.is_zero(), "poly division by zero");
    Poly q;
    if (a.deg() < b.deg()) return {q, a};
    q.c.assign(a.c.size() - b.c.size() + 1, 0);
    Fel li = F.inv(b.lead());
    for (int d = a.deg(); d >= b.deg(); --d) {
        if (static_cast<std::size_t>(d) >= a.c.size() || a.c[d] == 0) continue;
        Fel f = F.mul(a.c[d], li);
        q.c[d - b.deg()] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i)
            a.c[d - b.deg() + i] = F.sub(a.c[d - b.deg() + i], F.mul(f, b.c[i]));
    }
    return {poly_trim(std::move(q)), poly_trim(std::move(a))};
}

inline Poly poly_mod(const FieldCtx& F, const Poly& a, const Poly& b) {
    return poly_divmod(F, a, b).second;
}

inline Poly poly_monic(const FieldCtx& F, const Poly& a) {
    if (a.is_zero()) return a;
    return poly_scale(F, a, F.inv(a.lead()));
}

inline Poly poly_gcd(const FieldCtx& F, Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, a);
}

inline Poly poly_derivative(const FieldCtx& F, const Poly& a) {
    Poly r;
    if (a.deg() < 1) return r;
    r.c.resize(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i)
        r.c[i - 1] = F.mul(a.c[i], F.from_int(static_cast<std::int64_t>(i)));
    return poly_trim(std::move(r));
}

inline Poly poly_mulmod(const FieldCtx& F, const Poly& a, const Poly& b, const Poly& m) {
    return poly_mod(F, poly_mul(F, a, b), m);
}

inline Poly poly_powmod(const FieldCtx& F, Poly base, std::uint64_t e, const Poly& m) {
    Poly r = poly_const(F.one());
    base = poly_mod(F, base, m);
    while (e) {
        if (e & 1) r = poly_mulmod(F, r, base, m);
        base = poly_mulmod(F, base, base, m);
        e >>= 1;
    }
    return r;
}

inline Fel poly_eval(const FieldCtx& F, const Poly& f, Fel x) {
    Fel r = 0;
    for (std::size_t i = f.c.size(); i-- > 0;) r = F.add(F.mul(r, x), f.c[i]);
    return r;
}

inline Poly poly_random_monic(const FieldCtx& F, int deg, Rng& rng) {
    Poly f;
    f.c.resize(deg + 1);
    for (int i = 0; i < deg; ++i) f.c[i] = F.random(rng);
    f.c[deg] = F.one();
    return f;
}

namespace detail {

// q-th root of a coefficient of f(x) = g(x^p): c -> c^{q/p}.
inline Fel pth_root(const FieldCtx& F, Fel a) {
    std::uint64_t e = F.q() / F.p();
    return F.pow(a, e == 0 ? 1 : e);
}

inline void edf_split(const FieldCtx& F, const Poly& f, int d, Rng& rng, std::vector<Poly>& out) {
    if (f.deg() == d) {
        out.push_back(f);
        return;
    }
    // Cantor-Zassenhaus: gcd(h^{(q^d-1)/2} - 1, f) splits with prob ~1/2.
    // (q^d-1)/2 = (1 + q + ... + q^{d-1}) * (q-1)/2, so the power is the
    // "norm" product of the q-power conjugates raised to (q-1)/2; this keeps
    // every exponent within 64 bits.
    for (int tries = 0; tries < kRetryFactor * (f.deg() + 1); ++tries) {
        Poly h = poly_random_monic(F, static_cast<int>(rng.below(f.deg())) + 1, rng);
        Poly g = poly_gcd(F, h, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf_split(F, g, d, rng, out);
            edf_split(F, poly_divmod(F, f, g).first, d, rng, out);
            return;
        }
        Poly norm = poly_mod(F, h, f);
        Poly conj = norm;
        for (int i = 1; i < d; ++i) {
            conj = poly_powmod(F, conj, F.q(), f);
            norm = poly_mulmod(F, norm, conj, f);
        }
        Poly e = poly_powmod(F, norm, (F.q() - 1) / 2, f);
        e = poly_sub(F, e, poly_const(F.one()));
        g = poly_gcd(F, e, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf_split(F, g, d, rng, out);
            edf_split(F, poly_divmod(F, f, g).first, d, rng, out);
            return;
        }
    }
    throw budget_exceeded_error("equal-degree splitting: budget exhausted");
}

// f squarefree monic; returns irreducible factors.
inline std::vector<Poly> factor_squarefree(const FieldCtx& F, Poly f, Rng& rng) {
    std::vector<Poly> out;
    Poly xq = poly_powmod(F, poly_x(), F.q(), f);  // x^q mod f
    Poly h = xq;
    int d = 1;
    while (f.deg() >= 2 * d) {
        Poly diff = poly_sub(F, h, poly_x());
        Poly g = poly_gcd(F, diff, f);
        if (g.deg() > 0) {
            edf_split(F, g, d, rng, out);
            f = poly_divmod(F, f, g).first;
            h = poly_mod(F, h, f);
        }
        ++d;
        if (f.deg() < 2 * d) break;
        h = poly_powmod(F, h, F.q(), f);
    }
    if (f.deg() > 0) out.push_back(f);
    return out;
}

}  // namespace detail

// Complete factorization of a nonzero polynomial into monic irreducibles with
// multiplicities; the product times lead(f) recovers f.
inline std::vector<std::pair<Poly, int>> poly_factor(const FieldCtx& F, Poly f, Rng& rng) {
    require(!f.is_zero(), "factor: zero polynomial");
    f = poly_monic(F, f);
    std::vector<std::pair<Poly, int>> result;
    if (f.deg() == 0) return result;

    // squarefree decomposition, with the x^p descent for vanishing derivatives
    struct Item {
        Poly f;
        int mult;
    };
    std::vector<Item> stack{{f, 1}};
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        if (it.f.deg() == 0) continue;
        Poly der = poly_derivative(F, it.f);
        if (der.is_zero()) {
            // f = g(x^p): take p-th root coefficientwise
            Poly g;
            g.c.resize(it.f.deg() / F.p() + 1);
            for (std::size_t i = 0; i < g.c.size(); ++i)
                g.c[i] = detail::pth_root(F, it.f.c[i * F.p()]);
            stack.push_back({poly_trim(std::move(g)), it.mult * static_cast<int>(F.p())});
            continue;
        }
        Poly g = poly_gcd(F, it.f, der);
        Poly sqfree = poly_divmod(F, it.f, g).first;  // squarefree part
        if (g.deg() > 0) stack.push_back({g, it.mult});
        if (sqfree.deg() > 0) {
            for (Poly& irr : detail::factor_squarefree(F, sqfree, rng)) {
                bool merged = false;
                for (auto& [p0, m0] : result)
                    if (p0 == irr) {
                        m0 += it.mult;
                        merged = true;
                        break;
                    }
                if (!merged) result.emplace_back(std::move(irr), it.mult);
            }
        }
    }
    // multiplicities from the gcd cascade double-count: recompute exactly
    for (auto& [p0, m0] : result) {
        int m = 0;
        Poly rest = f;
        while (true) {
            auto [quo, rem] = poly_divmod(F, rest, p0);
            if (!rem.is_zero()) break;
            ++m;
            rest = quo;
        }
        m0 = m;
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        return a.first.c < b.first.c;
    });
    return result;
}

inline bool poly_is_irreducible(const FieldCtx& F, const Poly& f, Rng& rng) {
    if (f.deg() <= 0) return false;
    auto fac = poly_factor(F, f, rng);
    return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace starform
