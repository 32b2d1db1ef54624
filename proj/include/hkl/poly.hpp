#pragma once

// Dense univariate polynomials over a prime field F_p. Coefficients are stored
// constant term first; the zero polynomial is the empty vector.

#include "hkl/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace hkl::poly {

using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly reduce_coeffs(Poly a, std::uint64_t p) {
    for (auto& c : a) c %= p;
    trim(a);
    return a;
}

inline Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = add_mod(r[i], b[i], p);
    trim(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = sub_mod(r[i], b[i], p);
    trim(r);
    return r;
}

inline Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_mod(a[i], c, p);
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add_mod(r[i + j], mul_mod(a[i], b[j], p), p);
    }
    trim(r);
    return r;
}

/// Quotient and remainder of a by a nonzero b.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::uint64_t p) {
    if (b.empty()) throw DomainError("poly::divmod: division by zero polynomial");
    trim(a);
    if (a.size() < b.size()) return {{}, a};
    const std::uint64_t lead_inv = inv_mod(b.back(), p);
    Poly q(a.size() - b.size() + 1, 0);
    for (std::size_t i = a.size(); i-- >= b.size();) {
        std::uint64_t c = mul_mod(a[i], lead_inv, p);
        q[i - (b.size() - 1)] = c;
        if (c == 0) continue;
        std::size_t shift = i - (b.size() - 1);
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = sub_mod(a[shift + j], mul_mod(c, b[j], p), p);
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline Poly rem(const Poly& a, const Poly& b, std::uint64_t p) { return divmod(a, b, p).second; }

inline Poly monic(const Poly& a, std::uint64_t p) {
    if (a.empty()) return a;
    return scale(a, inv_mod(a.back(), p), p);
}

/// Monic gcd.
inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, p);
}

inline Poly mul_mod_poly(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
    return rem(mul(a, b, p), m, p);
}

inline Poly pow_mod_poly(Poly base, const BigInt& e, const Poly& m, std::uint64_t p) {
    Poly r = rem(Poly{1}, m, p);
    base = rem(base, m, p);
    if (e == 0) return r;
    const std::size_t bits = boost::multiprecision::msb(e) + 1;
    for (std::size_t i = bits; i-- > 0;) {
        r = mul_mod_poly(r, r, m, p);
        if (boost::multiprecision::bit_test(e, i)) r = mul_mod_poly(r, base, m, p);
    }
    return r;
}

inline Poly pow_mod_poly(const Poly& base, std::uint64_t e, const Poly& m, std::uint64_t p) {
    return pow_mod_poly(base, BigInt(e), m, p);
}

/// Rabin's irreducibility test for a polynomial of degree k >= 1.
inline bool is_irreducible(const Poly& f_in, std::uint64_t p) {
    Poly f = monic(reduce_coeffs(f_in, p), p);
    const int k = degree(f);
    if (k < 1) return false;
    if (k == 1) return true;
    const Poly x{0, 1};
    // x^(p^i) mod f for i = 0..k
    std::vector<Poly> frob(k + 1);
    frob[0] = rem(x, f, p);
    for (int i = 1; i <= k; ++i) frob[i] = pow_mod_poly(frob[i - 1], p, f, p);
    if (frob[k] != frob[0]) return false;
    for (std::uint64_t r : prime_divisors(static_cast<std::uint64_t>(k))) {
        Poly g = gcd(f, sub(frob[k / r], frob[0], p), p);
        if (degree(g) != 0) return false;
    }
    return true;
}

/// Splits a squarefree monic polynomial whose irreducible factors all have
/// degree f into those factors (Cantor-Zassenhaus). Factors are returned in
/// unspecified order.
inline std::vector<Poly> equal_degree_factor(const Poly& h_in, int f, std::uint64_t p, std::uint64_t seed = 0) {
    Poly h = monic(h_in, p);
    if (degree(h) % f != 0) throw DomainError("equal_degree_factor: degree not a multiple of f");
    std::mt19937_64 rng(seed);
    std::vector<Poly> done, todo{h};
    const BigInt half_exp = (boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(f)) - 1) / 2;
    while (!todo.empty()) {
        Poly cur = std::move(todo.back());
        todo.pop_back();
        if (degree(cur) == f) {
            done.push_back(std::move(cur));
            continue;
        }
        for (;;) {
            Poly a(static_cast<std::size_t>(degree(cur)));
            for (auto& c : a) c = rng() % p;
            trim(a);
            if (degree(a) < 1) continue;
            Poly b;
            if (p == 2) {
                // trace map a + a^2 + ... + a^(2^(f-1))
                Poly t = a;
                b = a;
                for (int i = 1; i < f; ++i) {
                    t = mul_mod_poly(t, t, cur, p);
                    b = add(b, t, p);
                }
            } else {
                b = sub(pow_mod_poly(a, half_exp, cur, p), Poly{1}, p);
            }
            Poly d = gcd(cur, b, p);
            if (degree(d) > 0 && degree(d) < degree(cur)) {
                todo.push_back(d);
                todo.push_back(divmod(cur, d, p).first);
                break;
            }
        }
    }
    return done;
}

/// Integer encoding sum c_i p^i of the first `len` coefficients.
inline std::uint64_t encode(const Poly& a, std::size_t len, std::uint64_t p) {
    std::uint64_t code = 0;
    for (std::size_t i = len; i-- > 0;) code = code * p + (i < a.size() ? a[i] : 0);
    return code;
}

}  // namespace hkl::poly
