#pragma once

// Integer helpers shared by every module: modular arithmetic on 64-bit words,
// primality, factorization by trial division and multiplicative orders.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hkl {

using BigInt = boost::multiprecision::cpp_int;

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    std::uint64_t s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return a >= b ? a - b : a + (m - b);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (r != 1) throw DomainError("inv_mod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t sp : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % sp == 0) return n == sp;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d) continue;
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (auto& [pr, e] : factorize(n)) out.push_back(pr);
    return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out{1};
    for (auto& [pr, e] : factorize(n)) {
        std::size_t cur = out.size();
        std::uint64_t pw = 1;
        for (unsigned i = 0; i < e; ++i) {
            pw *= pr;
            for (std::size_t j = 0; j < cur; ++j) out.push_back(out[j] * pw);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto& [pr, e] : factorize(n)) r = r / pr * (pr - 1);
    return r;
}

/// Order of a in (Z/m)^x; requires gcd(a, m) = 1.
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (m == 1) return 1;
    if (std::gcd(a % m, m) != 1) throw DomainError("multiplicative_order: gcd(a, m) != 1");
    std::uint64_t ord = euler_phi(m);
    for (auto& [pr, e] : factorize(ord)) {
        for (unsigned i = 0; i < e && ord % pr == 0 && pow_mod(a, ord / pr, m) == 1; ++i) ord /= pr;
    }
    return ord;
}

/// Returns (r, m) with n = r^m, r prime, or nullopt-like (0, 0) if n is not a prime power.
inline std::pair<std::uint64_t, unsigned> prime_power_decomposition(std::uint64_t n) {
    auto f = factorize(n);
    if (f.size() != 1) return {0, 0};
    return f.front();
}

inline BigInt big_pow(std::uint64_t base, unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Floor-mod for signed values.
inline std::uint64_t mod_floor(std::int64_t a, std::uint64_t m) {
    std::int64_t r = a % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

inline std::uint64_t mod_big(const BigInt& a, std::uint64_t m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r.convert_to<std::uint64_t>();
}

}  // namespace hkl
