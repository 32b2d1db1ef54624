#pragma once

// Exact arithmetic in Z[zeta_m] over the power basis {zeta^i : 0 <= i < phi(m)},
// Gauss sums, splitting of rational primes and reduction modulo a prime above l.

#include "hkl/finite_field.hpp"
#include "hkl/numeric.hpp"
#include "hkl/poly.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace hkl {

/// Element of Z[zeta_m] in canonical form (fully reduced by Phi_m).
struct CycloInt {
    std::uint64_t m = 0;
    std::vector<BigInt> coeffs;

    friend bool operator==(const CycloInt&, const CycloInt&) = default;
};

namespace detail {

using IntPoly = std::vector<std::int64_t>;

inline IntPoly exact_div_monic(IntPoly a, const IntPoly& b) {
    IntPoly q(a.size() - b.size() + 1, 0);
    for (std::size_t i = a.size(); i-- >= b.size();) {
        std::int64_t c = a[i];
        std::size_t shift = i - (b.size() - 1);
        q[shift] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    }
    return q;
}

inline IntPoly cyclotomic_poly(std::uint64_t m) {
    static std::map<std::uint64_t, IntPoly> cache;
    static std::recursive_mutex mu;
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
    IntPoly num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (std::uint64_t d : divisors(m)) {
        if (d == m) continue;
        num = exact_div_monic(num, cyclotomic_poly(d));
    }
    cache.emplace(m, num);
    return num;
}

}  // namespace detail

class CycloRing {
public:
    explicit CycloRing(std::uint64_t m) : m_(m) {
        if (m < 2) throw DomainError("CycloRing: conductor must be >= 2");
        phi_ = euler_phi(m);
        phi_poly_ = detail::cyclotomic_poly(m);
    }

    /// Z[zeta_p] for p = 1 mod 4 or when no square root of -p is needed,
    /// Z[zeta_4p] otherwise.
    static CycloRing for_prime(std::uint64_t p, bool need_zeta4) { return CycloRing(need_zeta4 ? 4 * p : p); }

    std::uint64_t m() const { return m_; }
    std::uint64_t phi() const { return phi_; }
    const std::vector<std::int64_t>& cyclotomic_poly() const { return phi_poly_; }

    CycloInt zero() const { return CycloInt{m_, std::vector<BigInt>(phi_)}; }
    CycloInt one() const { return from_int(1); }
    CycloInt from_int(const BigInt& c) const {
        CycloInt r = zero();
        r.coeffs[0] = c;
        return r;
    }
    /// zeta_m^e for any integer e.
    CycloInt zeta_pow(std::int64_t e) const {
        std::vector<BigInt> v(m_);
        v[mod_floor(e, m_)] = 1;
        return canonicalize(std::move(v));
    }
    /// Image of zeta_{d}^e for d | m.
    CycloInt root_of_unity(std::uint64_t d, std::int64_t e) const {
        if (m_ % d != 0) throw DomainError("root_of_unity: order does not divide the conductor");
        return zeta_pow(static_cast<std::int64_t>(mod_floor(e, d) * (m_ / d)));
    }

    /// Reduces any coefficient vector (index = exponent of zeta_m) to canonical form.
    CycloInt canonicalize(std::vector<BigInt> v) const {
        if (v.size() > m_) {
            for (std::size_t i = m_; i < v.size(); ++i) v[i % m_] += v[i];
            v.resize(m_);
        }
        if (v.size() < m_) v.resize(m_);
        for (std::size_t i = m_; i-- > phi_;) {
            if (v[i] == 0) continue;
            const BigInt c = v[i];
            const std::size_t shift = i - phi_;
            for (std::size_t j = 0; j < phi_; ++j) {
                const std::int64_t pj = phi_poly_[j];
                if (pj == 1)
                    v[shift + j] -= c;
                else if (pj == -1)
                    v[shift + j] += c;
                else if (pj != 0)
                    v[shift + j] -= c * pj;
            }
            v[i] = 0;
        }
        v.resize(phi_);
        return CycloInt{m_, std::move(v)};
    }

    /// Canonical form of sum_i c[i] zeta^i for an integer vector of any width.
    template <class Int>
    CycloInt from_exponent_counts(const std::vector<Int>& c) const {
        std::vector<BigInt> v(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) v[i] = BigInt(c[i]);
        return canonicalize(std::move(v));
    }

    CycloInt add(const CycloInt& a, const CycloInt& b) const {
        check(a);
        check(b);
        CycloInt r = a;
        for (std::size_t i = 0; i < phi_; ++i) r.coeffs[i] += b.coeffs[i];
        return r;
    }
    CycloInt sub(const CycloInt& a, const CycloInt& b) const {
        check(a);
        check(b);
        CycloInt r = a;
        for (std::size_t i = 0; i < phi_; ++i) r.coeffs[i] -= b.coeffs[i];
        return r;
    }
    CycloInt neg(const CycloInt& a) const {
        check(a);
        CycloInt r = a;
        for (auto& c : r.coeffs) c = -c;
        return r;
    }
    CycloInt scale(const CycloInt& a, const BigInt& s) const {
        check(a);
        CycloInt r = a;
        for (auto& c : r.coeffs) c *= s;
        return r;
    }

    /// cy_mul: product in canonical form.
    CycloInt mul(const CycloInt& a, const CycloInt& b) const {
        check(a);
        check(b);
        std::vector<BigInt> v(2 * phi_ - 1);
        for (std::size_t i = 0; i < phi_; ++i) {
            if (a.coeffs[i] == 0) continue;
            for (std::size_t j = 0; j < phi_; ++j) {
                if (b.coeffs[j] == 0) continue;
                v[i + j] += a.coeffs[i] * b.coeffs[j];
            }
        }
        return canonicalize(std::move(v));
    }

    bool is_zero(const CycloInt& a) const {
        for (auto& c : a.coeffs)
            if (c != 0) return false;
        return true;
    }
    bool is_rational(const CycloInt& a) const {
        for (std::size_t i = 1; i < a.coeffs.size(); ++i)
            if (a.coeffs[i] != 0) return false;
        return true;
    }

    /// Galois automorphism zeta_m -> zeta_m^u, gcd(u, m) = 1.
    CycloInt galois(const CycloInt& a, std::uint64_t u) const {
        check(a);
        if (std::gcd(u % m_, m_) != 1) throw DomainError("galois: u must be coprime to the conductor");
        std::vector<BigInt> v(m_);
        for (std::size_t i = 0; i < phi_; ++i) v[mul_mod(i, u % m_, m_)] += a.coeffs[i];
        return canonicalize(std::move(v));
    }

    /// cy_embed: evaluation at zeta_m -> exp(2 pi i u / m).
    std::complex<double> embed(const CycloInt& a, std::uint64_t u) const {
        check(a);
        if (std::gcd(u % m_, m_) != 1) throw DomainError("cy_embed: u must be coprime to the conductor");
        std::complex<double> s = 0;
        for (std::size_t i = 0; i < phi_; ++i) {
            if (a.coeffs[i] == 0) continue;
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(mul_mod(i, u % m_, m_)) / static_cast<double>(m_);
            s += a.coeffs[i].convert_to<double>() * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return s;
    }

    /// Image of x in Z[zeta_m] for x in Z[zeta_d], d | m.
    CycloInt lift(const CycloInt& x) const {
        if (x.m == m_) return x;
        if (x.m == 0 || m_ % x.m != 0) throw DomainError("lift: conductor mismatch");
        std::vector<BigInt> v(m_);
        const std::uint64_t step = m_ / x.m;
        for (std::size_t i = 0; i < x.coeffs.size(); ++i) v[i * step] += x.coeffs[i];
        return canonicalize(std::move(v));
    }

    void check(const CycloInt& a) const {
        if (a.m != m_ || a.coeffs.size() != phi_)
            throw DomainError("cyclotomic: element of Z[zeta_" + std::to_string(a.m) + "] used in Z[zeta_" +
                              std::to_string(m_) + "]");
    }

private:
    std::uint64_t m_;
    std::uint64_t phi_;
    std::vector<std::int64_t> phi_poly_;
};

/// Quadratic character of F_q^x evaluated on g^j.
inline int quadratic_character_of_dlog(std::uint64_t j) { return (j % 2 == 0) ? 1 : -1; }

/// chi_2(-1) for F_q: +1 iff q = 1 mod 4.
inline int chi2_minus_one(std::uint64_t q) { return (q % 4 == 1) ? 1 : -1; }

/// G_q = sum_{x != 0} chi_2(x) zeta_p^{tr x}, in a ring whose conductor is a multiple of p.
inline CycloInt gauss_sum(const CycloRing& ring, const FieldCtx& ctx) {
    const std::uint64_t p = ctx.p();
    if (ring.m() % p != 0) throw DomainError("gauss_sum: ring conductor is not a multiple of the characteristic");
    const std::uint64_t step = ring.m() / p;
    std::vector<std::int64_t> counts(ring.m(), 0);
    for (std::uint64_t j = 0; j + 1 < ctx.q(); ++j)
        counts[ctx.trace(ctx.exp(static_cast<std::int64_t>(j))) * step] += quadratic_character_of_dlog(j);
    return ring.from_exponent_counts(counts);
}

struct SplitData {
    std::uint64_t f;  ///< residue degree
    std::uint64_t g;  ///< number of primes above l
};

/// Splitting of the prime l in Q(zeta_m).
inline SplitData split_prime(std::uint64_t m, std::uint64_t ell) {
    if (!is_prime(ell)) throw DomainError("split_prime: l must be prime");
    if (m % ell == 0) throw DomainError("split_prime: l divides the conductor");
    const std::uint64_t f = multiplicative_order(ell % m, m);
    return {f, euler_phi(m) / f};
}

/// A prime ideal above l in Z[zeta_m] together with its residue field.
class ReductionCtx {
public:
    static constexpr std::uint64_t kMaxTabledResidueField = std::uint64_t{1} << 22;

    /// make_reduction: selects the factor of Phi_m mod l whose coefficient
    /// tuple after x -> -x (kept monic) is lexicographically least, constant
    /// term first; for f = 1 this is the least root of unity of order m.
    static ReductionCtx make(const CycloRing& ring, std::uint64_t ell, std::uint64_t seed = 0) {
        const SplitData sd = split_prime(ring.m(), ell);
        Poly phi;
        for (auto c : ring.cyclotomic_poly()) phi.push_back(mod_floor(c, ell));
        poly::trim(phi);
        std::vector<Poly> factors;
        if (sd.g == 1)
            factors.push_back(phi);
        else
            factors = poly::equal_degree_factor(phi, static_cast<int>(sd.f), ell, seed);
        if (factors.size() != sd.g) throw std::logic_error("make_reduction: unexpected number of factors");
        auto key = [&](const Poly& fac) {
            std::vector<std::uint64_t> k(fac.size());
            const int f = poly::degree(fac);
            for (int i = 0; i <= f; ++i) k[i] = ((f - i) % 2 == 0) ? fac[i] : sub_mod(0, fac[i], ell);
            return k;
        };
        const Poly* best = &factors.front();
        for (const auto& fac : factors)
            if (key(fac) < key(*best)) best = &fac;
        return ReductionCtx(ring, ell, sd.f, *best, seed);
    }

    std::uint64_t ell() const { return ell_; }
    std::uint64_t m() const { return m_; }
    std::uint64_t f() const { return f_; }
    const Poly& factor() const { return factor_; }
    const GaloisField& residue_field() const { return field_; }
    /// Image of zeta_m.
    const FqElem& root() const { return root_pows_[1 % m_]; }
    /// Image of zeta_d^e for d | m.
    const FqElem& root_of_unity(std::uint64_t d, std::int64_t e) const {
        if (m_ % d != 0) throw DomainError("root_of_unity: order does not divide the conductor");
        return root_pows_[mod_floor(e, d) * (m_ / d)];
    }
    /// Tabled residue field (same modulus), when small enough.
    const FieldCtx* tabled() const { return tabled_.get(); }

    /// Ring homomorphism Z[zeta_d] -> F_lambda for d | m.
    FqElem reduce(const CycloInt& x) const {
        if (x.m == 0 || m_ % x.m != 0)
            throw DomainError("reduce: element of Z[zeta_" + std::to_string(x.m) + "] cannot be reduced modulo a prime of Z[zeta_" +
                              std::to_string(m_) + "]");
        const std::uint64_t step = m_ / x.m;
        std::vector<std::uint64_t> acc(f_, 0);
        for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
            if (x.coeffs[i] == 0) continue;
            const std::uint64_t c = mod_big(x.coeffs[i], ell_);
            if (c == 0) continue;
            const auto& rp = root_pows_[(i * step) % m_].coeffs;
            for (std::size_t j = 0; j < f_; ++j) acc[j] = add_mod(acc[j], mul_mod(c, rp[j], ell_), ell_);
        }
        return FqElem{std::move(acc)};
    }

    FqElem reduce_int(const BigInt& c) const { return field_.from_int(static_cast<std::int64_t>(mod_big(c, ell_))); }

private:
    ReductionCtx(const CycloRing& ring, std::uint64_t ell, std::uint64_t f, Poly factor, std::uint64_t seed)
        : ell_(ell), m_(ring.m()), f_(f), factor_(std::move(factor)),
          field_(ell, static_cast<unsigned>(f), factor_, /*allow_even=*/true) {
        const FqElem t = field_.gen_t();
        root_pows_.reserve(m_);
        FqElem x = field_.one();
        for (std::uint64_t e = 0; e < m_; ++e) {
            root_pows_.push_back(x);
            x = field_.mul(x, t);
        }
        if (x != field_.one()) throw std::logic_error("make_reduction: root is not an m-th root of unity");
        for (std::uint64_t r : prime_divisors(m_))
            if (root_pows_[m_ / r] == field_.one()) throw std::logic_error("make_reduction: root order is not m");
        if (boost::multiprecision::pow(BigInt(ell), static_cast<unsigned>(f)) <= kMaxTabledResidueField)
            tabled_ = std::make_shared<const FieldCtx>(field_);
        spot_check(ring, seed);
    }

    void spot_check(const CycloRing& ring, std::uint64_t seed) const {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<int> dist(-5, 5);
        for (int trial = 0; trial < 4; ++trial) {
            CycloInt a = ring.zero(), b = ring.zero();
            for (auto& c : a.coeffs) c = dist(rng);
            for (auto& c : b.coeffs) c = dist(rng);
            if (reduce(ring.mul(a, b)) != field_.mul(reduce(a), reduce(b)) ||
                reduce(ring.add(a, b)) != field_.add(reduce(a), reduce(b)))
                throw std::logic_error("make_reduction: reduction map is not a ring homomorphism");
        }
    }

    std::uint64_t ell_;
    std::uint64_t m_;
    std::uint64_t f_;
    Poly factor_;
    GaloisField field_;
    std::vector<FqElem> root_pows_;
    std::shared_ptr<const FieldCtx> tabled_;
};

}  // namespace hkl
