#pragma once

// Finite fields F_q = F_p[t]/(modulus).
//
// GaloisField is the general arithmetic layer and works for any p^k (used for
// residue fields of cyclotomic primes, which can be large). FieldCtx adds a
// fixed generator plus exp/log/trace tables so that elements can be handled
// as integer codes sum c_i p^i; it is limited to q <= kMaxTabledOrder.

#include "hkl/numeric.hpp"
#include "hkl/poly.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hkl {

using poly::Poly;

/// Element of F_{p^k}: exactly k coefficients in [0, p), constant first.
struct FqElem {
    std::vector<std::uint64_t> coeffs;

    friend bool operator==(const FqElem&, const FqElem&) = default;
    friend auto operator<=>(const FqElem&, const FqElem&) = default;
};

class GaloisField {
public:
    /// Validates p prime, k >= 1 and that `modulus` is monic irreducible of degree k.
    GaloisField(std::uint64_t p, unsigned k, Poly modulus, bool allow_even = false)
        : p_(p), k_(k), modulus_(std::move(modulus)) {
        if (!is_prime(p)) throw DomainError("GaloisField: p = " + std::to_string(p) + " is not prime");
        if (p == 2 && !allow_even) throw DomainError("GaloisField: characteristic 2 is not supported here");
        if (k == 0) throw DomainError("GaloisField: degree k must be >= 1");
        modulus_ = poly::reduce_coeffs(modulus_, p);
        if (poly::degree(modulus_) != static_cast<int>(k) || modulus_.back() != 1)
            throw DomainError("GaloisField: modulus must be monic of degree " + std::to_string(k));
        if (!poly::is_irreducible(modulus_, p)) throw DomainError("GaloisField: modulus is reducible over F_p");
    }

    /// Least monic irreducible of degree k under the encoding sum c_i p^i.
    static Poly canonical_modulus(std::uint64_t p, unsigned k) {
        if (k == 1) return Poly{0, 1};
        Poly cand(k + 1, 0);
        cand[k] = 1;
        for (;;) {
            if (poly::is_irreducible(cand, p)) return cand;
            // increment the low k digits in base p
            unsigned i = 0;
            while (i < k && ++cand[i] == p) cand[i++] = 0;
            if (i == k) throw DomainError("canonical_modulus: exhausted search");
        }
    }

    static GaloisField make(std::uint64_t p, unsigned k, std::optional<Poly> modulus = std::nullopt,
                            bool allow_even = false) {
        if (!is_prime(p)) throw DomainError("ff_make: p = " + std::to_string(p) + " is not prime");
        if (p == 2 && !allow_even) throw DomainError("ff_make: p must be odd");
        if (k == 0) throw DomainError("ff_make: k must be >= 1");
        return GaloisField(p, k, modulus ? *modulus : canonical_modulus(p, k), allow_even);
    }

    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }
    const Poly& modulus() const { return modulus_; }
    BigInt order() const { return boost::multiprecision::pow(BigInt(p_), k_); }

    FqElem zero() const { return FqElem{std::vector<std::uint64_t>(k_, 0)}; }
    FqElem one() const { return from_int(1); }
    FqElem from_int(std::int64_t c) const {
        FqElem r = zero();
        r.coeffs[0] = mod_floor(c, p_);
        return r;
    }
    FqElem from_poly(const Poly& a) const {
        Poly r = poly::rem(poly::reduce_coeffs(a, p_), modulus_, p_);
        FqElem out = zero();
        for (std::size_t i = 0; i < r.size(); ++i) out.coeffs[i] = r[i];
        return out;
    }
    Poly to_poly(const FqElem& x) const {
        Poly r = x.coeffs;
        poly::trim(r);
        return r;
    }
    /// The class of t, i.e. the root of the modulus.
    FqElem gen_t() const { return from_poly(Poly{0, 1}); }

    bool is_zero(const FqElem& x) const {
        for (auto c : x.coeffs)
            if (c) return false;
        return true;
    }

    FqElem add(const FqElem& a, const FqElem& b) const {
        FqElem r = a;
        for (unsigned i = 0; i < k_; ++i) r.coeffs[i] = add_mod(a.coeffs[i], b.coeffs[i], p_);
        return r;
    }
    FqElem sub(const FqElem& a, const FqElem& b) const {
        FqElem r = a;
        for (unsigned i = 0; i < k_; ++i) r.coeffs[i] = sub_mod(a.coeffs[i], b.coeffs[i], p_);
        return r;
    }
    FqElem neg(const FqElem& a) const { return sub(zero(), a); }
    FqElem scale(const FqElem& a, std::uint64_t c) const {
        FqElem r = a;
        for (auto& x : r.coeffs) x = mul_mod(x, c % p_, p_);
        return r;
    }
    FqElem mul(const FqElem& a, const FqElem& b) const {
        if (k_ == 1) return FqElem{{mul_mod(a.coeffs[0], b.coeffs[0], p_)}};
        return from_poly(poly::mul(to_poly(a), to_poly(b), p_));
    }
    FqElem pow(FqElem base, const BigInt& e) const {
        FqElem r = one();
        if (e == 0) return r;
        const std::size_t bits = boost::multiprecision::msb(e) + 1;
        for (std::size_t i = bits; i-- > 0;) {
            r = mul(r, r);
            if (boost::multiprecision::bit_test(e, i)) r = mul(r, base);
        }
        return r;
    }
    FqElem pow(const FqElem& base, std::uint64_t e) const { return pow(base, BigInt(e)); }

    /// Inverse by the extended Euclidean algorithm on polynomials.
    FqElem inv(const FqElem& a) const {
        if (is_zero(a)) throw DomainError("GaloisField::inv: zero has no inverse");
        if (k_ == 1) return FqElem{{inv_mod(a.coeffs[0], p_)}};
        Poly r0 = modulus_, r1 = to_poly(a);
        Poly s0{}, s1{1};
        while (!r1.empty()) {
            auto [quot, rr] = poly::divmod(r0, r1, p_);
            Poly s2 = poly::sub(s0, poly::mul(quot, s1, p_), p_);
            r0 = std::move(r1);
            r1 = std::move(rr);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant
        return from_poly(poly::scale(s0, inv_mod(r0[0], p_), p_));
    }

    /// x -> x^(p^times).
    FqElem frobenius(FqElem x, unsigned times = 1) const {
        for (unsigned i = 0; i < times; ++i) x = pow(x, p_);
        return x;
    }

    /// Absolute trace sum_{i<k} x^(p^i), returned as an element of F_p.
    std::uint64_t trace(const FqElem& x) const {
        FqElem acc = x, cur = x;
        for (unsigned i = 1; i < k_; ++i) {
            cur = frobenius(cur);
            acc = add(acc, cur);
        }
        for (unsigned i = 1; i < k_; ++i)
            if (acc.coeffs[i] != 0) throw std::logic_error("GaloisField::trace: result not in prime field");
        return acc.coeffs[0];
    }

    /// Encoding sum c_i p^i; caller ensures q fits in 64 bits.
    std::uint64_t encode(const FqElem& x) const { return poly::encode(x.coeffs, k_, p_); }
    FqElem decode(std::uint64_t code) const {
        FqElem r = zero();
        for (unsigned i = 0; i < k_; ++i) {
            r.coeffs[i] = code % p_;
            code /= p_;
        }
        return r;
    }

    bool same_field(const GaloisField& o) const { return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_; }

private:
    std::uint64_t p_;
    unsigned k_;
    Poly modulus_;
};

/// Finite field with generator and full exp / dlog / trace tables.
class FieldCtx {
public:
    using Code = std::uint32_t;
    static constexpr std::uint64_t kMaxTabledOrder = std::uint64_t{1} << 24;

    /// ff_make: canonical modulus and least generator when not supplied.
    static FieldCtx make(std::uint64_t p, unsigned k, std::optional<Poly> modulus = std::nullopt,
                         bool allow_even = false) {
        return FieldCtx(GaloisField::make(p, k, std::move(modulus), allow_even));
    }

    explicit FieldCtx(GaloisField field) : field_(std::move(field)) {
        init_sizes();
        generator_ = find_generator();
        build_tables(nullptr);
    }

    /// Rebuilds a context from a persisted dlog table. The table is verified
    /// against the generator before being accepted.
    FieldCtx(GaloisField field, Code generator, std::vector<Code> dlog) : field_(std::move(field)) {
        init_sizes();
        generator_ = generator;
        if (dlog.size() != q_) throw DomainError("FieldCtx: dlog table has wrong size");
        build_tables(&dlog);
    }

    const GaloisField& field() const { return field_; }
    std::uint64_t p() const { return field_.p(); }
    unsigned k() const { return field_.k(); }
    std::uint64_t q() const { return q_; }
    const Poly& modulus() const { return field_.modulus(); }
    Code generator_code() const { return generator_; }
    FqElem generator() const { return decode(generator_); }

    Code encode(const FqElem& x) const { return static_cast<Code>(field_.encode(x)); }
    FqElem decode(Code c) const { return field_.decode(c); }

    // --- arithmetic on codes -------------------------------------------------
    Code zero() const { return 0; }
    Code one() const { return 1; }
    Code from_int(std::int64_t c) const { return static_cast<Code>(mod_floor(c, p())); }
    bool is_zero(Code a) const { return a == 0; }

    Code add(Code a, Code b) const {
        if (k() == 1) return static_cast<Code>(add_mod(a, b, p()));
        std::uint64_t r = 0;
        for (unsigned i = k(); i-- > 0;) r = r * p() + add_mod(digit(a, i), digit(b, i), p());
        return static_cast<Code>(r);
    }
    Code neg(Code a) const {
        if (k() == 1) return static_cast<Code>(sub_mod(0, a, p()));
        std::uint64_t r = 0;
        for (unsigned i = k(); i-- > 0;) r = r * p() + sub_mod(0, digit(a, i), p());
        return static_cast<Code>(r);
    }
    Code sub(Code a, Code b) const { return add(a, neg(b)); }
    Code mul(Code a, Code b) const {
        if (a == 0 || b == 0) return 0;
        std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }
    Code inv(Code a) const {
        if (a == 0) throw DomainError("FieldCtx::inv: zero has no inverse");
        return exp_[log_[a] == 0 ? 0 : (q_ - 1 - log_[a])];
    }
    Code pow(Code a, std::int64_t e) const {
        if (a == 0) {
            if (e < 0) throw DomainError("FieldCtx::pow: negative power of zero");
            return e == 0 ? 1 : 0;
        }
        std::uint64_t j = mod_floor(static_cast<std::int64_t>(mul_mod(log_[a], mod_floor(e, q_ - 1), q_ - 1)), q_ - 1);
        return exp_[j];
    }
    /// Absolute trace of a code, from the table.
    std::uint64_t trace(Code a) const { return trace_[a]; }
    /// g^j for any integer j.
    Code exp(std::int64_t j) const { return exp_[mod_floor(j, q_ - 1)]; }
    std::uint64_t dlog(Code a) const {
        if (a == 0) throw DomainError("ff_dlog: zero has no discrete logarithm");
        return log_[a];
    }
    /// Code of the integer u viewed in the prime field.
    Code from_prime_field(std::uint64_t u) const { return static_cast<Code>(u % p()); }
    /// Exact multiplicative order of a nonzero element.
    std::uint64_t order_of(Code a) const { return (q_ - 1) / std::gcd(q_ - 1, std::uint64_t{dlog(a)}); }

    // --- FqElem API ----------------------------------------------------------
    std::uint64_t ff_trace(const FqElem& x) const { return trace(encode(x)); }
    std::uint64_t ff_dlog(const FqElem& x) const { return dlog(encode(x)); }

    /// dlog table indexed by code; entry 0 is unused and stored as 0.
    const std::vector<Code>& dlog_table() const { return log_; }
    const std::vector<Code>& exp_table() const { return exp_; }

    /// Least element (by code) of exact multiplicative order d; requires d | q-1.
    Code least_element_of_order(std::uint64_t d) const {
        if ((q_ - 1) % d != 0) throw DomainError("least_element_of_order: order does not divide q-1");
        for (Code c = 1; c < q_; ++c)
            if (order_of(c) == d) return c;
        throw std::logic_error("least_element_of_order: not found");
    }

    /// Elements x with x^(p^d) = x, i.e. the subfield F_{p^d}; requires d | k.
    std::vector<Code> subfield(unsigned d) const {
        if (d == 0 || k() % d != 0) throw DomainError("subfield: degree must divide k");
        std::uint64_t sub_q = 1;
        for (unsigned i = 0; i < d; ++i) sub_q *= p();
        std::vector<Code> out{0};
        // the unique subgroup of order sub_q - 1 in the cyclic group
        const std::uint64_t step = (q_ - 1) / (sub_q - 1);
        for (std::uint64_t j = 0; j < sub_q - 1; ++j) out.push_back(exp_[j * step]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void init_sizes() {
        BigInt q = field_.order();
        if (q > kMaxTabledOrder) throw DomainError("FieldCtx: field too large for tables (q = " + q.str() + ")");
        q_ = q.convert_to<std::uint64_t>();
        pow_p_.assign(k() + 1, 1);
        for (unsigned i = 1; i <= k(); ++i) pow_p_[i] = pow_p_[i - 1] * p();
    }

    std::uint64_t digit(Code a, unsigned i) const { return (a / pow_p_[i]) % p(); }

    Code find_generator() const {
        if (q_ == 2) return 1;
        const auto primes = prime_divisors(q_ - 1);
        const FqElem one = field_.one();
        for (std::uint64_t c = 1; c < q_; ++c) {
            FqElem x = field_.decode(c);
            bool ok = true;
            for (std::uint64_t r : primes) {
                if (field_.pow(x, (q_ - 1) / r) == one) {
                    ok = false;
                    break;
                }
            }
            if (ok) return static_cast<Code>(c);
        }
        throw std::logic_error("FieldCtx: no generator found");
    }

    void build_tables(const std::vector<Code>* given_log) {
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        if (given_log) {
            std::vector<bool> seen(q_ - 1, false);
            for (Code c = 1; c < q_; ++c) {
                Code j = (*given_log)[c];
                if (j >= q_ - 1 || seen[j]) throw DomainError("FieldCtx: persisted dlog table is not a bijection");
                seen[j] = true;
                exp_[j] = c;
            }
            log_ = *given_log;
            log_[0] = 0;
            // spot check the table against the generator
            const FqElem g = field_.decode(generator_);
            FqElem x = field_.one();
            for (std::uint64_t j = 0; j < std::min<std::uint64_t>(q_ - 1, 64); ++j) {
                if (exp_[j] != encode(x)) throw DomainError("FieldCtx: persisted dlog table does not match generator");
                x = field_.mul(x, g);
            }
        } else if (k() == 1) {
            std::uint64_t x = 1;
            for (std::uint64_t j = 0; j + 1 < q_; ++j) {
                exp_[j] = static_cast<Code>(x);
                log_[x] = static_cast<Code>(j);
                x = mul_mod(x, generator_, p());
            }
        } else {
            const FqElem g = field_.decode(generator_);
            FqElem x = field_.one();
            for (std::uint64_t j = 0; j + 1 < q_; ++j) {
                Code c = encode(x);
                exp_[j] = c;
                log_[c] = static_cast<Code>(j);
                x = field_.mul(x, g);
            }
        }
        // trace is F_p-linear: tr(sum c_i t^i) = sum c_i tr(t^i)
        std::vector<std::uint64_t> basis_trace(k());
        for (unsigned i = 0; i < k(); ++i) {
            Poly ti(i + 1, 0);
            ti[i] = 1;
            basis_trace[i] = field_.trace(field_.from_poly(ti));
        }
        trace_.assign(q_, 0);
        for (std::uint64_t c = 0; c < q_; ++c) {
            std::uint64_t t = 0, rest = c;
            for (unsigned i = 0; i < k(); ++i) {
                t = add_mod(t, mul_mod(rest % p(), basis_trace[i], p()), p());
                rest /= p();
            }
            trace_[c] = static_cast<Code>(t);
        }
    }

    GaloisField field_;
    std::uint64_t q_ = 0;
    Code generator_ = 0;
    std::vector<std::uint64_t> pow_p_;
    std::vector<Code> exp_;
    std::vector<Code> log_;
    std::vector<Code> trace_;
};

}  // namespace hkl
