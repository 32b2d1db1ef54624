#pragma once

// Hyper-Kloosterman sums
//
//   S_n(a) = sum_{x_1 ... x_n = a} zeta_p^{tr(x_1 + ... + x_n)}      (exact, in Z[zeta_p])
//   Kl_n(a) = (-1)^{n-1} S_n(a) / q^{(n-1)/2}                        (normalized)
//
// Tables are indexed by the discrete logarithm j of a = g^j. In these
// coordinates S_n is the n-fold multiplicative convolution of x -> zeta^{tr x}
// on F_q^x = Z/(q-1), which the exact path evaluates term by term and the
// floating path evaluates with a length-(q-1) DFT.

#include "hkl/cyclotomic.hpp"
#include "hkl/fft.hpp"
#include "hkl/finite_field.hpp"
#include "hkl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

namespace hkl {

/// Exact table of S_n(g^j) for j in [0, q-1), each in Z[zeta_p].
struct KlTable {
    std::shared_ptr<const FieldCtx> ctx;
    unsigned n = 0;
    CycloRing ring{3};
    std::vector<CycloInt> values;

    std::uint64_t p() const { return ctx->p(); }
    std::uint64_t q() const { return ctx->q(); }
    const CycloInt& at_dlog(std::uint64_t j) const { return values.at(j); }
};

/// Largest q^{n-1} accepted by the brute-force evaluator.
inline constexpr std::uint64_t kDirectScaleLimit = 10'000'000;
/// Largest (q-1) * p accepted by the exact convolution (memory bound).
inline constexpr std::uint64_t kExactTableLimit = 50'000'000;

/// Brute-force S_n(a) by enumerating (x_1, ..., x_{n-1}). Uses polynomial
/// arithmetic and the Frobenius-sum trace, not the context's tables.
inline CycloInt kl_raw_direct(const FieldCtx& ctx, unsigned n, const FqElem& a) {
    const GaloisField& F = ctx.field();
    if (n < 1) throw DomainError("kl_raw_direct: rank must be >= 1");
    if (F.is_zero(a)) throw DomainError("kl_raw_direct: a must be nonzero");
    const std::uint64_t q = ctx.q(), p = ctx.p();
    const double scale = std::pow(static_cast<double>(q), static_cast<double>(n - 1));
    if (scale > static_cast<double>(kDirectScaleLimit))
        throw DomainError("kl_raw_direct: q^(n-1) exceeds the oracle scale limit");

    std::vector<FqElem> units;
    for (std::uint64_t c = 1; c < q; ++c) units.push_back(F.decode(c));

    std::vector<std::int64_t> counts(p, 0);
    std::vector<std::size_t> idx(n - 1, 0);
    for (;;) {
        FqElem prod = F.one(), sum = F.zero();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            prod = F.mul(prod, units[idx[i]]);
            sum = F.add(sum, units[idx[i]]);
        }
        const FqElem last = F.mul(a, F.inv(prod));
        sum = F.add(sum, last);
        counts[F.trace(sum)] += 1;
        std::size_t pos = 0;
        while (pos + 1 < n && ++idx[pos] == units.size()) idx[pos++] = 0;
        if (pos + 1 >= n) break;
    }
    return CycloRing(p).from_exponent_counts(counts);
}

inline CycloInt kl_raw_direct(const FieldCtx& ctx, unsigned n, FieldCtx::Code a) {
    return kl_raw_direct(ctx, n, ctx.decode(a));
}

namespace detail {

template <class Acc>
std::vector<CycloInt> convolve_exact(const FieldCtx& ctx, unsigned n, const CycloRing& ring, unsigned threads) {
    const std::uint64_t N = ctx.q() - 1, p = ctx.p();
    std::vector<std::uint64_t> tr(N);
    for (std::uint64_t j = 0; j < N; ++j) tr[j] = ctx.trace(ctx.exp(static_cast<std::int64_t>(j)));

    // cur[j * p + e] = coefficient of zeta^e in S_r(g^j), in Z[x]/(x^p - 1)
    std::vector<Acc> cur(N * p, Acc(0));
    for (std::uint64_t j = 0; j < N; ++j) cur[j * p + tr[j]] = 1;
    for (unsigned r = 2; r <= n; ++r) {
        std::vector<Acc> next(N * p, Acc(0));
        parallel_for(N, threads, [&](std::size_t j) {
            Acc* dst = &next[j * p];
            for (std::uint64_t i = 0; i < N; ++i) {
                const Acc* src = &cur[((j + N - i) % N) * p];
                const std::uint64_t t = tr[i];
                // dst[e + t mod p] += src[e]
                for (std::uint64_t e = 0; e + t < p; ++e) dst[e + t] += src[e];
                for (std::uint64_t e = p - t; e < p && t != 0; ++e) dst[e + t - p] += src[e];
            }
        });
        cur = std::move(next);
    }
    std::vector<CycloInt> out(N);
    parallel_for(N, threads, [&](std::size_t j) {
        std::vector<Acc> v(cur.begin() + static_cast<std::ptrdiff_t>(j * p),
                           cur.begin() + static_cast<std::ptrdiff_t>((j + 1) * p));
        out[j] = ring.from_exponent_counts(v);
    });
    return out;
}

}  // namespace detail

/// Exact table of S_n for all a by repeated multiplicative convolution.
inline KlTable kl_raw_all(std::shared_ptr<const FieldCtx> ctx, unsigned n, unsigned threads = 1) {
    if (n < 1) throw DomainError("kl_raw_all: rank must be >= 1");
    const std::uint64_t N = ctx->q() - 1, p = ctx->p();
    if (N * p > kExactTableLimit) throw DomainError("kl_raw_all: (q-1)*p exceeds the exact-table limit");
    KlTable t{ctx, n, CycloRing(p), {}};
    // each coefficient counts tuples, so it is bounded by (q-1)^(n-1)
    const double bound = std::pow(static_cast<double>(N), static_cast<double>(n - 1));
    if (bound < 4.0e18)
        t.values = detail::convolve_exact<std::int64_t>(*ctx, n, t.ring, threads);
    else
        t.values = detail::convolve_exact<BigInt>(*ctx, n, t.ring, threads);
    return t;
}

inline KlTable kl_raw_all(const FieldCtx& ctx, unsigned n, unsigned threads = 1) {
    return kl_raw_all(std::make_shared<const FieldCtx>(ctx), n, threads);
}

/// Sum of S_n(a) over all a; equals (-1)^n.
inline CycloInt kl_global_sum(const KlTable& t) {
    CycloInt s = t.ring.zero();
    for (const auto& v : t.values) s = t.ring.add(s, v);
    return s;
}

inline double normalization(std::uint64_t q, unsigned n) {
    return ((n % 2 == 1) ? 1.0 : -1.0) / std::pow(static_cast<double>(q), (static_cast<double>(n) - 1.0) / 2.0);
}

/// Normalized Kl_n(g^j) under zeta_p -> e(u/p), for all j, via the fast transform.
inline std::vector<std::complex<double>> kl_all_float(const FieldCtx& ctx, unsigned n, std::uint64_t u = 1) {
    const std::uint64_t p = ctx.p(), N = ctx.q() - 1;
    if (u % p == 0) throw DomainError("kl_all_float: embedding index must be coprime to p");
    if (n < 1) throw DomainError("kl_all_float: rank must be >= 1");
    std::vector<fft::cd> x(N);
    for (std::uint64_t j = 0; j < N; ++j) {
        const std::uint64_t e = mul_mod(ctx.trace(ctx.exp(static_cast<std::int64_t>(j))), u % p, p);
        x[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(p));
    }
    auto s = fft::cyclic_convolution_power(x, n);
    const double c = normalization(ctx.q(), n);
    for (auto& v : s) v *= c;
    return s;
}

/// Normalized values from an exact table under the embedding u.
inline std::vector<std::complex<double>> kl_embed_normalized(const KlTable& t, std::uint64_t u = 1) {
    const double c = normalization(t.q(), t.n);
    std::vector<std::complex<double>> out(t.values.size());
    for (std::size_t j = 0; j < t.values.size(); ++j) out[j] = t.ring.embed(t.values[j], u) * c;
    return out;
}

/// True iff zeta_p -> zeta_p^u maps S_n(a) to S_n(a u^n) for every a.
inline bool galois_twist_check(const KlTable& t, std::uint64_t u) {
    const std::uint64_t p = t.p(), N = t.q() - 1;
    if (u % p == 0) throw DomainError("galois_twist_check: u must be a unit mod p");
    const std::uint64_t shift = mul_mod(t.n, t.ctx->dlog(t.ctx->from_prime_field(u % p)), N);
    for (std::uint64_t j = 0; j < N; ++j) {
        if (t.ring.galois(t.values[j], u % p) != t.values[(j + shift) % N]) return false;
    }
    return true;
}

struct WeilResult {
    bool pass = false;
    double max_ratio = 0.0;        ///< max |Kl_n(a)| / n over a and embeddings
    std::uint64_t worst_dlog = 0;
    std::uint64_t worst_embedding = 1;
};

inline constexpr double kWeilSlack = 1e-9;

/// Weil bound over every a and every embedding zeta_p -> e(u/p), u in [1, p).
inline WeilResult weil_bound_check(const KlTable& t, unsigned threads = 1) {
    const std::uint64_t p = t.p();
    const double c = std::abs(normalization(t.q(), t.n));
    std::vector<double> best(t.values.size(), 0.0);
    std::vector<std::uint64_t> best_u(t.values.size(), 1);
    parallel_for(t.values.size(), threads, [&](std::size_t j) {
        // all embeddings of one value at once: X_u = sum_i c_i e(u i / p)
        std::vector<fft::cd> x(p, 0.0);
        for (std::size_t i = 0; i < t.values[j].coeffs.size(); ++i) x[i] = t.values[j].coeffs[i].convert_to<double>();
        auto spec = fft::dft(x, +1);
        for (std::uint64_t u = 1; u < p; ++u) {
            double r = std::abs(spec[u]) * c / t.n;
            if (r > best[j]) {
                best[j] = r;
                best_u[j] = u;
            }
        }
    });
    WeilResult res;
    for (std::size_t j = 0; j < best.size(); ++j) {
        if (best[j] > res.max_ratio) {
            res.max_ratio = best[j];
            res.worst_dlog = j;
            res.worst_embedding = best_u[j];
        }
    }
    res.pass = res.max_ratio <= 1.0 + kWeilSlack;
    return res;
}

/// Weil bound for (ctx, n): exact table when it fits, otherwise the floating
/// path once per embedding.
inline WeilResult weil_bound_check(std::shared_ptr<const FieldCtx> ctx, unsigned n, unsigned threads = 1) {
    if ((ctx->q() - 1) * ctx->p() <= kExactTableLimit / 8) return weil_bound_check(kl_raw_all(ctx, n, threads), threads);
    WeilResult res;
    std::vector<WeilResult> per_u(ctx->p());
    parallel_for(ctx->p() - 1, threads, [&](std::size_t i) {
        const std::uint64_t u = i + 1;
        auto vals = kl_all_float(*ctx, n, u);
        for (std::size_t j = 0; j < vals.size(); ++j) {
            double r = std::abs(vals[j]) / n;
            if (r > per_u[u].max_ratio) per_u[u] = {false, r, j, u};
        }
    });
    for (const auto& w : per_u)
        if (w.max_ratio > res.max_ratio) res = w;
    res.pass = res.max_ratio <= 1.0 + kWeilSlack;
    return res;
}

/// Square root s of q in the residue field: reduce(G_q) when q = 1 mod 4,
/// reduce(G_q) / reduce(zeta_4) when q = 3 mod 4 (requires 4p | m).
/// `flip` selects -s.
inline FqElem sqrt_q_residue(const FieldCtx& ctx, const ReductionCtx& rc, bool flip = false) {
    const std::uint64_t p = ctx.p(), q = ctx.q();
    if (rc.m() % p != 0) throw DomainError("sqrt_q_residue: residue ring does not contain zeta_p");
    const GaloisField& F = rc.residue_field();
    const FqElem g = rc.reduce(gauss_sum(CycloRing(p), ctx));
    FqElem s;
    if (q % 4 == 1) {
        s = g;
    } else {
        if (rc.m() % 4 != 0)
            throw DomainError("sqrt_q_residue: q = 3 mod 4 needs a prime of Z[zeta_4p] (zeta_4 is required)");
        s = F.mul(g, F.inv(rc.root_of_unity(4, 1)));
    }
    if (F.mul(s, s) != rc.reduce_int(q)) throw std::logic_error("sqrt_q_residue: s^2 != q");
    return flip ? F.neg(s) : s;
}

/// (-1)^{n-1} reduce(S_n(a)) s^{-(n-1)} for every a. For odd n the factor
/// s^{n-1} = q^{(n-1)/2} is rational and no square root is needed.
inline std::vector<FqElem> kl_reduce_all(const KlTable& t, const ReductionCtx& rc, bool flip_sign = false) {
    const std::uint64_t p = t.p(), q = t.q();
    if (rc.m() != p && rc.m() != 4 * p)
        throw DomainError("kl_reduce_all: reduction must be for Z[zeta_p] or Z[zeta_4p]");
    const GaloisField& F = rc.residue_field();
    FqElem s_pow;
    if (t.n % 2 == 1) {
        s_pow = F.pow(rc.reduce_int(q), (t.n - 1) / 2);
    } else {
        s_pow = F.pow(sqrt_q_residue(*t.ctx, rc, flip_sign), t.n - 1);
    }
    FqElem factor = F.inv(s_pow);
    if (t.n % 2 == 0) factor = F.neg(factor);
    std::vector<FqElem> out;
    out.reserve(t.values.size());
    for (const auto& v : t.values) out.push_back(F.mul(rc.reduce(v), factor));
    return out;
}

/// Degree over F_l of the subfield generated by `values`.
inline std::uint64_t trace_field_degree(const std::vector<FqElem>& values, const ReductionCtx& rc) {
    if (values.empty()) throw DomainError("trace_field: no values");
    const GaloisField& F = rc.residue_field();
    for (std::uint64_t d : divisors(rc.f())) {
        bool fixed = true;
        for (const auto& v : values) {
            if (F.frobenius(v, static_cast<unsigned>(d)) != v) {
                fixed = false;
                break;
            }
        }
        if (fixed) return d;
    }
    return rc.f();
}

// --- vertical Sato-Tate -----------------------------------------------------

/// CDF of the semicircle law sqrt(4 - x^2) / (2 pi) on [-2, 2].
inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + (x * std::sqrt(4.0 - x * x)) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

/// Kolmogorov-Smirnov distance between the empirical law of `xs` and `cdf`.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

struct SatoTateReport {
    std::uint64_t p = 0;
    std::vector<double> moments;  ///< moments[j-1] = mean of Kl_2(a)^j, j = 1..2K
    double ks = 0.0;
};

inline SatoTateReport sato_tate_for_values(std::uint64_t p, const std::vector<double>& xs, unsigned K) {
    SatoTateReport r;
    r.p = p;
    r.moments.assign(2 * K, 0.0);
    for (double x : xs) {
        double pw = 1.0;
        for (unsigned j = 0; j < 2 * K; ++j) {
            pw *= x;
            r.moments[j] += pw;
        }
    }
    for (auto& m : r.moments) m /= static_cast<double>(xs.size());
    r.ks = ks_distance(xs, semicircle_cdf);
    return r;
}

/// Moments and KS distance of {Kl_2(a) : a in F_p^x} for each prime p.
inline std::vector<SatoTateReport> sato_tate_stats(const std::vector<std::uint64_t>& primes, unsigned K,
                                                   unsigned threads = 1) {
    std::vector<SatoTateReport> out(primes.size());
    parallel_for(primes.size(), threads, [&](std::size_t i) {
        const std::uint64_t p = primes[i];
        if (p > 1'000'000) throw DomainError("sato_tate_stats: primes must be <= 10^6");
        const FieldCtx ctx = FieldCtx::make(p, 1);
        auto vals = kl_all_float(ctx, 2, 1);
        std::vector<double> xs(vals.size());
        for (std::size_t j = 0; j < vals.size(); ++j) xs[j] = vals[j].real();
        out[i] = sato_tate_for_values(p, xs, K);
    });
    return out;
}

}  // namespace hkl
