#include "hkl/io.hpp"
#include "hkl/kloosterman.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace hkl;
using nlohmann::json;

namespace {

std::complex<double> e_p(std::uint64_t t, std::uint64_t p, std::uint64_t u) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>((t * u) % p) / static_cast<double>(p);
    return {std::cos(a), std::sin(a)};
}

// Sum over x_1 ... x_n = a of e(u tr(x_1 + ... + x_n) / p), by polynomial
// arithmetic in GaloisField only.
std::complex<double> kl_oracle(const GaloisField& F, std::uint64_t q, unsigned n, const FqElem& a, std::uint64_t u) {
    const std::uint64_t p = F.p();
    std::vector<std::uint64_t> idx(n - 1, 1);
    std::complex<double> s = 0;
    for (;;) {
        FqElem prod = F.one(), sum = F.zero();
        for (auto c : idx) {
            const FqElem x = F.decode(c);
            prod = F.mul(prod, x);
            sum = F.add(sum, x);
        }
        sum = F.add(sum, F.mul(a, F.inv(prod)));
        s += e_p(F.trace(sum), p, u);
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == q) idx[i++] = 1;
        if (i == idx.size()) break;
    }
    return s;
}

std::shared_ptr<const FieldCtx> field(std::uint64_t p, unsigned k) {
    return std::make_shared<const FieldCtx>(FieldCtx::make(p, k));
}

std::vector<BigInt> big(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

json load_golden(const std::string& name) {
    return json::parse(io::read_file(std::filesystem::path(HKL_GOLDEN_DIR) / name));
}

}  // namespace

TEST(Kloosterman, HandValuesQ3) {
    auto F = field(3, 1);
    ASSERT_EQ(F->generator_code(), 2u);
    const auto t2 = kl_raw_all(F, 2);
    EXPECT_EQ(t2.values[0].coeffs, big({-1, 0}));  // a = 1: zeta + zeta^2
    EXPECT_EQ(t2.values[1].coeffs, big({2, 0}));   // a = 2: 1 + 1
    const auto t3 = kl_raw_all(F, 3);
    EXPECT_EQ(t3.values[0].coeffs, big({-2, -3}));
    // |Kl_3(1)| = sqrt(7) / 3
    EXPECT_NEAR(std::abs(kl_embed_normalized(t3)[0]), std::sqrt(7.0) / 3.0, 1e-12);
}

TEST(Kloosterman, RankOneIsAdditiveCharacter) {
    auto F = field(7, 1);
    const auto t = kl_raw_all(F, 1);
    for (std::uint64_t j = 0; j < 6; ++j) {
        const auto a = F->exp(static_cast<std::int64_t>(j));
        EXPECT_EQ(t.values[j], t.ring.zeta_pow(a));
    }
}

TEST(Kloosterman, ExactAndDirectAgreeWithOracle) {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}}) {
        auto F = field(p, k);
        for (unsigned n = 2; n <= 4; ++n) {
            const auto t = kl_raw_all(F, n);
            ASSERT_EQ(t.values.size(), F->q() - 1);
            for (std::uint64_t j = 0; j < t.values.size(); ++j) {
                const auto a = F->exp(static_cast<std::int64_t>(j));
                ASSERT_EQ(t.values[j], kl_raw_direct(*F, n, a)) << "q=" << F->q() << " n=" << n << " j=" << j;
                if (n == 4 && F->q() > 7) continue;  // oracle is q^(n-1) per value
                for (std::uint64_t u : {std::uint64_t{1}, p - 1}) {
                    const auto want = kl_oracle(F->field(), F->q(), n, F->decode(a), u);
                    ASSERT_LT(std::abs(t.ring.embed(t.values[j], u) - want), 1e-8 * n);
                }
            }
            // sum over a of S_n(a) is (-1)^n
            EXPECT_EQ(kl_global_sum(t), t.ring.from_int(n % 2 == 0 ? 1 : -1));
        }
    }
}

TEST(Kloosterman, FloatPathMatchesExact) {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{5, 1}, {3, 3}, {101, 1}, {11, 2}, {1009, 1}}) {
        auto F = field(p, k);
        for (unsigned n : {2u, 3u}) {
            const auto t = kl_raw_all(F, n);
            for (std::uint64_t u : {1ull, 2ull}) {
                const auto exact = kl_embed_normalized(t, u);
                const auto fl = kl_all_float(*F, n, u);
                ASSERT_EQ(fl.size(), exact.size());
                for (std::size_t j = 0; j < fl.size(); ++j) ASSERT_LT(std::abs(fl[j] - exact[j]), 1e-8) << p << "^" << k;
            }
        }
    }
    EXPECT_THROW(kl_all_float(*field(5, 1), 2, 5), DomainError);
}

TEST(Kloosterman, DomainErrors) {
    auto F = field(5, 1);
    EXPECT_THROW(kl_raw_all(F, 0), DomainError);
    EXPECT_THROW(kl_raw_direct(*F, 2, FieldCtx::Code{0}), DomainError);
}

TEST(Kloosterman, GaloisTwist) {
    auto F = field(5, 1);
    const auto t = kl_raw_all(F, 2);
    // sigma_2 sends S(1) to S(1 * 2^2) = S(4)
    EXPECT_EQ(t.ring.galois(t.values[F->dlog(1)], 2), t.values[F->dlog(4)]);
    EXPECT_TRUE(galois_twist_check(t, 1));
    EXPECT_TRUE(galois_twist_check(t, 2));
    EXPECT_THROW(galois_twist_check(t, 5), DomainError);

    for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{7, 1}, {3, 2}, {13, 1}, {11, 1}})
        for (unsigned n = 2; n <= 4; ++n) {
            const auto tt = kl_raw_all(field(p, k), n);
            for (std::uint64_t u = 1; u < p; ++u) EXPECT_TRUE(galois_twist_check(tt, u)) << p << " " << n << " " << u;
        }

    // a swapped pair of values breaks the twist relation
    auto broken = kl_raw_all(field(7, 1), 3);
    std::swap(broken.values[1], broken.values[2]);
    EXPECT_FALSE(galois_twist_check(broken, 3));
}

TEST(Kloosterman, WeilBound) {
    auto w3 = weil_bound_check(kl_raw_all(field(3, 1), 2));
    EXPECT_TRUE(w3.pass);
    EXPECT_NEAR(w3.max_ratio, 1.0 / std::sqrt(3.0), 1e-12);

    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{101, 2}, {101, 3}, {13, 4}, {9, 3}}) {
        const auto F = p == 9 ? field(3, 2) : field(p, 1);
        const auto w = weil_bound_check(F, n);
        EXPECT_TRUE(w.pass) << p << " " << n << " ratio " << w.max_ratio;
        EXPECT_LE(w.max_ratio, 1.0);
    }

    // an entry forced to (n + 1) q^((n-1)/2) in absolute value
    auto t = kl_raw_all(field(5, 1), 3);
    t.values[2] = t.ring.from_int(4 * 5);
    const auto bad = weil_bound_check(t);
    EXPECT_FALSE(bad.pass);
    EXPECT_EQ(bad.worst_dlog, 2u);
    EXPECT_NEAR(bad.max_ratio, 4.0 / 3.0, 1e-12);
}

TEST(Reduce, GoldenP5N2L11) {
    const json g = load_golden("reduced_p5_n2_l11.json");
    auto F = field(5, 1);
    const auto t = kl_raw_all(F, 2);
    const auto rc = ReductionCtx::make(t.ring, 11);
    EXPECT_EQ(rc.root().coeffs[0], g["zeta_image"].get<std::uint64_t>());
    EXPECT_EQ(sqrt_q_residue(*F, rc).coeffs[0], g["sqrt_q"].get<std::uint64_t>());
    const auto r = kl_reduce_all(t, rc);
    ASSERT_EQ(r.size(), g["values"].size());
    for (std::size_t j = 0; j < r.size(); ++j) EXPECT_EQ(r[j].coeffs[0], g["values"][j]["value"][0].get<std::uint64_t>());
    EXPECT_EQ(r[0].coeffs[0], 7u);

    // the other square root negates every value for even n
    const auto flipped = kl_reduce_all(t, rc, true);
    for (std::size_t j = 0; j < r.size(); ++j) EXPECT_EQ(flipped[j], rc.residue_field().neg(r[j]));
}

TEST(Reduce, GlobalSumReduces) {
    auto F = field(13, 1);
    for (unsigned n : {2u, 3u}) {
        const auto t = kl_raw_all(F, n);
        const auto rc = ReductionCtx::make(t.ring, 5);
        EXPECT_EQ(rc.reduce(kl_global_sum(t)), rc.reduce_int(n % 2 == 0 ? 1 : -1));
    }
}

TEST(Reduce, SqrtNeedsZeta4WhenQIs3Mod4) {
    auto F = field(7, 1);
    const CycloRing R7(7), R28(28);
    EXPECT_THROW(sqrt_q_residue(*F, ReductionCtx::make(R7, 13)), DomainError);
    const auto rc = ReductionCtx::make(R28, 13);
    const auto s = sqrt_q_residue(*F, rc);
    const auto& K = rc.residue_field();
    EXPECT_EQ(K.mul(s, s), rc.reduce_int(7));
    EXPECT_EQ(sqrt_q_residue(*F, rc, true), K.neg(s));
    // odd rank needs no square root
    const auto t3 = kl_raw_all(F, 3);
    EXPECT_NO_THROW(kl_reduce_all(t3, ReductionCtx::make(R7, 13)));
}

namespace {

// Index of the normalized-value field in F_lambda, from the Galois action:
// sigma_u fixes every Kl(a) iff u^n = 1 and chi_q(u)^(n-1) = 1, for u in the
// decomposition group <l> of F_p^x. sigma_u scales s = sqrt(q) by chi_q(u).
std::uint64_t predicted_normalized_degree(std::uint64_t p, unsigned k, unsigned n, std::uint64_t ell) {
    const std::uint64_t f = multiplicative_order(ell % p, p);
    std::uint64_t index = 0, u = 1;
    for (std::uint64_t i = 0; i < f; ++i, u = mul_mod(u, ell % p, p)) {
        const bool square = pow_mod(u, (p - 1) / 2, p) == 1;
        const int chi = (square || k % 2 == 0) ? 1 : -1;
        if (pow_mod(u, n, p) == 1 && (n % 2 == 1 || chi == 1)) ++index;
    }
    return f / index;
}

}  // namespace

TEST(Reduce, TraceFieldDegree) {
    struct Case {
        std::uint64_t p;
        unsigned n;
        std::uint64_t ell;
        std::uint64_t normalized;  // degree of F_l(Kl_n(a) : a)
    };
    // ell = 1 mod 4 whenever Z[zeta_4p] is needed
    const std::vector<Case> cases{{13, 2, 5, 2}, {13, 3, 5, 4}, {5, 2, 11, 1}, {5, 3, 7, 4},
                                  {13, 4, 5, 2}, {7, 2, 13, 2}, {7, 4, 5, 6}, {11, 2, 5, 5}, {31, 3, 5, 1}};
    for (const auto& c : cases) {
        auto F = field(c.p, 1);
        const auto t = kl_raw_all(F, c.n);
        const bool need4 = c.n % 2 == 0 && c.p % 4 == 3;
        const auto rc = ReductionCtx::make(CycloRing::for_prime(c.p, need4), c.ell);
        const std::uint64_t f = multiplicative_order(c.ell % c.p, c.p);
        ASSERT_EQ(rc.f(), f);

        // unnormalized sums: the fixed field of the n-torsion of Gal, index (f, n)
        std::vector<FqElem> raw;
        for (const auto& v : t.values) raw.push_back(rc.reduce(v));
        EXPECT_EQ(trace_field_degree(raw, rc), f / std::gcd(f, std::uint64_t{c.n})) << c.p << " " << c.n << " " << c.ell;

        // normalized values pick up chi_q(u) from sqrt(q) when n is even
        const auto d = trace_field_degree(kl_reduce_all(t, rc), rc);
        EXPECT_EQ(d, c.normalized) << "p=" << c.p << " n=" << c.n << " ell=" << c.ell;
        EXPECT_EQ(d, predicted_normalized_degree(c.p, 1, c.n, c.ell));
        if (c.n % 2 == 1 || (c.p % 4 == 1 && c.n == 2)) {
            EXPECT_EQ(d, f / std::gcd(f, std::uint64_t{c.n}));
        }
    }
    EXPECT_THROW(trace_field_degree({}, ReductionCtx::make(CycloRing(5), 11)), DomainError);
}

TEST(SatoTate, SemicircleMomentsAreCatalan) {
    // integrate x^j against the density by the midpoint rule
    const int N = 200000;
    const std::vector<double> want{0, 1, 0, 2, 0, 5, 0, 14};
    for (std::size_t j = 1; j <= want.size(); ++j) {
        double s = 0;
        for (int i = 0; i < N; ++i) {
            const double x = -2.0 + 4.0 * (i + 0.5) / N;
            s += std::pow(x, static_cast<double>(j)) * std::sqrt(4 - x * x) / (2 * std::numbers::pi) * (4.0 / N);
        }
        EXPECT_NEAR(s, want[j - 1], 1e-4) << j;
    }
    EXPECT_DOUBLE_EQ(semicircle_cdf(0.0), 0.5);
    EXPECT_DOUBLE_EQ(semicircle_cdf(-3.0), 0.0);
    EXPECT_DOUBLE_EQ(semicircle_cdf(2.5), 1.0);
}

TEST(SatoTate, KsDistanceMatchesBruteForce) {
    std::vector<double> xs{-1.5, -0.2, 0.1, 0.3, 1.9, 1.0, -1.0};
    // sup over a fine grid of |F_emp - F|, including both one-sided limits at the sample points
    double brute = 0;
    auto emp = [&](double x, bool left) {
        double c = 0;
        for (double v : xs) c += left ? (v < x) : (v <= x);
        return c / xs.size();
    };
    for (double x : xs) {
        brute = std::max(brute, std::abs(emp(x, false) - semicircle_cdf(x)));
        brute = std::max(brute, std::abs(emp(x, true) - semicircle_cdf(x)));
    }
    for (int i = 0; i <= 4000; ++i) {
        const double x = -2.0 + i * 0.001;
        brute = std::max(brute, std::abs(emp(x, false) - semicircle_cdf(x)));
    }
    EXPECT_NEAR(ks_distance(xs, semicircle_cdf), brute, 1e-12);
}

TEST(SatoTate, MatchesGoldenAndShrinks) {
    const json g = load_golden("sato_tate.json");
    const unsigned K = g["K"].get<unsigned>();
    std::vector<std::uint64_t> primes;
    for (const auto& row : g["rows"]) primes.push_back(row["p"].get<std::uint64_t>());
    const auto rep = sato_tate_stats(primes, K);
    ASSERT_EQ(rep.size(), primes.size());
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const auto& row = g["rows"][i];
        ASSERT_EQ(rep[i].moments.size(), 2 * K);
        for (std::size_t j = 0; j < rep[i].moments.size(); ++j)
            EXPECT_NEAR(rep[i].moments[j], row["moments"][j].get<double>(), 1e-9) << primes[i] << " m" << j + 1;
        EXPECT_NEAR(rep[i].ks, row["ks"].get<double>(), 1e-9);
        if (i > 0) {
            EXPECT_LT(rep[i].ks, rep[i - 1].ks);
        }
    }
    EXPECT_LT(std::abs(rep.back().moments[1] - 1.0), 10.0 / std::sqrt(10007.0));
}

TEST(SatoTate, SecondMomentExactIdentity) {
    // sum_a S_2(a)^2 = q^2 - q - 1 over F_p, so the mean of Kl^2 is (p^2 - p - 1) / (p (p - 1))
    const std::uint64_t p = 101;
    const auto rep = sato_tate_stats({p}, 1);
    const double want = (double(p) * p - p - 1) / (double(p) * (p - 1));
    EXPECT_NEAR(rep[0].moments[1], want, 1e-12);
}

TEST(Fft, MatchesNaiveDft) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t n : {1u, 2u, 3u, 12u, 17u, 100u, 1008u}) {
        std::vector<std::complex<double>> x(n);
        for (auto& v : x) v = {u(rng), u(rng)};
        for (int sign : {-1, 1}) {
            const auto X = fft::dft(x, sign);
            for (std::size_t k = 0; k < n; ++k) {
                std::complex<double> s = 0;
                for (std::size_t j = 0; j < n; ++j)
                    s += x[j] * std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n));
                ASSERT_LT(std::abs(X[k] - s), 1e-9 * static_cast<double>(n)) << n << " " << k;
            }
        }
    }
    // (1, 1, 0, ...)^{*3} = binomial coefficients 1, 3, 3, 1
    std::vector<std::complex<double>> x(6, 0.0);
    x[0] = x[1] = 1.0;
    const auto c = fft::cyclic_convolution_power(x, 3);
    const double want[6] = {1, 3, 3, 1, 0, 0};
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(std::abs(c[j] - want[j]), 0.0, 1e-12);
}
