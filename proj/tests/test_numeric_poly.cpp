#include "hkl/poly.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

using namespace hkl;
namespace P = hkl::poly;

namespace {

std::vector<bool> sieve(std::uint64_t n) {
    std::vector<bool> is(n + 1, true);
    is[0] = is[1] = false;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (is[i])
            for (std::uint64_t j = i * i; j <= n; j += i) is[j] = false;
    return is;
}

// Irreducibility by trial division over all monic polynomials of degree 1..deg/2.
bool irreducible_brute(const P::Poly& f, std::uint64_t p) {
    const int d = P::degree(f);
    for (int e = 1; e <= d / 2; ++e) {
        std::uint64_t count = 1;
        for (int i = 0; i < e; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            P::Poly g(e + 1, 0);
            g[e] = 1;
            std::uint64_t c = code;
            for (int i = 0; i < e; ++i, c /= p) g[i] = c % p;
            if (P::rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

P::Poly random_poly(std::mt19937_64& rng, int deg, std::uint64_t p) {
    P::Poly a(deg + 1);
    for (auto& c : a) c = rng() % p;
    a.back() = 1 + rng() % (p - 1);
    return a;
}

}  // namespace

TEST(Numeric, IsPrimeMatchesSieve) {
    const auto is = sieve(200000);
    for (std::uint64_t n = 0; n <= 200000; ++n) ASSERT_EQ(is_prime(n), is[n]) << n;
    EXPECT_TRUE(is_prime(1'000'003));
    EXPECT_TRUE(is_prime(18446744073709551557ull));
    EXPECT_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Numeric, FactorizeRoundTrip) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t n = 2 + rng() % 10'000'000;
        std::uint64_t prod = 1;
        for (auto [q, e] : factorize(n)) {
            EXPECT_TRUE(is_prime(q));
            for (unsigned i = 0; i < e; ++i) prod *= q;
        }
        EXPECT_EQ(prod, n);
    }
}

TEST(Numeric, PhiAndOrderAgainstBruteForce) {
    for (std::uint64_t m = 2; m < 300; ++m) {
        std::uint64_t count = 0;
        for (std::uint64_t a = 1; a <= m; ++a) count += std::gcd(a, m) == 1;
        ASSERT_EQ(euler_phi(m), count);
        for (std::uint64_t a = 1; a < m; ++a) {
            if (std::gcd(a, m) != 1) continue;
            std::uint64_t x = a, o = 1;
            while (x != 1) x = x * a % m, ++o;
            ASSERT_EQ(multiplicative_order(a, m), o) << a << " mod " << m;
        }
    }
}

TEST(Numeric, DivisorsAndPrimePowers) {
    EXPECT_EQ(divisors(12), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(prime_power_decomposition(9), (std::pair<std::uint64_t, unsigned>{3, 2}));
    EXPECT_EQ(prime_power_decomposition(6).first, 0u);
    EXPECT_EQ(factorial(5), 120);
    EXPECT_EQ(mod_floor(-7, 5), 3u);
    EXPECT_EQ(inv_mod(3, 11), 4u);
}

TEST(Poly, DivmodRoundTrip) {
    std::mt19937_64 rng(2);
    for (std::uint64_t p : {2, 3, 7, 101}) {
        for (int t = 0; t < 200; ++t) {
            const auto a = random_poly(rng, static_cast<int>(rng() % 9), p);
            const auto b = random_poly(rng, static_cast<int>(rng() % 5), p);
            auto [q, r] = P::divmod(a, b, p);
            EXPECT_LT(P::degree(r), P::degree(b));
            EXPECT_EQ(P::add(P::mul(q, b, p), r, p), P::reduce_coeffs(a, p));
        }
    }
}

TEST(Poly, GcdDividesBoth) {
    std::mt19937_64 rng(3);
    const std::uint64_t p = 5;
    for (int t = 0; t < 200; ++t) {
        const auto c = random_poly(rng, 2, p);
        const auto a = P::mul(random_poly(rng, 3, p), c, p);
        const auto b = P::mul(random_poly(rng, 2, p), c, p);
        const auto g = P::gcd(a, b, p);
        EXPECT_TRUE(P::rem(a, g, p).empty());
        EXPECT_TRUE(P::rem(b, g, p).empty());
        EXPECT_TRUE(P::rem(g, P::monic(c, p), p).empty());
    }
}

TEST(Poly, RabinMatchesTrialDivision) {
    for (std::uint64_t p : {2, 3, 5}) {
        for (int d = 1; d <= (p == 5 ? 4 : 6); ++d) {
            std::uint64_t count = 1;
            for (int i = 0; i < d; ++i) count *= p;
            std::uint64_t irreducible = 0;
            for (std::uint64_t code = 0; code < count; ++code) {
                P::Poly f(d + 1, 0);
                f[d] = 1;
                std::uint64_t c = code;
                for (int i = 0; i < d; ++i, c /= p) f[i] = c % p;
                const bool r = P::is_irreducible(f, p);
                ASSERT_EQ(r, irreducible_brute(f, p)) << "p=" << p << " code=" << code;
                irreducible += r;
            }
            // necklace count (1/d) sum_{e | d} mu(e) p^(d/e)
            std::int64_t necklace = 0;
            for (std::uint64_t e : divisors(d)) {
                int mu = 1;
                for (auto [q, k] : factorize(e)) mu = k > 1 ? 0 : -mu;
                if (e == 1) mu = 1;
                std::int64_t pw = 1;
                for (std::uint64_t i = 0; i < d / e; ++i) pw *= static_cast<std::int64_t>(p);
                necklace += mu * pw;
            }
            EXPECT_EQ(static_cast<std::int64_t>(irreducible), necklace / d) << "p=" << p << " d=" << d;
        }
    }
}

TEST(Poly, SquareOfIrreducibleIsReducible) {
    // x^4 + 2x^2 + 1 = (x^2 + 1)^2 has no root mod 3 but is reducible
    EXPECT_FALSE(P::is_irreducible({1, 0, 2, 0, 1}, 3));
    EXPECT_TRUE(P::is_irreducible({1, 0, 1}, 3));
}

TEST(Poly, EqualDegreeFactorization) {
    // Phi_13 mod 5 splits into three quartics, Phi_7 mod 2 into two cubics
    const P::Poly phi13(13, 1);
    for (std::uint64_t seed : {0, 1, 7}) {
        auto fs = P::equal_degree_factor(phi13, 4, 5, seed);
        ASSERT_EQ(fs.size(), 3u);
        P::Poly prod{1};
        std::set<P::Poly> distinct;
        for (const auto& f : fs) {
            EXPECT_EQ(P::degree(f), 4);
            EXPECT_TRUE(P::is_irreducible(f, 5));
            prod = P::mul(prod, f, 5);
            distinct.insert(f);
        }
        EXPECT_EQ(prod, phi13);
        EXPECT_EQ(distinct.size(), 3u);
    }
    auto fs2 = P::equal_degree_factor(P::Poly(7, 1), 3, 2);
    ASSERT_EQ(fs2.size(), 2u);
    EXPECT_EQ(P::mul(fs2[0], fs2[1], 2), P::Poly(7, 1));
}
