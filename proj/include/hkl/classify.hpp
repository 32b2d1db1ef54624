#pragma once

// Orders of classical groups, minimal projective dimensions and outer
// automorphism orders of simple groups of Lie type, and the bound filters
// used to exclude geometric and almost simple subgroups.

#include "hkl/numeric.hpp"

#include <array>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hkl {

enum class ClassicalFamily { SL, Sp, SU };

inline std::string to_string(ClassicalFamily f) {
    switch (f) {
        case ClassicalFamily::SL: return "SL";
        case ClassicalFamily::Sp: return "Sp";
        case ClassicalFamily::SU: return "SU";
    }
    return "?";
}

inline ClassicalFamily parse_classical_family(std::string_view s) {
    if (s == "SL") return ClassicalFamily::SL;
    if (s == "Sp") return ClassicalFamily::Sp;
    if (s == "SU") return ClassicalFamily::SU;
    throw DomainError("unknown classical family '" + std::string(s) + "' (expected SL, Sp or SU)");
}

/// |SL_n(q)|, |Sp_n(q)| (n even) or |SU_n(q)|.
inline BigInt group_order(ClassicalFamily fam, unsigned n, std::uint64_t q) {
    if (n < 1) throw DomainError("group_order: dimension must be >= 1");
    if (q < 2) throw DomainError("group_order: field size must be >= 2");
    switch (fam) {
        case ClassicalFamily::SL: {
            BigInt r = big_pow(q, n * (n - 1) / 2);
            for (unsigned i = 2; i <= n; ++i) r *= big_pow(q, i) - 1;
            return r;
        }
        case ClassicalFamily::Sp: {
            if (n % 2 != 0) throw DomainError("group_order: Sp needs even dimension");
            const unsigned m = n / 2;
            BigInt r = big_pow(q, m * m);
            for (unsigned i = 1; i <= m; ++i) r *= big_pow(q, 2 * i) - 1;
            return r;
        }
        case ClassicalFamily::SU: {
            BigInt r = big_pow(q, n * (n - 1) / 2);
            for (unsigned i = 2; i <= n; ++i) r *= (i % 2 == 0) ? big_pow(q, i) - 1 : big_pow(q, i) + 1;
            return r;
        }
    }
    return 0;
}

enum class LieFamily { A, A2, B, C, D, D2, D3_4, G2, F4, E6, E6_2, E7, E8 };

inline constexpr std::array<LieFamily, 13> kLieFamilies{LieFamily::A,    LieFamily::A2, LieFamily::B,    LieFamily::C,
                                                          LieFamily::D,    LieFamily::D2, LieFamily::D3_4, LieFamily::G2,
                                                          LieFamily::F4,   LieFamily::E6, LieFamily::E6_2, LieFamily::E7,
                                                          LieFamily::E8};

inline std::string to_string(LieFamily f) {
    switch (f) {
        case LieFamily::A: return "A";
        case LieFamily::A2: return "2A";
        case LieFamily::B: return "B";
        case LieFamily::C: return "C";
        case LieFamily::D: return "D";
        case LieFamily::D2: return "2D";
        case LieFamily::D3_4: return "3D4";
        case LieFamily::G2: return "G2";
        case LieFamily::F4: return "F4";
        case LieFamily::E6: return "E6";
        case LieFamily::E6_2: return "2E6";
        case LieFamily::E7: return "E7";
        case LieFamily::E8: return "E8";
    }
    return "?";
}

inline LieFamily parse_lie_family(std::string_view s) {
    for (LieFamily f : kLieFamilies)
        if (to_string(f) == s) return f;
    throw DomainError("unknown Lie family '" + std::string(s) + "'");
}

/// Rank of the exceptional and triality families, which is fixed.
inline std::optional<unsigned> fixed_rank(LieFamily f) {
    switch (f) {
        case LieFamily::D3_4: return 4;
        case LieFamily::G2: return 2;
        case LieFamily::F4: return 4;
        case LieFamily::E6:
        case LieFamily::E6_2: return 6;
        case LieFamily::E7: return 7;
        case LieFamily::E8: return 8;
        default: return std::nullopt;
    }
}

inline unsigned min_rank(LieFamily f) {
    if (auto r = fixed_rank(f)) return *r;
    switch (f) {
        case LieFamily::A: return 1;
        case LieFamily::A2:
        case LieFamily::B:
        case LieFamily::C: return 2;
        default: return 4;  // D, 2D
    }
}

/// Simple group S of Lie type of rank l over F_r, r = ell^a. `ell` is only
/// needed where the outer automorphism order depends on r.
struct GroupDescriptor {
    LieFamily family = LieFamily::A;
    unsigned l = 1;
    unsigned a = 1;
    std::optional<std::uint64_t> ell;

    bool operator==(const GroupDescriptor&) const = default;

    void validate() const {
        if (a < 1) throw DomainError("GroupDescriptor: field exponent a must be >= 1");
        if (auto r = fixed_rank(family); r && l != *r)
            throw DomainError("GroupDescriptor: " + to_string(family) + " has fixed rank " + std::to_string(*r));
        if (l < min_rank(family))
            throw DomainError("GroupDescriptor: rank " + std::to_string(l) + " below the minimum " +
                              std::to_string(min_rank(family)) + " for " + to_string(family));
        if (ell && !is_prime(*ell)) throw DomainError("GroupDescriptor: characteristic must be prime");
    }

    std::string name() const {
        std::string s = to_string(family);
        if (!fixed_rank(family)) s += "_" + std::to_string(l);
        return s;
    }
};

/// Minimal dimension of a faithful irreducible projective representation
/// in defining characteristic.
inline std::uint64_t m_lower(const GroupDescriptor& d) {
    d.validate();
    switch (d.family) {
        case LieFamily::A:
        case LieFamily::A2: return d.l + 1;
        case LieFamily::B: return 2 * d.l + 1;
        case LieFamily::C:
        case LieFamily::D:
        case LieFamily::D2: return 2 * d.l;
        case LieFamily::D3_4: return 8;
        case LieFamily::G2: return 7;
        case LieFamily::F4: return 26;
        case LieFamily::E6:
        case LieFamily::E6_2: return 27;
        case LieFamily::E7: return 56;
        case LieFamily::E8: return 248;
    }
    return 0;
}

namespace detail {

inline std::uint64_t r_mod(const GroupDescriptor& d, std::uint64_t mod) {
    if (!d.ell)
        throw DomainError("out_order: " + d.name() + " needs the characteristic to evaluate r = ell^a mod " +
                          std::to_string(mod));
    return pow_mod(*d.ell % mod, d.a, mod);
}

}  // namespace detail

/// |Out(S)| for S = d over F_r, r = ell^a.
inline std::uint64_t out_order(const GroupDescriptor& d) {
    d.validate();
    const std::uint64_t a = d.a, l = d.l;
    switch (d.family) {
        case LieFamily::A:
            if (l == 1 || l % 2 == 0) return 2 * a;
            return 2 * a * std::gcd(l + 1, (detail::r_mod(d, l + 1) + l) % (l + 1));
        case LieFamily::A2:
            if (l % 2 == 0) return 2 * a;
            return 2 * a * std::gcd(l + 1, (detail::r_mod(d, l + 1) + 1) % (l + 1));
        case LieFamily::B:
        case LieFamily::C: return 2 * a;
        case LieFamily::D:
            if (l == 4) return 12 * a;
            if (l % 2 == 0) return 8 * a;
            return detail::r_mod(d, 4) == 1 ? 8 * a : 4 * a;
        case LieFamily::D2:
            if (detail::r_mod(d, 4) == 1) return 4 * a;
            return l % 2 == 1 ? 8 * a : 4 * a;
        case LieFamily::D3_4: return a;
        case LieFamily::E6: return detail::r_mod(d, 3) == 1 ? 6 * a : 2 * a;
        case LieFamily::E6_2: return detail::r_mod(d, 3) == 1 ? 2 * a : 6 * a;
        case LieFamily::E7: return 2 * a;
        case LieFamily::E8:
        case LieFamily::F4:
        case LieFamily::G2: return a;
    }
    return 0;
}

/// Largest a with 2^a <= n^f: since m(S) >= 2, any S with
/// m(S)^a <= n^((f,a)) has a at most this.
inline unsigned survey_max_a(std::uint64_t n, std::uint64_t f) {
    const BigInt nf = big_pow(n, static_cast<unsigned>(f));
    unsigned a = 0;
    while (big_pow(2, a + 1) <= nf) ++a;
    return a;
}

/// All S with l <= m(S) <= n^((f,a)/a), ordered by (family, l, a).
inline std::vector<GroupDescriptor> candidate_survey(std::uint64_t n, std::uint64_t ell, std::uint64_t f) {
    if (n < 2) throw DomainError("candidate_survey: n must be >= 2");
    if (!is_prime(ell)) throw DomainError("candidate_survey: l must be prime");
    if (f < 1) throw DomainError("candidate_survey: f must be >= 1");
    const unsigned amax = survey_max_a(n, f);
    std::vector<GroupDescriptor> out;
    for (LieFamily fam : kLieFamilies) {
        const unsigned lmin = min_rank(fam);
        const unsigned lmax = fixed_rank(fam) ? lmin : static_cast<unsigned>(n);
        for (unsigned l = lmin; l <= lmax; ++l) {
            for (unsigned a = 1; a <= amax; ++a) {
                GroupDescriptor d{fam, l, a, ell};
                const std::uint64_t m = m_lower(d);
                if (l > m) continue;
                // m <= n^(g/a)  <=>  m^a <= n^g
                const unsigned g = static_cast<unsigned>(std::gcd<std::uint64_t>(f, a));
                if (big_pow(m, a) <= big_pow(n, g)) out.push_back(d);
            }
        }
    }
    return out;
}

struct ClassExclusion {
    std::string name;     ///< "C2", "C3", "C4", "C5"
    bool applicable = true;
    bool excluded = false;
    BigInt bound = 0;     ///< l must exceed this (0 when not a bound test)
    std::string witness;  ///< the inequality that decides it
};

/// Bound tests that rule out the geometric classes C2..C5 for (n, l).
inline std::vector<ClassExclusion> geometric_exclusions(std::uint64_t n, std::uint64_t ell) {
    if (n < 2) throw DomainError("geometric_exclusions: n must be >= 2");
    if (!is_prime(ell)) throw DomainError("geometric_exclusions: l must be prime");
    std::vector<ClassExclusion> out;
    const std::string l_s = std::to_string(ell), n_s = std::to_string(n);

    const bool divides = (n % ell == 0) || ((n - 1) % ell == 0);
    for (const char* name : {"C2", "C3"}) {
        ClassExclusion c{name, true, ell > n && !divides, BigInt(n), ""};
        c.witness = "l=" + l_s + (ell > n ? " > " : " <= ") + "n=" + n_s + ", l " + (divides ? "divides" : "does not divide") +
                    " n(n-1)";
        out.push_back(std::move(c));
    }

    {
        const BigInt b = big_pow(2, static_cast<unsigned>(n)) * factorial(static_cast<unsigned>(n));
        ClassExclusion c{"C4", true, BigInt(ell) > b, b, ""};
        c.witness = "l=" + l_s + (c.excluded ? " > " : " <= ") + "2^n n! = " + b.str();
        out.push_back(std::move(c));
    }

    {
        ClassExclusion c{"C5", false, false, 0, "n=" + n_s + " is not a prime power"};
        if (const auto [r, m] = prime_power_decomposition(n); r != 0) {
            const BigInt b = big_pow(r, static_cast<unsigned>(m * (2 * m + 1)));
            c.applicable = true;
            c.bound = b;
            c.excluded = BigInt(ell) > b;
            c.witness = "n=" + std::to_string(r) + "^" + std::to_string(m) + ", l=" + l_s + (c.excluded ? " > " : " <= ") +
                        "r^(m(2m+1)) = " + b.str();
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace hkl
