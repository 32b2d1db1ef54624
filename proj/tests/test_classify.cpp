#include "hkl/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace hkl;
using nlohmann::json;

namespace {

// Group orders from the product formulas, evaluated independently of group_order.
BigInt sl_order(unsigned n, std::uint64_t q) {
    BigInt r = big_pow(q, n * (n - 1) / 2);
    for (unsigned i = 2; i <= n; ++i) r *= big_pow(q, i) - 1;
    return r;
}

bool contains(const std::vector<GroupDescriptor>& v, LieFamily f, unsigned l, unsigned a) {
    return std::any_of(v.begin(), v.end(), [&](const auto& d) { return d.family == f && d.l == l && d.a == a; });
}

}  // namespace

TEST(GroupOrder, Examples) {
    EXPECT_EQ(group_order(ClassicalFamily::SL, 3, 3), 5616);
    EXPECT_EQ(group_order(ClassicalFamily::Sp, 4, 3), 51840);
    EXPECT_EQ(group_order(ClassicalFamily::SL, 2, 2), 6);
    EXPECT_EQ(group_order(ClassicalFamily::SU, 2, 3), 24);  // SU_2 = SL_2
    EXPECT_EQ(group_order(ClassicalFamily::SU, 3, 2), 216);
    EXPECT_THROW(group_order(ClassicalFamily::Sp, 3, 3), DomainError);
    for (unsigned n = 2; n <= 6; ++n)
        for (std::uint64_t q : {2, 3, 4, 5, 7, 9}) EXPECT_EQ(group_order(ClassicalFamily::SL, n, q), sl_order(n, q));
}

TEST(GroupOrder, FamilyNames) {
    EXPECT_EQ(parse_classical_family("Sp"), ClassicalFamily::Sp);
    EXPECT_THROW(parse_classical_family("GL"), DomainError);
    for (auto f : kLieFamilies) EXPECT_EQ(parse_lie_family(to_string(f)), f);
    EXPECT_THROW(parse_lie_family("H4"), DomainError);
}

TEST(MLower, TableValues) {
    EXPECT_EQ(m_lower({LieFamily::G2, 2, 1}), 7u);
    EXPECT_EQ(m_lower({LieFamily::E8, 8, 1}), 248u);
    EXPECT_EQ(m_lower({LieFamily::A, 1, 1}), 2u);
    EXPECT_EQ(m_lower({LieFamily::B, 3, 1}), 7u);
    EXPECT_EQ(m_lower({LieFamily::D2, 5, 2}), 10u);
}

TEST(OutOrder, Examples) {
    for (unsigned a = 1; a <= 4; ++a) {
        EXPECT_EQ(out_order({LieFamily::A, 1, a}), 2u * a);
        EXPECT_EQ(out_order({LieFamily::D, 4, a}), 12u * a);
        EXPECT_EQ(out_order({LieFamily::D3_4, 4, a}), a);
    }
    EXPECT_EQ(out_order({LieFamily::A, 3, 1, 5}), 8u);   // (4, 5 - 1) = 4
    EXPECT_EQ(out_order({LieFamily::A, 3, 1, 7}), 4u);   // (4, 6) = 2
    EXPECT_EQ(out_order({LieFamily::A, 3, 2, 3}), 16u);  // r = 9
}

TEST(OutOrder, NeedsCharacteristicWhereResidueMatters) {
    EXPECT_THROW(out_order({LieFamily::A, 3, 1}), DomainError);
    EXPECT_THROW(out_order({LieFamily::D, 5, 1}), DomainError);
    EXPECT_THROW(out_order({LieFamily::E6, 6, 1}), DomainError);
    EXPECT_NO_THROW(out_order({LieFamily::A, 2, 1}));
    EXPECT_NO_THROW(out_order({LieFamily::D, 6, 1}));
}

TEST(OutOrder, NormalForm) {
    // N a with N in {1, 2, 4, 6, 8, 12}, except A_l / 2A_l of odd rank >= 3
    const std::set<std::uint64_t> allowed{1, 2, 4, 6, 8, 12};
    for (auto fam : kLieFamilies)
        for (unsigned l = min_rank(fam); l <= (fixed_rank(fam) ? min_rank(fam) : 9u); ++l)
            for (unsigned a = 1; a <= 4; ++a)
                for (std::uint64_t ell : {3, 5, 7, 11, 13}) {
                    const GroupDescriptor d{fam, l, a, ell};
                    const auto o = out_order(d);
                    ASSERT_EQ(o % a, 0u);
                    const bool exempt = (fam == LieFamily::A || fam == LieFamily::A2) && l >= 3 && l % 2 == 1;
                    if (exempt) {
                        EXPECT_EQ((o / a) % 2, 0u);
                        EXPECT_EQ((l + 1) * 2 % (o / a), 0u);
                    } else {
                        EXPECT_TRUE(allowed.count(o / a)) << d.name() << " a=" << a << " ell=" << ell << " -> " << o;
                    }
                }
}

TEST(Tables, GoldenRows) {
    const json g = json::parse(io::read_file(std::filesystem::path(HKL_GOLDEN_DIR) / "classification_tables.json"));
    ASSERT_GE(g["rows"].size(), 20u);
    for (const auto& row : g["rows"]) {
        GroupDescriptor d{parse_lie_family(row["family"].get<std::string>()), row["l"].get<unsigned>(), row["a"].get<unsigned>(),
                          row["ell"].get<std::uint64_t>()};
        EXPECT_EQ(m_lower(d), row["m_S"].get<std::uint64_t>()) << d.name();
        EXPECT_EQ(out_order(d), row["out_order"].get<std::uint64_t>()) << d.name() << " a=" << d.a;
        const auto j = io::descriptor_to_json(d);
        EXPECT_EQ(j["m_S"], row["m_S"]);
        EXPECT_EQ(j["out_order"], row["out_order"]);
    }
}

TEST(Descriptor, Validation) {
    EXPECT_THROW(m_lower({LieFamily::B, 1, 1}), DomainError);
    EXPECT_THROW(m_lower({LieFamily::D, 3, 1}), DomainError);
    EXPECT_THROW(m_lower({LieFamily::G2, 3, 1}), DomainError);
    EXPECT_THROW(m_lower({LieFamily::D3_4, 4, 0}), DomainError);
    EXPECT_THROW(m_lower({LieFamily::A, 2, 1, 9}), DomainError);
    EXPECT_NO_THROW(m_lower({LieFamily::C, 2, 1}));
    EXPECT_EQ((GroupDescriptor{LieFamily::A2, 3, 1}).name(), "2A_3");
    EXPECT_EQ((GroupDescriptor{LieFamily::E6_2, 6, 1}).name(), "2E6");
}

TEST(Survey, Examples) {
    const auto s7 = candidate_survey(7, 1009, 1);
    EXPECT_TRUE(contains(s7, LieFamily::G2, 2, 1));

    const auto s2 = candidate_survey(2, 101, 1);
    ASSERT_FALSE(s2.empty());
    for (const auto& d : s2) {
        EXPECT_EQ(d.family, LieFamily::A);
        EXPECT_EQ(d.l, 1u);
    }

    const auto s5 = candidate_survey(5, 11, 1);
    for (unsigned l = 1; l <= 4; ++l) EXPECT_TRUE(contains(s5, LieFamily::A, l, 1)) << l;
    EXPECT_TRUE(contains(s5, LieFamily::B, 2, 1));
    EXPECT_TRUE(contains(s5, LieFamily::C, 2, 1));
    EXPECT_FALSE(contains(s5, LieFamily::G2, 2, 1));

    // with f = 2, A_1 over F_{l^2} fits in dimension 2: m^a = 4 <= n^(2,2) = 4
    EXPECT_TRUE(contains(candidate_survey(2, 7, 2), LieFamily::A, 1, 2));
    EXPECT_FALSE(contains(candidate_survey(2, 7, 1), LieFamily::A, 1, 2));
}

TEST(Survey, Properties) {
    for (std::uint64_t f : {1, 2, 3}) {
        std::vector<GroupDescriptor> prev;
        for (std::uint64_t n = 2; n <= 12; ++n) {
            const auto cur = candidate_survey(n, 13, f);
            for (const auto& d : cur) {
                EXPECT_LE(d.l, m_lower(d));
                // the bound m^a <= n^((f, a)) holds and a is within the survey range
                const unsigned g = static_cast<unsigned>(std::gcd<std::uint64_t>(f, d.a));
                EXPECT_LE(big_pow(m_lower(d), d.a), big_pow(n, g));
                EXPECT_LE(d.a, survey_max_a(n, f));
            }
            for (const auto& d : prev) EXPECT_TRUE(std::find(cur.begin(), cur.end(), d) != cur.end()) << n << " " << d.name();
            EXPECT_TRUE(std::is_sorted(cur.begin(), cur.end(), [](const auto& x, const auto& y) {
                return std::tuple(static_cast<int>(x.family), x.l, x.a) < std::tuple(static_cast<int>(y.family), y.l, y.a);
            }));
            prev = cur;
        }
    }
    EXPECT_EQ(survey_max_a(2, 1), 1u);
    EXPECT_EQ(survey_max_a(7, 1), 2u);
    EXPECT_EQ(survey_max_a(7, 2), 5u);
    EXPECT_THROW(candidate_survey(1, 5, 1), DomainError);
    EXPECT_THROW(candidate_survey(5, 6, 1), DomainError);
    EXPECT_THROW(candidate_survey(5, 5, 0), DomainError);
}

TEST(Exclusions, Examples) {
    const auto e57 = geometric_exclusions(5, 7);
    ASSERT_EQ(e57.size(), 4u);
    EXPECT_EQ(e57[0].name, "C2");
    EXPECT_TRUE(e57[0].excluded);
    EXPECT_TRUE(e57[1].excluded);
    EXPECT_TRUE(e57[3].applicable);  // r = 5, m = 1
    EXPECT_EQ(e57[3].bound, 125);
    EXPECT_FALSE(e57[3].excluded);

    const auto e9 = geometric_exclusions(9, 59051);
    EXPECT_TRUE(e9[3].applicable);
    EXPECT_EQ(e9[3].bound, 59049);
    EXPECT_TRUE(e9[3].excluded);
    EXPECT_FALSE(geometric_exclusions(9, 59029)[3].excluded);

    const auto e6 = geometric_exclusions(6, 101);
    EXPECT_FALSE(e6[3].applicable);
    EXPECT_FALSE(e6[3].excluded);

    // l | n(n-1) keeps C2 open even when l > n / 2
    EXPECT_FALSE(geometric_exclusions(5, 5)[0].excluded);
    EXPECT_FALSE(geometric_exclusions(6, 5)[0].excluded);
    EXPECT_FALSE(geometric_exclusions(5, 3)[0].excluded);

    // C4 bound 2^n n!
    EXPECT_EQ(geometric_exclusions(3, 5)[2].bound, 48);
    EXPECT_TRUE(geometric_exclusions(3, 53)[2].excluded);
    EXPECT_FALSE(geometric_exclusions(3, 47)[2].excluded);
}
