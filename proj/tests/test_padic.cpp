#include <gtest/gtest.h>
#include <kuengine/recurrences.hpp>

#include <limits>

#include "printed_table_rows.hpp"

using namespace kuengine;

TEST(Valuation, SmallCases) {
    EXPECT_EQ(nu(1, 2), 0);
    EXPECT_EQ(nu(12, 2), 2);
    EXPECT_EQ(nu(125, 5), 3);
    EXPECT_EQ(nu(18, 3), 2);
    EXPECT_THROW(nu(0, 2), std::invalid_argument);
}

TEST(Heights, Seeds) {
    RSequences two(2);
    const int r2[] = {1, 2, 4, 7, 13};
    for (int j = 0; j < 5; ++j) EXPECT_EQ(two.r(j), r2[j]) << j;
    RSequences five(5);
    EXPECT_EQ(five.r_prime(2), 103);
    RSequences three(3);
    EXPECT_EQ(three.r(2) + three.r_prime(2), 27);
    EXPECT_THROW(three.r(-1), std::invalid_argument);
    EXPECT_THROW(three.r_prime(-1), std::invalid_argument);
}

TEST(Heights, IdentitiesUpToThirty) {
    for (int p : {2, 3, 5}) {
        RSequences s(p);
        for (int j = 0; j <= 30; ++j) {
            const BigInt pj = big_pow(p, j), pj1 = big_pow(p, j + 1), pj2 = big_pow(p, j + 2);
            EXPECT_EQ(s.r(j + 2), s.r(j) + pj1 * (p - 1) + 1);
            EXPECT_EQ(s.r_prime(j + 2), s.r_prime(j) + pj2 * (p - 1) - 1);
            EXPECT_EQ(s.r(j) + s.r_prime(j), pj1) << "p=" << p << " j=" << j;
            EXPECT_EQ(s.r(j + 2) + s.r_prime(j), pj2 + 1);
            EXPECT_LE(pj1 - pj, s.r_prime(j));
            if (j >= 1) {
                EXPECT_LT(s.r_prime(j), pj1 - big_pow(p, j - 1));
                EXPECT_EQ(s.r(j) - s.r_prime(j - 1), j);
                EXPECT_LT((p - 1) * (s.r(j - 1) + j - 1), pj);
            }
        }
    }
}

TEST(Heights, ExceedSixtyFourBits) {
    RSequences s(5);
    EXPECT_GT(s.r(30), BigInt(std::numeric_limits<int64_t>::max()));
}

TEST(TorsionTable, EveryPrintedRow) {
    for (const auto& row : kPrintedTable) {
        const TorsionTableRow got = torsion_table_row(row.ell, row.t);
        EXPECT_EQ(got.T_abs, row.T) << row.ell << "," << row.t;
        EXPECT_EQ(got.M_abs, row.M) << row.ell << "," << row.t;
        EXPECT_EQ(got.M_prime, row.Mp) << row.ell << "," << row.t;
    }
}

TEST(TorsionTable, CorrectionTerms) {
    RSequences s(5);
    const int printed[] = {16, 80, 412, 2076};
    for (int t = 1; t <= 4; ++t) EXPECT_EQ(4 * s.r_prime(t - 1), printed[t - 1]);
    EXPECT_THROW(torsion_table_row(0, 0), std::invalid_argument);
}
