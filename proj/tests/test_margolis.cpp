#include <gtest/gtest.h>
#include <kuengine/audits.hpp>
#include <kuengine/margolis.hpp>

using namespace kuengine;

namespace {

int index_of(const E1Module& M, int d, const std::string& label) {
    for (int i = 0; i < M.dim(d); ++i)
        if (M.labels[d][i] == label) return i;
    return -1;
}

E1Module free_on_one(int p, int d, int top) {
    E1Module F(p, top);
    const int g = F.add(d, "g"), a = F.add(d + 1, "Q0g"), b = F.add(d + 2 * p - 1, "Q1g"), t = F.add(d + 2 * p, "Q0Q1g");
    F.act(0, d, g, a, 1);
    F.act(1, d, g, b, 1);
    F.act(0, d + 2 * p - 1, b, t, 1);
    F.act(1, d + 1, a, t, p - 1);
    return F;
}

int at(const BigradedDims& m, int64_t n, int s) {
    auto it = m.find({n, s});
    return it == m.end() ? 0 : it->second;
}

}  // namespace

TEST(HK2, TwoPrimaryOperations) {
    const E1Module M = build_HK2(2, 12);
    const int u2 = index_of(M, 2, "u2"), u3 = index_of(M, 3, "u3");
    ASSERT_GE(u2, 0);
    ASSERT_GE(u3, 0);
    EXPECT_EQ(M.image(0, 2, u2), (SparseRow{{u3, 1}}));
    EXPECT_EQ(M.image(1, 3, u3), (SparseRow{{index_of(M, 6, "u3^2"), 1}}));
    EXPECT_EQ(M.dim(5), 2);
}

TEST(HK2, Relations) {
    for (int p : {2, 3, 5}) EXPECT_TRUE(check_relations(build_HK2(p, 50)).pass()) << p;
    for (int p : {2, 3}) EXPECT_TRUE(check_relations(free_on_one(p, 4, 20)).pass()) << p;
}

TEST(Margolis, ClosedForms) {
    for (int p : {2, 3, 5}) {
        const auto r = margolis_audit(40, PrimeCtx(p));
        EXPECT_TRUE(r[0].pass()) << p << " Q0 " << r[0].failures();
        EXPECT_TRUE(r[1].pass()) << p << " Q1 " << r[1].failures();
    }
}

TEST(Margolis, NonFreePartCarriesAllHomology) {
    for (int p : {2, 3}) {
        const int D = 40, top = D + 2 * p;
        const E1Module H = build_HK2(p, top), T = build_piece(PieceKind::T, 0, p, top);
        for (int which : {0, 1})
            EXPECT_EQ(margolis_homology(H, which, D).homology, margolis_homology(T, which, D).homology) << p << which;
    }
}

TEST(Margolis, NeedsMargin) {
    const E1Module M = build_HK2(2, 20);
    EXPECT_THROW(margolis_homology(M, 1, 18), std::invalid_argument);
}

TEST(Pieces, N) {
    const E1Module N = build_piece(PieceKind::N, 0, 2, 20);
    EXPECT_EQ(N.total_dim(), 5);
    for (int d : {5, 7, 8, 9, 10}) EXPECT_EQ(N.dim(d), 1) << d;
    EXPECT_EQ(N.image(0, 7, 0), N.image(1, 5, 0));
    EXPECT_FALSE(N.image(0, 7, 0).empty());
}

TEST(Pieces, L) {
    const E1Module L = build_piece(PieceKind::L, 3, 2, 40);
    EXPECT_EQ(L.total_dim(), 8);
    for (int i = 0; i < 3; ++i) {
        const int d = 2 * i;
        EXPECT_EQ(L.image(1, d, index_of(L, d, "g" + std::to_string(2 * i))),
                  L.image(0, d + 2, index_of(L, d + 2, "g" + std::to_string(2 * i + 2))));
    }
    EXPECT_TRUE(check_relations(L).pass());
}

TEST(Pieces, MIsShiftedL) {
    for (int j = 5; j <= 6; ++j) {
        const int top = 120;
        const E1Module M = build_piece(PieceKind::M, j, 2, top), L = build_piece(PieceKind::L, j - 4, 2, top);
        const int s = (1 << j) + 1;
        for (int d = 0; d + s <= top; ++d) EXPECT_EQ(M.dim(d + s), L.dim(d));
        for (int d = 0; d < s; ++d) EXPECT_EQ(M.dim(d), 0);
    }
}

TEST(FreePart, GoldenCoefficient) {
    const PSeries g = free_generator_ps(2, 79);
    EXPECT_EQ(g[79], 245);
}

TEST(FreePart, Nonnegative) {
    for (int p : {2, 3}) {
        EXPECT_TRUE(free_part_ps(p, 120).nonnegative());
        EXPECT_TRUE(free_generator_ps(p, 120).nonnegative());
    }
}

TEST(FreePart, GeneratorsMatchRank) {
    for (int p : {2, 3}) {
        const AuditReport r = ps_audit(40, PrimeCtx(p));
        EXPECT_TRUE(r.pass()) << p << " " << r.failures();
    }
}

TEST(Ext, GroundField) {
    for (int p : {2, 3}) {
        E1Module k(p, 60);
        k.add(0, "1");
        const int s_max = 5, step = 2 * (p - 1);
        const BigradedDims e = ext_bruteforce(k, -step * s_max, 10, s_max);
        for (int s = 0; s <= s_max; ++s)
            for (int64_t n = -step * s_max; n <= 10; ++n) {
                const bool expect = n <= 0 && n % step == 0 && -n / step <= s;
                EXPECT_EQ(at(e, n, s), expect ? 1 : 0) << p << " " << n << " " << s;
            }
    }
}

TEST(Ext, FreeModule) {
    for (int p : {2, 3}) {
        const int d = 4;
        const E1Module F = free_on_one(p, d, 60);
        const BigradedDims e = ext_bruteforce(F, -12, 20, 4);
        int total = 0;
        for (const auto& [key, v] : e) total += v;
        EXPECT_EQ(total, 1);
        EXPECT_EQ(at(e, d + 2 * p, 0), 1);
    }
}

TEST(Ext, SquareZero) {
    for (int p : {2, 3, 5}) {
        const E1Module M = build_HK2(p, 100, true);
        ExtComplex C(M, -10, 30, 5);
        for (int s = 0; s < 5; ++s)
            for (int64_t n = -10; n <= 30; ++n) EXPECT_TRUE(C.square_zero(n, s)) << p << " " << n << " " << s;
    }
}

TEST(Ext, OracleSmallWindow) {
    EXPECT_TRUE(ext_oracle_audit(36, 6, PrimeCtx(2)).empty());
    EXPECT_TRUE(ext_oracle_audit(40, 6, PrimeCtx(3)).empty());
}
