#include <gtest/gtest.h>
#include <kuengine/audits.hpp>
#include <kuengine/ku_modules.hpp>

#include <algorithm>

using namespace kuengine;

namespace {

std::vector<std::string> targets_of(const Chart& c, const std::string& src, int64_t a) {
    const auto t = c.find_tower(parse_monomial(src, c.ctx));
    if (!t) return {};
    const PEdge* e = c.edge_from({*t, a});
    std::vector<std::string> out;
    if (!e) return out;
    for (const auto& d : e->dst) out.push_back("v^" + std::to_string(d.a) + " " + render(c.towers[d.tower].gen, c.ctx));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Cores, B2) {
    const Chart b = build_B(2, PrimeCtx(2));
    ASSERT_EQ(b.towers.size(), 1u);
    EXPECT_EQ(render(b.towers[0].gen, b.ctx), "z2");
    EXPECT_EQ(b.degree({0, 0}), 18);
    EXPECT_EQ(b.towers[0].height, 2);
    EXPECT_TRUE(build_B(1, PrimeCtx(2)).towers.empty());
}

TEST(Cores, B5PureZTowers) {
    const PrimeCtx ctx(2);
    const Chart b = build_B(5, ctx);
    const std::pair<const char*, int64_t> heights[] = {{"z5", 27}, {"z4^2", 12}, {"z3^2 z4", 5}, {"z2^2 z3 z4", 2}};
    int64_t deg = 130;
    for (auto [gen, h] : heights) {
        const auto t = b.find_tower(parse_monomial(gen, ctx));
        ASSERT_TRUE(t) << gen;
        EXPECT_EQ(b.towers[*t].height, h) << gen;
        EXPECT_EQ(degree_of(b.towers[*t].gen, ctx), deg) << gen;
        deg += 2;
    }
}

TEST(Cores, A5ExoticExtension) {
    const PrimeCtx ctx(2);
    const Chart a = build_A(5, ctx);
    const auto t = a.find_tower(parse_monomial("y3 z3 z4", ctx));
    ASSERT_TRUE(t);
    EXPECT_EQ(a.degree({*t, 0}), 116);
    EXPECT_EQ(targets_of(a, "y3 z3 z4", 0), (std::vector<std::string>{"v^1 y3 z2^2 z4", "v^8 z4^2"}));
    EXPECT_EQ(a.edge_from({*t, 0})->kind, EdgeKind::Exotic);
}

TEST(Cores, S58) {
    const PrimeCtx ctx(2);
    const Chart s = build_S(5, 8, ctx);
    ASSERT_EQ(s.towers.size(), 3u);
    std::vector<int64_t> degs;
    for (const auto& t : s.towers) {
        EXPECT_EQ(t.height, 6);
        degs.push_back(degree_of(t.gen, ctx));
    }
    std::sort(degs.begin(), degs.end());
    EXPECT_EQ(degs, (std::vector<int64_t>{1034, 1036, 1038}));
    for (int i : {2, 3, 4}) EXPECT_TRUE(s.find_tower(z_comp(i, 8, ctx))) << i;
}

TEST(Cores, ChainGroups) {
    for (int p : {2, 3}) {
        const PrimeCtx ctx(p);
        for (int k = 1; k <= 3; ++k) {
            const int ell = 2 * k + 2;
            const Chart s = build_S(k, ell, ctx);
            const auto t = s.find_tower(z_comp(ctx.k0, ell, ctx));
            ASSERT_TRUE(t);
            EXPECT_TRUE(group_at(s, s.degree({*t, k})).contains(AbelianPGroup(p, {k + 1}))) << p << " " << k;
        }
    }
}

TEST(Assembly, EvenPartLowDegrees) {
    const PrimeCtx ctx(2);
    const Chart e = KuModel(ctx).even_part(18);
    auto has = [&](const char* gen, int64_t h) {
        const auto t = e.find_tower(parse_monomial(gen, ctx));
        return t && e.towers[*t].height == h;
    };
    EXPECT_TRUE(has("y0 z0", 1));
    EXPECT_TRUE(has("z1", 2));
    EXPECT_TRUE(has("y0 y1 z0", 1));
    const Chart a2 = build_A(2, ctx);
    const auto z2 = a2.find_tower(parse_monomial("z2", ctx));
    ASSERT_TRUE(z2);
    EXPECT_TRUE(has("z2", a2.towers[*z2].height));
    EXPECT_FALSE(e.find_tower(parse_monomial("y1 z2", ctx)));
}

TEST(Assembly, SummandShapes) {
    const PrimeCtx ctx(2);
    KuModel ku(ctx);
    for (const auto& s : ku.even_summands(0, 400)) {
        if (s.core.kind == CoreKey::B) EXPECT_FALSE(s.shift.is_one());
        if (s.core.kind == CoreKey::B) EXPECT_GE(s.core.k, 2);
    }
    bool q_s12 = false;
    for (const auto& s : ku.odd_summands(0, 200)) {
        ASSERT_EQ(s.core.kind, CoreKey::S);
        if (s.shift == q_gen() && s.core.k == 1 && s.core.ell == 2) {
            q_s12 = true;
            const Chart& c = ku.core(s.core);
            ASSERT_EQ(c.towers.size(), 1u);
            EXPECT_EQ(degree_of(c.towers[0].gen, ctx) + 9, 27);
            EXPECT_EQ(c.towers[0].height, 2);
        }
        if (s.shift == q_gen() * y_gen(1, 1, ctx)) EXPECT_GE(s.core.ell, 3);
    }
    EXPECT_TRUE(q_s12);
}

TEST(Assembly, OddPartHasOddDegrees) {
    for (int p : {2, 3}) {
        const PrimeCtx ctx(p);
        const Chart o = KuModel(ctx).odd_part(160);
        for (const auto& t : o.towers)
            for (int64_t a = 0; t.has(a) && a < 50; ++a) EXPECT_EQ(o.degree({t.id, a}) % 2 != 0, true);
    }
}

TEST(Groups, KnownDegrees) {
    KuModel ku(2);
    for (int n : {1, 3, 5, 7}) EXPECT_TRUE(ku.group_at(n).trivial()) << n;
    EXPECT_EQ(ku.group_at(8), AbelianPGroup(2, {2}));
    EXPECT_TRUE(ku.group_at(82).contains(AbelianPGroup(2, {3, 1})));
    KuModel three(3);
    const Chart e = three.even_part(12);
    EXPECT_TRUE(e.find_tower(parse_monomial("y0^2 z0", three.ctx())));
    EXPECT_EQ(degree_of(parse_monomial("y0^2 z0", three.ctx()), three.ctx()), 12);
}

TEST(Groups, HomologyShift) {
    for (int p : {2, 3}) {
        KuModel ku(p);
        for (int n = 0; n <= 60; ++n) EXPECT_EQ(ku.homology_group_at(n), ku.group_at(n + 2 * p));
    }
}

TEST(Groups, LengthMatchesDots) {
    KuModel ku(2);
    for (int n = 0; n <= 120; ++n) EXPECT_EQ(ku.group_at(n).length(), ku.dot_count(n)) << n;
}

TEST(AssociatedGraded, MatchesAssembly) {
    for (int p : {2, 3}) {
        const AuditReport r = assoc_graded_audit(120, PrimeCtx(p));
        EXPECT_TRUE(r.pass()) << r.failures();
    }
}

TEST(Duality, SelfDualBk) {
    const DualityReport r = duality_audit(3, PrimeCtx(2));
    ASSERT_EQ(r.rows.size(), 2u);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.checks, 0);
        EXPECT_EQ(row.failures, 0) << row.k;
    }
}
