#include <gtest/gtest.h>
#include <kuengine/ass_engine.hpp>
#include <kuengine/audits.hpp>

#include <algorithm>

using namespace kuengine;

namespace {

bool has_differential(const SSResult& r, int page, const std::string& src, const std::string& dst) {
    return std::any_of(r.differentials.begin(), r.differentials.end(), [&](const AppliedDifferential& d) {
        return d.page == page && d.source == src && d.target == dst;
    });
}

const E2Tower* find(const std::vector<E2Tower>& towers, const std::string& label, const PrimeCtx& ctx) {
    for (const auto& t : towers)
        if (tower_label(t, ctx) == label) return &t;
    return nullptr;
}

}  // namespace

TEST(E2, LowClasses) {
    const PrimeCtx two(2), three(3);
    const auto t2 = e2_towers(12, 3, two);
    const E2Tower* q = find(t2, "q", two);
    ASSERT_TRUE(q);
    EXPECT_EQ(degree_of(q->gen, two), 9);
    EXPECT_EQ(q->vstart, 2);
    // v^2 q sits at codegree 5, filtration 2
    EXPECT_EQ(degree_of(q->gen, two) - two.vstep() * 2, 5);

    const auto t3 = e2_towers(12, 3, three);
    const E2Tower* q3 = find(t3, "q", three);
    ASSERT_TRUE(q3);
    EXPECT_EQ(q3->vstart, 1);
    EXPECT_EQ(degree_of(q3->gen, three) - three.vstep(), 7);
    for (const auto& t : t2) EXPECT_TRUE(valid_e2_tower(t, two)) << tower_label(t, two);
}

TEST(Differentials, LowestFamily) {
    const PrimeCtx two(2), three(3);
    const SSResult r2 = SpectralSequence(two, 0, 40).run();
    EXPECT_TRUE(has_differential(r2, 2, "y1", "q"));
    EXPECT_TRUE(has_differential(r2, 3, "y2", "h0 q y1"));
    EXPECT_FALSE(has_differential(r2, 2, "y2", "h0 q y1"));
    const SSResult r3 = SpectralSequence(three, 0, 40).run();
    EXPECT_TRUE(has_differential(r3, 2, "y1", "h0 q"));
    EXPECT_TRUE(has_differential(r3, 2, "y1^2", "h0 q y1"));
    EXPECT_TRUE(has_differential(r3, 3, "y2", "h0^2 q y1^2"));
}

TEST(Differentials, ZClassesArePermanent) {
    const PrimeCtx ctx(2);
    const SSResult r = SpectralSequence(ctx, 0, 80).run();
    for (const auto& d : r.differentials) {
        const bool pure_z = d.source.find('y') == std::string::npos && d.source.find('q') == std::string::npos;
        EXPECT_FALSE(pure_z) << d.source;
    }
    EXPECT_EQ(r.square_failures, 0);
    EXPECT_EQ(r.linearity_failures, 0);
}

TEST(Einfty, SmallWindow) {
    const EinftyReport r = einfty_audit(40, PrimeCtx(2));
    EXPECT_TRUE(r.pass()) << r.failures();
    EXPECT_GT(r.rows.size(), 20u);
}

TEST(Einfty, OddPrimeWindow) {
    const EinftyReport r = einfty_audit(80, PrimeCtx(3));
    EXPECT_TRUE(r.pass()) << r.failures();
}

TEST(Matching, NoOrphans) {
    for (int p : {2, 3}) {
        const MatchingReport m = matching_audit(0, 60, PrimeCtx(p));
        EXPECT_TRUE(m.orphans.empty()) << (m.orphans.empty() ? "" : m.orphans.front());
        EXPECT_TRUE(m.doubles.empty());
        EXPECT_TRUE(m.bad_targets.empty());
        EXPECT_GT(m.sources, 0);
        EXPECT_GT(m.targets, 0);
    }
}
