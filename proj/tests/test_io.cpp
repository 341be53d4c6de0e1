#include <gtest/gtest.h>
#include <kuengine/kuengine.hpp>

#include <regex>
#include <set>

using namespace kuengine;

TEST(ChartJson, RoundTrip) {
    for (int p : {2, 3}) {
        const PrimeCtx ctx(p);
        KuModel ku(ctx);
        for (const Chart& c : {build_A(p == 2 ? 5 : 3, ctx), build_B(p == 2 ? 5 : 3, ctx), build_S(2, 5, ctx),
                               ku.even_part(60), ku.odd_part(60)}) {
            const Json j = chart_to_json(c);
            EXPECT_EQ(j.at("schema_version"), kChartSchemaVersion);
            const Chart back = chart_from_json(j);
            EXPECT_EQ(chart_to_json(back).dump(), j.dump());
            EXPECT_EQ(back.dot_count(), c.dot_count());
        }
    }
}

TEST(ChartJson, UnboundedHeightIsNull) {
    const PrimeCtx ctx(2);
    Chart c(ctx);
    c.add_tower(z_gen(2), kUnbounded);
    const Json j = chart_to_json(c);
    EXPECT_TRUE(j["towers"][0]["height"].is_null());
    EXPECT_EQ(chart_from_json(j).towers[0].height, kUnbounded);
}

TEST(ChartJson, RejectsBadInput) {
    const PrimeCtx ctx(2);
    Json j = chart_to_json(build_A(2, ctx));
    Json bad_edge = j;
    bad_edge["edges"].push_back({{"src", {0, 0}}, {"dst", {{0, 99}}}, {"kind", "h0"}});
    EXPECT_THROW(chart_from_json(bad_edge), std::invalid_argument);
    Json bad_version = j;
    bad_version["schema_version"] = 99;
    EXPECT_THROW(chart_from_json(bad_version), std::invalid_argument);
    Json bad_prime = j;
    bad_prime["prime"] = 11;
    EXPECT_THROW(chart_from_json(bad_prime), std::invalid_argument);
}

TEST(Documents, A1) {
    const PrimeCtx ctx(2);
    const ChartDocument doc = make_document(build_A(1, ctx), 0, 20);
    ASSERT_EQ(doc.dots.size(), 3u);
    std::multiset<std::pair<int64_t, int>> got;
    for (const auto& d : doc.dots) got.insert({d.degree, d.s});
    EXPECT_EQ(got, (std::multiset<std::pair<int64_t, int>>{{8, 0}, {8, 1}, {10, 0}}));
    int p_lines = 0;
    for (const auto& l : doc.lines) p_lines += l.kind != "v";
    EXPECT_EQ(p_lines, 1);
}

TEST(Documents, LinesReferenceDots) {
    const PrimeCtx ctx(2);
    const ChartDocument doc = make_overlay(build_B(5, ctx), build_A(5, ctx), 60, 140);
    int dashed = 0;
    for (const auto& d : doc.dots) dashed += d.dashed;
    EXPECT_GT(dashed, 0);
    for (const auto& l : doc.lines) {
        EXPECT_LT(l.from, doc.dots.size());
        EXPECT_LT(l.to, doc.dots.size());
        const int64_t drop = doc.dots[l.from].degree - doc.dots[l.to].degree;
        EXPECT_EQ(drop, l.kind == "v" ? ctx.vstep() : 0);
    }
    int exotic = 0;
    for (const auto& l : doc.lines) exotic += l.kind == "exotic";
    EXPECT_GT(exotic, 0);
}

TEST(Rendering, SvgRightToLeft) {
    const PrimeCtx ctx(2);
    const ChartDocument doc = make_document(build_A(3, ctx), 10, 40);
    const std::string svg = render_svg(doc);
    std::regex tick(R"re(<text x="([0-9.]+)"[^>]*>(\d+)</text>)re");
    double prev_x = -1;
    int prev_n = -1, ticks = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tick); it != std::sregex_iterator(); ++it) {
        const double x = std::stod((*it)[1]);
        const int n = std::stoi((*it)[2]);
        if (prev_n >= 0) {
            EXPECT_GT(n, prev_n);
            EXPECT_LT(x, prev_x);
        }
        prev_x = x;
        prev_n = n;
        ++ticks;
    }
    EXPECT_GT(ticks, 3);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(Rendering, Deterministic) {
    const PrimeCtx ctx(3);
    const Chart c = KuModel(ctx).even_part(80);
    const ChartDocument a = make_document(c, 0, 80), b = make_document(c, 0, 80);
    EXPECT_EQ(render_svg(a), render_svg(b));
    EXPECT_EQ(render_tikz(a), render_tikz(b));
    EXPECT_EQ(document_to_json(a).dump(), document_to_json(b).dump());
    EXPECT_EQ(chart_to_json(c).dump(), chart_to_json(KuModel(ctx).even_part(80)).dump());
    EXPECT_NE(render_tikz(a).find("\\begin{tikzpicture}"), std::string::npos);
}

TEST(Reports, AuditRows) {
    const AuditReport r = bockstein_audit(20, PrimeCtx(2));
    const Json j = report_to_json(r);
    ASSERT_EQ(j.size(), r.rows.size());
    for (const auto& row : j) {
        EXPECT_TRUE(row.contains("degree"));
        EXPECT_EQ(row["pass"], row["lhs"] == row["rhs"]);
    }
}

TEST(Groups, CompactRendering) {
    EXPECT_EQ(AbelianPGroup(2, {3, 1, 1}).compact(), "Z/8+(Z/2)^2");
    EXPECT_EQ(AbelianPGroup(3, {}).compact(), "0");
    EXPECT_EQ(AbelianPGroup(3, {2}).str(), "Z/3^2");
}
