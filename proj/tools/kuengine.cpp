#include <CLI11.hpp>
#include <kuengine/kuengine.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

using namespace kuengine;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int prime = 2;
    std::optional<int64_t> from, to;
    std::string window;
    std::string format;
    std::string out;
    bool homology = false;
    bool include_free = false;
    bool summands = false;

    // resolves --window and --from/--to into [lo, hi]
    std::pair<int64_t, int64_t> range(int64_t def_lo, int64_t def_hi) const {
        int64_t lo = from.value_or(def_lo), hi = to.value_or(def_hi);
        if (!window.empty()) {
            std::smatch m;
            static const std::regex re(R"(^(-?\d+):(-?\d+)$)");
            if (!std::regex_match(window, m, re)) throw UsageError("--window expects a:b");
            lo = std::stoll(m[1]);
            hi = std::stoll(m[2]);
        }
        if (hi < lo) throw UsageError("empty degree window");
        return {lo, hi};
    }
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    const std::filesystem::path target(cfg.out), tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << text;
    }
    std::filesystem::rename(tmp, target);
}

int cmd_groups(const RunConfig& cfg) {
    const PrimeCtx ctx(cfg.prime);
    const auto [lo, hi] = cfg.range(0, 0);
    KuModel ku(ctx);
    const int64_t offset = cfg.homology ? 2 * ctx.p : 0;
    PSeries triv;
    if (cfg.include_free) triv = trivial_class_ps(ctx.p, static_cast<int>(std::max<int64_t>(hi + offset, 0)));
    const bool json = cfg.format == "json";
    Json rows = Json::array();
    std::ostringstream text;
    for (int64_t n = lo; n <= hi; ++n) {
        const int64_t m = n + offset;
        AbelianPGroup g = ku.group_at(m);
        const int64_t free = cfg.include_free && m >= 0 ? triv[static_cast<int>(m)] : 0;
        if (free) g += AbelianPGroup(ctx.p, std::vector<int>(static_cast<size_t>(free), 1));
        Json row = {{"degree", n}, {"group", g.compact()}, {"exponents", g.exps}};
        if (cfg.include_free) row["trivial"] = free;
        text << n << '\t' << g.compact();
        if (cfg.include_free) text << "\ttrivial=" << free;
        text << '\n';
        if (cfg.summands) {
            Json parts = Json::array();
            for (const auto& s : ku.summands(m, m)) {
                AbelianPGroup c = ku.core_group(s.core, m - degree_of(s.shift, ctx));
                if (c.trivial()) continue;
                const std::string name = render(s.shift, ctx) + " " + s.core.str();
                parts.push_back({{"summand", name}, {"group", c.compact()}});
                text << "  " << name << '\t' << c.compact() << '\n';
            }
            row["summands"] = parts;
        }
        rows.push_back(row);
    }
    emit(cfg, json ? rows.dump(2) + "\n" : text.str());
    return 0;
}

Chart select(const std::string& sel, const KuModel& ku, int64_t max_degree) {
    const PrimeCtx& ctx = ku.ctx();
    std::smatch m;
    static const std::regex ab(R"(^([AB]):(\d+)$)"), s(R"(^S:(\d+):(\d+)$)");
    if (std::regex_match(sel, m, ab)) {
        const int k = std::stoi(m[2]);
        if (k < 1 || k > 8 || (m[1] == "B" && k < ctx.k0)) throw UsageError("selector out of range: " + sel);
        return m[1] == "A" ? build_A(k, ctx) : build_B(k, ctx);
    }
    if (std::regex_match(sel, m, s)) {
        const int k = std::stoi(m[1]), ell = std::stoi(m[2]);
        if (k < 1 || ell <= k || ell >= kMaxZ) throw UsageError("selector out of range: " + sel);
        return build_S(k, ell, ctx);
    }
    if (sel == "full-even") return ku.even_part(max_degree);
    if (sel == "full-odd") return ku.odd_part(max_degree);
    throw UsageError("unknown selector: " + sel);
}

int cmd_chart(const RunConfig& cfg, const std::vector<std::string>& selectors, std::optional<int64_t> max_degree) {
    const PrimeCtx ctx(cfg.prime);
    KuModel ku(ctx);
    const int64_t D = max_degree.value_or(cfg.to.value_or(100));
    std::vector<Chart> charts;
    for (const auto& sel : selectors) charts.push_back(select(sel, ku, D));

    // A:k together with B:k draws B_k solid and the rest of A_k dashed
    std::optional<std::pair<size_t, size_t>> overlay;
    if (selectors.size() == 2) {
        const auto &s0 = selectors[0], &s1 = selectors[1];
        const bool ab = (s0[0] == 'A' && s1[0] == 'B') || (s0[0] == 'B' && s1[0] == 'A');
        if (ab && s0.substr(1) == s1.substr(1)) overlay = s0[0] == 'B' ? std::pair<size_t, size_t>{0, 1} : std::pair<size_t, size_t>{1, 0};
    }

    std::vector<const Chart*> ptrs;
    for (const auto& c : charts) ptrs.push_back(&c);
    const Chart merged = overlay ? charts[overlay->second] : (ptrs.size() == 1 ? charts[0] : direct_sum(ptrs));

    const std::string fmt = cfg.format.empty() ? "json" : cfg.format;
    if (fmt == "json") {
        emit(cfg, chart_to_json(merged).dump(2) + "\n");
        return 0;
    }
    auto [dlo, dhi] = merged.towers.empty() ? std::pair<int64_t, int64_t>{0, 0} : merged.degree_span();
    if (max_degree) dhi = std::min(dhi, *max_degree);
    const auto [lo, hi] = cfg.range(std::max<int64_t>(dlo, 0), dhi);
    std::string title;
    for (const auto& s : selectors) title += (title.empty() ? "" : " ") + s;
    ChartDocument doc = overlay ? make_overlay(charts[overlay->first], charts[overlay->second], lo, hi, title)
                                : make_document(merged, lo, hi, title);
    if (overlay) doc.source = "overlay";
    if (fmt == "svg") emit(cfg, render_svg(doc));
    else if (fmt == "tikz") emit(cfg, render_tikz(doc));
    else if (fmt == "document") emit(cfg, document_to_json(doc).dump(2) + "\n");
    else throw UsageError("unknown format: " + fmt);
    return 0;
}

struct AuditArgs {
    std::string which;
    std::optional<int> max, max_degree, max_s, max_k;
};

Json summary(const AuditReport& r) {
    Json failed = Json::array();
    for (const auto& x : r.rows)
        if (!x.pass()) failed.push_back({{"degree", x.degree}, {"lhs", x.lhs}, {"rhs", x.rhs}});
    return {{"checked", r.rows.size()}, {"failures", r.failures()}, {"failed", failed}};
}

int cmd_audit(const RunConfig& cfg, const AuditArgs& a) {
    const PrimeCtx ctx(cfg.prime);
    const int odd = ctx.p != 2;
    auto deg = [&](int def) { return a.max_degree.value_or(a.max.value_or(def)); };
    Json out = {{"audit", a.which}, {"prime", ctx.p}};
    bool pass = false;
    if (a.which == "bockstein") {
        const int n = deg(odd ? 300 : 200);
        AuditReport r = bockstein_audit(n, ctx);
        out["max_degree"] = n;
        out["rows"] = report_to_json(r);
        pass = r.pass();
    } else if (a.which == "theorem61") {
        if (!odd) throw UsageError("unsupported combination: theorem61 requires an odd prime");
        const int n = deg(200);
        AuditReport r = g_family_audit(n, ctx);
        out["max_degree"] = n;
        out["rows"] = report_to_json(r);
        pass = r.pass();
    } else if (a.which == "matching") {
        const int n = deg(odd ? 150 : 120);
        MatchingReport r = matching_audit(0, n, ctx);
        out["max_degree"] = n;
        out["towers"] = r.towers;
        out["sources"] = r.sources;
        out["targets"] = r.targets;
        out["orphans"] = r.orphans;
        out["doubles"] = r.doubles;
        out["bad_targets"] = r.bad_targets;
        pass = r.pass();
    } else if (a.which == "einfty") {
        const int n = deg(odd ? 150 : 120);
        EinftyReport r = einfty_audit(n, ctx);
        Json rows = Json::array();
        for (const auto& x : r.rows)
            rows.push_back({{"degree", x.degree}, {"s", x.s}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"pass", x.pass()}});
        out["max_degree"] = n;
        out["differentials"] = r.differentials;
        out["linearity_failures"] = r.linearity_failures;
        out["square_failures"] = r.square_failures;
        out["rows"] = rows;
        pass = r.pass();
    } else if (a.which == "duality") {
        const int k = a.max_k.value_or(a.max.value_or(4));
        DualityReport d = duality_audit(k, ctx);
        Json rows = Json::array();
        for (const auto& r : d.rows)
            rows.push_back({{"k", r.k}, {"shift", r.shift}, {"checks", r.checks}, {"failures", r.failures}});
        AuditReport h = homology_shift_audit(150, ctx);
        out["duality"] = rows;
        out["homology_shift"] = summary(h);
        pass = d.pass() && h.pass();
    } else if (a.which == "margolis") {
        const int n = deg(60);
        auto r = margolis_audit(n, ctx);
        out["max_degree"] = n;
        out["Q0"] = report_to_json(r[0]);
        out["Q1"] = report_to_json(r[1]);
        pass = r[0].pass() && r[1].pass();
    } else if (a.which == "ext") {
        const int n = deg(odd ? 60 : 56), s = a.max_s.value_or(odd ? 8 : 10);
        auto bad = ext_oracle_audit(n, s, ctx);
        Json rows = Json::array();
        for (const auto& x : bad) rows.push_back({{"degree", x.n}, {"s", x.s}, {"oracle", x.oracle}, {"closed_form", x.closed_form}});
        out["max_degree"] = n;
        out["max_s"] = s;
        out["mismatches"] = rows;
        pass = bad.empty();
    } else if (a.which == "ps") {
        const int n = deg(80);
        AuditReport r = ps_audit(n, ctx);
        out["max_degree"] = n;
        out["rows"] = report_to_json(r);
        pass = r.pass();
    } else {
        throw UsageError("unknown audit: " + a.which);
    }
    out["pass"] = pass;
    emit(cfg, out.dump(2) + "\n");
    return pass ? 0 : 1;
}

int cmd_ps(const RunConfig& cfg, const std::string& which) {
    const auto [lo, hi] = cfg.range(0, 100);
    const int D = static_cast<int>(std::max<int64_t>(hi, 0));
    PSeries s;
    if (which == "free") s = free_part_ps(cfg.prime, D);
    else if (which == "generators") s = free_generator_ps(cfg.prime, D);
    else if (which == "trivial") s = trivial_class_ps(cfg.prime, D);
    else throw UsageError("unknown series: " + which);
    if (cfg.format == "json") {
        Json arr = Json::array();
        for (int64_t n = std::max<int64_t>(lo, 0); n <= hi; ++n) arr.push_back({n, s[static_cast<int>(n)]});
        emit(cfg, arr.dump() + "\n");
    } else {
        std::ostringstream o;
        for (int64_t n = std::max<int64_t>(lo, 0); n <= hi; ++n) o << n << ',' << s[static_cast<int>(n)] << '\n';
        emit(cfg, o.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ku-cohomology of K(Z/p,2): groups, charts, audits and Poincare series"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--prime", cfg.prime, "prime (2, 3, 5 or 7)")->check(CLI::IsMember({2, 3, 5, 7}));
        sub->add_option("--from", cfg.from, "first degree");
        sub->add_option("--to", cfg.to, "last degree");
        sub->add_option("--window", cfg.window, "degree window a:b");
        sub->add_option("--out", cfg.out, "output path");
    };

    auto* groups = app.add_subcommand("groups", "groups by degree");
    common(groups);
    groups->add_flag("--homology", cfg.homology, "homology ku_n instead of cohomology");
    groups->add_flag("--include-free", cfg.include_free, "add the trivial summand");
    groups->add_flag("--summands", cfg.summands, "list nonzero summand contributions");
    groups->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));

    auto* chart = app.add_subcommand("chart", "chart of a module");
    common(chart);
    std::vector<std::string> selectors;
    std::optional<int64_t> max_degree;
    chart->add_option("selector", selectors, "A:k, B:k, S:k:l, full-even or full-odd")->required();
    chart->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "svg", "tikz", "document"}));
    chart->add_option("--max-degree", max_degree, "degree cutoff for full charts");

    auto* audit = app.add_subcommand("audit", "consistency audits; exit 0 iff all checks pass");
    common(audit);
    AuditArgs aa;
    audit->add_option("--which", aa.which)
        ->required()
        ->check(CLI::IsMember({"bockstein", "matching", "einfty", "duality", "theorem61", "margolis", "ext", "ps"}));
    audit->add_option("--max", aa.max, "degree bound (or k bound for duality)");
    audit->add_option("--max-degree", aa.max_degree);
    audit->add_option("--max-s", aa.max_s);
    audit->add_option("--max-k", aa.max_k);

    auto* ps = app.add_subcommand("ps", "Poincare series of the free part");
    common(ps);
    std::string ps_which = "generators";
    ps->add_option("--which", ps_which)->check(CLI::IsMember({"free", "generators", "trivial"}));
    ps->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*groups) return cmd_groups(cfg);
        if (*chart) return cmd_chart(cfg, selectors, max_degree);
        if (*audit) return cmd_audit(cfg, aa);
        if (*ps) return cmd_ps(cfg, ps_which);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
