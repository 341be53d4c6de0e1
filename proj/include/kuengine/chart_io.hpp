#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chart.hpp"
#include "k1_reference.hpp"

namespace kuengine {

using Json = nlohmann::ordered_json;

inline constexpr int kChartSchemaVersion = 1;

inline Json chart_to_json(const Chart& c) {
    Json towers = Json::array(), edges = Json::array();
    for (const auto& t : c.towers)
        towers.push_back({{"id", t.id},
                          {"gen", render(t.gen, c.ctx)},
                          {"base_s", t.base_s},
                          {"height", t.height == kUnbounded ? Json(nullptr) : Json(t.height)}});
    for (const auto& e : c.edges) {
        Json dst = Json::array();
        for (const auto& d : e.dst) dst.push_back({d.tower, d.a});
        edges.push_back({{"src", {e.src.tower, e.src.a}}, {"dst", dst}, {"kind", kind_name(e.kind)}});
    }
    return {{"schema_version", kChartSchemaVersion}, {"prime", c.ctx.p}, {"towers", towers}, {"edges", edges}};
}

inline Chart chart_from_json(const Json& j) {
    if (j.value("schema_version", 0) != kChartSchemaVersion) throw std::invalid_argument("unsupported chart schema_version");
    const int p = j.at("prime").get<int>();
    if (!supported_prime(p)) throw std::invalid_argument("unsupported prime in chart");
    PrimeCtx ctx(p);
    Chart c(ctx);
    for (const auto& t : j.at("towers")) {
        const int id = t.at("id").get<int>();
        if (id != static_cast<int>(c.towers.size())) throw std::invalid_argument("tower ids must be 0..n-1 in order");
        const auto& h = t.at("height");
        c.add_tower(parse_monomial(t.at("gen").get<std::string>(), ctx), h.is_null() ? kUnbounded : h.get<int64_t>(),
                    t.at("base_s").get<int>());
    }
    for (const auto& e : j.at("edges")) {
        Dot src{e.at("src").at(0).get<int>(), e.at("src").at(1).get<int64_t>()};
        for (const auto& d : e.at("dst")) {
            Dot dst{d.at(0).get<int>(), d.at(1).get<int64_t>()};
            if (!c.exists(src) || !c.exists(dst)) throw std::invalid_argument("chart edge references a missing dot");
            c.add_edge(src, dst);
        }
    }
    c.validate();
    return c;
}

inline Json report_to_json(const AuditReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows) rows.push_back({{"degree", x.degree}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"pass", x.pass()}});
    return rows;
}

// ---- rendering ----

struct DocDot {
    int64_t degree;
    int s;
    std::string label;
    bool dashed = false;
};

struct DocLine {
    std::string kind;  // v, h0, exotic
    size_t from, to;
};

struct ChartDocument {
    int prime = 2;
    int64_t lo = 0, hi = 0;
    std::string source = "closed-form";
    std::string title;
    std::vector<DocDot> dots;
    std::vector<DocLine> lines;
};

namespace detail {

inline std::string dot_label(const Chart& c, const Dot& d) {
    std::string s = d.a == 0 ? "" : (d.a == 1 ? "v " : "v^" + std::to_string(d.a) + " ");
    return s + render(c.towers[d.tower].gen, c.ctx);
}

// adds the chart's dots in [lo, hi]; dots whose key is in `skip` are left out
inline std::map<Dot, size_t> add_chart(ChartDocument& doc, const Chart& c, bool dashed,
                                       const std::vector<std::string>* skip = nullptr) {
    std::map<Dot, size_t> idx;
    for (const auto& t : c.towers)
        for (int64_t a = 0; t.has(a); ++a) {
            const Dot d{t.id, a};
            const int64_t n = c.degree(d);
            if (n < doc.lo) break;
            if (n > doc.hi) continue;
            std::string label = dot_label(c, d);
            if (skip && std::binary_search(skip->begin(), skip->end(), label)) continue;
            idx[d] = doc.dots.size();
            doc.dots.push_back({n, c.filtration(d), std::move(label), dashed});
        }
    for (const auto& [d, i] : idx) {
        auto up = idx.find(Dot{d.tower, d.a + 1});
        if (up != idx.end()) doc.lines.push_back({"v", i, up->second});
    }
    for (const auto& e : c.edges) {
        auto s = idx.find(e.src);
        if (s == idx.end()) continue;
        for (const auto& t : e.dst) {
            auto it = idx.find(t);
            if (it == idx.end()) continue;
            const int jump = c.filtration(t) - c.filtration(e.src);
            doc.lines.push_back({jump == 1 ? "h0" : "exotic", s->second, it->second});
        }
    }
    return idx;
}

}  // namespace detail

inline ChartDocument make_document(const Chart& c, int64_t lo, int64_t hi, const std::string& title = "") {
    if (hi < lo) throw std::invalid_argument("empty degree window");
    ChartDocument doc;
    doc.prime = c.ctx.p;
    doc.lo = lo;
    doc.hi = hi;
    doc.title = title;
    detail::add_chart(doc, c, false);
    return doc;
}

// `base` solid, dots of `over` missing from `base` dashed
inline ChartDocument make_overlay(const Chart& base, const Chart& over, int64_t lo, int64_t hi, const std::string& title = "") {
    ChartDocument doc = make_document(base, lo, hi, title);
    std::vector<std::string> have;
    for (const auto& d : doc.dots) have.push_back(d.label);
    std::sort(have.begin(), have.end());
    detail::add_chart(doc, over, true, &have);
    return doc;
}

inline Json document_to_json(const ChartDocument& doc) {
    Json dots = Json::array(), lines = Json::array();
    for (const auto& d : doc.dots) dots.push_back({{"degree", d.degree}, {"s", d.s}, {"label", d.label}, {"dashed", d.dashed}});
    for (const auto& l : doc.lines) lines.push_back({{"kind", l.kind}, {"from", l.from}, {"to", l.to}});
    return {{"prime", doc.prime}, {"window", {doc.lo, doc.hi}}, {"source", doc.source}, {"title", doc.title},
            {"dots", dots}, {"lines", lines}};
}

namespace detail {

struct Layout {
    double unit = 18.0, margin = 40.0;
    int64_t lo, hi;
    int smax;
    // several dots at one (degree, s) are spread horizontally
    std::vector<std::pair<double, double>> pos;

    Layout(const ChartDocument& doc) : lo(doc.lo), hi(doc.hi), smax(0) {
        for (const auto& d : doc.dots) smax = std::max(smax, d.s);
        std::map<std::pair<int64_t, int>, int> count, seen;
        for (const auto& d : doc.dots) ++count[{d.degree, d.s}];
        for (const auto& d : doc.dots) {
            const auto key = std::pair(d.degree, d.s);
            const int k = seen[key]++, m = count[key];
            const double off = m > 1 ? (k - (m - 1) / 2.0) * unit * 0.3 : 0.0;
            pos.push_back({x(d.degree) + off, y(d.s)});
        }
    }
    double x(int64_t n) const { return margin + (hi - n) * unit; }
    double y(int s) const { return margin + (smax - s) * unit; }
    double width() const { return 2 * margin + (hi - lo) * unit; }
    double height() const { return 2 * margin + smax * unit; }
};

inline std::string fmt(double v) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(1) << v;
    return o.str();
}

inline std::string escape_xml(const std::string& s) {
    std::string o;
    for (char ch : s) {
        switch (ch) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '"': o += "&quot;"; break;
            default: o += ch;
        }
    }
    return o;
}

}  // namespace detail

// degrees increase from right to left
inline std::string render_svg(const ChartDocument& doc) {
    detail::Layout L(doc);
    using detail::fmt;
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(L.width()) << "\" height=\"" << fmt(L.height() + 20)
      << "\">\n";
    if (!doc.title.empty()) o << "<title>" << detail::escape_xml(doc.title) << "</title>\n";
    const double base = L.y(0) + 12;
    o << "<line x1=\"" << fmt(L.x(doc.hi)) << "\" y1=\"" << fmt(L.y(0) + 6) << "\" x2=\"" << fmt(L.x(doc.lo))
      << "\" y2=\"" << fmt(L.y(0) + 6) << "\" stroke=\"#999\"/>\n";
    const int64_t tick = std::max<int64_t>(2, ((doc.hi - doc.lo) / 20 + 1) & ~int64_t(1));
    for (int64_t n = doc.lo + ((doc.lo % 2) + 2) % 2; n <= doc.hi; n += tick)
        o << "<text x=\"" << fmt(L.x(n)) << "\" y=\"" << fmt(base + 8) << "\" font-size=\"9\" text-anchor=\"middle\">" << n
          << "</text>\n";
    for (const auto& l : doc.lines) {
        const auto [x1, y1] = L.pos[l.from];
        const auto [x2, y2] = L.pos[l.to];
        const char* color = l.kind == "exotic" ? "red" : (l.kind == "h0" ? "black" : "#555");
        o << "<line class=\"" << l.kind << "\" x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
          << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\"";
        if (doc.dots[l.from].dashed || doc.dots[l.to].dashed) o << " stroke-dasharray=\"3,2\"";
        o << "/>\n";
    }
    for (size_t i = 0; i < doc.dots.size(); ++i) {
        const auto& d = doc.dots[i];
        const auto [x, y] = L.pos[i];
        o << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"2.5\"";
        if (d.dashed) o << " fill=\"white\" stroke=\"black\" stroke-dasharray=\"1,1\"";
        o << "><title>" << detail::escape_xml(d.label) << " (" << d.degree << "," << d.s << ")</title></circle>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline std::string render_tikz(const ChartDocument& doc) {
    detail::Layout L(doc);
    using detail::fmt;
    std::ostringstream o;
    auto X = [&](double px) { return fmt((px - L.margin) / L.unit); };
    auto Y = [&](double py) { return fmt((L.margin + L.smax * L.unit - py) / L.unit); };
    o << "\\begin{tikzpicture}[scale=.35]\n";
    o << "\\draw (" << X(L.x(doc.hi)) << ",-.5) -- (" << X(L.x(doc.lo)) << ",-.5);\n";
    for (const auto& l : doc.lines) {
        const auto [x1, y1] = L.pos[l.from];
        const auto [x2, y2] = L.pos[l.to];
        std::string style = l.kind == "exotic" ? "[color=red]" : "";
        if (doc.dots[l.from].dashed || doc.dots[l.to].dashed) style = style.empty() ? "[dashed]" : "[color=red,dashed]";
        o << "\\draw " << style << " (" << X(x1) << "," << Y(y1) << ") -- (" << X(x2) << "," << Y(y2) << ");\n";
    }
    for (size_t i = 0; i < doc.dots.size(); ++i) {
        const auto [x, y] = L.pos[i];
        o << "\\fill" << (doc.dots[i].dashed ? "[gray]" : "") << " (" << X(x) << "," << Y(y) << ") circle (4pt);\n";
    }
    o << "\\end{tikzpicture}\n";
    return o.str();
}

}  // namespace kuengine
