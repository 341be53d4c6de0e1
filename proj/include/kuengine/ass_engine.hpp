#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "chart.hpp"
#include "monomial.hpp"

namespace kuengine {

enum class E2Tag { Main, H0Tower, Special };

inline const char* tag_name(E2Tag t) {
    switch (t) {
        case E2Tag::Main: return "MAIN";
        case E2Tag::H0Tower: return "H0TOWER";
        default: return "SPECIAL";
    }
}

// a v-tower of the E2 term: v^b h0^c gen for vstart <= b < height
struct E2Tower {
    E2Tag tag = E2Tag::Main;
    Monomial gen;
    int h0 = 0;
    int64_t vstart = 0;
    int64_t height = kUnbounded;

    auto key() const { return std::tie(tag, gen, h0); }
    bool operator<(const E2Tower& o) const { return key() < o.key(); }
    bool operator==(const E2Tower& o) const { return key() == o.key(); }
    bool has(int64_t b) const { return b >= vstart && (height == kUnbounded || b < height); }
};

inline std::string tower_label(const E2Tower& t, const PrimeCtx& ctx) {
    std::string s = t.h0 ? (t.h0 == 1 ? "h0 " : "h0^" + std::to_string(t.h0) + " ") : "";
    return s + render(t.gen, ctx);
}

inline std::string element_label(const E2Tower& t, int64_t b, const PrimeCtx& ctx) {
    std::string s = b ? (b == 1 ? "v " : "v^" + std::to_string(b) + " ") : "";
    return s + tower_label(t, ctx);
}

namespace e2 {

inline int64_t y1_exp(const Monomial& m, const PrimeCtx& ctx) { return m.y / ctx.p; }

// exponent pattern of a first-summand z-part: z_a^{1..p} times Λ_{a+1}, a >= k0
inline bool main_zpart(const Monomial& m, const PrimeCtx& ctx) {
    int a = m.lowest_z();
    if (a < ctx.k0 || m.z[a] > ctx.p) return false;
    for (int j = a + 1; j < kMaxZ; ++j)
        if (m.z[j] >= ctx.p) return false;
    return true;
}

inline Monomial zpart(const Monomial& m) {
    Monomial z;
    z.z = m.z;
    return z;
}

// X = z_{a,a+λ} · m with m in TP_{p-1}[z_{a+λ}] Λ_{a+λ+1}
inline int w_length(const Monomial& x, const PrimeCtx& ctx) {
    int a = x.lowest_z();
    if (x.z[a] < ctx.p) return 0;
    int j = a + 1;
    while (j < kMaxZ && x.z[j] == ctx.p - 1) ++j;
    return j - a;
}

inline int nu_prime(int64_t i, const PrimeCtx& ctx) { return nu(i, ctx) + (ctx.p == 2 ? 0 : 1); }

}  // namespace e2

inline bool valid_e2_tower(const E2Tower& t, const PrimeCtx& ctx) {
    const Monomial& g = t.gen;
    if (t.h0 < 0) return false;
    switch (t.tag) {
        case E2Tag::Main:
            return t.h0 == 0 && g.y % ctx.p == 0 && e2::main_zpart(e2::zpart(g), ctx);
        case E2Tag::H0Tower:
            return !g.has_z() && g.y % ctx.p == 0 && (g.q || g.y > 0);
        case E2Tag::Special: {
            if (t.h0 || g.q) return false;
            Monomial rest;
            rest.y = g.y - g.y % ctx.p;
            Monomial low = g / rest;
            if (low == y_gen(0, ctx.p - 1, ctx) * z_gen(0)) return true;
            return ctx.p == 2 && low == z_gen(1);
        }
    }
    return false;
}

struct DiffRule {
    int family = 0;  // 1..4 in the order of the differential list
    int page = 0;
    E2Tower target;
    int64_t shift = 0;  // element b maps to target element b + shift
};

// the listed differential whose source is this tower, if any
inline std::optional<DiffRule> rule_from(const E2Tower& t, const PrimeCtx& ctx) {
    const int p = ctx.p;
    const auto find_tower = [&](E2Tag tag, const Monomial& g, int h0) {
        E2Tower r;
        r.tag = tag;
        r.gen = g;
        r.h0 = h0;
        if (tag == E2Tag::H0Tower && g.q) r.vstart = ctx.k0;
        return r;
    };
    if (t.tag == E2Tag::Special) return std::nullopt;
    if (t.tag == E2Tag::H0Tower) {
        if (!t.gen.q) {
            const int64_t i = e2::y1_exp(t.gen, ctx);
            const int v = nu(i, ctx);
            return DiffRule{1, v + 2, find_tower(E2Tag::H0Tower, q_gen() * y_gen(1, i - 1, ctx), t.h0 + e2::nu_prime(i, ctx)),
                            ctx.k0};
        }
        const int64_t i = e2::y1_exp(t.gen, ctx) + 1;
        const int tt = t.h0 + (p == 2 ? 2 : 1);
        if (nu(i, ctx) < tt - 1) return std::nullopt;
        const int64_t pt1 = ipow(p, tt - 1);
        const int64_t pt = ipow(p, tt);
        return DiffRule{3, static_cast<int>(pt - tt), find_tower(E2Tag::Main, y_gen(1, i - pt1, ctx) * z_gen(tt), 0),
                        pt - ctx.k0};
    }
    const Monomial x = e2::zpart(t.gen);
    const int a = x.lowest_z();
    if (!t.gen.q) {
        const int64_t i = e2::y1_exp(t.gen, ctx);
        if (i < 1) return std::nullopt;
        const int v = nu(i, ctx);
        if (a < v + 2) return std::nullopt;
        const int vp = e2::nu_prime(i, ctx);
        Monomial tg = q_gen() * y_gen(1, i - 1, ctx) * z_comp(a - vp, a, ctx) * (x / z_gen(a));
        return DiffRule{2, v + 2, find_tower(E2Tag::Main, tg, 0), v + 2};
    }
    const int64_t i = e2::y1_exp(t.gen, ctx) + 1;
    const int lam = e2::w_length(x, ctx);
    if (lam >= e2::nu_prime(i, ctx)) return std::nullopt;
    const int tt = lam + (p == 2 ? 2 : 1);
    const int j = a + lam;
    const Monomial rest = x / z_comp(a, j, ctx);
    const int64_t pt1 = ipow(p, tt - 1), pt = ipow(p, tt);
    Monomial tg = y_gen(1, i - pt1, ctx) * z_gen(tt) * z_gen(j) * rest;
    return DiffRule{4, static_cast<int>(pt - tt), find_tower(E2Tag::Main, tg, 0), pt - tt};
}

// h0 times the element (t, b); nullopt when the product is zero in E2
inline std::optional<std::pair<E2Tower, int64_t>> h0_times(const E2Tower& t, int64_t b, const PrimeCtx& ctx) {
    switch (t.tag) {
        case E2Tag::H0Tower: {
            E2Tower u = t;
            ++u.h0;
            return std::make_pair(u, b);
        }
        case E2Tag::Special: {
            if (ctx.p != 2 || b != 0) return std::nullopt;
            Monomial rest = t.gen;
            rest.y -= rest.y % 2;
            if (t.gen / rest != y_gen(0, 1, ctx) * z_gen(0)) return std::nullopt;
            E2Tower u = t;
            u.gen = rest * z_gen(1);
            u.height = 2;
            return std::make_pair(u, b + 1);
        }
        case E2Tag::Main: {
            const Monomial x = e2::zpart(t.gen);
            const int a = x.lowest_z();
            if (a <= ctx.k0) return std::nullopt;
            E2Tower u = t;
            u.gen = t.gen / z_gen(a) * z_gen(a - 1, ctx.p);
            return std::make_pair(u, b + 1);
        }
    }
    return std::nullopt;
}

// all E2 towers with generator degree <= G (H0 towers with h0 exponent <= cmax)
inline std::vector<E2Tower> e2_towers(int64_t G, int cmax, const PrimeCtx& ctx) {
    std::vector<E2Tower> out;
    const int p = ctx.p;
    const int64_t qd = ctx.q_degree();
    const auto y1s = [&](int64_t D) { return enumerate_product({{y_gen(1, 1, ctx), -1}}, D, ctx); };
    // first summand
    std::vector<Monomial> xs;
    for (int a = ctx.k0; a <= max_z_index(G, ctx); ++a)
        for (int e = 1; e <= p; ++e) {
            Monomial head = z_gen(a, e);
            const int64_t hd = degree_of(head, ctx);
            if (hd > G) break;
            for (const auto& m : lambda(a + 1, G - hd, ctx)) xs.push_back(head * m);
        }
    for (const auto& x : xs)
        for (int eps = 0; eps <= 1; ++eps) {
            Monomial base = eps ? x * q_gen() : x;
            const int64_t bd = degree_of(base, ctx);
            if (bd > G) continue;
            for (const auto& y : y1s(G - bd)) out.push_back({E2Tag::Main, base * y, 0, 0, kUnbounded});
        }
    // second summand
    for (const auto& y : y1s(G)) {
        for (int c = 0; c <= cmax; ++c) {
            if (!y.is_one()) out.push_back({E2Tag::H0Tower, y, c, 0, kUnbounded});
            if (degree_of(y, ctx) + qd <= G) out.push_back({E2Tag::H0Tower, y * q_gen(), c, ctx.k0, kUnbounded});
        }
    }
    // third summand
    const Monomial s0 = y_gen(0, p - 1, ctx) * z_gen(0);
    for (const auto& y : y1s(G - degree_of(s0, ctx))) out.push_back({E2Tag::Special, y * s0, 0, 0, 1});
    if (p == 2)
        for (const auto& y : y1s(G - degree_of(z_gen(1), ctx)))
            out.push_back({E2Tag::Special, y * z_gen(1), 0, 0, 2});
    std::sort(out.begin(), out.end());
    return out;
}

struct AppliedDifferential {
    int page;
    int family;
    std::string source;
    std::string target;
};

struct SSResult {
    int64_t n0 = 0, n1 = 0;
    int s_report = 0;
    std::map<std::pair<int64_t, int>, int> e2;    // (degree, filtration) -> dim, reported range
    std::map<std::pair<int64_t, int>, int> einf;  // same range
    std::vector<AppliedDifferential> differentials;  // tower level
    int linearity_failures = 0;
    int square_failures = 0;
};

struct Window {
    int64_t n0, n1;
    int s_report, s_win;
    int64_t gen_bound;
    int r_max;
};

// s_min raises the reported filtration range when tall towers reach into the window
inline Window plan_window(int64_t n0, int64_t n1, const PrimeCtx& ctx, int s_min = 0) {
    Window w{};
    w.n0 = n0;
    w.n1 = n1;
    const int64_t step = ctx.vstep();
    w.s_report = std::max(s_min, static_cast<int>(ceil_div(std::max<int64_t>(n1, 0), step) + 2));
    // sources in the reported range have y_1-exponent below i_max; their pages are at most p^{v+1}-(v+1)
    const int64_t i_max = (n1 + 1 + step * w.s_report) / (2 * ctx.p) + 1;
    int vmax = 0;
    while (ipow(ctx.p, vmax + 1) <= i_max) ++vmax;
    w.r_max = static_cast<int>(std::max<int64_t>(vmax + 2, ipow(ctx.p, vmax + 1) - (vmax + 1)));
    w.s_win = w.s_report + w.r_max;
    w.gen_bound = n1 + 1 + step * w.s_win;
    return w;
}

// E2 on a degree window with the listed differentials applied page by page
class SpectralSequence {
public:
    SpectralSequence(const PrimeCtx& ctx, int64_t n0, int64_t n1, int s_min = 0)
        : ctx_(ctx), w_(plan_window(n0, n1, ctx, s_min)) {
        towers_ = e2_towers(w_.gen_bound, w_.s_win, ctx_);
        for (size_t i = 0; i < towers_.size(); ++i) index_[towers_[i]] = i;
        const int64_t step = ctx_.vstep();
        for (size_t ti = 0; ti < towers_.size(); ++ti) {
            const auto& t = towers_[ti];
            const int64_t gd = degree_of(t.gen, ctx_);
            // degree in [n0-1, n1+1], filtration h0+b <= s_win
            int64_t blo = std::max<int64_t>(t.vstart, ceil_div(gd - (w_.n1 + 1), step));
            int64_t bhi = floor_div(gd - (w_.n0 - 1), step);
            bhi = std::min<int64_t>(bhi, w_.s_win - t.h0);
            if (t.height != kUnbounded) bhi = std::min(bhi, t.height - 1);
            base_.push_back(elems_.size());
            blo_.push_back(blo);
            for (int64_t b = blo; b <= bhi; ++b) elems_.push_back({ti, b, gd - step * b, t.h0 + static_cast<int>(b)});
        }
        base_.push_back(elems_.size());
    }

    const Window& window() const { return w_; }
    const std::vector<E2Tower>& towers() const { return towers_; }

    std::optional<size_t> element(const E2Tower& t, int64_t b) const {
        auto it = index_.find(t);
        if (it == index_.end()) return std::nullopt;
        size_t ti = it->second;
        int64_t off = b - blo_[ti];
        if (off < 0 || static_cast<size_t>(off) >= base_[ti + 1] - base_[ti]) return std::nullopt;
        return base_[ti] + static_cast<size_t>(off);
    }

    SSResult run() const {
        SSResult R;
        R.n0 = w_.n0;
        R.n1 = w_.n1;
        R.s_report = w_.s_report;
        std::vector<char> alive(elems_.size(), 1);
        for (const auto& e : elems_)
            if (reported(e)) ++R.e2[{e.n, e.s}];

        struct Inst { size_t src_tower; DiffRule rule; };
        std::map<int, std::vector<Inst>> pages;
        for (size_t ti = 0; ti < towers_.size(); ++ti)
            if (auto r = rule_from(towers_[ti], ctx_)) pages[r->page].push_back({ti, *r});

        for (const auto& [page, insts] : pages) {
            if (page > w_.s_win) break;
            std::vector<std::pair<size_t, size_t>> pairs;
            std::set<std::string> logged;
            for (const auto& in : insts) {
                const auto& t = towers_[in.src_tower];
                bool any = false;
                for (size_t e = base_[in.src_tower]; e < base_[in.src_tower + 1]; ++e) {
                    if (!alive[e]) continue;
                    const auto& el = elems_[e];
                    auto tgt = element(in.rule.target, el.b + in.rule.shift);
                    if (!tgt) {
                        if (el.n <= w_.n1 && el.s <= w_.s_report)
                            throw std::runtime_error("window too small: target of " + element_label(t, el.b, ctx_) +
                                                     " is outside the realized E2");
                        continue;
                    }
                    if (!alive[*tgt]) throw std::runtime_error("differential hits a dead class: " +
                                                               element_label(t, el.b, ctx_));
                    pairs.push_back({e, *tgt});
                    any = true;
                }
                if (any)
                    R.differentials.push_back({page, in.rule.family, tower_label(t, ctx_),
                                               tower_label(in.rule.target, ctx_)});
            }
            apply_page(page, pairs, alive, R);
        }
        for (size_t e = 0; e < elems_.size(); ++e)
            if (alive[e] && reported(elems_[e])) ++R.einf[{elems_[e].n, elems_[e].s}];
        return R;
    }

private:
    struct Elem {
        size_t tower;
        int64_t b;
        int64_t n;
        int s;
    };

    bool reported(const Elem& e) const { return e.n >= w_.n0 && e.n <= w_.n1 && e.s <= w_.s_report; }

    void apply_page(int page, const std::vector<std::pair<size_t, size_t>>& pairs, std::vector<char>& alive,
                    SSResult& R) const {
        std::map<size_t, size_t> d;
        std::set<size_t> targets;
        for (auto [s, t] : pairs) {
            d[s] = t;
            targets.insert(t);
        }
        // d∘d = 0: no target is itself a live source on this page
        for (auto [s, t] : pairs)
            if (d.count(t)) ++R.square_failures;
        // v- and h0-linearity, dead classes read as zero
        auto image = [&](const std::optional<size_t>& x) -> std::optional<size_t> {
            if (!x || !alive[*x]) return std::nullopt;
            auto it = d.find(*x);
            if (it == d.end()) return std::nullopt;
            return it->second;
        };
        auto live = [&](const std::optional<size_t>& x) -> std::optional<size_t> {
            if (!x || !alive[*x]) return std::nullopt;
            return x;
        };
        for (auto [s, t] : pairs) {
            const auto& es = elems_[s];
            const auto& et = elems_[t];
            const auto& ts = towers_[es.tower];
            const auto& tt = towers_[et.tower];
            if (!reported(es) && !reported(et)) continue;
            auto vs = live(element(ts, es.b + 1));
            auto vt = live(element(tt, et.b + 1));
            if (vs && vt && image(vs) != vt) ++R.linearity_failures;
            std::optional<size_t> hs, ht;
            if (auto h = h0_times(ts, es.b, ctx_)) hs = live(element(h->first, h->second));
            if (auto h = h0_times(tt, et.b, ctx_)) ht = live(element(h->first, h->second));
            if (hs && image(hs) != ht) {
                // only meaningful when both sides lie inside the realized window
                const auto& eh = elems_[*hs];
                if (eh.s + page <= w_.s_win) ++R.linearity_failures;
            }
        }
        // ranks over F_p per source bidegree
        std::map<std::pair<int64_t, int>, std::vector<std::pair<size_t, size_t>>> blocks;
        for (auto [s, t] : pairs) blocks[{elems_[s].n, elems_[s].s}].push_back({s, t});
        for (const auto& [bd, prs] : blocks) {
            std::vector<size_t> rows;
            for (auto [s, t] : prs) rows.push_back(t);
            std::sort(rows.begin(), rows.end());
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
            IMat A(rows.size(), std::vector<int64_t>(prs.size(), 0));
            for (size_t c = 0; c < prs.size(); ++c) {
                size_t r = std::lower_bound(rows.begin(), rows.end(), prs[c].second) - rows.begin();
                A[r][c] = 1;
            }
            if (fp_rank_small(A, ctx_.p) != static_cast<int>(prs.size()))
                throw std::runtime_error("differential is not injective on page " + std::to_string(page));
        }
        for (auto [s, t] : pairs) alive[s] = alive[t] = 0;
    }

    PrimeCtx ctx_;
    Window w_;
    std::vector<E2Tower> towers_;
    std::map<E2Tower, size_t> index_;
    std::vector<Elem> elems_;
    std::vector<size_t> base_;
    std::vector<int64_t> blo_;
};

struct MatchingReport {
    int towers = 0;
    int sources = 0;
    int targets = 0;
    std::vector<std::string> orphans;
    std::vector<std::string> doubles;
    std::vector<std::string> bad_targets;
    bool pass() const { return orphans.empty() && doubles.empty() && bad_targets.empty(); }
};

// every non-special E2 tower with generator degree in [n0, n1] is hit or hits exactly once
inline MatchingReport matching_audit(int64_t n0, int64_t n1, const PrimeCtx& ctx) {
    MatchingReport rep;
    const Window w = plan_window(n0, n1, ctx);
    const int cmax = w.s_report;
    auto all = e2_towers(n1 + 1, cmax + w.r_max, ctx);
    std::map<E2Tower, int> hits;
    for (const auto& t : all)
        if (auto r = rule_from(t, ctx)) {
            if (!valid_e2_tower(r->target, ctx) || r->target.tag == E2Tag::Special)
                rep.bad_targets.push_back(tower_label(t, ctx) + " -> " + tower_label(r->target, ctx));
            ++hits[r->target];
        }
    for (const auto& t : all) {
        if (t.tag == E2Tag::Special || t.h0 > cmax) continue;
        const int64_t gd = degree_of(t.gen, ctx);
        if (gd < n0 || gd > n1) continue;
        ++rep.towers;
        const bool src = rule_from(t, ctx).has_value();
        const int h = hits.count(t) ? hits[t] : 0;
        rep.sources += src;
        rep.targets += h > 0;
        const int roles = (src ? 1 : 0) + h;
        if (roles == 0) rep.orphans.push_back(tower_label(t, ctx));
        if (roles > 1) rep.doubles.push_back(tower_label(t, ctx));
    }
    return rep;
}

}  // namespace kuengine
