#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "chart.hpp"
#include "monomial.hpp"

namespace kuengine {

namespace detail {

inline void glue(Chart& c, int k, int z_tower) {
    const PrimeCtx& ctx = c.ctx;
    const int p = ctx.p;
    const int64_t h = c.towers[z_tower].height;
    if (k >= 2) {
        if (auto t1 = c.find_tower(z_gen(k - 1, p))) {
            for (int64_t a = 0; a < h; ++a) {
                Dot dst{*t1, a + 1};
                if (c.exists(dst)) c.add_edge({z_tower, a}, dst);
            }
        }
    }
    if (k >= 1) {
        if (auto t2 = c.find_tower(y_gen(k - 1, p - 1, ctx) * z_gen(k - 1))) {
            const int64_t shift = ipow(p, k - 1) * (p - 1);
            for (int64_t a = 0; a < c.towers[*t2].height; ++a) {
                Dot dst{z_tower, shift + a};
                if (c.exists(dst)) c.add_edge({*t2, a}, dst);
            }
        }
    }
}

inline Chart assemble_level(const PrimeCtx& ctx, int k, const Chart& lower_b, const Chart& lower_y,
                            int64_t z_height) {
    Chart zc(ctx);
    zc.add_tower(z_gen(k), z_height);
    Chart c1 = tensor_monomial(lower_b, z_gen(k - 1, ctx.p - 1));
    Chart c2 = tensor_monomial(lower_y, y_gen(k - 1, ctx.p - 1, ctx));
    Chart out = direct_sum({&c1, &zc, &c2});
    const int z_tower = static_cast<int>(c1.towers.size());
    glue(out, k, z_tower);
    return out;
}

}  // namespace detail

inline Chart build_B(int k, const PrimeCtx& ctx) {
    if (k < ctx.k0 - 1) throw std::invalid_argument("B_k needs k >= k0 - 1");
    if (k == ctx.k0 - 1) return Chart(ctx);
    Chart lower = build_B(k - 1, ctx);
    return detail::assemble_level(ctx, k, lower, lower, ipow(ctx.p, k) - k);
}

inline Chart build_A(int k, const PrimeCtx& ctx) {
    if (k < 0) throw std::invalid_argument("A_k needs k >= 0");
    if (k == 0) {
        Chart c(ctx);
        c.add_tower(z_gen(0), 1);
        return c;
    }
    Chart lower_b = k - 1 >= ctx.k0 - 1 ? build_B(k - 1, ctx) : Chart(ctx);
    Chart lower_a = build_A(k - 1, ctx);
    return detail::assemble_level(ctx, k, lower_b, lower_a, ipow(ctx.p, k));
}

inline Chart build_S(int k, int ell, const PrimeCtx& ctx) {
    if (k < 1 || ell <= k) throw std::invalid_argument("S_{k,l} needs 1 <= k < l");
    Chart c(ctx);
    const int first = ctx.k0, last = ell - k - 1 + ctx.k0;
    for (int i = first; i <= last; ++i) c.add_tower(z_comp(i, ell, ctx), k + 1);
    for (int i = first + 1; i <= last; ++i) {
        const int src = i - first, dst = src - 1;
        for (int64_t a = 0; a + 1 < k + 1; ++a) c.add_edge({src, a}, {dst, a + 1});
    }
    return c;
}

struct CoreKey {
    enum Kind { A, B, S } kind = A;
    int k = 0;
    int ell = 0;
    auto operator<=>(const CoreKey&) const = default;

    std::string str() const {
        switch (kind) {
            case A: return "A" + std::to_string(k);
            case B: return "B" + std::to_string(k);
            default: return "S" + std::to_string(k) + "," + std::to_string(ell);
        }
    }
};

struct Summand {
    CoreKey core;
    Monomial shift;
};

// ku^*(K_2) without its trivial summand, served from shifted core charts
class KuModel {
public:
    explicit KuModel(int p) : ctx_(p) {}
    explicit KuModel(const PrimeCtx& ctx) : ctx_(ctx) {}

    const PrimeCtx& ctx() const { return ctx_; }

    const Chart& core(const CoreKey& key) const {
        auto it = cores_.find(key);
        if (it != cores_.end()) return it->second.chart;
        Entry e;
        switch (key.kind) {
            case CoreKey::A: e.chart = build_A(key.k, ctx_); break;
            case CoreKey::B: e.chart = build_B(key.k, ctx_); break;
            case CoreKey::S: e.chart = build_S(key.k, key.ell, ctx_); break;
        }
        if (!e.chart.towers.empty()) std::tie(e.lo, e.hi) = e.chart.degree_span();
        return cores_.emplace(key, std::move(e)).first->second.chart;
    }

    std::pair<int64_t, int64_t> core_span(const CoreKey& key) const {
        core(key);
        const auto& e = cores_.at(key);
        return {e.lo, e.hi};
    }

    AbelianPGroup core_group(const CoreKey& key, int64_t n) const {
        const Chart& c = core(key);
        auto& e = cores_.at(key);
        if (c.towers.empty() || n < e.lo || n > e.hi) return AbelianPGroup(ctx_.p, {});
        auto it = e.groups.find(n);
        if (it != e.groups.end()) return it->second;
        return e.groups.emplace(n, kuengine::group_at(c, n)).first->second;
    }

    // summands of the even assembly with a dot in [lo, hi]
    std::vector<Summand> even_summands(int64_t lo, int64_t hi) const {
        std::vector<Summand> out;
        for (int k = 1;; ++k) {
            bool any = false;
            for (bool a_part : {true, false}) {
                CoreKey key{a_part ? CoreKey::A : CoreKey::B, k, 0};
                if (!a_part && k < ctx_.k0) continue;
                auto [cl, ch] = core_span(key);
                if (cl > hi) continue;
                any = true;
                for (const auto& m : script_M(k, a_part, hi - cl, ctx_))
                    if (degree_of(m, ctx_) + ch >= lo) out.push_back({key, m});
            }
            if (!any) break;
        }
        return out;
    }

    std::vector<Summand> odd_summands(int64_t lo, int64_t hi) const {
        std::vector<Summand> out;
        const int64_t qd = ctx_.q_degree();
        for (int64_t i = 1; qd + 2 * ctx_.p * (i - 1) <= hi; ++i) {
            const int nv = nu(i, ctx_);
            const Monomial base = q_gen() * y_gen(1, i - 1, ctx_);
            const int64_t bd = degree_of(base, ctx_);
            for (int ell = nv + 2; ell < kMaxZ; ++ell) {
                CoreKey key{CoreKey::S, nv + 1, ell};
                auto [cl, ch] = core_span(key);
                if (bd + cl > hi) break;
                std::vector<Factor> f = lambda_factors(ell + 1, hi - bd - cl, ctx_);
                f.push_back({z_gen(ell), ctx_.p - 2});
                for (const auto& m : enumerate_product(f, hi - bd - cl, ctx_)) {
                    Monomial s = base * m;
                    if (degree_of(s, ctx_) + ch >= lo) out.push_back({key, s});
                }
            }
        }
        return out;
    }

    std::vector<Summand> summands(int64_t lo, int64_t hi) const {
        auto s = even_summands(lo, hi);
        auto o = odd_summands(lo, hi);
        s.insert(s.end(), o.begin(), o.end());
        return s;
    }

    AbelianPGroup group_at(int64_t n) const {
        AbelianPGroup g(ctx_.p, {});
        for (const auto& s : summands(n, n)) g += core_group(s.core, n - degree_of(s.shift, ctx_));
        return g;
    }

    AbelianPGroup homology_group_at(int64_t n) const { return group_at(n + 2 * ctx_.p); }

    // dot counts by filtration at degree n
    std::map<int, int> dots_by_filtration(int64_t n) const {
        std::map<int, int> out;
        for (const auto& s : summands(n, n)) {
            const Chart& c = core(s.core);
            for (const auto& d : c.dots_at(n - degree_of(s.shift, ctx_))) ++out[c.filtration(d)];
        }
        return out;
    }

    int dot_count(int64_t n) const {
        int t = 0;
        for (auto [_, c] : dots_by_filtration(n)) t += c;
        return t;
    }

    // explicit charts of the assemblies, summands whose lowest dot is at most D
    Chart even_part(int64_t D) const { return materialize(even_summands(INT64_MIN / 4, D)); }
    Chart odd_part(int64_t D) const { return materialize(odd_summands(INT64_MIN / 4, D)); }

    Chart materialize(const std::vector<Summand>& parts) const {
        std::vector<Chart> shifted;
        shifted.reserve(parts.size());
        for (const auto& s : parts) shifted.push_back(tensor_monomial(core(s.core), s.shift));
        std::vector<const Chart*> ptrs;
        for (const auto& c : shifted) ptrs.push_back(&c);
        if (ptrs.empty()) return Chart(ctx_);
        return direct_sum(ptrs);
    }

private:
    struct Entry {
        Chart chart;
        int64_t lo = 0, hi = -1;
        std::map<int64_t, AbelianPGroup> groups;
    };
    PrimeCtx ctx_;
    mutable std::map<CoreKey, Entry> cores_;
};

namespace detail {

// number of dots at n over towers of the given height on each generator
inline int tower_dots(const std::vector<Monomial>& gens, int64_t height, int64_t n, const PrimeCtx& ctx) {
    int c = 0;
    const int64_t step = ctx.vstep();
    for (const auto& g : gens) {
        int64_t diff = degree_of(g, ctx) - n;
        if (diff >= 0 && diff % step == 0 && diff / step < height) ++c;
    }
    return c;
}

}  // namespace detail

// F_p-dimension at degree n of the associated graded in formula form
inline int assoc_graded_dims(int64_t n, const PrimeCtx& ctx) {
    const int p = ctx.p;
    const int64_t step = ctx.vstep();
    int total = 0;
    // P[y_1] y_0^{p-1} z_0
    {
        const Monomial g = y_gen(0, p - 1, ctx) * z_gen(0);
        const int64_t d = n - degree_of(g, ctx);
        if (d >= 0 && d % (2 * p) == 0) ++total;
    }
    for (int t = 1; t < kMaxZ && 2 * ipow(p, t) + 2 * p <= n; ++t) {
        const int64_t h = ipow(p, t);
        const Monomial zt = z_gen(t);
        const int64_t top = n + step * (h - 1);
        // TP_{p^t}[v] P[y_t] z_t
        std::vector<Monomial> gens;
        for (const auto& y : enumerate_product({{y_gen(t, 1, ctx), -1}}, top - degree_of(zt, ctx), ctx))
            gens.push_back(y * zt);
        total += detail::tower_dots(gens, h, n, ctx);
        // TP_{p^t - t}[v] P[y_t] z_t Λ̄_t
        if (t >= ctx.k0) {
            auto f = lambda_factors(t, top - degree_of(zt, ctx), ctx);
            f.push_back({y_gen(t, 1, ctx), -1});
            std::vector<Monomial> bgens;
            for (const auto& m : enumerate_product(f, top - degree_of(zt, ctx), ctx))
                if (m.has_z()) bgens.push_back(m * zt);
            total += detail::tower_dots(bgens, h - t, n, ctx);
        }
    }
    // TP_{ν(i)+2}[v] q y_1^{i-1} z_{k0+l, l+ν(i)+2} Λ_{l+ν(i)+2}
    const int64_t qd = ctx.q_degree();
    for (int64_t i = 1; qd + 2 * p * (i - 1) <= n + step * 64; ++i) {
        const int nv = nu(i, ctx);
        const int64_t h = nv + 2;
        const Monomial base = q_gen() * y_gen(1, i - 1, ctx);
        const int64_t top = n + step * (h - 1);
        if (degree_of(base, ctx) > top) continue;
        for (int l = 0;; ++l) {
            const int J = l + nv + 2;
            if (J >= kMaxZ) break;
            const Monomial g = base * z_comp(ctx.k0 + l, J, ctx);
            if (degree_of(g, ctx) > top) break;
            std::vector<Monomial> gens;
            for (const auto& m : lambda(J, top - degree_of(g, ctx), ctx)) gens.push_back(g * m);
            total += detail::tower_dots(gens, h, n, ctx);
        }
    }
    return total;
}

}  // namespace kuengine
