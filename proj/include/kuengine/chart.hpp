#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "monomial.hpp"
#include "pgroup.hpp"

namespace kuengine {

inline constexpr int64_t kUnbounded = -1;

struct Tower {
    int id = 0;
    Monomial gen;
    int base_s = 0;
    int64_t height = 1;  // kUnbounded for an infinite v-tower

    bool has(int64_t a) const { return a >= 0 && (height == kUnbounded || a < height); }
};

struct Dot {
    int tower = 0;
    int64_t a = 0;
    auto operator<=>(const Dot&) const = default;
};

enum class EdgeKind { H0, Exotic };

inline const char* kind_name(EdgeKind k) { return k == EdgeKind::H0 ? "h0" : "exotic"; }

struct PEdge {
    Dot src;
    std::vector<Dot> dst;
    EdgeKind kind = EdgeKind::H0;
};

class Chart {
public:
    PrimeCtx ctx;
    std::vector<Tower> towers;
    std::vector<PEdge> edges;

    Chart() = default;
    explicit Chart(PrimeCtx c) : ctx(c) {}

    int add_tower(const Monomial& gen, int64_t height, int base_s = 0) {
        int id = static_cast<int>(towers.size());
        towers.push_back({id, gen, base_s, height});
        return id;
    }

    int64_t degree(const Dot& d) const {
        return degree_of(towers.at(d.tower).gen, ctx) - ctx.vstep() * d.a;
    }
    int filtration(const Dot& d) const {
        return towers.at(d.tower).base_s + static_cast<int>(d.a);
    }
    bool exists(const Dot& d) const {
        return d.tower >= 0 && d.tower < static_cast<int>(towers.size()) && towers[d.tower].has(d.a);
    }

    const PEdge* edge_from(const Dot& d) const {
        for (const auto& e : edges)
            if (e.src == d) return &e;
        return nullptr;
    }

    // adds targets; a second rule on the same source merges into one edge
    void add_edge(const Dot& src, const Dot& dst) {
        for (auto& e : edges)
            if (e.src == src) {
                if (std::find(e.dst.begin(), e.dst.end(), dst) == e.dst.end()) e.dst.push_back(dst);
                e.kind = classify(e);
                return;
            }
        PEdge e{src, {dst}, EdgeKind::H0};
        e.kind = classify(e);
        edges.push_back(e);
    }

    EdgeKind classify(const PEdge& e) const {
        for (const auto& d : e.dst)
            if (filtration(d) - filtration(e.src) != 1) return EdgeKind::Exotic;
        return EdgeKind::H0;
    }

    std::optional<int> find_tower(const Monomial& gen) const {
        for (const auto& t : towers)
            if (t.gen == gen) return t.id;
        return std::nullopt;
    }

    // dots of degree n, in tower order
    std::vector<Dot> dots_at(int64_t n) const {
        std::vector<Dot> out;
        const int64_t step = ctx.vstep();
        for (const auto& t : towers) {
            int64_t diff = degree_of(t.gen, ctx) - n;
            if (diff < 0 || diff % step) continue;
            int64_t a = diff / step;
            if (t.has(a)) out.push_back({t.id, a});
        }
        return out;
    }

    size_t dot_count() const {
        size_t c = 0;
        for (const auto& t : towers) {
            if (t.height == kUnbounded) throw std::logic_error("dot_count on an unbounded chart");
            c += static_cast<size_t>(t.height);
        }
        return c;
    }

    std::pair<int64_t, int64_t> degree_span() const {
        int64_t lo = INT64_MAX, hi = INT64_MIN;
        for (const auto& t : towers) {
            int64_t g = degree_of(t.gen, ctx);
            hi = std::max(hi, g);
            if (t.height == kUnbounded) lo = INT64_MIN;
            else lo = std::min(lo, g - ctx.vstep() * (t.height - 1));
        }
        return {lo, hi};
    }

    // throws on malformed edges
    void validate() const {
        std::map<Dot, int> seen;
        for (const auto& e : edges) {
            if (!exists(e.src)) throw std::logic_error("edge source is not a dot");
            if (seen[e.src]++) throw std::logic_error("two p-edges on one source");
            if (e.dst.empty() || e.dst.size() > 2) throw std::logic_error("edge must have 1 or 2 targets");
            for (const auto& d : e.dst) {
                if (!exists(d)) throw std::logic_error("edge target is not a dot");
                if (degree(d) != degree(e.src)) throw std::logic_error("edge changes degree");
                if (filtration(d) <= filtration(e.src)) throw std::logic_error("edge does not raise filtration");
            }
        }
    }

    // p·v = v·p: if x -> {y..} then vx -> {vy..} wherever vx exists, with vy dropped when absent
    bool v_equivariant() const {
        std::map<Dot, std::vector<Dot>> by_src;
        for (const auto& e : edges) {
            auto d = e.dst;
            std::sort(d.begin(), d.end());
            by_src[e.src] = d;
        }
        for (const auto& [src, dst] : by_src) {
            Dot vs{src.tower, src.a + 1};
            if (!exists(vs)) continue;
            std::vector<Dot> want;
            for (const auto& d : dst) {
                Dot vd{d.tower, d.a + 1};
                if (exists(vd)) want.push_back(vd);
            }
            std::sort(want.begin(), want.end());
            auto it = by_src.find(vs);
            std::vector<Dot> have = it == by_src.end() ? std::vector<Dot>{} : it->second;
            if (have != want) return false;
        }
        return true;
    }
};

inline Chart tensor_monomial(const Chart& c, const Monomial& m) {
    Chart out = c;
    for (auto& t : out.towers) t.gen = t.gen * m;
    return out;
}

inline Chart direct_sum(const std::vector<const Chart*>& parts) {
    if (parts.empty()) return Chart{};
    Chart out(parts.front()->ctx);
    for (const Chart* c : parts) {
        if (!(c->ctx == out.ctx)) throw std::invalid_argument("direct_sum: prime context mismatch");
        const int off = static_cast<int>(out.towers.size());
        for (auto t : c->towers) {
            t.id += off;
            out.towers.push_back(t);
        }
        for (auto e : c->edges) {
            e.src.tower += off;
            for (auto& d : e.dst) d.tower += off;
            out.edges.push_back(e);
        }
    }
    return out;
}

inline Chart direct_sum(const Chart& a, const Chart& b) { return direct_sum({&a, &b}); }

namespace detail {

struct DegreePresentation {
    std::vector<Dot> dots;
    IMat rel;  // rows = dots, columns = one relation per dot
};

inline DegreePresentation present(const Chart& c, int64_t n) {
    DegreePresentation P;
    P.dots = c.dots_at(n);
    std::map<Dot, size_t> idx;
    for (size_t i = 0; i < P.dots.size(); ++i) idx[P.dots[i]] = i;
    const size_t r = P.dots.size();
    P.rel.assign(r, std::vector<int64_t>(r, 0));
    std::map<Dot, const PEdge*> edge_of;
    for (const auto& e : c.edges) edge_of[e.src] = &e;
    for (size_t j = 0; j < r; ++j) {
        P.rel[j][j] = c.ctx.p;
        auto it = edge_of.find(P.dots[j]);
        if (it == edge_of.end()) continue;
        for (const auto& d : it->second->dst) P.rel[idx.at(d)][j] -= 1;
    }
    return P;
}

// connected components of the edge graph restricted to one degree
inline std::vector<std::vector<size_t>> components(const DegreePresentation& P) {
    const size_t r = P.dots.size();
    std::vector<size_t> parent(r);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < r; ++i)
            if (i != j && P.rel[i][j]) parent[find(i)] = find(j);
    std::map<size_t, std::vector<size_t>> groups;
    for (size_t i = 0; i < r; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<size_t>> out;
    for (auto& [_, g] : groups) out.push_back(g);
    return out;
}

}  // namespace detail

inline AbelianPGroup group_at(const Chart& c, int64_t n) {
    auto P = detail::present(c, n);
    AbelianPGroup g(c.ctx.p, {});
    for (const auto& comp : detail::components(P)) {
        IMat sub(comp.size(), std::vector<int64_t>(comp.size()));
        for (size_t a = 0; a < comp.size(); ++a)
            for (size_t b = 0; b < comp.size(); ++b) sub[a][b] = P.rel[comp[a]][comp[b]];
        g += cokernel_group(sub, c.ctx.p, static_cast<int>(comp.size()) + 1);
    }
    return g;
}

// A finite window of a Z_(p)[v]-module: cyclic decomposition per degree and v in cyclic coordinates
class RealizedWindow {
public:
    int p = 2;
    int step = 2;
    int64_t lo = 0, hi = -1;
    std::map<int64_t, std::vector<int>> exps;
    std::map<int64_t, IMat> vmap;  // vmap[n]: degree n -> degree n - step

    bool in_window(int64_t n) const { return n >= lo && n <= hi; }

    AbelianPGroup group(int64_t n) const {
        if (!in_window(n)) throw std::out_of_range("degree outside realized window");
        auto it = exps.find(n);
        return AbelianPGroup(p, it == exps.end() ? std::vector<int>{} : it->second);
    }

    const std::vector<int>& exps_at(int64_t n) const {
        static const std::vector<int> none;
        auto it = exps.find(n);
        return it == exps.end() ? none : it->second;
    }

    int max_exp() const {
        int m = 0;
        for (const auto& [_, e] : exps)
            for (int x : e) m = std::max(m, x);
        return m;
    }

    // matrix of v^b from degree n, entries of row j reduced mod p^{e'_j}
    IMat v_power(int64_t n, int64_t b) const {
        const int64_t target = n - step * b;
        if (!in_window(n) || !in_window(target)) throw std::out_of_range("rank query outside realized window");
        ModPN R(p, max_exp() + 1);
        const auto& e0 = exps_at(n);
        IMat F(e0.size(), std::vector<int64_t>(e0.size(), 0));
        for (size_t i = 0; i < e0.size(); ++i) F[i][i] = 1;
        int64_t cur = n;
        for (int64_t s = 0; s < b; ++s) {
            const auto& e1 = exps_at(cur - step);
            auto it = vmap.find(cur);
            IMat G(e1.size(), std::vector<int64_t>(e0.size(), 0));
            if (it != vmap.end() && !F.empty()) {
                const IMat& V = it->second;
                for (size_t j = 0; j < e1.size(); ++j)
                    for (size_t k = 0; k < V[j].size(); ++k) {
                        if (!V[j][k]) continue;
                        for (size_t i = 0; i < e0.size(); ++i)
                            G[j][i] = R.add(G[j][i], R.mul(V[j][k], F[k][i]));
                    }
            }
            for (size_t j = 0; j < e1.size(); ++j)
                for (auto& x : G[j]) x %= ipow(p, e1[j]);
            F = std::move(G);
            cur -= step;
        }
        return F;
    }

    // log_p of the order of the image of x -> p^a v^b x
    int rank_invariant(int64_t n, int a, int64_t b) const {
        IMat F = v_power(n, b);
        const auto& e1 = exps_at(n - step * b);
        const auto& e0 = exps_at(n);
        if (e1.empty() || e0.empty()) return 0;
        int top = *std::max_element(e1.begin(), e1.end());
        ModPN R(p, top + 1);
        IMat A(e1.size(), std::vector<int64_t>(e1.size() + e0.size(), 0));
        const int64_t pa = a > top ? 0 : ipow(p, a);
        for (size_t j = 0; j < e1.size(); ++j) {
            A[j][j] = ipow(p, e1[j]);
            for (size_t i = 0; i < e0.size(); ++i) A[j][e1.size() + i] = R.mul(pa, F[j][i]);
        }
        auto res = snf(A, R, false);
        int total = std::accumulate(e1.begin(), e1.end(), 0);
        int coker = 0;
        for (int v : res.vals) coker += v;
        return total - coker;
    }

    // rank over F_p of v^b restricted to the p-torsion subgroups
    int torsion_rank(int64_t n, int64_t b) const;
};

// F_p rank of a small dense matrix
inline int fp_rank_small(IMat A, int p) {
    int rank = 0;
    const size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    ModPN R(p, 1);
    for (size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
        size_t piv = rows;
        for (size_t r = rank; r < rows; ++r)
            if (R.norm(A[r][c])) { piv = r; break; }
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        int64_t inv = R.inv_unit(A[rank][c]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == static_cast<size_t>(rank) || !R.norm(A[r][c])) continue;
            int64_t f = R.mul(A[r][c], inv);
            for (size_t k = c; k < cols; ++k) A[r][k] = R.sub(A[r][k], R.mul(f, A[rank][k]));
        }
        ++rank;
    }
    return rank;
}

inline int RealizedWindow::torsion_rank(int64_t n, int64_t b) const {
    IMat F = v_power(n, b);
    const auto& e0 = exps_at(n);
    const auto& e1 = exps_at(n - step * b);
    IMat C(e1.size(), std::vector<int64_t>(e0.size(), 0));
    for (size_t j = 0; j < e1.size(); ++j)
        for (size_t i = 0; i < e0.size(); ++i) {
            // image of p^{e_i-1} g_i, read in the basis p^{e'_j-1} g'_j
            __int128 x = static_cast<__int128>(F[j][i]) * ipow(p, e0[i] - 1);
            x %= ipow(p, e1[j]);
            C[j][i] = static_cast<int64_t>((x / ipow(p, e1[j] - 1)) % p);
        }
    return fp_rank_small(C, p);
}

inline RealizedWindow realize(const Chart& c, int64_t lo, int64_t hi) {
    RealizedWindow W;
    W.p = c.ctx.p;
    W.step = c.ctx.vstep();
    W.lo = lo;
    W.hi = hi;
    std::map<int64_t, detail::DegreePresentation> pres;
    int precision = 1;
    for (int64_t n = lo; n <= hi; ++n) {
        pres[n] = detail::present(c, n);
        for (const auto& comp : detail::components(pres[n]))
            precision = std::max(precision, static_cast<int>(comp.size()) + 1);
    }
    ModPN R(W.p, precision);
    struct Basis {
        std::vector<size_t> keep;  // SNF rows with positive exponent
        IMat P, Pinv;
    };
    std::map<int64_t, Basis> basis;
    for (int64_t n = lo; n <= hi; ++n) {
        auto& P = pres[n];
        if (P.dots.empty()) continue;
        auto res = snf(P.rel, R, true);
        Basis B;
        std::vector<int> e;
        for (size_t i = 0; i < res.vals.size(); ++i) {
            if (res.vals[i] >= precision) throw std::runtime_error("non-torsion degree in realized window");
            if (res.vals[i] > 0) {
                B.keep.push_back(i);
                e.push_back(res.vals[i]);
            }
        }
        B.P = std::move(res.P);
        B.Pinv = std::move(res.Pinv);
        W.exps[n] = e;
        basis[n] = std::move(B);
    }
    for (int64_t n = lo + W.step; n <= hi; ++n) {
        auto src = basis.find(n), dst = basis.find(n - W.step);
        if (src == basis.end() || dst == basis.end()) continue;
        const auto& sd = pres[n].dots;
        const auto& td = pres[n - W.step].dots;
        std::map<Dot, size_t> tidx;
        for (size_t i = 0; i < td.size(); ++i) tidx[td[i]] = i;
        // V: dot coordinates at n -> dot coordinates at n - step
        std::vector<int64_t> vimg(sd.size(), -1);
        for (size_t i = 0; i < sd.size(); ++i) {
            auto it = tidx.find({sd[i].tower, sd[i].a + 1});
            if (it != tidx.end()) vimg[i] = static_cast<int64_t>(it->second);
        }
        const auto& es = W.exps[n];
        const auto& et = W.exps[n - W.step];
        IMat F(et.size(), std::vector<int64_t>(es.size(), 0));
        for (size_t ci = 0; ci < src->second.keep.size(); ++ci) {
            size_t col = src->second.keep[ci];
            std::vector<int64_t> img(td.size(), 0);
            for (size_t d = 0; d < sd.size(); ++d) {
                int64_t x = src->second.Pinv[d][col];
                if (x && vimg[d] >= 0) img[vimg[d]] = R.add(img[vimg[d]], x);
            }
            for (size_t cj = 0; cj < dst->second.keep.size(); ++cj) {
                size_t row = dst->second.keep[cj];
                int64_t s = 0;
                for (size_t d = 0; d < td.size(); ++d)
                    if (img[d]) s = R.add(s, R.mul(dst->second.P[row][d], img[d]));
                F[cj][ci] = s % ipow(W.p, et[cj]);
            }
        }
        W.vmap[n] = std::move(F);
    }
    return W;
}

// Pontryagin dual: degree n of the result is the dual of degree -n; v is transposed
inline RealizedWindow dualize(const RealizedWindow& W) {
    RealizedWindow D;
    D.p = W.p;
    D.step = W.step;
    D.lo = -W.hi;
    D.hi = -W.lo;
    for (const auto& [n, e] : W.exps) D.exps[-n] = e;
    for (const auto& [n, F] : W.vmap) {
        const auto& e = W.exps.at(n);
        const auto& e1 = W.exps.at(n - W.step);
        // dual map: degree -(n - step) -> degree -n
        IMat G(e.size(), std::vector<int64_t>(e1.size(), 0));
        for (size_t i = 0; i < e.size(); ++i)
            for (size_t j = 0; j < e1.size(); ++j) {
                int64_t f = F[j][i];
                int shift = e[i] - e1[j];
                __int128 g;
                if (shift >= 0) {
                    g = static_cast<__int128>(f) * ipow(W.p, shift);
                } else {
                    int64_t d = ipow(W.p, -shift);
                    if (f % d) throw std::logic_error("dualize: v-map is not well defined");
                    g = f / d;
                }
                G[i][j] = static_cast<int64_t>(g % ipow(W.p, e[i]));
            }
        D.vmap[-(n - W.step)] = std::move(G);
    }
    return D;
}

inline RealizedWindow dualize(const Chart& c, int64_t lo, int64_t hi) { return dualize(realize(c, lo, hi)); }

struct Bar {
    int64_t start;   // degree of the generator
    int64_t length;  // number of degrees covered, stepping by -step
    auto operator<=>(const Bar&) const = default;
};

namespace detail {

// bars of a graded F_p[v]-module given the ranks of v^b out of each degree
template <class Rank>
std::vector<Bar> barcode(const RealizedWindow& W, Rank rank) {
    std::vector<Bar> bars;
    auto rk = [&](int64_t n, int64_t b) -> int {
        if (!W.in_window(n) || !W.in_window(n - W.step * b)) return 0;
        return rank(n, b);
    };
    for (int64_t n = W.lo; n <= W.hi; ++n) {
        if (W.exps_at(n).empty()) continue;
        for (int64_t L = 1; n - W.step * (L - 1) >= W.lo; ++L) {
            int c = rk(n, L - 1) - rk(n, L) - rk(n + W.step, L) + rk(n + W.step, L + 1);
            for (int i = 0; i < c; ++i) bars.push_back({n, L});
            if (rk(n, L - 1) == 0) break;
        }
    }
    std::sort(bars.begin(), bars.end());
    return bars;
}

}  // namespace detail

// barcode of ker(p) as an F_p[v]-module over the window
inline std::vector<Bar> torsion_barcode(const RealizedWindow& W) {
    return detail::barcode(W, [&](int64_t n, int64_t b) { return W.torsion_rank(n, b); });
}

// barcode of coker(p) = M/pM
inline std::vector<Bar> cokernel_barcode(const RealizedWindow& W) {
    return detail::barcode(W, [&](int64_t n, int64_t b) { return fp_rank_small(W.v_power(n, b), W.p); });
}

}  // namespace kuengine
