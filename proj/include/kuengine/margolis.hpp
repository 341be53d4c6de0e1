#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ass_engine.hpp"
#include "fp_linalg.hpp"
#include "prime.hpp"
#include "series.hpp"

namespace kuengine {

// graded F_p-module over E[Q_0, Q_1], basis through degree `top`
struct E1Module {
    int p = 2;
    int top = -1;
    std::vector<std::vector<std::string>> labels;  // labels[d][i]
    // q[w][d][i]: image of basis element i of degree d under Q_w, in degree d + |Q_w|
    std::vector<std::vector<SparseRow>> q[2];

    E1Module() = default;
    E1Module(int prime, int top_degree) : p(prime), top(top_degree) {
        if (top_degree < -1) throw std::invalid_argument("negative module top");
        labels.resize(top + 1);
        q[0].resize(top + 1);
        q[1].resize(top + 1);
    }

    int op_degree(int which) const { return which == 0 ? 1 : 2 * p - 1; }
    int dim(int d) const { return d < 0 || d > top ? 0 : static_cast<int>(labels[d].size()); }
    int total_dim() const {
        int t = 0;
        for (int d = 0; d <= top; ++d) t += dim(d);
        return t;
    }

    int add(int d, std::string label) {
        labels.at(d).push_back(std::move(label));
        q[0][d].emplace_back();
        q[1][d].emplace_back();
        return dim(d) - 1;
    }
    // Q_which(basis (d, i)) += c * basis (d + |Q|, j); dropped beyond top
    void act(int which, int d, int i, int j, int c) {
        const int t = d + op_degree(which);
        if (t > top) return;
        c = ((c % p) + p) % p;
        if (c) q[which][d][i].push_back({j, c});
    }
    const SparseRow& image(int which, int d, int i) const { return q[which][d][i]; }
};

namespace detail {

// Q_b Q_a applied to basis element (d, i), as a dense vector in degree d + |Q_a| + |Q_b|
inline std::vector<int64_t> compose(const E1Module& M, int a, int b, int d, int i) {
    const int mid = d + M.op_degree(a), end = mid + M.op_degree(b);
    std::vector<int64_t> out(M.dim(end), 0);
    if (end > M.top) return out;
    for (auto [j, c] : M.image(a, d, i))
        for (auto [k, e] : M.image(b, mid, j)) out[k] = (out[k] + static_cast<int64_t>(c) * e) % M.p;
    return out;
}

}  // namespace detail

struct RelationCheck {
    int q0_squared = 0, q1_squared = 0, commutator = 0;
    bool pass() const { return !q0_squared && !q1_squared && !commutator; }
};

// Q_0^2 = Q_1^2 = 0 and Q_0 Q_1 + Q_1 Q_0 = 0 on every basis element with targets in range
inline RelationCheck check_relations(const E1Module& M) {
    RelationCheck r;
    for (int d = 0; d <= M.top; ++d)
        for (int i = 0; i < M.dim(d); ++i) {
            auto nz = [&](const std::vector<int64_t>& v) {
                return std::any_of(v.begin(), v.end(), [](int64_t x) { return x != 0; });
            };
            r.q0_squared += nz(detail::compose(M, 0, 0, d, i));
            r.q1_squared += nz(detail::compose(M, 1, 1, d, i));
            auto x = detail::compose(M, 0, 1, d, i), y = detail::compose(M, 1, 0, d, i);
            for (size_t k = 0; k < x.size(); ++k) x[k] = (x[k] + y[k]) % M.p;
            r.commutator += nz(x);
        }
    return r;
}

inline E1Module shifted(const E1Module& M, int s, int top, const std::string& tag = "") {
    E1Module out(M.p, top);
    for (int d = 0; d <= M.top && d + s <= top; ++d)
        for (int i = 0; i < M.dim(d); ++i) {
            out.add(d + s, tag + M.labels[d][i]);
            for (int w : {0, 1})
                for (auto [j, c] : M.image(w, d, i)) out.act(w, d + s, i, j, c);
        }
    return out;
}

// direct sum, truncated at `top`
inline E1Module direct_sum(const std::vector<const E1Module*>& parts, int p, int top) {
    E1Module out(p, top);
    for (const E1Module* m : parts) {
        if (m->p != p) throw std::invalid_argument("direct sum of modules over different primes");
        std::vector<int> offset(top + 1);
        for (int d = 0; d <= top; ++d) offset[d] = out.dim(d);
        for (int d = 0; d <= std::min(top, m->top); ++d)
            for (int i = 0; i < m->dim(d); ++i) out.add(d, m->labels[d][i]);
        for (int d = 0; d <= std::min(top, m->top); ++d)
            for (int i = 0; i < m->dim(d); ++i)
                for (int w : {0, 1}) {
                    const int t = d + out.op_degree(w);
                    if (t > top) continue;
                    for (auto [j, c] : m->image(w, d, i)) out.act(w, d, offset[d] + i, offset[t] + j, c);
                }
    }
    return out;
}

// M tensored with a module with trivial Q-action and Poincaré series `gens`
inline E1Module tensor_trivial(const E1Module& M, const PSeries& gens, int top) {
    std::vector<E1Module> copies;
    for (int d = 0; d <= std::min(top, gens.cutoff()); ++d)
        for (int64_t c = 0; c < gens[d]; ++c)
            copies.push_back(shifted(M, d, top, gens[d] > 1 ? "[" + std::to_string(d) + "." + std::to_string(c) + "]"
                                                             : "[" + std::to_string(d) + "]"));
    std::vector<const E1Module*> ptrs;
    for (const auto& c : copies) ptrs.push_back(&c);
    return direct_sum(ptrs, M.p, top);
}

// ---- H^*(K_2) ----

namespace detail {

struct Generator {
    std::string name;
    int degree;
    bool odd;  // exterior and anticommuting (odd p only)
};

using Exps = std::vector<int>;
using Poly = std::map<Exps, int>;

struct GradedAlgebra {
    int p;
    std::vector<Generator> gens;

    // a*b in normal form with its sign; zero if an odd generator repeats
    std::pair<int, Exps> mul(const Exps& a, const Exps& b) const {
        Exps r(gens.size());
        int sign = 1;
        for (size_t j = 0; j < gens.size(); ++j) {
            r[j] = a[j] + b[j];
            if (gens[j].odd && b[j]) {
                if (a[j]) return {0, {}};
                for (size_t i = j + 1; i < gens.size(); ++i)
                    if (gens[i].odd && a[i]) sign = -sign;
            }
        }
        return {sign, r};
    }

    int degree(const Exps& e) const {
        int d = 0;
        for (size_t i = 0; i < gens.size(); ++i) d += e[i] * gens[i].degree;
        return d;
    }

    // odd derivation with the given values on generators
    Poly derive(const Exps& m, const std::vector<Poly>& on_gens) const {
        Poly out;
        int prefix_deg = 0;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (m[i]) {
                const int sign = (prefix_deg % 2) ? -1 : 1;
                Exps before(gens.size(), 0), after(gens.size(), 0);
                for (size_t k = 0; k < i; ++k) before[k] = m[k];
                before[i] = m[i] - 1;
                for (size_t k = i + 1; k < gens.size(); ++k) after[k] = m[k];
                const int coeff = sign * (m[i] % p);
                if (coeff % p)
                    for (const auto& [g, c] : on_gens[i]) {
                        auto [s1, t1] = mul(before, g);
                        if (!s1) continue;
                        auto [s2, t2] = mul(t1, after);
                        if (!s2) continue;
                        int& slot = out[t2];
                        slot = (((slot + coeff * c * s1 * s2) % p) + p) % p;
                    }
            }
            prefix_deg += m[i] * gens[i].degree;
        }
        for (auto it = out.begin(); it != out.end();) it = it->second ? std::next(it) : out.erase(it);
        return out;
    }

    std::string render(const Exps& e) const {
        std::string s;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (!e[i]) continue;
            if (!s.empty()) s += " ";
            s += gens[i].name;
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
        return s.empty() ? "1" : s;
    }
};

inline Exps unit_exps(size_t n, size_t i, int e = 1) {
    Exps x(n, 0);
    x[i] = e;
    return x;
}

}  // namespace detail

// H^*(K(Z/p,2); F_p) through degree D with Q_0, Q_1 acting as derivations
inline E1Module build_HK2(int p, int D, bool reduced = false) {
    using namespace detail;
    if (D < 0) throw std::invalid_argument("build_HK2: negative degree");
    GradedAlgebra A{p, {}};
    std::vector<Poly> q0, q1;
    if (p == 2) {
        // u_{2^j+1}
        for (int j = 0; (1 << j) + 1 <= D + 4; ++j) A.gens.push_back({"u" + std::to_string((1 << j) + 1), (1 << j) + 1, false});
        const size_t n = A.gens.size();
        auto u = [&](int j, int e = 1) { return unit_exps(n, j, e); };
        q0.assign(n, {});
        q1.assign(n, {});
        for (size_t j = 0; j < n; ++j) {
            if (j == 0) q0[j] = {{u(1), 1}};
            if (j >= 2) q0[j] = {{u(j - 1, 2), 1}};
            if (j == 0 && n > 2) q1[j] = {{u(2), 1}};
            if (j == 1) q1[j] = {{u(1, 2), 1}};
            if (j >= 3) q1[j] = {{u(j - 2, 4), 1}};
        }
    } else {
        A.gens.push_back({"y0", 2, false});
        for (int j = 1; 2 * (ipow(p, j) + 1) <= D + 2 * p; ++j)
            A.gens.push_back({"g" + std::to_string(j), static_cast<int>(2 * (ipow(p, j) + 1)), false});
        const size_t ng = A.gens.size();
        for (int i = 0; 2 * ipow(p, i) + 1 <= D + 2 * p; ++i)
            A.gens.push_back({"u" + std::to_string(i), static_cast<int>(2 * ipow(p, i) + 1), true});
        const size_t n = A.gens.size();
        auto g = [&](size_t j, int e = 1) { return unit_exps(n, j, e); };  // g_j sits at index j
        auto ui = [&](size_t i) { return ng + i; };
        q0.assign(n, {});
        q1.assign(n, {});
        const size_t nu_ = n - ng;
        if (nu_ > 0) q0[0] = {{unit_exps(n, ui(0)), 1}};
        if (nu_ > 1) q1[0] = {{unit_exps(n, ui(1)), 1}};
        for (size_t i = 0; i < nu_; ++i) {
            if (i >= 1 && i < ng) q0[ui(i)] = {{g(i), 1}};
            if (i == 0 && ng > 1) q1[ui(i)] = {{g(1), p - 1}};
            if (i >= 2 && i - 1 < ng) q1[ui(i)] = {{g(i - 1, p), 1}};
        }
    }
    // monomial basis by degree
    const size_t n = A.gens.size();
    std::vector<std::vector<Exps>> basis(D + 1);
    Exps cur(n, 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int d) {
        if (i == n) {
            basis[d].push_back(cur);
            return;
        }
        const int maxe = A.gens[i].odd ? 1 : D;
        for (int e = 0; e <= maxe && d + e * A.gens[i].degree <= D; ++e) {
            cur[i] = e;
            rec(i + 1, d + e * A.gens[i].degree);
        }
        cur[i] = 0;
    };
    rec(0, 0);
    E1Module M(p, D);
    std::map<Exps, int> index;
    for (int d = 0; d <= D; ++d) {
        std::sort(basis[d].begin(), basis[d].end(), std::greater<>());
        for (const auto& e : basis[d]) {
            if (reduced && d == 0) continue;
            index[e] = M.add(d, A.render(e));
        }
    }
    for (int d = 0; d <= D; ++d)
        for (const auto& e : basis[d]) {
            auto it = index.find(e);
            if (it == index.end()) continue;
            for (int w : {0, 1})
                for (const auto& [t, c] : A.derive(e, w == 0 ? q0 : q1)) {
                    auto jt = index.find(t);
                    if (jt != index.end()) M.act(w, d, it->second, jt->second, c);
                }
        }
    return M;
}

// ---- Margolis homology ----

struct MargolisDims {
    std::vector<int> kernel, image, homology;  // by degree
};

inline MargolisDims margolis_homology(const E1Module& M, int which, int D) {
    const int s = M.op_degree(which);
    if (D + s > M.top) throw std::invalid_argument("margolis_homology: module not built past degree D + |Q|");
    auto rank_from = [&](int d) {
        if (d < 0) return 0;
        std::vector<SparseRow> rows;
        for (int i = 0; i < M.dim(d); ++i) rows.push_back(M.image(which, d, i));
        return fp_rank(rows, M.dim(d + s), M.p);
    };
    MargolisDims r;
    for (int d = 0; d <= D; ++d) {
        const int out = rank_from(d), in = rank_from(d - s);
        r.kernel.push_back(M.dim(d) - out);
        r.image.push_back(in);
        r.homology.push_back(M.dim(d) - out - in);
    }
    return r;
}

// closed forms for the Margolis homology of H^*(K_2), unit included
inline PSeries margolis_closed_form(int p, int which, int D) {
    PSeries s(D, 1);
    if (p == 2) {
        s *= PSeries::geometric(D, 4);
        if (which == 0) return s * (PSeries(D, 1) + PSeries::monomial(D, 5));
        // P[u_2^2] TP_4[x_9] TP_4[x_17] ⊗_{j>4} E[u_{2^j+1}^2]
        s *= PSeries::truncated(D, 9, 4) * PSeries::truncated(D, 17, 4);
        for (int j = 5; 2 * ((1 << j) + 1) <= D; ++j) s *= PSeries(D, 1) + PSeries::monomial(D, 2 * ((1 << j) + 1));
        return s;
    }
    s *= PSeries::geometric(D, 2 * p);
    if (which == 0) return s * (PSeries(D, 1) + detail::mono(2 * p + 1, D));
    // P[y_1] E[q] E[w_1] TP_p[g_j : j >= 2]
    s *= PSeries(D, 1) + detail::mono(4 * p - 1, D);
    s *= PSeries(D, 1) + detail::mono(2 * p * p + 1, D);
    for (int j = 2; 2 * (ipow(p, j) + 1) <= D; ++j) s *= PSeries::truncated(D, static_cast<int>(2 * (ipow(p, j) + 1)), p);
    return s;
}

// ---- splitting pieces ----

enum class PieceKind { N, L, M, R, S, T };

namespace detail {

inline E1Module piece_L(int k, int p, int top) {
    E1Module L(p, top);
    std::vector<std::pair<int, int>> g, h;  // (degree, index)
    for (int i = 0; i <= k; ++i) {
        const int d = 2 * (p - 1) * i;
        if (d > top) break;
        g.push_back({d, L.add(d, "g" + std::to_string(2 * i))});
        if (d + 1 <= top) h.push_back({d + 1, L.add(d + 1, "Q0g" + std::to_string(2 * i))});
    }
    for (size_t i = 0; i < g.size(); ++i) {
        if (i < h.size()) L.act(0, g[i].first, g[i].second, h[i].second, 1);
        if (i + 1 < h.size()) L.act(1, g[i].first, g[i].second, h[i + 1].second, 1);
    }
    return L;
}

inline E1Module piece_N(int p, int top) {
    E1Module N(p, top);
    auto add = [&](int d, const char* name) { return d <= top ? N.add(d, name) : -1; };
    if (p == 2) {
        const int x5 = add(5, "x5"), x7 = add(7, "x7"), x8 = add(8, "x8"), x9 = add(9, "x9"), x10 = add(10, "x10");
        if (x8 >= 0) {
            N.act(0, 7, x7, x8, 1);
            N.act(1, 5, x5, x8, 1);
        }
        if (x10 >= 0) {
            N.act(0, 9, x9, x10, 1);
            N.act(1, 7, x7, x10, 1);
        }
        return N;
    }
    const int a = add(2 * p + 1, "y0^(p-1)u0"), q = add(4 * p - 1, "q"), q0q = add(4 * p, "Q0q");
    (void)q;
    if (q0q >= 0) {
        N.act(0, 4 * p - 1, q, q0q, 1);
        N.act(1, 2 * p + 1, a, q0q, p - 1);
    }
    return N;
}

inline int m_shift(int j, int p) { return p == 2 ? (1 << j) + 1 : static_cast<int>(2 * ipow(p, j) + 1); }
inline int m_first(int p) { return p == 2 ? 4 : 2; }
inline int m_length(int j, int p) { return p == 2 ? j - 4 : j - 2; }

// generators of the trivial cofactor multiplying M_j inside R
inline PSeries r_cofactor(int j, int p, int top) {
    PSeries s(top, 1);
    if (p == 2) {
        for (int k = j; 2 * ((1 << k) + 1) <= top; ++k) s *= PSeries(top, 1) + PSeries::monomial(top, 2 * ((1 << k) + 1));
        return s;
    }
    for (int k = j; 2 * (ipow(p, k) + 1) <= top; ++k)
        s *= PSeries::truncated(top, static_cast<int>(2 * (ipow(p, k) + 1)), k == j ? p - 1 : p);
    return s;
}

}  // namespace detail

inline E1Module build_piece(PieceKind kind, int param, int p, int top) {
    using namespace detail;
    switch (kind) {
        case PieceKind::N: return piece_N(p, top);
        case PieceKind::L:
            if (param < 0) throw std::invalid_argument("L_k needs k >= 0");
            return piece_L(param, p, top);
        case PieceKind::M:
            if (param < m_first(p)) throw std::invalid_argument("M_j index below the first piece");
            return shifted(piece_L(m_length(param, p), p, top), m_shift(param, p), top, "M" + std::to_string(param) + ":");
        case PieceKind::R: {
            std::vector<E1Module> parts;
            for (int j = m_first(p); m_shift(j, p) <= top; ++j)
                parts.push_back(tensor_trivial(build_piece(PieceKind::M, j, p, top), r_cofactor(j, p, top), top));
            std::vector<const E1Module*> ptrs;
            for (const auto& m : parts) ptrs.push_back(&m);
            return direct_sum(ptrs, p, top);
        }
        case PieceKind::S:
            return shifted(build_piece(PieceKind::R, 0, p, top), p == 2 ? 9 : 4 * p - 1, top, "q.");
        case PieceKind::T: {
            // P[y_1] ⊗ (<1> ⊕ N ⊕ R ⊕ S), unit included
            E1Module unit(p, top);
            unit.add(0, "1");
            E1Module N = piece_N(p, top), R = build_piece(PieceKind::R, 0, p, top), S = build_piece(PieceKind::S, 0, p, top);
            E1Module inner = direct_sum({&unit, &N, &R, &S}, p, top);
            return tensor_trivial(inner, PSeries::geometric(std::max(top, 1), 2 * p), top);
        }
    }
    throw std::invalid_argument("unknown piece");
}

// ---- Poincaré series of the free part ----

inline PSeries hk2_series(int p, int D) {
    PSeries s(D, 1);
    if (p == 2) {
        for (int k = 0; (1 << k) + 1 <= D; ++k) s *= PSeries::geometric(D, (1 << k) + 1);
        return s;
    }
    s *= PSeries::geometric(D, 2);
    for (int j = 1; 2 * (ipow(p, j) + 1) <= D; ++j) s *= PSeries::geometric(D, static_cast<int>(2 * (ipow(p, j) + 1)));
    for (int i = 0; 2 * ipow(p, i) + 1 <= D; ++i) s *= PSeries(D, 1) + PSeries::monomial(D, static_cast<int>(2 * ipow(p, i) + 1));
    return s;
}

// Poincaré series of the non-free part T, unit included
inline PSeries nonfree_series(int p, int D) {
    using detail::mono;
    if (p == 2) {
        PSeries first = PSeries::geometric(D, 4) *
                        (PSeries(D, 1) + mono(5, D) + mono(7, D) + mono(8, D) + mono(9, D) + mono(10, D));
        PSeries sum(D);
        for (int j = 4; (1 << j) + 1 <= D; ++j) {
            PSeries t = mono((1 << j) + 1, D) * (PSeries(D, 1) + mono(9, D)) * (PSeries(D, 1) + mono(1, D)) *
                        (PSeries(D, 1) - mono(2 * j - 6, D));
            for (int k = j; (1 << (k + 1)) + 2 <= D; ++k) t *= PSeries(D, 1) + mono((1 << (k + 1)) + 2, D);
            sum += t;
        }
        return first + sum * PSeries::geometric(D, 2) * PSeries::geometric(D, 4);
    }
    const int qd = 4 * p - 1;
    PSeries inner = PSeries(D, 1) + mono(2 * p + 1, D) + mono(qd, D) + mono(qd + 1, D);
    PSeries r(D);
    for (int j = 2; detail::m_shift(j, p) <= D; ++j) {
        const int len = detail::m_length(j, p) + 1;
        PSeries t = mono(detail::m_shift(j, p), D) * (PSeries(D, 1) + mono(1, D)) *
                    PSeries::truncated(D, 2 * (p - 1), len) * detail::r_cofactor(j, p, D);
        r += t;
    }
    inner += (PSeries(D, 1) + mono(qd, D)) * r;
    return PSeries::geometric(D, 2 * p) * inner;
}

// Poincaré series of the free E_1 part; coefficients must be nonnegative
inline PSeries free_part_ps(int p, int D) {
    PSeries f = hk2_series(p, D) - nonfree_series(p, D);
    if (!f.nonnegative()) throw std::logic_error("free part series has a negative coefficient");
    return f;
}

// number of free E_1 summands generated in each degree
inline PSeries free_generator_ps(int p, int D) {
    using detail::mono;
    PSeries den = (PSeries(D, 1) + mono(1, D)) * (PSeries(D, 1) + mono(2 * p - 1, D));
    PSeries g = free_part_ps(p, D).divided_by(den);
    if (!g.nonnegative()) throw std::logic_error("free generator series has a negative coefficient");
    return g;
}

// trivial ku^*-summand classes: one per free generator, at its top class
inline PSeries trivial_class_ps(int p, int D) { return free_generator_ps(p, D).shifted(2 * p); }

// free generators counted directly: rank of Q_0 Q_1 out of each degree
inline std::vector<int> free_generators_by_rank(const E1Module& M, int D) {
    if (D + 2 * M.p > M.top) throw std::invalid_argument("free_generators_by_rank: module too short");
    std::vector<int> out;
    for (int d = 0; d <= D; ++d) {
        std::vector<SparseRow> rows;
        for (int i = 0; i < M.dim(d); ++i) {
            auto v = detail::compose(M, 0, 1, d, i);
            SparseRow r;
            for (size_t k = 0; k < v.size(); ++k)
                if (v[k]) r.push_back({static_cast<int>(k), static_cast<int>(v[k])});
            rows.push_back(std::move(r));
        }
        out.push_back(fp_rank(rows, M.dim(d + 2 * M.p), M.p));
    }
    return out;
}

// ---- Ext over E_1 by the Koszul complex M ⊗ P[h_0, v] ----

using BigradedDims = std::map<std::pair<int64_t, int>, int>;  // (codegree, s) -> dim

class ExtComplex {
public:
    ExtComplex(const E1Module& M, int64_t n0, int64_t n1, int s_max)
        : M_(M), n0_(n0), n1_(n1), s_max_(s_max), step_(2 * (M.p - 1)) {
        if (s_max < 0 || n1 < n0) throw std::invalid_argument("ExtComplex: empty range");
        if (n1 + 1 + step_ * (s_max + 1) > M.top)
            throw std::invalid_argument("ExtComplex: module top below n1 + 1 + 2(p-1)(s_max+1)");
    }

    // dim of C^s_n
    int cochain_dim(int64_t n, int s) const {
        int t = 0;
        for (int b = 0; b <= s; ++b) t += M_.dim(static_cast<int>(n + step_ * b));
        return t;
    }

    // rows of δ: C^s_n -> C^{s+1}_{n+1}
    std::vector<SparseRow> boundary(int64_t n, int s) const {
        std::vector<int> offset(s + 3, 0);
        for (int b = 0; b <= s + 1; ++b) offset[b + 1] = offset[b] + M_.dim(static_cast<int>(n + 1 + step_ * b));
        std::vector<SparseRow> rows;
        for (int b = 0; b <= s; ++b) {
            const int d = static_cast<int>(n + step_ * b);
            for (int i = 0; i < M_.dim(d); ++i) {
                SparseRow r;
                for (auto [j, c] : M_.image(0, d, i)) r.push_back({offset[b] + j, c});
                for (auto [j, c] : M_.image(1, d, i)) r.push_back({offset[b + 1] + j, c});
                rows.push_back(std::move(r));
            }
        }
        return rows;
    }

    int boundary_rank(int64_t n, int s) const {
        if (s < 0) return 0;
        auto key = std::pair(n, s);
        auto it = ranks_.find(key);
        if (it != ranks_.end()) return it->second;
        const int r = fp_rank(boundary(n, s), cochain_dim(n + 1, s + 1), M_.p);
        return ranks_.emplace(key, r).first->second;
    }

    int ext_dim(int64_t n, int s) const { return cochain_dim(n, s) - boundary_rank(n, s) - boundary_rank(n - 1, s - 1); }

    BigradedDims all() const {
        BigradedDims out;
        for (int s = 0; s <= s_max_; ++s)
            for (int64_t n = n0_; n <= n1_; ++n)
                if (int d = ext_dim(n, s)) out[{n, s}] = d;
        return out;
    }

    // δ∘δ = 0 on C^s_n
    bool square_zero(int64_t n, int s) const {
        auto first = boundary(n, s);
        auto second = boundary(n + 1, s + 1);
        const int p = M_.p;
        for (const auto& r : first) {
            std::map<int, int64_t> acc;
            for (auto [j, c] : r)
                for (auto [k, e] : second[j]) acc[k] = (acc[k] + static_cast<int64_t>(c) * e) % p;
            for (auto [_, v] : acc)
                if (v) return false;
        }
        return true;
    }

private:
    const E1Module& M_;
    int64_t n0_, n1_;
    int s_max_;
    int step_;
    mutable std::map<std::pair<int64_t, int>, int> ranks_;
};

inline BigradedDims ext_bruteforce(const E1Module& M, int64_t n0, int64_t n1, int s_max) {
    return ExtComplex(M, n0, n1, s_max).all();
}

// module top needed for Ext through codegree n1 and filtration s_max
inline int ext_required_top(int64_t n1, int s_max, int p) { return static_cast<int>(n1 + 1 + 2 * (p - 1) * (s_max + 1)); }

// E2 dims from the closed-form towers plus one trivial class per free generator
inline BigradedDims e2_closed_form(int64_t n0, int64_t n1, int s_max, const PrimeCtx& ctx, bool with_free = true) {
    BigradedDims out;
    const int64_t step = ctx.vstep();
    for (const auto& t : e2_towers(n1 + step * s_max, s_max, ctx)) {
        const int64_t g = degree_of(t.gen, ctx);
        for (int64_t b = t.vstart; t.h0 + b <= s_max; ++b) {
            if (!t.has(b)) break;
            const int64_t n = g - step * b;
            if (n < n0) break;
            if (n <= n1) ++out[{n, static_cast<int>(t.h0 + b)}];
        }
    }
    if (with_free && n1 >= 0) {
        PSeries triv = trivial_class_ps(ctx.p, static_cast<int>(n1));
        for (int64_t n = std::max<int64_t>(n0, 0); n <= n1; ++n)
            if (triv[static_cast<int>(n)]) out[{n, 0}] += static_cast<int>(triv[static_cast<int>(n)]);
    }
    return out;
}

struct ExtMismatch {
    int64_t n;
    int s;
    int oracle, closed_form;
};

// brute-force Ext of the reduced H^*(K_2) against the closed form
inline std::vector<ExtMismatch> ext_oracle_audit(int64_t n1, int s_max, const PrimeCtx& ctx) {
    const int64_t n0 = -ctx.vstep() * s_max;
    E1Module M = build_HK2(ctx.p, ext_required_top(n1, s_max, ctx.p), true);
    BigradedDims ext = ext_bruteforce(M, n0, n1, s_max);
    BigradedDims cf = e2_closed_form(n0, n1, s_max, ctx);
    std::vector<ExtMismatch> bad;
    for (int s = 0; s <= s_max; ++s)
        for (int64_t n = n0; n <= n1; ++n) {
            auto get = [&](const BigradedDims& m) {
                auto it = m.find({n, s});
                return it == m.end() ? 0 : it->second;
            };
            if (get(ext) != get(cf)) bad.push_back({n, s, get(ext), get(cf)});
        }
    return bad;
}

}  // namespace kuengine
