#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ku_modules.hpp"
#include "recurrences.hpp"
#include "series.hpp"

namespace kuengine {

// |w_j| for j >= 1
inline int64_t w_degree(int j, const PrimeCtx& ctx) {
    if (j < 1) throw std::invalid_argument("w_j needs j >= 1");
    const int64_t p = ctx.p;
    if (j == 1) return 2 * p * p + 1;
    if (j == 2) return 2 * p * p * p - 2 * p * p + 6 * p - 3;
    return w_degree(j - 2, ctx) + y_degree(j - 2, ctx) * (p - 1) + z_degree(j - 1, ctx) * (p - 1);
}

struct WClass {
    int index;
    int64_t degree;
};

inline WClass w_class(int j, const PrimeCtx& ctx) { return {j, w_degree(j, ctx)}; }

// Adds to `dims` (indexed by degree up to its cutoff) the dots of v-towers of
// height h on generators counted by `gens`.
inline void add_towers(PSeries& dims, const PSeries& gens, int64_t h, int step) {
    for (int n = 0; n <= dims.cutoff(); ++n)
        for (int64_t b = 0; b < h && n + step * b <= gens.cutoff(); ++b) dims.at(n) += gens[n + step * b];
}

namespace detail {

inline PSeries lambda_series(int j, int cutoff, const PrimeCtx& ctx) {
    PSeries s(cutoff, 1);
    for (int i = j; i < kMaxZ && z_degree(i, ctx) <= cutoff; ++i)
        s *= PSeries::truncated(cutoff, static_cast<int>(z_degree(i, ctx)), ctx.p);
    return s;
}

}  // namespace detail

// F_p-dimensions of k(1)^n(K_2) for 0 <= n <= n_max, trivial summand excluded
class K1Reference {
public:
    K1Reference(const PrimeCtx& ctx, int n_max) : ctx_(ctx), seq_(ctx.p), dims_(n_max) {
        if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
        build();
    }

    int n_max() const { return dims_.cutoff(); }
    int64_t dim_at(int64_t n) const {
        if (n > n_max()) throw std::out_of_range("degree beyond k(1) window");
        return n < 0 ? 0 : dims_[static_cast<int>(n)];
    }
    const PSeries& dims() const { return dims_; }
    // contribution of each displayed line
    const std::map<std::string, PSeries>& lines() const { return lines_; }

private:
    void build() {
        using namespace detail;
        const int p = ctx_.p;
        const int step = ctx_.vstep();
        const int N = n_max();
        auto line = [&](const std::string& name) -> PSeries& {
            return lines_.try_emplace(name, PSeries(N)).first->second;
        };

        // TP_{r(j)}[v] P[y_{j+1}] TP_{p-1}[y_j] Ē[w_j] E[w_{j+1}] Λ_{j+1}
        for (int j = 1; j < kMaxZ - 1; ++j) {
            const int64_t h = seq_.r_small(j);
            const int64_t lowest = w_degree(j, ctx_) - step * (h - 1);
            if (lowest > N) break;
            const int C = static_cast<int>(N + step * (h - 1));
            PSeries g = mono(w_degree(j, ctx_), C) * (PSeries(C, 1) + mono(w_degree(j + 1, ctx_), C)) *
                        poly_series(y_degree(j + 1, ctx_), C) * trunc_series(y_degree(j, ctx_), p - 1, C) *
                        lambda_series(j + 1, C, ctx_);
            add_towers(line("w"), g, h, step);
        }
        // TP_{r'(j-1)}[v] P[y_j] E[w_j] T̄P_p[z_j] Λ_{j+1}, j >= k0
        for (int j = ctx_.k0; j < kMaxZ - 1; ++j) {
            const int64_t h = seq_.r_prime_small(j - 1);
            const int64_t lowest = z_degree(j, ctx_) - step * (h - 1);
            if (lowest > N) break;
            const int C = static_cast<int>(N + step * (h - 1));
            PSeries g = poly_series(y_degree(j, ctx_), C) * (PSeries(C, 1) + mono(w_degree(j, ctx_), C)) *
                        (trunc_series(z_degree(j, ctx_), p, C) - PSeries(C, 1)) * lambda_series(j + 1, C, ctx_);
            add_towers(line("z"), g, h, step);
        }
        // P[y_1] (Ē[y_0^{p-1} z_0] ⊕ Ē[z_1] when p = 2)
        {
            PSeries g = mono(y_degree(0, ctx_) * (p - 1) + z_degree(0, ctx_), N);
            if (p == 2) g += mono(z_degree(1, ctx_), N);
            add_towers(line("special"), g * poly_series(y_degree(1, ctx_), N), 1, step);
        }
        // P[y_1] E[q] Ē[z_j^p] Λ_{j+1}, j >= k0
        for (int j = ctx_.k0; j < kMaxZ - 1 && z_degree(j, ctx_) * p <= N; ++j) {
            PSeries g = poly_series(y_degree(1, ctx_), N) * (PSeries(N, 1) + mono(ctx_.q_degree(), N)) *
                        mono(z_degree(j, ctx_) * p, N) * lambda_series(j + 1, N, ctx_);
            add_towers(line("q"), g, 1, step);
        }
        for (const auto& [_, s] : lines_) dims_ += s;
    }

    PrimeCtx ctx_;
    RSequences seq_;
    PSeries dims_;
    std::map<std::string, PSeries> lines_;
};

inline int64_t k1_dim_at(int64_t n, const PrimeCtx& ctx) {
    if (n < 0) return 0;
    return K1Reference(ctx, static_cast<int>(n)).dim_at(n);
}

struct DegreeCheck {
    int64_t degree;
    int64_t lhs, rhs;
    bool pass() const { return lhs == rhs; }
};

struct AuditReport {
    std::vector<DegreeCheck> rows;
    int failures() const {
        int f = 0;
        for (const auto& r : rows) f += !r.pass();
        return f;
    }
    bool pass() const { return failures() == 0; }
};

// dim k(1)^n = c(ku^n) + c(ku^{n+1}) with c the number of cyclic summands
inline AuditReport bockstein_audit(int n_max, const PrimeCtx& ctx) {
    K1Reference k1(ctx, n_max);
    KuModel ku(ctx);
    std::vector<int64_t> c(static_cast<size_t>(n_max) + 2);
    for (int n = 0; n <= n_max + 1; ++n) c[n] = ku.group_at(n).cyclic_count();
    AuditReport rep;
    for (int n = 0; n <= n_max; ++n) rep.rows.push_back({n, k1.dim_at(n), c[n] + c[n + 1]});
    return rep;
}

// ---- G-families (odd p) ----

struct GFamily {
    int tag = 1;    // 1..8
    int k = 1;
    int param = 0;  // l for tags 3-6, e for tags 7-8, unused otherwise
    std::string str() const {
        std::string s = "G" + std::to_string(tag) + "[" + std::to_string(k);
        if (tag >= 3) s += "," + std::to_string(param);
        return s + "]";
    }
};

// ku pieces whose kernels and cokernels of p make up the families
class GFamilyModel {
public:
    GFamilyModel(const PrimeCtx& ctx, int n_max) : ctx_(ctx), ku_(ctx), n_max_(n_max) {
        if (ctx.p == 2) throw std::invalid_argument("G-families are defined for odd primes only");
        if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
        enumerate();
    }

    const std::vector<GFamily>& families() const { return families_; }

    int64_t dim(const GFamily& g, int64_t n) const {
        auto at = [&](Piece::Kind kind, int param, int64_t m) -> int64_t {
            auto it = pieces_.find(std::tuple(static_cast<int>(kind), g.k, param));
            return it == pieces_.end() ? 0 : cyclic(it->second, m);
        };
        switch (g.tag) {
            case 1: return at(Piece::A, 0, n + 1);
            case 2: return at(Piece::A, 0, n);
            case 3: return at(Piece::YBZ, g.param, n + 1);
            case 4: return at(Piece::YBZ, g.param, n) + at(Piece::QS, g.param, n + 1);
            case 5: return at(Piece::QS, g.param, n) + at(Piece::BZ, g.param, n + 1);
            case 6: return at(Piece::BZ, g.param, n);
            case 7: return at(Piece::BZE, g.param, n + 1);
            case 8: return at(Piece::BZE, g.param, n);
        }
        throw std::invalid_argument("G-family tag must be 1..8");
    }

    int64_t total(int64_t n) const {
        int64_t t = 0;
        for (const auto& g : families_) t += dim(g, n);
        return t;
    }

private:
    struct Piece {
        enum Kind { A, YBZ, QS, BZ, BZE } kind;
        int k, param;
        CoreKey core;
        int64_t shift;
        PSeries cofactor;
        auto key() const { return std::tuple(static_cast<int>(kind), k, param); }
    };

    // number of cyclic summands of the piece at degree m
    int64_t cyclic(const Piece& pc, int64_t m) const {
        if (m < 0 || m > n_max_ + 1) throw std::out_of_range("degree beyond G-family window");
        auto [lo, hi] = ku_.core_span(pc.core);
        int64_t c = 0;
        for (int64_t d = 0; d <= pc.cofactor.cutoff(); ++d) {
            if (!pc.cofactor[static_cast<int>(d)]) continue;
            const int64_t local = m - pc.shift - d;
            if (local < lo) break;
            if (local > hi) continue;
            c += pc.cofactor[static_cast<int>(d)] * ku_.core_group(pc.core, local).cyclic_count();
        }
        return c;
    }

    // registers a piece if some dot can reach the window
    bool add_piece(Piece pc) {
        if (ku_.core(pc.core).towers.empty()) return false;
        if (pc.shift + ku_.core_span(pc.core).first > n_max_ + 1) return false;
        pieces_.emplace(pc.key(), std::move(pc));
        return true;
    }

    void enumerate() {
        using namespace detail;
        const int p = ctx_.p;
        const int C = n_max_ + 1;
        for (int k = 1; k < kMaxZ - 1; ++k) {
            const CoreKey A{CoreKey::A, k, 0}, B{CoreKey::B, k, 0};
            const bool a_live = ku_.core_span(A).first <= C;
            const bool b_live = ku_.core_span(B).first <= C;
            if (!a_live && !b_live) break;
            const PSeries ycof = trunc_series(y_degree(k, ctx_), p - 1, C) * poly_series(y_degree(k + 1, ctx_), C);
            if (add_piece({Piece::A, k, 0, A, 0, ycof})) {
                families_.push_back({1, k, 0});
                families_.push_back({2, k, 0});
            }
            for (int ell = k + 1; ell < kMaxZ; ++ell) {
                const PSeries cof = ycof * trunc_series(z_degree(ell, ctx_), p - 1, C) * lambda_series(ell + 1, C, ctx_);
                const int64_t ybz = degree_of(y_gen(k, 1, ctx_) * Z_prod(k, ell, ctx_), ctx_);
                const int64_t qs = degree_of(q_gen() * y_gen(1, ipow(p, k - 1) - 1, ctx_), ctx_);
                bool any = add_piece({Piece::YBZ, k, ell, B, ybz, cof});
                any |= add_piece({Piece::QS, k, ell, CoreKey{CoreKey::S, k, ell}, qs, cof});
                any |= add_piece({Piece::BZ, k, ell, B, z_degree(ell, ctx_), cof});
                if (!any) break;
                for (int tag = 3; tag <= 6; ++tag) families_.push_back({tag, k, ell});
            }
            const PSeries ecof = poly_series(y_degree(k, ctx_), C) * lambda_series(k + 1, C, ctx_);
            for (int e = 1; e <= p - 2; ++e)
                if (add_piece({Piece::BZE, k, e, B, z_degree(k, ctx_) * e, ecof})) {
                    families_.push_back({7, k, e});
                    families_.push_back({8, k, e});
                }
        }
    }

    PrimeCtx ctx_;
    KuModel ku_;
    int n_max_;
    std::map<std::tuple<int, int, int>, Piece> pieces_;
    std::vector<GFamily> families_;
};

inline int64_t g_family_dim(const GFamily& g, int64_t n, const PrimeCtx& ctx) {
    return GFamilyModel(ctx, static_cast<int>(n)).dim(g, n);
}

// Σ G-family dimensions against the k(1) closed form
inline AuditReport g_family_audit(int n_max, const PrimeCtx& ctx) {
    GFamilyModel g(ctx, n_max);
    K1Reference k1(ctx, n_max);
    AuditReport rep;
    for (int n = 0; n <= n_max; ++n) rep.rows.push_back({n, g.total(n), k1.dim_at(n)});
    return rep;
}

}  // namespace kuengine
