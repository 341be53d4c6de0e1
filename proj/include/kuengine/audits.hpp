#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ass_engine.hpp"
#include "k1_reference.hpp"
#include "margolis.hpp"
#include "ku_modules.hpp"

namespace kuengine {

struct BigradedCheck {
    int64_t degree;
    int s;
    int lhs, rhs;
    bool pass() const { return lhs == rhs; }
};

struct EinftyReport {
    std::vector<BigradedCheck> rows;  // every (n, s) where either side is nonzero
    int linearity_failures = 0, square_failures = 0;
    size_t differentials = 0;
    int failures() const {
        int f = linearity_failures + square_failures;
        for (const auto& r : rows) f += !r.pass();
        return f;
    }
    bool pass() const { return failures() == 0; }
};

// E∞ of the spectral sequence against the closed-form dot counts
inline EinftyReport einfty_audit(int64_t n1, const PrimeCtx& ctx) {
    KuModel ku(ctx);
    std::vector<std::map<int, int>> closed(n1 + 1);
    int s_top = 0;
    for (int64_t n = 0; n <= n1; ++n) {
        closed[n] = ku.dots_by_filtration(n);
        if (!closed[n].empty()) s_top = std::max(s_top, closed[n].rbegin()->first + 1);
    }
    SpectralSequence ss(ctx, 0, n1, s_top);
    SSResult R = ss.run();
    EinftyReport rep;
    rep.linearity_failures = R.linearity_failures;
    rep.square_failures = R.square_failures;
    rep.differentials = R.differentials.size();
    for (int64_t n = 0; n <= n1; ++n) {
        std::map<int, int> e, cf = closed[n];
        for (const auto& [key, v] : R.einf)
            if (key.first == n) e[key.second] = v;
        std::map<int, std::pair<int, int>> both;
        for (auto [s, v] : e) both[s].first = v;
        for (auto [s, v] : cf) both[s].second = v;
        for (auto [s, lr] : both) rep.rows.push_back({n, s, lr.first, lr.second});
    }
    return rep;
}

struct DualityReport {
    struct Row {
        int k;
        int64_t shift;
        int checks = 0, failures = 0;
    };
    std::vector<Row> rows;
    bool pass() const {
        for (const auto& r : rows)
            if (r.failures || !r.checks) return false;
        return true;
    }
};

// reflection shift N_k with B_k^∨ ≅ Σ^{N_k} B_k on rank invariants
inline int64_t duality_shift(int k, const PrimeCtx& ctx) {
    const int64_t p = ctx.p;
    return 2 * (ipow(p, k + 1) + ipow(p, k) + (k + 1) * p - k + 1);
}

// rank(B_k^∨, m, a, b) = rank(B_k, m + N_k, a, b) for a <= k+2, b <= p^k
inline DualityReport duality_audit(int k_max, const PrimeCtx& ctx) {
    DualityReport rep;
    const int p = ctx.p;
    const int64_t step = ctx.vstep();
    for (int k = ctx.k0; k <= k_max; ++k) {
        Chart B = build_B(k, ctx);
        auto [lo, hi] = B.degree_span();
        const int64_t pad = step * (ipow(p, k) + 2);
        RealizedWindow W = realize(B, lo - pad, hi + pad);
        RealizedWindow D = dualize(W);
        DualityReport::Row row{k, duality_shift(k, ctx)};
        for (int64_t m = D.lo; m <= D.hi; ++m)
            for (int a = 0; a <= k + 2; ++a)
                for (int64_t b = 0; b <= ipow(p, k); ++b) {
                    const int64_t n = m + row.shift;
                    if (!D.in_window(m - step * b) || !W.in_window(n) || !W.in_window(n - step * b)) continue;
                    ++row.checks;
                    row.failures += D.rank_invariant(m, a, b) != W.rank_invariant(n, a, b);
                }
        rep.rows.push_back(row);
    }
    return rep;
}

// ku_n against ku^{n+2p}; rows compare F_p-lengths, a group mismatch marks rhs = -1
inline AuditReport homology_shift_audit(int n_max, const PrimeCtx& ctx) {
    KuModel ku(ctx);
    AuditReport rep;
    for (int n = 0; n <= n_max; ++n) {
        AbelianPGroup h = ku.homology_group_at(n), c = ku.group_at(n + 2 * ctx.p);
        rep.rows.push_back({n, h.length(), h == c ? c.length() : -1});
    }
    return rep;
}

// associated graded closed form against assembled dot counts
inline AuditReport assoc_graded_audit(int n_max, const PrimeCtx& ctx) {
    KuModel ku(ctx);
    AuditReport rep;
    for (int n = 0; n <= n_max; ++n) rep.rows.push_back({n, assoc_graded_dims(n, ctx), ku.dot_count(n)});
    return rep;
}

// Margolis homology of H^*(K_2) against the closed forms; one report per operator
inline std::array<AuditReport, 2> margolis_audit(int D, const PrimeCtx& ctx) {
    const E1Module M = build_HK2(ctx.p, D + 2 * ctx.p - 1);
    std::array<AuditReport, 2> out;
    for (int which = 0; which < 2; ++which) {
        const auto h = margolis_homology(M, which, D).homology;
        const PSeries cf = margolis_closed_form(ctx.p, which, D);
        for (int d = 0; d <= D; ++d) out[which].rows.push_back({d, h[d], cf[d]});
    }
    return out;
}

// free generators from the series against rank(Q_0 Q_1) on the built module
inline AuditReport ps_audit(int D, const PrimeCtx& ctx) {
    const E1Module M = build_HK2(ctx.p, D + 2 * ctx.p);
    const auto by_rank = free_generators_by_rank(M, D);
    const PSeries gens = free_generator_ps(ctx.p, D);
    AuditReport rep;
    for (int d = 0; d <= D; ++d) rep.rows.push_back({d, gens[d], by_rank[d]});
    return rep;
}

}  // namespace kuengine
