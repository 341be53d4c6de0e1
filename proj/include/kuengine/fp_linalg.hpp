#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kuengine {

// sparse row: (column, coefficient) pairs, coefficients taken mod p
using SparseRow = std::vector<std::pair<int, int>>;

namespace detail {

inline int rank_mod2(const std::vector<SparseRow>& rows, int ncols) {
    const size_t words = (static_cast<size_t>(ncols) + 63) / 64;
    std::vector<std::vector<uint64_t>> m;
    m.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<uint64_t> bits(words, 0);
        bool any = false;
        for (auto [c, x] : r)
            if (x & 1) {
                bits[c >> 6] ^= uint64_t(1) << (c & 63);
                any = true;
            }
        if (any) m.push_back(std::move(bits));
    }
    int rank = 0;
    size_t live = m.size();
    for (int c = 0; c < ncols && live > 0; ++c) {
        const size_t w = c >> 6;
        const uint64_t bit = uint64_t(1) << (c & 63);
        size_t piv = live;
        for (size_t r = 0; r < live; ++r)
            if (m[r][w] & bit) { piv = r; break; }
        if (piv == live) continue;
        std::swap(m[piv], m[live - 1]);
        const auto& pr = m[live - 1];
        for (size_t r = 0; r + 1 < live; ++r)
            if (m[r][w] & bit)
                for (size_t k = w; k < words; ++k) m[r][k] ^= pr[k];
        --live;
        ++rank;
    }
    return rank;
}

inline int rank_modp(const std::vector<SparseRow>& rows, int ncols, int p) {
    std::vector<int> inv(p, 0);
    for (int a = 1; a < p; ++a)
        for (int b = 1; b < p; ++b)
            if (a * b % p == 1) inv[a] = b;
    std::vector<std::vector<uint8_t>> m;
    for (const auto& r : rows) {
        std::vector<uint8_t> v(ncols, 0);
        bool any = false;
        for (auto [c, x] : r) {
            int y = ((x % p) + p) % p;
            v[c] = static_cast<uint8_t>((v[c] + y) % p);
            any |= y != 0;
        }
        if (any) m.push_back(std::move(v));
    }
    int rank = 0;
    size_t live = m.size();
    for (int c = 0; c < ncols && live > 0; ++c) {
        size_t piv = live;
        for (size_t r = 0; r < live; ++r)
            if (m[r][c]) { piv = r; break; }
        if (piv == live) continue;
        std::swap(m[piv], m[live - 1]);
        auto& pr = m[live - 1];
        const int s = inv[pr[c]];
        for (int k = c; k < ncols; ++k) pr[k] = static_cast<uint8_t>(pr[k] * s % p);
        for (size_t r = 0; r + 1 < live; ++r) {
            const int f = m[r][c];
            if (!f) continue;
            for (int k = c; k < ncols; ++k)
                if (pr[k]) m[r][k] = static_cast<uint8_t>((m[r][k] + (p - f) * pr[k]) % p);
        }
        --live;
        ++rank;
    }
    return rank;
}

}  // namespace detail

// rank over F_p of the matrix whose rows are given sparsely
inline int fp_rank(const std::vector<SparseRow>& rows, int ncols, int p) {
    if (p < 2 || p > 251) throw std::invalid_argument("fp_rank: unsupported prime");
    if (rows.empty() || ncols == 0) return 0;
    return p == 2 ? detail::rank_mod2(rows, ncols) : detail::rank_modp(rows, ncols, p);
}

}  // namespace kuengine
