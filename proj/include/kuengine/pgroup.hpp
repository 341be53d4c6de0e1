#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prime.hpp"

namespace kuengine {

using IMat = std::vector<std::vector<int64_t>>;

// arithmetic in Z/p^N, N small enough that p^N < 2^62
struct ModPN {
    int p = 2;
    int N = 1;
    int64_t M = 2;

    ModPN() = default;
    ModPN(int prime, int exponent) : p(prime), N(exponent) {
        if (exponent < 1) throw std::invalid_argument("ModPN: exponent must be positive");
        __int128 m = 1;
        for (int i = 0; i < exponent; ++i) {
            m *= prime;
            if (m > (static_cast<__int128>(1) << 62))
                throw std::overflow_error("p-adic precision exceeds 64-bit range");
        }
        M = static_cast<int64_t>(m);
    }

    int64_t norm(int64_t a) const {
        a %= M;
        return a < 0 ? a + M : a;
    }
    int64_t add(int64_t a, int64_t b) const { return norm(a + b); }
    int64_t sub(int64_t a, int64_t b) const { return norm(a - b); }
    int64_t mul(int64_t a, int64_t b) const {
        return static_cast<int64_t>(static_cast<__int128>(norm(a)) * norm(b) % M);
    }
    int val(int64_t a) const {
        a = norm(a);
        if (a == 0) return N;
        int v = 0;
        while (a % p == 0) { a /= p; ++v; }
        return v;
    }
    int64_t inv_unit(int64_t a) const {
        // extended Euclid; a must be prime to p
        int64_t g = norm(a), m = M;
        __int128 x0 = 1, x1 = 0;
        int64_t r0 = g, r1 = m;
        while (r1) {
            int64_t q = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
            __int128 t = x0 - static_cast<__int128>(q) * x1;
            x0 = x1;
            x1 = t;
        }
        if (r0 != 1) throw std::domain_error("inv_unit: not a unit");
        int64_t r = static_cast<int64_t>(x0 % M);
        return r < 0 ? r + M : r;
    }
};

struct SnfResult {
    std::vector<int> vals;  // per generator row after transformation; N = no pivot
    IMat P;                 // new coordinates = P · old
    IMat Pinv;
};

// Smith form of a relation matrix (rows = generators, columns = relations) over Z/p^N
inline SnfResult snf(IMat A, const ModPN& R, bool track = false) {
    const size_t rows = A.size();
    const size_t cols = rows ? A[0].size() : 0;
    SnfResult out;
    out.vals.assign(rows, R.N);
    if (track) {
        out.P.assign(rows, std::vector<int64_t>(rows, 0));
        out.Pinv.assign(rows, std::vector<int64_t>(rows, 0));
        for (size_t i = 0; i < rows; ++i) out.P[i][i] = out.Pinv[i][i] = 1;
    }
    for (auto& row : A)
        for (auto& x : row) x = R.norm(x);

    for (size_t t = 0; t < std::min(rows, cols); ++t) {
        int best = R.N;
        size_t bi = t, bj = t;
        for (size_t i = t; i < rows && best > 0; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (!A[i][j]) continue;
                int v = R.val(A[i][j]);
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best == R.N) break;
        if (bi != t) {
            std::swap(A[bi], A[t]);
            if (track) {
                std::swap(out.P[bi], out.P[t]);
                for (auto& row : out.Pinv) std::swap(row[bi], row[t]);
            }
        }
        if (bj != t)
            for (auto& row : A) std::swap(row[bj], row[t]);

        int64_t pv = ipow(R.p, best);
        int64_t unit = R.inv_unit(A[t][t] / pv);
        for (size_t i = 0; i < rows; ++i) A[i][t] = R.mul(A[i][t], unit);

        for (size_t i = 0; i < rows; ++i) {
            if (i == t || !A[i][t]) continue;
            int64_t c = A[i][t] / pv;
            for (size_t j = t; j < cols; ++j)
                if (A[t][j]) A[i][j] = R.sub(A[i][j], R.mul(c, A[t][j]));
            if (track) {
                for (size_t j = 0; j < rows; ++j)
                    if (out.P[t][j]) out.P[i][j] = R.sub(out.P[i][j], R.mul(c, out.P[t][j]));
                for (size_t j = 0; j < rows; ++j)
                    if (out.Pinv[j][i]) out.Pinv[j][t] = R.add(out.Pinv[j][t], R.mul(c, out.Pinv[j][i]));
            }
        }
        for (size_t j = t + 1; j < cols; ++j) A[t][j] = 0;
        out.vals[t] = best;
    }
    return out;
}

struct AbelianPGroup {
    int p = 2;
    std::vector<int> exps;  // descending, all positive

    AbelianPGroup() = default;
    AbelianPGroup(int prime, std::vector<int> e) : p(prime), exps(std::move(e)) { canonicalize(); }

    void canonicalize() {
        exps.erase(std::remove_if(exps.begin(), exps.end(), [](int e) { return e <= 0; }), exps.end());
        std::sort(exps.rbegin(), exps.rend());
    }
    bool trivial() const { return exps.empty(); }
    int cyclic_count() const { return static_cast<int>(exps.size()); }
    int length() const { return std::accumulate(exps.begin(), exps.end(), 0); }

    AbelianPGroup& operator+=(const AbelianPGroup& o) {
        exps.insert(exps.end(), o.exps.begin(), o.exps.end());
        canonicalize();
        return *this;
    }
    bool operator==(const AbelianPGroup& o) const { return p == o.p && exps == o.exps; }

    // every summand of sub occurs in this, with multiplicity
    bool contains(const AbelianPGroup& sub) const {
        std::vector<int> left = exps;
        for (int e : sub.exps) {
            auto it = std::find(left.begin(), left.end(), e);
            if (it == left.end()) return false;
            left.erase(it);
        }
        return true;
    }

    std::string str() const {
        if (exps.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < exps.size(); ++i) {
            if (i) s += "+";
            s += "Z/" + std::to_string(p) + (exps[i] > 1 ? "^" + std::to_string(exps[i]) : "");
        }
        return s;
    }

    // Z/8+(Z/2)^6 style, orders written out
    std::string compact() const {
        if (exps.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < exps.size();) {
            size_t j = i;
            while (j < exps.size() && exps[j] == exps[i]) ++j;
            const std::string cyc = "Z/" + std::to_string(ipow(p, exps[i]));
            if (!s.empty()) s += "+";
            s += j - i == 1 ? cyc : "(" + cyc + ")^" + std::to_string(j - i);
            i = j;
        }
        return s;
    }
};

// cokernel of A (generators = rows), all generators assumed torsion
inline AbelianPGroup cokernel_group(const IMat& A, int p, int precision) {
    ModPN R(p, precision);
    auto res = snf(A, R, false);
    for (int v : res.vals)
        if (v >= precision) throw std::runtime_error("presentation is not torsion at this precision");
    return AbelianPGroup(p, res.vals);
}

}  // namespace kuengine
