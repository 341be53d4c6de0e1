#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "prime.hpp"

namespace kuengine {

inline constexpr int kMaxZ = 20;

// y-part is stored as one exponent of y_0 (y_i = y_0^{p^i}); rendered in base-p digits
struct Monomial {
    int64_t y = 0;
    std::array<uint8_t, kMaxZ> z{};
    uint8_t q = 0;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

    bool is_one() const { return y == 0 && q == 0 && !has_z(); }
    bool has_z() const {
        return std::any_of(z.begin(), z.end(), [](uint8_t e) { return e != 0; });
    }
    int lowest_z() const {
        for (int j = 0; j < kMaxZ; ++j)
            if (z[j]) return j;
        return -1;
    }
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const noexcept {
        uint64_t h = 1469598103934665603ull ^ static_cast<uint64_t>(m.y) * 0x9E3779B97F4A7C15ull;
        for (uint8_t e : m.z) h = (h ^ e) * 1099511628211ull;
        return static_cast<size_t>((h ^ m.q) * 0x9E3779B97F4A7C15ull);
    }
};

inline int64_t z_degree(int j, const PrimeCtx& ctx) { return 2 * (ipow(ctx.p, j + 1) + 1); }
inline int64_t y_degree(int i, const PrimeCtx& ctx) { return 2 * ipow(ctx.p, i); }

inline int64_t degree_of(const Monomial& m, const PrimeCtx& ctx) {
    int64_t d = 2 * m.y + (m.q ? ctx.q_degree() : 0);
    for (int j = 0; j < kMaxZ; ++j)
        if (m.z[j]) d += m.z[j] * z_degree(j, ctx);
    return d;
}

inline Monomial one() { return {}; }

inline Monomial z_gen(int j, int e = 1) {
    if (j < 0 || j >= kMaxZ) throw std::out_of_range("z index out of range");
    Monomial m;
    m.z[j] = static_cast<uint8_t>(e);
    return m;
}

inline Monomial y_gen(int i, int64_t e, const PrimeCtx& ctx) {
    Monomial m;
    m.y = ipow(ctx.p, i) * e;
    return m;
}

inline Monomial q_gen() {
    Monomial m;
    m.q = 1;
    return m;
}

inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.y = a.y + b.y;
    m.q = static_cast<uint8_t>(a.q + b.q);
    if (m.q > 1) throw std::domain_error("q^2 is not a monomial of the model");
    for (int j = 0; j < kMaxZ; ++j) {
        int e = a.z[j] + b.z[j];
        if (e > 255) throw std::overflow_error("z exponent overflow");
        m.z[j] = static_cast<uint8_t>(e);
    }
    return m;
}

inline bool divides(const Monomial& d, const Monomial& m) {
    if (d.y > m.y || d.q > m.q) return false;
    for (int j = 0; j < kMaxZ; ++j)
        if (d.z[j] > m.z[j]) return false;
    return true;
}

inline Monomial operator/(const Monomial& m, const Monomial& d) {
    if (!divides(d, m)) throw std::domain_error("monomial division is not exact");
    Monomial r;
    r.y = m.y - d.y;
    r.q = static_cast<uint8_t>(m.q - d.q);
    for (int j = 0; j < kMaxZ; ++j) r.z[j] = static_cast<uint8_t>(m.z[j] - d.z[j]);
    return r;
}

// z_{i,j} = z_i (z_i ... z_{j-1})^{p-1}
inline Monomial z_comp(int i, int j, const PrimeCtx& ctx) {
    if (i > j) throw std::invalid_argument("z_comp: need i <= j");
    if (i < 0) throw std::invalid_argument("z_comp: negative index");
    Monomial m = z_gen(i);
    for (int t = i; t < j; ++t) m.z[t] = static_cast<uint8_t>(m.z[t] + ctx.p - 1);
    return m;
}

// Z_i^j = (z_i ... z_{j-1})^{p-1}
inline Monomial Z_prod(int i, int j, const PrimeCtx& ctx) {
    if (j < i) throw std::invalid_argument("Z_prod: need j >= i");
    Monomial m;
    for (int t = i; t < j; ++t) m.z[t] = static_cast<uint8_t>(ctx.p - 1);
    return m;
}

inline std::vector<int> y_digits(const Monomial& m, const PrimeCtx& ctx) {
    std::vector<int> d;
    for (int64_t y = m.y; y > 0; y /= ctx.p) d.push_back(static_cast<int>(y % ctx.p));
    return d;
}

inline std::string render(const Monomial& m, const PrimeCtx& ctx) {
    std::vector<std::string> parts;
    if (m.q) parts.push_back("q");
    auto digits = y_digits(m, ctx);
    for (size_t i = 0; i < digits.size(); ++i) {
        if (!digits[i]) continue;
        std::string s = "y" + std::to_string(i);
        if (digits[i] > 1) s += "^" + std::to_string(digits[i]);
        parts.push_back(s);
    }
    for (int j = 0; j < kMaxZ; ++j) {
        if (!m.z[j]) continue;
        std::string s = "z" + std::to_string(j);
        if (m.z[j] > 1) s += "^" + std::to_string(m.z[j]);
        parts.push_back(s);
    }
    if (parts.empty()) return "1";
    std::string out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) out += " " + parts[i];
    return out;
}

// accepts: 1, q, y<i>[^e], z<j>[^e], z[i,j]; tokens separated by spaces or '*'
inline Monomial parse_monomial(const std::string& text, const PrimeCtx& ctx) {
    std::string s = text;
    std::replace(s.begin(), s.end(), '*', ' ');
    std::istringstream in(s);
    std::string tok;
    Monomial m;
    auto bad = [&](const std::string& why) {
        return std::invalid_argument("cannot parse monomial '" + text + "': " + why);
    };
    auto read_int = [&](const std::string& t, size_t& pos) {
        size_t start = pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (start == pos) throw bad("expected integer in '" + t + "'");
        return std::stoll(t.substr(start, pos - start));
    };
    auto read_exp = [&](const std::string& t, size_t& pos) -> int64_t {
        if (pos == t.size()) return 1;
        if (t[pos] != '^') throw bad("unexpected '" + t.substr(pos) + "'");
        ++pos;
        int64_t e = read_int(t, pos);
        if (pos != t.size()) throw bad("trailing characters in '" + t + "'");
        return e;
    };
    while (in >> tok) {
        if (tok == "1") continue;
        if (tok == "q") {
            m = m * q_gen();
            continue;
        }
        size_t pos = 1;
        if (tok[0] == 'y') {
            int64_t i = read_int(tok, pos);
            int64_t e = read_exp(tok, pos);
            m = m * y_gen(static_cast<int>(i), e, ctx);
        } else if (tok[0] == 'z' && tok.size() > 1 && tok[1] == '[') {
            pos = 2;
            int64_t i = read_int(tok, pos);
            if (pos >= tok.size() || tok[pos] != ',') throw bad("expected ',' in " + tok);
            ++pos;
            int64_t j = read_int(tok, pos);
            if (pos >= tok.size() || tok[pos] != ']') throw bad("expected ']' in " + tok);
            ++pos;
            int64_t e = read_exp(tok, pos);
            Monomial c = z_comp(static_cast<int>(i), static_cast<int>(j), ctx);
            for (int64_t t = 0; t < e; ++t) m = m * c;
        } else if (tok[0] == 'z') {
            int64_t j = read_int(tok, pos);
            int64_t e = read_exp(tok, pos);
            m = m * z_gen(static_cast<int>(j), static_cast<int>(e));
        } else {
            throw bad("unknown token '" + tok + "'");
        }
    }
    return m;
}

// (degree, z exponents by ascending index, y digits by ascending index, q)
inline bool canonical_less(const Monomial& a, const Monomial& b, const PrimeCtx& ctx) {
    int64_t da = degree_of(a, ctx), db = degree_of(b, ctx);
    if (da != db) return da < db;
    if (a.z != b.z) return a.z < b.z;
    auto ya = y_digits(a, ctx), yb = y_digits(b, ctx);
    size_t n = std::max(ya.size(), yb.size());
    ya.resize(n, 0);
    yb.resize(n, 0);
    if (ya != yb) return ya < yb;
    return a.q < b.q;
}

inline void canonical_sort(std::vector<Monomial>& v, const PrimeCtx& ctx) {
    std::sort(v.begin(), v.end(),
              [&](const Monomial& a, const Monomial& b) { return canonical_less(a, b, ctx); });
}

// ---- truncated product families ----

struct Factor {
    Monomial unit;
    int max_exp = -1;  // < 0: unbounded
};

inline std::vector<Monomial> enumerate_product(const std::vector<Factor>& factors, int64_t D,
                                               const PrimeCtx& ctx) {
    std::vector<Monomial> out;
    if (D < 0) return out;
    std::vector<int64_t> deg(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
        deg[i] = degree_of(factors[i].unit, ctx);
        if (deg[i] <= 0) throw std::invalid_argument("product factor must have positive degree");
    }
    std::function<void(size_t, const Monomial&, int64_t)> rec = [&](size_t i, const Monomial& cur,
                                                                     int64_t d) {
        if (i == factors.size()) {
            out.push_back(cur);
            return;
        }
        Monomial m = cur;
        int64_t dd = d;
        for (int e = 0;; ++e) {
            rec(i + 1, m, dd);
            if (factors[i].max_exp >= 0 && e + 1 > factors[i].max_exp) break;
            dd += deg[i];
            if (dd > D) break;
            m = m * factors[i].unit;
        }
    };
    rec(0, one(), 0);
    canonical_sort(out, ctx);
    return out;
}

inline int max_z_index(int64_t D, const PrimeCtx& ctx) {
    int j = -1;
    while (j + 1 < kMaxZ && z_degree(j + 1, ctx) <= D) ++j;
    return j;
}

// Λ_j = TP_p[z_i : i >= j]
inline std::vector<Factor> lambda_factors(int j, int64_t D, const PrimeCtx& ctx) {
    std::vector<Factor> f;
    for (int i = j; i <= max_z_index(D, ctx); ++i) f.push_back({z_gen(i), ctx.p - 1});
    return f;
}

enum class Family { Lambda, LambdaBar, MA, MB, Product };

struct MonomialSet {
    Family tag = Family::Product;
    int index = 0;                // j for Λ_j, k for 𝓜_k
    std::vector<Factor> factors;  // Product only
};

inline std::vector<Monomial> enumerate(const MonomialSet& set, int64_t D, const PrimeCtx& ctx) {
    switch (set.tag) {
        case Family::Lambda:
            return enumerate_product(lambda_factors(set.index, D, ctx), D, ctx);
        case Family::LambdaBar: {
            auto v = enumerate_product(lambda_factors(set.index, D, ctx), D, ctx);
            v.erase(std::remove_if(v.begin(), v.end(), [](const Monomial& m) { return m.is_one(); }),
                    v.end());
            return v;
        }
        case Family::MA:
        case Family::MB: {
            // (M_p[z_k,y_k] - {z_k^{p-1}, y_k^{p-1}}) · M_p[z_i,y_i : i>k]
            const int k = set.index;
            const int p = ctx.p;
            std::vector<Factor> tail = lambda_factors(k + 1, D, ctx);
            tail.push_back({y_gen(k + 1, 1, ctx), -1});
            auto rest = enumerate_product(tail, D, ctx);
            std::vector<Monomial> out;
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b) {
                    if ((a == p - 1 && b == 0) || (a == 0 && b == p - 1)) continue;
                    Monomial head = y_gen(k, a, ctx) * z_gen(k, b);
                    int64_t dh = degree_of(head, ctx);
                    if (dh > D) continue;
                    for (const auto& r : rest) {
                        if (dh + degree_of(r, ctx) > D) continue;
                        Monomial m = head * r;
                        if ((set.tag == Family::MA) == !m.has_z()) out.push_back(m);
                    }
                }
            canonical_sort(out, ctx);
            return out;
        }
        case Family::Product:
            return enumerate_product(set.factors, D, ctx);
    }
    throw std::invalid_argument("unknown monomial family");
}

inline std::vector<Monomial> lambda(int j, int64_t D, const PrimeCtx& ctx) {
    return enumerate({Family::Lambda, j, {}}, D, ctx);
}

inline std::vector<Monomial> lambda_bar(int j, int64_t D, const PrimeCtx& ctx) {
    return enumerate({Family::LambdaBar, j, {}}, D, ctx);
}

inline std::vector<Monomial> script_M(int k, bool a_part, int64_t D, const PrimeCtx& ctx) {
    return enumerate({a_part ? Family::MA : Family::MB, k, {}}, D, ctx);
}

}  // namespace kuengine
