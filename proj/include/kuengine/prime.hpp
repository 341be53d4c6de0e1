#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kuengine {

struct PrimeCtx {
    int p = 2;
    int k0 = 2;

    PrimeCtx() = default;
    explicit PrimeCtx(int prime) : p(prime), k0(prime == 2 ? 2 : 1) {
        if (prime < 2) throw std::invalid_argument("prime must be >= 2");
        for (int d = 2; d * d <= prime; ++d)
            if (prime % d == 0) throw std::invalid_argument("not a prime: " + std::to_string(prime));
    }

    // |v| = -vstep
    int vstep() const { return 2 * (p - 1); }
    int q_degree() const { return p == 2 ? 9 : 4 * p - 1; }

    bool operator==(const PrimeCtx&) const = default;
};

inline bool supported_prime(int p) { return p == 2 || p == 3 || p == 5 || p == 7; }

inline int64_t ipow(int64_t base, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

// largest e with p^e | i
inline int nu(int64_t i, int p) {
    if (i <= 0) throw std::invalid_argument("nu: argument must be positive");
    int e = 0;
    while (i % p == 0) { i /= p; ++e; }
    return e;
}

inline int nu(int64_t i, const PrimeCtx& ctx) { return nu(i, ctx.p); }

// floor division for possibly negative numerators
inline int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

}  // namespace kuengine
