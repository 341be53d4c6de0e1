#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "prime.hpp"

namespace kuengine {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(int p, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

// v-height sequences r(j), r'(j); memoized, grown on demand
class RSequences {
public:
    explicit RSequences(int p) : p_(p) {
        r_ = {BigInt(1), BigInt(p)};
        rp_ = {BigInt(p - 1), BigInt(p) * p - p};
    }

    int prime() const { return p_; }

    BigInt r(int j) {
        check(j);
        while (static_cast<int>(r_.size()) <= j) {
            int m = static_cast<int>(r_.size()) - 2;  // r(m+2) = r(m) + p^{m+1}(p-1) + 1
            r_.push_back(r_[m] + big_pow(p_, m + 1) * (p_ - 1) + 1);
        }
        return r_[j];
    }

    BigInt r_prime(int j) {
        check(j);
        while (static_cast<int>(rp_.size()) <= j) {
            int m = static_cast<int>(rp_.size()) - 2;  // r'(m+2) = r'(m) + p^{m+2}(p-1) - 1
            rp_.push_back(rp_[m] + big_pow(p_, m + 2) * (p_ - 1) - 1);
        }
        return rp_[j];
    }

    int64_t r_small(int j) { return r(j).convert_to<int64_t>(); }
    int64_t r_prime_small(int j) { return r_prime(j).convert_to<int64_t>(); }

private:
    static void check(int j) {
        if (j < 0) throw std::invalid_argument("r/r': negative index");
    }
    int p_;
    std::vector<BigInt> r_, rp_;
};

struct TorsionTableRow {
    BigInt T_abs, M_abs, M_prime;
    bool operator==(const TorsionTableRow&) const = default;
};

// p = 5, i = 4*ell; quantities halved as printed
inline TorsionTableRow torsion_table_row(int ell, int t) {
    if (ell < 0 || t < 1) throw std::invalid_argument("torsion_table_row: need ell >= 0, t >= 1");
    RSequences seq(5);
    BigInt five_t = big_pow(5, t);
    TorsionTableRow row;
    row.T_abs = five_t * (4 * ell + 1) + 1;
    row.M_abs = five_t * (4 * ell + 5) + 1;
    row.M_prime = row.M_abs - 4 * seq.r_prime(t - 1);
    return row;
}

}  // namespace kuengine
