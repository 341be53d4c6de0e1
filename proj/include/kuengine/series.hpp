#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kuengine {

// integer power series truncated above degree `cutoff`
class PSeries {
public:
    explicit PSeries(int cutoff = 0, int64_t constant = 0) : c_(static_cast<size_t>(cutoff) + 1, 0) {
        if (cutoff < 0) throw std::invalid_argument("negative cutoff");
        c_[0] = constant;
    }

    static PSeries monomial(int cutoff, int degree, int64_t coeff = 1) {
        PSeries s(cutoff);
        if (degree < 0) throw std::invalid_argument("negative degree");
        if (degree <= cutoff) s.c_[degree] = coeff;
        return s;
    }
    // 1 + x^d + ... + x^{(m-1)d}
    static PSeries truncated(int cutoff, int d, int m) {
        PSeries s(cutoff);
        for (int e = 0; e < m && static_cast<int64_t>(e) * d <= cutoff; ++e) s.c_[e * d] += 1;
        return s;
    }
    // 1 / (1 - x^d)
    static PSeries geometric(int cutoff, int d) {
        if (d <= 0) throw std::invalid_argument("geometric needs positive degree");
        PSeries s(cutoff);
        for (int e = 0; e <= cutoff; e += d) s.c_[e] = 1;
        return s;
    }

    int cutoff() const { return static_cast<int>(c_.size()) - 1; }
    int64_t operator[](int d) const { return d < 0 || d > cutoff() ? 0 : c_[d]; }
    int64_t& at(int d) { return c_.at(d); }
    const std::vector<int64_t>& coeffs() const { return c_; }

    PSeries& operator+=(const PSeries& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    PSeries& operator-=(const PSeries& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend PSeries operator+(PSeries a, const PSeries& b) { return a += b; }
    friend PSeries operator-(PSeries a, const PSeries& b) { return a -= b; }

    friend PSeries operator*(const PSeries& a, const PSeries& b) {
        a.check(b);
        PSeries r(a.cutoff());
        for (int i = 0; i <= a.cutoff(); ++i) {
            if (!a.c_[i]) continue;
            for (int j = 0; i + j <= a.cutoff(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }
    PSeries& operator*=(const PSeries& o) { return *this = *this * o; }

    PSeries shifted(int d) const {
        PSeries r(cutoff());
        for (int i = 0; i + d <= cutoff(); ++i)
            if (i + d >= 0) r.c_[i + d] = c_[i];
        return r;
    }

    // exact division by a series with constant term ±1
    PSeries divided_by(const PSeries& den) const {
        check(den);
        if (den.c_[0] != 1 && den.c_[0] != -1) throw std::invalid_argument("divisor must have unit constant term");
        PSeries r(cutoff());
        for (int i = 0; i <= cutoff(); ++i) {
            int64_t acc = c_[i];
            for (int j = 1; j <= i; ++j) acc -= den.c_[j] * r.c_[i - j];
            r.c_[i] = acc * den.c_[0];
        }
        return r;
    }

    bool nonnegative() const {
        for (auto x : c_)
            if (x < 0) return false;
        return true;
    }

    bool operator==(const PSeries&) const = default;

private:
    void check(const PSeries& o) const {
        if (o.c_.size() != c_.size()) throw std::invalid_argument("series cutoffs differ");
    }
    std::vector<int64_t> c_;
};

namespace detail {

inline PSeries poly_series(int64_t d, int cutoff) {
    return d > cutoff ? PSeries(cutoff, 1) : PSeries::geometric(cutoff, static_cast<int>(d));
}

inline PSeries trunc_series(int64_t d, int m, int cutoff) {
    return d > cutoff ? PSeries(cutoff, 1) : PSeries::truncated(cutoff, static_cast<int>(d), m);
}

inline PSeries mono(int64_t d, int cutoff) {
    return d > cutoff ? PSeries(cutoff) : PSeries::monomial(cutoff, static_cast<int>(d));
}

}  // namespace detail

}  // namespace kuengine
