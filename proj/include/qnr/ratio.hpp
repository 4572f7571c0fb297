#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "qnr/errors.hpp"

namespace qnr {

// Exact rational on int64, normalized with positive denominator. Used wherever
// feasibility must not flap on floating point: utilization caps, controller
// delays, demand scaling, loss volumes.
class Ratio {
public:
    constexpr Ratio() = default;
    constexpr Ratio(int64_t value) : num_(value), den_(1) {}
    Ratio(int64_t num, int64_t den) : num_(num), den_(den) { normalize(); }

    // Parses "3", "-0.25", "7/10". Decimal digits map to an exact power-of-ten
    // denominator.
    static Ratio parse(std::string_view text);

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // Exact decimal string when the denominator divides a power of ten,
    // otherwise "num/den".
    std::string str() const;

    // floor(*this * value)
    int64_t mul_floor(int64_t value) const;

    friend Ratio operator+(const Ratio& a, const Ratio& b) {
        return Ratio(i128_to_i64(static_cast<__int128>(a.num_) * b.den_ +
                                 static_cast<__int128>(b.num_) * a.den_),
                     i128_to_i64(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Ratio operator-(const Ratio& a, const Ratio& b) {
        return Ratio(i128_to_i64(static_cast<__int128>(a.num_) * b.den_ -
                                 static_cast<__int128>(b.num_) * a.den_),
                     i128_to_i64(static_cast<__int128>(a.den_) * b.den_));
    }
    friend Ratio operator*(const Ratio& a, const Ratio& b) {
        // Cross-reduce before multiplying to keep intermediates in range.
        int64_t g1 = std::gcd(a.num_, b.den_);
        int64_t g2 = std::gcd(b.num_, a.den_);
        return Ratio(i128_to_i64(static_cast<__int128>(a.num_ / g1) * (b.num_ / g2)),
                     i128_to_i64(static_cast<__int128>(a.den_ / g2) * (b.den_ / g1)));
    }
    friend bool operator==(const Ratio& a, const Ratio& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Ratio& a, const Ratio& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Ratio& a, const Ratio& b) { return a == b || a < b; }
    friend bool operator>(const Ratio& a, const Ratio& b) { return b < a; }
    friend bool operator>=(const Ratio& a, const Ratio& b) { return b <= a; }

private:
    void normalize();
    static int64_t i128_to_i64(__int128 v);

    int64_t num_ = 0;
    int64_t den_ = 1;
};

} // namespace qnr
