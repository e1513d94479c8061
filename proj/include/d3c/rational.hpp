#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "d3c/error.hpp"

namespace d3c {

/// Exact rational number over int64 with overflow-checked arithmetic.
/// Always normalized: gcd(num, den) == 1 and den > 0.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {} // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_integer() const noexcept { return den_ == 1; }

    std::int64_t floor() const noexcept {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    std::int64_t ceil() const noexcept {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }

    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw InvalidParameter("rational division by zero");
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw InvalidParameter("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lo = INT64_MIN;
        constexpr __int128 hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw OverflowError("rational arithmetic overflow");
        Rational q;
        q.num_ = static_cast<std::int64_t>(n);
        q.den_ = static_cast<std::int64_t>(d);
        return q;
    }

    void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational abs(const Rational& q) { return q < 0 ? -q : q; }

/// Parses "3", "-2", "4.5", "0.125" or "4/3" exactly.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&] { return InvalidParameter("cannot parse rational: '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();

    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc::result_out_of_range) throw OverflowError("rational literal out of range");
        if (ec != std::errc() || p != s.data() + s.size()) throw fail();
        return v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return Rational(parse_int(text.substr(0, slash))) / Rational(parse_int(text.substr(slash + 1)));

    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rational(parse_int(text));

    bool negative = text.front() == '-';
    std::string_view whole = text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) throw fail();
    if (frac.size() > 18) throw OverflowError("too many decimal digits in '" + std::string(text) + "'");

    Rational value = whole.empty() ? Rational(0) : Rational(parse_int(whole));
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value += Rational(parse_int(frac), scale);
    return negative ? -value : value;
}

/// Best rational approximation of x with denominator at most max_den
/// (continued-fraction convergents and semiconvergents).
inline Rational approximate(double x, std::int64_t max_den) {
    if (max_den < 1) throw InvalidParameter("max_den must be positive");
    bool negative = x < 0;
    if (negative) x = -x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        double a_d = static_cast<double>(static_cast<std::int64_t>(v));
        auto a = static_cast<std::int64_t>(a_d);
        std::int64_t q2 = q0 + a * q1;
        if (q2 > max_den) {
            std::int64_t k = (max_den - q0) / q1;
            Rational semi(p0 + k * p1, q0 + k * q1);
            Rational conv(p1, q1);
            Rational best = std::abs(semi.to_double() - x) < std::abs(conv.to_double() - x) ? semi : conv;
            return negative ? -best : best;
        }
        std::int64_t p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = v - a_d;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    Rational r(p1, q1);
    return negative ? -r : r;
}

} // namespace d3c
