#pragma once

// Exact rational scalars. Backed by Boost.Multiprecision so products of many
// densities never overflow.

#include "dmcone/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace dmcone {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() = default;
    Rational(long long v) : value_(v) {} // NOLINT(implicit)
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
        value_ = boost::multiprecision::cpp_rational(num, den);
    }

    /// Parses "p/q" or "p". Decimal notation is rejected.
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        auto slash = text.find('/');
        auto num_s = trim(text.substr(0, slash));
        auto den_s = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
        if (!is_integer_literal(num_s) || !is_integer_literal(den_s, false))
            throw Error(ErrorCode::ParseError, "expected \"p/q\" rational, got \"" + std::string(text) + "\"");
        BigInt num{std::string(num_s)};
        BigInt den{std::string(den_s)};
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in \"" + std::string(text) + "\"");
        return Rational(num, den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    /// Always "p/q", including integers ("3/1").
    std::string str() const { return numerator().str() + "/" + denominator().str(); }

    double to_double() const { return value_.convert_to<double>(); }
    long double to_long_double() const { return value_.convert_to<long double>(); }

    bool is_zero() const { return value_ == 0; }
    int sign() const { return value_.sign(); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error(ErrorCode::InvalidArgument, "division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.value_ = -a.value_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static bool is_integer_literal(std::string_view s, bool allow_sign = true) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    }

    boost::multiprecision::cpp_rational value_{0};
};

inline Rational pow(Rational base, unsigned exponent) {
    Rational result(1);
    while (exponent) {
        if (exponent & 1u) result *= base;
        base *= base;
        exponent >>= 1u;
    }
    return result;
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Rational r(1);
    for (unsigned i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
    return r;
}

namespace literals {
inline Rational operator""_q(const char* text, std::size_t len) { return Rational::parse({text, len}); }
} // namespace literals

} // namespace dmcone
