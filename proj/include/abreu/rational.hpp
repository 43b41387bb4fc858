#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "abreu/errors.hpp"

namespace abreu {

/// Exact rational number on int64, normalized (den > 0, gcd(num,den) = 1).
/// Arithmetic throws on overflow; inputs at desk scale never get close.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const { return Rational(-num_, den_); }
    Rational operator+(const Rational& o) const {
        return Rational(checked(mul(num_, o.den_) + mul(o.num_, den_)), checked(mul(den_, o.den_)));
    }
    Rational operator-(const Rational& o) const { return *this + (-o); }
    Rational operator*(const Rational& o) const {
        return Rational(checked(mul(num_, o.num_)), checked(mul(den_, o.den_)));
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw ValidationError("DivisionByZero", "rational division by zero");
        return Rational(checked(mul(num_, o.den_)), checked(mul(den_, o.num_)));
    }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return mul(num_, o.den_) < mul(o.num_, den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p", "-p" or "p/q". Returns nullopt on malformed input.
    static std::optional<Rational> parse(const std::string& s);

    /// Nearest rational with denominator <= max_den, accepted only if it
    /// reproduces x to within tol. Used to admit float input into lattice
    /// arithmetic.
    static std::optional<Rational> from_double(double x, long long max_den = 1000000000LL,
                                               double tol = 1e-12);

private:
    void normalize() {
        if (den_ == 0) throw ValidationError("DivisionByZero", "rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }
    static __int128 mul(long long a, long long b) {
        return static_cast<__int128>(a) * static_cast<__int128>(b);
    }
    static long long checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw ValidationError("Overflow", "rational arithmetic overflow");
        return static_cast<long long>(v);
    }

    long long num_, den_;
};

inline long long lcm_ll(long long a, long long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    if (a == 0 || b == 0) return 0;
    __int128 v = static_cast<__int128>(a) / std::gcd(a, b) * b;
    if (v > INT64_MAX) throw ValidationError("Overflow", "lcm overflow");
    return static_cast<long long>(v);
}

}  // namespace abreu
