#include "abreu/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace abreu {

std::optional<Rational> Rational::parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto parse_ll = [](const std::string& t, long long& out) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (size_t j = i; j < t.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(t[j]))) return false;
        errno = 0;
        out = std::strtoll(t.c_str(), nullptr, 10);
        return errno == 0;
    };
    auto slash = s.find('/');
    long long num = 0, den = 1;
    if (slash == std::string::npos) {
        if (!parse_ll(s, num)) return std::nullopt;
    } else {
        if (!parse_ll(s.substr(0, slash), num) || !parse_ll(s.substr(slash + 1), den) || den == 0)
            return std::nullopt;
    }
    return Rational(num, den);
}

std::optional<Rational> Rational::from_double(double x, long long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // continued-fraction convergents
    double v = x;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 9e17 || fl < -9e17) return std::nullopt;
        long long a = static_cast<long long>(fl);
        long long p2 = a * p1 + p0;
        long long q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) return Rational(p1, q1);
        double frac = v - fl;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace abreu
