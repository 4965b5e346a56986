#include "hinm/rational.hpp"

#include <cmath>
#include <numeric>

#include "hinm/errors.hpp"

namespace hinm {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ValueError("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g == 0 ? 0 : num / g;
    den_ = g == 0 ? 1 : den / g;
}

Rational Rational::from_double(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw ValueError("cannot convert non-finite value to a fraction");
    const bool negative = x < 0;
    double rest = std::abs(x);
    // Convergents h/k of the continued fraction expansion.
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_real = std::floor(rest);
        if (a_real > 9.0e15) break;
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t k2 = a * k1 + k0;
        if (k2 > max_den) break;
        const std::int64_t h2 = a * h1 + h0;
        h0 = h1; h1 = h2;
        k0 = k1; k1 = k2;
        const double frac = rest - a_real;
        if (std::abs(static_cast<double>(h1) / k1 - std::abs(x)) <= 1e-12 * std::max(1.0, std::abs(x)) ||
            frac <= 0.0) {
            break;
        }
        rest = 1.0 / frac;
    }
    if (k1 == 0) throw ValueError("fraction approximation failed");
    return {negative ? -h1 : h1, k1};
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator-(Rational a, Rational b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
}

}  // namespace hinm
