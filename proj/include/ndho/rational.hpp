#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ndho/errors.hpp"

namespace ndho {

// Exact rational number on 64-bit numerator/denominator, always stored in
// lowest terms with a positive denominator. Arithmetic goes through 128-bit
// intermediates and throws OverflowError instead of wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(long long n, long long d);

    static Rational parse(std::string_view text);  // "p", "-p", "p/q"

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);  // throws DomainError on /0

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    std::strong_ordering operator<=>(const Rational& o) const;

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    Rational pow(long long e) const;  // 0^negative throws DomainError
    Rational reciprocal() const;

    // Exact square root if this is a perfect square of a rational.
    std::optional<Rational> sqrt_exact() const;

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    // Best rational with denominator <= max_den near x (continued fractions);
    // nullopt when the result does not reproduce x to within tol (relative).
    static std::optional<Rational> from_double(double x, long long max_den, double tol);

private:
    long long num_;
    long long den_;
    void normalize();
};

// Largest s with s^2 | n, for n >= 0; returns the square-free remainder f
// where n = s^2 * f. Gives up (s = 1) past the trial-division bound.
void square_split(long long n, long long& square_root, long long& square_free);

}  // namespace ndho
