#include "ndho/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace ndho {

namespace {

using int128 = __int128;

constexpr long long kMax = std::numeric_limits<long long>::max();
constexpr long long kMin = std::numeric_limits<long long>::min();

long long narrow(int128 v) {
    if (v > int128(kMax) || v < int128(kMin)) throw OverflowError("rational arithmetic overflow");
    return static_cast<long long>(v);
}

int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational::Rational(long long n, long long d) : num_(n), den_(d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = narrow(-int128(num_));
        den_ = narrow(-int128(den_));
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    num_ /= g;
    den_ /= g;
}

Rational Rational::parse(std::string_view text) {
    auto bad = [&] { throw Error("invalid rational '" + std::string(text) + "'"); };
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    auto read_int = [&](long long& out) {
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) bad();
        int128 v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = v * 10 + (text[i] - '0');
            if (v > int128(kMax)) throw OverflowError("rational literal too large");
            ++i;
        }
        out = static_cast<long long>(v);
    };
    long long n = 0, d = 1;
    read_int(n);
    if (i < text.size() && text[i] == '/') {
        ++i;
        read_int(d);
    }
    if (i != text.size()) bad();
    return Rational(neg ? narrow(-int128(n)) : n, d);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-int128(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    int128 n = int128(num_) * o.den_ + int128(o.num_) * den_;
    int128 d = int128(den_) * o.den_;
    int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    int128 n = int128(num_) * o.num_;
    int128 d = int128(den_) * o.den_;
    int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw DomainError("division by zero rational");
    return *this *= o.reciprocal();
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    int128 lhs = int128(num_) * o.den_;
    int128 rhs = int128(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::pow(long long e) const {
    if (e == 0) return Rational(1);
    if (is_zero() && e < 0) throw DomainError("zero raised to negative power");
    Rational base = e < 0 ? reciprocal() : *this;
    long long n = e < 0 ? -e : e;
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= base;
        base = (n >>= 1) ? base * base : base;
    }
    return acc;
}

Rational Rational::reciprocal() const {
    if (num_ == 0) throw DomainError("reciprocal of zero");
    return Rational(den_, num_);
}

std::optional<Rational> Rational::sqrt_exact() const {
    if (num_ < 0) return std::nullopt;
    auto isqrt = [](long long v) -> std::optional<long long> {
        long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
        for (long long c = r - 2; c <= r + 2; ++c)
            if (c >= 0 && c * c == v) return c;
        return std::nullopt;
    };
    auto sn = isqrt(num_);
    auto sd = isqrt(den_);
    if (sn && sd) return Rational(*sn, *sd);
    return std::nullopt;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::from_double(double x, long long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // Continued fraction convergents.
    double v = x;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        double fa = std::floor(v);
        if (fa > 9e17 || fa < -9e17) break;
        long long a = static_cast<long long>(fa);
        int128 p2 = int128(a) * p1 + p0;
        int128 q2 = int128(a) * q1 + q0;
        if (q2 > max_den || p2 > int128(kMax) || p2 < int128(kMin)) break;
        p0 = p1;
        q0 = q1;
        p1 = static_cast<long long>(p2);
        q1 = static_cast<long long>(q2);
        double rem = v - fa;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    if (q1 == 0) return std::nullopt;
    Rational cand(p1, q1);
    double err = std::abs(cand.to_double() - x);
    if (err <= tol * std::max(1.0, std::abs(x))) return cand;
    return std::nullopt;
}

void square_split(long long n, long long& square_root, long long& square_free) {
    square_root = 1;
    square_free = n;
    if (n <= 0) return;
    if (n > 1'000'000'000'000LL) return;  // give up, keep the radicand intact
    long long s = 1, f = 1, v = n;
    for (long long p = 2; p * p <= v; ++p) {
        int e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2 == 1) f *= p;
    }
    f *= v;
    square_root = s;
    square_free = f;
}

}  // namespace ndho
