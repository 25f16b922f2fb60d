#pragma once

#include <ostream>
#include <string>

#include "arith.hpp"

namespace qfc {

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rational_pow(i64 p, int e) {
    BigInt t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rational(t) : Rational(BigInt(1), t);
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) fail(ErrorKind::Parse, "not a rational: " + s);
    q.canonicalize();
    return q;
}

// a + b*sqrt(p) + i*c + i*d*sqrt(p) with rational coordinates.
class AlgebraicValue {
public:
    explicit AlgebraicValue(i64 p = 2) : p_(p) {}
    AlgebraicValue(i64 p, Rational a, Rational b = 0, Rational c = 0, Rational d = 0)
        : p_(p), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    static AlgebraicValue rational(i64 p, const Rational& q) { return {p, q}; }
    static AlgebraicValue sqrt_p(i64 p) { return {p, 0, 1}; }
    static AlgebraicValue imag(i64 p) { return {p, 0, 0, 1}; }

    // p^(twice/2); half-integral exponents carry one factor sqrt(p).
    static AlgebraicValue half_power(i64 p, int twice) {
        int e = twice >= 0 ? twice / 2 : -((-twice + 1) / 2);
        AlgebraicValue v(p, rational_pow(p, e));
        if (twice - 2 * e == 1) v = v * sqrt_p(p);
        return v;
    }

    i64 prime() const { return p_; }
    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Rational& c() const { return c_; }
    const Rational& d() const { return d_; }

    bool is_rational() const { return b_ == 0 && c_ == 0 && d_ == 0; }

    Rational to_rational() const {
        if (!is_rational()) fail(ErrorKind::NonRationalResult, "value does not collapse to a rational: " + str());
        return a_;
    }

    std::string str() const {
        return a_.get_str() + " + " + b_.get_str() + "*r + i*" + c_.get_str() + " + i*" + d_.get_str() + "*r (r^2=" +
               std::to_string(p_) + ")";
    }

    friend AlgebraicValue operator+(const AlgebraicValue& x, const AlgebraicValue& y) {
        check(x, y);
        return {x.p_, x.a_ + y.a_, x.b_ + y.b_, x.c_ + y.c_, x.d_ + y.d_};
    }
    friend AlgebraicValue operator-(const AlgebraicValue& x, const AlgebraicValue& y) {
        check(x, y);
        return {x.p_, x.a_ - y.a_, x.b_ - y.b_, x.c_ - y.c_, x.d_ - y.d_};
    }
    friend AlgebraicValue operator*(const AlgebraicValue& x, const AlgebraicValue& y) {
        check(x, y);
        const Rational p(static_cast<long>(x.p_));
        Rational a = x.a_ * y.a_ + x.b_ * y.b_ * p - x.c_ * y.c_ - x.d_ * y.d_ * p;
        Rational b = x.a_ * y.b_ + x.b_ * y.a_ - x.c_ * y.d_ - x.d_ * y.c_;
        Rational c = x.a_ * y.c_ + x.c_ * y.a_ + (x.b_ * y.d_ + x.d_ * y.b_) * p;
        Rational d = x.a_ * y.d_ + x.d_ * y.a_ + x.b_ * y.c_ + x.c_ * y.b_;
        return {x.p_, a, b, c, d};
    }
    friend AlgebraicValue operator*(const Rational& q, const AlgebraicValue& x) {
        return {x.p_, q * x.a_, q * x.b_, q * x.c_, q * x.d_};
    }
    AlgebraicValue& operator+=(const AlgebraicValue& y) { return *this = *this + y; }

    friend bool operator==(const AlgebraicValue& x, const AlgebraicValue& y) {
        return x.p_ == y.p_ && x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

private:
    static void check(const AlgebraicValue& x, const AlgebraicValue& y) {
        if (x.p_ != y.p_) fail(ErrorKind::InvalidArgument, "AlgebraicValue: mixed primes");
    }

    i64 p_;
    Rational a_, b_, c_, d_;
};

inline std::ostream& operator<<(std::ostream& os, const AlgebraicValue& v) { return os << v.str(); }

} // namespace qfc
