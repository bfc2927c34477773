#include "jetflow/scalar.hpp"

#include <cmath>
#include <cstdio>

namespace jetflow {

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(std::move(q));
}

Scalar Scalar::from_string(const std::string& num, const std::string& den) {
    mpz_class n, d;
    if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0)
        throw Error(ErrorKind::InvalidArgument, "bad integer literal '" + num + "/" + den + "'");
    if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    return Scalar(mpq_class(n, d));
}

Scalar Scalar::from_integer(long v, ScalarMode mode) {
    return mode == ScalarMode::exact ? Scalar(mpq_class(v)) : Scalar(static_cast<double>(v));
}

const mpq_class& Scalar::rational_value() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return *q;
    throw Error(ErrorKind::ModeMismatch, "rational value requested from a float scalar");
}

double Scalar::to_double() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
    return std::get<double>(value_);
}

Scalar Scalar::to_mode(ScalarMode m) const {
    if (m == mode()) return *this;
    if (m == ScalarMode::floating) return Scalar(to_double());
    double d = std::get<double>(value_);
    if (!std::isfinite(d)) throw Error(ErrorKind::NonFinite, "cannot convert non-finite float to rational");
    return Scalar(mpq_class(d));
}

bool Scalar::is_zero() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q) == 0;
    return std::get<double>(value_) == 0.0;
}

bool Scalar::is_one() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return *q == 1;
    return std::get<double>(value_) == 1.0;
}

int Scalar::sign() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
    double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

bool Scalar::is_integer() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_den() == 1;
    double d = std::get<double>(value_);
    return std::isfinite(d) && std::floor(d) == d;
}

void Scalar::check_same_mode(const Scalar& o) const {
    if (value_.index() != o.value_.index())
        throw Error(ErrorKind::ModeMismatch, "exact and float scalars mixed in one computation");
}

Scalar Scalar::operator-() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
    return Scalar(-std::get<double>(value_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same_mode(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) *q += std::get<mpq_class>(o.value_);
    else std::get<double>(value_) += std::get<double>(o.value_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same_mode(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) *q -= std::get<mpq_class>(o.value_);
    else std::get<double>(value_) -= std::get<double>(o.value_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same_mode(o);
    if (auto* q = std::get_if<mpq_class>(&value_)) *q *= std::get<mpq_class>(o.value_);
    else std::get<double>(value_) *= std::get<double>(o.value_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same_mode(o);
    if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero scalar");
    if (auto* q = std::get_if<mpq_class>(&value_)) *q /= std::get<mpq_class>(o.value_);
    else std::get<double>(value_) /= std::get<double>(o.value_);
    return *this;
}

void Scalar::add_product(const Scalar& b, const Scalar& c) {
    check_same_mode(b);
    check_same_mode(c);
    if (auto* q = std::get_if<mpq_class>(&value_)) {
        thread_local mpq_class tmp;
        mpq_mul(tmp.get_mpq_t(), std::get<mpq_class>(b.value_).get_mpq_t(),
                std::get<mpq_class>(c.value_).get_mpq_t());
        *q += tmp;
    } else {
        std::get<double>(value_) += std::get<double>(b.value_) * std::get<double>(c.value_);
    }
}

Scalar Scalar::abs() const {
    return sign() < 0 ? -*this : *this;
}

Scalar Scalar::pow(unsigned e) const {
    Scalar result = one(mode());
    Scalar base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Scalar Scalar::times(long k) const { return *this * from_integer(k, mode()); }

Scalar Scalar::divided_by(long k) const { return *this / from_integer(k, mode()); }

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.value_.index() != b.value_.index()) return false;
    if (auto* q = std::get_if<mpq_class>(&a.value_)) return *q == std::get<mpq_class>(b.value_);
    return std::get<double>(a.value_) == std::get<double>(b.value_);
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    a.check_same_mode(b);
    if (auto* q = std::get_if<mpq_class>(&a.value_)) {
        int c = cmp(*q, std::get<mpq_class>(b.value_));
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    return std::get<double>(a.value_) <=> std::get<double>(b.value_);
}

std::string Scalar::str() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
    return buf;
}

std::string Scalar::numerator_str() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_num().get_str();
    return str();
}

std::string Scalar::denominator_str() const {
    if (auto* q = std::get_if<mpq_class>(&value_)) return q->get_den().get_str();
    return "1";
}

} // namespace jetflow
