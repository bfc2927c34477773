#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "jetflow/error.hpp"

namespace jetflow {

enum class ScalarMode { exact, floating };

// Coefficient field element: either an exact rational or a binary64 float.
// Arithmetic between the two modes throws ErrorKind::ModeMismatch.
class Scalar {
public:
    Scalar() : value_(mpq_class(0)) {}
    Scalar(int v) : value_(mpq_class(v)) {}
    Scalar(long v) : value_(mpq_class(v)) {}
    explicit Scalar(mpq_class v) : value_(std::move(v)) { std::get<mpq_class>(value_).canonicalize(); }
    explicit Scalar(double v) : value_(v) {}

    static Scalar rational(long num, long den = 1);
    static Scalar from_string(const std::string& num, const std::string& den = "1");
    static Scalar zero(ScalarMode mode) { return from_integer(0, mode); }
    static Scalar one(ScalarMode mode) { return from_integer(1, mode); }
    static Scalar from_integer(long v, ScalarMode mode);

    ScalarMode mode() const noexcept {
        return std::holds_alternative<double>(value_) ? ScalarMode::floating : ScalarMode::exact;
    }
    bool is_exact() const noexcept { return mode() == ScalarMode::exact; }

    const mpq_class& rational_value() const;
    double to_double() const;
    // Same value in the requested mode; exact-from-float is the exact binary value.
    Scalar to_mode(ScalarMode mode) const;

    bool is_zero() const;
    bool is_one() const;
    int sign() const;
    bool is_integer() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    // a += b * c without a temporary in exact mode.
    void add_product(const Scalar& b, const Scalar& c);

    Scalar abs() const;
    Scalar pow(unsigned e) const;

    // Mode-preserving scaling by machine integers.
    Scalar times(long k) const;
    Scalar divided_by(long k) const;

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

    // "p/q", "p" or a round-trippable decimal for floats.
    std::string str() const;
    std::string numerator_str() const;
    std::string denominator_str() const;

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

private:
    void check_same_mode(const Scalar& o) const;

    std::variant<mpq_class, double> value_;
};

} // namespace jetflow
