#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <string>

#include "stochpath/errors.hpp"

namespace stochpath {

/// Exact rational number, always kept in lowest terms with positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

using Weight = std::int64_t;

/// Parses "3", "-7/10" or a decimal literal like "0.25" (at most 9 fractional
/// digits). Decimals are converted exactly, never rounded.
Rational parse_rational(const std::string& text);

/// Lowest-terms rendering: "7/10", integers without denominator.
std::string to_fraction_string(const Rational& q);

/// Decimal rendering, truncated to `digits` fractional digits with a trailing
/// "..." marker when inexact.
std::string to_decimal_string(const Rational& q, int digits = 12);

double to_double(const Rational& q);

/// Rational extended with +infinity (value of a truncated sum on runs that
/// never reach the target).
class ExtRational {
  public:
    ExtRational() : finite_(true), value_(0) {}
    explicit ExtRational(Rational v) : finite_(true), value_(std::move(v)) {}
    static ExtRational infinity() {
        ExtRational e;
        e.finite_ = false;
        return e;
    }

    bool is_finite() const { return finite_; }
    const Rational& value() const;

    ExtRational operator+(const ExtRational& o) const;
    ExtRational operator*(const Rational& c) const;
    bool operator==(const ExtRational& o) const;
    bool operator<(const ExtRational& o) const;
    bool operator<=(const ExtRational& o) const { return *this < o || *this == o; }

    std::string str() const;

  private:
    bool finite_;
    Rational value_;
};

/// Integer weight extended with +infinity (shortest-path game tables, worst
/// cases of strategies that may never reach the target).
class ExtWeight {
  public:
    ExtWeight() : finite_(true), value_(0) {}
    explicit ExtWeight(Weight v) : finite_(true), value_(v) {}
    static ExtWeight infinity() {
        ExtWeight e;
        e.finite_ = false;
        return e;
    }

    bool is_finite() const { return finite_; }
    Weight value() const;

    /// Absorbing addition: inf + k = inf.
    ExtWeight operator+(Weight k) const {
        return finite_ ? ExtWeight(value_ + k) : infinity();
    }
    bool operator==(const ExtWeight& o) const {
        return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
    }
    bool operator<(const ExtWeight& o) const {
        if (!o.finite_) return finite_;
        return finite_ && value_ < o.value_;
    }
    bool operator<=(const ExtWeight& o) const { return *this < o || *this == o; }

    std::string str() const;

  private:
    bool finite_;
    Weight value_;
};

ExtWeight min(const ExtWeight& a, const ExtWeight& b);
ExtWeight max(const ExtWeight& a, const ExtWeight& b);

} // namespace stochpath
