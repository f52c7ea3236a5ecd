#include "stochpath/rational.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cctype>
#include <sstream>

namespace stochpath {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_integer_token(num) || !is_integer_token(den))
            throw Error("invalid rational literal '" + text + "'");
        BigInt n(num), d(den);
        if (d <= 0) throw Error("nonpositive denominator in '" + text + "'");
        return Rational(n, d);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (!is_integer_token(whole) || frac.empty() || !is_integer_token(frac) ||
            frac[0] == '-' || frac[0] == '+')
            throw Error("invalid decimal literal '" + text + "'");
        if (frac.size() > 9)
            throw Error("decimal literal '" + text + "' has more than 9 fractional digits");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt w(whole);
        BigInt f(frac);
        bool negative = text[0] == '-';
        BigInt n = abs(w) * scale + f;
        if (negative) n = -n;
        return Rational(n, scale);
    }
    if (!is_integer_token(text)) throw Error("invalid rational literal '" + text + "'");
    return Rational(BigInt(text));
}

std::string to_fraction_string(const Rational& q) {
    std::ostringstream out;
    out << q;
    return out.str();
}

std::string to_decimal_string(const Rational& q, int digits) {
    BigInt num = numerator(q);
    BigInt den = denominator(q);
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt whole = num / den;
    BigInt rem = num % den;
    std::ostringstream out;
    if (negative && (whole != 0 || rem != 0)) out << '-';
    out << whole;
    if (rem == 0) return out.str();
    out << '.';
    for (int i = 0; i < digits && rem != 0; ++i) {
        rem *= 10;
        out << rem / den;
        rem %= den;
    }
    if (rem != 0) out << "...";
    return out.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

const Rational& ExtRational::value() const {
    if (!finite_) throw Error("value() on +inf");
    return value_;
}

ExtRational ExtRational::operator+(const ExtRational& o) const {
    if (!finite_ || !o.finite_) return infinity();
    return ExtRational(value_ + o.value_);
}

ExtRational ExtRational::operator*(const Rational& c) const {
    if (!finite_) return c == 0 ? ExtRational(Rational(0)) : infinity();
    return ExtRational(value_ * c);
}

bool ExtRational::operator==(const ExtRational& o) const {
    return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
}

bool ExtRational::operator<(const ExtRational& o) const {
    if (!o.finite_) return finite_;
    return finite_ && value_ < o.value_;
}

std::string ExtRational::str() const {
    return finite_ ? to_fraction_string(value_) : "inf";
}

Weight ExtWeight::value() const {
    if (!finite_) throw Error("value() on +inf");
    return value_;
}

std::string ExtWeight::str() const {
    return finite_ ? std::to_string(value_) : "inf";
}

ExtWeight min(const ExtWeight& a, const ExtWeight& b) { return a < b ? a : b; }
ExtWeight max(const ExtWeight& a, const ExtWeight& b) { return a < b ? b : a; }

} // namespace stochpath
