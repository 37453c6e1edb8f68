#include "sonc/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace sonc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    // strip surrounding whitespace
    size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::string_view s = text.substr(b, e - b);
    if (s.empty()) throw std::invalid_argument("Rational: empty string");

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        s.remove_prefix(1);
        if (s.empty()) throw std::invalid_argument("Rational: sign without digits");
    }

    Rational result;
    if (size_t slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (!all_digits(ns) || !all_digits(ds))
            throw std::invalid_argument("Rational: malformed fraction '" + std::string(text) + "'");
        mpz_class num(std::string(ns), 10), den(std::string(ds), 10);
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        result = Rational(num, den);
    } else if (size_t dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view is = s.substr(0, dot), fs = s.substr(dot + 1);
        if (is.empty() && fs.empty())
            throw std::invalid_argument("Rational: malformed decimal '" + std::string(text) + "'");
        if ((!is.empty() && !all_digits(is)) || (!fs.empty() && !all_digits(fs)))
            throw std::invalid_argument("Rational: malformed decimal '" + std::string(text) + "'");
        mpz_class scaled(std::string(is) + std::string(fs), 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fs.size());
        result = Rational(scaled, den);
    } else {
        if (!all_digits(s))
            throw std::invalid_argument("Rational: malformed number '" + std::string(text) + "'");
        result = Rational(mpz_class(std::string(s), 10), mpz_class(1));
    }
    return negative ? result.neg() : result;
}

Rational Rational::pow(unsigned long e) const {
    if (e == 0) return Rational(1);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), v_.get_den().get_mpz_t(), e);
    Rational r;
    r.v_ = mpq_class(n, d);  // coprime inputs stay coprime under powers
    return r;
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

double log_mpz(const mpz_class& z) {
    if (z <= 0) throw std::domain_error("log_mpz: nonpositive argument");
    signed long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

}  // namespace sonc
