#include "sonc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace sonc {

int total_degree(const ExponentVector& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
}

bool all_even(const ExponentVector& e) {
    for (int v : e)
        if (v % 2 != 0) return false;
    return true;
}

bool GradedLexLess::operator()(const ExponentVector& a, const ExponentVector& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

ParseError::ParseError(std::string message, size_t position)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

SparsePolynomial::SparsePolynomial(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("SparsePolynomial: dimension must be >= 1");
}

SparsePolynomial SparsePolynomial::constant(int n, const Rational& c) {
    SparsePolynomial p(n);
    p.add_term(ExponentVector(n, 0), c);
    return p;
}

SparsePolynomial SparsePolynomial::monomial(int n, ExponentVector e, const Rational& c) {
    SparsePolynomial p(n);
    p.add_term(e, c);
    return p;
}

int SparsePolynomial::degree() const {
    if (terms_.empty()) return -1;
    return total_degree(terms_.rbegin()->first);
}

std::vector<ExponentVector> SparsePolynomial::support() const {
    std::vector<ExponentVector> s;
    s.reserve(terms_.size());
    for (const auto& [e, c] : terms_) s.push_back(e);
    return s;
}

Rational SparsePolynomial::coeff(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

void SparsePolynomial::add_term(const ExponentVector& e, const Rational& c) {
    if (static_cast<int>(e.size()) != n_)
        throw std::invalid_argument("add_term: exponent vector length mismatch");
    for (int v : e)
        if (v < 0) throw std::invalid_argument("add_term: negative exponent");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& o) const {
    if (n_ != o.n_) throw std::invalid_argument("polynomial add: dimension mismatch");
    SparsePolynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

SparsePolynomial SparsePolynomial::operator-(const SparsePolynomial& o) const {
    if (n_ != o.n_) throw std::invalid_argument("polynomial sub: dimension mismatch");
    SparsePolynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c.neg());
    return r;
}

SparsePolynomial SparsePolynomial::operator*(const SparsePolynomial& o) const {
    if (n_ != o.n_) throw std::invalid_argument("polynomial mul: dimension mismatch");
    SparsePolynomial r(n_);
    ExponentVector e(n_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

SparsePolynomial SparsePolynomial::scale(const Rational& c) const {
    SparsePolynomial r(n_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

SparsePolynomial SparsePolynomial::pow(unsigned k) const {
    SparsePolynomial result = constant(n_, Rational(1));
    SparsePolynomial base = *this;
    while (k > 0) {
        if (k & 1u) result = result * base;
        base = (k >>= 1) ? base * base : base;
    }
    return result;
}

namespace {

// Per-variable power tables up to the largest exponent used; avoids
// recomputing x_i^k term by term.
template <typename Scalar, typename PowFn>
std::vector<std::vector<Scalar>> power_tables(const SparsePolynomial::TermMap& terms, int n,
                                              std::span<const Scalar> point, PowFn mul) {
    std::vector<int> max_exp(n, 0);
    for (const auto& [e, c] : terms)
        for (int i = 0; i < n; ++i) max_exp[i] = std::max(max_exp[i], e[i]);
    std::vector<std::vector<Scalar>> tables(n);
    for (int i = 0; i < n; ++i) {
        tables[i].resize(max_exp[i] + 1);
        tables[i][0] = Scalar(1);
        for (int k = 1; k <= max_exp[i]; ++k) tables[i][k] = mul(tables[i][k - 1], point[i]);
    }
    return tables;
}

}  // namespace

Rational SparsePolynomial::evaluate(std::span<const Rational> point) const {
    if (static_cast<int>(point.size()) != n_)
        throw std::invalid_argument("evaluate: point dimension mismatch");
    auto tables = power_tables<Rational>(terms_, n_, point,
                                         [](const Rational& a, const Rational& b) { return a * b; });
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < n_; ++i)
            if (e[i] > 0) term *= tables[i][e[i]];
        acc += term;
    }
    return acc;
}

double SparsePolynomial::evaluate_double(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != n_)
        throw std::invalid_argument("evaluate_double: point dimension mismatch");
    auto tables = power_tables<double>(terms_, n_, point, [](double a, double b) { return a * b; });
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.to_double();
        for (int i = 0; i < n_; ++i)
            if (e[i] > 0) term *= tables[i][e[i]];
        acc += term;
    }
    return acc;
}

SparsePolynomial SparsePolynomial::rescale(std::span<const Rational> a) const {
    if (static_cast<int>(a.size()) != n_)
        throw std::invalid_argument("rescale: scale vector dimension mismatch");
    for (const Rational& ai : a)
        if (ai.is_zero()) throw std::invalid_argument("rescale: zero entry in scale vector");
    auto tables = power_tables<Rational>(terms_, n_, a,
                                         [](const Rational& x, const Rational& y) { return x * y; });
    SparsePolynomial r(n_);
    for (const auto& [e, c] : terms_) {
        Rational factor(1);
        for (int i = 0; i < n_; ++i)
            if (e[i] > 0) factor *= tables[i][e[i]];
        r.terms_.emplace(e, c * factor);  // a_i != 0, so coefficients stay nonzero
    }
    return r;
}

std::string SparsePolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending graded-lex
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        bool negative = c.sign() < 0;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        Rational mag = c.abs();
        bool is_const = total_degree(e) == 0;
        if (is_const) {
            os << mag.str();
        } else {
            bool printed_coeff = false;
            if (mag != Rational(1)) {
                os << mag.str();
                printed_coeff = true;
            }
            bool first_factor = true;
            for (int i = 0; i < n_; ++i) {
                if (e[i] == 0) continue;
                if (printed_coeff || !first_factor) os << "*";
                os << "x" << (i + 1);
                if (e[i] > 1) os << "^" << e[i];
                first_factor = false;
                printed_coeff = false;
            }
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, int n) : s_(text), n_(n) {}

    SparsePolynomial run() {
        SparsePolynomial poly(n_);
        skip_ws();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                sign = (get() == '-') ? -1 : 1;
            } else if (!first) {
                throw ParseError("expected '+' or '-' between terms", pos_);
            }
            parse_term(poly, sign);
            first = false;
            skip_ws();
        }
        return poly;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    mpz_class parse_integer(const char* what) {
        skip_ws();
        size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == start) throw ParseError(std::string("expected ") + what, pos_);
        return mpz_class(std::string(s_.substr(start, pos_ - start)), 10);
    }

    // factor: xI['^'E]; updates the exponent vector in place
    void parse_factor(ExponentVector& e) {
        skip_ws();
        size_t var_pos = pos_;
        ++pos_;  // consume 'x'
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("expected variable index after 'x'", pos_);
        mpz_class idx = parse_integer("variable index");
        if (idx < 1 || idx > n_)
            throw ParseError("variable index out of range (have x" + idx.get_str() +
                                 ", dimension is " + std::to_string(n_) + ")",
                             var_pos);
        int i = static_cast<int>(idx.get_ui()) - 1;
        int exp = 1;
        skip_ws();
        if (peek() == '^') {
            get();
            skip_ws();
            size_t exp_pos = pos_;
            if (peek() == '-') throw ParseError("negative exponent", exp_pos);
            mpz_class ev = parse_integer("exponent");
            if (ev < 1) throw ParseError("exponent must be >= 1", exp_pos);
            if (ev > 100000) throw ParseError("exponent too large", exp_pos);
            exp = static_cast<int>(ev.get_ui());
        }
        e[i] += exp;
    }

    // monomial: factor (['*'] factor)*
    void parse_monomial(ExponentVector& e) {
        parse_factor(e);
        while (true) {
            skip_ws();
            if (peek() == '*') {
                size_t star_pos = pos_;
                get();
                skip_ws();
                if (peek() != 'x') throw ParseError("expected variable after '*'", star_pos + 1);
                parse_factor(e);
            } else if (peek() == 'x') {
                parse_factor(e);
            } else {
                break;
            }
        }
    }

    void parse_term(SparsePolynomial& poly, int sign) {
        skip_ws();
        if (at_end()) throw ParseError("expected term", pos_);
        Rational coeff(1);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            mpz_class num = parse_integer("coefficient");
            mpz_class den(1);
            skip_ws();
            if (peek() == '/') {
                get();
                size_t den_pos = pos_;
                den = parse_integer("denominator");
                if (den == 0) throw ParseError("denominator must be positive", den_pos);
            }
            coeff = Rational(num, den);
            have_coeff = true;
        }
        ExponentVector e(n_, 0);
        skip_ws();
        bool have_monomial = false;
        if (have_coeff && peek() == '*') {
            size_t star_pos = pos_;
            get();
            skip_ws();
            if (peek() != 'x') throw ParseError("expected variable after '*'", star_pos + 1);
            parse_monomial(e);
            have_monomial = true;
        } else if (peek() == 'x') {
            parse_monomial(e);
            have_monomial = true;
        }
        if (!have_coeff && !have_monomial)
            throw ParseError("expected coefficient or variable", pos_);
        if (sign < 0) coeff = coeff.neg();
        poly.add_term(e, coeff);
    }

    std::string_view s_;
    int n_;
    size_t pos_ = 0;
};

}  // namespace

SparsePolynomial parse_polynomial(std::string_view text, int n) {
    return PolyParser(text, n).run();
}

// ---------------------------------------------------------------------------
// BoxRegion
// ---------------------------------------------------------------------------

BoxRegion::BoxRegion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw std::invalid_argument("BoxRegion: dimension must be >= 1");
    for (const auto& [lo, hi] : intervals_)
        if (!(lo < hi)) throw std::invalid_argument("BoxRegion: need lo < hi on every axis");
}

bool BoxRegion::contains(std::span<const Rational> x) const {
    if (x.size() != intervals_.size())
        throw std::invalid_argument("BoxRegion::contains: dimension mismatch");
    for (size_t i = 0; i < intervals_.size(); ++i)
        if (x[i] < intervals_[i].first || x[i] > intervals_[i].second) return false;
    return true;
}

bool BoxRegion::interior_contains(std::span<const Rational> x) const {
    if (x.size() != intervals_.size())
        throw std::invalid_argument("BoxRegion::interior_contains: dimension mismatch");
    for (size_t i = 0; i < intervals_.size(); ++i)
        if (x[i] <= intervals_[i].first || x[i] >= intervals_[i].second) return false;
    return true;
}

BoxRegion BoxRegion::rescale(std::span<const Rational> a) const {
    if (a.size() != intervals_.size())
        throw std::invalid_argument("BoxRegion::rescale: dimension mismatch");
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (size_t i = 0; i < intervals_.size(); ++i) {
        if (a[i].is_zero()) throw std::invalid_argument("BoxRegion::rescale: zero entry in scale vector");
        Rational lo = intervals_[i].first / a[i];
        Rational hi = intervals_[i].second / a[i];
        if (hi < lo) std::swap(lo, hi);
        out.emplace_back(std::move(lo), std::move(hi));
    }
    return BoxRegion(std::move(out));
}

}  // namespace sonc
