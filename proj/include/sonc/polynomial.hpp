#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

/// Exponent vector of a monomial; entry i is the power of x_{i+1}.
/// Entries are nonnegative and the length equals the ambient dimension.
using ExponentVector = std::vector<int>;

int total_degree(const ExponentVector& e);
bool all_even(const ExponentVector& e);

/// Strict weak order: lower total degree first, then lexicographic.
struct GradedLexLess {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const;
};

/// Thrown by the polynomial text parser; position is a byte offset into
/// the input string.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, size_t position);
    size_t position() const { return position_; }

private:
    size_t position_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vector; zero coefficients are never stored,
/// so support() is exactly the key set and the zero polynomial has an
/// empty term map. Immutable in spirit: every operation returns a fresh
/// value and instances are safe to share across threads.
class SparsePolynomial {
public:
    using TermMap = std::map<ExponentVector, Rational, GradedLexLess>;

    explicit SparsePolynomial(int n);

    static SparsePolynomial constant(int n, const Rational& c);
    static SparsePolynomial monomial(int n, ExponentVector e, const Rational& c);

    int dimension() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    size_t term_count() const { return terms_.size(); }

    const TermMap& terms() const { return terms_; }
    std::vector<ExponentVector> support() const;
    Rational coeff(const ExponentVector& e) const;

    /// Adds c * x^e, merging with an existing term and dropping the term
    /// if the merged coefficient cancels to zero.
    void add_term(const ExponentVector& e, const Rational& c);

    SparsePolynomial operator+(const SparsePolynomial& o) const;
    SparsePolynomial operator-(const SparsePolynomial& o) const;
    SparsePolynomial operator*(const SparsePolynomial& o) const;
    SparsePolynomial scale(const Rational& c) const;
    SparsePolynomial pow(unsigned k) const;

    bool operator==(const SparsePolynomial& o) const {
        return n_ == o.n_ && terms_ == o.terms_;
    }
    bool operator!=(const SparsePolynomial& o) const { return !(*this == o); }

    /// Exact value at a rational point of matching dimension.
    Rational evaluate(std::span<const Rational> point) const;

    /// Float evaluation for diagnostics only; never on the certification path.
    double evaluate_double(std::span<const double> point) const;

    /// Variable substitution x_i -> a_i * x_i. The support is unchanged;
    /// the coefficient at alpha picks up the factor a^alpha. All a_i must
    /// be nonzero.
    SparsePolynomial rescale(std::span<const Rational> a) const;

    /// Canonical text form: terms in descending graded-lex order,
    /// lowest-term coefficients. Round-trips through parse_polynomial.
    std::string str() const;

private:
    int n_;
    TermMap terms_;
};

/// Parses the polynomial text grammar:
///   sum of terms; term = [sign] coefficient ['*'] monomial
///                      | [sign] monomial | [sign] coefficient;
///   coefficient = integer or integer '/' positive-integer;
///   monomial = product of factors xI['^'E], I in 1..n, E >= 1.
/// Whitespace is ignored. Throws ParseError with byte position.
SparsePolynomial parse_polynomial(std::string_view text, int n);

/// Axis-aligned box with rational endpoints and nonempty interior
/// (lo_i < hi_i on every axis).
class BoxRegion {
public:
    using Interval = std::pair<Rational, Rational>;

    explicit BoxRegion(std::vector<Interval> intervals);

    int dimension() const { return static_cast<int>(intervals_.size()); }
    const std::vector<Interval>& intervals() const { return intervals_; }

    bool contains(std::span<const Rational> x) const;
    bool interior_contains(std::span<const Rational> x) const;

    /// Region H with (a_1 x_1, ..., a_n x_n) in K iff x in H: interval i
    /// becomes [lo_i/a_i, hi_i/a_i], reordered when a_i < 0.
    BoxRegion rescale(std::span<const Rational> a) const;

private:
    std::vector<Interval> intervals_;
};

}  // namespace sonc
