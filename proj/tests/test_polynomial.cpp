#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "sonc/polynomial.hpp"
#include "sonc/rng.hpp"

using sonc::BoxRegion;
using sonc::ExponentVector;
using sonc::ParseError;
using sonc::Rational;
using sonc::SparsePolynomial;
using sonc::parse_polynomial;

namespace {

SparsePolynomial random_poly(int n, std::mt19937_64& rng, int max_terms = 6, int max_exp = 5) {
    SparsePolynomial p(n);
    const int terms = 1 + static_cast<int>(sonc::rng_below(rng, max_terms));
    for (int t = 0; t < terms; ++t) {
        ExponentVector e(n);
        for (int i = 0; i < n; ++i) e[i] = static_cast<int>(sonc::rng_below(rng, max_exp + 1));
        const long num = static_cast<long>(sonc::rng_below(rng, 21)) - 10;
        const long den = 1 + static_cast<long>(sonc::rng_below(rng, 6));
        p.add_term(e, Rational(num, den));
    }
    return p;
}

std::vector<Rational> random_point(int n, std::mt19937_64& rng) {
    std::vector<Rational> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = Rational(static_cast<long>(sonc::rng_below(rng, 13)) - 6,
                        1 + static_cast<long>(sonc::rng_below(rng, 4)));
    return x;
}

}  // namespace

TEST_CASE("exponent vector helpers") {
    CHECK(sonc::total_degree({2, 3, 0}) == 5);
    CHECK(sonc::total_degree({}) == 0);
    CHECK(sonc::all_even({0, 2, 4}));
    CHECK_FALSE(sonc::all_even({0, 1, 4}));
    const sonc::GradedLexLess less;
    CHECK(less({0, 2}, {3, 0}));        // lower total degree first
    CHECK(less({1, 2}, {2, 1}));        // same degree: lexicographic
    CHECK_FALSE(less({2, 1}, {2, 1}));  // irreflexive
}

TEST_CASE("construction and term bookkeeping") {
    CHECK_THROWS_AS(SparsePolynomial(0), std::invalid_argument);
    SparsePolynomial p(2);
    CHECK(p.is_zero());
    CHECK(p.degree() == -1);
    p.add_term({1, 2}, Rational(3));
    p.add_term({1, 2}, Rational(-3));  // exact cancellation removes the term
    CHECK(p.is_zero());
    CHECK(p.term_count() == 0);
    p.add_term({0, 0}, Rational(1, 2));
    p.add_term({4, 0}, Rational(2));
    CHECK(p.degree() == 4);
    CHECK(p.coeff({4, 0}) == Rational(2));
    CHECK(p.coeff({9, 9}) == Rational(0));
    CHECK(p.support().size() == 2);
}

TEST_CASE("parser basics") {
    const auto p = parse_polynomial("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
    CHECK(p.term_count() == 4);
    CHECK(p.coeff({4, 2}) == Rational(1));
    CHECK(p.coeff({2, 4}) == Rational(1));
    CHECK(p.coeff({2, 2}) == Rational(-3));
    CHECK(p.coeff({0, 0}) == Rational(1));

    CHECK(parse_polynomial("7", 1).coeff({0}) == Rational(7));
    CHECK(parse_polynomial("-x1", 1).coeff({1}) == Rational(-1));
    CHECK(parse_polynomial("1/2 * x1^3", 1).coeff({3}) == Rational(1, 2));
    CHECK(parse_polynomial("x1 x2", 2).coeff({1, 1}) == Rational(1));  // implicit product
    CHECK(parse_polynomial("x2^2", 3).dimension() == 3);
    CHECK(parse_polynomial("2*x1 + 3*x1", 1).coeff({1}) == Rational(5));
    CHECK(parse_polynomial("x1 - x1", 1).is_zero());
}

TEST_CASE("parser rejects malformed input with positions") {
    CHECK_THROWS_AS(parse_polynomial("", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x0", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x3", 2), ParseError);  // index out of range
    CHECK_THROWS_AS(parse_polynomial("x1^", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1^0", 1), ParseError);  // grammar wants E >= 1
    CHECK_THROWS_AS(parse_polynomial("1/0*x1", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 + + x1", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("y1", 1), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1*", 1), ParseError);

    try {
        parse_polynomial("x1 + y2", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);  // byte offset of 'y'
    }
}

TEST_CASE("str round-trips through the parser") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 3));
        const auto p = random_poly(n, rng);
        CHECK(parse_polynomial(p.str(), n) == p);
    }
    CHECK(SparsePolynomial(2).str() == "0");
    CHECK(parse_polynomial("0", 2).is_zero());
    const auto motzkin = parse_polynomial("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
    CHECK(motzkin.str() == "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1");
}

TEST_CASE("arithmetic is a ring homomorphism under evaluation") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 3));
        const auto a = random_poly(n, rng);
        const auto b = random_poly(n, rng);
        const auto x = random_point(n, rng);
        CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
        CHECK((a - b).evaluate(x) == a.evaluate(x) - b.evaluate(x));
        CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
        CHECK(a.scale(Rational(-2, 3)).evaluate(x) == Rational(-2, 3) * a.evaluate(x));
        CHECK(a.pow(3).evaluate(x) == a.evaluate(x).pow(3));
        CHECK((a - a).is_zero());
        CHECK(a.pow(0) == SparsePolynomial::constant(n, Rational(1)));
    }
}

TEST_CASE("evaluate_double tracks exact evaluation") {
    const auto p = parse_polynomial("x1^2 - 2*x1 + 3/4", 1);
    const std::vector<double> x{1.5};
    const std::vector<Rational> xr{Rational(3, 2)};
    CHECK(p.evaluate_double(x) == doctest::Approx(p.evaluate(xr).to_double()));
}

TEST_CASE("rescale preserves support and evaluates as substitution") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 3));
        const auto p = random_poly(n, rng);
        std::vector<Rational> a(n), x(n), ax(n);
        for (int j = 0; j < n; ++j) {
            long num = static_cast<long>(sonc::rng_below(rng, 9)) - 4;
            if (num == 0) num = 5;
            a[j] = Rational(num, 1 + static_cast<long>(sonc::rng_below(rng, 3)));
        }
        const auto q = p.rescale(a);
        CHECK(q.support() == p.support());
        x = random_point(n, rng);
        for (int j = 0; j < n; ++j) ax[j] = a[j] * x[j];
        CHECK(q.evaluate(x) == p.evaluate(ax));
    }
    const auto p = parse_polynomial("x1^2 + x1", 1);
    const std::vector<Rational> zero{Rational(0)};
    CHECK_THROWS_AS(p.rescale(zero), std::invalid_argument);
}

TEST_CASE("BoxRegion membership and rescale") {
    const BoxRegion k({{Rational(-2), Rational(2)}, {Rational(0), Rational(1)}});
    CHECK(k.dimension() == 2);
    CHECK(k.contains(std::vector<Rational>{Rational(2), Rational(0)}));
    CHECK_FALSE(k.interior_contains(std::vector<Rational>{Rational(2), Rational(1, 2)}));
    CHECK(k.interior_contains(std::vector<Rational>{Rational(0), Rational(1, 2)}));
    CHECK_FALSE(k.contains(std::vector<Rational>{Rational(3), Rational(0)}));

    CHECK_THROWS_AS(BoxRegion({{Rational(1), Rational(1)}}), std::invalid_argument);
    CHECK_THROWS_AS(BoxRegion({{Rational(2), Rational(1)}}), std::invalid_argument);
    CHECK_THROWS_AS(BoxRegion({}), std::invalid_argument);

    // x in H iff (a1 x1, a2 x2) in K, including negative scale flips
    std::mt19937_64 rng(5);
    const std::vector<Rational> a{Rational(-3, 2), Rational(2)};
    const BoxRegion h = k.rescale(a);
    for (int i = 0; i < 200; ++i) {
        std::vector<Rational> x{
            Rational(static_cast<long>(sonc::rng_below(rng, 33)) - 16, 8),
            Rational(static_cast<long>(sonc::rng_below(rng, 33)) - 16, 8)};
        const std::vector<Rational> ax{a[0] * x[0], a[1] * x[1]};
        CHECK(h.contains(x) == k.contains(ax));
        CHECK(h.interior_contains(x) == k.interior_contains(ax));
    }
}
