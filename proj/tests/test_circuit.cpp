#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "sonc/certificate.hpp"
#include "sonc/circuit.hpp"
#include "sonc/rng.hpp"

using sonc::CircuitData;
using sonc::CircuitDefect;
using sonc::ExponentVector;
using sonc::NotACircuit;
using sonc::Rational;
using sonc::parse_polynomial;

namespace {

CircuitDefect defect_of(const char* text, int n) {
    try {
        sonc::detect_circuit(parse_polynomial(text, n));
    } catch (const NotACircuit& e) {
        return e.reason();
    }
    return CircuitDefect::none;
}

}  // namespace

TEST_CASE("degenerate single-term circuit") {
    const auto c = sonc::detect_circuit(parse_polynomial("5*x1^2", 1));
    CHECK(c.degenerate());
    CHECK(c.outer == std::vector<ExponentVector>{{2}});
    CHECK(c.outer_coeffs == std::vector<Rational>{Rational(5)});
    CHECK(c.inner == ExponentVector{2});
    CHECK(c.inner_coeff == Rational(0));
    CHECK(c.weights == std::vector<Rational>{Rational(1)});
    const auto cp = sonc::circuit_number_power(c);
    CHECK(cp.q == 1);
    CHECK(cp.theta_q == Rational(5));
    CHECK(sonc::is_nonnegative(c));
    CHECK(sonc::to_polynomial(c) == parse_polynomial("5*x1^2", 1));
    CHECK_FALSE(sonc::find_negative_point(c, 1000).has_value());
}

TEST_CASE("Motzkin polynomial anatomy") {
    const auto f = parse_polynomial("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
    const auto c = sonc::detect_circuit(f);
    CHECK(c.outer == std::vector<ExponentVector>{{0, 0}, {2, 4}, {4, 2}});
    CHECK(c.inner == ExponentVector{2, 2});
    CHECK(c.inner_coeff == Rational(-3));
    CHECK(c.weights == std::vector<Rational>(3, Rational(1, 3)));

    const auto oracle = oracles::barycentric(c.outer, c.inner);
    REQUIRE(oracle.status == oracles::Solve::Status::ok);
    CHECK(oracle.weights == c.weights);

    const auto cp = sonc::circuit_number_power(c);
    CHECK(cp.q == 3);
    CHECK(cp.theta_q == Rational(27));
    CHECK(sonc::circuit_number_estimate(cp) == doctest::Approx(3.0));
    CHECK(sonc::is_nonnegative(c));  // |-3|^3 = 27 <= 27, exactly on the boundary
    CHECK(sonc::to_polynomial(c) == f);
    CHECK_FALSE(sonc::find_negative_point(c, 20000).has_value());
}

TEST_CASE("inner choice among all-even supports") {
    // removing x1^2 leaves {1, x1^4}, the only split with an interior point
    const auto c = sonc::detect_circuit(parse_polynomial("x1^4 + x1^2 + 1", 1));
    CHECK(c.outer == std::vector<ExponentVector>{{0}, {4}});
    CHECK(c.inner == ExponentVector{2});
    CHECK(c.inner_coeff == Rational(1));
    CHECK(c.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const auto cp = sonc::circuit_number_power(c);
    CHECK(cp.q == 2);
    CHECK(cp.theta_q == Rational(4));
    CHECK(sonc::is_nonnegative(c));
}

TEST_CASE("negative inner coefficient beyond the circuit number") {
    const auto c = sonc::detect_circuit(parse_polynomial("x1^4 - 3*x1^2 + 1", 1));
    CHECK(c.inner == ExponentVector{2});
    CHECK(c.inner_coeff == Rational(-3));
    const auto cp = sonc::circuit_number_power(c);
    CHECK(cp.q == 2);
    CHECK(cp.theta_q == Rational(4));  // 9 > 4
    CHECK(sonc::circuit_number_estimate(cp) == doctest::Approx(2.0));
    CHECK_FALSE(sonc::is_nonnegative(c));

    const auto pt = sonc::find_negative_point(c, 20000);
    REQUIRE(pt.has_value());
    CHECK(sonc::to_polynomial(c).evaluate(*pt).sign() < 0);  // witness is exact
}

TEST_CASE("even positive inner coefficient never refutes") {
    // 5^2 = 25 > 4 = theta_q, yet x^4 + 5x^2 + 1 > 0 trivially
    const auto c = sonc::detect_circuit(parse_polynomial("x1^4 + 5*x1^2 + 1", 1));
    CHECK(c.inner_coeff == Rational(5));
    CHECK(sonc::circuit_number_power(c).theta_q == Rational(4));
    CHECK(sonc::is_nonnegative(c));
    CHECK_FALSE(sonc::find_negative_point(c, 20000).has_value());
}

TEST_CASE("defect codes") {
    CHECK(defect_of("x1 - x1", 1) == CircuitDefect::zero_polynomial);
    CHECK(defect_of("x1^3", 1) == CircuitDefect::non_even_outer);
    CHECK(defect_of("x1^2*x2", 2) == CircuitDefect::non_even_outer);
    CHECK(defect_of("-2*x1^2", 1) == CircuitDefect::negative_outer_coeff);
    CHECK(defect_of("x1^2 + x2^2 - x1 - x2 + 1", 2) == CircuitDefect::multiple_inner_points);
    CHECK(defect_of("x1^4 - x1^2 - 1", 1) == CircuitDefect::multiple_inner_points);
    // forced beta (1) against the collinear outer set {1, x1^2, x1^4}
    CHECK(defect_of("x1^4 + x1^2 - x1 + 1", 1) == CircuitDefect::affine_dependence);
    CHECK(defect_of("x1^4 - x1^6", 1) == CircuitDefect::beta_not_interior);
    CHECK(defect_of("x1^4 + 1", 1) == CircuitDefect::beta_not_interior);
    CHECK(defect_of("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2) == CircuitDefect::none);

    try {
        sonc::detect_circuit(parse_polynomial("x1^3", 1));
        FAIL("expected NotACircuit");
    } catch (const NotACircuit& e) {
        CHECK(std::string(e.what()).find("not a circuit polynomial: non_even_outer") == 0);
    }
}

TEST_CASE("validate rejects broken invariants") {
    const auto good = sonc::detect_circuit(parse_polynomial("x1^4 - 3*x1^2 + 1", 1));
    CHECK_NOTHROW(sonc::validate(good));

    auto bad = good;
    bad.weights[0] = Rational(1, 3);  // sum != 1
    CHECK_THROWS_AS(sonc::validate(bad), std::logic_error);

    bad = good;
    bad.weights = {Rational(1, 4), Rational(3, 4)};  // sums to 1, wrong combination
    CHECK_THROWS_AS(sonc::validate(bad), std::logic_error);

    bad = good;
    bad.outer_coeffs[0] = Rational(-1);
    CHECK_THROWS_AS(sonc::validate(bad), std::logic_error);

    bad = good;
    bad.outer[0] = {1};  // odd outer exponent
    CHECK_THROWS_AS(sonc::validate(bad), std::logic_error);

    bad = good;
    bad.inner_coeff = Rational(0);
    bad.inner = bad.outer[0];  // pretends to be degenerate with two outer points
    CHECK_THROWS_AS(sonc::validate(bad), std::logic_error);
}

TEST_CASE("barycentric solve agrees with the rational RREF oracle") {
    std::mt19937_64 rng(101);
    int ok_seen = 0, dep_seen = 0, inc_seen = 0;
    for (int iter = 0; iter < 300; ++iter) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 4));
        const int m = 1 + static_cast<int>(sonc::rng_below(rng, n + 2));
        std::vector<ExponentVector> pts(m, ExponentVector(n));
        for (auto& p : pts)
            for (int i = 0; i < n; ++i) p[i] = static_cast<int>(sonc::rng_below(rng, 9));
        ExponentVector beta(n);
        for (int i = 0; i < n; ++i) beta[i] = static_cast<int>(sonc::rng_below(rng, 9));

        const auto lib = sonc::barycentric_weights(pts, beta);
        const auto ref = oracles::barycentric(pts, beta);
        switch (ref.status) {
            case oracles::Solve::Status::ok:
                CHECK(lib.status == sonc::BarycentricSolve::Status::ok);
                CHECK(lib.weights == ref.weights);
                ++ok_seen;
                break;
            case oracles::Solve::Status::dependent:
                CHECK(lib.status == sonc::BarycentricSolve::Status::dependent);
                ++dep_seen;
                break;
            case oracles::Solve::Status::inconsistent:
                CHECK(lib.status == sonc::BarycentricSolve::Status::inconsistent);
                ++inc_seen;
                break;
        }
        // affine independence must match the oracle's rank computation
        CHECK(sonc::affinely_independent(pts) ==
              (ref.status != oracles::Solve::Status::dependent));
    }
    // the sweep must exercise every branch to mean anything
    CHECK(ok_seen > 10);
    CHECK(dep_seen > 10);
    CHECK(inc_seen > 10);
}

TEST_CASE("affinely_independent basics") {
    CHECK(sonc::affinely_independent(std::vector<ExponentVector>{}));
    CHECK(sonc::affinely_independent(std::vector<ExponentVector>{{3, 3}}));
    CHECK(sonc::affinely_independent(std::vector<ExponentVector>{{0, 0}, {2, 0}, {0, 2}}));
    CHECK_FALSE(sonc::affinely_independent(std::vector<ExponentVector>{{0}, {2}, {4}}));
    CHECK_FALSE(
        sonc::affinely_independent(std::vector<ExponentVector>{{0, 0}, {1, 1}, {2, 2}}));
    CHECK_FALSE(sonc::affinely_independent(
        std::vector<ExponentVector>{{0, 0}, {2, 0}, {0, 2}, {2, 2}}));  // m > n+1
}

TEST_CASE("circuit number overflow guard") {
    CircuitData c;
    c.n = 1;
    c.outer = {{0}, {2000002}};
    c.outer_coeffs = {Rational(1), Rational(1)};
    c.inner = {1};
    c.inner_coeff = Rational(-1, 2);
    c.weights = {Rational(2000001, 2000002), Rational(1, 2000002)};
    CHECK_NOTHROW(sonc::validate(c));
    CHECK_THROWS_AS(sonc::circuit_number_power(c), std::overflow_error);
}

TEST_CASE("budget zero finds nothing") {
    const auto c = sonc::detect_circuit(parse_polynomial("x1^4 - 3*x1^2 + 1", 1));
    CHECK_FALSE(sonc::find_negative_point(c, 0).has_value());
}

TEST_CASE("negative verdicts come with exact witnesses") {
    std::mt19937_64 rng(202);
    const auto pool1 = sonc::even_lattice_points(1, 8);
    const auto pool2 = sonc::even_lattice_points(2, 8);
    int negatives = 0;
    for (int iter = 0; iter < 120; ++iter) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 2));
        const auto c = sonc::random_circuit(n, rng, n == 1 ? pool1 : pool2,
                                            sonc::CoeffBias::mixed);
        const auto pt = sonc::find_negative_point(c, 4000);
        if (pt) {
            CHECK(sonc::to_polynomial(c).evaluate(*pt).sign() < 0);
            CHECK_FALSE(sonc::is_nonnegative(c));  // soundness of the verdict
            ++negatives;
        }
        if (sonc::is_nonnegative(c)) {
            CHECK_FALSE(pt.has_value());
        }
    }
    CHECK(negatives > 10);  // the mixed bias must actually produce refutable circuits
}

TEST_CASE("detection and verdicts are invariant under rescaling") {
    std::mt19937_64 rng(303);
    const auto pool1 = sonc::even_lattice_points(1, 10);
    const auto pool2 = sonc::even_lattice_points(2, 10);
    for (int iter = 0; iter < 60; ++iter) {
        const int n = 1 + static_cast<int>(sonc::rng_below(rng, 2));
        const auto f = sonc::to_polynomial(sonc::random_circuit(
            n, rng, n == 1 ? pool1 : pool2, sonc::CoeffBias::mixed));
        const auto c = sonc::detect_circuit(f);  // canonical combinatorics
        std::vector<Rational> a(n);
        for (int i = 0; i < n; ++i) {
            long num = static_cast<long>(sonc::rng_below(rng, 13)) - 6;
            if (num == 0) num = 7;
            a[i] = Rational(num, 1 + static_cast<long>(sonc::rng_below(rng, 4)));
        }
        const auto d = sonc::detect_circuit(f.rescale(a));
        CHECK(d.outer == c.outer);
        CHECK(d.inner == c.inner);
        CHECK(d.weights == c.weights);
        CHECK(sonc::is_nonnegative(d) == sonc::is_nonnegative(c));
    }
}
