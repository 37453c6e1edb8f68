#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sonc/polynomial.hpp"
#include "sonc/rational.hpp"

namespace sonc {

/// Why a polynomial failed circuit detection.
enum class CircuitDefect {
    none,
    zero_polynomial,
    non_even_outer,
    negative_outer_coeff,
    affine_dependence,
    beta_not_interior,
    multiple_inner_points,
};

const char* to_string(CircuitDefect d);

class NotACircuit : public std::runtime_error {
public:
    NotACircuit(CircuitDefect reason, const std::string& detail);
    CircuitDefect reason() const { return reason_; }

private:
    CircuitDefect reason_;
};

/// A validated circuit polynomial.
///
/// The outer support A is a set of affinely independent even lattice points
/// carrying strictly positive coefficients; inner is the exponent beta in
/// the relative interior of conv(A), with barycentric weights lambda
/// (strictly positive, summing to one, with sum lambda_a * a = beta
/// exactly). The degenerate single-term case has outer = {beta} and
/// weight 1; its coefficient lives in outer_coeffs and inner_coeff is 0.
struct CircuitData {
    int n = 0;
    std::vector<ExponentVector> outer;
    std::vector<Rational> outer_coeffs;
    ExponentVector inner;
    Rational inner_coeff;
    std::vector<Rational> weights;

    bool degenerate() const { return outer.size() == 1 && outer[0] == inner; }
};

/// Checks every CircuitData invariant exactly; throws std::logic_error on
/// violation. Called after every construction path.
void validate(const CircuitData& c);

/// Result of the exact barycentric solve for beta over the outer set.
struct BarycentricSolve {
    enum class Status { ok, dependent, inconsistent } status;
    std::vector<Rational> weights;  // filled only when status == ok
};

/// Solves sum lambda_a * a = beta, sum lambda_a = 1 by fraction-free
/// (Bareiss) elimination over the integers. `dependent` means the outer
/// points are affinely dependent; `inconsistent` means beta lies outside
/// their affine hull. Weights may be zero or negative: interiority is the
/// caller's check.
BarycentricSolve barycentric_weights(std::span<const ExponentVector> outer,
                                     const ExponentVector& beta);

bool affinely_independent(std::span<const ExponentVector> points);

/// Identifies the circuit structure of f, or throws NotACircuit.
///
/// The inner exponent beta is chosen as (a) the unique support point with a
/// negative coefficient or an odd exponent vector, if one exists; (b)
/// otherwise the first support point in graded-lex order whose removal
/// leaves an affinely independent outer set placing it in the relative
/// interior; (c) the degenerate single-term case. Ties are deterministic.
CircuitData detect_circuit(const SparsePolynomial& f);

/// Reconstructs the polynomial sum c_a x^a + c_beta x^beta.
SparsePolynomial to_polynomial(const CircuitData& c);

/// Exact q-th power of the circuit number: q is the least common
/// denominator of the weights and theta_q = prod (c_a / lambda_a)^(lambda_a q).
/// Theta itself is irrational in general and never materialized.
struct CircuitPower {
    Rational theta_q;
    unsigned long q = 1;
};

CircuitPower circuit_number_power(const CircuitData& c);

/// Float estimate of Theta recovered from its exact q-th power; diagnostics
/// only, safe even when theta_q is far outside double range.
double circuit_number_estimate(const CircuitPower& cp);

/// Full nonnegativity criterion for circuit polynomials:
/// nonnegative iff |c_beta|^q <= theta_q, or beta is all-even with
/// c_beta >= 0. All comparisons are exact.
bool is_nonnegative(const CircuitData& c);

/// Searches for a rational point with an exactly negative value, over sign
/// patterns and a geometric magnitude grid seeded with the float AM-GM
/// balance point. The budget caps exact evaluations. Deterministic.
std::optional<std::vector<Rational>> find_negative_point(const CircuitData& c, int budget);

}  // namespace sonc
