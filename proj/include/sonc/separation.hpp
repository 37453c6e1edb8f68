#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sonc/circuit.hpp"
#include "sonc/polynomial.hpp"

namespace sonc {

/// The four-evaluation functional
///   L[f] = f(1,1..1) - f(u,1..1) + f(u^2,1..1) + f(u^3,1..1)
/// determined by a rational u > 1 and the dimension. Nonnegative on every
/// nonnegative circuit polynomial, yet negative on the witness family.
struct SeparatingFunctional {
    int n;
    Rational u;
    std::array<std::vector<Rational>, 4> points;  // (u^j, 1,...,1) for j = 0..3
};

SeparatingFunctional make_functional(int n, const Rational& u);

/// Largest u of the form 1 + 1/k (k <= 2^20) with u^3 <= hi_1, so that all
/// four evaluation points stay inside K. Requires the all-ones point in the
/// interior of K; rescale by an interior anchor first if it is not.
Rational choose_u(const BoxRegion& K);

/// Exact rational L[f].
Rational apply_L(const SeparatingFunctional& F, const SparsePolynomial& f);

/// L on the monomial x1^b1: 1 - u^b1 + u^(2 b1) + u^(3 b1). Always positive
/// for u > 1; throws std::logic_error if the exact value is not.
Rational monomial_L_positive(const SeparatingFunctional& F, int b1);

/// Float diagnostic phi(t) = 1 - e^t + e^(2t) + e^(3t); L on a monomial with
/// first exponent b1 equals phi(b1 ln u).
double phi(double t);

/// Both sides of the exact polynomial identity certifying that
/// ln phi is convex for t >= 0 (equivalently p(y) >= 0 for y >= 1):
///   (-y+4y^2+9y^3)(1-y+y^2+y^3) - (-y+2y^2+3y^3)^2
///     = y((y-1)^4 + 2(y-1)^2 + 12(y-1) + 8).
SparsePolynomial phi_product_expansion();
SparsePolynomial phi_witness_expansion();
bool phi_identity_check();

/// Worst discrete log-convexity violation of phi on the grid
/// {0, step, ..., t_max}: max over interior grid points of
/// max(0, 2 ln phi(t) - ln phi(t-step) - ln phi(t+step)). Float diagnostic.
double phi_log_convexity_violation(double t_max, double step);

struct ClaimBound {
    Rational L_exact;
    double amgm_bound;  // (Theta_g + c_beta) * phi(beta_1 ln u), float
};

/// Exact L[g] for the circuit g together with the float AM-GM bound.
/// Throws std::logic_error when the exact value undercuts the bound beyond
/// eps = 1e-9 (1 + |bound|), or when g is nonnegative but L[g] < 0 exactly.
ClaimBound claim_lower_bound(const SeparatingFunctional& F, const CircuitData& c);

/// The witness square and its degree-d factor (x1-1)(x1-u^2)(x1-u^3)^(d-2).
struct WitnessPair {
    SparsePolynomial square;  // (x1-1)^2 (x1-u^2)^2 (x1-u^3)^(2(d-2))
    SparsePolynomial factor;
};

/// Requires d >= 3 and u > 1.
WitnessPair build_witness(const Rational& u, int d, int n);

struct SeparationReport {
    int n;
    int d;
    Rational u;
    BoxRegion K;
    SparsePolynomial witness;
    SparsePolynomial witness_factor;
    Rational L_of_witness;  // equals -witness(u,1..1) exactly
    Rational lower_bound;   // -L_of_witness / 4, strictly positive
    bool points_in_K;
};

/// Full pipeline: choose u (or take the override), build the witness,
/// compute L[f] exactly, check L[f] = -f(u,1..1), and return the certified
/// bound inf over SONC g of ||g - f||_K >= f(u,1..1)/4 > 0.
SeparationReport separation_bound(const BoxRegion& K, int d, int n,
                                  std::optional<Rational> u_override = std::nullopt);

/// max over j in 0..3 of |g - f| at (u^j, 1,...,1), exact. A certified lower
/// bound for ||g - f||_K whenever the four points lie in K.
Rational four_point_gap(const SeparatingFunctional& F, const SparsePolynomial& f,
                        const SparsePolynomial& g);

/// Preprocessing for boxes whose interior misses the all-ones point: picks an
/// interior anchor with nonzero coordinates and rescales so the anchor moves
/// to (1,...,1). Membership satisfies x in H iff (a_1 x_1,...,a_n x_n) in K.
struct AnchorRescale {
    std::vector<Rational> anchor;
    BoxRegion H;
};

AnchorRescale anchor_rescale(const BoxRegion& K);

}  // namespace sonc
