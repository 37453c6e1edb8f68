#include "sonc/separation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonc {

SeparatingFunctional make_functional(int n, const Rational& u) {
    if (n < 1) throw std::invalid_argument("make_functional: dimension must be >= 1");
    if (!(u > Rational(1))) throw std::invalid_argument("make_functional: need u > 1");
    SeparatingFunctional F{n, u, {}};
    Rational p(1);
    for (int j = 0; j < 4; ++j) {
        F.points[j].assign(n, Rational(1));
        F.points[j][0] = p;
        p *= u;
    }
    return F;
}

Rational choose_u(const BoxRegion& K) {
    std::vector<Rational> ones(K.dimension(), Rational(1));
    if (!K.interior_contains(ones))
        throw std::invalid_argument(
            "choose_u: the all-ones point must be interior to the box (rescale by an "
            "interior anchor first)");
    const Rational& hi1 = K.intervals()[0].second;
    for (long k = 1; k <= (1L << 20); ++k) {
        Rational u(k + 1, k);
        if (u.pow(3) <= hi1) return u;  // u decreases with k: first hit is largest
    }
    throw std::invalid_argument("choose_u: no admissible u = 1 + 1/k with k <= 2^20");
}

Rational apply_L(const SeparatingFunctional& F, const SparsePolynomial& f) {
    if (f.dimension() != F.n) throw std::invalid_argument("apply_L: dimension mismatch");
    return f.evaluate(F.points[0]) - f.evaluate(F.points[1]) + f.evaluate(F.points[2]) +
           f.evaluate(F.points[3]);
}

Rational monomial_L_positive(const SeparatingFunctional& F, int b1) {
    if (b1 < 0) throw std::invalid_argument("monomial_L_positive: exponent must be >= 0");
    const auto e = static_cast<unsigned long>(b1);
    Rational v = Rational(1) - F.u.pow(e) + F.u.pow(2 * e) + F.u.pow(3 * e);
    if (!(v > Rational(0)))
        throw std::logic_error("monomial_L_positive: value is not positive");
    return v;
}

double phi(double t) { return 1.0 - std::exp(t) + std::exp(2.0 * t) + std::exp(3.0 * t); }

SparsePolynomial phi_product_expansion() {
    SparsePolynomial a = parse_polynomial("-x1 + 4*x1^2 + 9*x1^3", 1);
    SparsePolynomial b = parse_polynomial("1 - x1 + x1^2 + x1^3", 1);
    SparsePolynomial c = parse_polynomial("-x1 + 2*x1^2 + 3*x1^3", 1);
    return a * b - c * c;
}

SparsePolynomial phi_witness_expansion() {
    SparsePolynomial y = parse_polynomial("x1", 1);
    SparsePolynomial ym1 = parse_polynomial("x1 - 1", 1);
    SparsePolynomial inner = ym1.pow(4) + ym1.pow(2).scale(Rational(2)) +
                             ym1.scale(Rational(12)) + SparsePolynomial::constant(1, Rational(8));
    return y * inner;
}

bool phi_identity_check() { return phi_product_expansion() == phi_witness_expansion(); }

double phi_log_convexity_violation(double t_max, double step) {
    if (step <= 0.0 || t_max <= 0.0)
        throw std::invalid_argument("phi_log_convexity_violation: need positive grid");
    double worst = 0.0;
    for (double t = step; t + step <= t_max + 1e-12; t += step) {
        double mid = 2.0 * std::log(phi(t)) - std::log(phi(t - step)) - std::log(phi(t + step));
        worst = std::max(worst, mid);
    }
    return worst;
}

ClaimBound claim_lower_bound(const SeparatingFunctional& F, const CircuitData& c) {
    if (c.n != F.n) throw std::invalid_argument("claim_lower_bound: dimension mismatch");
    validate(c);
    Rational L = apply_L(F, to_polynomial(c));

    CircuitPower cp = circuit_number_power(c);
    const double theta = circuit_number_estimate(cp);
    const double bound =
        (theta + c.inner_coeff.to_double()) * phi(c.inner[0] * std::log(F.u.to_double()));
    const double eps = 1e-9 * (1.0 + std::fabs(bound));
    if (L.to_double() < bound - eps)
        throw std::logic_error("claim_lower_bound: exact L undercuts the AM-GM bound");
    if (is_nonnegative(c) && L.sign() < 0)
        throw std::logic_error("claim_lower_bound: nonnegative circuit with L < 0");
    return {L, bound};
}

WitnessPair build_witness(const Rational& u, int d, int n) {
    if (d < 3) throw std::invalid_argument("build_witness: the construction requires d >= 3");
    if (!(u > Rational(1))) throw std::invalid_argument("build_witness: need u > 1");
    if (n < 1) throw std::invalid_argument("build_witness: dimension must be >= 1");
    ExponentVector e1(n, 0);
    e1[0] = 1;
    SparsePolynomial x1 = SparsePolynomial::monomial(n, e1, Rational(1));
    auto shifted = [&](const Rational& r) { return x1 - SparsePolynomial::constant(n, r); };
    SparsePolynomial factor =
        shifted(Rational(1)) * shifted(u.pow(2)) * shifted(u.pow(3)).pow(d - 2);
    return {factor * factor, factor};
}

SeparationReport separation_bound(const BoxRegion& K, int d, int n,
                                  std::optional<Rational> u_override) {
    if (n < 1) throw std::invalid_argument("separation_bound: dimension must be >= 1");
    if (K.dimension() != n)
        throw std::invalid_argument("separation_bound: box dimension differs from n");
    if (d < 3) throw std::invalid_argument("separation_bound: the theorem requires d >= 3");
    std::vector<Rational> ones(n, Rational(1));
    if (!K.interior_contains(ones))
        throw std::invalid_argument(
            "separation_bound: the all-ones point must be interior to the box (rescale by "
            "an interior anchor first)");

    Rational u = u_override ? *u_override : choose_u(K);
    if (!(u > Rational(1))) throw std::invalid_argument("separation_bound: u must exceed 1");
    SeparatingFunctional F = make_functional(n, u);
    for (const auto& pt : F.points)
        if (!K.contains(pt))
            throw std::invalid_argument(
                "separation_bound: an evaluation point leaves the box; pick a smaller u");

    WitnessPair w = build_witness(u, d, n);
    Rational L = apply_L(F, w.square);
    Rational f_at_u = w.square.evaluate(F.points[1]);
    // f vanishes at three of the four points, so the sum collapses to -f(u)
    if (L != f_at_u.neg()) throw std::logic_error("separation_bound: L[f] != -f(u)");
    Rational bound = f_at_u / Rational(4);
    if (!(bound > Rational(0)))
        throw std::logic_error("separation_bound: lower bound is not positive");

    return SeparationReport{n, d, u, K, std::move(w.square), std::move(w.factor),
                            std::move(L), std::move(bound), true};
}

Rational four_point_gap(const SeparatingFunctional& F, const SparsePolynomial& f,
                        const SparsePolynomial& g) {
    if (f.dimension() != F.n || g.dimension() != F.n)
        throw std::invalid_argument("four_point_gap: dimension mismatch");
    Rational best(0);
    for (const auto& pt : F.points) {
        Rational diff = (g.evaluate(pt) - f.evaluate(pt)).abs();
        if (diff > best) best = diff;
    }
    return best;
}

AnchorRescale anchor_rescale(const BoxRegion& K) {
    const int n = K.dimension();
    std::vector<Rational> anchor(n);
    for (int i = 0; i < n; ++i) {
        const auto& [lo, hi] = K.intervals()[i];
        Rational mid = (lo + hi) / Rational(2);
        // the midpoint and the quarter point cannot both be zero
        anchor[i] = mid.is_zero() ? (lo + mid) / Rational(2) : mid;
    }
    BoxRegion H = K.rescale(anchor);
    std::vector<Rational> ones(n, Rational(1));
    if (!H.interior_contains(ones))
        throw std::logic_error("anchor_rescale: rescaled box misses the all-ones point");
    return {std::move(anchor), std::move(H)};
}

}  // namespace sonc
