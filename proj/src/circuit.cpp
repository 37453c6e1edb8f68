#include "sonc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sonc {

const char* to_string(CircuitDefect d) {
    switch (d) {
        case CircuitDefect::none: return "none";
        case CircuitDefect::zero_polynomial: return "zero_polynomial";
        case CircuitDefect::non_even_outer: return "non_even_outer";
        case CircuitDefect::negative_outer_coeff: return "negative_outer_coeff";
        case CircuitDefect::affine_dependence: return "affine_dependence";
        case CircuitDefect::beta_not_interior: return "beta_not_interior";
        case CircuitDefect::multiple_inner_points: return "multiple_inner_points";
    }
    return "unknown";
}

NotACircuit::NotACircuit(CircuitDefect reason, const std::string& detail)
    : std::runtime_error(std::string("not a circuit polynomial: ") + to_string(reason) +
                         (detail.empty() ? "" : " (" + detail + ")")),
      reason_(reason) {}

void validate(const CircuitData& c) {
    auto fail = [](const char* msg) { throw std::logic_error(std::string("CircuitData invariant: ") + msg); };
    if (c.n < 1) fail("dimension must be >= 1");
    const size_t m = c.outer.size();
    if (m == 0) fail("outer support empty");
    if (c.outer_coeffs.size() != m || c.weights.size() != m) fail("field sizes disagree");
    if (static_cast<int>(c.inner.size()) != c.n) fail("inner exponent length");
    for (int v : c.inner)
        if (v < 0) fail("inner exponent negative entry");
    Rational weight_sum(0);
    std::vector<Rational> combination(c.n, Rational(0));
    for (size_t i = 0; i < m; ++i) {
        if (static_cast<int>(c.outer[i].size()) != c.n) fail("outer exponent length");
        if (!all_even(c.outer[i])) fail("outer exponent not even");
        for (int v : c.outer[i])
            if (v < 0) fail("outer exponent negative entry");
        if (c.outer_coeffs[i].sign() <= 0) fail("outer coefficient not positive");
        if (c.weights[i].sign() <= 0) fail("weight not positive");
        weight_sum += c.weights[i];
        for (int j = 0; j < c.n; ++j) combination[j] += c.weights[i] * Rational(c.outer[i][j]);
    }
    if (weight_sum != Rational(1)) fail("weights do not sum to 1");
    for (int j = 0; j < c.n; ++j)
        if (combination[j] != Rational(c.inner[j])) fail("weights do not combine to the inner exponent");
    if (!affinely_independent(c.outer)) fail("outer support affinely dependent");
    if (m == 1) {
        if (c.inner != c.outer[0]) fail("degenerate circuit must have inner == outer point");
        if (!c.inner_coeff.is_zero()) fail("degenerate circuit carries its coefficient in outer_coeffs");
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination
// ---------------------------------------------------------------------------

namespace {

// Augmented system [alpha columns ; ones row | beta ; 1] over the integers.
// Returns row echelon form via one-step Bareiss; every division is exact.
struct Echelon {
    std::vector<std::vector<mpz_class>> m;  // rows x (cols+aug)
    size_t rank = 0;
    bool full_column_rank = false;
};

Echelon bareiss_echelon(std::vector<std::vector<mpz_class>> m, size_t unknowns) {
    const size_t rows = m.size();
    Echelon out;
    mpz_class prev(1);
    size_t rank = 0;
    for (size_t col = 0; col < unknowns && rank < rows; ++col) {
        size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) {
            out.m = std::move(m);
            out.rank = rank;
            out.full_column_rank = false;
            return out;
        }
        if (pivot != rank) std::swap(m[pivot], m[rank]);
        for (size_t i = rank + 1; i < rows; ++i) {
            for (size_t j = col + 1; j < m[i].size(); ++j) {
                mpz_class t = m[i][j] * m[rank][col] - m[i][col] * m[rank][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    out.m = std::move(m);
    out.rank = rank;
    out.full_column_rank = (rank == unknowns);
    return out;
}

std::vector<std::vector<mpz_class>> build_affine_matrix(std::span<const ExponentVector> points,
                                                        const ExponentVector* rhs) {
    const size_t m = points.size();
    const size_t n = points.empty() ? 0 : points[0].size();
    const size_t cols = m + (rhs ? 1 : 0);
    std::vector<std::vector<mpz_class>> rows(n + 1, std::vector<mpz_class>(cols, mpz_class(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) rows[i][j] = (*(points.begin() + j))[i];
        if (rhs) rows[i][m] = (*rhs)[i];
    }
    for (size_t j = 0; j < m; ++j) rows[n][j] = 1;
    if (rhs) rows[n][m] = 1;
    return rows;
}

}  // namespace

BarycentricSolve barycentric_weights(std::span<const ExponentVector> outer,
                                     const ExponentVector& beta) {
    const size_t m = outer.size();
    if (m == 0) throw std::invalid_argument("barycentric_weights: empty outer set");
    const size_t n = outer[0].size();
    if (beta.size() != n) throw std::invalid_argument("barycentric_weights: dimension mismatch");
    if (m > n + 1) return {BarycentricSolve::Status::dependent, {}};

    Echelon ech = bareiss_echelon(build_affine_matrix(outer, &beta), m);
    if (!ech.full_column_rank) return {BarycentricSolve::Status::dependent, {}};
    for (size_t i = m; i < ech.m.size(); ++i)
        if (ech.m[i][m] != 0) return {BarycentricSolve::Status::inconsistent, {}};

    std::vector<Rational> lambda(m);
    for (size_t i = m; i-- > 0;) {
        Rational acc(ech.m[i][m], mpz_class(1));
        for (size_t j = i + 1; j < m; ++j) acc -= Rational(ech.m[i][j], mpz_class(1)) * lambda[j];
        lambda[i] = acc / Rational(ech.m[i][i], mpz_class(1));
    }
    return {BarycentricSolve::Status::ok, std::move(lambda)};
}

bool affinely_independent(std::span<const ExponentVector> points) {
    if (points.size() <= 1) return true;
    const size_t n = points[0].size();
    if (points.size() > n + 1) return false;
    return bareiss_echelon(build_affine_matrix(points, nullptr), points.size()).full_column_rank;
}

// ---------------------------------------------------------------------------
// Detection
// ---------------------------------------------------------------------------

namespace {

CircuitData make_degenerate(int n, const ExponentVector& e, const Rational& c) {
    CircuitData data;
    data.n = n;
    data.outer = {e};
    data.outer_coeffs = {c};
    data.inner = e;
    data.inner_coeff = Rational(0);
    data.weights = {Rational(1)};
    validate(data);
    return data;
}

// Assembles and validates a candidate partition; nullopt when beta is not in
// the relative interior. Throws NotACircuit on affine dependence of outer.
std::optional<CircuitData> try_partition(const SparsePolynomial& f, const ExponentVector& beta,
                                         const Rational& beta_coeff, bool throw_on_dependent) {
    std::vector<ExponentVector> outer;
    std::vector<Rational> coeffs;
    for (const auto& [e, c] : f.terms()) {
        if (e == beta) continue;
        outer.push_back(e);
        coeffs.push_back(c);
    }
    const size_t n = f.dimension();
    if (outer.size() > n + 1) {
        if (throw_on_dependent)
            throw NotACircuit(CircuitDefect::affine_dependence,
                              "outer support has more than n+1 points");
        return std::nullopt;
    }
    BarycentricSolve solve = barycentric_weights(outer, beta);
    if (solve.status == BarycentricSolve::Status::dependent) {
        if (throw_on_dependent)
            throw NotACircuit(CircuitDefect::affine_dependence, "outer support affinely dependent");
        return std::nullopt;
    }
    if (solve.status == BarycentricSolve::Status::inconsistent) return std::nullopt;
    for (const Rational& w : solve.weights)
        if (w.sign() <= 0) return std::nullopt;

    CircuitData data;
    data.n = f.dimension();
    data.outer = std::move(outer);
    data.outer_coeffs = std::move(coeffs);
    data.inner = beta;
    data.inner_coeff = beta_coeff;
    data.weights = std::move(solve.weights);
    validate(data);
    return data;
}

}  // namespace

CircuitData detect_circuit(const SparsePolynomial& f) {
    if (f.is_zero()) throw NotACircuit(CircuitDefect::zero_polynomial, "");
    const auto& terms = f.terms();

    if (terms.size() == 1) {
        const auto& [e, c] = *terms.begin();
        if (!all_even(e)) throw NotACircuit(CircuitDefect::non_even_outer, "single odd-exponent term");
        if (c.sign() < 0) throw NotACircuit(CircuitDefect::negative_outer_coeff, "single negative term");
        return make_degenerate(f.dimension(), e, c);
    }

    // candidate inner points: negative coefficient or odd exponent vector
    std::vector<const ExponentVector*> flagged;
    for (const auto& [e, c] : terms)
        if (c.sign() < 0 || !all_even(e)) flagged.push_back(&e);

    if (flagged.size() > 1)
        throw NotACircuit(CircuitDefect::multiple_inner_points,
                          std::to_string(flagged.size()) + " support points are negative or odd");

    if (flagged.size() == 1) {
        const ExponentVector& beta = *flagged.front();
        auto data = try_partition(f, beta, f.coeff(beta), /*throw_on_dependent=*/true);
        if (!data)
            throw NotACircuit(CircuitDefect::beta_not_interior,
                              "inner exponent is not in the relative interior of the outer hull");
        return *data;
    }

    // all support points are even with positive coefficients: try each as the
    // inner point in graded-lex order, first strictly interior one wins
    for (const auto& [e, c] : terms) {
        auto data = try_partition(f, e, c, /*throw_on_dependent=*/false);
        if (data) return *data;
    }

    // distinguish "every outer set was dependent" from interiority failures
    bool any_independent = false;
    for (const auto& [e, c] : terms) {
        std::vector<ExponentVector> rest;
        for (const auto& [e2, c2] : terms)
            if (!(e2 == e)) rest.push_back(e2);
        if (rest.size() <= static_cast<size_t>(f.dimension()) + 1 && affinely_independent(rest)) {
            any_independent = true;
            break;
        }
    }
    if (!any_independent)
        throw NotACircuit(CircuitDefect::affine_dependence,
                          "no support point leaves an affinely independent outer set");
    throw NotACircuit(CircuitDefect::beta_not_interior,
                      "no support point lies in the relative interior of the others");
}

SparsePolynomial to_polynomial(const CircuitData& c) {
    SparsePolynomial p(c.n);
    for (size_t i = 0; i < c.outer.size(); ++i) p.add_term(c.outer[i], c.outer_coeffs[i]);
    if (!c.inner_coeff.is_zero()) p.add_term(c.inner, c.inner_coeff);
    return p;
}

CircuitPower circuit_number_power(const CircuitData& c) {
    mpz_class q(1);
    for (const Rational& w : c.weights) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), w.den().get_mpz_t());
    if (q > 1000000)
        throw std::overflow_error("circuit_number_power: common weight denominator exceeds 10^6");
    const unsigned long qu = q.get_ui();

    CircuitPower out;
    out.q = qu;
    out.theta_q = Rational(1);
    for (size_t i = 0; i < c.outer.size(); ++i) {
        mpz_class exp_z = c.weights[i].num() * (q / c.weights[i].den());
        out.theta_q *= (c.outer_coeffs[i] / c.weights[i]).pow(exp_z.get_ui());
    }
    return out;
}

double circuit_number_estimate(const CircuitPower& cp) {
    double ln = (log_mpz(cp.theta_q.num()) - log_mpz(cp.theta_q.den())) /
                static_cast<double>(cp.q);
    return std::exp(std::clamp(ln, -60.0, 60.0));
}

bool is_nonnegative(const CircuitData& c) {
    if (c.inner_coeff.is_zero()) return true;  // positive even monomials only
    if (all_even(c.inner) && c.inner_coeff.sign() > 0) return true;
    CircuitPower cp = circuit_number_power(c);
    return c.inner_coeff.abs().pow(cp.q) <= cp.theta_q;
}

// ---------------------------------------------------------------------------
// Negative point search
// ---------------------------------------------------------------------------

namespace {

Rational dyadic_from_double(double v) {
    constexpr double kScale = 1048576.0;  // 2^20
    if (!std::isfinite(v) || v <= 0.0) return Rational(1, 1048576);
    v = std::min(v, 1e18);
    mpz_class num(std::round(v * kScale));
    if (num == 0) num = 1;
    return Rational(num, mpz_class(1048576));
}

// least-squares solve of the AM-GM balance conditions in log coordinates
std::vector<double> balance_log_point(const CircuitData& c) {
    const int n = c.n;
    const size_t m = c.outer.size();
    std::vector<double> y(n, 0.0);
    if (m < 2) return y;
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    std::vector<double> h(n, 0.0);
    const auto& a0 = c.outer[0];
    double base = std::log(c.outer_coeffs[0].to_double() / c.weights[0].to_double());
    for (size_t k = 1; k < m; ++k) {
        std::vector<double> row(n);
        for (int i = 0; i < n; ++i) row[i] = static_cast<double>(c.outer[k][i] - a0[i]);
        double r = base - std::log(c.outer_coeffs[k].to_double() / c.weights[k].to_double());
        for (int i = 0; i < n; ++i) {
            h[i] += row[i] * r;
            for (int j = 0; j < n; ++j) g[i][j] += row[i] * row[j];
        }
    }
    for (int i = 0; i < n; ++i) g[i][i] += 1e-9;
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::fabs(g[i][col]) > std::fabs(g[piv][col])) piv = i;
        std::swap(g[piv], g[col]);
        std::swap(h[piv], h[col]);
        if (std::fabs(g[col][col]) < 1e-30) continue;
        for (int i = col + 1; i < n; ++i) {
            double f = g[i][col] / g[col][col];
            for (int j = col; j < n; ++j) g[i][j] -= f * g[col][j];
            h[i] -= f * h[col];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        if (std::fabs(g[i][i]) < 1e-30) continue;
        double acc = h[i];
        for (int j = i + 1; j < n; ++j) acc -= g[i][j] * y[j];
        y[i] = acc / g[i][i];
    }
    for (double& v : y) v = std::clamp(v, -30.0, 30.0);
    return y;
}

}  // namespace

std::optional<std::vector<Rational>> find_negative_point(const CircuitData& c, int budget) {
    const int n = c.n;
    if (c.inner_coeff.is_zero()) return std::nullopt;
    if (all_even(c.inner) && c.inner_coeff.sign() > 0) return std::nullopt;

    SparsePolynomial g = to_polynomial(c);

    // One orthant class suffices: outer terms have even exponents, so only
    // the sign of the inner monomial varies. Flip the first odd coordinate
    // when the inner coefficient is positive.
    std::vector<int> sign(n, 1);
    if (c.inner_coeff.sign() > 0) {
        for (int i = 0; i < n; ++i) {
            if (c.inner[i] % 2 != 0) {
                sign[i] = -1;
                break;
            }
        }
    }

    int evals = 0;
    std::vector<Rational> point(n);
    auto probe = [&](const std::vector<Rational>& mag) -> bool {
        if (evals >= budget) return false;
        ++evals;
        for (int i = 0; i < n; ++i) point[i] = sign[i] < 0 ? mag[i].neg() : mag[i];
        return g.evaluate(point).sign() < 0;
    };

    // balance-point sweep
    std::vector<double> y = balance_log_point(c);
    for (int t = 0; t <= 12 && evals < budget; ++t) {
        double scale = std::pow(1.5, (t % 2 == 0 ? 1 : -1) * ((t + 1) / 2));
        std::vector<Rational> mag(n);
        for (int i = 0; i < n; ++i) mag[i] = dyadic_from_double(std::exp(y[i]) * scale);
        if (probe(mag)) return point;
    }

    // geometric magnitude grid
    const Rational ratio(3, 2);
    if (n == 1) {
        for (int step = 0; evals < budget && step <= 32; ++step) {
            int k = (step % 2 == 0 ? 1 : -1) * ((step + 1) / 2);
            Rational mag = k >= 0 ? ratio.pow(k) : ratio.inv().pow(-k);
            if (probe({mag})) return point;
        }
    } else {
        std::mt19937_64 rng(12345);
        std::vector<Rational> mag(n);
        while (evals < budget) {
            for (int i = 0; i < n; ++i) {
                int k = static_cast<int>(rng() % 25) - 12;
                mag[i] = k >= 0 ? ratio.pow(k) : ratio.inv().pow(-k);
            }
            if (probe(mag)) return point;
        }
    }
    return std::nullopt;
}

}  // namespace sonc
