#include "sonc/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "sonc/rng.hpp"
#include "sonc/threads.hpp"

namespace sonc {

namespace {

PartReport check_part(const SparsePolynomial& p) {
    PartReport r;
    try {
        CircuitData data = detect_circuit(p);
        r.is_circuit = true;
        try {
            r.power = circuit_number_power(data);
            r.nonnegative = is_nonnegative(data);
            if (!r.nonnegative) r.detail = "inner coefficient exceeds the circuit number";
        } catch (const std::overflow_error& e) {
            r.nonnegative = false;  // cannot certify: treated as a failure
            r.detail = e.what();
        }
        r.data = std::move(data);
    } catch (const NotACircuit& e) {
        r.defect = e.reason();
        r.detail = e.what();
    }
    return r;
}

void require_dimensions(const SoncCertificate& cert) {
    if (cert.n < 1) throw std::invalid_argument("verify: dimension must be >= 1");
    if (cert.target.dimension() != cert.n)
        throw std::invalid_argument("verify: target dimension differs from certificate dimension");
    for (const SparsePolynomial& p : cert.parts)
        if (p.dimension() != cert.n)
            throw std::invalid_argument("verify: part dimension differs from certificate dimension");
}

VerificationReport assemble(const SoncCertificate& cert, std::vector<PartReport> parts) {
    VerificationReport rep;
    rep.parts = std::move(parts);

    SparsePolynomial sum(cert.n);
    for (const SparsePolynomial& p : cert.parts) sum = sum + p;
    rep.residual = cert.target - sum;
    rep.sum_matches = rep.residual.is_zero();

    for (size_t i = 0; i < rep.parts.size(); ++i) {
        if (!rep.parts[i].passed()) {
            rep.first_failing_part = static_cast<int>(i);
            break;
        }
    }

    rep.ok = rep.sum_matches && rep.first_failing_part < 0 && !cert.parts.empty();
    if (!rep.ok) {
        if (rep.first_failing_part >= 0)
            rep.failure_reason = "part " + std::to_string(rep.first_failing_part) + ": " +
                                 rep.parts[rep.first_failing_part].detail;
        else if (cert.parts.empty())
            rep.failure_reason = "certificate has no parts";
        else
            rep.failure_reason = "parts do not sum to the target (residual " +
                                 rep.residual.str() + ")";
    }
    return rep;
}

}  // namespace

VerificationReport verify(const SoncCertificate& cert) {
    require_dimensions(cert);
    std::vector<PartReport> parts(cert.parts.size());
    const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cert.parts.size()); ++i)
        parts[i] = check_part(cert.parts[i]);
    return assemble(cert, std::move(parts));
}

VerificationReport verify_serial(const SoncCertificate& cert) {
    require_dimensions(cert);
    std::vector<PartReport> parts;
    parts.reserve(cert.parts.size());
    for (const SparsePolynomial& p : cert.parts) parts.push_back(check_part(p));
    return assemble(cert, std::move(parts));
}

std::vector<ExponentVector> even_lattice_points(int n, int max_degree) {
    if (n < 1) throw std::invalid_argument("even_lattice_points: dimension must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("even_lattice_points: negative degree bound");
    std::vector<ExponentVector> out;
    ExponentVector cur(n, 0);
    auto rec = [&](auto&& self, int i, int remaining) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; e += 2) {
            cur[i] = e;
            self(self, i + 1, remaining - e);
        }
        cur[i] = 0;
    };
    rec(rec, 0, max_degree);
    return out;
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

namespace {

// nearest integer to an exact rational, exact (round half up)
mpz_class round_rational(const Rational& r) {
    mpz_class num = 2 * r.num() + r.den();
    mpz_class den = 2 * r.den();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

Rational random_positive_coeff(std::mt19937_64& rng) {
    long num = 1 + static_cast<long>(rng_below(rng, 9));
    long den = 1 + static_cast<long>(rng_below(rng, 4));
    return Rational(num, den);
}

Rational dyadic16(double v) {
    constexpr double kScale = 65536.0;  // 2^16
    if (!std::isfinite(v)) return Rational(0);
    v = std::clamp(v, -1e12, 1e12);
    return Rational(mpz_class(std::round(v * kScale)), mpz_class(65536));
}

// sample m distinct pool indices; empty result when the pool is exhausted
std::vector<size_t> sample_distinct(std::mt19937_64& rng, size_t pool_size, int m) {
    std::vector<size_t> idx;
    int stale = 0;
    while (static_cast<int>(idx.size()) < m && stale < 64) {
        size_t cand = rng_below(rng, pool_size);
        if (std::find(idx.begin(), idx.end(), cand) == idx.end())
            idx.push_back(cand);
        else
            ++stale;
    }
    if (static_cast<int>(idx.size()) < m) idx.clear();
    return idx;
}

}  // namespace

CircuitData random_circuit(int n, std::mt19937_64& rng,
                           const std::vector<ExponentVector>& pool, CoeffBias bias) {
    if (n < 1) throw std::invalid_argument("random_circuit: dimension must be >= 1");
    if (pool.empty()) throw std::invalid_argument("random_circuit: empty support pool");
    for (const ExponentVector& e : pool)
        if (static_cast<int>(e.size()) != n || !all_even(e))
            throw std::invalid_argument("random_circuit: pool must hold even points of length n");

    const int m_start = 1 + static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(n) + 1));
    for (int m = m_start; m >= 1; --m) {
        if (static_cast<size_t>(m) > pool.size()) continue;

        if (m == 1) {
            CircuitData d;
            d.n = n;
            d.outer = {pool[rng_below(rng, pool.size())]};
            d.outer_coeffs = {random_positive_coeff(rng)};
            d.inner = d.outer[0];
            d.inner_coeff = Rational(0);
            d.weights = {Rational(1)};
            validate(d);
            return d;
        }

        for (int attempt = 0; attempt < 100; ++attempt) {
            std::vector<size_t> idx = sample_distinct(rng, pool.size(), m);
            if (idx.empty()) break;
            std::vector<ExponentVector> outer;
            outer.reserve(m);
            for (size_t i : idx) outer.push_back(pool[i]);
            if (!affinely_independent(outer)) continue;

            // random convex combination rounded to the lattice; the midpoint
            // of the first two points is the guaranteed fallback for m = 2
            ExponentVector beta(n);
            if (m == 2 && attempt >= 50) {
                for (int j = 0; j < n; ++j) beta[j] = (outer[0][j] + outer[1][j]) / 2;
            } else {
                std::vector<Rational> w(m);
                Rational total(0);
                for (Rational& x : w) {
                    x = Rational(1 + static_cast<long>(rng_below(rng, 8)));
                    total += x;
                }
                for (int j = 0; j < n; ++j) {
                    Rational coord(0);
                    for (int i = 0; i < m; ++i) coord += w[i] * Rational(outer[i][j]);
                    mpz_class rounded = round_rational(coord / total);
                    beta[j] = static_cast<int>(rounded.get_si());
                }
            }

            BarycentricSolve solve = barycentric_weights(outer, beta);
            if (solve.status != BarycentricSolve::Status::ok) continue;
            bool interior = true;
            mpz_class q(1);
            for (const Rational& l : solve.weights) {
                if (l.sign() <= 0) {
                    interior = false;
                    break;
                }
                mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), l.den().get_mpz_t());
            }
            if (!interior) continue;
            if (q > 840) continue;  // keep q-th-power comparisons cheap

            CircuitData d;
            d.n = n;
            d.outer = std::move(outer);
            d.inner = beta;
            d.weights = std::move(solve.weights);
            d.outer_coeffs.reserve(m);
            for (int i = 0; i < m; ++i) d.outer_coeffs.push_back(random_positive_coeff(rng));
            d.inner_coeff = Rational(0);

            CircuitPower cp = circuit_number_power(d);
            const double th = circuit_number_estimate(cp);
            const bool beta_even = all_even(d.inner);
            double r0;
            if (bias == CoeffBias::mixed)
                r0 = rng_unit(rng) * 3.0 - 1.5;  // deliberately may overshoot
            else if (beta_even)
                r0 = rng_unit(rng) * 3.0 - 1.0;  // [-Theta, 2 Theta): positive side is free
            else
                r0 = rng_unit(rng) * 2.0 - 1.0;  // [-Theta, Theta)
            Rational c = dyadic16(r0 * th);
            if (c.is_zero()) c = Rational(1, 65536);
            if (bias == CoeffBias::nonneg_only && !(beta_even && c.sign() > 0)) {
                // exact projection: halve until the q-th-power criterion holds
                int guard = 0;
                while (c.abs().pow(cp.q) > cp.theta_q) {
                    c = c / Rational(2);
                    if (++guard > 200)
                        throw std::logic_error("random_circuit: projection did not converge");
                }
            }
            d.inner_coeff = c;
            validate(d);
            return d;
        }
    }
    throw std::invalid_argument("random_circuit: support pool too small to form a circuit");
}

SoncCertificate random_sonc(int n, int max_degree, int parts, std::uint64_t seed,
                            std::vector<ExponentVector> pool) {
    if (parts < 1) throw std::invalid_argument("random_sonc: need at least one part");
    if (pool.empty()) pool = even_lattice_points(n, max_degree);
    std::mt19937_64 rng(seed);
    SoncCertificate cert(n);
    cert.parts.reserve(parts);
    for (int i = 0; i < parts; ++i) {
        SparsePolynomial p = to_polynomial(random_circuit(n, rng, pool));
        cert.target = cert.target + p;
        cert.parts.push_back(std::move(p));
    }
    return cert;
}

}  // namespace sonc
