#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sonc/circuit.hpp"
#include "sonc/polynomial.hpp"

namespace sonc {

/// Claimed SONC membership: the parts are asserted to be nonnegative circuit
/// polynomials summing exactly to the target. The verifier trusts nothing
/// and re-derives every piece.
struct SoncCertificate {
    int n;
    SparsePolynomial target;
    std::vector<SparsePolynomial> parts;

    explicit SoncCertificate(int dim) : n(dim), target(dim) {}
};

/// Outcome of checking a single claimed part.
struct PartReport {
    bool is_circuit = false;
    CircuitDefect defect = CircuitDefect::none;  // set when !is_circuit
    std::string detail;                          // failure explanation
    bool nonnegative = false;
    std::optional<CircuitData> data;    // present when is_circuit
    std::optional<CircuitPower> power;  // present when the power was computable

    bool passed() const { return is_circuit && nonnegative; }
};

struct VerificationReport {
    bool ok = false;
    bool sum_matches = false;
    SparsePolynomial residual;  // target - sum(parts); zero iff sum_matches
    std::vector<PartReport> parts;
    int first_failing_part = -1;  // list order; -1 when every part passes
    std::string failure_reason;   // empty when ok

    VerificationReport() : residual(1) {}
};

/// Exact verification: each part must pass circuit detection and the
/// nonnegativity criterion, and the parts must sum to the target with zero
/// residual. Dimension mismatches throw; semantic failures are reported.
/// Parts are checked in parallel; verify_serial is the reference path.
VerificationReport verify(const SoncCertificate& cert);
VerificationReport verify_serial(const SoncCertificate& cert);

/// All exponent vectors with even nonnegative entries and total degree
/// <= max_degree, in lexicographic generation order.
std::vector<ExponentVector> even_lattice_points(int n, int max_degree);

/// Whether random_circuit must respect the circuit-number bound on the inner
/// coefficient (nonneg_only) or may deliberately overshoot it (mixed).
enum class CoeffBias { nonneg_only, mixed };

/// Random circuit polynomial over the given support pool. With nonneg_only
/// the inner coefficient is projected into the feasible range, so the result
/// is nonnegative by construction. Deterministic in the rng state. Throws
/// std::invalid_argument when the pool cannot yield a circuit.
CircuitData random_circuit(int n, std::mt19937_64& rng,
                           const std::vector<ExponentVector>& pool,
                           CoeffBias bias = CoeffBias::nonneg_only);

/// Certificate made of `parts` random nonnegative circuits; verifies ok by
/// construction. An empty pool defaults to even_lattice_points(n, max_degree).
SoncCertificate random_sonc(int n, int max_degree, int parts, std::uint64_t seed,
                            std::vector<ExponentVector> pool = {});

}  // namespace sonc
