#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sonc/certificate.hpp"
#include "sonc/polynomial.hpp"
#include "sonc/separation.hpp"

namespace sonc {

/// Parameters of the randomized search for a SONC approximation of the
/// witness. Restarts are independent and deterministic: restart r derives
/// its generator from seed + r.
struct AttackConfig {
    std::uint64_t seed = 0;
    int parts = 2;       // circuits summed into the candidate
    long budget = 10000;  // coordinate-descent iterations per restart
    int restarts = 1;
    int grid_resolution = 33;  // points per axis, >= 8
    std::vector<double> step_schedule = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
    std::vector<ExponentVector> pool;  // empty = even lattice points up to deg(witness)
};

/// One certified improvement during the search.
struct TraceRow {
    long iteration = 0;
    double grid_norm = 0.0;   // float sup-norm of |candidate - witness| on the grid
    Rational four_point_gap;  // exact gap of the certified candidate
    double margin = 0.0;      // float(four_point_gap - lower_bound)
};

struct RestartOutcome {
    Rational best_gap;          // smallest certified four-point gap seen
    double best_grid_norm = 0;  // smallest float grid norm at a certified point
    std::vector<TraceRow> trace;
};

struct AttackResult {
    Rational lower_bound;  // copied from the separation report
    Rational best_gap;     // min over restarts, ties to the lower restart index
    Rational margin;       // best_gap - lower_bound
    double best_grid_norm = 0.0;
    bool alarm = false;  // margin < 0: a verified candidate beat the bound
    int winner_restart = 0;
    std::vector<RestartOutcome> restarts;
};

/// Uniform rational grid over K (resolution points per axis, endpoints
/// included) with extra points appended.
std::vector<std::vector<Rational>> uniform_grid(
    const BoxRegion& K, int resolution,
    std::span<const std::vector<Rational>> extra = {});

/// max |f| over the grid, computed exactly. The parallel kernel and the
/// serial reference must agree bit-for-bit.
Rational grid_sup_norm_exact(const SparsePolynomial& f, const BoxRegion& K, int resolution,
                             std::span<const std::vector<Rational>> extra = {});
Rational grid_sup_norm_exact_serial(const SparsePolynomial& f, const BoxRegion& K,
                                    int resolution,
                                    std::span<const std::vector<Rational>> extra = {});

/// Exact grid maximum rendered as a float.
double grid_sup_norm(const SparsePolynomial& f, const BoxRegion& K, int resolution);

/// Randomized coordinate search over circuit coefficients for the best SONC
/// approximation of the witness in `report`. Every certified candidate is
/// re-verified exactly; the result's margin must come out nonnegative (the
/// theorem), otherwise `alarm` is set. Restarts run in parallel in `attack`;
/// attack_serial is the reference implementation with identical output.
AttackResult attack(const SeparationReport& report, const AttackConfig& cfg);
AttackResult attack_serial(const SeparationReport& report, const AttackConfig& cfg);

}  // namespace sonc
