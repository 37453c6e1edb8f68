#include "sonc/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "sonc/rng.hpp"
#include "sonc/threads.hpp"

namespace sonc {

std::vector<std::vector<Rational>> uniform_grid(const BoxRegion& K, int resolution,
                                                std::span<const std::vector<Rational>> extra) {
    if (resolution < 2) throw std::invalid_argument("uniform_grid: resolution must be >= 2");
    const int n = K.dimension();
    std::vector<std::vector<Rational>> axes(n);
    for (int i = 0; i < n; ++i) {
        const auto& [lo, hi] = K.intervals()[i];
        const Rational width = hi - lo;
        axes[i].reserve(resolution);
        for (int t = 0; t < resolution; ++t)
            axes[i].push_back(lo + width * Rational(t, resolution - 1));
    }
    std::vector<std::vector<Rational>> pts;
    std::vector<int> idx(n, 0);
    std::vector<Rational> cur(n);
    while (true) {
        for (int i = 0; i < n; ++i) cur[i] = axes[i][idx[i]];
        pts.push_back(cur);
        int i = n - 1;
        while (i >= 0 && ++idx[i] == resolution) idx[i--] = 0;
        if (i < 0) break;
    }
    for (const auto& p : extra) {
        if (static_cast<int>(p.size()) != n)
            throw std::invalid_argument("uniform_grid: extra point dimension mismatch");
        pts.push_back(p);
    }
    return pts;
}

Rational grid_sup_norm_exact(const SparsePolynomial& f, const BoxRegion& K, int resolution,
                             std::span<const std::vector<Rational>> extra) {
    if (f.dimension() != K.dimension())
        throw std::invalid_argument("grid_sup_norm: dimension mismatch");
    const auto pts = uniform_grid(K, resolution, extra);
    const int threads = effective_threads();
    std::vector<Rational> partial(threads, Rational(0));
#pragma omp parallel num_threads(threads)
    {
        const int tid = omp_get_thread_num();
        Rational local(0);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pts.size()); ++i) {
            Rational v = f.evaluate(pts[i]).abs();
            if (v > local) local = v;
        }
        partial[tid] = local;
    }
    Rational best(0);
    for (const Rational& p : partial)
        if (p > best) best = p;
    return best;
}

Rational grid_sup_norm_exact_serial(const SparsePolynomial& f, const BoxRegion& K,
                                    int resolution,
                                    std::span<const std::vector<Rational>> extra) {
    if (f.dimension() != K.dimension())
        throw std::invalid_argument("grid_sup_norm: dimension mismatch");
    Rational best(0);
    for (const auto& p : uniform_grid(K, resolution, extra)) {
        Rational v = f.evaluate(p).abs();
        if (v > best) best = v;
    }
    return best;
}

double grid_sup_norm(const SparsePolynomial& f, const BoxRegion& K, int resolution) {
    return grid_sup_norm_exact(f, K, resolution).to_double();
}

// ---------------------------------------------------------------------------
// Randomized attack
// ---------------------------------------------------------------------------

namespace {

const mpz_class kDen32 = [] {
    mpz_class d(1);
    d <<= 32;
    return d;
}();

// candidate coefficients are rationalized with denominator 2^32
Rational dyadic32(double v) {
    if (!std::isfinite(v)) v = 0.0;
    v = std::clamp(v, -1e6, 1e6);
    return Rational(mpz_class(std::round(v * 4294967296.0)), kDen32);
}

// circuit structure fixed at restart start; coefficients evolve as floats
struct PartState {
    CircuitData shape;
    std::vector<double> outer;
    double inner = 0.0;
};

// Rationalizes the float coefficients and shrinks the inner coefficient until
// the exact circuit-number criterion accepts. The clamps guarantee the loop
// needs at most 64 halvings: |c_beta| <= 1e6 and Theta >= 2^-32.
CircuitData project_exact(const PartState& ps) {
    CircuitData d = ps.shape;
    for (size_t i = 0; i < d.outer_coeffs.size(); ++i) {
        Rational c = dyadic32(ps.outer[i]);
        if (c.sign() <= 0) c = Rational(mpz_class(1), kDen32);
        d.outer_coeffs[i] = c;
    }
    if (d.degenerate()) {
        d.inner_coeff = Rational(0);
        return d;
    }
    Rational cb = dyadic32(ps.inner);
    if (cb.is_zero()) cb = Rational(mpz_class(1), kDen32);
    if (!(all_even(d.inner) && cb.sign() > 0)) {
        const CircuitPower cp = circuit_number_power(d);
        int halvings = 0;
        while (cb.abs().pow(cp.q) > cp.theta_q) {
            cb = cb / Rational(2);
            if (++halvings > 64)
                throw std::logic_error("attack: feasibility projection exceeded 64 halvings");
        }
    }
    d.inner_coeff = cb;
    return d;
}

void validate_config(const AttackConfig& cfg) {
    if (cfg.budget < 1) throw std::invalid_argument("attack: budget must be >= 1");
    if (cfg.grid_resolution < 8)
        throw std::invalid_argument("attack: grid resolution must be >= 8 points per axis");
    if (cfg.parts < 1) throw std::invalid_argument("attack: need at least one part");
    if (cfg.restarts < 1) throw std::invalid_argument("attack: need at least one restart");
    if (cfg.step_schedule.empty())
        throw std::invalid_argument("attack: step schedule must be non-empty");
    for (double s : cfg.step_schedule)
        if (!(s > 0.0)) throw std::invalid_argument("attack: step sizes must be positive");
}

RestartOutcome run_restart(const SeparationReport& report, const AttackConfig& cfg,
                           const SeparatingFunctional& F,
                           const std::vector<std::vector<Rational>>& grid_pts,
                           const std::vector<double>& witness_vals,
                           const std::vector<ExponentVector>& pool, int restart_index) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(restart_index));
    const int n = report.n;

    std::vector<PartState> parts;
    parts.reserve(cfg.parts);
    for (int p = 0; p < cfg.parts; ++p) {
        CircuitData c = random_circuit(n, rng, pool, CoeffBias::nonneg_only);
        PartState ps;
        ps.inner = c.inner_coeff.to_double();
        for (const Rational& cc : c.outer_coeffs) ps.outer.push_back(cc.to_double());
        ps.shape = std::move(c);
        parts.push_back(std::move(ps));
    }

    // one slot per tunable coefficient, with float monomial tables per slot
    struct Slot {
        int part;
        int index;  // outer index; ignored for the inner slot
        bool inner;
    };
    std::vector<Slot> slots;
    std::vector<std::vector<double>> mono;
    auto monomial_row = [&](const ExponentVector& e) {
        std::vector<double> row(grid_pts.size());
        for (size_t pt = 0; pt < grid_pts.size(); ++pt) {
            double v = 1.0;
            for (int i = 0; i < n; ++i) {
                const double base = grid_pts[pt][i].to_double();
                for (int k = 0; k < e[i]; ++k) v *= base;
            }
            row[pt] = v;
        }
        return row;
    };
    for (int p = 0; p < cfg.parts; ++p) {
        for (size_t i = 0; i < parts[p].shape.outer.size(); ++i) {
            slots.push_back({p, static_cast<int>(i), false});
            mono.push_back(monomial_row(parts[p].shape.outer[i]));
        }
        if (!parts[p].shape.degenerate()) {
            slots.push_back({p, 0, true});
            mono.push_back(monomial_row(parts[p].shape.inner));
        }
    }

    auto objective = [&]() {
        double worst = 0.0;
        for (size_t pt = 0; pt < grid_pts.size(); ++pt) {
            double v = -witness_vals[pt];
            for (size_t s = 0; s < slots.size(); ++s) {
                const Slot& sl = slots[s];
                const double c =
                    sl.inner ? parts[sl.part].inner : parts[sl.part].outer[sl.index];
                v += c * mono[s][pt];
            }
            worst = std::max(worst, std::fabs(v));
        }
        return worst;
    };

    // keep the float state synced with its exact feasible projection
    auto sync_part = [&](int p) {
        CircuitData d = project_exact(parts[p]);
        for (size_t i = 0; i < d.outer_coeffs.size(); ++i)
            parts[p].outer[i] = d.outer_coeffs[i].to_double();
        parts[p].inner = d.inner_coeff.to_double();
    };
    for (int p = 0; p < cfg.parts; ++p) sync_part(p);

    RestartOutcome out;
    bool have_cert = false;
    double best_certified_obj = std::numeric_limits<double>::infinity();

    auto certify = [&](long iter, double obj_now) {
        SoncCertificate cert(n);
        cert.parts.reserve(parts.size());
        for (const PartState& ps : parts) {
            SparsePolynomial poly = to_polynomial(project_exact(ps));
            cert.target = cert.target + poly;
            cert.parts.push_back(std::move(poly));
        }
        VerificationReport vr = verify_serial(cert);
        if (!vr.ok)
            throw std::logic_error("attack: projected candidate failed exact verification: " +
                                   vr.failure_reason);
        Rational gap = four_point_gap(F, report.witness, cert.target);
        out.trace.push_back(
            TraceRow{iter, obj_now, gap, (gap - report.lower_bound).to_double()});
        if (!have_cert || gap < out.best_gap) out.best_gap = gap;
        if (!have_cert || obj_now < out.best_grid_norm) out.best_grid_norm = obj_now;
        have_cert = true;
        best_certified_obj = std::min(best_certified_obj, obj_now);
    };

    double cur_obj = objective();
    certify(0, cur_obj);

    const std::vector<double>& sched = cfg.step_schedule;
    for (long iter = 1; iter <= cfg.budget; ++iter) {
        const Slot& sl = slots[rng_below(rng, slots.size())];
        const double step =
            sched[static_cast<size_t>((iter - 1) * static_cast<long>(sched.size()) / cfg.budget)];
        PartState saved = parts[sl.part];
        double& c = sl.inner ? parts[sl.part].inner : parts[sl.part].outer[sl.index];
        c += (2.0 * rng_unit(rng) - 1.0) * step * (1.0 + std::fabs(c));
        if (!sl.inner && c < 1e-9) c = 1e-9;
        if (sl.inner) c = std::clamp(c, -1e6, 1e6);
        sync_part(sl.part);
        const double new_obj = objective();
        if (new_obj < cur_obj) {
            cur_obj = new_obj;
            if (cur_obj < best_certified_obj * 0.999) certify(iter, cur_obj);
        } else {
            parts[sl.part] = std::move(saved);
        }
    }
    certify(cfg.budget, cur_obj);
    return out;
}

AttackResult merge_restarts(const SeparationReport& report, std::vector<RestartOutcome> outs) {
    AttackResult res;
    res.lower_bound = report.lower_bound;
    res.winner_restart = 0;
    for (size_t r = 1; r < outs.size(); ++r)
        if (outs[r].best_gap < outs[res.winner_restart].best_gap)
            res.winner_restart = static_cast<int>(r);
    res.best_gap = outs[res.winner_restart].best_gap;
    res.best_grid_norm = outs[0].best_grid_norm;
    for (const RestartOutcome& o : outs) res.best_grid_norm = std::min(res.best_grid_norm, o.best_grid_norm);
    res.margin = res.best_gap - res.lower_bound;
    res.alarm = res.margin.sign() < 0;
    res.restarts = std::move(outs);
    return res;
}

struct AttackInputs {
    SeparatingFunctional F;
    std::vector<std::vector<Rational>> grid;
    std::vector<double> witness_vals;
    std::vector<ExponentVector> pool;
};

AttackInputs prepare(const SeparationReport& report, const AttackConfig& cfg) {
    validate_config(cfg);
    AttackInputs in{make_functional(report.n, report.u), {}, {}, {}};
    in.grid = uniform_grid(report.K, cfg.grid_resolution,
                           std::span<const std::vector<Rational>>(in.F.points.data(), 4));
    in.witness_vals.reserve(in.grid.size());
    for (const auto& p : in.grid) in.witness_vals.push_back(report.witness.evaluate(p).to_double());
    in.pool = cfg.pool.empty()
                  ? even_lattice_points(report.n, std::max(2, report.witness.degree()))
                  : cfg.pool;
    return in;
}

}  // namespace

AttackResult attack(const SeparationReport& report, const AttackConfig& cfg) {
    const AttackInputs in = prepare(report, cfg);
    std::vector<RestartOutcome> outs(cfg.restarts);
    const int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int r = 0; r < cfg.restarts; ++r)
        outs[r] = run_restart(report, cfg, in.F, in.grid, in.witness_vals, in.pool, r);
    return merge_restarts(report, std::move(outs));
}

AttackResult attack_serial(const SeparationReport& report, const AttackConfig& cfg) {
    const AttackInputs in = prepare(report, cfg);
    std::vector<RestartOutcome> outs(cfg.restarts);
    for (int r = 0; r < cfg.restarts; ++r)
        outs[r] = run_restart(report, cfg, in.F, in.grid, in.witness_vals, in.pool, r);
    return merge_restarts(report, std::move(outs));
}

}  // namespace sonc
