// Benchmarks the OpenMP kernels against their serial reference
// implementations and confirms the outputs agree bit for bit.

#include <chrono>
#include <cstdio>
#include <functional>

#include "sonc/certificate.hpp"
#include "sonc/experiment.hpp"
#include "sonc/json_io.hpp"
#include "sonc/separation.hpp"
#include "sonc/threads.hpp"

using sonc::Rational;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(const std::function<void()>& body) {
    const auto t0 = Clock::now();
    body();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* name, double serial_s, double parallel_s, bool match) {
    std::printf("%-22s %10.3f s %10.3f s %8.2fx   %s\n", name, serial_s, parallel_s,
                parallel_s > 0 ? serial_s / parallel_s : 0.0,
                match ? "bit-exact" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", sonc::effective_threads());
    std::printf("%-22s %12s %12s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "outputs");

    bool all_match = true;

    {
        const sonc::BoxRegion k2({{Rational(-2), Rational(2)}, {Rational(-2), Rational(2)}});
        const auto rep = sonc::separation_bound(k2, 4, 2);
        Rational ser, par;
        const double ts =
            seconds([&] { ser = sonc::grid_sup_norm_exact_serial(rep.witness, rep.K, 257); });
        const double tp =
            seconds([&] { par = sonc::grid_sup_norm_exact(rep.witness, rep.K, 257); });
        const bool match = ser == par;
        all_match = all_match && match;
        row("grid_sup_norm_exact", ts, tp, match);
    }

    {
        const auto cert = sonc::random_sonc(3, 12, 4096, 1);
        sonc::VerificationReport ser, par;
        const double ts = seconds([&] { ser = sonc::verify_serial(cert); });
        const double tp = seconds([&] { par = sonc::verify(cert); });
        const bool match =
            ser.ok && sonc::verification_to_json(ser) == sonc::verification_to_json(par);
        all_match = all_match && match;
        row("verify", ts, tp, match);
    }

    {
        const sonc::BoxRegion k1({{Rational(-2), Rational(2)}});
        const auto rep = sonc::separation_bound(k1, 3, 1);
        sonc::AttackConfig cfg;
        cfg.budget = 20000;
        cfg.restarts = 8;
        sonc::AttackResult ser, par;
        const double ts = seconds([&] { ser = sonc::attack_serial(rep, cfg); });
        const double tp = seconds([&] { par = sonc::attack(rep, cfg); });
        const bool match = !ser.alarm &&
                           sonc::attack_to_json(ser) == sonc::attack_to_json(par);
        all_match = all_match && match;
        row("attack", ts, tp, match);
    }

    if (!all_match) {
        std::printf("kernel outputs diverged; the parallel paths are unsound\n");
        return 1;
    }
    return 0;
}
