#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "sonc/experiment.hpp"
#include "sonc/json_io.hpp"

using sonc::AttackConfig;
using sonc::BoxRegion;
using sonc::Rational;
using sonc::SparsePolynomial;
using sonc::parse_polynomial;

namespace {

BoxRegion box1(long lo, long hi) { return BoxRegion({{Rational(lo), Rational(hi)}}); }

sonc::SeparationReport acceptance_report() { return sonc::separation_bound(box1(-2, 2), 3, 1); }

}  // namespace

TEST_CASE("uniform grid structure") {
    const auto pts = sonc::uniform_grid(box1(0, 1), 5);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0] == std::vector<Rational>{Rational(0)});
    CHECK(pts[1] == std::vector<Rational>{Rational(1, 4)});
    CHECK(pts[4] == std::vector<Rational>{Rational(1)});

    const BoxRegion k2({{Rational(-1), Rational(1)}, {Rational(0), Rational(2)}});
    CHECK(sonc::uniform_grid(k2, 9).size() == 81);

    const std::vector<std::vector<Rational>> extra{{Rational(7, 13)}};
    const auto with_extra = sonc::uniform_grid(box1(0, 1), 5, extra);
    REQUIRE(with_extra.size() == 6);
    CHECK(with_extra.back() == extra[0]);

    CHECK_THROWS_AS(sonc::uniform_grid(box1(0, 1), 1), std::invalid_argument);
    const std::vector<std::vector<Rational>> bad{{Rational(0), Rational(0)}};
    CHECK_THROWS_AS(sonc::uniform_grid(box1(0, 1), 5, bad), std::invalid_argument);
}

TEST_CASE("grid sup norm on fixed polynomials") {
    CHECK(sonc::grid_sup_norm_exact(parse_polynomial("1", 1), box1(-2, 2), 33) == Rational(1));
    CHECK(sonc::grid_sup_norm_exact(parse_polynomial("x1", 1), box1(-2, 2), 33) == Rational(2));
    // odd resolution hits the minimizer of x^2 - 1 at 0 and the endpoints
    CHECK(sonc::grid_sup_norm_exact(parse_polynomial("x1^2 - 1", 1), box1(-2, 2), 33) ==
          Rational(3));
    CHECK(sonc::grid_sup_norm(parse_polynomial("x1", 1), box1(-2, 2), 33) == 2.0);
    CHECK_THROWS_AS(sonc::grid_sup_norm_exact(parse_polynomial("x1 + x2", 2), box1(0, 1), 9),
                    std::invalid_argument);
}

TEST_CASE("grid refinement is monotone and the witness endpoint dominates") {
    const auto rep = acceptance_report();
    // nested grids: resolution 2^k + 1 subdivides its predecessor
    const Rational a = sonc::grid_sup_norm_exact(rep.witness, rep.K, 9);
    const Rational b = sonc::grid_sup_norm_exact(rep.witness, rep.K, 17);
    const Rational c = sonc::grid_sup_norm_exact(rep.witness, rep.K, 33);
    CHECK(a <= b);
    CHECK(b <= c);
    // the witness is even-degree with positive lead, so max sits at an endpoint
    const std::vector<Rational> left{Rational(-2)};
    CHECK(c == rep.witness.evaluate(left).abs());
}

TEST_CASE("parallel and serial sup norms agree bit for bit") {
    const auto rep = acceptance_report();
    const auto F = sonc::make_functional(1, rep.u);
    const std::span<const std::vector<Rational>> extra(F.points.data(), 4);
    for (int res : {8, 17, 33, 65}) {
        const Rational par = sonc::grid_sup_norm_exact(rep.witness, rep.K, res, extra);
        const Rational ser = sonc::grid_sup_norm_exact_serial(rep.witness, rep.K, res, extra);
        CHECK(par == ser);
    }
}

TEST_CASE("grid with the four points injected dominates the four point gap") {
    const auto rep = acceptance_report();
    const auto F = sonc::make_functional(1, rep.u);
    const std::span<const std::vector<Rational>> extra(F.points.data(), 4);
    const auto g = parse_polynomial("x1^6 + 1/7", 1);
    const Rational gap = sonc::four_point_gap(F, rep.witness, g);
    const Rational norm = sonc::grid_sup_norm_exact(g - rep.witness, rep.K, 9, extra);
    CHECK(norm >= gap);
}

TEST_CASE("attack config validation") {
    const auto rep = acceptance_report();
    AttackConfig cfg;
    cfg.budget = 0;
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
    cfg = AttackConfig{};
    cfg.grid_resolution = 7;
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
    cfg = AttackConfig{};
    cfg.parts = 0;
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
    cfg = AttackConfig{};
    cfg.restarts = 0;
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
    cfg = AttackConfig{};
    cfg.step_schedule.clear();
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
    cfg = AttackConfig{};
    cfg.step_schedule = {0.5, -0.1};
    CHECK_THROWS_AS(sonc::attack_serial(rep, cfg), std::invalid_argument);
}

TEST_CASE("attack respects the certified bound and reports consistently") {
    const auto rep = acceptance_report();
    AttackConfig cfg;
    cfg.seed = 0;
    cfg.budget = 500;
    cfg.restarts = 3;
    cfg.parts = 2;
    const auto res = sonc::attack_serial(rep, cfg);

    CHECK(res.lower_bound == rep.lower_bound);
    CHECK(res.margin == res.best_gap - res.lower_bound);
    CHECK(res.margin.sign() >= 0);  // the theorem
    CHECK_FALSE(res.alarm);
    REQUIRE(res.restarts.size() == 3);

    // winner is the smallest index attaining the minimum gap
    Rational min_gap = res.restarts[0].best_gap;
    int min_idx = 0;
    for (size_t r = 1; r < res.restarts.size(); ++r)
        if (res.restarts[r].best_gap < min_gap) {
            min_gap = res.restarts[r].best_gap;
            min_idx = static_cast<int>(r);
        }
    CHECK(res.winner_restart == min_idx);
    CHECK(res.best_gap == min_gap);

    for (const auto& outcome : res.restarts) {
        REQUIRE_FALSE(outcome.trace.empty());
        CHECK(outcome.trace.front().iteration == 0);
        CHECK(outcome.trace.back().iteration == cfg.budget);
        Rational row_min_gap = outcome.trace[0].four_point_gap;
        double row_min_norm = outcome.trace[0].grid_norm;
        long prev_iter = -1;
        for (const auto& row : outcome.trace) {
            CHECK(row.iteration >= prev_iter);
            prev_iter = row.iteration;
            CHECK(row.margin ==
                  doctest::Approx((row.four_point_gap - rep.lower_bound).to_double()));
            if (row.four_point_gap < row_min_gap) row_min_gap = row.four_point_gap;
            row_min_norm = std::min(row_min_norm, row.grid_norm);
        }
        CHECK(outcome.best_gap == row_min_gap);
        CHECK(outcome.best_grid_norm == row_min_norm);
        CHECK(outcome.best_gap >= rep.lower_bound);
    }
}

TEST_CASE("attack is deterministic and the parallel driver matches serial") {
    const auto rep = acceptance_report();
    AttackConfig cfg;
    cfg.seed = 7;
    cfg.budget = 400;
    cfg.restarts = 2;
    const auto a = sonc::attack(rep, cfg);
    const auto b = sonc::attack(rep, cfg);
    const auto c = sonc::attack_serial(rep, cfg);
    CHECK(sonc::attack_to_json(a) == sonc::attack_to_json(b));
    CHECK(sonc::attack_to_json(a) == sonc::attack_to_json(c));

    cfg.seed = 8;  // a different seed must explore differently
    const auto d = sonc::attack_serial(rep, cfg);
    CHECK(sonc::attack_to_json(d) != sonc::attack_to_json(c));
}

TEST_CASE("near-zero single-part candidate still clears the bound") {
    const auto rep = acceptance_report();
    AttackConfig cfg;
    cfg.parts = 1;
    cfg.budget = 1;
    const auto res = sonc::attack_serial(rep, cfg);
    CHECK(res.best_gap >= rep.lower_bound);
    CHECK_FALSE(res.alarm);
}

TEST_CASE("attack accepts a custom support pool") {
    const auto rep = acceptance_report();
    AttackConfig cfg;
    cfg.budget = 200;
    cfg.pool = sonc::even_lattice_points(1, 4);
    const auto res = sonc::attack_serial(rep, cfg);
    CHECK_FALSE(res.alarm);
    // every certified candidate stays within the pool's degree
    CHECK(res.best_gap >= rep.lower_bound);
}
