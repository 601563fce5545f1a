#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "micropump/error.hpp"
#include "micropump/plate_mechanics.hpp"
#include "oracles.hpp"

using namespace micropump;
using namespace micropump::plate;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Fixture {
    double a = fixtures::reference_diaphragm().radius;
    double c = fixtures::reference_magnet().radius;
    double D = flexural_rigidity(fixtures::reference_diaphragm());
};

double observed_order(double coarse, double mid, double fine) {
    return std::log2(std::abs(coarse - mid) / std::abs(mid - fine));
}

}  // namespace

TEST_SUITE("plate_mechanics") {

TEST_CASE("closed-form center deflection") {
    const Fixture f;
    const double w16 = center_deflection(16e-6, f.a, f.c, f.D);
    CHECK(units::to_um(w16) == Approx(14.93).epsilon(1e-3));
    CHECK(units::to_um(w16) >= 14.7);
    CHECK(units::to_um(w16) <= 15.3);

    CHECK(center_deflection(0.0, f.a, f.c, f.D) == 0.0);

    const double w184 = center_deflection(18.4e-6, f.a, f.c, f.D);
    CHECK(units::to_um(w184) == Approx(17.2).epsilon(5e-3));
    CHECK(rel(units::to_um(w184), 17.0) < 0.02);

    const double w458 = center_deflection(4.58e-6, f.a, f.c, f.D);
    CHECK(units::to_um(w458) == Approx(4.27).epsilon(2e-3));
    CHECK(rel(units::to_um(w458), 4.2) < 0.05);
}

TEST_CASE("a point-like load recovers the clamped point-load deflection") {
    const Fixture f;
    const double c = f.a * 1e-4;
    CHECK(center_deflection(1.0, f.a, c, f.D) ==
          Approx(f.a * f.a / (16.0 * std::numbers::pi * f.D)).epsilon(1e-6));
}

TEST_CASE("force for deflection inverts the closed form") {
    const Fixture f;
    CHECK(units::to_uN(force_for_deflection(15e-6, f.a, f.c, f.D)) == Approx(16.07).epsilon(1e-3));
    CHECK(force_for_deflection(0.0, f.a, f.c, f.D) == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> force(1e-9, 1e-3);
    for (int i = 0; i < 200; ++i) {
        const double F = force(rng);
        CHECK(rel(force_for_deflection(center_deflection(F, f.a, f.c, f.D), f.a, f.c, f.D), F) <= 1e-12);
    }
}

TEST_CASE("kappa must exceed one") {
    const Fixture f;
    try {
        center_deflection(1e-6, f.c, f.c, f.D);
        FAIL("expected geometry error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::geometry);
    }
    CHECK_THROWS_AS(force_for_deflection(1e-6, f.c * 0.5, f.c, f.D), Error);
}

TEST_CASE("limiting force") {
    const DiaphragmSpec d = fixtures::reference_diaphragm();
    const double k = kappa(d, fixtures::reference_magnet());
    const LimitingForce lim = limiting_force(d.thickness, d.yield_strength, k, d.poisson_ratio);
    CHECK(units::to_mN(lim.force) == Approx(2.166).epsilon(1e-3));
    CHECK(lim.branch == LimitBranch::moderate_ratio);
    CHECK(lim.note.find("k < 4.5") != std::string::npos);

    const double base = limiting_force(d.thickness, d.yield_strength, 1.6, 0.5).force;
    CHECK(limiting_force(3.0 * d.thickness, d.yield_strength, 1.6, 0.5).force == Approx(9.0 * base).epsilon(1e-12));

    CHECK(limiting_force(d.thickness, d.yield_strength, 5.0, 0.5).branch == LimitBranch::large_ratio);
    CHECK_THROWS_AS(limiting_force(d.thickness, d.yield_strength, 1.0, 0.5), Error);
}

TEST_CASE("limiting force is discontinuous at k = 4.5 (characterization)") {
    const double below = limiting_force_coefficient(4.5, 0.5, LimitBranch::moderate_ratio);
    const double above = limiting_force_coefficient(4.5, 0.5, LimitBranch::large_ratio);
    // Values of the two printed branches at the threshold, h²σ_y = 1.
    CHECK(below == Approx(4.0 * std::numbers::pi * 20.25 / (6.0 * 20.25 - 3.0)).epsilon(1e-14));
    CHECK(below == Approx(2.1474).epsilon(1e-4));
    CHECK(above == Approx(0.9207).epsilon(1e-4));
    CHECK(std::abs(above - below) / below > 0.5);
    CHECK(limiting_force(1.0, 1.0, 4.5, 0.5).force == Approx(above).epsilon(1e-14));
    CHECK(limiting_force(1.0, 1.0, std::nextafter(4.5, 0.0), 0.5).force == Approx(below).epsilon(1e-12));
}

TEST_CASE("safety holds against both the computed and the tabulated limit") {
    const DiaphragmSpec d = fixtures::reference_diaphragm();
    const double lim = limiting_force(d.thickness, d.yield_strength, kappa(d, fixtures::reference_magnet()), 0.5).force;
    CHECK(lim / 16e-6 >= 2.0);
    CHECK(fixtures::kReferenceLimitingForce / 16e-6 >= 2.0);
}

TEST_CASE("circular FD: uniform load matches q a^4 / 64D") {
    const Fixture f;
    const double q = 10.0;
    const double F = q * std::numbers::pi * f.a * f.a;
    const RadialProfile p = solve_circular_plate(f.a, LoadPatch::uniform(F), f.D, 512);
    CHECK(rel(p.center(), q * std::pow(f.a, 4) / (64.0 * f.D)) < 0.01);
    CHECK(p.w.back() == 0.0);
    CHECK(p.r.back() == Approx(f.a).epsilon(1e-14));
}

TEST_CASE("circular FD: disc load matches the closed form") {
    const Fixture f;
    const RadialProfile p = solve_circular_plate(f.a, LoadPatch::central_disc(f.c, 16e-6), f.D, 512);
    CHECK(rel(p.center(), center_deflection(16e-6, f.a, f.c, f.D)) < 0.01);
    // Deflection decreases monotonically toward the clamped rim.
    for (std::size_t i = 1; i < p.w.size(); ++i) CHECK(p.w[i] <= p.w[i - 1]);

    const RadialProfile zero = solve_circular_plate(f.a, LoadPatch::central_disc(f.c, 0.0), f.D, 128);
    CHECK(std::all_of(zero.w.begin(), zero.w.end(), [](double w) { return w == 0.0; }));
}

TEST_CASE("circular FD agrees with the closed form across random fixtures") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> kappa_dist(1.1, 4.0);
    std::uniform_real_distribution<double> force(1e-6, 1e-4);
    const Fixture f;
    for (int i = 0; i < 20; ++i) {
        const double k = kappa_dist(rng);
        const double F = force(rng);
        const double c = f.a / k;
        const double fd = solve_circular_plate(f.a, LoadPatch::central_disc(c, F), f.D, 512).center();
        CHECK(rel(fd, center_deflection(F, f.a, c, f.D)) < 0.01);
    }
}

TEST_CASE("circular FD rejects bad inputs") {
    const Fixture f;
    CHECK_THROWS_AS(solve_circular_plate(f.a, LoadPatch::uniform(1.0), f.D, 32), Error);
    CHECK_THROWS_AS(solve_circular_plate(f.a, LoadPatch::central_disc(2.0 * f.a, 1.0), f.D, 128), Error);
}

TEST_CASE("second-order grid convergence") {
    const Fixture f;
    SUBCASE("circle") {
        const LoadPatch load = LoadPatch::uniform(1e-5);
        const double w1 = solve_circular_plate(f.a, load, f.D, 65).center();
        const double w2 = solve_circular_plate(f.a, load, f.D, 129).center();
        const double w3 = solve_circular_plate(f.a, load, f.D, 257).center();
        const double order = observed_order(w1, w2, w3);
        CHECK(order >= 1.7);
        CHECK(order <= 2.3);
    }
    SUBCASE("square") {
        const PlateGeometry sq = PlateGeometry::square(3e-3, 80e-6);
        const LoadPatch load = LoadPatch::uniform(1e-5);
        const double w1 = solve_rect_plate(sq, load, f.D, 65).center();
        const double w2 = solve_rect_plate(sq, load, f.D, 129).center();
        const double w3 = solve_rect_plate(sq, load, f.D, 257).center();
        const double order = observed_order(w1, w2, w3);
        CHECK(order >= 1.7);
        CHECK(order <= 2.3);
    }
}

TEST_CASE("rectangular FD: clamped square under uniform load") {
    const double L = 2e-3;
    const double D = 1e-7;
    const double q = 3.0;
    const PlateGeometry sq = PlateGeometry::square(L, 80e-6);
    const PlateField w = solve_rect_plate(sq, LoadPatch::uniform(q * L * L), D, 65);
    const double coefficient = w.center() * D / (q * std::pow(L, 4));
    CHECK(coefficient >= 0.00124);
    CHECK(coefficient <= 0.00128);
    CHECK(rel(coefficient, oracle::clamped_square_coefficient()) < 0.01);
}

TEST_CASE("disc load rasterization conserves the total force") {
    const Fixture f;
    const PlateGeometry sq = PlateGeometry::equal_area_square(f.a, 80e-6);
    for (int n : {65, 129, 257}) {
        const auto [nx, ny] = rect_grid_size(sq, n);
        const auto nodal = rasterize_load(sq, LoadPatch::central_disc(f.c, 18.4e-6), nx, ny);
        const double total = std::accumulate(nodal.begin(), nodal.end(), 0.0);
        CHECK(rel(total, 18.4e-6) <= 1e-12);
    }
    const PlateGeometry rect = PlateGeometry::equal_area_rectangle(f.a, 80e-6, 2.0);
    // The disc must fit inside the short side of the rectangle for this check.
    const double c = 0.9 * rect.in_radius();
    const auto [nx, ny] = rect_grid_size(rect, 65);
    const auto nodal = rasterize_load(rect, LoadPatch::central_disc(c, 1.0), nx, ny);
    CHECK(rel(std::accumulate(nodal.begin(), nodal.end(), 0.0), 1.0) <= 1e-12);
}

TEST_CASE("square plate field is symmetric under a quarter turn") {
    const Fixture f;
    const PlateGeometry sq = PlateGeometry::equal_area_square(f.a, 80e-6);
    const PlateField w = solve_rect_plate(sq, LoadPatch::central_disc(f.c, 18.4e-6), f.D, 65);
    REQUIRE(w.nx == w.ny);
    double max_w = 0.0;
    for (double v : w.w) max_w = std::max(max_w, std::abs(v));
    double worst = 0.0;
    for (int j = 0; j < w.ny; ++j)
        for (int i = 0; i < w.nx; ++i) worst = std::max(worst, std::abs(w.at(i, j) - w.at(w.ny - 1 - j, i)));
    CHECK(worst / max_w <= 1e-10);
}

TEST_CASE("equal-area geometry") {
    const double a = 1955e-6;
    const PlateGeometry sq = PlateGeometry::equal_area_square(a, 80e-6);
    CHECK(units::to_um(sq.lx) == Approx(3465.0).epsilon(1e-4));
    const PlateGeometry rect = PlateGeometry::equal_area_rectangle(a, 80e-6, 2.0);
    CHECK(rect.lx * rect.ly == Approx(std::numbers::pi * a * a).epsilon(1e-14));
    CHECK(rect.lx / rect.ly == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("equal-area square deflects less than the circle") {
    const Fixture f;
    const PlateGeometry sq = PlateGeometry::equal_area_square(f.a, 80e-6);
    const double square = solve_rect_plate(sq, LoadPatch::central_disc(f.c, 18.4e-6), f.D, 129).center();
    const double circle = center_deflection(18.4e-6, f.a, f.c, f.D);
    CHECK(square < circle);
}

TEST_CASE("solvers are linear in the load") {
    const Fixture f;
    const PlateGeometry sq = PlateGeometry::equal_area_square(f.a, 80e-6);
    const PlateField w1 = solve_rect_plate(sq, LoadPatch::central_disc(f.c, 1e-5), f.D, 65);
    const PlateField w2 = solve_rect_plate(sq, LoadPatch::central_disc(f.c, 2e-5), f.D, 65);
    for (std::size_t i = 0; i < w1.w.size(); ++i) {
        CHECK(std::abs(w2.w[i] / 2e-5 - w1.w[i] / 1e-5) <= 1e-9 * std::abs(w1.center() / 1e-5));
    }
    const RadialProfile p1 = solve_circular_plate(f.a, LoadPatch::central_disc(f.c, 1e-5), f.D, 256);
    const RadialProfile p2 = solve_circular_plate(f.a, LoadPatch::central_disc(f.c, 3e-5), f.D, 256);
    for (std::size_t i = 0; i < p1.w.size(); ++i) {
        CHECK(std::abs(p2.w[i] - 3.0 * p1.w[i]) <= 1e-9 * p2.center());
    }
}

TEST_CASE("rectangular FD rejects coarse grids and circles") {
    const Fixture f;
    CHECK_THROWS_AS(solve_rect_plate(PlateGeometry::square(3e-3, 80e-6), LoadPatch::uniform(1.0), f.D, 33), Error);
    CHECK_THROWS_AS(solve_rect_plate(PlateGeometry::circle(1e-3, 80e-6), LoadPatch::uniform(1.0), f.D, 65), Error);
}

TEST_CASE("shape comparison") {
    ShapeFixture fixture;
    fixture.diaphragm = fixtures::reference_diaphragm();
    fixture.load_radius = fixtures::reference_magnet().radius;
    fixture.rect_nodes = 65;
    const std::vector<double> forces = {0.0, 9.2e-6, 18.4e-6, 36.8e-6};
    const ShapeComparison cmp = compare_shapes(fixture, forces);
    REQUIRE(cmp.rows.size() == forces.size());

    CHECK(cmp.rows[0].w_circle == 0.0);
    CHECK(cmp.rows[0].w_square == 0.0);
    CHECK(cmp.rows[0].w_rectangle == 0.0);
    for (std::size_t i = 1; i < cmp.rows.size(); ++i) CHECK(cmp.rows[i].ordered);

    const ShapeRow& a = cmp.rows[2];
    const ShapeRow& b = cmp.rows[3];
    CHECK(std::abs(b.w_square / b.force - a.w_square / a.force) <= 1e-9 * a.w_square / a.force);
    CHECK(std::abs(b.w_circle / b.force - a.w_circle / a.force) <= 1e-9 * a.w_circle / a.force);
}

}
