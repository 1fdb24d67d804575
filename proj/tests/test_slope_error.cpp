#include <cmath>
#include <vector>

#include <doctest.h>

#include "shadowheight/angles.hpp"
#include "shadowheight/slope_error.hpp"

using namespace shadowheight;

namespace {

const std::vector<double> kElevations{20, 30, 40, 50, 60, 70};

// Published reference grids, 2-decimal cells.
const std::vector<double> kPositiveRows{1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
const double kPositiveTable[6][6] = {
    {0.02, 0.02, 0.02, 0.02, 0.02, 0.02}, {0.02, 0.02, 0.03, 0.03, 0.03, 0.03},
    {0.03, 0.03, 0.03, 0.03, 0.03, 0.03}, {0.04, 0.04, 0.04, 0.04, 0.04, 0.04},
    {0.05, 0.05, 0.05, 0.05, 0.05, 0.05}, {0.05, 0.05, 0.06, 0.06, 0.06, 0.05}};

const std::vector<double> kNegativeRows{1.0, 1.5, 2.0, 2.5, 3.0};
const double kNegativeTable[5][6] = {
    {0.02, 0.02, 0.02, 0.02, 0.02, 0.02}, {0.03, 0.03, 0.03, 0.03, 0.03, 0.03},
    {0.04, 0.04, 0.04, 0.04, 0.04, 0.04}, {0.05, 0.05, 0.05, 0.05, 0.05, 0.05},
    {0.06, 0.06, 0.06, 0.06, 0.06, 0.06}};

// Independent grid-scan check of max_admissible_slope.
double theta_max_by_scan(double target, double h, SlopeSign sign) {
    double best = 0.0;
    for (double theta = 0.0; theta <= 10.0; theta += 0.001) {
        if (sign == SlopeSign::Negative && theta >= h)
            break;
        if (sign == SlopeSign::Positive && h + theta >= 90.0)
            break;
        if (relative_error(h, SlopeSpec{theta, sign}) <= target)
            best = theta;
        else
            break;
    }
    return best;
}

}  // namespace

TEST_CASE("relative error: flat terrain and reference cells") {
    CHECK(relative_error(40.0, SlopeSpec{0.0, SlopeSign::Positive}) == 0.0);
    CHECK(relative_error(40.0, SlopeSpec{0.0, SlopeSign::Negative}) == 0.0);

    CHECK(std::abs(relative_error(40.0, SlopeSpec{2.0, SlopeSign::Positive}) -
                   0.0330345) < 1e-6);
    CHECK(round_half_up_2(relative_error(40.0, SlopeSpec{2.0, SlopeSign::Positive})) ==
          doctest::Approx(0.03));
    CHECK(std::abs(relative_error(30.0, SlopeSpec{2.5, SlopeSign::Negative}) -
                   0.0478279) < 1e-6);
    CHECK(round_half_up_2(relative_error(30.0, SlopeSpec{2.5, SlopeSign::Negative})) ==
          doctest::Approx(0.05));
}

TEST_CASE("relative error: domain") {
    CHECK_THROWS_AS(relative_error(0.0, SlopeSpec{1.0, SlopeSign::Positive}), DomainError);
    CHECK_THROWS_AS(relative_error(90.0, SlopeSpec{1.0, SlopeSign::Positive}), DomainError);
    CHECK_THROWS_AS(relative_error(40.0, SlopeSpec{-1.0, SlopeSign::Positive}), DomainError);
    CHECK_THROWS_AS(relative_error(40.0, SlopeSpec{10.5, SlopeSign::Positive}), DomainError);
    // Negative slope steeper than the elevation swallows the shadow.
    CHECK_THROWS_AS(relative_error(8.0, SlopeSpec{9.0, SlopeSign::Negative}), DomainError);
}

TEST_CASE("error table reproduces the published grids after rounding") {
    auto pos = error_table(kPositiveRows, kElevations, SlopeSign::Positive);
    for (std::size_t r = 0; r < kPositiveRows.size(); ++r)
        for (std::size_t c = 0; c < kElevations.size(); ++c)
            CHECK(round_half_up_2(pos[r][c]) == doctest::Approx(kPositiveTable[r][c]));

    auto neg = error_table(kNegativeRows, kElevations, SlopeSign::Negative);
    for (std::size_t r = 0; r < kNegativeRows.size(); ++r)
        for (std::size_t c = 0; c < kElevations.size(); ++c)
            CHECK(round_half_up_2(neg[r][c]) == doctest::Approx(kNegativeTable[r][c]));
}

TEST_CASE("error table: single cell equals relative_error") {
    std::vector<double> one_slope{2.2};
    std::vector<double> one_elev{37.0};
    auto grid = error_table(one_slope, one_elev, SlopeSign::Negative);
    CHECK(grid.size() == 1);
    CHECK(grid[0].size() == 1);
    CHECK(grid[0][0] == relative_error(37.0, SlopeSpec{2.2, SlopeSign::Negative}));
}

TEST_CASE("monotonicity and sign ordering") {
    for (double h = 20.0; h <= 70.0; h += 5.0) {
        double prev_pos = -1.0, prev_neg = -1.0;
        for (double theta = 0.25; theta <= 3.5; theta += 0.25) {
            const double pos = relative_error(h, SlopeSpec{theta, SlopeSign::Positive});
            const double neg = relative_error(h, SlopeSpec{theta, SlopeSign::Negative});
            CHECK(pos > prev_pos);
            CHECK(neg > prev_neg);
            CHECK(neg >= pos);  // negative slope always hurts at least as much
            prev_pos = pos;
            prev_neg = neg;
        }
    }
}

TEST_CASE("small-angle behaviour explains near-constant table rows") {
    // The error is approximately the slope in radians. Measured bounds
    // over the reference grid: positive within ~16%, negative within
    // ~22% (worst at low elevation where the sine ratio is most curved).
    for (double h = 20.0; h <= 70.0; h += 2.5) {
        for (double theta = 0.5; theta <= 3.5; theta += 0.5) {
            const double theta_rad = deg_to_rad(theta);
            const double pos = relative_error(h, SlopeSpec{theta, SlopeSign::Positive});
            const double neg = relative_error(h, SlopeSpec{theta, SlopeSign::Negative});
            CHECK(std::abs(pos - theta_rad) / theta_rad < 0.16);
            CHECK(std::abs(neg - theta_rad) / theta_rad < 0.22);
        }
    }
}

TEST_CASE("max admissible slope") {
    // Exact inversion: fixed point of the definition.
    for (double h : {20.0, 45.0, 70.0}) {
        for (SlopeSign sign : {SlopeSign::Positive, SlopeSign::Negative}) {
            const double theta0 = 2.0;
            const double target = relative_error(h, SlopeSpec{theta0, sign});
            CHECK(std::abs(max_admissible_slope(target, h, sign) - theta0) < 1e-5);
        }
    }

    // Frozen values, cross-checked by 0.001-degree grid scan.
    CHECK(std::abs(max_admissible_slope(0.05, 45.0, SlopeSign::Positive) - 3.100976) <
          1e-4);
    CHECK(std::abs(max_admissible_slope(0.05, 45.0, SlopeSign::Negative) - 2.667261) <
          1e-4);
    for (double h : {25.0, 45.0, 65.0}) {
        for (SlopeSign sign : {SlopeSign::Positive, SlopeSign::Negative}) {
            CHECK(std::abs(max_admissible_slope(0.05, h, sign) -
                           theta_max_by_scan(0.05, h, sign)) < 2e-3);
        }
    }

    // Target never exceeded inside the supported band: capped at 10 deg.
    CHECK(max_admissible_slope(0.2, 80.0, SlopeSign::Positive) ==
          doctest::Approx(90.0 - 80.0 - 1e-6));

    CHECK_THROWS_AS(max_admissible_slope(0.0, 45.0, SlopeSign::Positive), DomainError);
    CHECK_THROWS_AS(max_admissible_slope(0.25, 45.0, SlopeSign::Positive), DomainError);
    CHECK_THROWS_AS(max_admissible_slope(0.05, 3.0, SlopeSign::Positive), DomainError);
}

TEST_CASE("slope gate construction") {
    SlopeErrorGate gate = SlopeErrorGate::default_gate();
    CHECK(gate.target_rel_error == 0.05);
    CHECK(gate.max_pos_slope_deg == 3.0);
    CHECK(gate.max_neg_slope_deg == 2.5);

    SlopeErrorGate derived = SlopeErrorGate::from_target(0.05, 45.0);
    CHECK(std::abs(derived.max_pos_slope_deg - 3.100976) < 1e-4);
    CHECK(std::abs(derived.max_neg_slope_deg - 2.667261) < 1e-4);

    // Monotone non-decreasing in the target.
    double prev_pos = 0.0, prev_neg = 0.0;
    for (double target = 0.01; target <= 0.15; target += 0.01) {
        SlopeErrorGate g = SlopeErrorGate::from_target(target, 40.0);
        CHECK(g.max_pos_slope_deg >= prev_pos);
        CHECK(g.max_neg_slope_deg >= prev_neg);
        prev_pos = g.max_pos_slope_deg;
        prev_neg = g.max_neg_slope_deg;
    }
}

TEST_CASE("half-up rounding to two decimals") {
    CHECK(round_half_up_2(0.045) == doctest::Approx(0.05));
    CHECK(round_half_up_2(0.0449999) == doctest::Approx(0.04));
    CHECK(round_half_up_2(0.0250062) == doctest::Approx(0.03));
    CHECK(round_half_up_2(0.02) == doctest::Approx(0.02));
}
