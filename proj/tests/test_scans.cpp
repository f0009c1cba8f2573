#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "icd/constants.hpp"
#include "icd/scans.hpp"
#include "icd/units.hpp"

#include "test_helpers.hpp"

using namespace icd;
using testutil::rel_gap;

namespace {
constexpr double pi = std::numbers::pi;

double col(const ScanResult& s, std::size_t row, std::string_view name) {
    return s.rows[row][s.column_index(name)];
}

// index of the row whose named column is closest to value
std::size_t row_at(const ScanResult& s, std::string_view name, double value) {
    const std::size_t c = s.column_index(name);
    std::size_t best = 0;
    double best_gap = std::abs(s.rows[0][c] - value);
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
        const double gap = std::abs(s.rows[i][c] - value);
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return best;
}
} // namespace

TEST_CASE("scan_distance_midpoint: alpha = 0 reproduces the pure power law") {
    const auto scan = scan_distance_midpoint(5.0, 20.0, 16, 2.4, 0.0);
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const double rho = col(scan, i, "rho_ad_angstrom");
        const double w2 = col(scan, i, "width_2body_ev");
        CHECK(rel_gap(w2, 2.4 / std::pow(rho, 6)) < 1e-12);
        CHECK(col(scan, i, "ratio") == 1.0);
        CHECK(col(scan, i, "width_trace_ev") == w2);
        CHECK(col(scan, i, "valid") == 1.0);
    }
}

TEST_CASE("scan_distance_midpoint: two-body log-log slope is -6") {
    const auto scan = scan_distance_midpoint(5.0, 20.0, 16, 2.4, 0.3);
    const double rho0 = col(scan, 0, "rho_ad_angstrom");
    const double rho1 = col(scan, 15, "rho_ad_angstrom");
    const double w0 = col(scan, 0, "width_2body_ev");
    const double w1 = col(scan, 15, "width_2body_ev");
    const double slope = (std::log(w1) - std::log(w0)) /
                         (std::log(rho1) - std::log(rho0));
    CHECK(std::abs(slope + 6.0) < 1e-6);
}

TEST_CASE("figure3 preset: grid, enhancement at 8 A, closed form vs trace") {
    const auto scan = figure3_scan();
    CHECK(scan.rows.size() == 41);
    CHECK(scan.metadata.at("preset") == "figure3");

    const std::size_t at8 = row_at(scan, "rho_ad_angstrom", 8.0);
    CHECK(std::abs(col(scan, at8, "rho_ad_angstrom") - 8.0) < 1e-12);
    CHECK(std::abs(col(scan, at8, "ratio") - 1.0532) < 1e-3);
    CHECK(std::abs(col(scan, at8, "u_nr") - 0.025625) < 1e-12);

    double prev = 1e300;
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const double closed = col(scan, i, "width_closed_ev");
        const double trace = col(scan, i, "width_trace_ev");
        CHECK(rel_gap(closed, trace) < 1e-10);
        CHECK(trace < prev);  // monotonically decaying
        prev = trace;
        CHECK(col(scan, i, "perturbative_ok") == 1.0);
    }
}

TEST_CASE("scan_distance_midpoint: validation") {
    CHECK_THROWS_AS(scan_distance_midpoint(5.0, 20.0, 1, 2.4, 0.0), ValidationError);
    CHECK_THROWS_AS(scan_distance_midpoint(-1.0, 20.0, 5, 2.4, 0.0), ValidationError);
    CHECK_THROWS_AS(scan_distance_midpoint(5.0, 4.0, 5, 2.4, 0.0), ValidationError);
    CHECK_THROWS_AS(scan_distance_midpoint(5.0, 20.0, 5, 2.4, 0.0, TensorKind::Full),
                    ValidationError);  // omega required
}

TEST_CASE("figure4 upper preset: between-region enhancement, outside oscillation") {
    const auto scan = figure4_upper_scan();
    CHECK(scan.rows.size() == 801);
    const double lambda = 480.0;
    const double rho_ad = 3.0 * lambda;

    // spot values derived by hand from the collinear far-field form
    {
        const std::size_t i = row_at(scan, "t_angstrom", 4.0 * lambda);
        CHECK(std::abs(col(scan, i, "t_angstrom") - 1920.0) < 1e-9);
        const double u = 3.0 * pi * pi / 64.0;
        CHECK(std::abs(col(scan, i, "norm_ff") - (1 + u) * (1 + u)) < 1e-9);
        CHECK(std::abs(col(scan, i, "u_r") - u) < 1e-12);
    }
    {
        const std::size_t i = row_at(scan, "t_angstrom", 4.25 * lambda);
        const double u = 12.0 * pi * pi / 340.0;
        CHECK(std::abs(col(scan, i, "norm_ff") - (1 - u) * (1 - u)) < 1e-9);
    }

    // between region: >= 1 everywhere valid, single valley, no oscillation
    int sign_changes = 0;
    double prev_diff = 0.0, prev_val = -1.0;
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const double t = col(scan, i, "t_angstrom");
        if (t <= 0.0 || t >= rho_ad || col(scan, i, "valid") != 1.0) continue;
        const double v = col(scan, i, "norm_ff");
        CHECK(v >= 1.0 - 1e-12);
        if (prev_val > 0.0) {
            const double diff = v - prev_val;
            if (prev_diff != 0.0 && diff != 0.0 &&
                std::signbit(diff) != std::signbit(prev_diff))
                ++sign_changes;
            prev_diff = diff;
        }
        prev_val = v;
    }
    CHECK(sign_changes <= 1);

    // full-tensor column tracks the far-field one once the mediator is well
    // clear of both atoms (the curves differ visibly near the deep minima)
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        if (col(scan, i, "valid") != 1.0) continue;
        const double t = col(scan, i, "t_angstrom");
        if (std::abs(t) < 1.5 * lambda || std::abs(t - rho_ad) < 1.5 * lambda)
            continue;
        CHECK(rel_gap(col(scan, i, "norm_ff"), col(scan, i, "norm_full")) < 0.05);
    }

    // rows at the atoms are skipped, flagged, and not fatal
    const std::size_t at_donor = row_at(scan, "t_angstrom", 0.0);
    CHECK(col(scan, at_donor, "valid") == 0.0);
    CHECK(std::isnan(col(scan, at_donor, "rate_ff_per_s")));

    // near-atom but non-excluded rows carry perturbative_ok = 0
    const std::size_t near = row_at(scan, "t_angstrom", rho_ad + 20.0);
    CHECK(col(scan, near, "valid") == 1.0);
    CHECK(col(scan, near, "u_r") > 1.0);
    CHECK(col(scan, near, "perturbative_ok") == 0.0);
}

TEST_CASE("figure4 upper preset: oscillation period is lambda/2 within 1%") {
    const auto scan = figure4_upper_scan();
    const double lambda = 480.0;

    // successive minima of the closed-form column beyond the acceptor, in
    // the perturbatively valid region, with parabolic sub-grid refinement
    std::vector<double> minima;
    const std::size_t c_t = scan.column_index("t_angstrom");
    const std::size_t c_v = scan.column_index("norm_ff");
    const std::size_t c_ok = scan.column_index("perturbative_ok");
    for (std::size_t i = 1; i + 1 < scan.rows.size(); ++i) {
        const double t = scan.rows[i][c_t];
        if (t < 3.2 * lambda) continue;
        if (scan.rows[i][c_ok] != 1.0) continue;
        const double vm = scan.rows[i - 1][c_v];
        const double v0 = scan.rows[i][c_v];
        const double vp = scan.rows[i + 1][c_v];
        if (std::isnan(vm) || std::isnan(v0) || std::isnan(vp)) continue;
        if (v0 <= vm && v0 <= vp) {
            const double denom = vm - 2.0 * v0 + vp;
            const double dt = scan.rows[i + 1][c_t] - scan.rows[i][c_t];
            const double shift = denom > 0.0 ? 0.5 * (vm - vp) / denom * dt : 0.0;
            minima.push_back(t + shift);
        }
    }
    REQUIRE(minima.size() >= 2);
    for (std::size_t i = 1; i < minima.size(); ++i) {
        const double spacing = minima[i] - minima[i - 1];
        CHECK(std::abs(spacing - lambda / 2.0) < 0.01 * (lambda / 2.0));
    }
}

TEST_CASE("scan_mediator_1d: normalized rate -> 1 as the mediator recedes") {
    const double lambda = 480.0;
    const double omega = 2.0 * pi * phys.c / (lambda * 1e-10);
    const double rho_ad = 3.0 * lambda;
    const auto scan = scan_mediator_1d({0, 0, 0}, {0, 0, rho_ad},
                                       1000.0 * rho_ad, 1001.0 * rho_ad, 3,
                                       std::pow(lambda / 4.0, 3), omega, 1.0);
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        CHECK(std::abs(col(scan, i, "norm_ff") - 1.0) < 1e-6);
        CHECK(std::abs(col(scan, i, "norm_full") - 1.0) < 1e-6);
    }
}

TEST_CASE("scan_mediator_2d: axis slice, mirror symmetry, alpha = 0") {
    const double lambda = 480.0;
    const double omega = 2.0 * pi * phys.c / (lambda * 1e-10);
    const double rho_ad = 3.0 * lambda;
    const double alpha = std::pow(lambda / 4.0, 3);

    const auto map = scan_mediator_2d({0, 0, 0}, {0, 0, rho_ad}, 3.2 * lambda,
                                      5.2 * lambda, 21, -2.0 * lambda,
                                      2.0 * lambda, 9, alpha, omega, 1.0,
                                      TensorKind::FarField);
    const auto line = scan_mediator_1d({0, 0, 0}, {0, 0, rho_ad}, 3.2 * lambda,
                                       5.2 * lambda, 21, alpha, omega, 1.0);

    const std::size_t c_t = map.column_index("t_angstrom");
    const std::size_t c_s = map.column_index("s_angstrom");
    const std::size_t c_norm = map.column_index("norm");
    std::size_t on_axis = 0;
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
        if (map.rows[i][c_s] != 0.0) continue;
        ++on_axis;
        const std::size_t j = row_at(line, "t_angstrom", map.rows[i][c_t]);
        // far-field trace against the collinear closed form
        CHECK(rel_gap(map.rows[i][c_norm], col(line, j, "norm_ff")) < 1e-10);
    }
    CHECK(on_axis == 21);

    // mirror symmetry about the axis
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
        const double t = map.rows[i][c_t];
        const double s = map.rows[i][c_s];
        if (s <= 0.0) continue;
        for (std::size_t j = 0; j < map.rows.size(); ++j) {
            if (map.rows[j][c_t] == t && map.rows[j][c_s] == -s) {
                if (std::isnan(map.rows[i][c_norm]))
                    CHECK(std::isnan(map.rows[j][c_norm]));
                else
                    CHECK(rel_gap(map.rows[i][c_norm], map.rows[j][c_norm]) < 1e-12);
            }
        }
    }

    const auto flat = scan_mediator_2d({0, 0, 0}, {0, 0, rho_ad}, 3.2 * lambda,
                                       5.2 * lambda, 5, -lambda, lambda, 5, 0.0,
                                       omega, 1.0, TensorKind::FarField);
    for (std::size_t i = 0; i < flat.rows.size(); ++i)
        CHECK(col(flat, i, "norm") == 1.0);

    CHECK_THROWS_AS(scan_mediator_2d({0, 0, 0}, {0, 0, rho_ad}, 0.0, lambda, 5,
                                     -lambda, lambda, 5, alpha, omega, 1.0,
                                     TensorKind::NonRetarded),
                    ValidationError);
}

TEST_CASE("regenerate: scans are reproducible from their metadata") {
    const auto scans = {figure3_scan(), figure4_upper_scan()};
    for (const auto& scan : scans) {
        const auto again = regenerate(scan);
        REQUIRE(again.rows.size() == scan.rows.size());
        REQUIRE(again.columns == scan.columns);
        for (std::size_t i = 0; i < scan.rows.size(); ++i)
            for (std::size_t j = 0; j < scan.columns.size(); ++j) {
                const double a = scan.rows[i][j];
                const double b = again.rows[i][j];
                if (std::isnan(a)) CHECK(std::isnan(b));
                else CHECK(a == b);
            }
    }

    const auto map = scan_mediator_2d({0, 0, 0}, {0, 0, 100.0}, 10.0, 200.0, 5,
                                      -50.0, 50.0, 5, 1000.0, 4e16, 1.0,
                                      TensorKind::Full);
    const auto map2 = regenerate(map);
    CHECK(map2.rows == map.rows);
}

TEST_CASE("fit_c6: exact model recovery") {
    WidthDataset ds;
    for (double rho = 10.0; rho <= 20.01; rho += 1.0) {
        ds.rho_angstrom.push_back(rho);
        ds.width_ev.push_back(3.6 / std::pow(rho, 6));
    }
    const auto fit = fit_c6(ds, 0.0);
    CHECK(rel_gap(fit.c6_ev_a6, 3.6) < 1e-3);   // 0.1 % required
    CHECK(rel_gap(fit.c6_ev_a6, 3.6) < 1e-12);  // exact data, exact recovery
    CHECK(fit.rms_residual_ev < 1e-18);
    CHECK(fit.n_used == 11);
    CHECK(fit.coefficients.source == CoefficientSource::Fitted);
    CHECK(rel_gap(c6_ev_a6_from_si(fit.coefficients.c6), 3.6) < 1e-12);
}

TEST_CASE("fit_c6: 3% multiplicative noise recovered within 3%") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(1.0, 0.03);
    WidthDataset ds;
    for (double rho = 8.0; rho <= 24.01; rho += 0.5) {
        ds.rho_angstrom.push_back(rho);
        ds.width_ev.push_back(3.6 / std::pow(rho, 6) * noise(rng));
    }
    const auto fit = fit_c6(ds, 0.0);
    CHECK(rel_gap(fit.c6_ev_a6, 3.6) < 0.03);
    CHECK(fit.rms_residual_ev > 0.0);
}

TEST_CASE("fit_c6: rho^-9 contamination bias shrinks with the fit range") {
    // widths with a mediated-like rho^-9 admixture; restricting the fit to
    // larger rho must reduce the C6 bias
    WidthDataset ds;
    for (double rho = 8.0; rho <= 40.01; rho += 0.5) {
        ds.rho_angstrom.push_back(rho);
        ds.width_ev.push_back(3.6 / std::pow(rho, 6) + 94.0 / std::pow(rho, 9));
    }
    const double bias_all = fit_c6(ds, 0.0).c6_ev_a6 - 3.6;
    const double bias_mid = fit_c6(ds, 16.0).c6_ev_a6 - 3.6;
    const double bias_far = fit_c6(ds, 28.0).c6_ev_a6 - 3.6;
    CHECK(bias_all > 0.0);
    CHECK(bias_mid < bias_all);
    CHECK(bias_far < bias_mid);
}

TEST_CASE("fit_c6: converges to the two-body C6 on mediated collinear data") {
    const double c6_si = c6_si_from_ev_a6(3.6);
    WidthDataset ds;
    for (double rho = 8.0; rho <= 60.01; rho += 1.0) {
        const double rho_m = rho * 1e-10;
        const auto b = rate_nr_collinear(rho_m, rho_m / 2, rho_m / 2, c6_si,
                                         0.205e-30, true);
        ds.rho_angstrom.push_back(rho);
        ds.width_ev.push_back(width_ev_from_rate(b.total));
    }
    const double near = fit_c6(ds, 8.0).c6_ev_a6;
    const double far = fit_c6(ds, 45.0).c6_ev_a6;
    CHECK(std::abs(far - 3.6) < std::abs(near - 3.6));
    CHECK(rel_gap(far, 3.6) < 2e-3);
}

TEST_CASE("fit_c6 and WidthDataset: validation errors") {
    WidthDataset ds;
    ds.rho_angstrom = {10.0, 11.0, 12.0};
    ds.width_ev = {1e-6, 9e-7, 8e-7};
    CHECK_THROWS_AS(fit_c6(ds, 11.5), ValidationError);  // one row left

    WidthDataset bad = ds;
    bad.width_ev[1] = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = ds;
    bad.rho_angstrom = {10.0, 10.0, 12.0};  // not strictly increasing
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = ds;
    bad.width_ev.pop_back();
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("fit-scan-refit round trip is deterministic") {
    WidthDataset ds;
    for (double rho = 9.0; rho <= 18.01; rho += 1.0) {
        ds.rho_angstrom.push_back(rho);
        ds.width_ev.push_back(2.9 / std::pow(rho, 6));
    }
    const auto fit1 = fit_c6(ds, 0.0);
    const auto fit1_again = fit_c6(ds, 0.0);
    CHECK(fit1.c6_ev_a6 == fit1_again.c6_ev_a6);  // bitwise deterministic

    const auto scan = scan_distance_midpoint(9.0, 18.0, 10, fit1.c6_ev_a6, 0.0);
    WidthDataset from_scan;
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        from_scan.rho_angstrom.push_back(col(scan, i, "rho_ad_angstrom"));
        from_scan.width_ev.push_back(col(scan, i, "width_trace_ev"));
    }
    const auto fit2 = fit_c6(from_scan, 0.0);
    CHECK(rel_gap(fit2.c6_ev_a6, fit1.c6_ev_a6) < 1e-12);
}
