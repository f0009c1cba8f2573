#include "icd/scans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "icd/constants.hpp"
#include "icd/io.hpp"
#include "icd/units.hpp"

namespace icd {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
// Pole exclusion radius around either atom, as a fraction of rho_AD.
constexpr double exclusion_fraction = 1e-3;
// The non-retarded closed forms and trace rates do not depend on omega;
// scans that never look at retardation still need some positive value.
constexpr double fallback_omega = 1e16;  // rad/s

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + static_cast<double>(i) * step;
    return v;
}

std::string vec_to_string(const Vec3& v) {
    return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

Vec3 vec_from_string(const std::string& s) {
    std::istringstream in(s);
    std::string cell;
    double c[3];
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(in, cell, ','))
            throw ValidationError("malformed position '" + s + "'");
        c[i] = parse_double(cell);
    }
    return {c[0], c[1], c[2]};
}

const std::string& meta_get(const ScanResult& scan, const std::string& key) {
    auto it = scan.metadata.find(key);
    if (it == scan.metadata.end())
        throw ValidationError("scan metadata missing key '" + key + "'");
    return it->second;
}

SystemSpec make_system(const Position& r_d, const Position& r_a,
                       double gamma_sigma, double omega) {
    SystemSpec sys;
    sys.donor = DonorSpec{1.0, omega};
    sys.acceptor = AcceptorSpec{gamma_sigma};
    sys.r_donor = r_d;
    sys.r_acceptor = r_a;
    return sys;
}

// Deterministic in-plane unit vector perpendicular to the axis: take the
// world axis least aligned with it and orthonormalize.
Vec3 pick_perpendicular(const Vec3& axis) {
    const Vec3 candidates[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    int best = 0;
    double best_align = 2.0;
    for (int i = 0; i < 3; ++i) {
        const double a = std::abs(axis.dot(candidates[i]));
        if (a < best_align) {
            best_align = a;
            best = i;
        }
    }
    const Vec3 w = candidates[best];
    return (w - axis * axis.dot(w)).normalized();
}

} // namespace

std::size_t ScanResult::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ValidationError("scan has no column '" + std::string(name) + "'");
}

ScanResult scan_distance_midpoint(double rho_min_angstrom,
                                  double rho_max_angstrom, std::size_t n_points,
                                  double c6_ev_a6, double alpha_a3,
                                  TensorKind kind,
                                  std::optional<double> omega_rad_s) {
    if (n_points < 2) throw ValidationError("scan_distance_midpoint: need >= 2 points");
    if (!(rho_min_angstrom > 0.0) || !(rho_max_angstrom > rho_min_angstrom))
        throw ValidationError("scan_distance_midpoint: bad rho range");
    if (kind != TensorKind::NonRetarded && !omega_rad_s)
        throw ValidationError("scan_distance_midpoint: omega required for kind '" +
                              to_string(kind) + "'");

    const double omega = omega_rad_s.value_or(fallback_omega);
    const double c6_si = c6_si_from_ev_a6(c6_ev_a6);
    const double alpha_m3 = alpha_a3 * m3_per_angstrom3;
    const double gamma_sigma = gamma_sigma_from_c6(c6_si, omega);
    const double c2_si = c2_si_from_c6_si(c6_si, omega);

    ScanResult scan;
    scan.metadata["scan"] = "distance";
    scan.metadata["rho_min_angstrom"] = format_double(rho_min_angstrom);
    scan.metadata["rho_max_angstrom"] = format_double(rho_max_angstrom);
    scan.metadata["n_points"] = std::to_string(n_points);
    scan.metadata["c6_ev_a6"] = format_double(c6_ev_a6);
    scan.metadata["alpha_a3"] = format_double(alpha_a3);
    scan.metadata["kind"] = to_string(kind);
    if (omega_rad_s) scan.metadata["omega_rad_s"] = format_double(*omega_rad_s);
    scan.metadata["mediator"] = "midpoint";
    scan.metadata["units_length"] = "angstrom";
    scan.metadata["units_width"] = "eV";
    scan.columns = {"rho_ad_angstrom", "width_2body_ev", "width_closed_ev",
                    "width_trace_ev",  "ratio",          "u_nr",
                    "u_r",             "perturbative_ok", "valid"};

    for (const double rho_a : linspace(rho_min_angstrom, rho_max_angstrom, n_points)) {
        const double rho_m = rho_a * meters_per_angstrom;
        const double half_m = 0.5 * rho_m;
        SystemSpec sys = make_system({0, 0, 0}, {0, 0, rho_m}, gamma_sigma, omega);

        const RateBreakdown two_body = rate_trace(sys, kind);
        sys.mediator = MediatorSpec{{0, 0, half_m}, alpha_m3};
        const RateBreakdown three_body = rate_trace(sys, kind);

        double closed = nan;
        if (kind == TensorKind::NonRetarded)
            closed = rate_nr_collinear(rho_m, half_m, half_m, c6_si, alpha_m3, true).total;
        else if (kind == TensorKind::FarField)
            closed = rate_r_collinear(rho_m, half_m, half_m, c2_si, alpha_m3, omega,
                                      std::numbers::pi).total;

        scan.rows.push_back({rho_a,
                             width_ev_from_rate(two_body.total),
                             std::isnan(closed) ? nan : width_ev_from_rate(closed),
                             width_ev_from_rate(three_body.total),
                             three_body.total / two_body.total,
                             three_body.u_nr,
                             omega_rad_s ? three_body.u_r : nan,
                             three_body.perturbative_ok ? 1.0 : 0.0,
                             1.0});
    }
    return scan;
}

ScanResult scan_mediator_1d(const Vec3& r_d_angstrom, const Vec3& r_a_angstrom,
                            double t_min_angstrom, double t_max_angstrom,
                            std::size_t n_points, double alpha_a3,
                            double omega_rad_s, double c2_ev_a2) {
    if (n_points < 2) throw ValidationError("scan_mediator_1d: need >= 2 points");
    if (!(t_max_angstrom > t_min_angstrom))
        throw ValidationError("scan_mediator_1d: bad t range");
    if (!(omega_rad_s > 0.0))
        throw ValidationError("scan_mediator_1d: omega must be positive");

    const Vec3 diff = r_a_angstrom - r_d_angstrom;
    const double rho_ad_a = diff.norm();
    if (!(rho_ad_a > 0.0))
        throw DegenerateGeometryError("scan_mediator_1d: coincident donor and acceptor");
    const Vec3 axis = diff / rho_ad_a;

    const Position r_d_m = r_d_angstrom * meters_per_angstrom;
    const Position r_a_m = r_a_angstrom * meters_per_angstrom;
    const double rho_ad_m = rho_ad_a * meters_per_angstrom;
    const double alpha_m3 = alpha_a3 * m3_per_angstrom3;
    const double c2_si = c2_si_from_ev_a2(c2_ev_a2);
    const double gamma_sigma = gamma_sigma_from_c2(c2_si);
    const double exclusion_m = exclusion_fraction * rho_ad_m;

    SystemSpec base = make_system(r_d_m, r_a_m, gamma_sigma, omega_rad_s);
    const double ff_two_body = c2_si / (rho_ad_m * rho_ad_m);
    const double full_two_body = rate_trace(base, TensorKind::Full).total;

    ScanResult scan;
    scan.metadata["scan"] = "mediator-1d";
    scan.metadata["pos_d_angstrom"] = vec_to_string(r_d_angstrom);
    scan.metadata["pos_a_angstrom"] = vec_to_string(r_a_angstrom);
    scan.metadata["t_min_angstrom"] = format_double(t_min_angstrom);
    scan.metadata["t_max_angstrom"] = format_double(t_max_angstrom);
    scan.metadata["n_points"] = std::to_string(n_points);
    scan.metadata["alpha_a3"] = format_double(alpha_a3);
    scan.metadata["omega_rad_s"] = format_double(omega_rad_s);
    scan.metadata["c2_ev_a2"] = format_double(c2_ev_a2);
    scan.metadata["units_length"] = "angstrom";
    scan.metadata["units_rate"] = "1/s";
    scan.columns = {"t_angstrom", "rate_ff_per_s",   "rate_full_per_s",
                    "norm_ff",    "norm_full",       "u_r",
                    "perturbative_ok", "valid"};

    for (const double t : linspace(t_min_angstrom, t_max_angstrom, n_points)) {
        const Vec3 pos_a = r_d_angstrom + t * axis;
        const Position pos_m = pos_a * meters_per_angstrom;
        const double rho_dm_m = (pos_m - r_d_m).norm();
        const double rho_am_m = (r_a_m - pos_m).norm();

        if (rho_dm_m < exclusion_m || rho_am_m < exclusion_m) {
            scan.rows.push_back({t, nan, nan, nan, nan, nan, 0.0, 0.0});
            continue;
        }

        const bool between = t > 0.0 && t < rho_ad_a;
        const RateBreakdown ff =
            rate_r_collinear(rho_ad_m, rho_am_m, rho_dm_m, c2_si, alpha_m3,
                             omega_rad_s, between ? std::numbers::pi : 0.0);
        SystemSpec sys = base;
        sys.mediator = MediatorSpec{pos_m, alpha_m3};
        const RateBreakdown full = rate_trace(sys, TensorKind::Full);

        scan.rows.push_back({t, ff.total, full.total, ff.total / ff_two_body,
                             full.total / full_two_body, ff.u_r,
                             ff.perturbative_ok ? 1.0 : 0.0, 1.0});
    }
    return scan;
}

ScanResult scan_mediator_2d(const Vec3& r_d_angstrom, const Vec3& r_a_angstrom,
                            double t_min_angstrom, double t_max_angstrom,
                            std::size_t n_t, double s_min_angstrom,
                            double s_max_angstrom, std::size_t n_s,
                            double alpha_a3, double omega_rad_s,
                            double c2_ev_a2, TensorKind kind) {
    if (n_t < 2 || n_s < 2) throw ValidationError("scan_mediator_2d: need a >= 2x2 grid");
    if (!(t_max_angstrom > t_min_angstrom) || !(s_max_angstrom > s_min_angstrom))
        throw ValidationError("scan_mediator_2d: bad grid range");
    if (kind == TensorKind::NonRetarded)
        throw ValidationError("scan_mediator_2d: kind must be farfield or full");
    if (!(omega_rad_s > 0.0))
        throw ValidationError("scan_mediator_2d: omega must be positive");

    const Vec3 diff = r_a_angstrom - r_d_angstrom;
    const double rho_ad_a = diff.norm();
    if (!(rho_ad_a > 0.0))
        throw DegenerateGeometryError("scan_mediator_2d: coincident donor and acceptor");
    const Vec3 axis = diff / rho_ad_a;
    const Vec3 perp = pick_perpendicular(axis);

    const Position r_d_m = r_d_angstrom * meters_per_angstrom;
    const Position r_a_m = r_a_angstrom * meters_per_angstrom;
    const double rho_ad_m = rho_ad_a * meters_per_angstrom;
    const double alpha_m3 = alpha_a3 * m3_per_angstrom3;
    const double c2_si = c2_si_from_ev_a2(c2_ev_a2);
    const double gamma_sigma = gamma_sigma_from_c2(c2_si);
    const double exclusion_m = exclusion_fraction * rho_ad_m;

    SystemSpec base = make_system(r_d_m, r_a_m, gamma_sigma, omega_rad_s);
    const double two_body = rate_trace(base, kind).total;

    ScanResult scan;
    scan.metadata["scan"] = "mediator-2d";
    scan.metadata["pos_d_angstrom"] = vec_to_string(r_d_angstrom);
    scan.metadata["pos_a_angstrom"] = vec_to_string(r_a_angstrom);
    scan.metadata["t_min_angstrom"] = format_double(t_min_angstrom);
    scan.metadata["t_max_angstrom"] = format_double(t_max_angstrom);
    scan.metadata["n_t"] = std::to_string(n_t);
    scan.metadata["s_min_angstrom"] = format_double(s_min_angstrom);
    scan.metadata["s_max_angstrom"] = format_double(s_max_angstrom);
    scan.metadata["n_s"] = std::to_string(n_s);
    scan.metadata["alpha_a3"] = format_double(alpha_a3);
    scan.metadata["omega_rad_s"] = format_double(omega_rad_s);
    scan.metadata["c2_ev_a2"] = format_double(c2_ev_a2);
    scan.metadata["kind"] = to_string(kind);
    scan.metadata["perp_direction"] = vec_to_string(perp);
    scan.metadata["units_length"] = "angstrom";
    scan.metadata["units_rate"] = "1/s";
    scan.columns = {"t_angstrom", "s_angstrom", "rate_per_s", "norm",
                    "u_r",        "perturbative_ok", "valid"};

    const std::vector<double> ts = linspace(t_min_angstrom, t_max_angstrom, n_t);
    const std::vector<double> ss = linspace(s_min_angstrom, s_max_angstrom, n_s);
    for (const double t : ts) {
        for (const double s : ss) {
            const Vec3 pos_a = r_d_angstrom + t * axis + s * perp;
            const Position pos_m = pos_a * meters_per_angstrom;
            const double rho_dm_m = (pos_m - r_d_m).norm();
            const double rho_am_m = (r_a_m - pos_m).norm();

            if (rho_dm_m < exclusion_m || rho_am_m < exclusion_m) {
                scan.rows.push_back({t, s, nan, nan, nan, 0.0, 0.0});
                continue;
            }

            SystemSpec sys = base;
            sys.mediator = MediatorSpec{pos_m, alpha_m3};
            const RateBreakdown b = rate_trace(sys, kind);
            scan.rows.push_back({t, s, b.total, b.total / two_body, b.u_r,
                                 b.perturbative_ok ? 1.0 : 0.0, 1.0});
        }
    }
    return scan;
}

ScanResult regenerate(const ScanResult& scan) {
    const std::string& kind_str = meta_get(scan, "scan");
    if (kind_str == "distance") {
        std::optional<double> omega;
        if (auto it = scan.metadata.find("omega_rad_s"); it != scan.metadata.end())
            omega = parse_double(it->second);
        return scan_distance_midpoint(
            parse_double(meta_get(scan, "rho_min_angstrom")),
            parse_double(meta_get(scan, "rho_max_angstrom")),
            std::stoul(meta_get(scan, "n_points")),
            parse_double(meta_get(scan, "c6_ev_a6")),
            parse_double(meta_get(scan, "alpha_a3")),
            tensor_kind_from_string(meta_get(scan, "kind")), omega);
    }
    if (kind_str == "mediator-1d") {
        return scan_mediator_1d(vec_from_string(meta_get(scan, "pos_d_angstrom")),
                                vec_from_string(meta_get(scan, "pos_a_angstrom")),
                                parse_double(meta_get(scan, "t_min_angstrom")),
                                parse_double(meta_get(scan, "t_max_angstrom")),
                                std::stoul(meta_get(scan, "n_points")),
                                parse_double(meta_get(scan, "alpha_a3")),
                                parse_double(meta_get(scan, "omega_rad_s")),
                                parse_double(meta_get(scan, "c2_ev_a2")));
    }
    if (kind_str == "mediator-2d") {
        return scan_mediator_2d(vec_from_string(meta_get(scan, "pos_d_angstrom")),
                                vec_from_string(meta_get(scan, "pos_a_angstrom")),
                                parse_double(meta_get(scan, "t_min_angstrom")),
                                parse_double(meta_get(scan, "t_max_angstrom")),
                                std::stoul(meta_get(scan, "n_t")),
                                parse_double(meta_get(scan, "s_min_angstrom")),
                                parse_double(meta_get(scan, "s_max_angstrom")),
                                std::stoul(meta_get(scan, "n_s")),
                                parse_double(meta_get(scan, "alpha_a3")),
                                parse_double(meta_get(scan, "omega_rad_s")),
                                parse_double(meta_get(scan, "c2_ev_a2")),
                                tensor_kind_from_string(meta_get(scan, "kind")));
    }
    throw ValidationError("cannot regenerate scan of kind '" + kind_str + "'");
}

void WidthDataset::validate() const {
    if (rho_angstrom.size() != width_ev.size())
        throw ValidationError("width dataset: column length mismatch");
    for (std::size_t i = 0; i < rho_angstrom.size(); ++i) {
        if (!std::isfinite(rho_angstrom[i]) || !std::isfinite(width_ev[i]))
            throw ValidationError("width dataset: non-finite entry");
        if (!(width_ev[i] > 0.0))
            throw ValidationError("width dataset: widths must be positive");
        if (i > 0 && !(rho_angstrom[i] > rho_angstrom[i - 1]))
            throw ValidationError("width dataset: rho must be strictly increasing");
    }
}

FitResult fit_c6(const WidthDataset& data, double rho_min_fit_angstrom) {
    data.validate();

    // Linear least squares of width against rho^-6 through the origin.
    double sxx = 0.0, sxy = 0.0;
    std::size_t n_used = 0;
    for (std::size_t i = 0; i < data.rho_angstrom.size(); ++i) {
        if (data.rho_angstrom[i] < rho_min_fit_angstrom) continue;
        const double r3 = data.rho_angstrom[i] * data.rho_angstrom[i] * data.rho_angstrom[i];
        const double x = 1.0 / (r3 * r3);
        sxx += x * x;
        sxy += x * data.width_ev[i];
        ++n_used;
    }
    if (n_used < 2)
        throw ValidationError("fit_c6: need at least 2 rows with rho >= rho_min");

    const double c6_ev_a6 = sxy / sxx;
    if (!(c6_ev_a6 > 0.0) || !std::isfinite(c6_ev_a6))
        throw ValidationError("fit_c6: fitted C6 is not positive");

    double ss = 0.0;
    for (std::size_t i = 0; i < data.rho_angstrom.size(); ++i) {
        if (data.rho_angstrom[i] < rho_min_fit_angstrom) continue;
        const double r3 = data.rho_angstrom[i] * data.rho_angstrom[i] * data.rho_angstrom[i];
        const double resid = data.width_ev[i] - c6_ev_a6 / (r3 * r3);
        ss += resid * resid;
    }

    FitResult fit;
    fit.coefficients.c6 = c6_si_from_ev_a6(c6_ev_a6);
    fit.coefficients.c2 = 0.0;  // not determined by a distance fit
    fit.coefficients.source = CoefficientSource::Fitted;
    fit.c6_ev_a6 = c6_ev_a6;
    fit.rms_residual_ev = std::sqrt(ss / static_cast<double>(n_used));
    fit.n_used = n_used;
    fit.rho_min_fit = rho_min_fit_angstrom;
    return fit;
}

ScanResult figure3_scan() {
    ScanResult scan = scan_distance_midpoint(7.0, 11.0, 41, 3.6, 0.205,
                                             TensorKind::NonRetarded, {});
    scan.metadata["preset"] = "figure3";
    return scan;
}

ScanResult figure4_upper_scan() {
    const double lambda_a = 480.0;
    const double omega = 2.0 * std::numbers::pi * phys.c /
                         (lambda_a * meters_per_angstrom);
    const double alpha_a3 = std::pow(lambda_a / 4.0, 3);
    ScanResult scan =
        scan_mediator_1d({0, 0, 0}, {0, 0, 3.0 * lambda_a}, -2.5 * lambda_a,
                         5.5 * lambda_a, 801, alpha_a3, omega, 1.0);
    scan.metadata["preset"] = "figure4-upper";
    scan.metadata["lambda_angstrom"] = format_double(lambda_a);
    return scan;
}

ScanResult figure4_lower_scan() {
    const double lambda_a = 480.0;
    const double omega = 2.0 * std::numbers::pi * phys.c /
                         (lambda_a * meters_per_angstrom);
    const double alpha_a3 = std::pow(lambda_a / 4.0, 3);
    ScanResult scan = scan_mediator_2d({0, 0, 0}, {0, 0, 3.0 * lambda_a},
                                       -2.0 * lambda_a, 5.0 * lambda_a, 141,
                                       -2.0 * lambda_a, 2.0 * lambda_a, 81,
                                       alpha_a3, omega, 1.0, TensorKind::FarField);
    scan.metadata["preset"] = "figure4-lower";
    scan.metadata["lambda_angstrom"] = format_double(lambda_a);
    return scan;
}

} // namespace icd
