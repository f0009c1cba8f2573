// Command-line front end: single-point rates, parameter scans, C6 fits, and
// the figure-data presets. Values on flags default to angstrom / eV / A^3;
// SI is accepted through explicit unit suffixes (10A, 1e-9m, 26.9eV, ...).

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "icd/constants.hpp"
#include "icd/io.hpp"
#include "icd/rates.hpp"
#include "icd/scans.hpp"
#include "icd/units.hpp"

namespace {

using json = nlohmann::ordered_json;

// Command-line level problems (bad flag combinations, malformed values).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::pair<double, std::string> split_quantity(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || errno == ERANGE)
        throw UsageError("cannot parse number in '" + text + "'");
    std::string tag(end);
    while (!tag.empty() && tag.front() == ' ') tag.erase(tag.begin());
    while (!tag.empty() && tag.back() == ' ') tag.pop_back();
    return {v, tag};
}

double parse_plain_double(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    if (!tag.empty()) throw UsageError(flag + ": unexpected suffix '" + tag + "'");
    return v;
}

double parse_length_angstrom(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    if (tag.empty()) return v;
    try {
        return icd::convert_length(v, icd::length_unit_from_string(tag),
                                   icd::LengthUnit::Angstrom);
    } catch (const icd::ValidationError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

double parse_omega_rad_s(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    try {
        if (tag.empty() || tag == "eV" || tag == "ev")
            return icd::convert_energy_frequency(v, icd::SpectralUnit::ElectronVolt,
                                                 icd::SpectralUnit::RadPerSecond);
        if (tag == "nm") {  // wavelength given in nm
            v = icd::convert_length(v, icd::LengthUnit::Nanometer,
                                    icd::LengthUnit::Angstrom);
            return icd::convert_energy_frequency(
                v, icd::SpectralUnit::WavelengthAngstrom,
                icd::SpectralUnit::RadPerSecond);
        }
        return icd::convert_energy_frequency(v, icd::spectral_unit_from_string(tag),
                                             icd::SpectralUnit::RadPerSecond);
    } catch (const icd::ValidationError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

double parse_sigma_m2(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    if (tag.empty() || tag == "Mb" || tag == "mb") return v * icd::m2_per_megabarn;
    if (tag == "m2") return v;
    throw UsageError(flag + ": unknown cross-section unit '" + tag + "'");
}

double parse_gamma_per_s(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    if (tag.empty() || tag == "1/s" || tag == "/s") return v;
    if (tag == "eV" || tag == "ev") return icd::rate_from_width_ev(v);
    throw UsageError(flag + ": unknown rate unit '" + tag + "'");
}

double parse_alpha_a3(const std::string& text, const std::string& flag) {
    auto [v, tag] = split_quantity(text);
    if (tag.empty() || tag == "A3") return v;
    if (tag == "m3") return v / icd::m3_per_angstrom3;
    throw UsageError(flag + ": unknown polarizability unit '" + tag + "'");
}

icd::Vec3 parse_vec3_angstrom(const std::string& text, const std::string& flag) {
    std::istringstream in(text);
    std::string cell;
    double c[3];
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(in, cell, ','))
            throw UsageError(flag + ": expected x,y,z, got '" + text + "'");
        c[i] = parse_length_angstrom(cell, flag);
    }
    if (std::getline(in, cell, ','))
        throw UsageError(flag + ": expected exactly three components");
    return {c[0], c[1], c[2]};
}

std::string fmt(double v, int prec = 6) {
    if (std::isnan(v)) return "n/a";
    std::ostringstream out;
    out << std::setprecision(prec) << v;
    return out.str();
}

std::string iso_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json vec_to_json(const icd::Vec3& v) { return json::array({v.x, v.y, v.z}); }

// ---------------------------------------------------------------------------
// flat key=value config files mirroring the flag names; values given on the
// command line take precedence over the file

using ConfigSetters = std::map<std::string, std::function<void(const std::string&)>>;

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw UsageError("config: key '" + key + "' expects a boolean, got '" +
                     value + "'");
}

std::string trimmed(std::string s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.pop_back();
    return s;
}

void apply_config(const CLI::App* sub, const std::string& path,
                  const ConfigSetters& setters) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw icd::IoError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: line " + std::to_string(lineno) +
                             " is not key=value");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw UsageError("config: unknown key '" + key + "'");
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt != nullptr && opt->count() > 0) continue;  // flag wins
        it->second(value);
    }
}

// ---------------------------------------------------------------------------
// rate

struct RateOptions {
    std::string pos_d, pos_a, pos_m;
    std::string alpha = "0";
    std::string c6, c2, gamma_d, sigma_a, omega_d;
    std::string kind = "auto";
    bool json_output = false;
};

json breakdown_to_json(const icd::RateBreakdown& b) {
    json j;
    j["total_per_s"] = b.total;
    j["width_ev"] = icd::width_ev_from_rate(b.total);
    j["direct_per_s"] = b.direct_term;
    j["cross_per_s"] = b.cross_term;
    j["scattered_per_s"] = b.scattered_term;
    j["u_nr"] = b.u_nr;
    j["u_r"] = b.u_r;
    j["perturbative_ok"] = b.perturbative_ok;
    j["perturbative_strict"] = b.perturbative_strict;
    return j;
}

void require_flag(const std::string& value, const std::string& flag) {
    if (value.empty()) throw UsageError("missing required flag " + flag);
}

int run_rate(const RateOptions& opt) {
    require_flag(opt.pos_d, "--pos-d");
    require_flag(opt.pos_a, "--pos-a");
    const icd::Vec3 pd_a = parse_vec3_angstrom(opt.pos_d, "--pos-d");
    const icd::Vec3 pa_a = parse_vec3_angstrom(opt.pos_a, "--pos-a");
    const bool have_mediator = !opt.pos_m.empty();
    const icd::Vec3 pm_a =
        have_mediator ? parse_vec3_angstrom(opt.pos_m, "--pos-m") : icd::Vec3{};
    const double alpha_a3 = parse_alpha_a3(opt.alpha, "--alpha");
    if (alpha_a3 < 0.0) throw UsageError("--alpha must be >= 0");
    if (alpha_a3 > 0.0 && !have_mediator)
        throw UsageError("--alpha given without --pos-m");

    const bool atoms_route =
        !opt.gamma_d.empty() && !opt.sigma_a.empty() && !opt.omega_d.empty();
    const bool coeff_route = !opt.c6.empty() || !opt.c2.empty();
    if ((!opt.gamma_d.empty() || !opt.sigma_a.empty()) && coeff_route)
        throw UsageError(
            "give either --gamma-d/--sigma-a/--omega-d or --c6/--c2, not both");
    if (!atoms_route && (!opt.gamma_d.empty() || !opt.sigma_a.empty()))
        throw UsageError(
            "the atom route needs all of --gamma-d, --sigma-a and --omega-d");
    if (!atoms_route && !coeff_route)
        throw UsageError("give either --gamma-d/--sigma-a/--omega-d or --c6/--c2");

    // Resolve whatever the inputs pin down; anything else stays NaN.
    double omega =
        opt.omega_d.empty() ? nan : parse_omega_rad_s(opt.omega_d, "--omega-d");
    double gamma_sigma = nan, c6_si = nan, c2_si = nan;
    std::string coeff_source;
    if (atoms_route) {
        const icd::DonorSpec donor{parse_gamma_per_s(opt.gamma_d, "--gamma-d"),
                                   omega};
        const icd::AcceptorSpec acceptor{parse_sigma_m2(opt.sigma_a, "--sigma-a")};
        const icd::RateCoefficients rc = icd::compute_coefficients(donor, acceptor);
        c6_si = rc.c6;
        c2_si = rc.c2;
        gamma_sigma = donor.gamma_d * acceptor.sigma_a;
        coeff_source = "computed-from-atoms";
    } else {
        if (!opt.c6.empty())
            c6_si = icd::c6_si_from_ev_a6(parse_plain_double(opt.c6, "--c6"));
        if (!opt.c2.empty())
            c2_si = icd::c2_si_from_ev_a2(parse_plain_double(opt.c2, "--c2"));
        if (!std::isnan(omega)) {
            if (std::isnan(c6_si) && !std::isnan(c2_si)) {
                gamma_sigma = icd::gamma_sigma_from_c2(c2_si);
                c6_si = icd::compute_coefficients({1.0, omega}, {gamma_sigma}).c6;
            } else if (std::isnan(c2_si) && !std::isnan(c6_si)) {
                c2_si = icd::c2_si_from_c6_si(c6_si, omega);
            }
        }
        coeff_source = "user-supplied";
    }

    // Positions in meters; triangle geometry when a mediator is present.
    const icd::Position pd_m = pd_a * icd::meters_per_angstrom;
    const icd::Position pa_m = pa_a * icd::meters_per_angstrom;
    const icd::Position pm_m = pm_a * icd::meters_per_angstrom;
    std::optional<icd::TriangleGeometry> geom;
    if (have_mediator) geom = icd::derive_geometry(pd_m, pa_m, pm_m);
    const double rho_ad_m = (pa_m - pd_m).norm();
    if (!(rho_ad_m > 0.0))
        throw icd::DegenerateGeometryError("donor and acceptor coincide");

    // Tensor kind; 'auto' picks the limit only when k rho safely allows it.
    icd::TensorKind kind;
    if (opt.kind == "auto") {
        if (std::isnan(omega)) {
            kind = icd::TensorKind::NonRetarded;
        } else {
            const double k = omega / icd::phys.c;
            double rho_min = rho_ad_m, rho_max = rho_ad_m;
            if (geom) {
                rho_min = std::min({rho_ad_m, geom->rho_dm, geom->rho_ma});
                rho_max = std::max({rho_ad_m, geom->rho_dm, geom->rho_ma});
            }
            if (k * rho_max < 0.1) kind = icd::TensorKind::NonRetarded;
            else if (k * rho_min > 10.0) kind = icd::TensorKind::FarField;
            else kind = icd::TensorKind::Full;
        }
    } else {
        try {
            kind = icd::tensor_kind_from_string(opt.kind);
        } catch (const icd::ValidationError& e) {
            throw UsageError(std::string("--kind: ") + e.what());
        }
    }

    if (kind == icd::TensorKind::NonRetarded && std::isnan(c6_si))
        throw UsageError("the nonretarded rate needs --c6 (or --c2 with "
                         "--omega-d, or the atom route)");
    if (kind != icd::TensorKind::NonRetarded && std::isnan(omega))
        throw UsageError("kind '" + icd::to_string(kind) + "' needs --omega-d");
    if (kind == icd::TensorKind::FarField && std::isnan(c2_si))
        throw UsageError("the farfield rate needs --c2, --c6 or the atom route");

    // The trace formula needs a gamma*sigma product and a frequency; the
    // non-retarded rate is independent of omega, so any positive value works
    // there when no physical one was supplied.
    const double omega_eff = std::isnan(omega) ? 1e16 : omega;
    double gs_eff = gamma_sigma;
    if (std::isnan(gs_eff)) {
        gs_eff = !std::isnan(c2_si) && kind != icd::TensorKind::NonRetarded
                     ? icd::gamma_sigma_from_c2(c2_si)
                     : icd::gamma_sigma_from_c6(c6_si, omega_eff);
    }

    icd::SystemSpec sys;
    sys.donor = icd::DonorSpec{1.0, omega_eff};
    sys.acceptor = icd::AcceptorSpec{gs_eff};
    sys.r_donor = pd_m;
    sys.r_acceptor = pa_m;
    if (have_mediator)
        sys.mediator = icd::MediatorSpec{pm_m, alpha_a3 * icd::m3_per_angstrom3};

    icd::RateBreakdown trace = icd::rate_trace(sys, kind, true);
    const icd::RateBreakdown two_body = icd::rate_trace(sys, kind, false);
    const double ratio = trace.total / two_body.total;
    if (std::isnan(omega)) trace.u_r = nan;  // computed with the fallback omega

    // Closed-form cross-check where one applies.
    std::optional<icd::RateBreakdown> closed;
    std::string closed_label;
    const double alpha_m3 = alpha_a3 * icd::m3_per_angstrom3;
    if (kind == icd::TensorKind::NonRetarded) {
        if (geom) {
            closed = icd::rate_nr_general(*geom, c6_si, alpha_m3);
            closed_label = "nonretarded general triangle";
        } else {
            icd::RateBreakdown b;
            b.direct_term = c6_si / std::pow(rho_ad_m, 6);
            b.total = b.direct_term;
            closed = b;
            closed_label = "two-body C6/rho^6";
        }
    } else if (kind == icd::TensorKind::FarField) {
        if (!geom) {
            icd::RateBreakdown b;
            b.direct_term = c2_si / (rho_ad_m * rho_ad_m);
            b.total = b.direct_term;
            closed = b;
            closed_label = "two-body C2/rho^2";
        } else if (geom->collinear) {
            closed = icd::rate_r_collinear(
                geom->rho_ad, geom->rho_ma, geom->rho_dm, c2_si, alpha_m3,
                omega_eff, geom->mediator_between ? std::numbers::pi : 0.0);
            closed_label = "far-field collinear";
        }
    }

    std::vector<std::string> warnings;
    if (have_mediator && !trace.perturbative_ok)
        warnings.push_back("mediator coupling u >= 1; the perturbative "
                           "single-scattering result is unreliable here");
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    const double gap =
        closed ? std::abs(closed->total - trace.total) /
                     std::max(std::abs(trace.total), 1e-300)
               : nan;

    if (opt.json_output) {
        json j;
        j["command"] = "rate";
        j["positions_angstrom"]["donor"] = vec_to_json(pd_a);
        j["positions_angstrom"]["acceptor"] = vec_to_json(pa_a);
        j["positions_angstrom"]["mediator"] =
            have_mediator ? vec_to_json(pm_a) : json(nullptr);
        j["alpha_a3"] = alpha_a3;
        if (geom) {
            json g;
            g["rho_ad_angstrom"] = geom->rho_ad / icd::meters_per_angstrom;
            g["rho_dm_angstrom"] = geom->rho_dm / icd::meters_per_angstrom;
            g["rho_ma_angstrom"] = geom->rho_ma / icd::meters_per_angstrom;
            g["theta_ad_rad"] = geom->theta_ad;
            g["theta_dm_rad"] = geom->theta_dm;
            g["theta_ma_rad"] = geom->theta_ma;
            g["collinear"] = geom->collinear;
            g["mediator_between"] = geom->mediator_between;
            j["geometry"] = g;
        } else {
            j["geometry"] = nullptr;
            j["rho_ad_angstrom"] = rho_ad_m / icd::meters_per_angstrom;
        }
        j["coefficients"]["c6_ev_a6"] =
            std::isnan(c6_si) ? json(nullptr) : json(icd::c6_ev_a6_from_si(c6_si));
        j["coefficients"]["c2_ev_a2"] =
            std::isnan(c2_si) ? json(nullptr) : json(icd::c2_ev_a2_from_si(c2_si));
        j["coefficients"]["source"] = coeff_source;
        j["kind"] = icd::to_string(kind);
        j["trace"] = breakdown_to_json(trace);
        j["trace"]["ratio_vs_two_body"] = ratio;
        if (closed) {
            j["closed_form"] = breakdown_to_json(*closed);
            j["closed_form"]["label"] = closed_label;
            j["closed_form"]["relative_gap_vs_trace"] = gap;
        } else {
            j["closed_form"] = nullptr;
        }
        j["warnings"] = warnings;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "system\n";
    std::cout << "  donor     at (" << fmt(pd_a.x) << ", " << fmt(pd_a.y) << ", "
              << fmt(pd_a.z) << ") A\n";
    std::cout << "  acceptor  at (" << fmt(pa_a.x) << ", " << fmt(pa_a.y) << ", "
              << fmt(pa_a.z) << ") A\n";
    if (have_mediator)
        std::cout << "  mediator  at (" << fmt(pm_a.x) << ", " << fmt(pm_a.y)
                  << ", " << fmt(pm_a.z) << ") A   alpha = " << fmt(alpha_a3)
                  << " A^3\n";
    std::cout << "geometry\n";
    std::cout << "  rho_AD = " << fmt(rho_ad_m / icd::meters_per_angstrom) << " A";
    if (geom) {
        std::cout << "   rho_DM = " << fmt(geom->rho_dm / icd::meters_per_angstrom)
                  << " A   rho_MA = " << fmt(geom->rho_ma / icd::meters_per_angstrom)
                  << " A\n";
        constexpr double deg = 180.0 / std::numbers::pi;
        std::cout << "  theta_AD = " << fmt(geom->theta_ad * deg)
                  << " deg   theta_DM = " << fmt(geom->theta_dm * deg)
                  << " deg   theta_MA = " << fmt(geom->theta_ma * deg) << " deg\n";
        if (geom->collinear)
            std::cout << "  collinear"
                      << (geom->mediator_between ? ", mediator between donor and acceptor"
                                                 : ", mediator outside")
                      << "\n";
    } else {
        std::cout << "   (no mediator)\n";
    }
    std::cout << "coefficients (" << coeff_source << ")\n";
    if (!std::isnan(c6_si))
        std::cout << "  C6 = " << fmt(icd::c6_ev_a6_from_si(c6_si)) << " eV A^6\n";
    if (!std::isnan(c2_si))
        std::cout << "  C2 = " << fmt(icd::c2_ev_a2_from_si(c2_si)) << " eV A^2\n";
    std::cout << "kind: " << icd::to_string(kind)
              << (opt.kind == "auto" ? " (auto)" : "") << "\n";
    std::cout << "rate (trace formula)\n";
    std::cout << "  total     = " << fmt(trace.total) << " 1/s  (width "
              << fmt(icd::width_ev_from_rate(trace.total)) << " eV)\n";
    std::cout << "  direct    = " << fmt(trace.direct_term) << " 1/s\n";
    std::cout << "  cross     = " << fmt(trace.cross_term) << " 1/s\n";
    std::cout << "  scattered = " << fmt(trace.scattered_term) << " 1/s\n";
    std::cout << "  vs two-body: " << fmt(ratio, 7) << "\n";
    std::cout << "  u_NR = " << fmt(trace.u_nr) << "   u_R = " << fmt(trace.u_r)
              << "\n";
    std::cout << "  perturbative: " << (trace.perturbative_ok ? "ok (u < 1)" : "NOT ok (u >= 1)")
              << (trace.perturbative_strict ? ", quantitative (u < 0.5)" : "")
              << "\n";
    if (closed) {
        std::cout << "closed form (" << closed_label << ")\n";
        std::cout << "  total = " << fmt(closed->total) << " 1/s  (width "
                  << fmt(icd::width_ev_from_rate(closed->total))
                  << " eV)   relative gap vs trace = " << fmt(gap, 3) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOptions {
    std::string figure;
    std::string type;
    std::string rho_min, rho_max;
    std::string pos_d, pos_a;
    std::string t_min, t_max, s_min, s_max;
    std::size_t n = 0, n_s = 0;
    std::string c6, c2;
    std::string alpha = "0";
    std::string omega_d;
    std::string kind;
    std::string output;
    std::string format = "csv";
};

int run_scan(const ScanOptions& opt) {
    icd::ScanResult scan;
    std::string default_name = "scan";

    if (!opt.figure.empty()) {
        if (!opt.type.empty())
            throw UsageError("--figure and --type are mutually exclusive");
        if (opt.figure == "3") {
            scan = icd::figure3_scan();
            default_name = "figure3";
        } else if (opt.figure == "4-upper") {
            scan = icd::figure4_upper_scan();
            default_name = "figure4-upper";
        } else if (opt.figure == "4-lower") {
            scan = icd::figure4_lower_scan();
            default_name = "figure4-lower";
        } else {
            throw UsageError("unknown figure preset '" + opt.figure +
                             "' (expected 3, 4-upper or 4-lower)");
        }
    } else if (opt.type == "distance") {
        require_flag(opt.rho_min, "--rho-min");
        require_flag(opt.rho_max, "--rho-max");
        require_flag(opt.c6, "--c6");
        if (opt.n == 0) throw UsageError("missing required flag --n");
        std::optional<double> omega;
        if (!opt.omega_d.empty()) omega = parse_omega_rad_s(opt.omega_d, "--omega-d");
        icd::TensorKind kind = icd::TensorKind::NonRetarded;
        if (!opt.kind.empty()) {
            try {
                kind = icd::tensor_kind_from_string(opt.kind);
            } catch (const icd::ValidationError& e) {
                throw UsageError(std::string("--kind: ") + e.what());
            }
        }
        scan = icd::scan_distance_midpoint(
            parse_length_angstrom(opt.rho_min, "--rho-min"),
            parse_length_angstrom(opt.rho_max, "--rho-max"), opt.n,
            parse_plain_double(opt.c6, "--c6"),
            parse_alpha_a3(opt.alpha, "--alpha"), kind, omega);
        default_name = "distance-scan";
    } else if (opt.type == "mediator-1d") {
        require_flag(opt.pos_d, "--pos-d");
        require_flag(opt.pos_a, "--pos-a");
        require_flag(opt.t_min, "--t-min");
        require_flag(opt.t_max, "--t-max");
        require_flag(opt.omega_d, "--omega-d");
        require_flag(opt.c2, "--c2");
        if (opt.n == 0) throw UsageError("missing required flag --n");
        scan = icd::scan_mediator_1d(parse_vec3_angstrom(opt.pos_d, "--pos-d"),
                                     parse_vec3_angstrom(opt.pos_a, "--pos-a"),
                                     parse_length_angstrom(opt.t_min, "--t-min"),
                                     parse_length_angstrom(opt.t_max, "--t-max"),
                                     opt.n, parse_alpha_a3(opt.alpha, "--alpha"),
                                     parse_omega_rad_s(opt.omega_d, "--omega-d"),
                                     parse_plain_double(opt.c2, "--c2"));
        default_name = "mediator-1d-scan";
    } else if (opt.type == "mediator-2d") {
        require_flag(opt.pos_d, "--pos-d");
        require_flag(opt.pos_a, "--pos-a");
        require_flag(opt.t_min, "--t-min");
        require_flag(opt.t_max, "--t-max");
        require_flag(opt.s_min, "--s-min");
        require_flag(opt.s_max, "--s-max");
        require_flag(opt.omega_d, "--omega-d");
        require_flag(opt.c2, "--c2");
        if (opt.n == 0 || opt.n_s == 0)
            throw UsageError("mediator-2d needs --n and --n-s");
        icd::TensorKind kind = icd::TensorKind::FarField;
        if (!opt.kind.empty()) {
            try {
                kind = icd::tensor_kind_from_string(opt.kind);
            } catch (const icd::ValidationError& e) {
                throw UsageError(std::string("--kind: ") + e.what());
            }
        }
        scan = icd::scan_mediator_2d(parse_vec3_angstrom(opt.pos_d, "--pos-d"),
                                     parse_vec3_angstrom(opt.pos_a, "--pos-a"),
                                     parse_length_angstrom(opt.t_min, "--t-min"),
                                     parse_length_angstrom(opt.t_max, "--t-max"),
                                     opt.n,
                                     parse_length_angstrom(opt.s_min, "--s-min"),
                                     parse_length_angstrom(opt.s_max, "--s-max"),
                                     opt.n_s, parse_alpha_a3(opt.alpha, "--alpha"),
                                     parse_omega_rad_s(opt.omega_d, "--omega-d"),
                                     parse_plain_double(opt.c2, "--c2"), kind);
        default_name = "mediator-2d-scan";
    } else if (opt.type.empty()) {
        throw UsageError("need --figure or --type");
    } else {
        throw UsageError("unknown scan type '" + opt.type +
                         "' (expected distance, mediator-1d or mediator-2d)");
    }

    scan.metadata["generated"] = iso_timestamp();

    const bool as_json = opt.format == "json";
    if (!as_json && opt.format != "csv")
        throw UsageError("unknown format '" + opt.format + "' (expected csv or json)");

    std::filesystem::path path(
        opt.output.empty() ? default_name + (as_json ? ".json" : ".csv")
                           : opt.output);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("ICD_OUTPUT_DIR"); dir && *dir)
            path = std::filesystem::path(dir) / path;
    }

    if (as_json)
        icd::write_scan_json_file(scan, path);
    else
        icd::write_scan_csv_file(scan, path);

    std::cout << "wrote " << path.string() << " (" << scan.rows.size()
              << " rows, " << scan.columns.size() << " columns)\n";
    std::cout << "parameters\n";
    for (const auto& [key, value] : scan.metadata)
        std::cout << "  " << key << " = " << value << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
    std::string input;
    std::string rho_min = "0";
    bool json_output = false;
};

int run_fit(const FitOptions& opt) {
    require_flag(opt.input, "--input");
    const double rho_min = parse_length_angstrom(opt.rho_min, "--rho-min");
    const icd::WidthDataset data = icd::read_width_csv_file(opt.input);
    const icd::FitResult fit = icd::fit_c6(data, rho_min);

    if (opt.json_output) {
        json j;
        j["command"] = "fit";
        j["input"] = opt.input;
        j["model"] = "width = C6 / rho^6 (linear in rho^-6, through the origin)";
        j["rho_min_angstrom"] = fit.rho_min_fit;
        j["n_points_used"] = fit.n_used;
        j["n_points_total"] = data.rho_angstrom.size();
        j["c6_ev_a6"] = fit.c6_ev_a6;
        j["c6_si_m6_per_s"] = fit.coefficients.c6;
        j["rms_residual_ev"] = fit.rms_residual_ev;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "fit of width = C6/rho^6 (linear in rho^-6, through the origin)\n";
    std::cout << "  input          " << opt.input << " (" << data.rho_angstrom.size()
              << " rows)\n";
    std::cout << "  fit range      rho >= " << fmt(fit.rho_min_fit) << " A  ("
              << fit.n_used << " rows used)\n";
    std::cout << "  C6             " << fmt(fit.c6_ev_a6, 8) << " eV A^6  ("
              << fmt(fit.coefficients.c6, 8) << " m^6/s)\n";
    std::cout << "  rms residual   " << fmt(fit.rms_residual_ev) << " eV\n";
    return 0;
}

int guarded(const std::function<int()>& f) {
    try {
        return f();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const icd::DegenerateGeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const icd::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const icd::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two- and three-body interatomic Coulombic decay rates in the "
                 "virtual-photon picture"};
    app.require_subcommand(1);

    RateOptions rate_opt;
    CLI::App* rate = app.add_subcommand(
        "rate", "Single-point rate with breakdown and diagnostics");
    rate->set_config("--config");
    rate->add_option("--pos-d", rate_opt.pos_d, "Donor position x,y,z [A]")
        ->required();
    rate->add_option("--pos-a", rate_opt.pos_a, "Acceptor position x,y,z [A]")
        ->required();
    rate->add_option("--pos-m", rate_opt.pos_m, "Mediator position x,y,z [A]");
    rate->add_option("--alpha", rate_opt.alpha,
                     "Mediator polarizability volume [A^3]");
    rate->add_option("--c6", rate_opt.c6, "Two-body C6 [eV A^6]");
    rate->add_option("--c2", rate_opt.c2, "Far-field C2 [eV A^2]");
    rate->add_option("--gamma-d", rate_opt.gamma_d, "Donor decay rate [1/s or eV]");
    rate->add_option("--sigma-a", rate_opt.sigma_a,
                     "Acceptor photoionization cross section [Mb or m2]");
    rate->add_option("--omega-d", rate_opt.omega_d,
                     "Donor transition [eV; or rad/s, Hz, A/nm wavelength]");
    rate->add_option("--kind", rate_opt.kind,
                     "Tensor kind: auto|nonretarded|farfield|full");
    rate->add_flag("--json", rate_opt.json_output, "Machine-readable output");

    ScanOptions scan_opt;
    CLI::App* scan = app.add_subcommand(
        "scan", "Distance or mediator-position scans, CSV/JSON output");
    scan->set_config("--config");
    scan->add_option("--figure", scan_opt.figure,
                     "Preset: 3, 4-upper or 4-lower");
    scan->add_option("--type", scan_opt.type,
                     "distance | mediator-1d | mediator-2d");
    scan->add_option("--rho-min", scan_opt.rho_min, "Distance scan start [A]");
    scan->add_option("--rho-max", scan_opt.rho_max, "Distance scan end [A]");
    scan->add_option("--pos-d", scan_opt.pos_d, "Donor position x,y,z [A]");
    scan->add_option("--pos-a", scan_opt.pos_a, "Acceptor position x,y,z [A]");
    scan->add_option("--t-min", scan_opt.t_min, "Mediator axis coordinate start [A]");
    scan->add_option("--t-max", scan_opt.t_max, "Mediator axis coordinate end [A]");
    scan->add_option("--s-min", scan_opt.s_min, "Perpendicular coordinate start [A]");
    scan->add_option("--s-max", scan_opt.s_max, "Perpendicular coordinate end [A]");
    scan->add_option("--n", scan_opt.n, "Grid points (axis / distance)");
    scan->add_option("--n-s", scan_opt.n_s, "Grid points, perpendicular axis");
    scan->add_option("--c6", scan_opt.c6, "Two-body C6 [eV A^6]");
    scan->add_option("--c2", scan_opt.c2, "Far-field C2 [eV A^2]");
    scan->add_option("--alpha", scan_opt.alpha, "Polarizability volume [A^3]");
    scan->add_option("--omega-d", scan_opt.omega_d,
                     "Donor transition [eV; or rad/s, Hz, A/nm wavelength]");
    scan->add_option("--kind", scan_opt.kind, "Tensor kind");
    scan->add_option("--output", scan_opt.output, "Output path");
    scan->add_option("--format", scan_opt.format, "csv | json");

    FitOptions fit_opt;
    CLI::App* fit = app.add_subcommand(
        "fit", "Least-squares C6 from a width-vs-distance CSV");
    fit->set_config("--config");
    fit->add_option("--input", fit_opt.input, "CSV with header rho_AA,width_eV");
    fit->add_option("--rho-min", fit_opt.rho_min, "Use rows with rho >= this [A]");
    fit->add_flag("--json", fit_opt.json_output, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    if (rate->parsed()) return guarded([&] { return run_rate(rate_opt); });
    if (scan->parsed()) return guarded([&] { return run_scan(scan_opt); });
    if (fit->parsed()) return guarded([&] { return run_fit(fit_opt); });
    return 1;
}
