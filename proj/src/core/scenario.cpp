// SPDX-License-Identifier: Apache-2.0
#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"
#include "rng.hpp"

namespace uhn {

void validate(const ScenarioConfig& cfg) {
    if (!(cfg.region.width_km > 0.0) || !(cfg.region.height_km > 0.0))
        throw std::invalid_argument("scenario: region dimensions must be positive");
    if (!(cfg.lambda_mbs_per_km2 > 0.0) || !(cfg.lambda_ue_per_km2 > 0.0))
        throw std::invalid_argument("scenario: node intensities must be positive");
    if (cfg.n_uabs < 0)
        throw std::invalid_argument("scenario: n_uabs must be >= 0");
    if (!(cfg.destroy_fraction >= 0.0 && cfg.destroy_fraction <= 1.0))
        throw std::invalid_argument("scenario: destroy_fraction must be in [0,1]");
    if (cfg.d_min_ue_mbs_m < 0.0 || cfg.d_min_ue_uabs_m < 0.0)
        throw std::invalid_argument("scenario: minimum distances must be >= 0");
}

namespace {

Point3 uniform_point(Xoshiro256& rng, const SimRegion& region, double z_m) {
    // Two draws in a fixed order keep layouts reproducible.
    const double x = rng.uniform(0.0, region.width_km);
    const double y = rng.uniform(0.0, region.height_km);
    return Point3{x, y, z_m};
}

bool violates_min_distance(const Point3& p, const std::vector<Point3>& stations,
                           double d_min_m) {
    const double d_min_km2 = (d_min_m / 1000.0) * (d_min_m / 1000.0);
    for (const auto& s : stations)
        if (horizontal_dist2_km2(p, s) < d_min_km2) return true;
    return false;
}

}  // namespace

NetworkLayout generate_ppp_layout(const ScenarioConfig& cfg,
                                  std::vector<Point3> preplaced_uabs) {
    validate(cfg);
    for (const auto& u : preplaced_uabs)
        if (!cfg.region.contains(u.x_km, u.y_km))
            throw std::invalid_argument("scenario: preplaced UABS outside region");

    Xoshiro256 rng(cfg.rng_seed);
    NetworkLayout out;
    out.region = cfg.region;
    out.mbs_eff_power_dbm = cfg.mbs_power_dbm;
    out.uabs_eff_power_dbm = cfg.uabs_power_dbm;
    out.d_min_ue_mbs_m = cfg.d_min_ue_mbs_m;
    out.d_min_ue_uabs_m = cfg.d_min_ue_uabs_m;
    out.uabs = std::move(preplaced_uabs);

    const double area = cfg.region.area_km2();
    const long n_mbs = rng.poisson(cfg.lambda_mbs_per_km2 * area);
    out.mbs.reserve(static_cast<std::size_t>(n_mbs));
    for (long i = 0; i < n_mbs; ++i)
        out.mbs.push_back(uniform_point(rng, cfg.region, cfg.mbs_altitude_m));

    const long n_ue = rng.poisson(cfg.lambda_ue_per_km2 * area);
    out.ue.reserve(static_cast<std::size_t>(n_ue));
    constexpr int kMaxAttempts = 1000;
    for (long i = 0; i < n_ue; ++i) {
        Point3 p;
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt == kMaxAttempts)
                throw std::runtime_error(
                    "scenario: UE min-distance resampling did not converge; "
                    "density is infeasible for the configured exclusion radii");
            p = uniform_point(rng, cfg.region, cfg.ue_height_m);
            if (violates_min_distance(p, out.mbs, cfg.d_min_ue_mbs_m)) continue;
            if (violates_min_distance(p, out.uabs, cfg.d_min_ue_uabs_m)) continue;
            break;
        }
        out.ue.push_back(p);
    }
    return out;
}

NetworkLayout destroy_mbs(const NetworkLayout& layout, double fraction,
                          std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("destroy_mbs: fraction must be in [0,1]");
    const std::size_t n = layout.mbs.size();
    const auto n_remove =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    NetworkLayout out = layout;
    if (n_remove == 0) return out;

    // Partial Fisher-Yates over the index set picks n_remove victims
    // uniformly; survivors keep their original order.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Xoshiro256 rng(seed);
    for (std::size_t i = 0; i < n_remove; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<bool> removed(n, false);
    for (std::size_t i = 0; i < n_remove; ++i) removed[idx[i]] = true;

    out.mbs.clear();
    out.mbs.reserve(n - n_remove);
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) out.mbs.push_back(layout.mbs[i]);
    return out;
}

std::vector<Point3> hex_grid_positions(int n_uabs, const SimRegion& region,
                                       double altitude_m) {
    if (n_uabs < 1)
        throw std::invalid_argument("hex_grid_positions: n_uabs must be >= 1");
    if (!(region.width_km > 0.0) || !(region.height_km > 0.0))
        throw std::invalid_argument("hex_grid_positions: degenerate region");

    const double pitch = std::sqrt(region.area_km2() / n_uabs);
    const double row_spacing = pitch * std::sqrt(3.0) / 2.0;
    const int cols =
        std::max(1, static_cast<int>(std::llround(region.width_km / pitch)));
    const int rows = (n_uabs + cols - 1) / cols;

    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n_uabs));
    for (int r = 0; r < rows && static_cast<int>(pts.size()) < n_uabs; ++r) {
        const double x_off = (r % 2 == 1) ? pitch / 2.0 : 0.0;
        for (int c = 0; c < cols && static_cast<int>(pts.size()) < n_uabs; ++c)
            pts.push_back(Point3{c * pitch + x_off, r * row_spacing, altitude_m});
    }

    double min_x = pts[0].x_km, max_x = pts[0].x_km;
    double min_y = pts[0].y_km, max_y = pts[0].y_km;
    for (const auto& p : pts) {
        min_x = std::min(min_x, p.x_km);
        max_x = std::max(max_x, p.x_km);
        min_y = std::min(min_y, p.y_km);
        max_y = std::max(max_y, p.y_km);
    }
    const double shift_x = region.width_km / 2.0 - (min_x + max_x) / 2.0;
    const double shift_y = region.height_km / 2.0 - (min_y + max_y) / 2.0;
    for (auto& p : pts) {
        p.x_km += shift_x;
        p.y_km += shift_y;
    }

    constexpr double kEps = 1e-9;
    for (const auto& p : pts)
        if (p.x_km < -kEps || p.x_km > region.width_km + kEps || p.y_km < -kEps ||
            p.y_km > region.height_km + kEps)
            throw std::invalid_argument(
                "hex_grid_positions: lattice does not fit inside the region");
    return pts;
}

NetworkLayout with_uabs(const NetworkLayout& layout, std::vector<Point3> uabs) {
    NetworkLayout out = layout;
    out.uabs = std::move(uabs);
    return out;
}

void save_layout_csv(const NetworkLayout& layout, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open for writing: " + path);
    f << "node_type,x_km,y_km,z_m\n";
    char buf[128];
    auto write = [&](const char* type, const Point3& p) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", type, p.x_km,
                      p.y_km, p.z_m);
        f << buf;
    };
    for (const auto& p : layout.mbs) write("mbs", p);
    for (const auto& p : layout.uabs) write("uabs", p);
    for (const auto& p : layout.ue) write("ue", p);
    if (!f) throw io_error("write failed: " + path);
}

NetworkLayout load_layout_csv(const std::string& path, double mbs_power_dbm,
                              double uabs_power_dbm) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open for reading: " + path);
    NetworkLayout out;
    out.mbs_eff_power_dbm = mbs_power_dbm;
    out.uabs_eff_power_dbm = uabs_power_dbm;

    std::string line;
    if (!std::getline(f, line) || line.rfind("node_type,", 0) != 0)
        throw parse_error("layout csv: missing header row: " + path);
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string type, xs, ys, zs;
        if (!std::getline(ss, type, ',') || !std::getline(ss, xs, ',') ||
            !std::getline(ss, ys, ',') || !std::getline(ss, zs))
            throw parse_error("layout csv: malformed line " + std::to_string(line_no));
        Point3 p;
        try {
            p = Point3{std::stod(xs), std::stod(ys), std::stod(zs)};
        } catch (const std::exception&) {
            throw parse_error("layout csv: bad number on line " + std::to_string(line_no));
        }
        if (type == "mbs")
            out.mbs.push_back(p);
        else if (type == "uabs")
            out.uabs.push_back(p);
        else if (type == "ue")
            out.ue.push_back(p);
        else
            throw parse_error("layout csv: unknown node_type '" + type + "' on line " +
                              std::to_string(line_no));
    }

    double w = 0.0, h = 0.0;
    for (const auto* v : {&out.mbs, &out.uabs, &out.ue})
        for (const auto& p : *v) {
            w = std::max(w, p.x_km);
            h = std::max(h, p.y_km);
        }
    out.region = SimRegion{std::max(w, 1e-9), std::max(h, 1e-9)};
    return out;
}

}  // namespace uhn
