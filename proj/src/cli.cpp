#include "casimir/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <thread>

#include "json.hpp"

#include "casimir/analytic.hpp"
#include "casimir/stats.hpp"
#include "casimir/worldline.hpp"

namespace casimir {

using nlohmann::json;

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::tictactoe_sweep: return "tictactoe-sweep";
        case Mode::triangle_sweep: return "triangle-sweep";
        case Mode::energy: return "energy";
        case Mode::spectral_check: return "spectral-check";
        case Mode::monotonicity: return "monotonicity";
        case Mode::convergence_study: return "convergence-study";
    }
    return "energy";
}

std::optional<Mode> mode_from_name(const std::string& name) {
    for (Mode m : {Mode::tictactoe_sweep, Mode::triangle_sweep, Mode::energy,
                   Mode::spectral_check, Mode::monotonicity, Mode::convergence_study})
        if (mode_name(m) == name) return m;
    return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key + " must be a number");
    return v.get<double>();
}

long long get_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(key + " must be an integer");
    return v.get<long long>();
}

double get_positive(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const double x = get_number(j.at(key), key);
    if (!(x > 0.0)) fail(key + " must be positive");
    return x;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

// strength > 0 for a soft potential; 0 marks Dirichlet.
double parse_strength(const json& j) {
    if (!j.contains("strength")) return 0.0;
    const auto& v = j.at("strength");
    if (v.is_string() && v.get<std::string>() == "dirichlet") return 0.0;
    if (v.is_number() && v.get<double>() > 0.0) return v.get<double>();
    fail("strength must be positive or \"dirichlet\"");
}

std::vector<double> parse_triples_row(const json& v, const std::string& err) {
    if (!v.is_array() || v.size() != 3) fail(err);
    std::vector<double> row(3);
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) fail(err);
        row[i] = v[i].get<double>();
    }
    return row;
}

}  // namespace

RunConfig parse_config(const std::string& text, Mode mode) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("config must be a JSON object");

    std::set<std::string> known = {"mode", "seed", "loops", "points", "rotations", "output",
                                   "threads"};
    switch (mode) {
        case Mode::tictactoe_sweep:
        case Mode::triangle_sweep:
            known.insert({"ratio_min", "ratio_max", "ratio_count"});
            break;
        case Mode::energy:
            known.insert({"geometry", "w", "h", "base", "height", "exact_tol", "analytic"});
            break;
        case Mode::spectral_check:
            known.insert({"beta", "disks", "lines", "strength"});
            break;
        case Mode::monotonicity:
            known.insert({"beta", "radius", "strength", "separations"});
            break;
        case Mode::convergence_study:
            known.insert({"w", "h", "point_counts"});
            break;
    }
    std::vector<std::string> unknown;
    for (const auto& item : j.items())
        if (!known.count(item.key())) unknown.push_back(item.key());
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        std::string msg = "unknown config keys: ";
        for (std::size_t i = 0; i < unknown.size(); ++i) {
            if (i) msg += ", ";
            msg += unknown[i];
        }
        fail(msg);
    }

    RunConfig cfg;
    cfg.mode = mode;
    if (j.contains("mode")) {
        if (!j.at("mode").is_string() || j.at("mode").get<std::string>() != mode_name(mode))
            fail("config mode does not match the command");
    }
    if (!j.contains("seed")) fail("seed is required for reproducibility");
    {
        const auto& v = j.at("seed");
        if ((!v.is_number_integer() && !v.is_number_unsigned()) ||
            (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
            fail("seed must be a nonnegative integer");
        cfg.ensemble.seed = v.get<std::uint64_t>();
    }
    if (j.contains("loops")) cfg.ensemble.loop_count = get_integer(j.at("loops"), "loops");
    if (cfg.ensemble.loop_count < 1) fail("loops must be at least 1");
    if (j.contains("points"))
        cfg.ensemble.points_per_loop = static_cast<int>(get_integer(j.at("points"), "points"));
    if (cfg.ensemble.points_per_loop < 2 || !is_power_of_two(cfg.ensemble.points_per_loop))
        fail("points must be a power of two");
    if (j.contains("rotations"))
        cfg.ensemble.rotations = static_cast<int>(get_integer(j.at("rotations"), "rotations"));
    if (cfg.ensemble.rotations < 0 || cfg.ensemble.rotations > 6)
        fail("rotations must be in [0,6]");
    if (j.contains("threads")) get_integer(j.at("threads"), "threads");  // recorded, not binding
    if (j.contains("output")) {
        if (!j.at("output").is_string()) fail("output must be a string");
        cfg.output_path = j.at("output").get<std::string>();
        if (cfg.output_path.empty()) fail("output must be a nonempty path");
    } else {
        cfg.output_path = mode_name(mode) + ".csv";
    }

    switch (mode) {
        case Mode::tictactoe_sweep:
        case Mode::triangle_sweep: {
            cfg.ratio_min = get_positive(j, "ratio_min", cfg.ratio_min);
            cfg.ratio_max = get_positive(j, "ratio_max", cfg.ratio_max);
            if (cfg.ratio_max <= cfg.ratio_min) fail("ratio_max must exceed ratio_min");
            if (j.contains("ratio_count"))
                cfg.ratio_count = static_cast<int>(get_integer(j.at("ratio_count"), "ratio_count"));
            if (cfg.ratio_count < 2) fail("ratio_count must be at least 2");
            break;
        }
        case Mode::energy: {
            if (j.contains("geometry")) {
                if (!j.at("geometry").is_string()) fail("geometry must be \"tictactoe\" or \"triangle\"");
                cfg.geometry = j.at("geometry").get<std::string>();
            }
            if (cfg.geometry != "tictactoe" && cfg.geometry != "triangle")
                fail("geometry must be \"tictactoe\" or \"triangle\"");
            cfg.w = get_positive(j, "w", cfg.w);
            cfg.h = get_positive(j, "h", cfg.h);
            cfg.base = get_positive(j, "base", cfg.base);
            cfg.height = get_positive(j, "height", cfg.height);
            cfg.exact_tol = get_positive(j, "exact_tol", cfg.exact_tol);
            if (j.contains("analytic")) {
                if (!j.at("analytic").is_boolean()) fail("analytic must be a boolean");
                cfg.analytic = j.at("analytic").get<bool>();
            }
            break;
        }
        case Mode::spectral_check: {
            cfg.beta = get_positive(j, "beta", cfg.beta);
            cfg.strength = parse_strength(j);
            const bool has_disks = j.contains("disks");
            const bool has_lines = j.contains("lines");
            if (has_disks == has_lines) fail("spectral-check requires disks or lines");
            if (has_disks) {
                const auto& arr = j.at("disks");
                if (!arr.is_array() || arr.empty())
                    fail("disks must be an array of [x, y, radius] triples");
                for (const auto& v : arr) {
                    const auto row =
                        parse_triples_row(v, "disks must be an array of [x, y, radius] triples");
                    if (!(row[2] > 0.0)) fail("disk radius must be positive");
                    cfg.disks.push_back({{row[0], row[1]}, row[2]});
                }
            } else {
                const auto& arr = j.at("lines");
                if (!arr.is_array() || arr.empty())
                    fail("lines must be an array of [nx, ny, offset] triples");
                for (const auto& v : arr) {
                    const auto row =
                        parse_triples_row(v, "lines must be an array of [nx, ny, offset] triples");
                    cfg.lines.push_back(make_line({row[0], row[1]}, row[2]));
                }
            }
            break;
        }
        case Mode::monotonicity: {
            cfg.beta = get_positive(j, "beta", cfg.beta);
            cfg.radius = get_positive(j, "radius", cfg.radius);
            cfg.strength = parse_strength(j);
            if (!j.contains("separations") || !j.at("separations").is_array() ||
                j.at("separations").empty())
                fail("separations must be a nonempty array");
            for (const auto& v : j.at("separations"))
                cfg.separations.push_back(get_number(v, "separations"));
            for (std::size_t i = 0; i < cfg.separations.size(); ++i)
                if (!(cfg.separations[i] > 0.0) ||
                    (i > 0 && cfg.separations[i] <= cfg.separations[i - 1]))
                    fail("separations must be positive and increasing");
            break;
        }
        case Mode::convergence_study: {
            cfg.w = get_positive(j, "w", cfg.w);
            cfg.h = get_positive(j, "h", cfg.h);
            if (j.contains("point_counts")) {
                const auto& arr = j.at("point_counts");
                if (!arr.is_array() || arr.empty()) fail("point_counts must be a nonempty array");
                cfg.point_counts.clear();
                for (const auto& v : arr)
                    cfg.point_counts.push_back(
                        static_cast<int>(get_integer(v, "point_counts")));
            }
            for (int n : cfg.point_counts)
                if (n < 2 || !is_power_of_two(n)) fail("point_counts must be powers of two");
            break;
        }
    }
    return cfg;
}

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void require_finite(double x) {
    if (!std::isfinite(x)) throw std::runtime_error("non-finite value in output");
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << body;
    if (!out) throw std::runtime_error("cannot write output file: " + path);
}

json resolved_config(const RunConfig& cfg, int threads, bool analytic) {
    json side;
    side["mode"] = mode_name(cfg.mode);
    side["seed"] = cfg.ensemble.seed;
    side["loops"] = cfg.ensemble.loop_count;
    side["points"] = cfg.ensemble.points_per_loop;
    side["rotations"] = cfg.ensemble.rotations;
    side["output"] = cfg.output_path;
    side["threads"] = threads;
    switch (cfg.mode) {
        case Mode::tictactoe_sweep:
        case Mode::triangle_sweep:
            side["ratio_min"] = cfg.ratio_min;
            side["ratio_max"] = cfg.ratio_max;
            side["ratio_count"] = cfg.ratio_count;
            break;
        case Mode::energy:
            side["geometry"] = cfg.geometry;
            if (cfg.geometry == "tictactoe") {
                side["w"] = cfg.w;
                side["h"] = cfg.h;
                side["exact_tol"] = cfg.exact_tol;
            } else {
                side["base"] = cfg.base;
                side["height"] = cfg.height;
            }
            side["analytic"] = analytic;
            break;
        case Mode::spectral_check:
            side["beta"] = cfg.beta;
            if (!cfg.disks.empty()) {
                json arr = json::array();
                for (const auto& d : cfg.disks)
                    arr.push_back({d.center.x, d.center.y, d.radius});
                side["disks"] = arr;
                if (cfg.strength > 0.0)
                    side["strength"] = cfg.strength;
                else
                    side["strength"] = "dirichlet";
            } else {
                json arr = json::array();
                for (const auto& l : cfg.lines) arr.push_back({l.normal.x, l.normal.y, l.offset});
                side["lines"] = arr;
            }
            break;
        case Mode::monotonicity:
            side["beta"] = cfg.beta;
            side["radius"] = cfg.radius;
            if (cfg.strength > 0.0)
                side["strength"] = cfg.strength;
            else
                side["strength"] = "dirichlet";
            side["separations"] = cfg.separations;
            break;
        case Mode::convergence_study:
            side["w"] = cfg.w;
            side["h"] = cfg.h;
            side["point_counts"] = cfg.point_counts;
            break;
    }
    return side;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) out[i] = std::exp(std::log(lo) + i * step);
    return out;
}

std::string sweep_csv(const std::vector<std::pair<double, EnergyEstimate>>& rows,
                      double area_scale) {
    std::string csv = "ratio,epsilon,std_error,loops\n";
    for (const auto& [x, est] : rows) {
        const double eps = est.epsilon;
        const double se = est.std_error * area_scale;
        require_finite(x);
        require_finite(eps);
        require_finite(se);
        csv += fmt(x) + "," + fmt(eps) + "," + fmt(se) + "," + std::to_string(est.loop_count) +
               "\n";
    }
    return csv;
}

std::string run_sweep(const RunConfig& cfg, int threads) {
    const auto ratios = log_spaced(cfg.ratio_min, cfg.ratio_max, cfg.ratio_count);
    if (cfg.mode == Mode::triangle_sweep)
        for (double r : ratios)
            if (r < 0.05 || r > 50.0)
                std::cerr << "warning: ratio " << r << " approaches the collapse limit\n";
    const SweepFamily family =
        cfg.mode == Mode::tictactoe_sweep ? SweepFamily{TicTacToe{}} : SweepFamily{IsoTriangle{}};
    return sweep_csv(sweep(family, ratios, cfg.ensemble, threads), 1.0);
}

std::string run_energy(const RunConfig& cfg, int threads, bool analytic) {
    const bool ttt = cfg.geometry == "tictactoe";
    if (analytic && !ttt) fail("analytic requires tictactoe geometry");
    const Configuration config =
        ttt ? make_tictactoe(cfg.w, cfg.h) : make_triangle({cfg.base, cfg.height});
    const EnergyEstimate est = estimate_energy(config, cfg.ensemble, threads);
    require_finite(est.value);
    require_finite(est.std_error);
    std::string csv = "quantity,value,std_error\n";
    csv += "mc," + fmt(est.value) + "," + fmt(est.std_error) + "\n";
    if (analytic) {
        const double exact = tictactoe_exact(cfg.w, cfg.h, cfg.exact_tol);
        require_finite(exact);
        csv += "exact," + fmt(exact) + ",0\n";
    }
    return csv;
}

std::string run_spectral_check(const RunConfig& cfg, int threads) {
    SpectralEstimate est;
    if (!cfg.lines.empty()) {
        const Configuration config = make_lines(cfg.lines);
        double scale = 1.0;
        for (const auto& l : config.lines) scale = std::max(scale, std::abs(l.offset));
        if (common_point_check(config.lines).max_residual <= 1e-9 * scale)
            throw std::runtime_error("divergent weight: objects share a common point");
        // For Dirichlet lines the anchor integral of the kill-all indicator
        // is the exact support area, so no box sampling is needed.
        std::vector<double> parents(cfg.ensemble.loop_count, 0.0);
        const EnsembleSpec& spec = cfg.ensemble;
        validate(spec);
        parallel_for_index(spec.loop_count, threads, [&](long long i) {
            RandomStream stream = make_loop_stream(spec.seed, i);
            const UnitBridge bridge = generate_unit_bridge(stream, spec.points_per_loop);
            double acc = support_area(config, bridge, cfg.beta);
            for (const auto& d : rotated_duplicates(bridge, spec.rotations))
                acc += support_area(config, d, cfg.beta);
            parents[i] = acc / (1.0 + spec.rotations);
        });
        const auto ms = block_mean_stderr(parents);
        const double sign = (config.lines.size() % 2 == 0) ? 1.0 : -1.0;
        const double scale2pi = 1.0 / (2.0 * std::numbers::pi * cfg.beta);
        est = {sign * scale2pi * ms.mean, scale2pi * ms.std_error, cfg.beta};
    } else {
        std::vector<PotentialObject> objects;
        double xlo = cfg.disks[0].center.x, xhi = xlo, ylo = cfg.disks[0].center.y, yhi = ylo;
        for (const auto& d : cfg.disks) {
            objects.push_back(cfg.strength > 0.0
                                  ? make_soft_disk(d.center, d.radius, cfg.strength)
                                  : make_dirichlet_disk(d.center, d.radius));
            xlo = std::min(xlo, d.center.x - d.radius);
            xhi = std::max(xhi, d.center.x + d.radius);
            ylo = std::min(ylo, d.center.y - d.radius);
            yhi = std::max(yhi, d.center.y + d.radius);
        }
        const double pad = 5.0 * std::sqrt(cfg.beta);
        const SamplingBox box{{xlo - pad, ylo - pad}, {xhi + pad, yhi + pad}};
        est = estimate_irreducible_spectral_density(objects, cfg.beta, cfg.ensemble, box, threads);
    }
    require_finite(est.value);
    require_finite(est.std_error);
    std::string csv = "quantity,value,std_error\n";
    csv += "phi_tilde," + fmt(est.value) + "," + fmt(est.std_error) + "\n";
    return csv;
}

std::string run_monotonicity(const RunConfig& cfg, int threads) {
    const PotentialObject obj = cfg.strength > 0.0
                                    ? make_soft_disk({0.0, 0.0}, cfg.radius, cfg.strength)
                                    : make_dirichlet_disk({0.0, 0.0}, cfg.radius);
    const auto curve = monotonicity_curve(obj, obj, cfg.separations, cfg.beta, cfg.ensemble,
                                          threads);
    std::string csv = "ratio,epsilon,std_error,loops\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        require_finite(curve[i].value);
        require_finite(curve[i].std_error);
        csv += fmt(cfg.separations[i]) + "," + fmt(curve[i].value) + "," +
               fmt(curve[i].std_error) + "," + std::to_string(cfg.ensemble.loop_count) + "\n";
    }
    return csv;
}

std::string run_convergence(const RunConfig& cfg, int threads) {
    const auto rows = convergence_study(cfg.w, cfg.h, cfg.point_counts, cfg.ensemble, threads);
    const double area_scale = std::sqrt(cfg.w * cfg.h);
    std::string csv = "ratio,epsilon,std_error,loops\n";
    for (const auto& [n, est] : rows) {
        require_finite(est.epsilon);
        require_finite(est.std_error);
        csv += std::to_string(n) + "," + fmt(est.epsilon) + "," +
               fmt(est.std_error * area_scale) + "," + std::to_string(est.loop_count) + "\n";
    }
    return csv;
}

}  // namespace

int run(const RunConfig& config, int threads, bool analytic) {
    try {
        const bool exact_row = analytic || config.analytic;
        if (exact_row && config.mode != Mode::energy) fail("analytic requires the energy mode");
        std::string csv;
        switch (config.mode) {
            case Mode::tictactoe_sweep:
            case Mode::triangle_sweep:
                csv = run_sweep(config, threads);
                break;
            case Mode::energy:
                csv = run_energy(config, threads, exact_row);
                break;
            case Mode::spectral_check:
                csv = run_spectral_check(config, threads);
                break;
            case Mode::monotonicity:
                csv = run_monotonicity(config, threads);
                break;
            case Mode::convergence_study:
                csv = run_convergence(config, threads);
                break;
        }
        write_file(config.output_path, csv);
        write_file(config.output_path + ".json",
                   resolved_config(config, threads, analytic || config.analytic).dump(2) + "\n");
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int resolve_threads(std::optional<int> cli_threads) {
    if (cli_threads) {
        if (*cli_threads < 1) fail("threads must be positive");
        return *cli_threads;
    }
    if (const char* env = std::getenv("CASIMIR_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            fail("CASIMIR_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace casimir
