#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ajm/ak_two.hpp"
#include "ajm/detector.hpp"
#include "ajm/effect.hpp"
#include "ajm/errors.hpp"
#include "ajm/fidelity.hpp"
#include "ajm/geometry_ft.hpp"
#include "ajm/kernel_table.hpp"
#include "ajm/mc.hpp"
#include "ajm/report.hpp"
#include "ajm/three_obs.hpp"
#include "ajm/vec3.hpp"

namespace ajm {
namespace cli {

using Json = nlohmann::ordered_json;

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

inline Json load_config(const std::string& path) {
    if (path.empty()) throw ConfigError("missing --config <path>");
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file " + path);
    Json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    return j;
}

namespace detail {

inline const Json& require(const Json& cfg, const char* key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw ConfigError(std::string("config: missing required key \"") + key + "\"");
    return *it;
}

inline double get_number(const Json& node, const char* what) {
    if (!node.is_number()) throw ConfigError(std::string("config: ") + what + " must be a number");
    return node.get<double>();
}

inline double get_number(const Json& cfg, const char* key, const char* what) {
    return get_number(require(cfg, key), what);
}

inline double get_number_or(const Json& cfg, const char* key, double fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : get_number(*it, key);
}

inline Vec3 get_vec3(const Json& node, const char* what) {
    if (!node.is_array() || node.size() != 3)
        throw ConfigError(std::string("config: ") + what + " must be an array of 3 numbers");
    return {get_number(node[0], what), get_number(node[1], what), get_number(node[2], what)};
}

inline Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

/// Linear parameter range. A bare number is a single-point range; an object
/// takes {"start", "stop", "points"} with points >= 1 and start <= stop.
struct Range {
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    double value(int i) const {
        if (points == 1) return start;
        return start + (stop - start) * double(i) / double(points - 1);
    }
};

inline Range parse_range(const Json& node, const char* what) {
    if (node.is_number()) {
        double v = node.get<double>();
        return {v, v, 1};
    }
    if (!node.is_object())
        throw ConfigError(std::string("config: ") + what + " must be a number or a range object");
    Range r;
    r.start = get_number(node, "start", what);
    r.stop = get_number(node, "stop", what);
    const Json& p = require(node, "points");
    if (!p.is_number_integer())
        throw ConfigError(std::string("config: ") + what + ".points must be an integer");
    r.points = p.get<int>();
    if (r.points < 1) throw ConfigError(std::string("config: ") + what + " sweep range is empty");
    if (!(r.start <= r.stop))
        throw ConfigError(std::string("config: ") + what + " range needs start <= stop");
    return r;
}

inline DetectorConfig detector_for(double s1, double s2, const Json& cfg) {
    auto it = cfg.find("grid");
    if (it == cfg.end()) return DetectorConfig::auto_for(s1, s2);
    DetectorConfig d;
    d.sigma1 = s1;
    d.sigma2 = s2;
    d.grid_extent = get_number(*it, "extent", "grid.extent");
    const Json& p = require(*it, "points");
    if (!p.is_number_integer()) throw ConfigError("config: grid.points must be an integer");
    d.grid_points = p.get<int>();
    d.validate();
    return d;
}

inline std::uint64_t resolve_seed(const Json& cfg, const CliOptions& opt) {
    if (opt.seed) return *opt.seed;
    auto it = cfg.find("seed");
    if (it == cfg.end())
        throw ConfigError("config: seed is required for Monte-Carlo commands (key \"seed\" or --seed)");
    if (!it->is_number_unsigned() && !it->is_number_integer())
        throw ConfigError("config: seed must be a non-negative integer");
    return it->get<std::uint64_t>();
}

inline Json envelope(const char* command, const Json& cfg, Json tolerances) {
    Json r;
    r["version"] = kVersion;
    r["command"] = command;
    r["config"] = cfg;
    r["tolerances"] = std::move(tolerances);
    return r;
}

inline void write_report(const Json& report, const CliOptions& opt, const std::string& name) {
    write_text_file((std::filesystem::path(opt.out_dir) / name).string(), report.dump(2) + "\n");
}

inline Json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

inline void check_probability_row(const double* p, int count, const char* where) {
    double sum = 0.0;
    for (int i = 0; i < count; ++i) {
        if (p[i] < -1e-12) throw NumericalError(std::string(where) + ": negative probability");
        sum += p[i];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw NumericalError(std::string(where) + ": probabilities sum to " + format_g17(sum));
}

}  // namespace detail

/// Margin sharpness sweep over detector widths. "sigma_a" is a number or a
/// range; "sigma_b" (optional, default equal to sigma_a) likewise. Two ranges
/// sweep in lockstep and must have equal point counts. Writes
/// sweep_aprime.csv with one row per point plus a JSON summary.
inline int cmd_sweep_aprime(const Json& cfg, const CliOptions& opt) {
    detail::Range ra = detail::parse_range(detail::require(cfg, "sigma_a"), "sigma_a");
    detail::Range rb = cfg.contains("sigma_b") ? detail::parse_range(cfg["sigma_b"], "sigma_b") : ra;
    if (ra.points != rb.points && ra.points != 1 && rb.points != 1)
        throw ConfigError("config: sigma_a and sigma_b ranges must have equal point counts");
    int points = std::max(ra.points, rb.points);

    CsvWriter csv({"sigma_a", "sigma_b", "a_prime", "b_prime", "lhs_uncertainty"});
    double max_a = 0.0, max_lhs = 0.0;
    for (int i = 0; i < points; ++i) {
        double s1 = ra.value(ra.points == 1 ? 0 : i);
        double s2 = rb.value(rb.points == 1 ? 0 : i);
        KernelTable2 t = build_kernel_table2(detail::detector_for(s1, s2, cfg), opt.threads);
        MarginalPair mp = compute_marginals(t);
        double lhs = mp.a_prime * mp.a_prime + mp.b_prime * mp.b_prime;
        csv.add_row({s1, s2, mp.a_prime, mp.b_prime, lhs});
        max_a = std::max(max_a, mp.a_prime);
        max_lhs = std::max(max_lhs, lhs);
    }
    csv.write_file((std::filesystem::path(opt.out_dir) / "sweep_aprime.csv").string());

    Json r = detail::envelope("sweep-aprime", cfg, {{"kernel_norm_defect", 1e-6}});
    r["results"] = {{"rows", points},
                    {"csv", "sweep_aprime.csv"},
                    {"max_a_prime", max_a},
                    {"max_lhs_uncertainty", max_lhs}};
    detail::write_report(r, opt, "sweep_aprime_report.json");
    return 0;
}

/// Conditional post-measurement state for one outcome of the two-detector
/// model, plus all four outcome probabilities. Config: "sigma_a", "sigma_b",
/// "state" [x,y,z], optional "outcome" in {"++","+-","-+","--"} (default "++").
inline int cmd_post_state(const Json& cfg, const CliOptions& opt) {
    double s1 = detail::get_number(cfg, "sigma_a", "sigma_a");
    double s2 = detail::get_number(cfg, "sigma_b", "sigma_b");
    Vec3 sv = detail::get_vec3(detail::require(cfg, "state"), "state");
    BlochState chi{sv.x, sv.y, sv.z};
    chi.validate();

    std::string outcome = cfg.contains("outcome") ? cfg["outcome"].get<std::string>() : "++";
    if (outcome.size() != 2 || (outcome[0] != '+' && outcome[0] != '-') ||
        (outcome[1] != '+' && outcome[1] != '-'))
        throw ConfigError("config: outcome must be one of ++, +-, -+, --");
    int oa = outcome[0] == '+' ? +1 : -1;
    int ob = outcome[1] == '+' ? +1 : -1;

    KernelTable2 t = build_kernel_table2(detail::detector_for(s1, s2, cfg), opt.threads);
    const char* labels[4] = {"++", "+-", "-+", "--"};
    const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    double probs[4];
    Json prob_json;
    for (int k = 0; k < 4; ++k) {
        QuadrantIntegrals q = quadrant_integrals(t, signs[k][0], signs[k][1]);
        probs[k] = 0.25 * (1.0 + chi.x * 8.0 * q.ef + chi.y * 8.0 * q.eg);
        prob_json[labels[k]] = probs[k];
    }
    detail::check_probability_row(probs, 4, "post-state");

    PostState ps = post_state(t, chi, oa, ob);
    double angle_deg = std::atan2(ps.state.y, ps.state.x) * 180.0 / M_PI;

    Json r = detail::envelope("post-state", cfg,
                              {{"kernel_norm_defect", 1e-6}, {"probability_sum", 1e-9}});
    r["results"] = {{"probabilities", prob_json},
                    {"outcome", outcome},
                    {"post_bloch", detail::to_json(ps.state.vec())},
                    {"bloch_magnitude", ps.magnitude},
                    {"uncertainty_product", ps.uncertainty_product},
                    {"angle_to_x_deg", angle_deg}};
    detail::write_report(r, opt, "post_state_report.json");
    return 0;
}

/// Transmission, estimation, and disturbance fidelity report for one
/// detector pair. Config: "sigma_a", "sigma_b". The closed form pi a'/4 and
/// its deviation from the direct integral are reported side by side.
inline int cmd_fidelities(const Json& cfg, const CliOptions& opt) {
    double s1 = detail::get_number(cfg, "sigma_a", "sigma_a");
    double s2 = detail::get_number(cfg, "sigma_b", "sigma_b");
    KernelTable2 t = build_kernel_table2(detail::detector_for(s1, s2, cfg), opt.threads);
    FidelityReport fr = fidelity_report(t);
    double closed = eta_i_closed(fr.a_prime);

    Json r = detail::envelope("fidelities", cfg,
                              {{"kernel_norm_defect", 1e-6}, {"eta_domain_slack", 1e-12}});
    r["results"] = {{"a_prime", fr.a_prime},
                    {"eta_i_direct", fr.eta_i},
                    {"eta_i_closed", closed},
                    {"eta_i_difference", fr.eta_i - closed},
                    {"eta_f", detail::number_or_null(fr.eta_f)},
                    {"eta_d", fr.eta_d},
                    {"delta_ei", fr.delta_ei},
                    {"delta_ef", detail::number_or_null(fr.delta_ef)},
                    {"delta_d", fr.delta_d},
                    {"optimal_split", fr.s},
                    {"symmetric_detectors", fr.symmetric_detectors}};
    detail::write_report(r, opt, "fidelities_report.json");
    return 0;
}

/// Outcome probabilities of the oblique-axis four-outcome observable over a
/// theta grid. Config: "theta" (number or range over [0, pi]), "state"
/// [x,y,z], and either "a_prime" directly or "sigma" (symmetric detectors,
/// a' computed from the kernel table). Writes oblique.csv.
inline int cmd_oblique(const Json& cfg, const CliOptions& opt) {
    Vec3 sv = detail::get_vec3(detail::require(cfg, "state"), "state");
    BlochState chi{sv.x, sv.y, sv.z};
    chi.validate();
    detail::Range rt = detail::parse_range(detail::require(cfg, "theta"), "theta");

    double a_prime;
    if (cfg.contains("a_prime")) {
        a_prime = detail::get_number(cfg, "a_prime", "a_prime");
    } else {
        double s = detail::get_number(cfg, "sigma", "sigma");
        KernelTable2 t = build_kernel_table2(detail::detector_for(s, s, cfg), opt.threads);
        a_prime = compute_marginals(t).a_prime;
    }

    CsvWriter csv({"theta", "p_pp", "p_pm", "p_mp", "p_mm"});
    for (int i = 0; i < rt.points; ++i) {
        double theta = rt.value(i);
        for (const Effect& e : oblique_effects(a_prime, theta))
            if (!is_valid_effect(e))
                throw ConfigError("oblique: effects invalid at theta " + format_g17(theta) +
                                  " with a_prime " + format_g17(a_prime));
        std::array<double, 4> p = oblique_probabilities(a_prime, theta, chi);
        detail::check_probability_row(p.data(), 4, "oblique");
        csv.add_row({theta, p[0], p[1], p[2], p[3]});
    }
    csv.write_file((std::filesystem::path(opt.out_dir) / "oblique.csv").string());

    Json r = detail::envelope("oblique", cfg,
                              {{"effect_validity", kEffectTol}, {"probability_sum", 1e-9}});
    r["results"] = {{"rows", rt.points}, {"csv", "oblique.csv"}, {"a_prime", a_prime}};
    detail::write_report(r, opt, "oblique_report.json");
    return 0;
}

/// Monte-Carlo sweep of the three-detector margin sharpness along the
/// symmetric diagonal sigma_1 = sigma_2 = sigma_3. Config: "sigma" (number or
/// range), optional "samples" (default 2^22) and "strata_per_axis" (default
/// 8), "seed" (required here or via --seed). Writes three_sweep.csv.
inline int cmd_three_sweep(const Json& cfg, const CliOptions& opt) {
    detail::Range rs = detail::parse_range(detail::require(cfg, "sigma"), "sigma");
    std::uint64_t seed = detail::resolve_seed(cfg, opt);

    StratifiedSpec base;
    base.threads = opt.threads;
    if (cfg.contains("samples")) {
        const Json& s = cfg["samples"];
        if (!s.is_number_integer() || s.get<std::int64_t>() <= 0)
            throw ConfigError("config: samples must be a positive integer");
        base.samples = s.get<std::uint64_t>();
    }
    if (cfg.contains("strata_per_axis")) {
        const Json& s = cfg["strata_per_axis"];
        if (!s.is_number_integer() || s.get<int>() < 1)
            throw ConfigError("config: strata_per_axis must be a positive integer");
        base.strata_per_axis = s.get<int>();
    }

    const double bound = 1.0 / std::sqrt(3.0);
    CsvWriter csv({"sigma_1", "sigma_2", "sigma_3", "a_prime", "a_prime_stderr", "b_prime",
                   "b_prime_stderr", "c_prime", "c_prime_stderr", "norm2_sum", "orthogonal_bound",
                   "min_total", "holds"});
    double max_a = 0.0;
    for (int i = 0; i < rs.points; ++i) {
        double s = rs.value(i);
        TripleDetectorConfig tc{s, s, s};
        StratifiedSpec sp = base;
        sp.seed = substream_seed(seed, std::uint64_t(i));
        TripleMarginals tm = compute_triple(tc, sp);
        NecessaryReport nr = check_necessary(tm);
        csv.add_row({s, s, s, tm.a_prime.value, tm.a_prime.std_error, tm.b_prime.value,
                     tm.b_prime.std_error, tm.c_prime.value, tm.c_prime.std_error, nr.norm2_sum,
                     bound, nr.min_total, nr.holds ? 1.0 : 0.0});
        max_a = std::max({max_a, tm.a_prime.value, tm.b_prime.value, tm.c_prime.value});
    }
    csv.write_file((std::filesystem::path(opt.out_dir) / "three_sweep.csv").string());

    Json r = detail::envelope("three-sweep", cfg,
                              {{"mc_norm_widening", 1.15}, {"distance_sum_bound", 4.0}});
    r["results"] = {{"rows", rs.points},
                    {"csv", "three_sweep.csv"},
                    {"seed", seed},
                    {"samples", base.samples},
                    {"max_marginal_sharpness", max_a},
                    {"orthogonal_bound", bound}};
    detail::write_report(r, opt, "three_sweep_report.json");
    return 0;
}

/// Distance-sum joint-measurability check for three explicit direction
/// vectors. Config: "l", "m", "n" as [x,y,z]. Reports the minimizing point,
/// whether it is an anchor, the minimized total, and the largest common
/// scaling of the three directions that keeps the condition satisfied.
inline int cmd_ft_check(const Json& cfg, const CliOptions& opt) {
    Vec3 l = detail::get_vec3(detail::require(cfg, "l"), "l");
    Vec3 m = detail::get_vec3(detail::require(cfg, "m"), "m");
    Vec3 n = detail::get_vec3(detail::require(cfg, "n"), "n");
    NecessaryReport nr = check_necessary(l, m, n);

    Json anchors = Json::array();
    FtCondition c = ft_condition(l, m, n);
    for (const Vec3& a : c.anchors) anchors.push_back(detail::to_json(a));

    Json r = detail::envelope("ft-check", cfg,
                              {{"distance_sum_bound", 4.0}, {"weiszfeld_step_tol", 1e-12}});
    r["results"] = {{"anchors", anchors},
                    {"ft_point", detail::to_json(nr.ft.point)},
                    {"is_vertex", nr.ft.is_vertex},
                    {"vertex_index", nr.ft.vertex_index},
                    {"iterations", nr.ft.iterations},
                    {"residual", nr.ft.residual},
                    {"min_total", nr.min_total},
                    {"holds", nr.holds},
                    {"max_scale", nr.max_scale},
                    {"orthogonal", nr.orthogonal},
                    {"norm2_sum", nr.norm2_sum}};
    detail::write_report(r, opt, "ft_check_report.json");
    return 0;
}

/// Joint-measurability verdict for explicit joint-observable parameters.
/// Config: "type" = "two" with x, y, m, n and optional completion Z, z
/// (absent completion triggers a feasibility search), or "type" = "three"
/// with biases x, y, z, directions l, m, n, and optional Z1..Z4, z1..z4.
inline int cmd_jm_check(const Json& cfg, const CliOptions& opt) {
    std::string type = detail::require(cfg, "type").get<std::string>();
    Json r = detail::envelope("jm-check", cfg, {{"effect_validity", kEffectTol},
                                                {"completion_feasibility", 1e-5}});
    if (type == "two") {
        double x = detail::get_number_or(cfg, "x", 0.0);
        double y = detail::get_number_or(cfg, "y", 0.0);
        Vec3 m = detail::get_vec3(detail::require(cfg, "m"), "m");
        Vec3 n = detail::get_vec3(detail::require(cfg, "n"), "n");
        if (!unsharp_is_valid({x, m}))
            throw ConfigError("jm-check: (x, m) is not a valid two-outcome observable");
        if (!unsharp_is_valid({y, n}))
            throw ConfigError("jm-check: (y, n) is not a valid two-outcome observable");

        JointObservable2 j{x, y, m, n, 0.0, Vec3{}};
        bool searched = false;
        if (cfg.contains("Z") || cfg.contains("z")) {
            j.Z = detail::get_number_or(cfg, "Z", 0.0);
            if (cfg.contains("z")) j.z = detail::get_vec3(cfg["z"], "z");
        } else {
            searched = true;
            Joint2Completion comp = find_joint2_completion(x, y, m, n);
            j.Z = comp.Z;
            j.z = comp.z;
        }
        double viol = joint2_violation(j);
        bool valid = joint2_is_valid(j, searched ? 1e-5 : kEffectTol);

        const char* labels[4] = {"++", "+-", "-+", "--"};
        std::array<Effect, 4> effs = build_joint2(j);
        Json outcomes;
        for (int k = 0; k < 4; ++k) outcomes[labels[k]] = effect_violation(effs[k]);
        Json res = {{"jointly_measurable", valid},
                    {"completion_searched", searched},
                    {"Z", j.Z},
                    {"z", detail::to_json(j.z)},
                    {"max_violation", viol},
                    {"outcome_violations", outcomes}};
        if (x == 0.0 && y == 0.0) {
            res["unbiased_criterion"] = (m + n).norm() + (m - n).norm();
            res["unbiased_bound"] = 2.0;
        }
        r["results"] = res;
    } else if (type == "three") {
        JointObservable3 j;
        j.x = detail::get_number_or(cfg, "x", 0.0);
        j.y = detail::get_number_or(cfg, "y", 0.0);
        j.z = detail::get_number_or(cfg, "z", 0.0);
        j.l = detail::get_vec3(detail::require(cfg, "l"), "l");
        j.m = detail::get_vec3(detail::require(cfg, "m"), "m");
        j.n = detail::get_vec3(detail::require(cfg, "n"), "n");
        j.Z1 = detail::get_number_or(cfg, "Z1", 0.0);
        j.Z2 = detail::get_number_or(cfg, "Z2", 0.0);
        j.Z3 = detail::get_number_or(cfg, "Z3", 0.0);
        j.Z4 = detail::get_number_or(cfg, "Z4", 0.0);
        for (const char* k : {"z1", "z2", "z3", "z4"}) {
            if (!cfg.contains(k)) continue;
            Vec3 v = detail::get_vec3(cfg[k], k);
            if (k[1] == '1') j.z1 = v;
            else if (k[1] == '2') j.z2 = v;
            else if (k[1] == '3') j.z3 = v;
            else j.z4 = v;
        }
        double viol = joint3_violation(j);
        std::array<Effect, 8> effs = build_joint3(j);
        Json outcomes;
        for (int k = 0; k < 8; ++k)
            outcomes[ajm::detail::outcome_label3(k)] = effect_violation(effs[k]);
        Json res = {{"jointly_measurable", joint3_is_valid(j)},
                    {"max_violation", viol},
                    {"outcome_violations", outcomes}};
        if (j.x == 0.0 && j.y == 0.0 && j.z == 0.0) {
            NecessaryReport nr = check_necessary(j.l, j.m, j.n);
            res["necessary_min_total"] = nr.min_total;
            res["necessary_holds"] = nr.holds;
            if (nr.orthogonal) res["norm2_sum"] = nr.norm2_sum;
        }
        r["results"] = res;
    } else {
        throw ConfigError("config: type must be \"two\" or \"three\"");
    }
    detail::write_report(r, opt, "jm_check_report.json");
    return 0;
}

/// Runs one named subcommand with exceptions mapped to exit codes:
/// 0 success, 2 configuration error, 3 numerical failure.
inline int dispatch(const std::string& command, const CliOptions& opt, std::ostream& err) {
    try {
        std::filesystem::create_directories(opt.out_dir);
        Json cfg = load_config(opt.config_path);
        if (command == "sweep-aprime") return cmd_sweep_aprime(cfg, opt);
        if (command == "post-state") return cmd_post_state(cfg, opt);
        if (command == "fidelities") return cmd_fidelities(cfg, opt);
        if (command == "oblique") return cmd_oblique(cfg, opt);
        if (command == "three-sweep") return cmd_three_sweep(cfg, opt);
        if (command == "ft-check") return cmd_ft_check(cfg, opt);
        if (command == "jm-check") return cmd_jm_check(cfg, opt);
        throw ConfigError("unknown command " + command);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cli
}  // namespace ajm
