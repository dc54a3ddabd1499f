#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "ajm/cli.hpp"

namespace fs = std::filesystem;
using ajm::cli::CliOptions;
using Json = ajm::cli::Json;

namespace {

fs::path fresh_dir(const std::string& leaf) {
    fs::path d = fs::temp_directory_path() / "ajm_cli_tests" / leaf;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string write_cfg(const fs::path& dir, const std::string& name, const Json& cfg) {
    fs::path p = dir / name;
    std::ofstream f(p);
    f << cfg.dump(2) << "\n";
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

int run(const std::string& cmd, const std::string& cfg_path, const fs::path& out,
        std::string* err_text = nullptr, std::optional<std::uint64_t> seed = std::nullopt) {
    CliOptions opt;
    opt.config_path = cfg_path;
    opt.out_dir = out.string();
    opt.seed = seed;
    std::ostringstream err;
    int rc = ajm::cli::dispatch(cmd, opt, err);
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("margin sweep output is complete and reproducible", "[cli]") {
    fs::path d = fresh_dir("sweep");
    std::string cfg = write_cfg(d, "cfg.json", Json{{"sigma_a", 0.7}});

    REQUIRE(run("sweep-aprime", cfg, d / "out1") == 0);
    REQUIRE(run("sweep-aprime", cfg, d / "out2") == 0);

    std::string csv1 = slurp(d / "out1" / "sweep_aprime.csv");
    CHECK(csv1 == slurp(d / "out2" / "sweep_aprime.csv"));
    CHECK(slurp(d / "out1" / "sweep_aprime_report.json") ==
          slurp(d / "out2" / "sweep_aprime_report.json"));

    CHECK(csv1.rfind("sigma_a,sigma_b,a_prime,b_prime,lhs_uncertainty\n", 0) == 0);
    CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 2);
    CHECK(csv1.find(",") != std::string::npos);
    CHECK(csv1.find("0,7") == std::string::npos);  // decimal separator stays a point

    Json rep = read_json(d / "out1" / "sweep_aprime_report.json");
    CHECK(rep["command"] == "sweep-aprime");
    CHECK(rep["version"].get<std::string>() == ajm::kVersion);
    CHECK(rep["config"]["sigma_a"].get<double>() == 0.7);
    CHECK(rep["results"]["rows"].get<int>() == 1);
    CHECK(rep["results"]["max_a_prime"].get<double>() == Catch::Approx(0.6298190).margin(1e-6));

    // CSV numbers carry enough digits to round-trip the binary value.
    std::string row = csv1.substr(csv1.find('\n') + 1);
    std::size_t c1 = row.find(','), c2 = row.find(',', c1 + 1), c3 = row.find(',', c2 + 1);
    double a_prime = std::stod(row.substr(c2 + 1, c3 - c2 - 1));
    CHECK(a_prime == rep["results"]["max_a_prime"].get<double>());
}

TEST_CASE("sweep ranges pair up or broadcast", "[cli]") {
    fs::path d = fresh_dir("sweep_ranges");
    Json two = {{"sigma_a", {{"start", 0.4}, {"stop", 0.7}, {"points", 2}}}, {"sigma_b", 0.7}};
    std::string cfg = write_cfg(d, "two.json", two);
    REQUIRE(run("sweep-aprime", cfg, d / "two") == 0);
    std::string csv = slurp(d / "two" / "sweep_aprime.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    std::string err;
    Json mismatch = {{"sigma_a", {{"start", 0.4}, {"stop", 0.7}, {"points", 2}}},
                     {"sigma_b", {{"start", 0.4}, {"stop", 0.7}, {"points", 3}}}};
    CHECK(run("sweep-aprime", write_cfg(d, "mismatch.json", mismatch), d / "m", &err) == 2);
    CHECK(err.rfind("config error:", 0) == 0);

    Json empty = {{"sigma_a", {{"start", 0.4}, {"stop", 0.7}, {"points", 0}}}};
    CHECK(run("sweep-aprime", write_cfg(d, "empty.json", empty), d / "e", &err) == 2);
    CHECK(err.find("range") != std::string::npos);

    Json reversed = {{"sigma_a", {{"start", 0.7}, {"stop", 0.4}, {"points", 3}}}};
    CHECK(run("sweep-aprime", write_cfg(d, "rev.json", reversed), d / "r", &err) == 2);
}

TEST_CASE("post-state command reports the conditional state", "[cli]") {
    fs::path d = fresh_dir("post_state");
    double rt2 = 1.0 / std::sqrt(2.0);
    Json cfg = {{"sigma_a", 0.7}, {"sigma_b", 0.7}, {"state", {rt2, rt2, 0.0}}};
    REQUIRE(run("post-state", write_cfg(d, "cfg.json", cfg), d / "out") == 0);

    Json rep = read_json(d / "out" / "post_state_report.json");
    const Json& res = rep["results"];
    CHECK(res["outcome"] == "++");
    double sum = 0.0;
    for (const char* k : {"++", "+-", "-+", "--"}) sum += res["probabilities"][k].get<double>();
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
    CHECK(res["probabilities"]["++"].get<double>() == Catch::Approx(0.472675).margin(1e-5));
    CHECK(res["bloch_magnitude"].get<double>() == Catch::Approx(0.448744).margin(1e-5));
    CHECK(res["uncertainty_product"].get<double>() == Catch::Approx(0.899315).margin(1e-5));
    CHECK(res["angle_to_x_deg"].get<double>() == Catch::Approx(45.0).margin(1e-6));

    std::string err;
    Json bad = cfg;
    bad["outcome"] = "+x";
    CHECK(run("post-state", write_cfg(d, "bad.json", bad), d / "bad", &err) == 2);
    Json far = cfg;
    far["state"] = {1.0, 1.0, 0.0};
    CHECK(run("post-state", write_cfg(d, "far.json", far), d / "far", &err) == 2);
}

TEST_CASE("fidelities command distinguishes detector symmetry", "[cli]") {
    fs::path d = fresh_dir("fidelities");
    Json cfg = {{"sigma_a", 0.7}, {"sigma_b", 0.7}};
    REQUIRE(run("fidelities", write_cfg(d, "sym.json", cfg), d / "sym") == 0);
    Json rep = read_json(d / "sym" / "fidelities_report.json");
    const Json& res = rep["results"];
    CHECK(res["symmetric_detectors"].get<bool>());
    CHECK(res["eta_d"].get<double>() == Catch::Approx(0.75).margin(1e-6));
    CHECK(std::fabs(res["eta_i_difference"].get<double>()) <= 1e-3);
    CHECK(res["eta_f"].is_number());

    Json asym = {{"sigma_a", 0.4}, {"sigma_b", 0.9}};
    REQUIRE(run("fidelities", write_cfg(d, "asym.json", asym), d / "asym") == 0);
    Json rep2 = read_json(d / "asym" / "fidelities_report.json");
    CHECK_FALSE(rep2["results"]["symmetric_detectors"].get<bool>());
    CHECK(rep2["results"]["eta_f"].is_null());
    CHECK(rep2["results"]["delta_ef"].is_null());
    CHECK(rep2["results"]["eta_d"].get<double>() == Catch::Approx(0.75).margin(1e-6));
}

TEST_CASE("oblique command sweeps the angle and validates effects", "[cli]") {
    fs::path d = fresh_dir("oblique");
    Json cfg = {{"a_prime", 0.6},
                {"state", {0.3, -0.2, 0.5}},
                {"theta", {{"start", 0.1}, {"stop", 3.0}, {"points", 9}}}};
    REQUIRE(run("oblique", write_cfg(d, "cfg.json", cfg), d / "out") == 0);
    std::string csv = slurp(d / "out" / "oblique.csv");
    CHECK(csv.rfind("theta,p_pp,p_pm,p_mp,p_mm\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);

    // A strength above 2/pi stops being a POVM at small angles.
    std::string err;
    Json hot = {{"a_prime", 0.8}, {"state", {0.0, 0.0, 0.0}}, {"theta", 0.01}};
    CHECK(run("oblique", write_cfg(d, "hot.json", hot), d / "hot", &err) == 2);

    Json range = {{"a_prime", 0.6}, {"state", {0.0, 0.0, 0.0}}, {"theta", 3.5}};
    CHECK(run("oblique", write_cfg(d, "range.json", range), d / "range", &err) == 2);
}

TEST_CASE("three-detector sweep requires a seed and reproduces", "[cli]") {
    fs::path d = fresh_dir("three");
    Json cfg = {{"sigma", 0.7}, {"samples", 4096}, {"strata_per_axis", 4}};
    std::string cfg_path = write_cfg(d, "cfg.json", cfg);

    std::string err;
    CHECK(run("three-sweep", cfg_path, d / "noseed", &err) == 2);
    CHECK(err.find("seed") != std::string::npos);

    REQUIRE(run("three-sweep", cfg_path, d / "a", nullptr, 977) == 0);
    REQUIRE(run("three-sweep", cfg_path, d / "b", nullptr, 977) == 0);
    CHECK(slurp(d / "a" / "three_sweep.csv") == slurp(d / "b" / "three_sweep.csv"));
    CHECK(slurp(d / "a" / "three_sweep_report.json") ==
          slurp(d / "b" / "three_sweep_report.json"));

    // Seed can come from the config instead of the flag.
    Json seeded = cfg;
    seeded["seed"] = 977;
    REQUIRE(run("three-sweep", write_cfg(d, "seeded.json", seeded), d / "c") == 0);
    CHECK(slurp(d / "c" / "three_sweep.csv") == slurp(d / "a" / "three_sweep.csv"));

    Json rep = read_json(d / "a" / "three_sweep_report.json");
    CHECK(rep["results"]["seed"].get<std::uint64_t>() == 977);
    CHECK(rep["results"]["rows"].get<int>() == 1);
    std::string csv = slurp(d / "a" / "three_sweep.csv");
    CHECK(csv.rfind("sigma_1,sigma_2,sigma_3,a_prime,a_prime_stderr,b_prime,b_prime_stderr,"
                    "c_prime,c_prime_stderr,norm2_sum,orthogonal_bound,min_total,holds\n",
                    0) == 0);
}

TEST_CASE("ft-check reports the distance-sum condition", "[cli]") {
    fs::path d = fresh_dir("ft");
    Json cfg = {{"l", {0.5, 0.0, 0.0}}, {"m", {0.0, 0.5, 0.0}}, {"n", {0.0, 0.0, 0.5}}};
    REQUIRE(run("ft-check", write_cfg(d, "cfg.json", cfg), d / "out") == 0);
    Json res = read_json(d / "out" / "ft_check_report.json")["results"];
    CHECK(res["holds"].get<bool>());
    CHECK(res["orthogonal"].get<bool>());
    CHECK(res["norm2_sum"].get<double>() == Catch::Approx(0.75).margin(1e-12));
    CHECK(res["min_total"].get<double>() ==
          Catch::Approx(4.0 * std::sqrt(0.75)).epsilon(1e-9));
    CHECK(res["anchors"].size() == 4);
}

TEST_CASE("jm-check covers pairs and triples", "[cli]") {
    fs::path d = fresh_dir("jm");
    Json pair = {{"type", "two"}, {"m", {0.6, 0.0, 0.0}}, {"n", {0.0, 0.6, 0.0}}};
    REQUIRE(run("jm-check", write_cfg(d, "pair.json", pair), d / "pair") == 0);
    Json res = read_json(d / "pair" / "jm_check_report.json")["results"];
    CHECK(res["jointly_measurable"].get<bool>());
    CHECK(res["completion_searched"].get<bool>());
    CHECK(res["unbiased_criterion"].get<double>() ==
          Catch::Approx(2.0 * std::sqrt(0.72)).margin(1e-12));

    Json sharp = {{"type", "two"}, {"m", {1.0, 0.0, 0.0}}, {"n", {0.0, 1.0, 0.0}}};
    REQUIRE(run("jm-check", write_cfg(d, "sharp.json", sharp), d / "sharp") == 0);
    Json res2 = read_json(d / "sharp" / "jm_check_report.json")["results"];
    CHECK_FALSE(res2["jointly_measurable"].get<bool>());

    Json triple = {{"type", "three"},
                   {"l", {0.5, 0.0, 0.0}},
                   {"m", {0.0, 0.5, 0.0}},
                   {"n", {0.0, 0.0, 0.5}}};
    REQUIRE(run("jm-check", write_cfg(d, "triple.json", triple), d / "triple") == 0);
    Json res3 = read_json(d / "triple" / "jm_check_report.json")["results"];
    CHECK(res3["jointly_measurable"].get<bool>());
    CHECK(res3["necessary_holds"].get<bool>());
    CHECK(res3["norm2_sum"].get<double>() == Catch::Approx(0.75).margin(1e-12));

    std::string err;
    Json bad = {{"type", "four"}};
    CHECK(run("jm-check", write_cfg(d, "bad.json", bad), d / "bad", &err) == 2);
    Json missing = {{"type", "two"}, {"m", {0.5, 0.0, 0.0}}};
    CHECK(run("jm-check", write_cfg(d, "missing.json", missing), d / "miss", &err) == 2);
}

TEST_CASE("malformed configs exit with the configuration code", "[cli]") {
    fs::path d = fresh_dir("malformed");
    std::string err;
    CHECK(run("sweep-aprime", (d / "absent.json").string(), d / "o1", &err) == 2);
    CHECK(err.rfind("config error:", 0) == 0);

    fs::path garbled = d / "garbled.json";
    std::ofstream(garbled) << "{not json";
    CHECK(run("sweep-aprime", garbled.string(), d / "o2", &err) == 2);

    fs::path arr = d / "arr.json";
    std::ofstream(arr) << "[1, 2]";
    CHECK(run("sweep-aprime", arr.string(), d / "o3", &err) == 2);

    std::string ok = write_cfg(d, "ok.json", Json{{"sigma_a", 0.7}});
    CHECK(run("mystery", ok, d / "o4", &err) == 2);
    CHECK(err.find("unknown command") != std::string::npos);
}
