// End-to-end checks of the command-line front end: exit codes, artifact
// layout, strict config validation, and byte-stable reruns.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#ifndef PIA_CLI_BIN
#define PIA_CLI_BIN ""
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "pia_cli_test.log";
    const std::string cmd = std::string(PIA_CLI_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

std::string small_config(const std::string& extra = "") {
    return R"({
  "sigma": 2.0, "eta": 0.2, "alpha": 0.03,
  "x_min": 0.5, "x_max": 2.0, "y_min": 0.5, "y_max": 2.0,
  "n": 16, "tol1": 0.00001, "tol2": 0.001)" +
           extra + "\n}";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// convergence.csv with the wall_ms column removed; timings vary run to run.
std::string strip_wall_ms(const std::string& csv) {
    std::istringstream is(csv);
    std::string line, out;
    while (std::getline(is, line)) {
        const auto pos = line.rfind(',');
        out += line.substr(0, pos) + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("solve produces the full artifact set on a small grid") {
    const fs::path cfg = write_config("cli_small.json", small_config());
    const fs::path out = fs::temp_directory_path() / "pia_cli_out_solve";
    fs::remove_all(out);
    const RunResult r = run_cli("solve --config " + cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    for (const char* name : {"convergence.csv", "value.csv", "policy.csv", "qlc_report.csv",
                             "timing.csv", "MANIFEST"})
        CHECK(fs::exists(out / name));

    // header contract and the blank max_dv on step 0
    std::ifstream conv(out / "convergence.csv");
    std::string line;
    std::getline(conv, line);
    CHECK(line == "step,max_dpi,max_dv,point_updates,wall_ms");
    std::getline(conv, line);
    CHECK(line.substr(0, 2) == "0,");
    const auto first_comma = line.find(',');
    const auto second_comma = line.find(',', first_comma + 1);
    CHECK(line[second_comma + 1] == ',');  // empty max_dv cell

    std::ifstream value(out / "value.csv");
    std::getline(value, line);
    CHECK(line == "x,y,value");

    CHECK(read_file(out / "MANIFEST").find("status: complete") == 0);
}

TEST_CASE("solve reruns are byte-identical modulo wall clock") {
    const fs::path cfg = write_config("cli_small.json", small_config());
    const fs::path out1 = fs::temp_directory_path() / "pia_cli_rt1";
    const fs::path out2 = fs::temp_directory_path() / "pia_cli_rt2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out1.string()).exit_code == 0);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out2.string()).exit_code == 0);

    for (const char* name : {"value.csv", "policy.csv", "qlc_report.csv", "MANIFEST"})
        CHECK(read_file(out1 / name) == read_file(out2 / name));
    CHECK(strip_wall_ms(read_file(out1 / "convergence.csv")) ==
          strip_wall_ms(read_file(out2 / "convergence.csv")));
}

#ifdef PIA_CONFIG_DIR
TEST_CASE("shipped reference config solves in exactly five steps") {
    const fs::path cfg = fs::path(PIA_CONFIG_DIR) / "reference.json";
    REQUIRE(fs::exists(cfg));
    const fs::path out = fs::temp_directory_path() / "pia_cli_reference";
    fs::remove_all(out);
    const RunResult r = run_cli("solve --config " + cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    std::istringstream is(read_file(out / "convergence.csv"));
    std::string line;
    std::getline(is, line);  // header
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
}
#endif

TEST_CASE("config validation failures exit with code 2 and name the key") {
    SUBCASE("negative alpha") {
        const fs::path cfg = write_config("cli_bad_alpha.json", R"({"alpha": -1, "n": 16})");
        const RunResult r = run_cli("solve --config " + cfg.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("\"alpha\" must be positive") != std::string::npos);
    }
    SUBCASE("unknown key") {
        const fs::path cfg = write_config("cli_bad_key.json", R"({"n": 16, "tol3": 1.0})");
        const RunResult r = run_cli("solve --config " + cfg.string());
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("tol3") != std::string::npos);
    }
    SUBCASE("missing config file") {
        const RunResult r = run_cli("solve --config /nonexistent/nowhere.json");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("invalid scheme") {
        const fs::path cfg = write_config("cli_bad_scheme.json", small_config());
        const RunResult r = run_cli("solve --config " + cfg.string() + " --scheme sor");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("scheme") != std::string::npos);
    }
}

TEST_CASE("scheme override changes the sweep count but not the fixed point") {
    // n = 8 keeps the sweeps fast-converging so the 10*tol1 band applies
    const fs::path cfg = write_config("cli_eq.json", R"({
  "sigma": 2.0, "eta": 0.2, "alpha": 0.03,
  "x_min": 0.5, "x_max": 2.0, "y_min": 0.5, "y_max": 2.0,
  "n": 8, "tol1": 0.00001, "tol2": 0.001
})");
    const fs::path out_gs = fs::temp_directory_path() / "pia_cli_gs";
    const fs::path out_ja = fs::temp_directory_path() / "pia_cli_ja";
    fs::remove_all(out_gs);
    fs::remove_all(out_ja);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out_gs.string()).exit_code == 0);
    REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out_ja.string() +
                    " --scheme jacobi")
                .exit_code == 0);
    // same grid and headers; values agree to 10*tol1 (checked via parsed columns)
    std::istringstream gs(read_file(out_gs / "value.csv"));
    std::istringstream ja(read_file(out_ja / "value.csv"));
    std::string lg, lj;
    std::getline(gs, lg);
    std::getline(ja, lj);
    REQUIRE(lg == lj);
    double worst = 0.0;
    while (std::getline(gs, lg) && std::getline(ja, lj)) {
        const double vg = std::stod(lg.substr(lg.rfind(',') + 1));
        const double vj = std::stod(lj.substr(lj.rfind(',') + 1));
        worst = std::max(worst, std::abs(vg - vj));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("baseline prints both counts and writes the linear field") {
    const fs::path cfg = write_config("cli_small.json", small_config());
    const fs::path out = fs::temp_directory_path() / "pia_cli_base";
    fs::remove_all(out);
    const fs::path trace = fs::temp_directory_path() / "pia_cli_trace.csv";
    const RunResult r = run_cli("baseline --config " + cfg.string() + " --out " + out.string() +
                                " --trace " + trace.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out / "linear_value.csv"));
    CHECK(r.output.find("point updates") != std::string::npos);
    CHECK(r.output.find("24541704") != std::string::npos);
    CHECK(r.output.find("ratio") != std::string::npos);

    // the sweep trace has one row per sweep and a monotone tail
    std::istringstream is(read_file(trace));
    std::string line;
    std::getline(is, line);
    REQUIRE(line == "sweep,max_diff");
    int rows = 0;
    double last = 0.0;
    bool monotone_tail = true;
    int idx = 0;
    while (std::getline(is, line)) {
        const double diff = std::stod(line.substr(line.find(',') + 1));
        if (idx++ > 1 && diff > last) monotone_tail = false;
        last = diff;
        ++rows;
    }
    CHECK(rows > 10);
    CHECK(monotone_tail);
}

TEST_CASE("validate agrees at an interior probe and is exact on the boundary") {
    const fs::path cfg = write_config(
        "cli_mc.json",
        small_config(R"(,
  "mc": {"n_paths": 4000, "dt": 0.001, "seed": 11, "max_time": 200.0,
         "probes": [[1.25, 1.25], [0.5, 1.0]]})"));
    const fs::path out = fs::temp_directory_path() / "pia_cli_validate";
    fs::remove_all(out);
    const RunResult r = run_cli("validate --config " + cfg.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(out / "mc_check.csv"));

    std::istringstream is(read_file(out / "mc_check.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,policy,fdm_value,mc_mean,std_error,z_score,flagged");
    int rows = 0;
    bool boundary_exact = false;
    while (std::getline(is, line)) {
        ++rows;
        if (line.find("0.50000000,1.00000000") == 0) {
            // boundary probe: fdm = mc = g = 0 exactly
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            REQUIRE(cells.size() == 8);
            CHECK(std::stod(cells[3]) == 0.0);
            CHECK(std::stod(cells[4]) == 0.0);
            CHECK(cells[7] == "0");
            boundary_exact = true;
        }
    }
    CHECK(rows == 4);  // two probes x two policies
    CHECK(boundary_exact);
}

TEST_CASE("validate rejects probes outside the domain") {
    const fs::path cfg = write_config(
        "cli_mc_bad.json",
        small_config(R"(,
  "mc": {"n_paths": 100, "dt": 0.001, "probes": [[0.4, 1.0]]})"));
    const RunResult r = run_cli("validate --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("probe-outside-domain") != std::string::npos);
}

TEST_CASE("validate without an mc block is a config error") {
    const fs::path cfg = write_config("cli_no_mc.json", small_config());
    const RunResult r = run_cli("validate --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("mc") != std::string::npos);
}
