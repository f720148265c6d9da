#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string kCli = CUBICW_CLI_PATH;
const std::string kTmp = CUBICW_TEST_TMPDIR;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

int run_env(const std::string& env, const std::string& args) {
    const std::string cmd = env + " " + kCli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// file contents with the volatile timestamp line removed
std::string strip_timestamp(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp=", 0) == 0) continue;
        out << line << "\n";
    }
    return out.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("phase finds the classical double well") {
    const std::string out = kTmp + "/cli_phase.csv";
    CHECK(run("phase --K 0 --J 2 --out " + out) == 0);
    const auto rows = csv_rows(slurp(out));
    REQUIRE(rows.size() == 4);  // header + three stationary points
    CHECK(rows[0][0] == "m");
    CHECK(std::stod(rows[1][0]) == doctest::Approx(-0.9575).epsilon(1e-3));
    CHECK(std::stod(rows[2][0]) == 0.0);
    CHECK(std::stod(rows[3][0]) == doctest::Approx(0.9575).epsilon(1e-3));
    CHECK(slurp(out).find("phase_label=coexistence") != std::string::npos);
}

TEST_CASE("be emits the documented columns and a sane fit") {
    const std::string out = kTmp + "/cli_be.csv";
    CHECK(run("be --K 0.2 --J 0.5 --n-grid 1024:8192:x2 --out " + out) == 0);
    const std::string text = slurp(out);
    const auto rows = csv_rows(text);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"n", "K", "J", "dK", "bound_term1", "bound_term2",
                                              "bound_term3", "be_bound"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][3]) > 0.0);
        CHECK(std::stod(rows[i][7]) >= std::stod(rows[i][3]));
    }
    const auto fitpos = text.find("# fit: slope=");
    REQUIRE(fitpos != std::string::npos);
    const double slope = std::stod(text.substr(fitpos + 13));
    CHECK(slope < -0.3);
    CHECK(slope > -0.7);
}

TEST_CASE("deterministic commands reproduce bit for bit modulo timestamp") {
    const std::string out1 = kTmp + "/cli_law1.csv";
    const std::string out2 = kTmp + "/cli_law2.csv";
    CHECK(run("law --K 0.2 --J 0.9 --n 500 --out " + out1) == 0);
    CHECK(run("law --K 0.2 --J 0.9 --n 500 --out " + out2) == 0);
    CHECK(strip_timestamp(slurp(out1)) == strip_timestamp(slurp(out2)));
    CHECK(slurp(out1).find("# config_hash=") != std::string::npos);
}

TEST_CASE("sampler reproducibility through the CLI") {
    const std::string out1 = kTmp + "/cli_s1.csv";
    const std::string out2 = kTmp + "/cli_s2.csv";
    CHECK(run("sample --K 0 --J 0 --n 10 --samples 200 --seed 7 --out " + out1) == 0);
    CHECK(run("sample --K 0 --J 0 --n 10 --samples 200 --seed 7 --out " + out2) == 0);
    CHECK(strip_timestamp(slurp(out1)) == strip_timestamp(slurp(out2)));
}

TEST_CASE("exit codes") {
    SUBCASE("usage errors exit 2") {
        CHECK(run("law --K 0.2") == 2);              // missing required flags
        CHECK(run("law --K 0.2 --J 0.5 --n 0") == 2);  // n < 1
        CHECK(run("frobnicate") == 2);
        CHECK(run("be --K 0.2 --J 0.5 --n-grid 8:4:x2") == 2);
    }
    SUBCASE("unconditioned coexistence exits 3") {
        CHECK(run("cramer --K 0 --J 2 --n-grid 512") == 3);
        CHECK(run("be --K 0 --J 2 --n-grid 512") == 3);
    }
    SUBCASE("conditioning resolves the coexistence") {
        CHECK(run("cramer --K 0 --J 2 --n-grid 512 --m-lo 0.5 --m-hi 1") == 0);
    }
    SUBCASE("numerical guard failures exit 4") {
        CHECK(run("gamma --K-grid 0.3 --j-lo 0.96 --j-hi 0.99") == 4);
        CHECK(run("gamma --K-grid 0.001 --j-lo 0 --j-hi 0.9") == 4);
    }
    SUBCASE("help exits 0") {
        CHECK(run("--help") == 0);
        CHECK(run("be --help") == 0);
    }
}

TEST_CASE("concentration rows all hold") {
    const std::string out = kTmp + "/cli_conc.csv";
    CHECK(run("concentration --K 0.5 --J 0.8 --n 1000 --t 0.5:5:0.5 --out " + out) == 0);
    const auto rows = csv_rows(slurp(out));
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == "true");
}

TEST_CASE("gamma table rides toward the critical point") {
    const std::string out = kTmp + "/cli_gamma.csv";
    CHECK(run("gamma --K-grid 0.3:0.5:0.2 --out " + out) == 0);
    const auto rows = csv_rows(slurp(out));
    REQUIRE(rows.size() == 3);
    const double g_03 = std::stod(rows[1][1]);
    const double g_05 = std::stod(rows[2][1]);
    CHECK(g_03 > g_05);
    CHECK(std::stod(rows[1][4]) <= 1e-10);
}

TEST_CASE("CUBICW_OUTDIR redirects relative outputs") {
    const std::string dir = kTmp + "/outdir_redirect";
    CHECK(run_env("CUBICW_OUTDIR=" + dir, "law --K 0.1 --J 0.4 --n 20 --out nested/law.csv") == 0);
    CHECK(!slurp(dir + "/nested/law.csv").empty());
}

TEST_CASE("config file values are overridden by CLI flags") {
    const std::string cfg = kTmp + "/cli_cfg.ini";
    {
        std::ofstream os(cfg);
        os << "[law]\nK=0.5\nJ=0.9\nn=50\n";
    }
    const std::string out = kTmp + "/cli_cfg_out.csv";
    CHECK(run("--config " + cfg + " law --K 0.2 --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("K=0.2") != std::string::npos);   // flag wins
    CHECK(text.find("J=0.9") != std::string::npos);   // file supplies the rest
    CHECK(text.find("n=50") != std::string::npos);
}

TEST_CASE("stein report JSON carries the bound terms") {
    const std::string out = kTmp + "/cli_stein.json";
    const std::string dens = kTmp + "/cli_density.csv";
    CHECK(run("stein --K 0.2 --J 0.5 --n 2048 --density-table " + dens + " --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"be_bound\"") != std::string::npos);
    CHECK(text.find("\"lambda\"") != std::string::npos);
    CHECK(text.find("\"hypothesis_ok\": true") != std::string::npos);

    const auto drows = csv_rows(slurp(dens));
    REQUIRE(drows.size() > 100);
    CHECK(drows[0] == std::vector<std::string>{"y", "pdf", "cdf"});
    // cdf column is monotone
    double prev = -1.0;
    for (std::size_t i = 1; i < drows.size(); ++i) {
        const double c = std::stod(drows[i][2]);
        CHECK(c >= prev - 1e-12);
        prev = c;
    }
}

TEST_CASE("law export carries pmf and cdf columns") {
    const std::string out = kTmp + "/cli_law_cdf.csv";
    CHECK(run("law --K 0 --J 0 --n 2 --out " + out) == 0);
    const auto rows = csv_rows(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"s", "pmf", "cdf"});
    CHECK(std::stod(rows[1][1]) == doctest::Approx(0.25));
    CHECK(std::stod(rows[2][2]) == doctest::Approx(0.75));
    CHECK(std::stod(rows[3][2]) == 1.0);
}

TEST_CASE("threshold exploration is labeled non-certified") {
    const std::string out = kTmp + "/cli_explore.csv";
    CHECK(run("threshold --explore-alpha0 --n-grid 256:1024:x2 --out " + out) == 0);
    CHECK(slurp(out).find("non-certified") != std::string::npos);
}
