#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("missing column " + name);
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PARAMOSC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

Csv read_csv(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    Csv csv;
    std::string line;
    REQUIRE(std::getline(in, line));
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) csv.header.push_back(cell);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            double v = std::numeric_limits<double>::quiet_NaN();
            if (cell != "nan") std::from_chars(cell.data(), cell.data() + cell.size(), v);
            row.push_back(v);
        }
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string tmp = []() {
    const auto dir = fs::temp_directory_path() / "paramosc_cli_test";
    fs::create_directories(dir);
    return dir.string();
}();

}  // namespace

TEST_CASE("trajectory: tt variant ends on the target energy shell") {
    const std::string out = tmp + "/traj_tt.csv";
    REQUIRE(run_cli("trajectory --schedule cubic --t0 0 --tf 0.5 --omega0 2 --omegaf 4 "
                    "--variant tt --rel-tol 1e-10 --samples 500 --out " + out) == 0);
    const auto csv = read_csv(out);
    REQUIRE(csv.rows.size() == 500);
    const auto& last = csv.rows.back();
    CHECK(last[csv.col("e_mu")] == Catch::Approx(1.0).margin(1e-6));
    CHECK(last[csv.col("e_nu")] == Catch::Approx(4.0).margin(1e-6));
    CHECK(last[csv.col("wronskian")] == Catch::Approx(1.0).margin(1e-8));
    CHECK(fs::exists(out + ".meta.json"));
}

TEST_CASE("trajectory: slow adiabatic ramp final energy regression") {
    const std::string out = tmp + "/traj_ad.csv";
    REQUIRE(run_cli("trajectory --schedule cubic --t0 0 --tf 2 --omega0 2 --omegaf 4 "
                    "--variant adiabatic --rel-tol 1e-10 --samples 400 --out " + out) == 0);
    const auto csv = read_csv(out);
    const auto& last = csv.rows.back();
    // frozen scipy baseline; the slow ramp lands ~9% above the adiabatic target
    CHECK(last[csv.col("e_mu")] == Catch::Approx(1.091561928055308).margin(1e-6));
    CHECK(std::abs(last[csv.col("e_mu")] - 1.0) < 0.15);
}

TEST_CASE("trajectory: constant schedule closes its ellipse after one period") {
    const double period = 2.0 * std::numbers::pi / 3.0;
    std::ostringstream cmd;
    cmd.precision(17);
    cmd << "trajectory --schedule constant --t0 0 --tf " << period
        << " --omega0 3 --variant tt --samples 300 --out " << tmp << "/traj_const.csv";
    REQUIRE(run_cli(cmd.str()) == 0);
    const auto csv = read_csv(tmp + "/traj_const.csv");
    const auto& first = csv.rows.front();
    const auto& last = csv.rows.back();
    CHECK(std::abs(first[csv.col("mu")] - last[csv.col("mu")]) < 1e-6);
    CHECK(std::abs(first[csv.col("mu_dot")] - last[csv.col("mu_dot")]) < 1e-6);
}

TEST_CASE("qfactor: endpoint unity and invariants for all three ramps") {
    for (const std::string tf : {"0.2", "0.5", "2"}) {
        const std::string out = tmp + "/qf_" + tf + ".csv";
        REQUIRE(run_cli("qfactor --tf " + tf + " --samples 400 --out " + out) == 0);
        const auto csv = read_csv(out);
        const auto& last = csv.rows.back();
        CHECK(last[csv.col("q_tt")] == Catch::Approx(1.0).margin(1e-6));
        CHECK(csv.rows.front()[csv.col("q_tt")] == Catch::Approx(1.0).margin(1e-6));
        CHECK(last[csv.col("e_mu_over_Omega")] == Catch::Approx(0.25).margin(1e-6));
        CHECK(last[csv.col("e_nu_over_Omega")] == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("qfactor: fast ramp has undefined entries, values finite on both sides") {
    const std::string out = tmp + "/qf_fast.csv";
    REQUIRE(run_cli("qfactor --tf 0.2 --samples 500 --out " + out) == 0);
    const auto csv = read_csv(out);
    const auto dcol = csv.col("defined");
    const auto qcol = csv.col("q_tt");
    std::size_t first_undef = 0, last_undef = 0;
    bool any_undef = false;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        if (csv.rows[i][dcol] == 0.0) {
            if (!any_undef) first_undef = i;
            last_undef = i;
            any_undef = true;
            CHECK(std::isnan(csv.rows[i][qcol]));
        }
    }
    REQUIRE(any_undef);
    REQUIRE(first_undef > 0);
    REQUIRE(last_undef + 1 < csv.rows.size());
    CHECK(std::isfinite(csv.rows[first_undef - 1][qcol]));
    CHECK(std::isfinite(csv.rows[last_undef + 1][qcol]));
}

TEST_CASE("probabilities: unity at the endpoints, gap in between for tf=0.2") {
    const std::string out = tmp + "/prob_fast.csv";
    REQUIRE(run_cli("probabilities --tf 0.2 --samples 500 --out " + out) == 0);
    const auto csv = read_csv(out);
    const auto& first = csv.rows.front();
    const auto& last = csv.rows.back();
    for (const char* c : {"p00_tt", "p11_tt", "p00_ad", "p11_ad"})
        CHECK(first[csv.col(c)] == Catch::Approx(1.0).margin(1e-6));
    CHECK(last[csv.col("p00_tt")] == Catch::Approx(1.0).margin(1e-6));
    CHECK(last[csv.col("p11_tt")] == Catch::Approx(1.0).margin(1e-6));
    // the undriven oscillator does not return to unity on a fast ramp
    CHECK(last[csv.col("p00_ad")] < 1.0 - 1e-3);
    bool any_gap = false;
    for (const auto& row : csv.rows)
        if (row[csv.col("defined")] == 0.0) {
            any_gap = true;
            CHECK(std::isnan(row[csv.col("p00_tt")]));
            CHECK(std::isfinite(row[csv.col("p00_ad")]));  // Q* needs no discrete spectrum
        }
    CHECK(any_gap);
}

TEST_CASE("byte-stable output on identical configuration") {
    const std::string out1 = tmp + "/stable1.csv", out2 = tmp + "/stable2.csv";
    const std::string args = "qfactor --tf 0.5 --samples 200 --out ";
    REQUIRE(run_cli(args + out1) == 0);
    REQUIRE(run_cli(args + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("schedule JSON round trip") {
    const std::string sched_path = tmp + "/sched.json";
    {
        std::ofstream out(sched_path);
        out << R"({"kind": "cubic", "t0": 0.0, "tf": 0.5, "omega0": 2.0, "omegaf": 4.0})";
    }
    const std::string out_a = tmp + "/from_json.csv", out_b = tmp + "/from_flags.csv";
    REQUIRE(run_cli("trajectory --schedule " + sched_path + " --variant tt --out " + out_a) ==
            0);
    REQUIRE(run_cli("trajectory --schedule cubic --t0 0 --tf 0.5 --omega0 2 --omegaf 4 "
                    "--variant tt --out " + out_b) == 0);
    CHECK(slurp(out_a) == slurp(out_b));
}

TEST_CASE("verify: default passes, negative control fails") {
    CHECK(run_cli("verify") == 0);
    CHECK(run_cli("verify --negative-control") == 1);
}

TEST_CASE("probabilities --table-out writes the structured table document") {
    const std::string out = tmp + "/prob_tbl.csv";
    const std::string table = tmp + "/table.json";
    REQUIRE(run_cli("probabilities --tf 0.5 --samples 50 --n-max 12 --table-at 0.25 "
                    "--table-out " + table + " --out " + out) == 0);
    const std::string doc = slurp(table);
    CHECK(doc.find("\"q\": 1.0606601717798212") != std::string::npos);
    CHECK(doc.find("\"n_max\": 12") != std::string::npos);
    CHECK(doc.find("\"defined\": true") != std::string::npos);
    CHECK(doc.find("\"probs\"") != std::string::npos);
    const auto csv = read_csv(tmp + "/table.csv");
    REQUIRE(csv.rows.size() == 13);
    REQUIRE(csv.header.size() == 14);  // m + n0..n12
    CHECK(csv.rows[0][1] == Catch::Approx(0.98517143100941604).epsilon(1e-12));
    CHECK(csv.rows[1][1] == 0.0);  // parity zero
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(run_cli("trajectory --tf -1 --out " + tmp + "/bad.csv") == 2);
    CHECK(run_cli("trajectory --variant bogus --out " + tmp + "/bad.csv") == 2);
    CHECK(run_cli("trajectory") == 2);              // missing --out
    CHECK(run_cli("unknown-subcommand") == 2);
    CHECK(run_cli("trajectory --schedule /nonexistent.json --out " + tmp + "/bad.csv") == 2);
}
