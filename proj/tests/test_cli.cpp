#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(STOPGRID_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("stopgrid_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

} // namespace

TEST_CASE("solve writes its three outputs and reruns byte-identically") {
    TempDir dir;
    const std::string flags =
        "solve --total-learning 1 --grid 1001 --out " + dir.path.string();
    REQUIRE(run(flags) == 0);
    const std::string boundaries = slurp(dir.path / "boundaries.csv");
    const std::string curves = slurp(dir.path / "curves.csv");
    const std::string manifest = slurp(dir.path / "manifest.json");
    CHECK(boundaries.find("\r") == std::string::npos); // LF line endings
    CHECK(boundaries.substr(0, 48).find("run_id,n,u_n,b_n,pi0_n,a_n,smooth_fit_residual") !=
          std::string::npos);

    REQUIRE(run(flags) == 0);
    CHECK(slurp(dir.path / "boundaries.csv") == boundaries);
    CHECK(slurp(dir.path / "curves.csv") == curves);
    CHECK(slurp(dir.path / "manifest.json") == manifest);

    const auto rows = read_csv(dir.path / "boundaries.csv");
    REQUIRE(rows.size() == 11); // header + 10 levels
    CHECK(std::abs(std::stod(rows[1][3]) - 0.743975018237) < 1e-4);
}

TEST_CASE("invalid parameters exit with code 2") {
    TempDir dir;
    CHECK(run("solve --sigma -1 --eps 0.1 --out " + dir.path.string()) == 2);
    CHECK(run("solve --out " + dir.path.string()) == 2); // no eps/total-learning
    CHECK(run("solve --eps 0.1 --total-learning 1 --out " + dir.path.string()) == 2);
    CHECK(run("figures --figure 9 --outdir " + dir.path.string()) == 2);
    CHECK(run("nonsense") == 2);
}

TEST_CASE("STOPGRID_OUTDIR provides the default output directory") {
    TempDir dir;
    const std::string cmd = "STOPGRID_OUTDIR=" + dir.path.string() + " " +
                            STOPGRID_CLI_PATH +
                            " solve --total-learning 1 --grid 501 --N 2 "
                            "> /dev/null 2> /dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir.path / "boundaries.csv"));
    CHECK(fs::exists(dir.path / "manifest.json"));
}

TEST_CASE("config file mirrors flags and explicit flags win") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << "# comment line\n"
                       << "total-learning = 1\n"
                       << "sigma=10\n"
                       << "grid=501\n";
    REQUIRE(run("solve --config " + cfg.string() + " --out " + dir.path.string()) == 0);
    auto rows = read_csv(dir.path / "boundaries.csv");
    CHECK(std::abs(std::stod(rows[1][3]) - 0.60911) < 1e-3); // sigma=10 boundary

    REQUIRE(run("solve --config " + cfg.string() + " --sigma 4 --out " +
                dir.path.string()) == 0);
    rows = read_csv(dir.path / "boundaries.csv");
    CHECK(std::abs(std::stod(rows[1][3]) - 0.743975) < 1e-3); // flag overrode file
}

TEST_CASE("verify passes on the baseline and exits 1 on sabotaged boundaries") {
    TempDir dir;
    const std::string base =
        "verify --total-learning 1 --grid 1001 --paths 3000 --dt 5e-3 "
        "--cutoff 1e-4 --seed 3 --start-pi 0.3 --out " +
        dir.path.string();
    CHECK(run(base) == 0);
    CHECK(fs::exists(dir.path / "verify_report.json"));

    const fs::path bad = dir.path / "bad_boundaries.txt";
    std::ofstream os(bad);
    for (int n = 0; n < 10; ++n) os << 0.95 << "\n";
    os.close();
    CHECK(run(base + " --boundaries-file " + bad.string()) == 1);
}

TEST_CASE("sweep emits monotone boundaries and a passing summary") {
    TempDir dir;
    REQUIRE(run("sweep --axis sigma --values 1,4,10 --total-learning 1 --grid 1001 "
                "--out " +
                dir.path.string()) == 0);
    const auto rows = read_csv(dir.path / "sweep.csv");
    REQUIRE(rows.size() > 31); // header + 30 level rows + summary
    double prev_b1 = 1.0;
    bool summary_seen = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row[0] == "summary") {
            summary_seen = true;
            CHECK(row.back().find(": pass") != std::string::npos);
            continue;
        }
        if (row[4] == "1") { // n = 1 rows carry the closed-form boundary
            const double b1 = std::stod(row[6]);
            CHECK(b1 < prev_b1);
            prev_b1 = b1;
        }
        CHECK(row.back() == "ok");
    }
    CHECK(summary_seen);
}

TEST_CASE("figure 7 reproduces the derived fractions exactly") {
    TempDir dir;
    REQUIRE(run("figures --figure 7 --grid 501 --outdir " + dir.path.string()) == 0);
    const auto rows = read_csv(dir.path / "fig7_boundaries.csv");
    REQUIRE(rows.size() > 1);
    const std::vector<std::pair<double, double>> expected = {
        {5.0 / 6.0, 1.5}, {2.0 / 3.0, 0.75}, {0.5, 0.5}, {1.0 / 3.0, 0.75},
        {1.0 / 6.0, 1.5}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const int runidx = std::stoi(rows[i][1]);
        const double k = std::stod(rows[i][3]);
        const double rho = std::stod(rows[i][4]);
        // 12-significant-digit CSV round trip of the exact double fractions
        CHECK(std::abs(k - expected[static_cast<std::size_t>(runidx)].first) < 1e-12);
        CHECK(std::abs(rho - expected[static_cast<std::size_t>(runidx)].second) < 1e-12);
    }
}

TEST_CASE("figure 1 curves stay between their bounds") {
    TempDir dir;
    REQUIRE(run("figures --figure 1 --grid 501 --outdir " + dir.path.string()) == 0);
    const auto rows = read_csv(dir.path / "fig1_curves.csv");
    REQUIRE(rows.size() == 502);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v1 = std::stod(rows[i][1]);
        const double f1 = std::stod(rows[i][2]);
        const double lo = std::stod(rows[i][3]);
        const double hi = std::stod(rows[i][4]);
        CHECK(v1 >= lo - 1e-9);
        CHECK(v1 <= f1 + 1e-9);
        CHECK(f1 <= hi + 1e-9);
    }
}
