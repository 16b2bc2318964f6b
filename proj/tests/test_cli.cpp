#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PARSOL_CLI;
const std::string kData = PARSOL_DATA_DIR;

struct Run {
    int exit_code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string out_file = "cli_test_stdout.txt";
    const std::string cmd = kCli + " " + args + " >" + out_file + " 2>&1";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / "parsol_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string p(const std::string& name) const { return (dir / name).string(); }
};

} // namespace

TEST_CASE("cli pipeline from footprints to suitability") {
    Workspace ws;
    const std::string scene = ws.p("scene.json");

    auto built = run("build-model --footprints " + kData + "/studyarea_footprints.json" +
                     " --output " + scene);
    REQUIRE(built.exit_code == 0);
    CHECK(built.out.find("Block633") != std::string::npos);
    CHECK(built.out.find("45.60") != std::string::npos);
    CHECK(fs::exists(scene));

    auto sun = run("sunpath --lat 1.35 --lon 103.7 --utc-offset 8 --date 2019-03-17 --output " +
                   ws.p("sunpath.csv"));
    REQUIRE(sun.exit_code == 0);
    const auto sun_csv = slurp(ws.p("sunpath.csv"));
    CHECK(line_count(sun_csv) == 26); // header + 25 samples
    CHECK(sun_csv.find("time,azimuth,elevation") == 0);

    auto shadow = run("shadowmap --scene " + scene +
                      " --facade W --date 2019-03-17 --lat 1.35 --lon 103.7 --utc-offset 8" +
                      " --window 7-19 --out " + ws.dir.string());
    REQUIRE(shadow.exit_code == 0);
    const auto shadow_csv = slurp(ws.p("shadow_W_2019-03-17_07h00-19h00.csv"));
    CHECK(line_count(shadow_csv) == 258); // meta + header + 256 cells

    auto par = run("par --scene " + scene +
                   " --facade W --date 2019-03-17 --time 14:00 --sky sunny" +
                   " --lat 1.35 --lon 103.7 --utc-offset 8 --samples 256 --out " +
                   ws.dir.string());
    REQUIRE(par.exit_code == 0);
    CHECK(fs::exists(ws.p("par_W_2019-03-17_14-00.csv")));

    auto dli = run("dli --scene " + scene + " --epw " + kData + "/singapore_tmy.epw" +
                   " --facade W --month 3 --samples 256 --out " + ws.dir.string());
    REQUIRE(dli.exit_code == 0);
    CHECK(dli.out.find("levels_above_9") != std::string::npos);
    const std::string dli_csv = ws.p("dli_W_month3.csv");
    REQUIRE(fs::exists(dli_csv));
    CHECK(line_count(slurp(dli_csv)) == 258);

    auto suit = run("suitability --dli " + dli_csv + " --crops " + kData + "/crops.csv" +
                    " --out " + ws.dir.string());
    REQUIRE(suit.exit_code == 0);
    CHECK(suit.out.find("levels exceeding 9") != std::string::npos);
    CHECK(fs::exists(ws.p("suitability.csv")));
    CHECK(fs::exists(ws.p("suitability_crops.csv")));
    CHECK(slurp(ws.p("suitability_crops.csv")).find("lettuce") != std::string::npos);
}

TEST_CASE("cli validate joins sensors with simulated series") {
    Workspace ws;
    const std::string scene = ws.p("scene.json");
    REQUIRE(run("build-model --footprints " + kData + "/studyarea_footprints.json" +
                " --output " + scene)
                .exit_code == 0);

    auto s1 = run("par --scene " + scene + " --facade B --date 2019-03-17 --series" +
                  " --cell 8,4 --epw " + kData + "/singapore_tmy.epw --label 2559" +
                  " --samples 256 --out " + ws.dir.string());
    REQUIRE(s1.exit_code == 0);
    auto s2 = run("par --scene " + scene + " --facade B --date 2019-03-17 --series" +
                  " --cell 8,12 --epw " + kData + "/singapore_tmy.epw --label 8983-6" +
                  " --samples 256 --out " + ws.dir.string());
    REQUIRE(s2.exit_code == 0);

    // Merge both series into one file, keeping a single header block.
    {
        std::ofstream merged(ws.p("sim.csv"));
        merged << slurp(ws.p("par_series_2559.csv"));
        std::istringstream second(slurp(ws.p("par_series_8983-6.csv")));
        std::string line;
        while (std::getline(second, line))
            if (!line.empty() && line[0] != '#' && line.rfind("label,", 0) != 0)
                merged << line << "\n";
    }

    auto val = run("validate --measured " + kData + "/example_sensor_log.csv" +
                   " --simulated " + ws.p("sim.csv") +
                   " --date 2019-03-17 --default-calibration --out " + ws.dir.string());
    REQUIRE(val.exit_code == 0);
    const auto metrics = slurp(ws.p("validation_metrics.csv"));
    CHECK(metrics.find("sensor_id,n,rho,mae,rmse") != std::string::npos);
    CHECK(metrics.find("2559,12,") != std::string::npos);
    CHECK(metrics.find("8983-6,12,") != std::string::npos);
    CHECK(metrics.find("(pooled),24,") != std::string::npos);
}

TEST_CASE("cli maps bad input to exit 2") {
    Workspace ws;
    CHECK(run("dli --scene nothere.json --epw nothere.epw --month 3").exit_code == 2);
    CHECK(run("sunpath --lat 1.35 --lon 103.7 --utc-offset 8 --date 2019-13-01 --output " +
              ws.p("x.csv"))
              .exit_code == 2);
    CHECK(run("sunpath --date 2019-03-17 --output " + ws.p("x.csv")).exit_code == 2);
    CHECK(run("definitely-not-a-command").exit_code == 2);
    CHECK(run("shadowmap --scene x --facade W --date 2019-03-17").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("sunpath --help").exit_code == 0);
}

TEST_CASE("cli rejects conflicting mode flags") {
    Workspace ws;
    const std::string scene = ws.p("scene.json");
    REQUIRE(run("build-model --footprints " + kData + "/studyarea_footprints.json" +
                " --output " + scene)
                .exit_code == 0);
    // dli needs exactly one of month/annual
    CHECK(run("dli --scene " + scene + " --epw " + kData + "/singapore_tmy.epw").exit_code == 2);
    CHECK(run("dli --scene " + scene + " --epw " + kData +
              "/singapore_tmy.epw --month 3 --annual")
              .exit_code == 2);
    // par map mode without a sky source
    CHECK(run("par --scene " + scene +
              " --facade W --date 2019-03-17 --time 10:00 --lat 1.35 --lon 103.7" +
              " --utc-offset 8")
              .exit_code == 2);
}
