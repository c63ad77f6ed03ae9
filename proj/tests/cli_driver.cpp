// End-to-end checks of the installed `abc` binary: exit codes, artifact
// writing, reproducibility, and the machine-readable error JSON.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef ABC_BIN_PATH
#error "ABC_BIN_PATH must point at the abc binary"
#endif

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

CommandResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(ABC_BIN_PATH) + " " + args + " > " + out.string() + " 2> " +
                            err.string();
    const int rc = std::system(cmd.c_str());
    CommandResult res;
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    res.stdout_text = slurp(out);
    res.stderr_text = slurp(err);
    return res;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("abc_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const char* kToyConfig = R"(
[experiment]
algorithm = rejection
seed = 7

[model]
name = toy_mixture

[kernel]
family = uniform_ball
delta = 0.5

[algorithm]
n_target = 1000
)";

} // namespace

TEST_CASE("abc presets list names the shipped bundles") {
    const fs::path dir = fresh_dir("list");
    const auto res = run_cli("presets list", dir);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("toy_posteriors") != std::string::npos);
    CHECK(res.stdout_text.find("fossil_mini") != std::string::npos);
    CHECK(res.stdout_text.find("relative_box") != std::string::npos);
}

TEST_CASE("abc run writes artifacts, exits zero, and is reproducible") {
    const fs::path dir = fresh_dir("run");
    write_file(dir / "exp.ini", kToyConfig);
    const auto r1 = run_cli("run " + (dir / "exp.ini").string() + " --out " + (dir / "a").string(), dir);
    REQUIRE(r1.exit_code == 0);
    CHECK(fs::exists(dir / "a" / "samples.csv"));
    CHECK(fs::exists(dir / "a" / "diagnostics.json"));

    const auto r2 = run_cli("run " + (dir / "exp.ini").string() + " --out " + (dir / "b").string(), dir);
    REQUIRE(r2.exit_code == 0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(dir / "a" / "samples.csv") == slurp(dir / "b" / "samples.csv"));
}

TEST_CASE("abc run --seed changes the samples") {
    const fs::path dir = fresh_dir("seed");
    write_file(dir / "exp.ini", kToyConfig);
    const auto r1 = run_cli("run " + (dir / "exp.ini").string() + " --seed 1 --out " + (dir / "a").string(), dir);
    const auto r2 = run_cli("run " + (dir / "exp.ini").string() + " --seed 2 --out " + (dir / "b").string(), dir);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    std::ifstream a(dir / "a" / "samples.csv"), b(dir / "b" / "samples.csv");
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() != sb.str());
}

TEST_CASE("a bad config yields exit code 2 and issue JSON on stderr") {
    const fs::path dir = fresh_dir("bad");
    std::string bad = kToyConfig;
    bad.replace(bad.find("uniform_ball"), 12, "cauchy");
    write_file(dir / "bad.ini", bad);
    const auto res = run_cli("run " + (dir / "bad.ini").string() + " --out " + dir.string(), dir);
    CHECK(res.exit_code == 2);
    const auto err = nlohmann::json::parse(res.stderr_text);
    CHECK(err["error"]["type"] == "config");
    REQUIRE(err["error"]["issues"].size() == 1);
    CHECK(err["error"]["issues"][0]["kind"] == "unknown_name");
    CHECK(err["error"]["issues"][0]["field"] == "kernel.family");
}

TEST_CASE("a missing config file yields exit code 1 and error JSON") {
    const fs::path dir = fresh_dir("missing");
    const auto res = run_cli("run " + (dir / "nope.ini").string(), dir);
    CHECK(res.exit_code == 1);
    const auto err = nlohmann::json::parse(res.stderr_text);
    CHECK(err["error"]["type"] == "runtime");
}

TEST_CASE("abc oracle writes a density table") {
    const fs::path dir = fresh_dir("oracle");
    const auto res = run_cli("oracle toy_mixture --error gaussian --delta 0.1 --grid -10:10:501 --out " +
                                 dir.string() + " --file table.csv",
                             dir);
    REQUIRE(res.exit_code == 0);
    std::ifstream in(dir / "table.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "theta,normalized_density");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 501);
}

TEST_CASE("abc presets write materializes runnable configs") {
    const fs::path dir = fresh_dir("write");
    const auto res = run_cli("presets write relative_box --out " + dir.string(), dir);
    REQUIRE(res.exit_code == 0);
    CHECK(fs::exists(dir / "relative_box.ini"));
}
