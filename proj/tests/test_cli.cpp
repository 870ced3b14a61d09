#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewlab/config.hpp"
#include "skewlab/stage_io.hpp"

using namespace skewlab;
namespace fs = std::filesystem;

namespace {

// end-to-end through the installed binary; stdout/stderr are not the
// contract here, exit codes and files are
int run_cli(const std::string& args) {
    std::string cmd =
        std::string(SKEWLAB_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

const fs::path& scratch_root() {
    static fs::path p = [] {
        fs::path d = fs::temp_directory_path() /
                     ("skewlab_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("build then validate exit clean") {
    fs::path dir = scratch_root() / "ok";
    int rc = run_cli("build --config " + std::string(REFERENCE_CONFIG) +
                     " --out " + q(dir / "build") + " --max-stage 3");
    CHECK(rc == 0);
    fs::path stages_file = dir / "build" / "stages.json";
    REQUIRE(fs::exists(stages_file));
    CHECK(load_stages(stages_file.string()).size() == 4);

    rc = run_cli("validate --config " + std::string(REFERENCE_CONFIG) +
                 " --stages " + q(stages_file) + " --out " + q(dir / "val"));
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "val" / "certificate.json"));
}

TEST_CASE("missing config file exits 1") {
    int rc = run_cli("build --config /nonexistent/nowhere.json --out " +
                     q(scratch_root() / "none"));
    CHECK(rc == 1);
}

TEST_CASE("missing required flag is a usage error") {
    int rc = run_cli("build --out " + q(scratch_root() / "usage"));
    CHECK(rc != 0);
    CHECK(rc != 2);
    CHECK(rc != 3);
    CHECK(rc != 4);
}

TEST_CASE("family without contraction exits 2") {
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(reference_config_text());
    j["maps"][0]["b"] = "0";
    j["maps"][1]["b"] = "0";
    fs::path cfg = scratch_root() / "flat.json";
    spit(cfg, j.dump(2) + "\n");
    int rc = run_cli("build --config " + q(cfg) + " --out " +
                     q(scratch_root() / "flat_out") + " --max-stage 2");
    CHECK(rc == 2);
}

TEST_CASE("tampered stage file exits 3 and still writes the certificate") {
    fs::path dir = scratch_root() / "tamper";
    int rc = run_cli("build --config " + std::string(REFERENCE_CONFIG) +
                     " --out " + q(dir) + " --max-stage 3");
    REQUIRE(rc == 0);
    std::vector<Stage> st = load_stages((dir / "stages.json").string());
    REQUIRE(st.size() == 4);
    st[1].q += 0.001;
    fs::path bad = dir / "stages_tampered.json";
    save_stages(bad.string(), st);

    rc = run_cli("validate --config " + std::string(REFERENCE_CONFIG) +
                 " --stages " + q(bad) + " --out " + q(dir / "val"));
    CHECK(rc == 3);
    CHECK(fs::exists(dir / "val" / "certificate.json"));
}

TEST_CASE("orbit sample cap exits 4") {
    fs::path dir = scratch_root() / "cap";
    int rc = run_cli("build --config " + std::string(REFERENCE_CONFIG) +
                     " --out " + q(dir) + " --max-stage 3");
    REQUIRE(rc == 0);

    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(reference_config_text());
    j["measure"]["sample_cap"] = 10;  // final period 15 will not fit
    fs::path cfg = dir / "tiny_cap.json";
    spit(cfg, j.dump(2) + "\n");

    rc = run_cli("measure --config " + q(cfg) + " --stages " +
                 q(dir / "stages.json") + " --out " + q(dir / "meas"));
    CHECK(rc == 4);
}

TEST_CASE("rebuilds with one seed are byte identical") {
    fs::path a = scratch_root() / "det_a";
    fs::path b = scratch_root() / "det_b";
    std::string common = std::string("build --config ") + REFERENCE_CONFIG +
                         " --seed 7 --max-stage 4 --out ";
    REQUIRE(run_cli(common + q(a)) == 0);
    REQUIRE(run_cli(common + q(b)) == 0);
    CHECK(slurp(a / "stages.json") == slurp(b / "stages.json"));
}
