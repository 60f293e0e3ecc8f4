#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string output;
};

Outcome cli(const std::string& args)
{
    const std::string cmd = std::string(HAPSRIS_CLI) + " " + args + " 2>&1";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) o.output += buf.data();
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("hapsris_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("cli: generate is reproducible")
{
    const auto a = scratch("gen_a"), b = scratch("gen_b");
    REQUIRE(cli("generate --seed 11 --out " + a.string()).code == 0);
    REQUIRE(cli("generate --seed 11 --out " + b.string()).code == 0);
    CHECK(slurp(a / "scenario.json") == slurp(b / "scenario.json"));
    CHECK(slurp(a / "config.cfg") == slurp(b / "config.cfg"));
    CHECK_FALSE(slurp(a / "scenario.json").empty());
}

TEST_CASE("cli: unknown config keys are rejected by name")
{
    const auto o = cli("run --set bogus_key=3 --out " + scratch("bad").string());
    CHECK(o.code == 2);
    CHECK(o.output.find("bogus_key") != std::string::npos);
    const auto p = cli("run --no-such-flag");
    CHECK(p.code == 2);
}

TEST_CASE("cli: run writes per-method results")
{
    const auto d = scratch("run");
    const auto o = cli("run --seed 1 --out " + d.string());
    REQUIRE(o.code == 0);
    const std::string csv = slurp(d / "allocation.csv");
    CHECK(csv.find("7,algorithm1,") != std::string::npos);
    CHECK(csv.find(",benchmark,") != std::string::npos);
    CHECK(slurp(d / "summary.json").find("\"algorithm1\"") != std::string::npos);

    const auto bd = scratch("run_bench");
    REQUIRE(cli("run --seed 1 --method benchmark --out " + bd.string()).code == 0);
    CHECK(slurp(bd / "allocation.csv").find(",algorithm1,") == std::string::npos);

    const auto ud = scratch("run_units");
    REQUIRE(cli("run --seed 1 --method algorithm1 --objective-mask units-only --out " + ud.string()).code == 0);
    CHECK(slurp(ud / "summary.json").find("\"objective_mask\": \"units-only\"") != std::string::npos);
}

TEST_CASE("cli: replaying a generated scenario gives the same run")
{
    const auto g = scratch("replay_gen"), r1 = scratch("replay_a"), r2 = scratch("replay_b");
    REQUIRE(cli("generate --seed 4 --out " + g.string()).code == 0);
    REQUIRE(cli("run --seed 4 --out " + r1.string()).code == 0);
    REQUIRE(cli("run --scenario " + (g / "scenario.json").string() + " --out " + r2.string()).code == 0);
    CHECK(slurp(r1 / "allocation.csv") == slurp(r2 / "allocation.csv"));
}

TEST_CASE("cli: sweep is byte-identical across invocations")
{
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    const std::string args = "sweep --preset fig3 --grid 1e6,4e6 --seeds 3 --workers 2 --plots --out ";
    REQUIRE(cli(args + a.string()).code == 0);
    REQUIRE(cli(args + b.string()).code == 0);
    for (const char* f : {"sweep.csv", "records.csv", "summary.json", "pct_connected.svg"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK(cli("sweep --param rate --grid 1e6 --seeds 1 --out " + a.string()).code == 2);
}

TEST_CASE("cli: compare writes paired differences")
{
    const auto d = scratch("compare");
    REQUIRE(cli("compare --seeds 3 --out " + d.string()).code == 0);
    CHECK(slurp(d / "compare.csv").find("seed") != std::string::npos);
}

TEST_CASE("cli: validation exit codes")
{
    const auto ok = cli("validate --quick");
    CHECK(ok.code == 0);
    CHECK(ok.output.find("FAIL") == std::string::npos);
    const auto bad = cli("validate --quick --inject-solver-tolerance 1e-1");
    CHECK(bad.code == 5);
    CHECK(bad.output.find("FAIL") != std::string::npos);
}

TEST_CASE("cli: infeasible scenarios exit with code 3")
{
    const auto o = cli("generate --set area_side_m=500 --set num_ues=200 --out " + scratch("infeasible").string());
    CHECK(o.code == 3);
}
