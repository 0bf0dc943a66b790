#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DEPCLT_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
    CHECK(run("").status == 2);
    CHECK(run("simulate --reps 10 --sizes 16,32").status == 2);
    CHECK(run("simulate --reps 200 --sizes 32,16").status == 2);
    CHECK(run("rate --u 2 --p 1.5 --integer-p").status == 2);
    CHECK(run("genogram inspect --g \"p=[.,1]; s=[0,-1]\"").status == 2);
    CHECK(run("simulate --model nope --sizes 16 --reps 200").status == 2);
}

TEST_CASE("degenerate variance exits with status 4") {
    CHECK(run("simulate --model ustat --sizes 1 --reps 200").status == 4);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const std::string args = "simulate --model window --m 1 --sizes 16,32,64 --reps 400 --seed 9";
    const auto a = run(args), b = run(args + " --threads 2");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("# depclt v1\nsize,p,wp,floor,se\n", 0) == 0);
    CHECK(a.out.find("\nslope,") != std::string::npos);
    CHECK(run(args + " --seed 10").out != a.out);
}

TEST_CASE("config file supplies defaults, flags win") {
    const std::string path = "depclt_cli_test_config.json";
    {
        std::ofstream cfg(path);
        cfg << R"({"u": 4.5, "d": 1, "p": 2})";
    }
    const auto r = run("--config " + path + " rate --integer-p");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("4.5,1,2,1,0.5,") != std::string::npos);
    const auto over = run("--config " + path + " rate --u 3");
    CHECK(over.out.find("\n3,1,2,0,") != std::string::npos);
    {
        std::ofstream cfg(path);
        cfg << R"({"bogus": 1})";
    }
    CHECK(run("--config " + path + " rate --u 3").status == 2);
    std::remove(path.c_str());
}

TEST_CASE("genogram inspection") {
    const auto r = run("genogram inspect --g \"p=[.,1,2,2,4,4,6]; s=[0,0,5,3,2,1,-1]\"");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["order"] == 7);
    CHECK(j["vertices"][4]["progenitor"] == 4);
    CHECK(j["vertices"][6]["progenitor"] == 6);
    CHECK(j["vertices"][6]["u"] == 6);
    CHECK(j["branches"].size() == 3);
    CHECK(j["growth_sites"][0]["vertex"] == 2);
    CHECK(j["growth_sites"][0]["max_id"] == 2);

    const auto e = nlohmann::json::parse(run("genogram enumerate --k 5 --cap 3").out);
    CHECK(e["ordered_trees"] == 14);
    CHECK(e["nonpositive"] == 8);

    const auto c = nlohmann::json::parse(run("genogram coeff --ext \"p=[.,1]; s=[0,0]\"").out);
    CHECK(c["b"] == "-1");
}

TEST_CASE("bounds, rate and tail output") {
    const auto b = run("bounds --kind mdep --m 1 --d 1 --p 2 --M 1 --sigma 10 --sum-p2 100");
    REQUIRE(b.status == 0);
    const auto j = nlohmann::json::parse(b.out);
    CHECK(j["bracket"].get<double>() == doctest::Approx(0.1));

    const auto t = run("tail --p 2 --K 1 --n 4096 --t 1,2");
    REQUIRE(t.status == 0);
    CHECK(t.out.rfind("# depclt v1\nt,bound,rho,mc_prob,mc_se\n", 0) == 0);
}

TEST_CASE("verify suites report through the exit status") {
    const auto ok = run("verify --suite wfw_polynomial");
    CHECK(ok.status == 0);
    CHECK(ok.out.find("PASS suite wfw_polynomial") != std::string::npos);
    const auto bad = run("verify --suite wfw_polynomial --inject 1");
    CHECK(bad.status == 3);
    CHECK(bad.out.find("FAIL") != std::string::npos);
    CHECK(run("verify --suite matching").status == 0);
}
