// End-to-end checks of the gac binary: flag surfaces, output shapes, and the
// exit-code contract (0 Equivalent, 1 NotEquivalent, 2 Unknown/inconclusive,
// 3 usage/hypothesis errors).

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(GAC_BINARY_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string data(const std::string& name) { return std::string(GAC_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("invariants verb") {
    RunResult r = run_cli("invariants " + data("e2.txt"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("K0 = 0, K1 = 0, det sign = -, singular = 0") != std::string::npos);

    RunResult leavitt = run_cli("invariants " + data("rose_inf.txt") + " --algebra leavitt --field C");
    CHECK(leavitt.exit_code == 0);
    CHECK(leavitt.output.find("K1^alg = D^2") != std::string::npos);

    RunResult json = run_cli("--json invariants " + data("e2.txt"));
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"k0\": \"0\"") != std::string::npos);

    CHECK(run_cli("invariants /nonexistent.txt").exit_code == 3);
}

TEST_CASE("classify verb exit codes") {
    CHECK(run_cli("classify " + data("e2.txt") + " " + data("e2_splice.txt") +
                  " --regime cstar")
              .exit_code == 0);
    CHECK(run_cli("classify " + data("e2.txt") + " " + data("e2_splice.txt") +
                  " --regime leavitt --field C")
              .exit_code == 2);
    CHECK(run_cli("classify " + data("e2.txt") + " " + data("o3.txt") + " --regime cstar")
              .exit_code == 1);
    // hypothesis error: a single loop is not simple
    CHECK(run_cli("classify " + data("loop1.txt") + " " + data("loop1.txt") + " --regime cstar")
              .exit_code == 3);
    CHECK(run_cli("classify " + data("loop1.txt") + " " + data("loop1.txt") +
                  " --regime cstar --assume-simple")
              .exit_code == 0);

    RunResult v = run_cli("classify " + data("e2.txt") + " " + data("e2_splice.txt") +
                          " --regime cstar");
    CHECK(v.output.find("rordam") != std::string::npos);
    CHECK(v.output.find("one application of Move (CS)") != std::string::npos);

    RunResult json = run_cli("--json classify " + data("rose_inf.txt") + " " +
                             data("inf_pair.txt") + " --regime leavitt --field C");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"theorem\": \"ruiz-tomforde\"") != std::string::npos);
}

TEST_CASE("move verb") {
    RunResult cs = run_cli("move " + data("two_cycle_loop.txt") + " --move CS --at v");
    CHECK(cs.exit_code == 0);
    CHECK(cs.output.find("vertices: u v v_1 v_2") != std::string::npos);

    RunResult o = run_cli("move " + data("e2.txt") + " --move O --at v --partition \"v->v=1|1\"");
    CHECK(o.exit_code == 0);
    CHECK(o.output.find("edge v_1 v_2 1") != std::string::npos);

    CHECK(run_cli("move " + data("e2.txt") + " --move R --at v").exit_code == 3);
}

TEST_CASE("search and check-path verbs") {
    RunResult sr = run_cli("search " + data("e2.txt") + " " + data("square.txt"));
    CHECK(sr.exit_code == 0);
    CHECK(sr.output.find("path of length 1") != std::string::npos);

    CHECK(run_cli("search " + data("e2.txt") + " " + data("e2_splice.txt")).exit_code == 2);
    CHECK(run_cli("search " + data("e2.txt") + " " + data("e2_splice.txt") + " --allow-cs")
              .exit_code == 0);

    std::string tmp = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                      "/gac_path_test.json";
    RunResult js = run_cli("--json search " + data("e2.txt") + " " + data("square.txt"));
    CHECK(js.exit_code == 0);
    {
        FILE* f = fopen(tmp.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs(js.output.c_str(), f);
        fclose(f);
    }
    RunResult cp = run_cli("check-path " + tmp);
    CHECK(cp.exit_code == 0);
    CHECK(cp.output.find("path valid") != std::string::npos);
    std::remove(tmp.c_str());
}

TEST_CASE("demo runs the corpus") {
    RunResult r = run_cli("demo");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("O_n family") != std::string::npos);
    CHECK(r.output.find("Open Question 1") != std::string::npos);
}

TEST_CASE("GAC_MAX_VERTICES tightens the global bound") {
    std::string cmd = "GAC_MAX_VERTICES=1 " + std::string(GAC_BINARY_PATH) + " search " +
                      data("square.txt") + " " + data("e2.txt") + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 3);
    CHECK(out.find("GAC_MAX_VERTICES") != std::string::npos);
}

TEST_CASE("deterministic output") {
    RunResult a = run_cli("invariants " + data("inf_pair.txt") + " --algebra leavitt --field R");
    RunResult b = run_cli("invariants " + data("inf_pair.txt") + " --algebra leavitt --field R");
    CHECK(a.output == b.output);
    RunResult s1 = run_cli("search " + data("e2.txt") + " " + data("square.txt") + " --threads 1");
    RunResult s2 = run_cli("search " + data("e2.txt") + " " + data("square.txt") + " --threads 4");
    CHECK(s1.output == s2.output);
}
