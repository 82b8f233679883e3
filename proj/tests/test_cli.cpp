#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g_binary;

struct Invocation {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Invocation invoke(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        g_binary + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Invocation r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nsshell_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

}  // namespace

TEST_CASE("weights verify emits the report and manifest") {
    const auto dir = fresh_dir("weights");
    const auto r = invoke("weights verify --max-j 50000 --max-n 50000 --out " +
                              (dir / "w").string(),
                          dir);
    CHECK(r.exit_code == 0);
    const auto report = json::parse(slurp(dir / "w" / "weights_report.json"));
    CHECK(report["lemma_3_1"]["pass"] == true);
    CHECK(report["lemma_3_2"]["pass"] == true);
    CHECK(report["averaging"].contains("n0"));
    CHECK(fs::exists(dir / "w" / "averaging_margins.csv"));
    const auto manifest = json::parse(slurp(dir / "w" / "weights_verify_manifest.json"));
    CHECK(manifest["outputs"].size() == 2);
    CHECK(manifest["config_digest"].get<std::string>().size() == 16);
}

TEST_CASE("norms selftest passes") {
    const auto dir = fresh_dir("selftest");
    const auto r =
        invoke("norms selftest --trials 8 --out " + (dir / "n").string(), dir);
    CHECK(r.exit_code == 0);
    const auto report = json::parse(slurp(dir / "n" / "norms_selftest.json"));
    CHECK(report["pass"] == true);
}

TEST_CASE("simulate: missing config fails with a machine-readable record") {
    const auto dir = fresh_dir("missing");
    const auto r = invoke("simulate --config " + (dir / "absent.json").string(), dir);
    CHECK(r.exit_code == 1);
    const auto err = json::parse(r.err);
    CHECK(err["error"]["code"] == "validation");
}

TEST_CASE("simulate: dry run prints the resolved config without side effects") {
    const auto dir = fresh_dir("dryrun");
    write_file(dir / "cfg.json",
               R"({"dim":2,"grid_n":16,"viscosity":0.05,"dt":0.01,"t_end":0.05,)"
               R"("initial":{"preset":"tg2d"}})");
    const auto out = dir / "sim";
    const auto r = invoke("simulate --config " + (dir / "cfg.json").string() +
                              " --dry-run --out " + out.string(),
                          dir);
    CHECK(r.exit_code == 0);
    const auto resolved = json::parse(r.out);
    CHECK(resolved["grid_n"] == 16);
    CHECK(resolved["s_list"].size() >= 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("simulate: deterministic byte-identical outputs on rerun") {
    const auto dir = fresh_dir("determinism");
    write_file(dir / "cfg.json",
               R"({"dim":2,"grid_n":16,"viscosity":0.02,"dt":0.005,"t_end":0.05,)"
               R"("trace_every":2,"k_list":[2,4],)"
               R"("initial":{"preset":"random","seed":11,"j_min":1,"j_max":3}})");
    const auto r1 = invoke("simulate --config " + (dir / "cfg.json").string() +
                               " --out " + (dir / "a").string(),
                           dir);
    const auto r2 = invoke("simulate --config " + (dir / "cfg.json").string() +
                               " --out " + (dir / "b").string(),
                           dir);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv"));
    CHECK(slurp(dir / "a" / "trace.csv").size() > 100);
    CHECK(slurp(dir / "a" / "simulate_summary.json") ==
          slurp(dir / "b" / "simulate_summary.json"));
    CHECK(slurp(dir / "a" / "final_state.nssf") == slurp(dir / "b" / "final_state.nssf"));
}

TEST_CASE("simulate: CFL violation is a validation error") {
    const auto dir = fresh_dir("cfl");
    write_file(dir / "cfg.json",
               R"({"dim":2,"grid_n":32,"viscosity":0.0,"dt":0.5,"t_end":1.0,)"
               R"("initial":{"preset":"tg2d"}})");
    const auto r = invoke("simulate --config " + (dir / "cfg.json").string() +
                              " --out " + (dir / "x").string(),
                          dir);
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.err)["error"]["code"] == "validation");
}

TEST_CASE("simulate: blow-up halts with exit code 2 and a partial trace") {
    const auto dir = fresh_dir("blowup");
    write_file(dir / "cfg.json",
               R"({"dim":2,"grid_n":32,"viscosity":0.0,"dt":0.5,"t_end":50.0,)"
               R"("cfl_limit":1e9,)"
               R"("initial":{"preset":"random","amplitude":5.0,"seed":3,"j_min":2,"j_max":4}})");
    const auto r = invoke("simulate --config " + (dir / "cfg.json").string() +
                              " --out " + (dir / "x").string(),
                          dir);
    CHECK(r.exit_code == 2);
    CHECK(json::parse(r.err)["error"]["code"] == "runtime-halt");
    CHECK(fs::exists(dir / "x" / "trace.csv"));
    CHECK(slurp(dir / "x" / "trace.csv").size() > 50);
}

TEST_CASE("harness subcommand runs selected checks") {
    const auto dir = fresh_dir("harness");
    write_file(dir / "h.json",
               R"({"source":{"type":"random","count":2,"seed":5,"dim":2,"grid_n":16,)"
               R"("j_min":1,"j_max":3},"k_list":[2,4],"s_list":[0.5,1.0]})");
    const auto r = invoke("harness --config " + (dir / "h.json").string() +
                              " --checks 3.6,3.17,linf --out " + (dir / "h").string(),
                          dir);
    CHECK(r.exit_code == 0);
    const auto report = json::parse(slurp(dir / "h" / "harness_report.json"));
    CHECK(report["pass"] == true);
    CHECK(report["checks"].size() == 3);
    CHECK(fs::exists(dir / "h" / "residuals_3_6.csv"));
    CHECK(fs::exists(dir / "h" / "residuals_linf.csv"));

    const auto bad = invoke("harness --config " + (dir / "h.json").string() +
                                " --checks 9.99 --out " + (dir / "h2").string(),
                            dir);
    CHECK(bad.exit_code == 1);
}

TEST_CASE("sweep subcommand: degenerate single-viscosity grid") {
    const auto dir = fresh_dir("sweep");
    const auto r = invoke(
        "sweep --nu 0.1 --s 0.5 --preset tg2d --out " + (dir / "s").string(), dir);
    CHECK(r.exit_code == 0);
    const auto report = json::parse(slurp(dir / "s" / "sweep_report.json"));
    CHECK(report["entries"].size() == 1);
    CHECK(report["verdict"] == "bounded-on-grid");
    CHECK(fs::exists(dir / "s" / "sweep_entries.csv"));
}

TEST_CASE("report render flattens a report to text") {
    const auto dir = fresh_dir("render");
    invoke("weights verify --max-j 100 --max-n 100 --out " + (dir / "w").string(), dir);
    const auto r =
        invoke("report render --in " + (dir / "w" / "weights_report.json").string(), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("lemma_3_1.pass = true") != std::string::npos);
    CHECK(r.out.find("averaging.n0 =") != std::string::npos);
}

TEST_CASE("environment variable sets the output root") {
    const auto dir = fresh_dir("envroot");
    const std::string cmd = "NSSHELL_OUTPUT_ROOT=" + (dir / "env_out").string() + " " +
                            g_binary + " weights verify --max-j 100 --max-n 100 > " +
                            (dir / "o.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "env_out" / "weights_report.json"));
}

int run_all(int argc, char** argv) {
    doctest::Context context;
    context.applyCommandLine(argc > 1 ? 1 : argc, argv);
    return context.run();
}

int main(int argc, char** argv) {
    if (argc > 1) g_binary = argv[1];
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-nsshell-binary>\n");
        return 1;
    }
    return run_all(argc, argv);
}
