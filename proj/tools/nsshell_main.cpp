// nsshell: spectral shell-norm toolkit CLI.
//
// Subcommands: weights verify, norms selftest, simulate, harness, sweep,
// report render. JSON configs and reports, CSV time series, binary field
// snapshots. Exit codes: 0 done, 1 validation error, 2 runtime halt.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nsshell/harness.hpp"
#include "nsshell/manifest.hpp"
#include "nsshell/shell_profile.hpp"
#include "nsshell/solver.hpp"
#include "nsshell/sweep.hpp"
#include "nsshell/weights.hpp"

using json = nlohmann::json;
using namespace nsshell;

namespace {

namespace fs = std::filesystem;

struct CliError : std::runtime_error {
    int exit_code;
    CliError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

fs::path output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("NSSHELL_OUTPUT_ROOT")) return env;
    return ".";
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CliError(1, "cannot open config file: " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw CliError(1, "malformed JSON in " + path + ": " + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw CliError(1, "cannot write " + path.string());
    os << text;
}

class Command {
public:
    Command(std::string name, const std::string& out_flag)
        : name_(std::move(name)), root_(output_root(out_flag)) {
        fs::create_directories(root_);
        start_ = std::chrono::steady_clock::now();
    }

    fs::path emit(const std::string& filename, const std::string& text) {
        const fs::path p = root_ / filename;
        write_text(p, text);
        outputs_.push_back(p.string());
        return p;
    }

    void note_output(const fs::path& p) { outputs_.push_back(p.string()); }
    const fs::path& root() const { return root_; }

    void finish(const std::string& digest, std::uint64_t seed) {
        RunManifest m;
        m.command = name_;
        m.config_digest = digest;
        m.seed = seed;
        m.outputs = outputs_;
        m.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start_)
                        .count();
        write_manifest(m, (root_ / (name_ + "_manifest.json")).string());
    }

private:
    std::string name_;
    fs::path root_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- configs --

SolverConfig solver_config_from_json(const json& j) {
    SolverConfig cfg;
    cfg.dim = j.value("dim", 2);
    cfg.grid_n = j.value("grid_n", 32);
    cfg.viscosity = j.value("viscosity", 0.0);
    cfg.dt = j.value("dt", 1e-2);
    cfg.t_end = j.value("t_end", 1.0);
    cfg.trace_every = j.value("trace_every", 1);
    cfg.sample_every = j.value("sample_every", 0);
    cfg.profile_every = j.value("profile_every", 0);
    cfg.cfl_limit = j.value("cfl_limit", 0.8);
    if (j.contains("s_list")) cfg.s_list = j["s_list"].get<std::vector<double>>();
    if (j.contains("k_list")) cfg.k_list = j["k_list"].get<std::vector<double>>();
    if (j.contains("initial")) {
        const auto& init = j["initial"];
        cfg.initial.preset = init.value("preset", "tg2d");
        cfg.initial.snapshot_path = init.value("snapshot_path", "");
        cfg.initial.amplitude = init.value("amplitude", 1.0);
        cfg.initial.seed = init.value("seed", std::uint64_t(1));
        cfg.initial.j_min = init.value("j_min", 1);
        cfg.initial.j_max = init.value("j_max", 3);
        cfg.initial.slope = init.value("slope", 0.5);
    }
    return cfg;
}

json solver_config_to_json(const SolverConfig& cfg) {
    json j;
    j["dim"] = cfg.dim;
    j["grid_n"] = cfg.grid_n;
    j["viscosity"] = cfg.viscosity;
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["trace_every"] = cfg.trace_every;
    j["sample_every"] = cfg.sample_every;
    j["profile_every"] = cfg.profile_every;
    j["cfl_limit"] = cfg.cfl_limit;
    j["s_list"] = cfg.s_list.empty() ? default_s_list(cfg.dim) : cfg.s_list;
    j["k_list"] = cfg.k_list;
    j["initial"] = {{"preset", cfg.initial.preset},
                    {"snapshot_path", cfg.initial.snapshot_path},
                    {"amplitude", cfg.initial.amplitude},
                    {"seed", cfg.initial.seed},
                    {"j_min", cfg.initial.j_min},
                    {"j_max", cfg.initial.j_max},
                    {"slope", cfg.initial.slope}};
    return j;
}

// ---------------------------------------------------------------- reports --

json to_json(const harness::InequalityReport& r) {
    json j;
    j["check_id"] = r.check_id;
    j["description"] = r.description;
    j["tol"] = r.tol;
    j["pass"] = r.pass;
    j["worst_residual"] = r.worst_residual;
    j["measured_constant"] = r.measured_constant;
    j["truncation_k"] = r.truncation_k;
    j["samples"] = r.samples.size();
    return j;
}

std::string residuals_csv(const harness::InequalityReport& r) {
    std::ostringstream os;
    os << "descriptor,lhs,rhs,residual,measured_constant\n";
    for (const auto& s : r.samples)
        os << '"' << s.descriptor << "\"," << fmt17(s.lhs) << "," << fmt17(s.rhs) << ","
           << fmt17(s.residual) << "," << fmt17(s.measured_constant) << "\n";
    return os.str();
}

json to_json(const SweepReport& r) {
    json j;
    j["nu_grid"] = r.nu_grid;
    j["s_list"] = r.s_list;
    j["verdict"] = r.verdict;
    j["uniform_ratio"] = r.uniform_ratio;
    j["gaps_decreasing"] = r.gaps_decreasing;
    j["consecutive_gap"] = r.consecutive_gap;
    j["distance"] = r.distance;
    j["entries"] = json::array();
    for (const auto& e : r.entries) {
        j["entries"].push_back({{"nu", e.nu},
                                {"halted", e.halted},
                                {"hs_initial", e.hs_initial},
                                {"hs_sup", e.hs_sup},
                                {"hs_ratio", e.hs_ratio},
                                {"dissipation_hs", e.dissipation_hs}});
    }
    return j;
}

// ----------------------------------------------------------- subcommands --

struct WeightsArgs {
    std::int64_t max_j = 1000000;
    std::int64_t max_n = 1000000;
    std::string out;
    bool dry_run = false;
};

int run_weights_verify(const WeightsArgs& a) {
    json resolved{{"command", "weights verify"}, {"max_j", a.max_j}, {"max_n", a.max_n}};
    if (a.dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }
    if (a.max_j < 4 || a.max_n < 4) throw CliError(1, "--max-j and --max-n must be >= 4");
    Command cmd("weights_verify", a.out);

    const auto l31 = weights::verify_lemma_3_1(a.max_j);
    const auto l32 = weights::verify_lemma_3_2(a.max_n);
    const auto avg = weights::averaging_sums(a.max_n);

    std::ostringstream margins;
    margins << "n,sum_even,sum_odd,cap\n";
    for (const auto& row : avg.profile)
        margins << row.n << "," << fmt17(row.sum_even) << "," << fmt17(row.sum_odd) << ","
                << fmt17(3.0 * static_cast<double>(row.n)) << "\n";
    const auto csv_path = cmd.emit("averaging_margins.csv", margins.str());

    json report;
    report["lemma_3_1"] = {{"pass", l31.pass},
                           {"max_slack", l31.max_slack},
                           {"max_slack_index", l31.max_slack_index},
                           {"checked", l31.checked}};
    report["lemma_3_2"] = {{"pass", l32.pass},
                           {"max_ratio", l32.max_ratio},
                           {"max_ratio_index", l32.max_ratio_index}};
    report["averaging"] = {{"n0", avg.n0},
                           {"stabilized", avg.stabilized},
                           {"first_violation", avg.first_violation},
                           {"last_violation", avg.last_violation},
                           {"max_ratio", avg.max_ratio},
                           {"margins_csv_path", csv_path.string()}};
    cmd.emit("weights_report.json", report.dump(2) + "\n");
    cmd.finish(fnv1a64_hex(resolved.dump()), 0);
    std::cout << report.dump(2) << "\n";
    return 0;
}

struct SelftestArgs {
    std::uint64_t seed = 1;
    int trials = 25;
    std::string out;
    bool dry_run = false;
};

int run_norms_selftest(const SelftestArgs& a) {
    json resolved{{"command", "norms selftest"}, {"seed", a.seed}, {"trials", a.trials}};
    if (a.dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }
    Command cmd("norms_selftest", a.out);
    json checks = json::array();
    bool all_pass = true;
    const auto add = [&](const std::string& name, bool pass, double worst) {
        checks.push_back({{"name", name}, {"pass", pass}, {"worst", worst}});
        all_pass &= pass;
    };

    {
        double worst = 0.0;
        for (int t = 0; t < a.trials; ++t) {
            const int dim = t % 2 ? 3 : 2;
            const auto f = random_divergence_free(dim, 16,
                                                  a.seed + static_cast<std::uint64_t>(t),
                                                  1, 3, 0.3);
            const auto back = transform_to_spectral(transform_to_physical(f));
            worst = std::max(worst, l2_distance(back, f) / std::max(l2_norm(f), 1e-300));
        }
        add("transform-round-trip", worst <= 1e-12, worst);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < a.trials; ++t) {
            const auto f = random_divergence_free(
                2, 32, a.seed + 100 + static_cast<std::uint64_t>(t), 1, 4, 0.2);
            const auto g = transform_to_physical(f);
            double quad = 0.0;
            for (int c = 0; c < 2; ++c)
                for (double v : g.comps[c]) quad += v * v;
            quad *= std::pow(2.0 * M_PI / 32.0, 2);
            worst = std::max(worst, std::abs(quad - l2_sq(f)) / l2_sq(f));
        }
        add("parseval", worst <= 1e-12, worst);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < a.trials; ++t) {
            const auto f = random_divergence_free(
                3, 16, a.seed + 200 + static_cast<std::uint64_t>(t), 1, 3, 0.4);
            worst = std::max(worst,
                             std::abs(inner_product(low_pass(f, 2.5), high_pass(f, 2.5))));
            double shells = 0.0;
            const auto profile = shell_profile_of(f);
            for (const auto& [j, e] : profile.entries())
                shells += e.magnitude * e.magnitude;
            worst = std::max(worst, std::abs(shells - l2_sq(f)) / l2_sq(f));
        }
        add("cutoff-orthogonality-and-partition", worst <= 1e-12, worst);
    }
    {
        std::mt19937_64 rng(a.seed + 300);
        std::uniform_int_distribution<int> jpick(-10, 10);
        std::uniform_real_distribution<double> cpick(0.1, 3.0);
        double worst = 0.0;
        bool pass = true;
        for (int t = 0; t < a.trials; ++t) {
            const int d = t % 2 ? 2 : 3;
            std::vector<std::pair<std::int64_t, double>> mags;
            for (int i = 0; i < 6; ++i) mags.emplace_back(jpick(rng), cpick(rng));
            const auto p = ShellProfile::from_magnitudes(d, mags);
            const double crit = -1.0 + 0.5 * d;
            for (int l = 1; l <= 3; ++l) {
                const double before = hdot_norm(p, crit);
                const double after = hdot_norm(dilate(p, l), crit);
                worst = std::max(worst, std::abs(after - before));
                pass &= after == before;
            }
            if (!p.empty()) pass &= verify_lemma_2_1(p, 0.5 * x1_norm(p), 1).pass;
        }
        add("dilation-invariance-and-rescale-smallness", pass, worst);
    }
    json report{{"pass", all_pass}, {"checks", checks}};
    cmd.emit("norms_selftest.json", report.dump(2) + "\n");
    cmd.finish(fnv1a64_hex(resolved.dump()), a.seed);
    std::cout << report.dump(2) << "\n";
    return all_pass ? 0 : 2;
}

struct SimulateArgs {
    std::string config;
    std::string out;
    bool dry_run = false;
};

int run_simulate(const SimulateArgs& a) {
    const json cfg_json = load_json(a.config);
    SolverConfig cfg = solver_config_from_json(cfg_json);
    if (cfg.s_list.empty()) cfg.s_list = default_s_list(cfg.dim);
    const json resolved = solver_config_to_json(cfg);
    if (a.dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }
    Command cmd("simulate", a.out);

    RunResult result;
    try {
        result = run(cfg);
    } catch (const std::invalid_argument& e) {
        throw CliError(1, e.what());
    }

    std::ostringstream trace;
    write_trace_csv(result, trace);
    cmd.emit("trace.csv", trace.str());

    for (std::size_t i = 0; i < result.profiles.size(); ++i) {
        std::ostringstream os;
        write_profile(result.profiles[i].second, os);
        char name[64];
        std::snprintf(name, sizeof name, "profile_%04zu.tsv", i);
        cmd.emit(name, os.str());
    }
    if (cfg.sample_every > 0) {
        for (std::size_t i = 0; i < result.samples.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "state_%04zu.nssf", i);
            const fs::path p = cmd.root() / name;
            write_snapshot(result.samples[i].field, p.string(), result.samples[i].time,
                           result.samples[i].flags);
            cmd.note_output(p);
        }
    }
    {
        const fs::path p = cmd.root() / "final_state.nssf";
        write_snapshot(result.final_state, p.string(),
                       static_cast<double>(result.steps_taken) * cfg.dt,
                       kSnapshotDivFree | kSnapshotMeanFree);
        cmd.note_output(p);
    }

    json summary{{"steps_taken", result.steps_taken},
                 {"halted", result.halted},
                 {"records", result.trace.size()}};
    if (result.halted) {
        summary["halt_time"] = result.halt_time;
        summary["halt_reason"] = result.halt_reason;
    }
    cmd.emit("simulate_summary.json", summary.dump(2) + "\n");
    cmd.finish(fnv1a64_hex(resolved.dump()), cfg.initial.seed);
    std::cout << summary.dump(2) << "\n";
    if (result.halted) {
        std::cerr << json{{"error",
                           {{"code", "runtime-halt"}, {"message", result.halt_reason}}}}
                         .dump()
                  << "\n";
        return 2;
    }
    return 0;
}

struct HarnessArgs {
    std::string config;
    std::string checks = "3.6,3.7,3.9,3.15,3.17,linf";
    std::string out;
    bool dry_run = false;
};

std::vector<Snapshot> harness_fields(const json& src, std::uint64_t* seed_out) {
    const std::string type = src.value("type", "random");
    if (type == "random") {
        const int count = src.value("count", 10);
        const auto seed = src.value("seed", std::uint64_t(7));
        *seed_out = seed;
        std::vector<Snapshot> out;
        for (int i = 0; i < count; ++i) {
            Snapshot s;
            s.field = random_divergence_free(
                src.value("dim", 3), src.value("grid_n", 32),
                seed + static_cast<std::uint64_t>(i), src.value("j_min", 1),
                src.value("j_max", 3), src.value("slope", 0.5),
                src.value("amplitude", 1.0));
            s.time = i;
            out.push_back(std::move(s));
        }
        return out;
    }
    if (type == "simulate") {
        SolverConfig cfg = solver_config_from_json(src.at("solver"));
        if (cfg.sample_every <= 0) cfg.sample_every = std::max(1, cfg.trace_every);
        *seed_out = cfg.initial.seed;
        auto result = run(cfg);
        if (result.halted)
            throw CliError(2, "harness source run halted: " + result.halt_reason);
        return std::move(result.samples);
    }
    if (type == "tg2d" || type == "tg3d") {
        Snapshot s;
        s.field = type == "tg2d"
                      ? taylor_green_2d(src.value("grid_n", 32), src.value("amplitude", 1.0))
                      : taylor_green_3d(src.value("grid_n", 32), src.value("amplitude", 1.0));
        *seed_out = 0;
        std::vector<Snapshot> out;
        out.push_back(std::move(s));
        return out;
    }
    throw CliError(1, "unknown harness source type: " + type);
}

int run_harness(const HarnessArgs& a) {
    json cfg = load_json(a.config);
    cfg["checks"] = a.checks;
    if (a.dry_run) {
        std::cout << cfg.dump(2) << "\n";
        return 0;
    }
    Command cmd("harness", a.out);
    std::uint64_t seed = 0;
    const auto fields = harness_fields(cfg.value("source", json::object()), &seed);
    const auto k_list = cfg.contains("k_list") ? cfg["k_list"].get<std::vector<double>>()
                                               : std::vector<double>{2.0, 4.0, 8.0};
    const auto s_list = cfg.contains("s_list") ? cfg["s_list"].get<std::vector<double>>()
                                               : std::vector<double>{0.5, 1.0};

    json reports = json::array();
    bool all_pass = true;
    std::istringstream tokens(a.checks);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        harness::InequalityReport rep;
        if (token == "3.6")
            rep = harness::check_energy_identity_36(fields, k_list);
        else if (token == "3.7" || token == "3.9")
            rep = harness::check_inequality_37_39(fields, k_list);
        else if (token == "3.15")
            rep = harness::check_accumulated_315(fields, s_list);
        else if (token == "3.17")
            rep = harness::check_superposition_identities(fields, s_list);
        else if (token == "linf")
            rep = harness::check_linf_chain(fields, k_list);
        else
            throw CliError(1, "unknown check id: " + token);
        rep.check_id = token;
        all_pass &= rep.pass;
        reports.push_back(to_json(rep));
        std::string stem = "residuals_" + token;
        for (auto& ch : stem)
            if (ch == '.') ch = '_';
        cmd.emit(stem + ".csv", residuals_csv(rep));
    }
    json report{{"pass", all_pass}, {"checks", reports}};
    cmd.emit("harness_report.json", report.dump(2) + "\n");
    cmd.finish(fnv1a64_hex(cfg.dump()), seed);
    std::cout << report.dump(2) << "\n";
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string nu;
    std::string s;
    std::string preset;
    int jobs = 1;
    std::string out;
    bool dry_run = false;
};

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw CliError(1, "malformed numeric list entry: " + tok);
        }
    }
    return out;
}

int run_sweep(const SweepArgs& a) {
    SweepConfig sc;
    json resolved;
    if (!a.config.empty()) {
        const json j = load_json(a.config);
        sc.base = solver_config_from_json(j.value("solver", json::object()));
        if (j.contains("nu_grid")) sc.nu_grid = j["nu_grid"].get<std::vector<double>>();
        if (j.contains("s_list")) sc.s_list = j["s_list"].get<std::vector<double>>();
        sc.bounded_factor = j.value("bounded_factor", 4.0);
        sc.distance_samples = j.value("distance_samples", 32);
    }
    if (!a.preset.empty()) {
        sc.base.initial.preset = a.preset;
        sc.base.dim = a.preset == "tg3d" ? 3 : sc.base.dim;
    }
    if (!a.nu.empty()) sc.nu_grid = parse_list(a.nu);
    if (!a.s.empty()) sc.s_list = parse_list(a.s);
    sc.jobs = a.jobs;
    if (sc.nu_grid.empty()) throw CliError(1, "sweep needs a nu grid (--nu or config)");

    resolved["solver"] = solver_config_to_json(sc.base);
    resolved["nu_grid"] = sc.nu_grid;
    resolved["s_list"] = sc.s_list.empty() ? default_s_list(sc.base.dim) : sc.s_list;
    resolved["bounded_factor"] = sc.bounded_factor;
    resolved["distance_samples"] = sc.distance_samples;
    resolved["jobs"] = sc.jobs;
    if (a.dry_run) {
        std::cout << resolved.dump(2) << "\n";
        return 0;
    }
    Command cmd("sweep", a.out);
    SweepReport report;
    try {
        report = nu_sweep(sc);
    } catch (const std::invalid_argument& e) {
        throw CliError(1, e.what());
    }
    const json jr = to_json(report);
    cmd.emit("sweep_report.json", jr.dump(2) + "\n");

    std::ostringstream csv;
    csv << "nu,halted";
    for (double s : report.s_list) csv << ",sup_ratio_s" << s << ",dissipation_s" << s;
    csv << "\n";
    for (const auto& e : report.entries) {
        csv << fmt17(e.nu) << "," << (e.halted ? 1 : 0);
        for (std::size_t i = 0; i < report.s_list.size(); ++i)
            csv << "," << fmt17(e.hs_ratio[i]) << "," << fmt17(e.dissipation_hs[i]);
        csv << "\n";
    }
    cmd.emit("sweep_entries.csv", csv.str());
    cmd.finish(fnv1a64_hex(resolved.dump()), sc.base.initial.seed);
    std::cout << jr.dump(2) << "\n";
    return 0;
}

struct RenderArgs {
    std::string in;
    bool dry_run = false;
};

void render_json(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            render_json(value, prefix.empty() ? key : prefix + "." + key, os);
        return;
    }
    if (j.is_array()) {
        bool scalars = true;
        for (const auto& v : j) scalars &= !v.is_structured();
        if (scalars) {
            os << prefix << " = ";
            for (std::size_t i = 0; i < j.size(); ++i)
                os << (i ? ", " : "") << j[i].dump();
            os << "\n";
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i)
            render_json(j[i], prefix + "[" + std::to_string(i) + "]", os);
        return;
    }
    os << prefix << " = " << j.dump() << "\n";
}

int run_report_render(const RenderArgs& a) {
    if (a.dry_run) {
        std::cout << json{{"command", "report render"}, {"in", a.in}}.dump(2) << "\n";
        return 0;
    }
    const json j = load_json(a.in);
    render_json(j, "", std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral shell-norm toolkit: weighted-norm verification, "
                 "pseudospectral Navier-Stokes runs, and estimate harnesses"};
    app.require_subcommand(1);

    WeightsArgs wa;
    auto* weights_cmd = app.add_subcommand("weights", "weight-sequence verification");
    auto* verify_cmd = weights_cmd->add_subcommand("verify", "exhaustive bound checks");
    verify_cmd->add_option("--max-j", wa.max_j, "largest index for the b-bound scan");
    verify_cmd->add_option("--max-n", wa.max_n, "largest n for the window-count scan");
    verify_cmd->add_option("--out", wa.out, "output directory");
    verify_cmd->add_flag("--dry-run", wa.dry_run, "print the resolved config and exit");
    weights_cmd->require_subcommand(1);

    SelftestArgs na;
    auto* norms_cmd = app.add_subcommand("norms", "norm machinery self-tests");
    auto* selftest_cmd = norms_cmd->add_subcommand("selftest", "seeded identity battery");
    selftest_cmd->add_option("--seed", na.seed, "base seed");
    selftest_cmd->add_option("--trials", na.trials, "trials per identity");
    selftest_cmd->add_option("--out", na.out, "output directory");
    selftest_cmd->add_flag("--dry-run", na.dry_run, "print the resolved config and exit");
    norms_cmd->require_subcommand(1);

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "integrate a configured run");
    simulate_cmd->add_option("--config", sa.config, "solver config JSON")->required();
    simulate_cmd->add_option("--out", sa.out, "output directory");
    simulate_cmd->add_flag("--dry-run", sa.dry_run, "print the resolved config and exit");

    HarnessArgs ha;
    auto* harness_cmd = app.add_subcommand("harness", "estimate-chain checks");
    harness_cmd->add_option("--config", ha.config, "harness config JSON")->required();
    harness_cmd->add_option("--checks", ha.checks, "comma list: 3.6,3.7,3.9,3.15,3.17,linf");
    harness_cmd->add_option("--out", ha.out, "output directory");
    harness_cmd->add_flag("--dry-run", ha.dry_run, "print the resolved config and exit");

    SweepArgs pa;
    auto* sweep_cmd = app.add_subcommand("sweep", "viscosity sweep");
    sweep_cmd->add_option("--config", pa.config, "sweep config JSON");
    sweep_cmd->add_option("--nu", pa.nu, "comma list of viscosities");
    sweep_cmd->add_option("--s", pa.s, "comma list of Sobolev exponents");
    sweep_cmd->add_option("--preset", pa.preset, "initial-data preset shortcut");
    sweep_cmd->add_option("--jobs", pa.jobs, "parallel runs (deterministic mode: 1)");
    sweep_cmd->add_option("--out", pa.out, "output directory");
    sweep_cmd->add_flag("--dry-run", pa.dry_run, "print the resolved config and exit");

    RenderArgs ra;
    auto* report_cmd = app.add_subcommand("report", "report utilities");
    auto* render_cmd = report_cmd->add_subcommand("render", "tabulate a JSON report");
    render_cmd->add_option("--in", ra.in, "report JSON path")->required();
    render_cmd->add_flag("--dry-run", ra.dry_run, "print the resolved config and exit");
    report_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify_cmd->parsed()) return run_weights_verify(wa);
        if (selftest_cmd->parsed()) return run_norms_selftest(na);
        if (simulate_cmd->parsed()) return run_simulate(sa);
        if (harness_cmd->parsed()) return run_harness(ha);
        if (sweep_cmd->parsed()) return run_sweep(pa);
        if (render_cmd->parsed()) return run_report_render(ra);
    } catch (const CliError& e) {
        const char* code = e.exit_code == 2 ? "runtime-halt" : "validation";
        std::cerr << nlohmann::json{{"error", {{"code", code}, {"message", e.what()}}}}.dump()
                  << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error",
                                     {{"code", "validation"}, {"message", e.what()}}}}
                         .dump()
                  << "\n";
        return 1;
    }
    return 0;
}
