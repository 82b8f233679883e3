#include "nsshell/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nsshell {

namespace {

// indices of the sweep exponents inside the run's merged s_list
std::vector<std::size_t> locate(const std::vector<double>& needle,
                                const std::vector<double>& hay) {
    std::vector<std::size_t> out;
    for (double s : needle) {
        const auto it = std::find(hay.begin(), hay.end(), s);
        if (it == hay.end()) throw std::logic_error("sweep: exponent lookup failed");
        out.push_back(static_cast<std::size_t>(it - hay.begin()));
    }
    return out;
}

}  // namespace

SweepReport nu_sweep(const SweepConfig& cfg) {
    if (cfg.nu_grid.empty()) throw std::invalid_argument("nu_sweep: empty nu grid");
    for (double nu : cfg.nu_grid)
        if (!(nu >= 0.0)) throw std::invalid_argument("nu_sweep: nu must be >= 0");

    SweepReport report;
    report.nu_grid = cfg.nu_grid;
    report.s_list = cfg.s_list.empty() ? default_s_list(cfg.base.dim) : cfg.s_list;

    // every run traces s and s+1 so the H^(s+1) dissipation integral is
    // available from the records
    SolverConfig base = cfg.base;
    base.s_list = report.s_list;
    for (double s : report.s_list)
        if (std::find(base.s_list.begin(), base.s_list.end(), s + 1.0) == base.s_list.end())
            base.s_list.push_back(s + 1.0);
    const auto n_steps = static_cast<std::int64_t>(std::llround(base.t_end / base.dt));
    base.sample_every = static_cast<int>(
        std::max<std::int64_t>(1, n_steps / std::max(1, cfg.distance_samples)));

    std::vector<RunResult> runs(cfg.nu_grid.size());
    const auto run_one = [&](std::size_t i) {
        SolverConfig rc = base;
        rc.viscosity = cfg.nu_grid[i];
        runs[i] = run(rc);
    };
    if (cfg.jobs <= 1) {
        for (std::size_t i = 0; i < cfg.nu_grid.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        while (next < cfg.nu_grid.size()) {
            pool.clear();
            for (int j = 0; j < cfg.jobs && next < cfg.nu_grid.size(); ++j, ++next)
                pool.emplace_back(run_one, next);
            for (auto& t : pool) t.join();
        }
    }

    const auto s_at = locate(report.s_list, base.s_list);
    const auto s1_at = [&]() {
        std::vector<double> plus1;
        for (double s : report.s_list) plus1.push_back(s + 1.0);
        return locate(plus1, base.s_list);
    }();

    bool any_halted = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& rr = runs[i];
        SweepEntry entry;
        entry.nu = cfg.nu_grid[i];
        entry.halted = rr.halted;
        any_halted |= rr.halted;
        for (std::size_t si = 0; si < report.s_list.size(); ++si) {
            const double h0 = rr.trace.front().hs[s_at[si]];
            double sup = 0.0;
            for (const auto& rec : rr.trace) sup = std::max(sup, rec.hs[s_at[si]]);
            entry.hs_initial.push_back(h0);
            entry.hs_sup.push_back(sup);
            entry.hs_ratio.push_back(h0 > 0.0 ? sup / h0 : 0.0);

            double integral = 0.0;
            for (std::size_t r = 1; r < rr.trace.size(); ++r) {
                const double dt = rr.trace[r].time - rr.trace[r - 1].time;
                const double a = rr.trace[r - 1].hs[s1_at[si]];
                const double b = rr.trace[r].hs[s1_at[si]];
                integral += 0.5 * dt * (a * a + b * b);
            }
            entry.dissipation_hs.push_back(entry.nu * integral);
            report.uniform_ratio = std::max(report.uniform_ratio, entry.hs_ratio.back());
        }
        report.entries.push_back(std::move(entry));
    }

    // pairwise max-in-time L2 distances on the shared snapshot times
    const std::size_t m = runs.size();
    report.distance.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto count = std::min(runs[i].samples.size(), runs[j].samples.size());
            double worst = 0.0;
            for (std::size_t t = 0; t < count; ++t)
                worst = std::max(
                    worst, l2_distance(runs[i].samples[t].field, runs[j].samples[t].field));
            report.distance[i][j] = report.distance[j][i] = worst;
        }
    for (std::size_t i = 0; i + 1 < m; ++i)
        report.consecutive_gap.push_back(report.distance[i][i + 1]);
    report.gaps_decreasing = true;
    for (std::size_t i = 0; i + 1 < report.consecutive_gap.size(); ++i)
        if (report.consecutive_gap[i + 1] > report.consecutive_gap[i] * (1.0 + 1e-9))
            report.gaps_decreasing = false;

    if (any_halted)
        report.verdict = "inconclusive";
    else if (report.uniform_ratio <= cfg.bounded_factor)
        report.verdict = "bounded-on-grid";
    else
        report.verdict = "growth-detected";
    return report;
}

}  // namespace nsshell
