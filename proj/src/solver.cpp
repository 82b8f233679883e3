#include "nsshell/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nsshell {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmtg(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

// Per-mode viscous multipliers e^(-nu |xi|^2 tau) for tau = dt/2 and dt.
struct Semigroup {
    std::vector<double> half;
    std::vector<double> full;

    Semigroup(const SpectralField& like, double nu, double dt) {
        const std::size_t total = like.modes_per_component();
        half.resize(total);
        full.resize(total);
        std::array<int, 3> xi{};
        for (std::size_t flat = 0; flat < total; ++flat) {
            const auto q = static_cast<double>(like.wavevector(flat, xi));
            half[flat] = std::exp(-nu * q * 0.5 * dt);
            full[flat] = std::exp(-nu * q * dt);
        }
    }

    static void apply(const std::vector<double>& mult, SpectralField& f) {
        for (int c = 0; c < f.dimension(); ++c) {
            auto& comp = f.component(c);
            for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= mult[i];
        }
    }
};

struct StepOutput {
    SpectralField state;
    double dissipation_increment = 0.0;  // RK4 quadrature of 2 nu ||grad u||^2
};

StepOutput step_impl(const SpectralField& u, const SolverConfig& cfg,
                     const Semigroup& sg) {
    const double dt = cfg.dt;
    const double two_nu = 2.0 * cfg.viscosity;

    const SpectralField a = nonlinear_term(u);
    SpectralField ua = u;
    ua.add_scaled(a, 0.5 * dt);
    Semigroup::apply(sg.half, ua);

    const SpectralField b = nonlinear_term(ua);
    SpectralField ub = u;
    Semigroup::apply(sg.half, ub);
    ub.add_scaled(b, 0.5 * dt);

    const SpectralField c = nonlinear_term(ub);
    SpectralField uc = u;
    Semigroup::apply(sg.full, uc);
    {
        SpectralField ch = c;
        Semigroup::apply(sg.half, ch);
        uc.add_scaled(ch, dt);
    }

    const SpectralField d = nonlinear_term(uc);

    StepOutput out{u, 0.0};
    Semigroup::apply(sg.full, out.state);
    {
        SpectralField ea = a;
        Semigroup::apply(sg.full, ea);
        out.state.add_scaled(ea, dt / 6.0);
        SpectralField ebc = b;
        ebc.add_scaled(c, 1.0);
        Semigroup::apply(sg.half, ebc);
        out.state.add_scaled(ebc, dt / 3.0);
        out.state.add_scaled(d, dt / 6.0);
    }

    // dissipation integral advanced with the same stage states
    const double g1 = hdot_sq(u, 1.0);
    const double g2 = hdot_sq(ua, 1.0);
    const double g3 = hdot_sq(ub, 1.0);
    const double g4 = hdot_sq(uc, 1.0);
    out.dissipation_increment = two_nu * dt / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
    return out;
}

}  // namespace

std::vector<double> default_s_list(int dim) {
    std::vector<double> s{-1.0 + 0.5 * dim, 0.5 * (dim - 1), 1.0};
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

SpectralField nonlinear_term(const SpectralField& u) {
    SpectralField rhs = leray_project(convect(u, u));
    rhs.scale(-1.0);
    rhs.zero_mean();
    return rhs;
}

SpectralField make_initial_state(const SolverConfig& cfg) {
    const auto& init = cfg.initial;
    SpectralField u0;
    if (init.preset == "tg2d") {
        if (cfg.dim != 2) throw std::invalid_argument("preset tg2d requires dim = 2");
        u0 = taylor_green_2d(cfg.grid_n, init.amplitude);
    } else if (init.preset == "tg3d") {
        if (cfg.dim != 3) throw std::invalid_argument("preset tg3d requires dim = 3");
        u0 = taylor_green_3d(cfg.grid_n, init.amplitude);
    } else if (init.preset == "random") {
        u0 = random_divergence_free(cfg.dim, cfg.grid_n, init.seed, init.j_min,
                                    init.j_max, init.slope, init.amplitude);
    } else if (init.preset == "snapshot") {
        auto snap = read_snapshot(init.snapshot_path);
        if (snap.field.dimension() != cfg.dim || snap.field.grid_n() != cfg.grid_n)
            throw std::invalid_argument("snapshot grid does not match the config");
        u0 = leray_project(snap.field);
    } else {
        throw std::invalid_argument("unknown initial preset: " + init.preset);
    }
    u0.zero_mean();
    u0.zero_nyquist();
    return u0;
}

void validate_config(const SolverConfig& cfg, const SpectralField& initial) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (!(cfg.viscosity >= 0.0)) throw std::invalid_argument("viscosity must be >= 0");
    if (cfg.trace_every < 1) throw std::invalid_argument("trace_every must be >= 1");
    if (cfg.sample_every < 0 || cfg.profile_every < 0)
        throw std::invalid_argument("cadences must be >= 0");
    const double umax = linf_norm(initial);
    if (umax > 0.0) {
        const double bound = cfg.cfl_limit / (cfg.grid_n * umax);
        if (cfg.dt > bound)
            throw std::invalid_argument(
                "dt violates the advective stability bound: dt = " + fmt17(cfg.dt) +
                " > " + fmt17(bound) + " = cfl_limit / (N max|u0|)");
    }
}

SpectralField step(const SpectralField& state, const SolverConfig& cfg) {
    const Semigroup sg(state, cfg.viscosity, cfg.dt);
    auto out = step_impl(state, cfg, sg);
    if (!out.state.finite())
        throw std::runtime_error("step: state became non-finite (blow-up or instability)");
    return std::move(out.state);
}

RunResult run(const SolverConfig& cfg_in) {
    RunResult result;
    result.config = cfg_in;
    if (result.config.s_list.empty()) result.config.s_list = default_s_list(cfg_in.dim);
    const SolverConfig& cfg = result.config;

    SpectralField u = make_initial_state(cfg);
    validate_config(cfg, u);
    const Semigroup sg(u, cfg.viscosity, cfg.dt);

    const auto n_steps =
        static_cast<std::int64_t>(std::llround(cfg.t_end / cfg.dt));
    if (n_steps < 1) throw std::invalid_argument("t_end shorter than one step");

    double dissipation = 0.0;
    double dissipation_trap = 0.0;
    double grad_prev = hdot_sq(u, 1.0);

    const auto record = [&](double time) {
        TraceRecord rec;
        rec.time = time;
        rec.energy = l2_sq(u);
        rec.dissipation = dissipation;
        rec.dissipation_trap = dissipation_trap;
        rec.grad_energy = hdot_sq(u, 1.0);
        const auto profile = shell_profile_of(u);
        rec.x1 = x1_norm(profile);
        for (double s : cfg.s_list) {
            rec.hdot.push_back(std::sqrt(hdot_sq(u, s)));
            rec.hs.push_back(std::sqrt(hs_sq(u, s)));
        }
        for (double k : cfg.k_list) {
            rec.hi_energy.push_back(highpass_energy(u, k));
            rec.hi_grad_energy.push_back(highpass_grad_energy(u, k));
        }
        result.trace.push_back(std::move(rec));
    };
    const auto sample = [&](double time) {
        Snapshot snap;
        snap.field = u;
        snap.time = time;
        snap.flags = kSnapshotDivFree | kSnapshotMeanFree;
        result.samples.push_back(std::move(snap));
    };

    record(0.0);
    if (cfg.sample_every > 0) sample(0.0);
    if (cfg.profile_every > 0) result.profiles.emplace_back(0.0, shell_profile_of(u));

    for (std::int64_t s = 1; s <= n_steps; ++s) {
        auto out = step_impl(u, cfg, sg);
        const double time = static_cast<double>(s) * cfg.dt;
        if (!out.state.finite()) {
            result.halted = true;
            result.halt_time = time;
            result.halt_reason = "non-finite state at t = " + fmt17(time);
            break;
        }
        u = std::move(out.state);
        dissipation += out.dissipation_increment;
        const double grad_now = hdot_sq(u, 1.0);
        dissipation_trap +=
            2.0 * cfg.viscosity * cfg.dt * 0.5 * (grad_prev + grad_now);
        grad_prev = grad_now;
        result.steps_taken = s;

        if (s % cfg.trace_every == 0 || s == n_steps) record(time);
        if (cfg.sample_every > 0 && (s % cfg.sample_every == 0 || s == n_steps))
            sample(time);
        if (cfg.profile_every > 0 && (s % cfg.profile_every == 0 || s == n_steps))
            result.profiles.emplace_back(time, shell_profile_of(u));
    }
    result.final_state = std::move(u);
    return result;
}

void write_trace_csv(const RunResult& result, std::ostream& os) {
    const auto& cfg = result.config;
    os << "time,energy,dissipation,dissipation_trap,grad_energy,x1";
    for (double s : cfg.s_list) os << ",hdot_s" << fmtg(s) << ",hs_s" << fmtg(s);
    for (double k : cfg.k_list) os << ",hiE_k" << fmtg(k) << ",hiG_k" << fmtg(k);
    os << "\n";
    for (const auto& rec : result.trace) {
        os << fmt17(rec.time) << "," << fmt17(rec.energy) << ","
           << fmt17(rec.dissipation) << "," << fmt17(rec.dissipation_trap) << ","
           << fmt17(rec.grad_energy) << "," << fmt17(rec.x1);
        for (std::size_t i = 0; i < rec.hdot.size(); ++i)
            os << "," << fmt17(rec.hdot[i]) << "," << fmt17(rec.hs[i]);
        for (std::size_t i = 0; i < rec.hi_energy.size(); ++i)
            os << "," << fmt17(rec.hi_energy[i]) << "," << fmt17(rec.hi_grad_energy[i]);
        os << "\n";
    }
}

}  // namespace nsshell
