#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsshell/shell_profile.hpp"
#include "nsshell/spectral_field.hpp"

namespace nsshell {

// Incompressible Navier-Stokes / Euler integration on the periodic box with
// an integrating-factor RK4 scheme: the viscous semigroup e^(-nu |xi|^2 t)
// is applied exactly per mode, so only the dealiased, Leray-projected
// convection term passes through the Runge-Kutta stages. nu = 0 runs the
// Euler dynamics with the identical stage structure.

struct InitialData {
    std::string preset = "tg2d";   // "tg2d", "tg3d", "random", or "snapshot"
    std::string snapshot_path;     // used when preset == "snapshot"
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    int j_min = 1;                 // random preset band and spectrum
    int j_max = 3;
    double slope = 0.5;
};

struct SolverConfig {
    int dim = 2;
    int grid_n = 32;
    double viscosity = 0.0;
    double dt = 1e-2;
    double t_end = 1.0;
    InitialData initial;
    int trace_every = 1;           // steps between trace records
    int sample_every = 0;          // steps between retained snapshots (0 = none)
    int profile_every = 0;         // steps between shell-profile dumps (0 = none)
    double cfl_limit = 0.8;        // advective bound dt <= cfl_limit / (N max|u0|)
    std::vector<double> s_list;    // Sobolev exponents to trace (default set if empty)
    std::vector<double> k_list;    // high-pass radii to trace
};

/// Default exponents bracketing the critical index: {-1 + d/2, (d-1)/2, 1}.
std::vector<double> default_s_list(int dim);

struct TraceRecord {
    double time = 0.0;
    double energy = 0.0;             // ||u||_2^2
    double dissipation = 0.0;        // 2 nu int_0^t ||grad u||_2^2, RK4-stage quadrature
    double dissipation_trap = 0.0;   // same integral by trapezoid on step samples
    double grad_energy = 0.0;        // ||grad u||_2^2 at this time
    double x1 = 0.0;                 // weighted shell norm of the state
    std::vector<double> hdot;        // homogeneous Sobolev norms per s
    std::vector<double> hs;          // inhomogeneous Sobolev norms per s
    std::vector<double> hi_energy;       // ||u^k||_2^2 per k
    std::vector<double> hi_grad_energy;  // ||grad u^k||_2^2 per k
};

struct RunResult {
    SolverConfig config;                 // resolved config (s_list filled in)
    std::vector<TraceRecord> trace;
    SpectralField final_state;
    std::vector<Snapshot> samples;       // retained at sample_every cadence
    std::vector<std::pair<double, ShellProfile>> profiles;
    std::int64_t steps_taken = 0;
    bool halted = false;                 // NaN/Inf detected; trace kept up to halt
    double halt_time = 0.0;
    std::string halt_reason;
};

/// Builds the initial state from the preset / snapshot and enforces the
/// solver-state invariants (mean-free, Nyquist-free, divergence-free).
SpectralField make_initial_state(const SolverConfig& cfg);

/// Validates config against the initial state; throws std::invalid_argument
/// with an actionable message (CFL bound, positivity, grid limits).
void validate_config(const SolverConfig& cfg, const SpectralField& initial);

/// One integrating-factor RK4 step.
SpectralField step(const SpectralField& state, const SolverConfig& cfg);

/// -leray_project(convect(u, u)), mean zeroed: the right-hand side seen by
/// the Runge-Kutta stages.
SpectralField nonlinear_term(const SpectralField& u);

/// Integrates to t_end, recording at the configured cadences.
RunResult run(const SolverConfig& cfg);

/// Stable CSV layout for a trace (one row per record, %.17g values).
void write_trace_csv(const RunResult& result, std::ostream& os);

}  // namespace nsshell
