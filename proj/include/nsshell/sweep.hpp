#pragma once

#include <string>
#include <vector>

#include "nsshell/solver.hpp"

namespace nsshell {

// Viscosity sweep: identical initial data, grid, dt and horizon across a
// geometric nu grid; probes whether the sup-in-time Sobolev norms look
// nu-uniform on this grid and whether the solutions are L2-Cauchy as
// nu -> 0. The verdict vocabulary is deliberately limited to
// {bounded-on-grid, growth-detected, inconclusive}: a desk-scale sweep
// observes, it does not adjudicate.

struct SweepEntry {
    double nu = 0.0;
    bool halted = false;
    std::vector<double> hs_initial;      // ||u0||_{H^s} per s
    std::vector<double> hs_sup;          // sup over the trace per s
    std::vector<double> hs_ratio;        // sup / initial per s
    std::vector<double> dissipation_hs;  // nu int ||u||_{H^(s+1)}^2 per s (trapezoid)
};

struct SweepConfig {
    SolverConfig base;                 // viscosity field ignored
    std::vector<double> nu_grid;
    std::vector<double> s_list;        // sweep exponents (default_s_list if empty)
    double bounded_factor = 4.0;       // ratio above this => growth-detected
    int distance_samples = 32;         // snapshot count for the distance matrix
    int jobs = 1;                      // parallel runs (deterministic merge)
};

struct SweepReport {
    std::vector<double> nu_grid;
    std::vector<double> s_list;
    std::vector<SweepEntry> entries;            // one per nu, in grid order
    std::vector<std::vector<double>> distance;  // max-in-time L2 distance matrix
    std::vector<double> consecutive_gap;        // distance(nu_i, nu_{i+1})
    bool gaps_decreasing = false;
    double uniform_ratio = 0.0;  // max over nu, s of hs_ratio
    std::string verdict;         // bounded-on-grid | growth-detected | inconclusive
};

SweepReport nu_sweep(const SweepConfig& cfg);

}  // namespace nsshell
