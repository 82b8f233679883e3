#include "nsshell/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nsshell/weights.hpp"

namespace nsshell::harness {

namespace {

std::string describe(double time, double value, const char* tag, const char* facet) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "t=%g %s=%g %s", time, tag, value, facet);
    return buf;
}

void finalize(InequalityReport& report, double tol) {
    report.tol = tol;
    report.worst_residual = 0.0;
    report.measured_constant = 0.0;
    report.pass = true;
    for (const auto& s : report.samples) {
        report.worst_residual = std::min(report.worst_residual, s.residual);
        report.measured_constant = std::max(report.measured_constant, s.measured_constant);
        if (s.residual < -tol) report.pass = false;
    }
    if (!std::isfinite(report.measured_constant)) report.pass = false;
}

double trilinear_scale(const SpectralField& u) {
    return std::max(l2_norm(u) * std::sqrt(hdot_sq(u, 1.0)) * linf_norm(u),
                    std::numeric_limits<double>::min());
}

std::int64_t bandwidth_cutoff(const SpectralField& u) {
    const double kmax =
        std::sqrt(static_cast<double>(u.dimension())) * (u.grid_n() / 2.0);
    return static_cast<std::int64_t>(std::floor(kmax)) + 1;
}

}  // namespace

InequalityReport check_energy_identity_36(const std::vector<Snapshot>& fields,
                                          const std::vector<double>& k_list,
                                          double tol) {
    InequalityReport report;
    report.check_id = "3.6";
    report.description =
        "three-term decomposition of the high-pass energy flux and its two "
        "vanishing ingredients";
    for (const auto& snap : fields) {
        const auto& u = snap.field;
        const double scale = trilinear_scale(u);
        for (double k : k_list) {
            const auto u_low = low_pass(u, k);
            const auto u_high = high_pass(u, k);
            const auto u_half = low_pass(u, 0.5 * k);
            const auto u_band = band_pass(u, 0.5 * k, k);

            const double flux = -inner_product(convect(u, u_low), u_high);
            const double split = -inner_product(convect(u_low, u_band), u_high) -
                                 inner_product(convect(u_band, u_half), u_high) -
                                 inner_product(convect(u_high, u_low), u_high);
            const double cancel = inner_product(convect(u, u_high), u_high);
            const double support = inner_product(convect(u_half, u_half), u_high);

            SampleResidual decomp;
            decomp.descriptor = describe(snap.time, k, "k", "decomposition");
            decomp.lhs = flux;
            decomp.rhs = split;
            decomp.residual = -std::abs(flux - split) / scale;
            report.samples.push_back(decomp);

            SampleResidual vanishing;
            vanishing.descriptor = describe(snap.time, k, "k", "cancellation");
            vanishing.residual = -std::abs(cancel) / scale;
            report.samples.push_back(vanishing);

            SampleResidual supp;
            supp.descriptor = describe(snap.time, k, "k", "product-support");
            supp.residual = -std::abs(support) / scale;
            report.samples.push_back(supp);
        }
    }
    // here "residual" is -|error|/scale, so pass means every |error| <= tol*scale
    finalize(report, tol);
    return report;
}

InequalityReport check_linf_chain(const std::vector<Snapshot>& fields,
                                  const std::vector<double>& k_list) {
    InequalityReport report;
    report.check_id = "linf";
    report.description =
        "sup-norm chain ||u_k||_inf <= C b(j0(k)) k ||u||_X1 with measured "
        "constants and the per-shell l1 link";
    const double tiny = std::numeric_limits<double>::min();
    for (const auto& snap : fields) {
        const auto& u = snap.field;
        const double x1 = x1_norm(shell_profile_of(u));
        for (double k : k_list) {
            if (k < 1.0) continue;
            const double bj = weights::b(weights::j0(k));
            const auto u_low = low_pass(u, k);
            const auto u_half = low_pass(u, 0.5 * k);

            const double linf_low = linf_norm(u_low);
            const double l1_low = coefficient_l1_lowpass(u, k);

            // triangle inequality ||u_k||_inf <= sum of coefficient magnitudes
            SampleResidual tri;
            tri.descriptor = describe(snap.time, k, "k", "linf<=l1");
            tri.lhs = linf_low;
            tri.rhs = l1_low;
            tri.residual = (l1_low - linf_low) / std::max(l1_low, tiny);
            report.samples.push_back(tri);

            // measured constants in place of the continuum 8 c0 (2pi)^(-d/2)
            SampleResidual c1;
            c1.descriptor = describe(snap.time, k, "k", "C:linf");
            c1.lhs = linf_low;
            c1.rhs = bj * k * x1;
            c1.measured_constant = linf_low / std::max(bj * k * x1, tiny);
            report.samples.push_back(c1);

            SampleResidual c2;
            c2.descriptor = describe(snap.time, k, "k", "C:grad-linf");
            c2.lhs = grad_linf_norm(u_low);
            c2.rhs = bj * k * k * x1;
            c2.measured_constant = c2.lhs / std::max(c2.rhs, tiny);
            report.samples.push_back(c2);

            SampleResidual c3;
            c3.descriptor = describe(snap.time, k, "k", "C:grad-linf-half");
            c3.lhs = grad_linf_norm(u_half);
            c3.rhs = bj * k * k * x1;
            c3.measured_constant = c3.lhs / std::max(c3.rhs, tiny);
            report.samples.push_back(c3);
        }

        // per-shell l1 <= sqrt(lattice count) * l2, tight for flat shells
        const int j_top = static_cast<int>(
            std::ceil(std::log2(std::sqrt(static_cast<double>(u.dimension())) *
                                (u.grid_n() / 2.0)))) + 1;
        for (int j = 1; j <= j_top; ++j) {
            const double l1 = coefficient_l1_shell(u, j);
            if (l1 == 0.0) continue;
            const double l2 = coefficient_l2_shell(u, j);
            const double count_bound =
                std::sqrt(static_cast<double>(lattice_count_shell(u.dimension(), j)));
            SampleResidual shell;
            shell.descriptor = describe(snap.time, j, "shell", "l1<=sqrt(count)l2");
            shell.lhs = l1;
            shell.rhs = count_bound * l2;
            shell.residual = (shell.rhs - shell.lhs) / std::max(shell.rhs, tiny);
            shell.measured_constant = l1 / (std::exp2(0.5 * u.dimension() * j) * l2);
            report.samples.push_back(shell);
        }
    }
    finalize(report, 1e-12);
    return report;
}

InequalityReport check_inequality_37_39(const std::vector<Snapshot>& fields,
                                        const std::vector<double>& k_list) {
    InequalityReport report;
    report.check_id = "3.7";
    report.description =
        "pointwise bound chain on the instantaneous high-pass flux, the "
        "lattice Bernstein step, and the measured constant C1";
    const double tiny = std::numeric_limits<double>::min();
    for (const auto& snap : fields) {
        const auto& u = snap.field;
        const double x1 = x1_norm(shell_profile_of(u));
        const double scale = trilinear_scale(u);
        for (double k : k_list) {
            if (k < 1.0) continue;
            const auto u_low = low_pass(u, k);
            const auto u_high = high_pass(u, k);
            const double flux = -inner_product(convect(u, u_low), u_high);

            const double lo_half_energy = highpass_energy(u, 0.5 * k);
            const double lo_half_grad = highpass_grad_energy(u, 0.5 * k);
            const double holder = (grad_linf_norm(low_pass(u, 0.5 * k)) +
                                   grad_linf_norm(u_low) + k * linf_norm(u_low)) *
                                  lo_half_energy;

            SampleResidual h;
            h.descriptor = describe(snap.time, k, "k", "hoelder");
            h.lhs = flux;
            h.rhs = holder;
            h.residual = (holder - flux) / scale;
            report.samples.push_back(h);

            // Bernstein: k^2 ||u^{k/2}||^2 <= 4 ||grad u^{k/2}||^2, exact on
            // the lattice since |xi| >= k/2 on the support.
            SampleResidual bern;
            bern.descriptor = describe(snap.time, k, "k", "bernstein");
            bern.lhs = k * k * lo_half_energy;
            bern.rhs = 4.0 * lo_half_grad;
            bern.residual = (bern.rhs - bern.lhs) / std::max(bern.rhs, tiny);
            report.samples.push_back(bern);

            const double bj = weights::b(weights::j0(k));
            SampleResidual c1;
            c1.descriptor = describe(snap.time, k, "k", "C1");
            c1.lhs = flux;
            c1.rhs = 4.0 * bj * x1 * lo_half_grad;
            c1.measured_constant = flux <= 0.0 ? 0.0 : flux / std::max(c1.rhs, tiny);
            report.samples.push_back(c1);
        }
    }
    finalize(report, 1e-11);
    return report;
}

InequalityReport check_superposition_identities(const std::vector<Snapshot>& fields,
                                                const std::vector<double>& s_list,
                                                double tol) {
    InequalityReport report;
    report.check_id = "3.17";
    report.description =
        "k^s-weighted high-pass sums against annulus regroupings, both "
        "orderings of the double sum";
    for (const auto& snap : fields) {
        const auto& u = snap.field;
        const std::int64_t k_top = bandwidth_cutoff(u);
        report.truncation_k = k_top;
        const auto ann = annulus_energies(u);
        const auto ann_grad = annulus_grad_energies(u);

        // suffix identity ||u^k||^2 = sum_{n >= k} ||u_{n,n+1}||^2
        double worst_suffix = 0.0;
        for (std::int64_t k = 1; k <= k_top; ++k) {
            const double direct = highpass_energy(u, static_cast<double>(k));
            double regrouped = 0.0;
            for (std::size_t n = static_cast<std::size_t>(k); n < ann.size(); ++n)
                regrouped += ann[n];
            worst_suffix = std::max(
                worst_suffix, std::abs(direct - regrouped) / std::max(direct, 1e-300));
        }
        SampleResidual suffix;
        suffix.descriptor = describe(snap.time, static_cast<double>(k_top), "kmax", "suffix");
        suffix.residual = -worst_suffix;
        report.samples.push_back(suffix);

        for (double s : s_list) {
            double lhs = 0.0, lhs_grad = 0.0;
            for (std::int64_t k = 1; k <= k_top; ++k) {
                const double ks = std::pow(static_cast<double>(k), s);
                lhs += ks * highpass_energy(u, static_cast<double>(k));
                lhs_grad += ks * highpass_grad_energy(u, static_cast<double>(k));
            }
            double rhs = 0.0, rhs_grad = 0.0;
            for (std::size_t n = 1; n < ann.size(); ++n) {
                double power_sum = 0.0;
                for (std::int64_t k = 1; k <= static_cast<std::int64_t>(n); ++k)
                    power_sum += std::pow(static_cast<double>(k), s);
                rhs += power_sum * ann[n];
                rhs_grad += power_sum * ann_grad[n];
            }
            SampleResidual e;
            e.descriptor = describe(snap.time, s, "s", "energy");
            e.lhs = lhs;
            e.rhs = rhs;
            e.residual = -std::abs(lhs - rhs) / std::max(lhs, 1e-300);
            report.samples.push_back(e);

            SampleResidual g;
            g.descriptor = describe(snap.time, s, "s", "grad-energy");
            g.lhs = lhs_grad;
            g.rhs = rhs_grad;
            g.residual = -std::abs(lhs_grad - rhs_grad) / std::max(lhs_grad, 1e-300);
            report.samples.push_back(g);
        }
    }
    finalize(report, tol);
    return report;
}

InequalityReport check_accumulated_315(const std::vector<Snapshot>& fields,
                                       const std::vector<double>& s_list) {
    InequalityReport report;
    report.check_id = "3.15";
    report.description =
        "k^s-accumulated flux against C2 ||u||_X1 (||grad u||^2 + sum n^(s+1) "
        "||grad u_{n,n+1}||^2), with the averaged-weight regrouping bound";
    const double tiny = std::numeric_limits<double>::min();
    for (const auto& snap : fields) {
        const auto& u = snap.field;
        const double x1 = x1_norm(shell_profile_of(u));
        const std::int64_t k_top = bandwidth_cutoff(u);
        report.truncation_k = k_top;
        const auto ann_grad = annulus_grad_energies(u);
        const double grad_energy = hdot_sq(u, 1.0);

        // ((u.grad)u_k, u^k) = ((u.grad)u, u^k): the high-pass self-term
        // vanishes identically, so one dealiased product serves every k.
        const auto flux_field = convect(u, u);

        for (double s : s_list) {
            double lhs = 0.0;
            double mid = 0.0;  // sum_k b(j0(k)) k^s ||grad u^{k/2}||^2
            for (std::int64_t k = 1; k <= k_top; ++k) {
                const double ks = std::pow(static_cast<double>(k), s);
                const double flux =
                    -inner_product(flux_field, high_pass(u, static_cast<double>(k)));
                lhs += ks * flux;
                mid += weights::b(weights::j0(static_cast<double>(k))) * ks *
                       highpass_grad_energy(u, 0.5 * static_cast<double>(k));
            }

            double tail_sum = 0.0;
            double bound_311 = grad_energy;  // ||grad u^{1/2}||^2 on mean-free states
            for (std::size_t n = 1; n < ann_grad.size(); ++n) {
                tail_sum += std::pow(static_cast<double>(n), s + 1.0) * ann_grad[n];
                double weight_sum = 0.0;
                for (std::int64_t k = 1; k <= static_cast<std::int64_t>(n); ++k)
                    weight_sum += weights::b(weights::j0(2.0 * static_cast<double>(k))) +
                                  weights::b(weights::j0(2.0 * static_cast<double>(k) + 1.0));
                bound_311 +=
                    std::pow(3.0 * static_cast<double>(n), s) * weight_sum * ann_grad[n];
            }

            SampleResidual regroup;
            regroup.descriptor = describe(snap.time, s, "s", "regrouping");
            regroup.lhs = mid;
            regroup.rhs = bound_311;
            regroup.residual = (bound_311 - mid) / std::max(bound_311, tiny);
            report.samples.push_back(regroup);

            SampleResidual c2;
            c2.descriptor = describe(snap.time, s, "s", "C2");
            c2.lhs = lhs;
            c2.rhs = x1 * (grad_energy + tail_sum);
            c2.measured_constant = lhs <= 0.0 ? 0.0 : lhs / std::max(c2.rhs, tiny);
            report.samples.push_back(c2);
        }
    }
    finalize(report, 1e-11);
    return report;
}

}  // namespace nsshell::harness
