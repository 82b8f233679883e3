#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nsshell/shell_profile.hpp"

namespace nsshell {

// Divergence-free vector fields on the 2pi-periodic d-torus, stored as
// Fourier series coefficients on the integer lattice:
//
//     u(x) = sum_xi uhat(xi) e^(i xi.x),    ||u||_2^2 = (2pi)^d sum |uhat|^2.
//
// Storage is one row-major complex array per component with N points per
// axis; axis frequency f maps to index f >= 0 ? f : f + N, so f runs over
// [-N/2, N/2-1]. Fields used by the solver keep the Nyquist planes and the
// zero mode empty.

struct PhysicalGrid {
    int dim = 0;
    int n = 0;
    std::array<std::vector<double>, 3> comps;  // values at x_j = 2pi j / N
};

struct AnnulusProfile {
    int dimension = 0;
    // magnitudes[n] = ||u_{n,n+1}||_2 (modes n <= |xi| < n+1); n = 0 is the
    // zero mode.
    std::vector<double> magnitudes;
};

class SpectralField {
public:
    SpectralField() = default;
    SpectralField(int dimension, int grid_n);

    int dimension() const { return dim_; }
    int grid_n() const { return n_; }
    std::size_t modes_per_component() const { return comps_[0].size(); }

    std::vector<std::complex<double>>& component(int c) { return comps_[c]; }
    const std::vector<std::complex<double>>& component(int c) const { return comps_[c]; }

    /// Coefficient at wavevector xi (xi[2] ignored when d = 2).
    std::complex<double> coeff(int c, std::array<int, 3> xi) const;
    void set_coeff(int c, std::array<int, 3> xi, std::complex<double> value);

    /// Axis frequency of a storage index along one axis.
    int freq(int axis_index) const { return axis_index <= n_ / 2 - 1 ? axis_index : axis_index - n_; }

    /// Decodes a flat storage index into axis frequencies; returns |xi|^2.
    std::int64_t wavevector(std::size_t flat, std::array<int, 3>& xi) const;

    void scale(double alpha);
    void add_scaled(const SpectralField& other, double alpha);

    double max_abs_coeff() const;
    bool finite() const;

    /// max over modes of |xi . uhat| / (|xi| max|uhat|); 0 for the zero field.
    double divergence_rel() const;
    /// max over paired modes of |uhat(-xi) - conj(uhat(xi))| / max|uhat|.
    double hermitian_defect() const;

    void zero_mean();
    void zero_nyquist();

private:
    int dim_ = 0;
    int n_ = 0;
    std::array<std::vector<std::complex<double>>, 3> comps_;
};

// -- transforms ------------------------------------------------------------

PhysicalGrid transform_to_physical(const SpectralField& f);
SpectralField transform_to_spectral(const PhysicalGrid& g);

// -- norms and inner products ----------------------------------------------

double l2_sq(const SpectralField& f);                       // ||u||_2^2
double l2_norm(const SpectralField& f);
double inner_product(const SpectralField& f, const SpectralField& g);  // (f, g)_2
double l2_distance(const SpectralField& f, const SpectralField& g);

/// Exact lattice Sobolev norms: hdot uses |xi|^(2s) (zero mode excluded),
/// hs uses (1 + |xi|^2)^s.
double hdot_sq(const SpectralField& f, double s);
double hs_sq(const SpectralField& f, double s);

double highpass_energy(const SpectralField& f, double k);        // ||u^k||_2^2
double highpass_grad_energy(const SpectralField& f, double k);   // ||grad u^k||_2^2

/// ||u_{n,n+1}||_2^2 for n = 0..floor(max |xi|), index n.
std::vector<double> annulus_energies(const SpectralField& f);
std::vector<double> annulus_grad_energies(const SpectralField& f);

/// Sum over modes of the euclidean coefficient magnitude, restricted to
/// |xi| < k (the l1 side of the sup-norm chain).
double coefficient_l1_lowpass(const SpectralField& f, double k);
/// Same restricted to one dyadic shell 2^(j-1) <= |xi| < 2^j.
double coefficient_l1_shell(const SpectralField& f, int j);
double coefficient_l2_shell(const SpectralField& f, int j);
std::int64_t lattice_count_shell(int dim, int j);

// -- cutoffs and projections -------------------------------------------------

SpectralField high_pass(const SpectralField& f, double k);   // |xi| >= k
SpectralField low_pass(const SpectralField& f, double k);    // |xi| < k
SpectralField band_pass(const SpectralField& f, double h, double k);  // h <= |xi| < k

SpectralField leray_project(const SpectralField& f);

// -- nonlinear term ----------------------------------------------------------

/// Coefficients of (u . grad) w by pseudospectral product on the 3N/2 grid;
/// exact discrete convolution for every retained mode. Output is band-limited
/// to the input grid and not Leray-projected.
SpectralField convect(const SpectralField& u, const SpectralField& w);

// -- pointwise norms ---------------------------------------------------------

/// Max euclidean magnitude over the 2x-oversampled physical grid.
double linf_norm(const SpectralField& f);
/// Frobenius magnitude of the velocity gradient, same sampling.
double grad_linf_norm(const SpectralField& f);

// -- bridges to shell data -----------------------------------------------------

ShellProfile shell_profile_of(const SpectralField& f);
AnnulusProfile annulus_profile_of(const SpectralField& f);

// -- presets -------------------------------------------------------------------

SpectralField taylor_green_2d(int grid_n, double amplitude = 1.0);
SpectralField taylor_green_3d(int grid_n, double amplitude = 1.0);

/// Random divergence-free field, Hermitian by construction, band-limited to
/// 2^(j_min-1) <= |xi| < 2^j_max, shells rescaled to c_j = amplitude *
/// 2^(-slope (j - j_min)). Deterministic for fixed arguments.
SpectralField random_divergence_free(int dim, int grid_n, std::uint64_t seed,
                                     int j_min, int j_max, double slope,
                                     double amplitude = 1.0);

// -- snapshot io -----------------------------------------------------------------

struct Snapshot {
    SpectralField field;
    double time = 0.0;
    std::uint64_t flags = 0;
};

inline constexpr std::uint64_t kSnapshotDivFree = 1;
inline constexpr std::uint64_t kSnapshotMeanFree = 2;

void write_snapshot(const SpectralField& f, const std::string& path, double time,
                    std::uint64_t flags);
Snapshot read_snapshot(const std::string& path);

}  // namespace nsshell
