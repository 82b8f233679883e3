#include "nsshell/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include "nsshell/fft_backend.hpp"

namespace nsshell {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t ipow(int n, int d) {
    std::size_t out = 1;
    for (int i = 0; i < d; ++i) out *= static_cast<std::size_t>(n);
    return out;
}

int wrap(int f, int n) { return f >= 0 ? f : f + n; }

void check_same_grid(const SpectralField& a, const SpectralField& b, const char* who) {
    if (a.dimension() != b.dimension() || a.grid_n() != b.grid_n())
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

// Dyadic shell index: smallest j with |xi|^2 < 4^j, i.e. 2^(j-1) <= |xi| < 2^j.
int shell_of(std::int64_t q2) {
    int bits = 0;
    while ((std::int64_t(1) << bits) <= q2) ++bits;
    return (bits + 1) / 2;
}

std::int64_t isqrt64(std::int64_t q) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(q)));
    while (r * r > q) --r;
    while ((r + 1) * (r + 1) <= q) ++r;
    return r;
}

double volume_factor(int d) { return std::pow(kTwoPi, d); }

// Embeds coefficients into a larger c2c grid (zero padding); optionally
// multiplies by i*xi_axis to form the spectral derivative along one axis.
std::vector<std::complex<double>> pad_component(const SpectralField& f, int comp,
                                                int big_n, int deriv_axis) {
    const int n = f.grid_n();
    const int d = f.dimension();
    std::vector<std::complex<double>> out(ipow(big_n, d));
    const auto& src = f.component(comp);
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
        if (src[flat] == std::complex<double>(0.0, 0.0)) continue;
        f.wavevector(flat, xi);
        bool nyquist = false;
        for (int a = 0; a < d; ++a) nyquist |= xi[a] == -n / 2;
        if (nyquist) continue;
        std::size_t big = 0;
        for (int a = 0; a < d; ++a) big = big * big_n + wrap(xi[a], big_n);
        std::complex<double> v = src[flat];
        if (deriv_axis >= 0) v *= std::complex<double>(0.0, static_cast<double>(xi[deriv_axis]));
        out[big] = v;
    }
    return out;
}

}  // namespace

SpectralField::SpectralField(int dimension, int grid_n) : dim_(dimension), n_(grid_n) {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("SpectralField: dimension must be 2 or 3");
    if (grid_n < 4 || (grid_n & (grid_n - 1)) != 0)
        throw std::invalid_argument("SpectralField: grid size must be a power of two >= 4");
    const std::size_t total = ipow(grid_n, dimension);
    for (int c = 0; c < dim_; ++c) comps_[c].assign(total, {0.0, 0.0});
}

std::complex<double> SpectralField::coeff(int c, std::array<int, 3> xi) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * n_ + wrap(xi[a], n_);
    return comps_[c][flat];
}

void SpectralField::set_coeff(int c, std::array<int, 3> xi, std::complex<double> value) {
    std::size_t flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * n_ + wrap(xi[a], n_);
    comps_[c][flat] = value;
}

std::int64_t SpectralField::wavevector(std::size_t flat, std::array<int, 3>& xi) const {
    xi = {0, 0, 0};
    std::size_t rem = flat;
    for (int a = dim_ - 1; a >= 0; --a) {
        xi[a] = freq(static_cast<int>(rem % n_));
        rem /= n_;
    }
    std::int64_t q = 0;
    for (int a = 0; a < dim_; ++a) q += std::int64_t(xi[a]) * xi[a];
    return q;
}

void SpectralField::scale(double alpha) {
    for (int c = 0; c < dim_; ++c)
        for (auto& v : comps_[c]) v *= alpha;
}

void SpectralField::add_scaled(const SpectralField& other, double alpha) {
    check_same_grid(*this, other, "add_scaled");
    for (int c = 0; c < dim_; ++c) {
        const auto& src = other.comps_[c];
        auto& dst = comps_[c];
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += alpha * src[i];
    }
}

double SpectralField::max_abs_coeff() const {
    double m = 0.0;
    for (int c = 0; c < dim_; ++c)
        for (const auto& v : comps_[c]) m = std::max(m, std::abs(v));
    return m;
}

bool SpectralField::finite() const {
    for (int c = 0; c < dim_; ++c)
        for (const auto& v : comps_[c])
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double SpectralField::divergence_rel() const {
    double worst = 0.0, scale = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < comps_[0].size(); ++flat) {
        const std::int64_t q = wavevector(flat, xi);
        if (q == 0) continue;
        std::complex<double> div(0.0, 0.0);
        double mag = 0.0;
        for (int c = 0; c < dim_; ++c) {
            div += static_cast<double>(xi[c]) * comps_[c][flat];
            mag += std::norm(comps_[c][flat]);
        }
        worst = std::max(worst, std::abs(div));
        scale = std::max(scale, std::sqrt(static_cast<double>(q) * mag));
    }
    return scale == 0.0 ? 0.0 : worst / scale;
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0, scale = 0.0;
    std::array<int, 3> xi{}, mirror{};
    for (std::size_t flat = 0; flat < comps_[0].size(); ++flat) {
        wavevector(flat, xi);
        bool nyquist = false;
        for (int a = 0; a < dim_; ++a) nyquist |= xi[a] == -n_ / 2;
        if (nyquist) continue;
        for (int a = 0; a < dim_; ++a) mirror[a] = -xi[a];
        for (int c = 0; c < dim_; ++c) {
            const auto v = comps_[c][flat];
            scale = std::max(scale, std::abs(v));
            worst = std::max(worst, std::abs(coeff(c, mirror) - std::conj(v)));
        }
    }
    return scale == 0.0 ? 0.0 : worst / scale;
}

void SpectralField::zero_mean() {
    for (int c = 0; c < dim_; ++c) comps_[c][0] = {0.0, 0.0};
}

void SpectralField::zero_nyquist() {
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < comps_[0].size(); ++flat) {
        wavevector(flat, xi);
        bool nyquist = false;
        for (int a = 0; a < dim_; ++a) nyquist |= xi[a] == -n_ / 2;
        if (!nyquist) continue;
        for (int c = 0; c < dim_; ++c) comps_[c][flat] = {0.0, 0.0};
    }
}

PhysicalGrid transform_to_physical(const SpectralField& f) {
    PhysicalGrid g;
    g.dim = f.dimension();
    g.n = f.grid_n();
    const std::size_t total = f.modes_per_component();
    for (int c = 0; c < g.dim; ++c) {
        std::vector<std::complex<double>> buf = f.component(c);
        fft::backward(g.dim, g.n, buf.data());
        g.comps[c].resize(total);
        for (std::size_t i = 0; i < total; ++i) g.comps[c][i] = buf[i].real();
    }
    return g;
}

SpectralField transform_to_spectral(const PhysicalGrid& g) {
    SpectralField f(g.dim, g.n);
    const std::size_t total = f.modes_per_component();
    const double inv = 1.0 / static_cast<double>(total);
    for (int c = 0; c < g.dim; ++c) {
        if (g.comps[c].size() != total)
            throw std::invalid_argument("transform_to_spectral: size mismatch");
        std::vector<std::complex<double>> buf(total);
        for (std::size_t i = 0; i < total; ++i) buf[i] = {g.comps[c][i], 0.0};
        fft::forward(g.dim, g.n, buf.data());
        auto& dst = f.component(c);
        for (std::size_t i = 0; i < total; ++i) dst[i] = buf[i] * inv;
    }
    return f;
}

double l2_sq(const SpectralField& f) {
    double s = 0.0;
    for (int c = 0; c < f.dimension(); ++c)
        for (const auto& v : f.component(c)) s += std::norm(v);
    return volume_factor(f.dimension()) * s;
}

double l2_norm(const SpectralField& f) { return std::sqrt(l2_sq(f)); }

double inner_product(const SpectralField& f, const SpectralField& g) {
    check_same_grid(f, g, "inner_product");
    double s = 0.0;
    for (int c = 0; c < f.dimension(); ++c) {
        const auto& a = f.component(c);
        const auto& b = g.component(c);
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return volume_factor(f.dimension()) * s;
}

double l2_distance(const SpectralField& f, const SpectralField& g) {
    check_same_grid(f, g, "l2_distance");
    double s = 0.0;
    for (int c = 0; c < f.dimension(); ++c) {
        const auto& a = f.component(c);
        const auto& b = g.component(c);
        for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    }
    return std::sqrt(volume_factor(f.dimension()) * s);
}

double hdot_sq(const SpectralField& f, double s) {
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q == 0) continue;
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc += std::pow(static_cast<double>(q), s) * mag;
    }
    return volume_factor(f.dimension()) * acc;
}

double hs_sq(const SpectralField& f, double s) {
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc += std::pow(1.0 + static_cast<double>(q), s) * mag;
    }
    return volume_factor(f.dimension()) * acc;
}

double highpass_energy(const SpectralField& f, double k) {
    const double k2 = k * k;
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (k > 0.0 && static_cast<double>(q) < k2) continue;
        for (int c = 0; c < f.dimension(); ++c) acc += std::norm(f.component(c)[flat]);
    }
    return volume_factor(f.dimension()) * acc;
}

double highpass_grad_energy(const SpectralField& f, double k) {
    const double k2 = k * k;
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (k > 0.0 && static_cast<double>(q) < k2) continue;
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc += static_cast<double>(q) * mag;
    }
    return volume_factor(f.dimension()) * acc;
}

namespace {

std::vector<double> annulus_accumulate(const SpectralField& f, bool grad_weight) {
    std::array<int, 3> xi{};
    const std::int64_t qmax =
        static_cast<std::int64_t>(f.dimension()) * (f.grid_n() / 2) * (f.grid_n() / 2);
    std::vector<double> acc(static_cast<std::size_t>(isqrt64(qmax)) + 2, 0.0);
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        if (grad_weight) mag *= static_cast<double>(q);
        acc[static_cast<std::size_t>(isqrt64(q))] += mag;
    }
    const double vol = volume_factor(f.dimension());
    for (auto& v : acc) v *= vol;
    return acc;
}

}  // namespace

std::vector<double> annulus_energies(const SpectralField& f) {
    return annulus_accumulate(f, false);
}

std::vector<double> annulus_grad_energies(const SpectralField& f) {
    return annulus_accumulate(f, true);
}

double coefficient_l1_lowpass(const SpectralField& f, double k) {
    const double k2 = k * k;
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (static_cast<double>(q) >= k2) continue;
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc += std::sqrt(mag);
    }
    return acc;
}

double coefficient_l1_shell(const SpectralField& f, int j) {
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q == 0 || shell_of(q) != j) continue;
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc += std::sqrt(mag);
    }
    return acc;
}

double coefficient_l2_shell(const SpectralField& f, int j) {
    double acc = 0.0;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q == 0 || shell_of(q) != j) continue;
        for (int c = 0; c < f.dimension(); ++c) acc += std::norm(f.component(c)[flat]);
    }
    return std::sqrt(acc);
}

std::int64_t lattice_count_shell(int dim, int j) {
    const std::int64_t lo = std::int64_t(1) << (2 * (j - 1));
    const std::int64_t hi = std::int64_t(1) << (2 * j);
    const int r = 1 << j;
    std::int64_t count = 0;
    if (dim == 2) {
        for (int x = -r; x <= r; ++x)
            for (int y = -r; y <= r; ++y) {
                const std::int64_t q = std::int64_t(x) * x + std::int64_t(y) * y;
                if (q >= lo && q < hi) ++count;
            }
    } else {
        for (int x = -r; x <= r; ++x)
            for (int y = -r; y <= r; ++y)
                for (int z = -r; z <= r; ++z) {
                    const std::int64_t q =
                        std::int64_t(x) * x + std::int64_t(y) * y + std::int64_t(z) * z;
                    if (q >= lo && q < hi) ++count;
                }
    }
    return count;
}

namespace {

SpectralField filtered(const SpectralField& f, double lo2, double hi2) {
    // keep modes with lo2 <= |xi|^2 < hi2 (hi2 < 0 means no upper cut)
    SpectralField out(f.dimension(), f.grid_n());
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const auto q = static_cast<double>(f.wavevector(flat, xi));
        if (q < lo2) continue;
        if (hi2 >= 0.0 && q >= hi2) continue;
        for (int c = 0; c < f.dimension(); ++c)
            out.component(c)[flat] = f.component(c)[flat];
    }
    return out;
}

}  // namespace

SpectralField high_pass(const SpectralField& f, double k) {
    if (k < 0.0) throw std::invalid_argument("high_pass: k must be >= 0");
    return filtered(f, k * k, -1.0);
}

SpectralField low_pass(const SpectralField& f, double k) {
    if (k < 0.0) throw std::invalid_argument("low_pass: k must be >= 0");
    return filtered(f, 0.0, k * k);
}

SpectralField band_pass(const SpectralField& f, double h, double k) {
    if (!(h >= 0.0) || !(h < k)) throw std::invalid_argument("band_pass: need 0 <= h < k");
    return filtered(f, h * h, k * k);
}

SpectralField leray_project(const SpectralField& f) {
    SpectralField out = f;
    std::array<int, 3> xi{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q == 0) continue;
        std::complex<double> dot(0.0, 0.0);
        for (int c = 0; c < f.dimension(); ++c)
            dot += static_cast<double>(xi[c]) * out.component(c)[flat];
        dot /= static_cast<double>(q);
        for (int c = 0; c < f.dimension(); ++c)
            out.component(c)[flat] -= static_cast<double>(xi[c]) * dot;
    }
    return out;
}

SpectralField convect(const SpectralField& u, const SpectralField& w) {
    check_same_grid(u, w, "convect");
    const int d = u.dimension();
    const int n = u.grid_n();
    const int big = 3 * n / 2;
    const std::size_t big_total = ipow(big, d);

    std::array<std::vector<std::complex<double>>, 3> u_phys;
    for (int i = 0; i < d; ++i) {
        u_phys[i] = pad_component(u, i, big, -1);
        fft::backward(d, big, u_phys[i].data());
    }

    SpectralField out(d, n);
    std::vector<double> acc(big_total);
    for (int j = 0; j < d; ++j) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int i = 0; i < d; ++i) {
            auto dw = pad_component(w, j, big, i);
            fft::backward(d, big, dw.data());
            for (std::size_t p = 0; p < big_total; ++p)
                acc[p] += u_phys[i][p].real() * dw[p].real();
        }
        std::vector<std::complex<double>> buf(big_total);
        for (std::size_t p = 0; p < big_total; ++p) buf[p] = {acc[p], 0.0};
        fft::forward(d, big, buf.data());
        const double inv = 1.0 / static_cast<double>(big_total);

        auto& dst = out.component(j);
        std::array<int, 3> xi{};
        for (std::size_t flat = 0; flat < dst.size(); ++flat) {
            out.wavevector(flat, xi);
            bool nyquist = false;
            for (int a = 0; a < d; ++a) nyquist |= xi[a] == -n / 2;
            if (nyquist) continue;
            std::size_t bflat = 0;
            for (int a = 0; a < d; ++a) bflat = bflat * big + wrap(xi[a], big);
            dst[flat] = buf[bflat] * inv;
        }
    }
    return out;
}

namespace {

double max_pointwise(const std::vector<std::vector<std::complex<double>>>& phys) {
    const std::size_t total = phys.front().size();
    double best = 0.0;
    for (std::size_t p = 0; p < total; ++p) {
        double mag = 0.0;
        for (const auto& comp : phys) {
            const double re = comp[p].real();
            mag += re * re;
        }
        best = std::max(best, mag);
    }
    return std::sqrt(best);
}

}  // namespace

double linf_norm(const SpectralField& f) {
    const int d = f.dimension();
    const int big = 2 * f.grid_n();
    std::vector<std::vector<std::complex<double>>> phys;
    for (int c = 0; c < d; ++c) {
        phys.push_back(pad_component(f, c, big, -1));
        fft::backward(d, big, phys.back().data());
    }
    return max_pointwise(phys);
}

double grad_linf_norm(const SpectralField& f) {
    const int d = f.dimension();
    const int big = 2 * f.grid_n();
    std::vector<std::vector<std::complex<double>>> phys;
    for (int c = 0; c < d; ++c)
        for (int axis = 0; axis < d; ++axis) {
            phys.push_back(pad_component(f, c, big, axis));
            fft::backward(d, big, phys.back().data());
        }
    return max_pointwise(phys);
}

ShellProfile shell_profile_of(const SpectralField& f) {
    std::array<int, 3> xi{};
    std::vector<double> acc(40, 0.0);
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q == 0) continue;
        double mag = 0.0;
        for (int c = 0; c < f.dimension(); ++c) mag += std::norm(f.component(c)[flat]);
        acc[static_cast<std::size_t>(shell_of(q))] += mag;
    }
    const double vol = std::pow(kTwoPi, 0.5 * f.dimension());
    std::vector<std::pair<std::int64_t, double>> mags;
    for (std::size_t j = 0; j < acc.size(); ++j)
        if (acc[j] > 0.0)
            mags.emplace_back(static_cast<std::int64_t>(j), vol * std::sqrt(acc[j]));
    return ShellProfile::from_magnitudes(f.dimension(), mags);
}

AnnulusProfile annulus_profile_of(const SpectralField& f) {
    AnnulusProfile out;
    out.dimension = f.dimension();
    const auto energies = annulus_energies(f);
    out.magnitudes.resize(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i)
        out.magnitudes[i] = std::sqrt(energies[i]);
    return out;
}

SpectralField taylor_green_2d(int grid_n, double amplitude) {
    SpectralField f(2, grid_n);
    const double a4 = amplitude / 4.0;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
            // u = A (sin x cos y, -cos x sin y)
            f.set_coeff(0, {s1, s2, 0}, {0.0, -a4 * s1});
            f.set_coeff(1, {s1, s2, 0}, {0.0, a4 * s2});
        }
    return f;
}

SpectralField taylor_green_3d(int grid_n, double amplitude) {
    SpectralField f(3, grid_n);
    const double a8 = amplitude / 8.0;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int s3 : {-1, 1}) {
                // u = A (sin x cos y cos z, -cos x sin y cos z, 0)
                f.set_coeff(0, {s1, s2, s3}, {0.0, -a8 * s1});
                f.set_coeff(1, {s1, s2, s3}, {0.0, a8 * s2});
            }
    return f;
}

SpectralField random_divergence_free(int dim, int grid_n, std::uint64_t seed,
                                     int j_min, int j_max, double slope,
                                     double amplitude) {
    if (j_min < 1 || j_max < j_min)
        throw std::invalid_argument("random_divergence_free: need 1 <= j_min <= j_max");
    if ((std::int64_t(1) << j_max) > std::int64_t(grid_n) / 2)
        throw std::invalid_argument("random_divergence_free: band exceeds the grid");
    SpectralField f(dim, grid_n);
    std::mt19937_64 rng(seed);
    const auto normal_pair = [&rng]() {
        const double u1 =
            (static_cast<double>(rng() >> 11) + 1.0) * (1.0 / 9007199254740993.0);
        const double u2 = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        const double r = std::sqrt(-2.0 * std::log(u1));
        return std::complex<double>(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
    };

    const std::int64_t lo = std::int64_t(1) << (2 * (j_min - 1));
    const std::int64_t hi = std::int64_t(1) << (2 * j_max);
    std::array<int, 3> xi{}, mirror{};
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        const std::int64_t q = f.wavevector(flat, xi);
        if (q < lo || q >= hi) continue;
        // canonical half-space representative: first nonzero frequency > 0
        int lead = 0;
        for (int a = 0; a < dim; ++a)
            if (xi[a] != 0) {
                lead = xi[a];
                break;
            }
        if (lead <= 0) continue;
        for (int a = 0; a < dim; ++a) mirror[a] = -xi[a];
        for (int c = 0; c < dim; ++c) {
            const auto g = normal_pair();
            f.set_coeff(c, xi, g);
            f.set_coeff(c, mirror, std::conj(g));
        }
    }
    f = leray_project(f);

    // rescale shells to c_j = amplitude * 2^(-slope (j - j_min))
    const auto profile = shell_profile_of(f);
    for (const auto& [j, e] : profile.entries()) {
        const auto jj = j.convert_to<int>();
        const double target =
            amplitude * std::exp2(-slope * static_cast<double>(jj - j_min));
        const double factor = target / e.magnitude;
        const std::int64_t slo = std::int64_t(1) << (2 * (jj - 1));
        const std::int64_t shi = std::int64_t(1) << (2 * jj);
        for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
            const std::int64_t q = f.wavevector(flat, xi);
            if (q < slo || q >= shi) continue;
            for (int c = 0; c < dim; ++c) f.component(c)[flat] *= factor;
        }
    }
    return f;
}

void write_snapshot(const SpectralField& f, const std::string& path, double time,
                    std::uint64_t flags) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
    const char magic[4] = {'N', 'S', 'S', 'F'};
    const std::uint32_t version = 1;
    const std::uint32_t d = static_cast<std::uint32_t>(f.dimension());
    const std::uint32_t n = static_cast<std::uint32_t>(f.grid_n());
    os.write(magic, 4);
    os.write(reinterpret_cast<const char*>(&version), 4);
    os.write(reinterpret_cast<const char*>(&d), 4);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&flags), 8);
    os.write(reinterpret_cast<const char*>(&time), 8);
    for (int c = 0; c < f.dimension(); ++c) {
        const auto& comp = f.component(c);
        os.write(reinterpret_cast<const char*>(comp.data()),
                 static_cast<std::streamsize>(comp.size() * sizeof(std::complex<double>)));
    }
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path);

    std::ofstream manifest(path + ".manifest.txt");
    manifest << "format: NSSF v1\n"
             << "layout: header (magic, version u32, d u32, N u32, flags u64, time f64),"
                " then d blocks of N^d complex128 (little-endian), row-major storage with"
                " axis index i <-> frequency (i <= N/2-1 ? i : i - N)\n"
             << "convention: u(x) = sum_xi uhat(xi) e^(i xi.x); ||u||_2^2 = (2pi)^d"
                " sum |uhat|^2\n"
             << "d: " << f.dimension() << "\nN: " << f.grid_n() << "\ntime: " << time
             << "\nflags: " << flags << "\n";
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0, d = 0, n = 0;
    Snapshot snap;
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(&version), 4);
    is.read(reinterpret_cast<char*>(&d), 4);
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&snap.flags), 8);
    is.read(reinterpret_cast<char*>(&snap.time), 8);
    if (!is || std::memcmp(magic, "NSSF", 4) != 0 || version != 1)
        throw std::runtime_error("read_snapshot: bad header in " + path);
    snap.field = SpectralField(static_cast<int>(d), static_cast<int>(n));
    for (std::uint32_t c = 0; c < d; ++c) {
        auto& comp = snap.field.component(static_cast<int>(c));
        is.read(reinterpret_cast<char*>(comp.data()),
                static_cast<std::streamsize>(comp.size() * sizeof(std::complex<double>)));
    }
    if (!is) throw std::runtime_error("read_snapshot: truncated file " + path);
    return snap;
}

}  // namespace nsshell
