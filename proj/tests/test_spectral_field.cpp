#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "nsshell/spectral_field.hpp"

using namespace nsshell;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

PhysicalGrid random_physical(int dim, int n, std::uint64_t seed) {
    PhysicalGrid g;
    g.dim = dim;
    g.n = n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pick(-1.0, 1.0);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    for (int c = 0; c < dim; ++c) {
        g.comps[c].resize(total);
        for (auto& v : g.comps[c]) v = pick(rng);
    }
    return g;
}

double quadrature_l2_sq(const PhysicalGrid& g) {
    double s = 0.0;
    for (int c = 0; c < g.dim; ++c)
        for (double v : g.comps[c]) s += v * v;
    double h = 1.0;
    for (int i = 0; i < g.dim; ++i) h *= kTwoPi / g.n;
    return h * s;
}

}  // namespace

TEST_CASE("single cosine mode transforms to one coefficient pair") {
    PhysicalGrid g;
    g.dim = 2;
    g.n = 16;
    g.comps[0].resize(256);
    g.comps[1].assign(256, 0.0);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            g.comps[0][static_cast<std::size_t>(i * 16 + j)] = std::cos(kTwoPi * i / 16.0);
    const auto f = transform_to_spectral(g);
    CHECK(std::abs(f.coeff(0, {1, 0, 0}) - std::complex<double>(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(f.coeff(0, {-1, 0, 0}) - std::complex<double>(0.5, 0.0)) < 1e-14);
    double rest = 0.0;
    for (std::size_t flat = 0; flat < f.modes_per_component(); ++flat) {
        std::array<int, 3> xi{};
        f.wavevector(flat, xi);
        if (std::abs(xi[0]) == 1 && xi[1] == 0) continue;
        rest = std::max(rest, std::abs(f.component(0)[flat]));
    }
    CHECK(rest < 1e-14);
}

TEST_CASE("transform round-trip and Parseval") {
    for (int dim : {2, 3}) {
        const int n = dim == 2 ? 32 : 16;
        const auto g = random_physical(dim, n, 42 + dim);
        const auto f = transform_to_spectral(g);
        const auto back = transform_to_physical(f);
        double worst = 0.0;
        for (int c = 0; c < dim; ++c)
            for (std::size_t i = 0; i < g.comps[c].size(); ++i)
                worst = std::max(worst, std::abs(g.comps[c][i] - back.comps[c][i]));
        CHECK(worst < 1e-12);
        CHECK(l2_sq(f) == doctest::Approx(quadrature_l2_sq(g)).epsilon(1e-12));
    }
}

TEST_CASE("cutoff algebra is exact") {
    const auto f = random_divergence_free(3, 16, 9001, 1, 3, 0.4);
    const auto hi0 = high_pass(f, 0.0);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.modes_per_component(); ++i)
            CHECK(hi0.component(c)[i] == f.component(c)[i]);

    for (double k : {1.0, 2.5, 3.5, 4.0}) {
        const auto lo = low_pass(f, k);
        const auto hi = high_pass(f, k);
        // complement: low + high = identity, coefficientwise
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < f.modes_per_component(); ++i)
                CHECK(lo.component(c)[i] + hi.component(c)[i] == f.component(c)[i]);
        // disjoint supports: exact orthogonality and Pythagoras
        for (double l : {k, k + 1.0}) {
            CHECK(inner_product(lo, high_pass(f, l)) == 0.0);
        }
        CHECK(l2_sq(lo) + l2_sq(hi) == doctest::Approx(l2_sq(f)).epsilon(1e-13));
    }

    const auto band = band_pass(f, 2.0, 4.0);
    auto diff = high_pass(f, 2.0);
    diff.add_scaled(high_pass(f, 4.0), -1.0);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.modes_per_component(); ++i)
            CHECK(band.component(c)[i] == diff.component(c)[i]);

    CHECK_THROWS_AS(band_pass(f, 4.0, 4.0), std::invalid_argument);
}

TEST_CASE("shell and annulus binning") {
    SpectralField f(3, 16);
    f.set_coeff(0, {1, 0, 0}, {0.0, -0.5});
    f.set_coeff(0, {-1, 0, 0}, {0.0, 0.5});
    const auto p1 = shell_profile_of(f);
    REQUIRE(p1.size() == 1);
    CHECK(p1.magnitude(BigIndex(1)) > 0.0);

    SpectralField g(3, 16);
    g.set_coeff(0, {1, 1, 0}, {0.5, 0.0});  // |xi| = sqrt(2)
    g.set_coeff(0, {-1, -1, 0}, {0.5, 0.0});
    const auto p2 = shell_profile_of(g);
    REQUIRE(p2.size() == 1);
    CHECK(p2.magnitude(BigIndex(1)) > 0.0);
    const auto ap = annulus_profile_of(g);
    CHECK(ap.magnitudes[1] > 0.0);
    CHECK(ap.magnitudes[0] == 0.0);

    // partition of energy across shells + zero mode
    const auto r = random_divergence_free(3, 16, 555, 1, 3, 0.2);
    const auto prof = shell_profile_of(r);
    double sum = 0.0;
    for (const auto& [j, e] : prof.entries()) sum += e.magnitude * e.magnitude;
    CHECK(sum == doctest::Approx(l2_sq(r)).epsilon(1e-12));
    const auto ann = annulus_energies(r);
    double asum = 0.0;
    for (double v : ann) asum += v;
    CHECK(asum == doctest::Approx(l2_sq(r)).epsilon(1e-12));
}

TEST_CASE("leray projection") {
    // gradient field: uhat parallel to xi -> projected to zero
    SpectralField grad(2, 16);
    grad.set_coeff(0, {2, 1, 0}, {0.4, -0.1});
    grad.set_coeff(1, {2, 1, 0}, {0.2, -0.05});
    grad.set_coeff(0, {-2, -1, 0}, {0.4, 0.1});
    grad.set_coeff(1, {-2, -1, 0}, {0.2, 0.05});
    CHECK(l2_norm(leray_project(grad)) < 1e-15);

    const auto f = random_divergence_free(2, 32, 123, 1, 3, 0.3);
    const auto pf = leray_project(f);
    CHECK(l2_distance(pf, f) < 1e-13 * l2_norm(f));  // already divergence-free
    CHECK(pf.divergence_rel() < 1e-13);

    // idempotent and self-adjoint on a generic (non-divfree) field
    const auto g = transform_to_spectral(random_physical(2, 32, 77));
    const auto pg = leray_project(g);
    CHECK(l2_distance(leray_project(pg), pg) < 1e-14 * l2_norm(g));
    const auto h = transform_to_spectral(random_physical(2, 32, 78));
    CHECK(inner_product(pg, h) ==
          doctest::Approx(inner_product(g, leray_project(h))).epsilon(1e-12));
}

TEST_CASE("convect: constant field has zero convection") {
    const auto u = random_divergence_free(2, 16, 31, 1, 2, 0.0);
    SpectralField w(2, 16);
    w.set_coeff(0, {0, 0, 0}, {0.7, 0.0});
    w.set_coeff(1, {0, 0, 0}, {-0.3, 0.0});
    CHECK(convect(u, w).max_abs_coeff() == 0.0);
}

TEST_CASE("convect: Taylor-Green advection is a pure gradient") {
    const auto u = taylor_green_2d(32);
    const auto nl = convect(u, u);
    CHECK(l2_norm(nl) > 0.1);  // the term itself is not small
    CHECK(l2_norm(leray_project(nl)) <= 1e-12 * l2_norm(nl));
}

TEST_CASE("convect: product support vanishing") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> apick(2, 5);
    const auto u = random_divergence_free(2, 32, 600, 1, 4, 0.1);
    const auto w = random_divergence_free(2, 32, 601, 1, 4, 0.1);
    const auto v = random_divergence_free(2, 32, 602, 1, 4, 0.1);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = apick(rng), b = apick(rng);
        const auto prod = convect(low_pass(u, a), low_pass(w, b));
        const auto probe = high_pass(v, a + b + 1.0);
        const double ip = inner_product(prod, probe);
        const double scale = l2_norm(prod) * l2_norm(probe);
        if (scale == 0.0) continue;
        CHECK(std::abs(ip) <= 1e-12 * scale);
    }
}

TEST_CASE("convect: energy cancellation ((u.grad)u, u) = 0") {
    for (int dim : {2, 3}) {
        const auto u = random_divergence_free(dim, dim == 2 ? 32 : 16, 890 + dim, 1, 3, 0.5);
        const double ip = inner_product(convect(u, u), u);
        const double scale = l2_norm(u) * std::sqrt(hdot_sq(u, 1.0)) * linf_norm(u);
        CHECK(std::abs(ip) <= 1e-12 * scale);
    }
}

TEST_CASE("pointwise norms") {
    SpectralField f(2, 16);
    // A cos(x) in the first component: peak magnitude exactly A on the grid
    f.set_coeff(0, {1, 0, 0}, {0.6, 0.0});
    f.set_coeff(0, {-1, 0, 0}, {0.6, 0.0});
    CHECK(linf_norm(f) == doctest::Approx(1.2).epsilon(1e-13));
    CHECK(grad_linf_norm(f) == doctest::Approx(1.2).epsilon(1e-13));
    CHECK(linf_norm(SpectralField(2, 16)) == 0.0);

    // triangle bound against the coefficient l1 mass
    const auto r = random_divergence_free(3, 16, 4242, 1, 3, 0.1);
    CHECK(linf_norm(r) <= coefficient_l1_lowpass(r, 1e9) * (1.0 + 1e-12));
}

TEST_CASE("lattice shell counts") {
    CHECK(lattice_count_shell(2, 1) == 8);    // |xi|^2 in {1, 2, 3}? -> {1,2}: 4 + 4
    CHECK(lattice_count_shell(3, 1) == 26);   // 6 + 12 + 8
    // shell 2 in 3d: 4 <= |xi|^2 < 16
    std::int64_t count = 0;
    for (int x = -4; x <= 4; ++x)
        for (int y = -4; y <= 4; ++y)
            for (int z = -4; z <= 4; ++z) {
                const int q = x * x + y * y + z * z;
                if (q >= 4 && q < 16) ++count;
            }
    CHECK(lattice_count_shell(3, 2) == count);
}

TEST_CASE("presets: Taylor-Green fields") {
    const auto tg2 = taylor_green_2d(32, 1.25);
    CHECK(tg2.divergence_rel() == 0.0);
    CHECK(tg2.hermitian_defect() == 0.0);
    CHECK(l2_sq(tg2) ==
          doctest::Approx(2.0 * std::pow(M_PI, 2) * 1.25 * 1.25).epsilon(1e-13));
    // pointwise values match A sin x cos y at a grid point
    const auto phys = transform_to_physical(tg2);
    const int n = 32;
    const double x = kTwoPi * 3 / n, y = kTwoPi * 7 / n;
    CHECK(phys.comps[0][static_cast<std::size_t>(3 * n + 7)] ==
          doctest::Approx(1.25 * std::sin(x) * std::cos(y)).epsilon(1e-12));
    CHECK(phys.comps[1][static_cast<std::size_t>(3 * n + 7)] ==
          doctest::Approx(-1.25 * std::cos(x) * std::sin(y)).epsilon(1e-12));

    const auto tg3 = taylor_green_3d(16, 0.8);
    CHECK(tg3.divergence_rel() == 0.0);
    CHECK(l2_sq(tg3) ==
          doctest::Approx(2.0 * std::pow(M_PI, 3) * 0.8 * 0.8).epsilon(1e-13));
}

TEST_CASE("random divergence-free preset") {
    const auto f = random_divergence_free(3, 32, 777, 2, 4, 0.5, 2.0);
    CHECK(f.divergence_rel() < 1e-13);
    CHECK(f.hermitian_defect() < 1e-13);
    const auto prof = shell_profile_of(f);
    CHECK(prof.magnitude(BigIndex(2)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(prof.magnitude(BigIndex(3)) == doctest::Approx(2.0 * std::exp2(-0.5)).epsilon(1e-12));
    CHECK(prof.magnitude(BigIndex(4)) == doctest::Approx(2.0 * std::exp2(-1.0)).epsilon(1e-12));

    const auto same = random_divergence_free(3, 32, 777, 2, 4, 0.5, 2.0);
    CHECK(l2_distance(f, same) == 0.0);
    const auto other = random_divergence_free(3, 32, 778, 2, 4, 0.5, 2.0);
    CHECK(l2_distance(f, other) > 0.1);
}

TEST_CASE("snapshot io round-trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "nsshell_test_snap";
    fs::create_directories(dir);
    const auto path = (dir / "field.nssf").string();

    const auto f = random_divergence_free(2, 32, 31337, 1, 3, 0.25);
    write_snapshot(f, path, 0.625, kSnapshotDivFree | kSnapshotMeanFree);
    CHECK(fs::exists(path + ".manifest.txt"));

    const auto snap = read_snapshot(path);
    CHECK(snap.time == 0.625);
    CHECK(snap.flags == (kSnapshotDivFree | kSnapshotMeanFree));
    CHECK(snap.field.dimension() == 2);
    CHECK(snap.field.grid_n() == 32);
    CHECK(l2_distance(snap.field, f) == 0.0);
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < f.modes_per_component(); ++i)
            CHECK(snap.field.component(c)[i] == f.component(c)[i]);
    fs::remove_all(dir);
}
