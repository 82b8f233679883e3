#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nsshell/shell_profile.hpp"
#include "nsshell/weights.hpp"

using namespace nsshell;

namespace {

ShellProfile random_profile(std::mt19937_64& rng, int d, int max_abs_j = 12,
                            int max_entries = 8) {
    std::uniform_int_distribution<int> jpick(-max_abs_j, max_abs_j);
    std::uniform_real_distribution<double> cpick(0.05, 4.0);
    std::uniform_int_distribution<int> npick(1, max_entries);
    std::vector<std::pair<std::int64_t, double>> mags;
    const int n = npick(rng);
    for (int i = 0; i < n; ++i) mags.emplace_back(jpick(rng), cpick(rng));
    return ShellProfile::from_magnitudes(d, mags);
}

double critical_exponent(int d) { return -1.0 + 0.5 * d; }

}  // namespace

TEST_CASE("hdot norm basics") {
    ShellProfile empty(3);
    CHECK(hdot_norm(empty, 0.7) == 0.0);

    const auto p0 = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    CHECK(hdot_norm(p0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hdot_norm(p0, 2.5) == doctest::Approx(1.0).epsilon(1e-15));

    const auto p1 = ShellProfile::from_magnitudes(3, {{1, 1.0}});
    CHECK(hdot_norm(p1, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const auto p1d2 = ShellProfile::from_magnitudes(2, {{1, 1.0}});
    CHECK(hdot_norm(p1d2, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("x1 norm values") {
    const auto p0 = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    CHECK(x1_norm(p0) == doctest::Approx(1.0).epsilon(1e-15));

    const auto p3 = ShellProfile::from_magnitudes(3, {{3, 1.0}});
    CHECK(x1_norm(p3) ==
          doctest::Approx(std::exp2(1.5) / std::log2(3.0)).epsilon(1e-14));

    const auto p7 = ShellProfile::from_magnitudes(3, {{7, 1.0}});
    CHECK(x1_norm(p7) == doctest::Approx(std::exp2(3.5)).epsilon(1e-14));
}

TEST_CASE("x1 <= critical hdot for random profiles") {
    std::mt19937_64 rng(77001);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        const auto p = random_profile(rng, d);
        CHECK(x1_norm(p) <= hdot_norm(p, critical_exponent(d)) * (1.0 + 1e-12));
    }
}

TEST_CASE("removing an entry never increases the norms") {
    std::mt19937_64 rng(77002);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        auto p = random_profile(rng, d);
        if (p.empty()) continue;
        auto q = p;
        q.set_magnitude(p.entries().begin()->first, 0.0);
        CHECK(hdot_norm(q, 0.37) <= hdot_norm(p, 0.37) * (1.0 + 1e-12));
        CHECK(x1_norm(q) <= x1_norm(p) * (1.0 + 1e-12));
    }
}

TEST_CASE("dilate: worked single-shell case") {
    const auto p = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    const auto q = dilate(p, 1);  // shift by 2^(2^1) = 4
    REQUIRE(q.size() == 1);
    CHECK(q.magnitude(BigIndex(4)) == 0.25);
    CHECK(q.weighted(BigIndex(4)) == 1.0);
    CHECK(hdot_norm(p, 0.5) == hdot_norm(q, 0.5));  // critical norm, exact
}

TEST_CASE("dilate preserves the critical norm exactly") {
    std::mt19937_64 rng(77003);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = trial % 2 ? 2 : 3;
        const auto p = random_profile(rng, d);
        for (int l = 1; l <= 3; ++l) {
            const auto q = dilate(p, l);
            CHECK(hdot_norm(q, critical_exponent(d)) == hdot_norm(p, critical_exponent(d)));
        }
    }
}

TEST_CASE("dilate in d=2 is a pure index shift") {
    std::mt19937_64 rng(77004);
    const auto p = random_profile(rng, 2);
    const auto q = dilate(p, 2);
    const BigIndex m = pow2_pow2(2);
    REQUIRE(q.size() == p.size());
    for (const auto& [j, e] : p.entries()) {
        CHECK(q.magnitude(j + m) == e.magnitude);
        CHECK(q.weighted(j + m) == e.weighted);
    }
}

TEST_CASE("dilate scales the L2-level norm by 2^((2-d)m/2) on single shells") {
    for (int l = 1; l <= 2; ++l) {
        const double m = std::exp2(std::exp2(static_cast<double>(l)));
        const auto p = ShellProfile::from_magnitudes(3, {{2, 0.7}});
        const auto q = dilate(p, l);
        const double ratio = hdot_norm(q, 0.0) / hdot_norm(p, 0.0);
        CHECK(ratio == doctest::Approx(std::pow(2.0, -0.5 * m)).epsilon(1e-12));
    }
}

TEST_CASE("dilate is additive over disjoint supports and commutes with scaling") {
    const auto p = ShellProfile::from_magnitudes(3, {{-2, 0.3}, {1, 1.1}});
    const auto q = ShellProfile::from_magnitudes(3, {{5, 0.9}});
    auto joint = p;
    for (const auto& [j, e] : q.entries()) joint.set_magnitude(j, e.magnitude);

    const auto dj = dilate(joint, 2);
    const auto dp = dilate(p, 2);
    const auto dq = dilate(q, 2);
    for (const auto& [j, e] : dj.entries())
        CHECK(e.weighted == dp.weighted(j) + dq.weighted(j));

    auto scaled = ShellProfile::from_magnitudes(3, {{-2, 2.0 * 0.3}, {1, 2.0 * 1.1}});
    const auto ds = dilate(scaled, 2);
    for (const auto& [j, e] : dp.entries())
        CHECK(ds.weighted(j) == doctest::Approx(2.0 * e.weighted).epsilon(1e-15));
}

TEST_CASE("tail threshold") {
    const auto p0 = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    CHECK(tail_threshold(p0, 0.1) == 2);

    const auto p05 = ShellProfile::from_magnitudes(3, {{0, 1.0}, {5, 1.0}});
    CHECK(tail_threshold(p05, 1e-3) == 6);

    ShellProfile empty(3);
    CHECK(tail_threshold(empty, 0.5) == 2);
}

TEST_CASE("smallness threshold: worked case and trivial branch") {
    const auto p = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    CHECK(smallness_threshold(p, 0.1) == 5);

    // follow-up: the l = 5 dilation lands on the k=5 window where a = 32
    const auto q = dilate(p, 5);
    CHECK(x1_norm(q) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(x1_norm(q) <= 0.1);

    // eps above the x1 norm: the log term goes nonpositive, l0 = M + 1
    CHECK(smallness_threshold(p, 2.0) == 3);
}

TEST_CASE("rescaling smallness report") {
    const auto p = ShellProfile::from_magnitudes(3, {{0, 1.0}});
    const auto rep = verify_lemma_2_1(p, 0.1, 2);
    CHECK(rep.l0 == 5);
    CHECK(rep.tail_m == 2);
    CHECK(rep.pass);
    CHECK(rep.max_value <= 0.1);
    REQUIRE(rep.values.size() == 3);
    CHECK(rep.values[0].first == 5);

    std::mt19937_64 rng(77005);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = random_profile(rng, 3, 8);
        if (r.empty()) continue;
        const double eps = 0.5 * x1_norm(r);
        CHECK(verify_lemma_2_1(r, eps, 1).pass);
    }
}

TEST_CASE("uniform rescaling smallness over a trajectory of profiles") {
    std::mt19937_64 rng(77010);
    std::vector<ShellProfile> trajectory;
    double min_x1 = 1e300;
    for (int t = 0; t < 8; ++t) {
        auto p = random_profile(rng, 3, 10);
        if (p.empty()) p = ShellProfile::from_magnitudes(3, {{t, 1.0}});
        min_x1 = std::min(min_x1, x1_norm(p));
        trajectory.push_back(std::move(p));
    }
    const double eps = 0.25 * min_x1;
    const auto rep = verify_lemma_2_1_uniform(trajectory, eps, 1);
    CHECK(rep.pass);
    CHECK(rep.max_value <= eps * (1.0 + 1e-12));
    CHECK(rep.per_snapshot_l0.size() == trajectory.size());
    for (int l0 : rep.per_snapshot_l0) CHECK(l0 <= rep.shared_l0);
    CHECK_THROWS_AS(verify_lemma_2_1_uniform({}, 0.1, 0), std::invalid_argument);
}

TEST_CASE("profile serialization round-trips bit-exactly") {
    std::mt19937_64 rng(77006);
    for (int trial = 0; trial < 25; ++trial) {
        const auto p = random_profile(rng, trial % 2 ? 2 : 3);
        std::ostringstream first;
        write_profile(p, first);
        std::istringstream in(first.str());
        const auto q = read_profile(in);
        CHECK(q.dimension() == p.dimension());
        REQUIRE(q.size() == p.size());
        for (const auto& [j, e] : p.entries()) {
            CHECK(q.magnitude(j) == e.magnitude);
            CHECK(q.weighted(j) == e.weighted);
        }
        std::ostringstream second;
        write_profile(q, second);
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("profile input validation") {
    CHECK_THROWS(ShellProfile::from_magnitudes(3, {{0, -1.0}}));
    CHECK_THROWS(ShellProfile::from_magnitudes(1, {}));
    std::istringstream bad("not a header\n0\t1.0\n");
    CHECK_THROWS(read_profile(bad));
    CHECK_THROWS_AS(dilate(ShellProfile::from_magnitudes(3, {{0, 1.0}}), 0),
                    std::invalid_argument);
}
