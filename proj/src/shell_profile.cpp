#include "nsshell/shell_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nsshell/weights.hpp"

namespace nsshell {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// w = c * 2^(e2/2) with e2 = j * (d - 2). Exact (pure ldexp) when e2 is even.
struct Scaled {
    double value;
    bool exact;
};

Scaled apply_half_exponent(double x, const BigIndex& e2) {
    if (x == 0.0) return {0.0, true};
    // Exponents beyond +-6000 saturate doubles no matter the mantissa.
    if (e2 > 6000) return {std::numeric_limits<double>::infinity(), false};
    if (e2 < -6000) return {0.0, false};
    const std::int64_t e = e2.convert_to<std::int64_t>();
    const std::int64_t half = e >= 0 ? e / 2 : -((-e) / 2);
    double out = std::ldexp(x, static_cast<int>(half));
    bool exact = true;
    if (e % 2 != 0) {
        out = e > 0 ? out * kSqrt2 : out / kSqrt2;
        exact = false;
    }
    if (!std::isfinite(out)) exact = false;
    return {out, exact};
}

// Scaled descending-order accumulation of an l2 norm whose terms are given
// as log2 magnitudes.
double l2_from_log2_terms(std::vector<double>& log2_terms) {
    if (log2_terms.empty()) return 0.0;
    std::sort(log2_terms.begin(), log2_terms.end(), std::greater<double>());
    const double lead = log2_terms.front();
    if (lead == -std::numeric_limits<double>::infinity()) return 0.0;
    if (!std::isfinite(lead)) return std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double t : log2_terms) acc += std::exp2(2.0 * (t - lead));
    return std::exp2(lead) * std::sqrt(acc);
}

}  // namespace

ShellProfile::ShellProfile(int dimension) : dimension_(dimension) {
    if (dimension < 2) throw std::invalid_argument("ShellProfile: dimension must be >= 2");
}

ShellProfile ShellProfile::from_magnitudes(
    int dimension, const std::vector<std::pair<std::int64_t, double>>& magnitudes) {
    ShellProfile p(dimension);
    for (const auto& [j, c] : magnitudes) p.set_magnitude(BigIndex(j), c);
    return p;
}

double ShellProfile::magnitude(const BigIndex& j) const {
    auto it = entries_.find(j);
    return it == entries_.end() ? 0.0 : it->second.magnitude;
}

double ShellProfile::weighted(const BigIndex& j) const {
    auto it = entries_.find(j);
    return it == entries_.end() ? 0.0 : it->second.weighted;
}

void ShellProfile::set_magnitude(const BigIndex& j, double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("ShellProfile: magnitudes must be finite and >= 0");
    if (c == 0.0) {
        entries_.erase(j);
        return;
    }
    const Scaled w = apply_half_exponent(c, j * (dimension_ - 2));
    if (!std::isfinite(w.value) || w.value == 0.0)
        throw std::invalid_argument(
            "ShellProfile: index too extreme for the weighted representation");
    entries_[j] = ShellEntry{w.value, c, true};
}

void ShellProfile::set_weighted(const BigIndex& j, double w, double magnitude,
                                bool magnitude_exact) {
    if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument("ShellProfile: weighted values must be finite and >= 0");
    if (w == 0.0) {
        entries_.erase(j);
        return;
    }
    entries_[j] = ShellEntry{w, magnitude, magnitude_exact};
}

double hdot_norm(const ShellProfile& p, double s) {
    // 2^(sj) c_j = 2^(alpha j) w_j with alpha = s + 1 - d/2.
    const double alpha = s + 1.0 - 0.5 * p.dimension();
    std::vector<double> terms;
    terms.reserve(p.size());
    for (const auto& [j, e] : p.entries()) {
        const double jd = to_double_saturating(j);
        const double shift = alpha == 0.0 ? 0.0 : alpha * jd;
        terms.push_back(shift + std::log2(e.weighted));
    }
    return l2_from_log2_terms(terms);
}

double x1_norm(const ShellProfile& p) {
    std::vector<double> terms;
    terms.reserve(p.size());
    for (const auto& [j, e] : p.entries())
        terms.push_back(std::log2(e.weighted) - std::log2(weights::a_big(j)));
    return l2_from_log2_terms(terms);
}

ShellProfile dilate(const ShellProfile& p, int l) {
    if (l < 1) throw std::invalid_argument("dilate: level must be >= 1");
    const BigIndex m = pow2_pow2(l);  // throws beyond the supported range
    ShellProfile out(p.dimension());
    for (const auto& [j, e] : p.entries()) {
        const BigIndex shifted = j + m;
        // c' = w * 2^(-(j+m)(d/2-1)); exactness survives only when the
        // exponent is even (d = 2, or even index in d = 3).
        const Scaled c = apply_half_exponent(e.weighted, -(shifted * (p.dimension() - 2)));
        out.set_weighted(shifted, e.weighted, c.value, c.exact && e.magnitude_exact);
    }
    return out;
}

std::int64_t tail_threshold(const ShellProfile& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("tail_threshold: eps must be > 0");
    const double budget = 0.5 * eps * eps;

    std::vector<std::pair<BigIndex, double>> by_absj;
    by_absj.reserve(p.size());
    for (const auto& [j, e] : p.entries())
        by_absj.emplace_back(boost::multiprecision::abs(j), e.weighted * e.weighted);
    std::sort(by_absj.begin(), by_absj.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    const auto tail_from = [&](const BigIndex& m) {
        double t = 0.0;
        for (auto it = by_absj.rbegin(); it != by_absj.rend() && it->first >= m; ++it)
            t += it->second;
        return t;
    };

    if (tail_from(2) <= budget) return 2;
    for (const auto& [absj, w2] : by_absj) {
        (void)w2;
        const BigIndex candidate = absj + 1;
        if (candidate < 2) continue;
        if (tail_from(candidate) <= budget) {
            if (candidate > std::numeric_limits<std::int64_t>::max())
                throw std::overflow_error("tail_threshold: support too deep for an int64 M");
            return candidate.convert_to<std::int64_t>();
        }
    }
    throw std::logic_error("tail_threshold: finite support must yield a threshold");
}

int smallness_threshold(const ShellProfile& p, double eps) {
    if (p.empty()) throw std::invalid_argument("smallness_threshold: profile is empty");
    if (!(eps > 0.0)) throw std::invalid_argument("smallness_threshold: eps must be > 0");
    const std::int64_t m = tail_threshold(p, eps);
    const double x1 = x1_norm(p);
    const double second = std::log2(std::log2(static_cast<double>(m)) * x1 / eps) + 1.0;
    const double l0 = std::ceil(std::max(static_cast<double>(m + 1), second));
    if (l0 > kMaxDilationLevel)
        throw std::overflow_error("smallness_threshold: l0 exceeds the supported dilation range");
    return static_cast<int>(l0);
}

RescaleSmallnessReport verify_lemma_2_1(const ShellProfile& p, double eps, int extra_l) {
    if (extra_l < 0) throw std::invalid_argument("verify_lemma_2_1: extra_l must be >= 0");
    RescaleSmallnessReport report;
    report.eps = eps;
    report.x1_before = x1_norm(p);
    report.tail_m = tail_threshold(p, eps);
    report.l0 = smallness_threshold(p, eps);
    report.pass = true;
    for (int l = report.l0; l <= report.l0 + extra_l; ++l) {
        const double v = x1_norm(dilate(p, l));
        report.values.emplace_back(l, v);
        report.max_value = std::max(report.max_value, v);
        if (v > eps * (1.0 + 1e-12)) report.pass = false;
    }
    return report;
}

UniformRescaleReport verify_lemma_2_1_uniform(const std::vector<ShellProfile>& snapshots,
                                              double eps, int extra_l) {
    if (snapshots.empty())
        throw std::invalid_argument("verify_lemma_2_1_uniform: no snapshots");
    UniformRescaleReport report;
    report.eps = eps;
    for (const auto& p : snapshots) {
        const int l0 = smallness_threshold(p, eps);
        report.per_snapshot_l0.push_back(l0);
        report.shared_l0 = std::max(report.shared_l0, l0);
    }
    report.pass = true;
    for (const auto& p : snapshots)
        for (int l = report.shared_l0; l <= report.shared_l0 + extra_l; ++l) {
            const double v = x1_norm(dilate(p, l));
            report.max_value = std::max(report.max_value, v);
            if (v > eps * (1.0 + 1e-12)) report.pass = false;
        }
    return report;
}

void write_profile(const ShellProfile& p, std::ostream& os) {
    os << "# d=" << p.dimension() << "\n";
    char buf[64];
    for (const auto& [j, e] : p.entries()) {
        if (!std::isfinite(e.magnitude) || e.magnitude == 0.0)
            throw std::runtime_error(
                "write_profile: entry magnitude not representable in the text format");
        std::snprintf(buf, sizeof buf, "%.17g", e.magnitude);
        os << j << "\t" << buf << "\n";
    }
}

ShellProfile read_profile(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("read_profile: empty input");
    int d = 0;
    if (std::sscanf(line.c_str(), "# d=%d", &d) != 1)
        throw std::runtime_error("read_profile: missing '# d=<dim>' header");
    ShellProfile p(d);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string index_str;
        double c = 0.0;
        if (!(ls >> index_str >> c))
            throw std::runtime_error("read_profile: malformed line: " + line);
        p.set_magnitude(BigIndex(index_str), c);
    }
    return p;
}

}  // namespace nsshell
