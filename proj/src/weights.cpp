#include "nsshell/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsshell::weights {

namespace {

using u128 = unsigned __int128;

// 2^(2^k) for k = 1..6. k = 6 already exceeds the int64 range, so the int64
// membership tests only ever match k <= 5.
constexpr int kMaxSmallK = 6;

u128 tower(int k) { return u128(1) << (1u << k); }

void require_positive(std::int64_t j, const char* who) {
    if (j < 1) throw std::invalid_argument(std::string(who) + ": index must be >= 1");
}

}  // namespace

int window_index(std::int64_t j) {
    if (j < 3) return 0;  // smallest window is {3, 4, 5}
    const u128 uj = static_cast<u128>(j);
    for (int k = 1; k <= kMaxSmallK; ++k) {
        const u128 t = tower(k);
        const u128 uk = static_cast<u128>(k);
        if (uj + uk < t) continue;
        if (uj > t + uk) continue;
        return k;
    }
    return 0;
}

int bound_window_index(std::int64_t j) {
    if (j < 3) return 0;
    const u128 uj = static_cast<u128>(j);
    for (int k = 1; k <= kMaxSmallK; ++k) {
        const u128 t = tower(k);
        if (uj + static_cast<u128>(k) < t) continue;
        if (uj > t + static_cast<u128>(2 * k)) continue;
        return k;
    }
    return 0;
}

int window_index_big(const BigIndex& j) {
    if (j <= std::numeric_limits<std::int64_t>::max())
        return j < 1 ? 0 : window_index(j.convert_to<std::int64_t>());
    // j = i + 2^(2^k) with |i| <= k forces bit_length(j) to be 2^k or 2^k + 1.
    const std::int64_t bits = bit_length(j);
    for (std::int64_t cand : {bits - 1, bits}) {
        if (cand < 2 || (cand & (cand - 1)) != 0) continue;
        int k = 0;
        while ((std::int64_t(1) << k) < cand) ++k;
        if (k > kMaxDilationLevel) continue;
        const BigIndex t = pow2_pow2(k);
        if (j >= t - k && j <= t + k) return k;
    }
    return 0;
}

double a(std::int64_t j) {
    require_positive(j, "a");
    return window_index(j) ? std::log2(static_cast<double>(j)) : 1.0;
}

double a_extended(std::int64_t j) {
    if (j < 1) return 1.0;
    return a(j);
}

double a_big(const BigIndex& j) {
    if (j < 1) return 1.0;
    return window_index_big(j) ? log2_big(j) : 1.0;
}

double b(std::int64_t j) {
    require_positive(j, "b");
    double value = 0.5 * a(1);
    for (std::int64_t i = 2; i <= j; ++i) value = 0.5 * (value + a(i));
    return value;
}

std::int64_t j0(double k) {
    if (!(k >= 1.0)) throw std::invalid_argument("j0: k must be >= 1");
    return static_cast<std::int64_t>(std::ceil(std::log2(k))) + 1;
}

std::vector<std::int64_t> s_window_set(std::int64_t n) {
    require_positive(n, "s_window_set");
    std::vector<std::int64_t> out;
    for (int k = 1; k <= kMaxSmallK; ++k) {
        const u128 t = tower(k);
        const u128 un = static_cast<u128>(n);
        if (t > un + static_cast<u128>(k)) break;
        const std::int64_t lo = static_cast<std::int64_t>(t - static_cast<u128>(k));
        const u128 hi128 = std::min<u128>(t + static_cast<u128>(2 * k), un);
        for (std::int64_t l = std::max<std::int64_t>(lo, 1);
             static_cast<u128>(l) <= hi128; ++l)
            out.push_back(l);
    }
    return out;
}

WeightTable WeightTable::build(std::int64_t max_index) {
    require_positive(max_index, "WeightTable::build");
    WeightTable t;
    t.max_index = max_index;
    t.window_index.assign(static_cast<std::size_t>(max_index), 0);
    for (int k = 1; k <= kMaxSmallK; ++k) {
        const u128 tw = tower(k);
        if (tw > static_cast<u128>(max_index) + static_cast<u128>(k)) break;
        const std::int64_t lo = std::max<std::int64_t>(static_cast<std::int64_t>(tw) - k, 1);
        const std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(tw) + k, max_index);
        for (std::int64_t j = lo; j <= hi; ++j) {
            auto& slot = t.window_index[static_cast<std::size_t>(j - 1)];
            if (slot != 0)
                throw std::logic_error("WeightTable: window overlap at j = " + std::to_string(j));
            slot = k;
        }
    }
    t.a_values.resize(static_cast<std::size_t>(max_index));
    t.b_values.resize(static_cast<std::size_t>(max_index));
    for (std::int64_t j = 1; j <= max_index; ++j) {
        const std::size_t idx = static_cast<std::size_t>(j - 1);
        t.a_values[idx] = t.window_index[idx] ? std::log2(static_cast<double>(j)) : 1.0;
        t.b_values[idx] = (j == 1) ? 0.5 * t.a_values[0]
                                   : 0.5 * (t.b_values[idx - 1] + t.a_values[idx]);
    }
    return t;
}

BoundCheckReport verify_lemma_3_1(std::int64_t j_max, double tol) {
    if (j_max < 4) throw std::invalid_argument("verify_lemma_3_1: j_max must be >= 4");
    BoundCheckReport report;
    report.checked = j_max;
    report.max_slack = -std::numeric_limits<double>::infinity();
    double bj = 0.5;  // b(1)
    for (std::int64_t j = 1; j <= j_max; ++j) {
        if (j > 1) bj = 0.5 * (bj + a(j));
        const double bound =
            bound_window_index(j) ? std::log2(static_cast<double>(j)) : 2.0;
        const double slack = bj - bound;
        if (slack > report.max_slack) {
            report.max_slack = slack;
            report.max_slack_index = j;
        }
        if (slack > tol && report.violations.size() < 32)
            report.violations.push_back({j, bj, bound});
    }
    report.pass = report.violations.empty();
    return report;
}

CardinalityCheckReport verify_lemma_3_2(std::int64_t n_max) {
    if (n_max < 4) throw std::invalid_argument("verify_lemma_3_2: n_max must be >= 4");
    CardinalityCheckReport report;
    report.checked = n_max - 3;
    std::int64_t cardinality = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        if (bound_window_index(n)) ++cardinality;
        if (n < 4) continue;
        const double llog = std::log2(std::log2(static_cast<double>(n)));
        const double bound = 0.5 * (3.0 * llog + 5.0) * llog;
        const double ratio = static_cast<double>(cardinality) / bound;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.max_ratio_index = n;
        }
        if (static_cast<double>(cardinality) > bound && report.violations.size() < 32)
            report.violations.push_back({n, static_cast<double>(cardinality), bound});
    }
    report.pass = report.violations.empty();
    return report;
}

AveragingReport averaging_sums(std::int64_t n_max) {
    require_positive(n_max, "averaging_sums");
    // j0(2k+1) <= ceil(log2(2 n_max + 1)) + 1; a table to 80 covers any
    // conceivable n_max.
    const WeightTable table = WeightTable::build(80);
    const auto bt = [&table](std::int64_t j) {
        return table.b_values[static_cast<std::size_t>(j - 1)];
    };

    AveragingReport report;
    double sum_even = 0.0, sum_odd = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        sum_even += bt(j0(2.0 * static_cast<double>(n)));
        sum_odd += bt(j0(2.0 * static_cast<double>(n) + 1.0));
        const double cap = 3.0 * static_cast<double>(n);
        const double ratio = std::max(sum_even, sum_odd) / cap;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.max_ratio_index = n;
        }
        if (sum_even > cap || sum_odd > cap) {
            if (report.first_violation == 0) report.first_violation = n;
            report.last_violation = n;
        }
    }
    report.stabilized = report.last_violation < n_max;
    report.n0 = report.last_violation == 0 ? 1 : report.last_violation + 1;

    // Decimated margin profile: dense head, dyadic spine, and the
    // neighborhoods of the violation boundaries.
    const auto keep = [&](std::int64_t n) {
        if (n <= 64 || n == n_max) return true;
        if ((n & (n - 1)) == 0) return true;
        const std::int64_t p2 = std::int64_t(1) << (63 - __builtin_clzll(static_cast<unsigned long long>(n)));
        if (n == p2 + p2 / 2) return true;
        for (std::int64_t ref : {report.first_violation, report.last_violation, report.n0})
            if (ref != 0 && std::llabs(n - ref) <= 24) return true;
        return false;
    };
    sum_even = sum_odd = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        sum_even += bt(j0(2.0 * static_cast<double>(n)));
        sum_odd += bt(j0(2.0 * static_cast<double>(n) + 1.0));
        if (keep(n)) report.profile.push_back({n, sum_even, sum_odd});
    }
    return report;
}

PowerSumBracket power_sum_bounds(std::int64_t n, double s) {
    require_positive(n, "power_sum_bounds");
    if (!(s >= 0.0)) throw std::invalid_argument("power_sum_bounds: s must be >= 0");
    PowerSumBracket out;
    for (std::int64_t k = 1; k <= n; ++k)
        out.sum += std::pow(static_cast<double>(k), s);
    out.lower = std::pow(static_cast<double>(n), s + 1.0) / (s + 1.0);
    out.upper = std::pow(static_cast<double>(n + 1), s + 1.0) / (s + 1.0);
    const double guard = 1e-12 * out.sum;
    out.holds = out.lower <= out.sum + guard && out.sum <= out.upper + guard;
    return out;
}

}  // namespace nsshell::weights
