#pragma once

#include <cstdint>
#include <vector>

#include "nsshell/bigindex.hpp"

namespace nsshell::weights {

// The weight sequence a(j) equals log2(j) on sparse "special windows" around
// the towers 2^(2^k) and 1 everywhere else:
//
//     a(j) = log2 j   if j = i + 2^(2^k), k >= 1, |i| <= k,
//     a(j) = 1        otherwise (including all j <= 0).
//
// The averaged sequence b(j) = 2^(-j-1) * sum_{i=1..j} 2^i a(i) obeys
// b(j+1) = (b(j) + a(j+1)) / 2 and stays in [1/2, max(2, log2 j)].
// The bound windows used by that estimate (and by S(n)) are wider on the
// right: -k + 2^(2^k) <= j <= 2^(2^k) + 2k.

/// k >= 1 if j lies in the special window of the a-sequence (|j - 2^(2^k)| <= k),
/// 0 otherwise. Exact integer arithmetic for the full int64 range.
int window_index(std::int64_t j);

/// Same test for the wider window -k <= j - 2^(2^k) <= 2k.
int bound_window_index(std::int64_t j);

/// Window test for indices beyond int64 range (dilated shell indices).
int window_index_big(const BigIndex& j);

/// a(j) for j >= 1; throws std::invalid_argument for j < 1.
double a(std::int64_t j);

/// a extended by 1 to j <= 0, as used by the weighted shell norm.
double a_extended(std::int64_t j);

/// a on arbitrary-precision indices (extended by 1 to j <= 0).
double a_big(const BigIndex& j);

/// b(j) for j >= 1 via the averaging recursion; throws for j < 1.
double b(std::int64_t j);

/// j0(k) = ceil(log2 k) + 1 for real k >= 1; satisfies 2^j0 >= 2k.
std::int64_t j0(double k);

/// S(n): indices l <= n covered by some bound window. Sorted ascending.
std::vector<std::int64_t> s_window_set(std::int64_t n);

/// Memoized table of a, b and window membership for j = 1..max_index.
struct WeightTable {
    std::int64_t max_index = 0;
    std::vector<double> a_values;             // a_values[j-1] = a(j)
    std::vector<double> b_values;             // b_values[j-1] = b(j)
    std::vector<std::int32_t> window_index;   // 0 = no window, else k

    static WeightTable build(std::int64_t max_index);
};

struct Violation {
    std::int64_t index = 0;
    double value = 0.0;   // b(j) or |S(n)|
    double bound = 0.0;
};

/// Exhaustive check of the two-case bound on b(j):
/// b(j) <= log2 j on bound windows, b(j) <= 2 elsewhere.
struct BoundCheckReport {
    bool pass = false;
    std::int64_t checked = 0;
    double max_slack = 0.0;        // max over j of b(j) - bound(j); <= 0 when all pass
    std::int64_t max_slack_index = 0;
    std::vector<Violation> violations;   // capped at 32 entries
};
BoundCheckReport verify_lemma_3_1(std::int64_t j_max, double tol = 1e-10);

/// Exhaustive check of |S(n)| <= (3*log2log2(n) + 5)*log2log2(n)/2 for n >= 4.
struct CardinalityCheckReport {
    bool pass = false;
    std::int64_t checked = 0;
    double max_ratio = 0.0;        // max over n of |S(n)| / bound(n)
    std::int64_t max_ratio_index = 0;
    std::vector<Violation> violations;
};
CardinalityCheckReport verify_lemma_3_2(std::int64_t n_max);

/// Partial sums sum_{k=1..n} b(j0(2k)) and sum_{k=1..n} b(j0(2k+1)) checked
/// against 3n. Returns the minimal n0 such that both sums stay <= 3n on
/// [n0, n_max], together with a decimated margin profile.
struct MarginSample {
    std::int64_t n = 0;
    double sum_even = 0.0;   // sum of b(j0(2k)), k <= n
    double sum_odd = 0.0;    // sum of b(j0(2k+1)), k <= n
};
struct AveragingReport {
    bool stabilized = false;       // false: bound still violated at n_max
    std::int64_t n0 = 0;           // minimal n0 (valid when stabilized)
    std::int64_t first_violation = 0;   // 0 when the bound never fails
    std::int64_t last_violation = 0;
    double max_ratio = 0.0;        // max over n of max(sum_even, sum_odd)/(3n)
    std::int64_t max_ratio_index = 0;
    std::vector<MarginSample> profile;
};
AveragingReport averaging_sums(std::int64_t n_max);

/// Bracket n^(s+1)/(s+1) <= sum_{k=1..n} k^s <= (n+1)^(s+1)/(s+1).
struct PowerSumBracket {
    double lower = 0.0;
    double sum = 0.0;
    double upper = 0.0;
    bool holds = false;
};
PowerSumBracket power_sum_bounds(std::int64_t n, double s);

}  // namespace nsshell::weights
