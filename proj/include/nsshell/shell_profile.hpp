#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "nsshell/bigindex.hpp"

namespace nsshell {

// Sparse dyadic shell profile of a field: index j holds the L2 mass of the
// frequency annulus 2^(j-1) <= |xi| < 2^j.
//
// Internally every entry is kept as the critically weighted value
//
//     w_j = 2^(j(-1 + d/2)) * c_j,
//
// because rescaling by lambda = 2^(2^l) then becomes a pure index shift with
// no amplitude change; the raw magnitudes would pick up factors like
// 2^(2^31) that cancel analytically but are unrepresentable. The raw
// magnitude is kept alongside when it is a finite double.

struct ShellEntry {
    double weighted = 0.0;       // w_j (canonical)
    double magnitude = 0.0;      // c_j; may be 0/inf after extreme dilations
    bool magnitude_exact = true; // false once c_j involved a sqrt(2) rounding
};

class ShellProfile {
public:
    explicit ShellProfile(int dimension);

    /// Builds from raw (j, c_j) pairs on ordinary integer indices.
    /// Rejects negative, NaN or infinite magnitudes; drops exact zeros.
    static ShellProfile from_magnitudes(
        int dimension, const std::vector<std::pair<std::int64_t, double>>& magnitudes);

    int dimension() const { return dimension_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::map<BigIndex, ShellEntry>& entries() const { return entries_; }

    /// c_j (0 when absent).
    double magnitude(const BigIndex& j) const;
    /// w_j (0 when absent).
    double weighted(const BigIndex& j) const;

    void set_magnitude(const BigIndex& j, double c);
    void set_weighted(const BigIndex& j, double w, double magnitude, bool magnitude_exact);

private:
    int dimension_;
    std::map<BigIndex, ShellEntry> entries_;
};

/// (sum_j 2^(2sj) c_j^2)^(1/2); terms are accumulated in descending magnitude
/// order, scaled by the leading term so exponents like 2^(s * 2^32) cannot
/// overflow intermediates.
double hdot_norm(const ShellProfile& p, double s);

/// l2 norm of { 2^(j(-1+d/2)) a(j)^-1 c_j }, with a extended by 1 to j <= 0.
double x1_norm(const ShellProfile& p);

/// Profile of x -> lambda v(lambda x) for lambda = 2^(2^l): indices shift up
/// by 2^(2^l) and the critically weighted values are unchanged.
ShellProfile dilate(const ShellProfile& p, int l);

/// Minimal M >= 2 with sum_{|j| >= M} w_j^2 <= eps^2 / 2. The floor at 2
/// keeps log2(M) >= 1, which the rescaling threshold below relies on.
std::int64_t tail_threshold(const ShellProfile& p, double eps);

/// l0 = ceil(max{M + 1, log2(log2(M) ||v||_X1 / eps) + 1}).
int smallness_threshold(const ShellProfile& p, double eps);

/// Evaluates the rescaling-smallness guarantee: x1_norm(dilate(p, l)) <= eps
/// for every l in [l0, l0 + extra_l].
struct RescaleSmallnessReport {
    int l0 = 0;
    std::int64_t tail_m = 0;
    double eps = 0.0;
    double x1_before = 0.0;
    std::vector<std::pair<int, double>> values;  // (l, x1 after dilation)
    double max_value = 0.0;
    bool pass = false;
};
RescaleSmallnessReport verify_lemma_2_1(const ShellProfile& p, double eps, int extra_l);

/// Uniform-in-time variant over a trajectory of profiles: one shared
/// l0 = max of the per-snapshot thresholds must make every snapshot small.
struct UniformRescaleReport {
    int shared_l0 = 0;
    double eps = 0.0;
    double max_value = 0.0;
    bool pass = false;
    std::vector<int> per_snapshot_l0;
};
UniformRescaleReport verify_lemma_2_1_uniform(const std::vector<ShellProfile>& snapshots,
                                              double eps, int extra_l);

/// Text format: header "# d=<dim>", then one "j<TAB>c_j" line per entry in
/// ascending index order, magnitudes printed with 17 significant digits.
void write_profile(const ShellProfile& p, std::ostream& os);
ShellProfile read_profile(std::istream& is);

}  // namespace nsshell
