#ifndef GMROI_ISOTONIC_HPP
#define GMROI_ISOTONIC_HPP

#include <vector>

#include "gmroi/core.hpp"

namespace gmroi {

struct MetricSeries {
    std::vector<double> xs;       // strictly increasing safety-stock levels
    std::vector<double> ys;       // metric values, same length
    std::vector<double> weights;  // positive; empty means all ones

    void validate() const;  // throws InvalidConfigError
};

// Weighted least-squares non-decreasing fit via pool-adjacent-violators.
// Blocks merge only on strict violations, so an already-monotone input comes
// back bit-identical.
std::vector<double> isotonic_fit(const MetricSeries& series);

// Fits margin, inventory and ISP independently against safety stock. The
// fitted ISP is clamped to [0,1] and its rational form re-derived by rounding
// the numerator at the scenario's denominator; the float mirrors the
// re-derived rational.
SkuScenarios preprocess_sku(const SkuScenarios& sku);

Bucket preprocess_bucket(const Bucket& bucket);

}  // namespace gmroi

#endif  // GMROI_ISOTONIC_HPP
