#include "gmroi/isotonic.hpp"

#include <algorithm>
#include <cmath>

namespace gmroi {

void MetricSeries::validate() const {
    if (xs.empty() || xs.size() != ys.size()) {
        throw InvalidConfigError("series xs/ys must be non-empty and aligned");
    }
    if (!weights.empty() && weights.size() != ys.size()) {
        throw InvalidConfigError("weights must be empty or match ys");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && !(xs[i] > xs[i - 1])) {
            throw InvalidConfigError("xs must be strictly increasing");
        }
        if (!std::isfinite(ys[i])) {
            throw InvalidConfigError("ys must be finite");
        }
        if (!weights.empty() && !(weights[i] > 0.0)) {
            throw InvalidConfigError("weights must be positive");
        }
    }
}

std::vector<double> isotonic_fit(const MetricSeries& series) {
    series.validate();
    const std::size_t n = series.ys.size();

    struct Block {
        double weight;
        double mean;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double w = series.weights.empty() ? 1.0 : series.weights[i];
        blocks.push_back({w, series.ys[i], 1});
        while (blocks.size() >= 2 &&
               blocks[blocks.size() - 2].mean > blocks.back().mean) {
            const Block hi = blocks.back();
            blocks.pop_back();
            Block& lo = blocks.back();
            const double total = lo.weight + hi.weight;
            lo.mean = (lo.weight * lo.mean + hi.weight * hi.mean) / total;
            lo.weight = total;
            lo.count += hi.count;
        }
    }

    std::vector<double> fit;
    fit.reserve(n);
    for (const Block& b : blocks) {
        fit.insert(fit.end(), b.count, b.mean);
    }
    return fit;
}

namespace {

MetricSeries series_for(const SkuScenarios& sku,
                        double (*pick)(const ScenarioMetrics&)) {
    MetricSeries s;
    s.xs.reserve(sku.scenarios.size());
    s.ys.reserve(sku.scenarios.size());
    for (const auto& m : sku.scenarios) {
        s.xs.push_back(static_cast<double>(m.safety_stock));
        s.ys.push_back(pick(m));
    }
    return s;
}

}  // namespace

SkuScenarios preprocess_sku(const SkuScenarios& sku) {
    if (sku.scenarios.size() <= 1) return sku;

    const auto margins = isotonic_fit(
        series_for(sku, [](const ScenarioMetrics& m) { return m.margin; }));
    const auto inventories = isotonic_fit(
        series_for(sku, [](const ScenarioMetrics& m) { return m.inventory; }));
    const auto isps = isotonic_fit(
        series_for(sku, [](const ScenarioMetrics& m) { return m.isp; }));

    SkuScenarios out = sku;
    for (std::size_t i = 0; i < out.scenarios.size(); ++i) {
        auto& m = out.scenarios[i];
        m.margin = margins[i];
        m.inventory = inventories[i];
        const double clamped = std::clamp(isps[i], 0.0, 1.0);
        const auto num = static_cast<std::uint64_t>(
            std::llround(clamped * static_cast<double>(m.isp_den)));
        m.isp_num = std::min(num, m.isp_den);
        m.isp = static_cast<double>(m.isp_num) /
                static_cast<double>(m.isp_den);
    }
    return out;
}

Bucket preprocess_bucket(const Bucket& bucket) {
    Bucket out = bucket;
    for (auto& sku : out.skus) sku = preprocess_sku(sku);
    return out;
}

}  // namespace gmroi
