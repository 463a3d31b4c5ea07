#include "gmroi/core.hpp"

#include <cmath>
#include <cstdio>

namespace gmroi {

namespace {

std::string sku_label(const SkuScenarios& sku, std::size_t index) {
    if (!sku.sku_id.empty()) return sku.sku_id;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sku#%zu", index);
    return buf;
}

}  // namespace

ScenarioMetrics ScenarioMetrics::from_float_isp(double margin, double inventory,
                                                double isp,
                                                std::int64_t safety_stock) {
    constexpr std::uint64_t kDen = 1000000;
    ScenarioMetrics m;
    m.margin = margin;
    m.inventory = inventory;
    m.safety_stock = safety_stock;
    const double clamped = isp < 0.0 ? 0.0 : (isp > 1.0 ? 1.0 : isp);
    m.isp_num = static_cast<std::uint64_t>(std::llround(clamped * kDen));
    m.isp_den = kDen;
    m.isp = static_cast<double>(m.isp_num) / kDen;
    m.isp_rationalized = true;
    return m;
}

std::size_t Bucket::scenario_count() const {
    std::size_t total = 0;
    for (const auto& sku : skus) total += sku.scenarios.size();
    return total;
}

void Bucket::validate() const {
    if (skus.empty()) throw ValidationError("bucket has no SKUs");
    if (!(service_floor >= 0.0) || !(service_floor <= 1.0)) {
        throw ValidationError("service floor must lie in [0,1]");
    }
    for (std::size_t i = 0; i < skus.size(); ++i) {
        const auto& sku = skus[i];
        if (sku.scenarios.empty()) {
            throw ValidationError("SKU " + sku_label(sku, i) +
                                  " has no scenarios");
        }
        for (const auto& s : sku.scenarios) {
            if (!std::isfinite(s.margin) || !std::isfinite(s.inventory)) {
                throw ValidationError("non-finite metrics in SKU " +
                                      sku_label(sku, i));
            }
            if (s.inventory < 0.0) {
                throw ValidationError("negative inventory in SKU " +
                                      sku_label(sku, i));
            }
            if (s.isp_den == 0) {
                throw ValidationError("zero ISP denominator in SKU " +
                                      sku_label(sku, i));
            }
            if (s.isp_num > s.isp_den) {
                throw ValidationError("ISP numerator exceeds denominator in SKU " +
                                      sku_label(sku, i));
            }
            if (!(s.isp >= 0.0) || !(s.isp <= 1.0)) {
                throw ValidationError("ISP outside [0,1] in SKU " +
                                      sku_label(sku, i));
            }
            if (s.safety_stock < 0) {
                throw ValidationError("negative safety stock in SKU " +
                                      sku_label(sku, i));
            }
        }
    }
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Unconstrained: return "unconstrained";
        case Regime::Constrained: return "constrained";
        case Regime::Infeasible: return "infeasible";
    }
    return "unknown";
}

namespace {

void check_selection(const Bucket& bucket, const Selection& sel) {
    if (sel.chosen.size() != bucket.skus.size()) {
        throw ValidationError("selection length does not match SKU count");
    }
    for (std::size_t i = 0; i < sel.chosen.size(); ++i) {
        const auto j = sel.chosen[i];
        if (j < 0 ||
            static_cast<std::size_t>(j) >= bucket.skus[i].scenarios.size()) {
            throw ValidationError("selection index out of range for SKU " +
                                  sku_label(bucket.skus[i], i));
        }
    }
}

}  // namespace

Aggregates aggregate(const Bucket& bucket, const Selection& sel) {
    check_selection(bucket, sel);
    Aggregates agg;
    for (std::size_t i = 0; i < bucket.skus.size(); ++i) {
        const auto& s = bucket.skus[i].scenarios[sel.chosen[i]];
        agg.total_margin += s.margin;
        agg.total_inventory += s.inventory;
        agg.avg_isp += s.isp;
    }
    agg.avg_isp /= static_cast<double>(bucket.skus.size());
    if (!(agg.total_inventory > 0.0)) {
        throw ZeroInventoryError("selected inventory total is zero");
    }
    agg.gmroi = agg.total_margin / agg.total_inventory;
    return agg;
}

RegimeReport classify_regime(const Bucket& bucket) {
    bucket.validate();
    const auto n = bucket.skus.size();

    double min_sum_f = 0.0, max_sum_f = 0.0;
    for (const auto& sku : bucket.skus) {
        Rat lo = sku.scenarios.front().isp_rat();
        Rat hi = lo;
        for (const auto& s : sku.scenarios) {
            const Rat r = s.isp_rat();
            if (r < lo) lo = r;
            if (r > hi) hi = r;
        }
        min_sum_f += lo.to_double();
        max_sum_f += hi.to_double();
    }

    RegimeReport report;
    report.min_achievable_isp = min_sum_f / static_cast<double>(n);
    report.max_achievable_isp = max_sum_f / static_cast<double>(n);

    const auto sums = achievable_isp_sums(bucket);
    if (sums) {
        const auto& [min_sum, max_sum] = *sums;
        const auto floor = rat_from_double(bucket.service_floor).value;
        const auto min_meets = rat_ge_scaled(min_sum, floor, n);
        const auto max_meets = rat_ge_scaled(max_sum, floor, n);
        if (min_meets && max_meets) {
            if (*min_meets) {
                report.regime = Regime::Unconstrained;
            } else if (!*max_meets) {
                report.regime = Regime::Infeasible;
            } else {
                report.regime = Regime::Constrained;
            }
            return report;
        }
    }
    // Float fallback.
    if (report.min_achievable_isp + kIspFloatTolerance >= bucket.service_floor) {
        report.regime = Regime::Unconstrained;
    } else if (report.max_achievable_isp + kIspFloatTolerance <
               bucket.service_floor) {
        report.regime = Regime::Infeasible;
    } else {
        report.regime = Regime::Constrained;
    }
    return report;
}

double tar_err(double exact_gmroi, double solver_gmroi) {
    const double dev = std::fabs(exact_gmroi - solver_gmroi);
    const double denom = std::fabs(exact_gmroi);
    return dev / (denom > 1.0 ? denom : 1.0);
}

std::optional<Rat> selection_isp_sum(const Bucket& bucket,
                                     const Selection& sel) {
    check_selection(bucket, sel);
    Rat sum{0, 1};
    for (std::size_t i = 0; i < bucket.skus.size(); ++i) {
        const auto& s = bucket.skus[i].scenarios[sel.chosen[i]];
        const auto next = rat_add(sum, s.isp_rat());
        if (!next) return std::nullopt;
        sum = *next;
    }
    return sum;
}

bool isp_sum_meets_floor(const std::optional<Rat>& sum, double avg_isp,
                         double floor, std::uint64_t n) {
    if (sum) {
        const auto meets =
            rat_ge_scaled(*sum, rat_from_double(floor).value, n);
        if (meets) return *meets;
    }
    return avg_isp + kIspFloatTolerance >= floor;
}

bool selection_meets_floor(const Bucket& bucket, const Selection& sel) {
    const auto sum = selection_isp_sum(bucket, sel);
    double avg = 0.0;
    if (sum) {
        avg = sum->to_double() / static_cast<double>(bucket.skus.size());
    } else {
        for (std::size_t i = 0; i < bucket.skus.size(); ++i) {
            avg += bucket.skus[i].scenarios[sel.chosen[i]].isp;
        }
        avg /= static_cast<double>(bucket.skus.size());
    }
    return isp_sum_meets_floor(sum, avg, bucket.service_floor,
                               bucket.skus.size());
}

std::optional<std::pair<Rat, Rat>> achievable_isp_sums(const Bucket& bucket) {
    Rat min_sum{0, 1};
    Rat max_sum{0, 1};
    for (const auto& sku : bucket.skus) {
        Rat lo = sku.scenarios.front().isp_rat();
        Rat hi = lo;
        for (const auto& s : sku.scenarios) {
            const Rat r = s.isp_rat();
            if (r < lo) lo = r;
            if (r > hi) hi = r;
        }
        const auto a = rat_add(min_sum, lo);
        const auto b = rat_add(max_sum, hi);
        if (!a || !b) return std::nullopt;
        min_sum = *a;
        max_sum = *b;
    }
    return std::make_pair(min_sum, max_sum);
}

std::optional<std::uint64_t> common_isp_denominator(const Bucket& bucket) {
    std::uint64_t lcm = 1;
    for (const auto& sku : bucket.skus) {
        for (const auto& s : sku.scenarios) {
            const std::uint64_t d = s.isp_den / std::gcd(lcm, s.isp_den);
            const unsigned __int128 next =
                static_cast<unsigned __int128>(lcm) * d;
            if (next > std::numeric_limits<std::uint64_t>::max()) {
                return std::nullopt;
            }
            lcm = static_cast<std::uint64_t>(next);
        }
    }
    return lcm;
}

double isp_unit(const Bucket& bucket) {
    const auto lcm = common_isp_denominator(bucket);
    if (!lcm) return kIspFloatTolerance;
    const double unit = 1.0 / (static_cast<double>(*lcm) *
                               static_cast<double>(bucket.skus.size()));
    return unit > 0.0 ? unit : kIspFloatTolerance;
}

}  // namespace gmroi
