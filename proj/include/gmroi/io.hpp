#ifndef GMROI_IO_HPP
#define GMROI_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "gmroi/core.hpp"
#include "gmroi/simulate.hpp"

namespace gmroi {

// Scenario-table CSV. Header is mandatory and fixed:
//   sku_id,scenario_id,safety_stock,margin,inventory,isp_num,isp_den
// Floats are written with 17 significant digits so a round trip reproduces
// the bucket bit for bit.
extern const char* const kScenarioCsvHeader;

std::string scenario_csv(const Bucket& bucket);
void write_scenario_csv(const Bucket& bucket, const std::string& path);

// Parses and validates a scenario table. Rows group by sku_id in first-
// appearance order; scenarios sort by safety stock. The bucket's service
// floor is not part of the format and is left at zero.
Bucket ingest_scenarios(const std::string& path);
Bucket ingest_scenarios_text(const std::string& text,
                             const std::string& origin = "<memory>");

// Key-value simulation config ("key = value", '#' comments). All SimConfig
// fields plus bucket-level knobs.
struct SimFileConfig {
    SimConfig base;
    std::int64_t skus = 1;
    std::int64_t replications = 3;
    std::int64_t grid_points = 60;
    double service_floor = 0.0;
    // Relative per-SKU jitter applied multiplicatively, derived from the seed.
    double demand_mean_jitter = 0.0;
    double price_jitter = 0.0;
    double cost_jitter = 0.0;
};

SimFileConfig parse_sim_config(const std::string& path);
SimFileConfig parse_sim_config_text(const std::string& text,
                                    const std::string& origin = "<memory>");

// Expands the file config into per-SKU configs (seeds and jitter are
// hash-derived from the master seed, so expansion is order-independent).
std::vector<SimConfig> expand_sku_configs(const SimFileConfig& cfg);

Bucket simulate_from_config(const SimFileConfig& cfg,
                            std::optional<std::uint64_t> seed_override,
                            bool apply_isotonic);

}  // namespace gmroi

#endif  // GMROI_IO_HPP
