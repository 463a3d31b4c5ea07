#include "gmroi/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "gmroi/isotonic.hpp"

namespace gmroi {

const char* const kScenarioCsvHeader =
    "sku_id,scenario_id,safety_stock,margin,inventory,isp_num,isp_den";

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(where + ": bad number '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(where + ": bad integer '" + s + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& where) {
    if (!s.empty() && s[0] == '-') {
        throw ParseError(where + ": bad unsigned integer '" + s + "'");
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ParseError(where + ": bad unsigned integer '" + s + "'");
    }
    return v;
}

}  // namespace

std::string scenario_csv(const Bucket& bucket) {
    std::string out = kScenarioCsvHeader;
    out += '\n';
    for (const auto& sku : bucket.skus) {
        for (std::size_t j = 0; j < sku.scenarios.size(); ++j) {
            const auto& s = sku.scenarios[j];
            out += sku.sku_id;
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += std::to_string(s.safety_stock);
            out += ',';
            out += fmt17(s.margin);
            out += ',';
            out += fmt17(s.inventory);
            out += ',';
            out += std::to_string(s.isp_num);
            out += ',';
            out += std::to_string(s.isp_den);
            out += '\n';
        }
    }
    return out;
}

void write_scenario_csv(const Bucket& bucket, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << scenario_csv(bucket);
}

Bucket ingest_scenarios_text(const std::string& text,
                             const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError(origin + ": empty file");
    }
    ++line_no;
    if (trim(line) != kScenarioCsvHeader) {
        throw ParseError(origin + ":1: expected header '" +
                         kScenarioCsvHeader + "'");
    }

    Bucket bucket;
    std::map<std::string, std::size_t> sku_index;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto fields = split_fields(row);
        if (fields.size() != 7) {
            throw ParseError(where + ": expected 7 fields, got " +
                             std::to_string(fields.size()));
        }

        ScenarioMetrics m;
        const std::string sku_id = trim(fields[0]);
        if (sku_id.empty()) throw ParseError(where + ": empty sku_id");
        parse_int(trim(fields[1]), where);  // scenario_id: order is re-derived
        m.safety_stock = parse_int(trim(fields[2]), where);
        m.margin = parse_double(trim(fields[3]), where);
        m.inventory = parse_double(trim(fields[4]), where);
        m.isp_num = parse_uint(trim(fields[5]), where);
        m.isp_den = parse_uint(trim(fields[6]), where);

        if (m.safety_stock < 0) {
            throw ValidationError(where + ": negative safety_stock");
        }
        if (m.margin < 0.0) {
            throw ValidationError(where + ": negative margin");
        }
        if (m.inventory < 0.0) {
            throw ValidationError(where + ": negative inventory");
        }
        if (m.isp_den == 0) {
            throw ValidationError(where + ": isp_den must be positive");
        }
        if (m.isp_num > m.isp_den) {
            throw ValidationError(where + ": isp_num exceeds isp_den");
        }
        m.isp = static_cast<double>(m.isp_num) / static_cast<double>(m.isp_den);

        auto [it, inserted] = sku_index.try_emplace(sku_id, bucket.skus.size());
        if (inserted) {
            bucket.skus.push_back({sku_id, {}});
        }
        bucket.skus[it->second].scenarios.push_back(m);
    }

    if (bucket.skus.empty()) {
        throw ParseError(origin + ": no scenario rows");
    }
    for (auto& sku : bucket.skus) {
        std::stable_sort(sku.scenarios.begin(), sku.scenarios.end(),
                         [](const ScenarioMetrics& a, const ScenarioMetrics& b) {
                             return a.safety_stock < b.safety_stock;
                         });
    }
    bucket.validate();
    return bucket;
}

Bucket ingest_scenarios(const std::string& path) {
    return ingest_scenarios_text(read_file(path), path);
}

// --- sim config -------------------------------------------------------------

SimFileConfig parse_sim_config_text(const std::string& text,
                                    const std::string& origin) {
    SimFileConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty() || row[0] == '#') continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = row.find('=');
        if (eq == std::string::npos) {
            throw ParseError(where + ": expected 'key = value'");
        }
        const std::string key = trim(row.substr(0, eq));
        const std::string value = trim(row.substr(eq + 1));
        if (key == "horizon") {
            cfg.base.horizon = parse_int(value, where);
        } else if (key == "demand_mean") {
            cfg.base.demand_mean = parse_double(value, where);
        } else if (key == "demand_dispersion") {
            cfg.base.demand_dispersion = parse_double(value, where);
        } else if (key == "lead_time") {
            cfg.base.lead_time = parse_int(value, where);
        } else if (key == "unit_price") {
            cfg.base.unit_price = parse_double(value, where);
        } else if (key == "unit_cost") {
            cfg.base.unit_cost = parse_double(value, where);
        } else if (key == "review") {
            if (value != "continuous") {
                throw ParseError(where + ": unsupported review policy '" +
                                 value + "'");
            }
        } else if (key == "order_quantity_rule") {
            if (value != "order_up_to") {
                throw ParseError(where + ": unsupported order rule '" + value +
                                 "'");
            }
        } else if (key == "seed") {
            cfg.base.seed = parse_uint(value, where);
        } else if (key == "skus") {
            cfg.skus = parse_int(value, where);
        } else if (key == "replications") {
            cfg.replications = parse_int(value, where);
        } else if (key == "grid_points") {
            cfg.grid_points = parse_int(value, where);
        } else if (key == "service_floor") {
            cfg.service_floor = parse_double(value, where);
        } else if (key == "demand_mean_jitter") {
            cfg.demand_mean_jitter = parse_double(value, where);
        } else if (key == "price_jitter") {
            cfg.price_jitter = parse_double(value, where);
        } else if (key == "cost_jitter") {
            cfg.cost_jitter = parse_double(value, where);
        } else {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
    }
    if (cfg.skus < 1) throw ParseError(origin + ": skus must be positive");
    return cfg;
}

SimFileConfig parse_sim_config(const std::string& path) {
    return parse_sim_config_text(read_file(path), path);
}

std::vector<SimConfig> expand_sku_configs(const SimFileConfig& cfg) {
    std::vector<SimConfig> out;
    out.reserve(cfg.skus);
    for (std::int64_t i = 0; i < cfg.skus; ++i) {
        SimConfig c = cfg.base;
        c.seed = derive_stream_seed(cfg.base.seed, static_cast<std::uint64_t>(i));
        SplitMix64 jitter(derive_stream_seed(
            cfg.base.seed ^ 0x6A09E667F3BCC909ull, static_cast<std::uint64_t>(i)));
        auto scale = [&jitter](double base, double rel) {
            if (rel == 0.0) return base;
            return base * (1.0 + rel * (2.0 * jitter.uniform01() - 1.0));
        };
        c.demand_mean = std::max(0.0, scale(c.demand_mean, cfg.demand_mean_jitter));
        c.unit_price = std::max(0.0, scale(c.unit_price, cfg.price_jitter));
        c.unit_cost = std::max(0.0, scale(c.unit_cost, cfg.cost_jitter));
        out.push_back(c);
    }
    return out;
}

Bucket simulate_from_config(const SimFileConfig& cfg,
                            std::optional<std::uint64_t> seed_override,
                            bool apply_isotonic) {
    SimFileConfig effective = cfg;
    if (seed_override) effective.base.seed = *seed_override;
    const auto sku_cfgs = expand_sku_configs(effective);
    std::vector<ScenarioGrid> grids;
    grids.reserve(sku_cfgs.size());
    for (const auto& c : sku_cfgs) {
        grids.push_back(default_grid(c, effective.grid_points));
    }
    Bucket bucket = generate_bucket(sku_cfgs, grids, effective.service_floor,
                                    effective.replications);
    if (apply_isotonic) bucket = preprocess_bucket(bucket);
    return bucket;
}

}  // namespace gmroi
