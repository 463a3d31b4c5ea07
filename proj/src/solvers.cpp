#include "gmroi/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace gmroi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ScoreMatrix ScoreMatrix::compute(const Bucket& bucket, double lambda) {
    ScoreMatrix m;
    m.scores.resize(bucket.skus.size());
    for (std::size_t i = 0; i < bucket.skus.size(); ++i) {
        const auto& sku = bucket.skus[i];
        auto& row = m.scores[i];
        row.reserve(sku.scenarios.size());
        for (const auto& s : sku.scenarios) {
            row.push_back(s.margin - lambda * s.inventory);
        }
    }
    return m;
}

namespace {

struct RelaxedSolve {
    Selection selection;
    double relaxed_sum = 0.0;  // sum_i max_j (W_ij + (mu/n) S_ij)
    double value = 0.0;        // sum_i W_i,chosen
    double avg_isp = 0.0;
};

RelaxedSolve relaxed_argmax(const Bucket& bucket, const ScoreMatrix& scores,
                            double mu) {
    const auto n = bucket.skus.size();
    const double mu_over_n = mu / static_cast<double>(n);
    RelaxedSolve out;
    out.selection.chosen.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& sku = bucket.skus[i];
        const auto& row = scores.scores[i];
        std::size_t best = 0;
        double best_score = row[0] + mu_over_n * sku.scenarios[0].isp;
        for (std::size_t j = 1; j < row.size(); ++j) {
            const double score = row[j] + mu_over_n * sku.scenarios[j].isp;
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        out.selection.chosen[i] = static_cast<std::int32_t>(best);
        out.relaxed_sum += best_score;
        out.value += row[best];
        out.avg_isp += sku.scenarios[best].isp;
    }
    out.avg_isp /= static_cast<double>(n);
    return out;
}

double default_mu_tolerance(const Bucket& bucket, const ScoreMatrix& scores) {
    double max_abs = 0.0;
    for (const auto& row : scores.scores) {
        for (const double w : row) max_abs = std::max(max_abs, std::fabs(w));
    }
    return 1e-7 * (1.0 + max_abs * static_cast<double>(bucket.skus.size()));
}

}  // namespace

Selection enumerate_solve(const Bucket& bucket, double lambda, double mu) {
    bucket.validate();
    const auto scores = ScoreMatrix::compute(bucket, lambda);
    return relaxed_argmax(bucket, scores, mu).selection;
}

SubproblemOutcome solve_unconstrained(const Bucket& bucket, double lambda) {
    bucket.validate();
    const auto scores = ScoreMatrix::compute(bucket, lambda);
    auto solved = relaxed_argmax(bucket, scores, 0.0);
    return {std::move(solved.selection), solved.value, std::nullopt};
}

SubproblemOutcome solve_lagrangian(const Bucket& bucket, double lambda,
                                   const LagrangianConfig& cfg) {
    bucket.validate();
    if (cfg.doubling_cap < 1) {
        throw InvalidConfigError("doubling_cap must be at least 1");
    }
    if (!(cfg.mu_initial_high > 0.0)) {
        throw InvalidConfigError("mu_initial_high must be positive");
    }

    const auto scores = ScoreMatrix::compute(bucket, lambda);
    const double tol = cfg.mu_tolerance > 0.0
                           ? cfg.mu_tolerance
                           : default_mu_tolerance(bucket, scores);
    const double floor = bucket.service_floor;

    DualTrace trace;
    auto evaluate = [&](double mu) {
        RelaxedSolve solved = relaxed_argmax(bucket, scores, mu);
        trace.points.push_back(
            {mu, solved.avg_isp, solved.relaxed_sum - mu * floor});
        return solved;
    };

    // mu = 0: if the floor already holds, it is non-binding and mu* = 0.
    RelaxedSolve at_zero = evaluate(0.0);
    if (selection_meets_floor(bucket, at_zero.selection)) {
        trace.mu_star = 0.0;
        return {std::move(at_zero.selection), at_zero.value, std::move(trace)};
    }

    // Bracket: double mu until the induced selection becomes feasible.
    double mu_low = 0.0;
    double mu_high = cfg.mu_initial_high;
    std::optional<RelaxedSolve> feasible_high;
    for (int d = 0; d < cfg.doubling_cap; ++d) {
        RelaxedSolve solved = evaluate(mu_high);
        if (selection_meets_floor(bucket, solved.selection)) {
            feasible_high = std::move(solved);
            break;
        }
        mu_low = mu_high;
        mu_high *= 2.0;
    }
    if (!feasible_high) {
        throw BracketingFailedError(
            "no multiplier reaches the service floor; the bucket is not in "
            "the constrained regime");
    }

    Selection best_sel = feasible_high->selection;
    double best_value = feasible_high->value;

    while (mu_high - mu_low > tol) {
        const double mu = 0.5 * (mu_low + mu_high);
        RelaxedSolve solved = evaluate(mu);
        if (selection_meets_floor(bucket, solved.selection)) {
            mu_high = mu;
            if (solved.value > best_value) {
                best_value = solved.value;
                best_sel = std::move(solved.selection);
            }
        } else {
            mu_low = mu;
        }
    }

    trace.mu_star = mu_high;
    return {std::move(best_sel), best_value, std::move(trace)};
}

// --- exact solver -----------------------------------------------------------

namespace {

struct DpCandidate {
    double w = 0.0;
    std::uint64_t budget = 0;  // ISP numerator on the common denominator
    std::int32_t index = 0;    // original scenario index
};

// Keeps only candidates that can appear in some optimal, lowest-index
// selection: drop j'' when some j has w >= w'', budget >= budget'' and is
// either strictly better in w or earlier in index.
std::vector<DpCandidate> pareto_filter(const std::vector<DpCandidate>& cands) {
    std::vector<DpCandidate> kept;
    kept.reserve(cands.size());
    for (std::size_t a = 0; a < cands.size(); ++a) {
        bool dominated = false;
        for (std::size_t b = 0; b < cands.size() && !dominated; ++b) {
            if (a == b) continue;
            const bool covers = cands[b].w >= cands[a].w &&
                                cands[b].budget >= cands[a].budget;
            if (covers &&
                (cands[b].w > cands[a].w || cands[b].index < cands[a].index)) {
                dominated = true;
            }
        }
        if (!dominated) kept.push_back(cands[a]);
    }
    return kept;
}

// ceil(base * num / den) without overflowing u128 (num <= den).
unsigned __int128 ceil_scaled(unsigned __int128 base, std::uint64_t num,
                              std::uint64_t den) {
    const unsigned __int128 q = base / den;
    const unsigned __int128 r = base % den;
    const unsigned __int128 head = q * num;
    const unsigned __int128 tail = (r * num + den - 1) / den;
    return head + tail;
}

// Backward DP over (SKU suffix, capped service budget) with layer snapshots
// every K SKUs so selections can be rebuilt without storing every layer.
class ServiceBudgetDp {
public:
    ServiceBudgetDp(std::vector<std::vector<DpCandidate>> cands,
                    std::uint64_t target)
        : cands_(std::move(cands)),
          n_(cands_.size()),
          target_(target),
          width_(target + 1) {
        const unsigned __int128 states =
            static_cast<unsigned __int128>(n_) * width_;
        checkpoint_ = states <= 4000000
                          ? 1
                          : std::max<std::size_t>(
                                2, static_cast<std::size_t>(std::llround(
                                       std::sqrt(static_cast<double>(n_)))));
    }

    double run() {
        std::vector<double> next = terminal_layer();
        std::vector<double> cur(width_);
        for (std::size_t i = n_; i-- > 0;) {
            fill_layer(i, next, cur);
            if (i % checkpoint_ == 0) snapshots_.emplace(i, cur);
            std::swap(cur, next);
        }
        return next[0];  // layer 0, empty budget
    }

    Selection reconstruct() {
        Selection sel;
        sel.chosen.resize(n_);
        std::uint64_t budget = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::vector<double>& next = layer(i + 1);
            double best = kNegInf;
            const DpCandidate* pick = nullptr;
            for (const auto& c : cands_[i]) {
                const std::uint64_t idx = std::min(budget + c.budget, target_);
                const double v = c.w + next[idx];
                if (v > best) {
                    best = v;
                    pick = &c;
                }
            }
            sel.chosen[i] = pick->index;
            budget = std::min(budget + pick->budget, target_);
        }
        return sel;
    }

private:
    std::vector<double> terminal_layer() const {
        std::vector<double> layer(width_, kNegInf);
        layer[target_] = 0.0;
        return layer;
    }

    void fill_layer(std::size_t i, const std::vector<double>& next,
                    std::vector<double>& cur) const {
        std::fill(cur.begin(), cur.end(), kNegInf);
        for (const auto& c : cands_[i]) {
            const double at_target = c.w + next[target_];
            if (c.budget >= target_) {
                for (std::uint64_t b = 0; b < width_; ++b) {
                    cur[b] = std::max(cur[b], at_target);
                }
                continue;
            }
            const std::uint64_t split = target_ - c.budget;
            for (std::uint64_t b = 0; b < split; ++b) {
                cur[b] = std::max(cur[b], c.w + next[b + c.budget]);
            }
            for (std::uint64_t b = split; b < width_; ++b) {
                cur[b] = std::max(cur[b], at_target);
            }
        }
    }

    // Serves layer x (0..n); rebuilds the block below the nearest snapshot
    // on demand. Reconstruction requests ascend, so each block is built once.
    const std::vector<double>& layer(std::size_t x) {
        if (x == n_) {
            if (terminal_.empty()) terminal_ = terminal_layer();
            return terminal_;
        }
        if (const auto it = snapshots_.find(x); it != snapshots_.end()) {
            return it->second;
        }
        const std::size_t lo = (x / checkpoint_) * checkpoint_;
        const std::size_t hi = std::min(lo + checkpoint_, n_);
        if (block_lo_ != lo || block_.empty()) {
            block_.assign(hi - 1 - lo, std::vector<double>(width_));
            const std::vector<double>* above = &layer(hi);
            for (std::size_t i = hi; i-- > lo + 1;) {
                fill_layer(i, *above, block_[i - lo - 1]);
                above = &block_[i - lo - 1];
            }
            block_lo_ = lo;
        }
        return block_[x - lo - 1];
    }

    std::vector<std::vector<DpCandidate>> cands_;
    std::size_t n_;
    std::uint64_t target_;
    std::uint64_t width_;
    std::size_t checkpoint_;
    std::unordered_map<std::size_t, std::vector<double>> snapshots_;
    std::vector<double> terminal_;
    std::vector<std::vector<double>> block_;
    std::size_t block_lo_ = static_cast<std::size_t>(-1);
};

// Odometer over all selections in lexicographic order; returns false once
// wrapped around.
bool advance(Selection& sel, const Bucket& bucket) {
    for (std::size_t i = sel.chosen.size(); i-- > 0;) {
        if (static_cast<std::size_t>(sel.chosen[i]) + 1 <
            bucket.skus[i].scenarios.size()) {
            ++sel.chosen[i];
            std::fill(sel.chosen.begin() + i + 1, sel.chosen.end(), 0);
            return true;
        }
    }
    return false;
}

std::optional<std::uint64_t> selection_space_size(const Bucket& bucket,
                                                  std::uint64_t cap) {
    unsigned __int128 total = 1;
    for (const auto& sku : bucket.skus) {
        total *= sku.scenarios.size();
        if (total > cap) return std::nullopt;
    }
    return static_cast<std::uint64_t>(total);
}

SubproblemOutcome enumerate_exact(const Bucket& bucket,
                                  const ScoreMatrix& scores) {
    Selection sel;
    sel.chosen.assign(bucket.skus.size(), 0);
    double best = kNegInf;
    std::optional<Selection> best_sel;
    do {
        if (!selection_meets_floor(bucket, sel)) continue;
        double value = 0.0;
        for (std::size_t i = 0; i < sel.chosen.size(); ++i) {
            value += scores.scores[i][sel.chosen[i]];
        }
        if (value > best) {
            best = value;
            best_sel = sel;
        }
    } while (advance(sel, bucket));
    if (!best_sel) {
        throw InfeasibleError("no selection meets the service floor");
    }
    return {std::move(*best_sel), best, std::nullopt};
}

}  // namespace

SubproblemOutcome solve_exact(const Bucket& bucket, double lambda,
                              const ExactSolverConfig& cfg) {
    bucket.validate();
    const auto scores = ScoreMatrix::compute(bucket, lambda);
    const auto n = bucket.skus.size();

    const auto lcm = common_isp_denominator(bucket);
    if (lcm) {
        const Rat floor = rat_from_double(bucket.service_floor).value;
        const unsigned __int128 full_budget =
            static_cast<unsigned __int128>(n) * *lcm;
        const unsigned __int128 target128 =
            ceil_scaled(full_budget, floor.num, floor.den);

        if (target128 == 0) {
            // Floor met by every selection; plain separable argmax.
            auto solved = relaxed_argmax(bucket, scores, 0.0);
            return {std::move(solved.selection), solved.value, std::nullopt};
        }

        const unsigned __int128 states =
            static_cast<unsigned __int128>(n + 1) * (target128 + 1);
        if (states <= cfg.state_cap) {
            const auto target = static_cast<std::uint64_t>(target128);
            std::vector<std::vector<DpCandidate>> cands(n);
            std::uint64_t reachable = 0;  // sum of per-SKU budgets, capped
            for (std::size_t i = 0; i < n; ++i) {
                const auto& sku = bucket.skus[i];
                std::vector<DpCandidate> raw;
                raw.reserve(sku.scenarios.size());
                std::uint64_t sku_max = 0;
                for (std::size_t j = 0; j < sku.scenarios.size(); ++j) {
                    const auto& s = sku.scenarios[j];
                    const std::uint64_t units = std::min(
                        s.isp_num * (*lcm / s.isp_den), target);
                    sku_max = std::max(sku_max, units);
                    raw.push_back({scores.scores[i][j], units,
                                   static_cast<std::int32_t>(j)});
                }
                reachable = std::min(reachable + sku_max, target);
                cands[i] = pareto_filter(raw);
            }
            if (reachable < target) {
                throw InfeasibleError("no selection meets the service floor");
            }
            ServiceBudgetDp dp(std::move(cands), target);
            const double value = dp.run();
            if (!(value > kNegInf)) {
                throw InfeasibleError("no selection meets the service floor");
            }
            Selection sel = dp.reconstruct();
            return {std::move(sel), value, std::nullopt};
        }
    }

    if (selection_space_size(bucket, cfg.enumeration_cap)) {
        return enumerate_exact(bucket, scores);
    }
    throw BudgetOverflowError(
        "service-budget grid exceeds the state cap and the bucket is too "
        "large to enumerate; use the lagrangian path or raise --dp-state-cap");
}

BruteForceResult brute_force_fractional(const Bucket& bucket,
                                        std::uint64_t cap) {
    bucket.validate();
    if (!selection_space_size(bucket, cap)) {
        throw TooLargeError("selection space exceeds the enumeration cap");
    }
    Selection sel;
    sel.chosen.assign(bucket.skus.size(), 0);
    double best_ratio = kNegInf;
    std::optional<Selection> best;
    do {
        if (!selection_meets_floor(bucket, sel)) continue;
        double margin = 0.0, inventory = 0.0;
        for (std::size_t i = 0; i < sel.chosen.size(); ++i) {
            const auto& s = bucket.skus[i].scenarios[sel.chosen[i]];
            margin += s.margin;
            inventory += s.inventory;
        }
        if (!(inventory > 0.0)) {
            throw ZeroInventoryError("selected inventory total is zero");
        }
        const double ratio = margin / inventory;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = sel;
        }
    } while (advance(sel, bucket));
    if (!best) throw InfeasibleError("no selection meets the service floor");
    return {std::move(*best), best_ratio};
}

std::vector<double> feasible_ratio_set(const Bucket& bucket,
                                       std::uint64_t cap) {
    bucket.validate();
    if (!selection_space_size(bucket, cap)) {
        throw TooLargeError("selection space exceeds the enumeration cap");
    }
    Selection sel;
    sel.chosen.assign(bucket.skus.size(), 0);
    std::vector<double> ratios;
    do {
        if (!selection_meets_floor(bucket, sel)) continue;
        double margin = 0.0, inventory = 0.0;
        for (std::size_t i = 0; i < sel.chosen.size(); ++i) {
            const auto& s = bucket.skus[i].scenarios[sel.chosen[i]];
            margin += s.margin;
            inventory += s.inventory;
        }
        if (inventory > 0.0) ratios.push_back(margin / inventory);
    } while (advance(sel, bucket));
    std::sort(ratios.begin(), ratios.end());
    ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
    return ratios;
}

SubproblemOutcome AutoSolver::solve(const Bucket& bucket, double lambda) {
    const auto regime = classify_regime(bucket).regime;
    if (regime == Regime::Unconstrained) {
        return solve_unconstrained(bucket, lambda);
    }
    return solve_lagrangian(bucket, lambda, cfg_);
}

std::unique_ptr<SubproblemSolver> make_solver(const std::string& name,
                                              const SolverOptions& opts) {
    if (name == "exact") return std::make_unique<ExactDpSolver>(opts.exact);
    if (name == "lagrangian") {
        return std::make_unique<LagrangianSolver>(opts.lagrangian);
    }
    if (name == "unconstrained") return std::make_unique<UnconstrainedSolver>();
    if (name == "auto") return std::make_unique<AutoSolver>(opts.lagrangian);
    throw InvalidConfigError("unknown solver: " + name);
}

}  // namespace gmroi
