#include "tmdto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tmdto/corefn.hpp"

namespace tmdto {

Lemma1Prediction predict_success(std::uint64_t attempts, std::uint64_t rows,
                                 std::uint64_t chain_len, Mode mode, StateWidth n, int ell) {
    if (attempts < 1 || rows < 1 || chain_len < 1)
        throw std::invalid_argument("predict_success: D, M and t must be positive");
    if (ell < 1 || ell > n.bits)
        throw std::invalid_argument("predict_success: ell must be in [1, n]");

    Lemma1Prediction out;
    out.attempts = attempts;
    out.rows = rows;
    out.chain_len = chain_len;
    out.space_log2 = mode == Mode::constrained ? n.bits : ell;

    const long double space = std::ldexp(1.0L, out.space_log2);
    const long double p = static_cast<long double>(attempts) *
                          static_cast<long double>(rows) *
                          static_cast<long double>(chain_len) / space;
    out.clamped = p > 1.0L;
    out.probability = out.clamped ? 1.0 : static_cast<double>(p);
    return out;
}

SecurityConditionReport security_condition(const std::vector<NodeConfig>& honest,
                                           const std::vector<NodeConfig>& malicious,
                                           const SystemParams& params, int difficulty,
                                           double factor) {
    if (honest.empty() || malicious.empty())
        throw std::invalid_argument("security_condition: both pools must be nonempty");
    if (!params.has_difficulty(difficulty))
        throw std::invalid_argument("security_condition: unknown difficulty " +
                                    std::to_string(difficulty));

    struct PoolSide {
        long double coverage = 0.0L;
        std::uint64_t t_min = 0;
        std::uint64_t t_max = 0;
        bool any = false;
    };
    const auto tally = [&](const std::vector<NodeConfig>& pool) {
        PoolSide side;
        for (const NodeConfig& node : pool) {
            const DifficultyBudget* budget = node.budget_for(difficulty);
            if (budget == nullptr || budget->rows == 0 || budget->chain_len == 0)
                continue;
            side.coverage += static_cast<long double>(budget->rows) *
                             static_cast<long double>(budget->chain_len);
            side.t_min = side.any ? std::min(side.t_min, budget->chain_len) : budget->chain_len;
            side.t_max = side.any ? std::max(side.t_max, budget->chain_len) : budget->chain_len;
            side.any = true;
        }
        return side;
    };
    const PoolSide h = tally(honest);
    const PoolSide m = tally(malicious);

    SecurityConditionReport out;
    out.factor = factor;
    if (h.any) {
        const std::uint64_t d = params.slot_ticks / (params.challenge_ticks + h.t_max);
        out.lhs = static_cast<double>(static_cast<long double>(d) * h.coverage);
    }
    if (m.any) {
        const std::uint64_t d = params.slot_ticks / (params.challenge_ticks + m.t_min);
        out.rhs = static_cast<double>(static_cast<long double>(d) * m.coverage);
    }
    out.margin = out.rhs > 0.0 ? out.lhs / out.rhs
                               : std::numeric_limits<double>::infinity();
    out.holds = out.lhs > factor * out.rhs && out.lhs > 0.0;
    return out;
}

WilsonInterval wilson95(std::uint64_t hits, std::uint64_t trials) {
    if (trials == 0)
        throw std::invalid_argument("wilson95: trials must be positive");
    if (hits > trials)
        throw std::invalid_argument("wilson95: hits exceed trials");

    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));

    WilsonInterval out;
    // At the boundary counts the exact endpoints are 0 and 1; keep them
    // free of rounding noise so the interval always contains p itself.
    out.low = hits == 0 ? 0.0 : std::max(0.0, center - half);
    out.high = hits == trials ? 1.0 : std::min(1.0, center + half);
    return out;
}

std::uint64_t trial_challenge(std::uint64_t seed, std::uint64_t index, int ell) {
    if (ell < 1 || ell > 64)
        throw std::invalid_argument("trial_challenge: ell must be in [1, 64]");
    return extract_challenge(derive_seed(seed, index), ell);
}

std::vector<TrialRecord> run_trials(const TradeoffTable& table, std::uint64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("run_trials: trials must be positive");
    std::vector<TrialRecord> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (std::uint64_t i = 0; i < trials; ++i) {
        TrialRecord rec;
        rec.challenge = trial_challenge(seed, i, table.spec().ell);
        rec.hit = invert(table, rec.challenge).has_value();
        out.push_back(rec);
    }
    return out;
}

namespace {

EmpiricalResult summarize(std::uint64_t trials, std::uint64_t hits) {
    EmpiricalResult out;
    out.trials = trials;
    out.hits = hits;
    out.probability = static_cast<double>(hits) / static_cast<double>(trials);
    out.interval = wilson95(hits, trials);
    return out;
}

}  // namespace

EmpiricalResult empirical_success(const TradeoffTable& table, std::uint64_t trials,
                                  std::uint64_t seed) {
    const auto records = run_trials(table, trials, seed);
    std::uint64_t hits = 0;
    for (const TrialRecord& rec : records)
        hits += rec.hit ? 1 : 0;
    return summarize(trials, hits);
}

EmpiricalResult exhaustive_success(const TradeoffTable& table) {
    const int ell = table.spec().ell;
    if (ell > 24)
        throw std::invalid_argument("exhaustive_success: ell above 24 is not enumerable");
    const std::uint64_t total = std::uint64_t{1} << ell;
    std::uint64_t hits = 0;
    for (std::uint64_t c = 0; c < total; ++c)
        hits += invert(table, c).has_value() ? 1 : 0;
    return summarize(total, hits);
}

ComplexityReport comparison_table(const SystemParams& params, std::uint64_t rows_param,
                                  double probability, const std::vector<NodeConfig>& nodes) {
    if (rows_param < 1)
        throw std::invalid_argument("comparison_table: table size must be positive");

    ComplexityReport out;
    out.rows_param = rows_param;
    out.space_log2 = params.n.bits;
    out.probability = probability;

    const double space = std::ldexp(1.0, params.n.bits);
    const double m = static_cast<double>(rows_param);
    const double work = space * probability;  // the N*P budget shared by all rows
    out.comparison = {
        ComparisonRow{"pow", "N*P", "O(1)", work, 1.0},
        ComparisonRow{"pos", "O(1)", "N*P", 1.0, work},
        ComparisonRow{"tabled", "(N/M)*P", "M", work / m, m},
    };
    out.time_reduction_vs_pow = m;
    out.space_factor_vs_pos = work / m;

    for (const NodeConfig& node : nodes) {
        for (const DifficultyBudget& budget : node.budgets) {
            if (budget.rows == 0 || budget.chain_len == 0)
                continue;
            NodeComplexity row;
            row.node = node.id;
            row.difficulty = budget.difficulty;
            row.preprocessing_time = budget.rows * budget.chain_len;
            row.table_space = budget.rows;
            const std::uint64_t attempts =
                params.slot_ticks / (params.challenge_ticks + budget.chain_len);
            row.processing_time = attempts * budget.chain_len;
            out.per_node.push_back(row);
            out.system_energy_per_block += static_cast<double>(row.processing_time);
            out.system_space += static_cast<double>(row.table_space);
        }
    }
    return out;
}

}  // namespace tmdto
