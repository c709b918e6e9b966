#ifndef TMDTO_ANALYSIS_HPP
#define TMDTO_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tmdto/node.hpp"
#include "tmdto/params.hpp"
#include "tmdto/tradeoff.hpp"

namespace tmdto {

/// Closed-form single-node success prediction P = D*M*t / N, with
/// N = 2^ell (unconstrained) or 2^n (constrained).
struct Lemma1Prediction {
    std::uint64_t attempts = 0;   // D
    std::uint64_t rows = 0;       // M
    std::uint64_t chain_len = 0;  // t
    int space_log2 = 0;           // log2 N
    double probability = 0.0;     // clamped to [0, 1]
    bool clamped = false;
};

Lemma1Prediction predict_success(std::uint64_t attempts, std::uint64_t rows,
                                 std::uint64_t chain_len, Mode mode, StateWidth n, int ell);

/// The conservative security condition at one difficulty:
/// lhs = floor(slot/(challenge+t_max_H)) * sum_H(M*t),
/// rhs = floor(slot/(challenge+t_min_M)) * sum_M(M*t),
/// holds iff lhs > factor * rhs.
struct SecurityConditionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double factor = 2.0;
    bool holds = false;
};

SecurityConditionReport security_condition(const std::vector<NodeConfig>& honest,
                                           const std::vector<NodeConfig>& malicious,
                                           const SystemParams& params, int difficulty,
                                           double factor = 2.0);

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;

    bool contains(double p) const { return low <= p && p <= high; }
};

/// Wilson score interval at 95% confidence.
WilsonInterval wilson95(std::uint64_t hits, std::uint64_t trials);

struct EmpiricalResult {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double probability = 0.0;
    WilsonInterval interval;
};

/// One seeded inversion attempt: the drawn challenge and whether it hit.
struct TrialRecord {
    std::uint64_t challenge = 0;
    bool hit = false;
};

/// The i-th uniform ell-bit challenge of a seeded trial sequence.
std::uint64_t trial_challenge(std::uint64_t seed, std::uint64_t index, int ell);

/// Run the seeded trial sequence against the table, keeping every outcome.
std::vector<TrialRecord> run_trials(const TradeoffTable& table, std::uint64_t trials,
                                    std::uint64_t seed);

/// Inversion hit rate over seeded uniform random challenges.
EmpiricalResult empirical_success(const TradeoffTable& table, std::uint64_t trials,
                                  std::uint64_t seed);

/// Inversion hit rate over every challenge value (requires ell <= 24).
EmpiricalResult exhaustive_success(const TradeoffTable& table);

/// One row of the PoW / PoS / table-trade-off comparison, with the
/// symbolic complexity next to its value at the configured N, P, M.
struct ComparisonRow {
    std::string scheme;
    std::string time_expr;
    std::string space_expr;
    double time_units = 0.0;
    double space_units = 0.0;
};

/// Per-node counts recomputed from configured budgets (never measured).
struct NodeComplexity {
    std::uint64_t node = 0;
    int difficulty = 0;
    std::uint64_t preprocessing_time = 0;  // M * t
    std::uint64_t table_space = 0;         // M
    std::uint64_t processing_time = 0;     // floor(slot/(challenge+t)) * t
};

struct ComplexityReport {
    std::vector<NodeComplexity> per_node;
    double system_energy_per_block = 0.0;  // sum of per-node processing times
    double system_space = 0.0;             // sum of table sizes
    std::vector<ComparisonRow> comparison; // pow, pos, proposed
    double time_reduction_vs_pow = 0.0;    // = M
    double space_factor_vs_pos = 0.0;      // = N*P / M
    std::uint64_t rows_param = 0;          // M
    int space_log2 = 0;                    // log2 N
    double probability = 0.0;              // P
};

/// Comparison rows at success probability P over an N-point space with an
/// M-row table; when nodes are given, their complexity rows and the system
/// sums are filled in as well.
ComplexityReport comparison_table(const SystemParams& params, std::uint64_t rows_param, double probability,
                                  const std::vector<NodeConfig>& nodes = {});

}  // namespace tmdto

#endif
