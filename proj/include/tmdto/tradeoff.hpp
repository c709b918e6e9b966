#ifndef TMDTO_TRADEOFF_HPP
#define TMDTO_TRADEOFF_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tmdto/corefn.hpp"
#include "tmdto/params.hpp"

namespace tmdto {

/// Parameters of one node's table for one difficulty level.
struct TableSpec {
    int difficulty = 0;            // j
    int ell = 0;                   // challenge width for this difficulty
    std::uint64_t rows = 0;        // M, number of chains
    std::uint64_t chain_len = 0;   // t, evaluations per chain
    Mode mode = Mode::unconstrained;
    std::uint64_t seed = 0;

    /// True when rows * chain_len^2 exceeds the search-space size
    /// (2^n unconstrained, 2^ell constrained): the matrix stopping rule.
    bool exceeds_matrix_stopping_rule(StateWidth n) const;

    bool operator==(const TableSpec&) const = default;
};

struct TableRow {
    std::uint64_t start = 0;
    std::uint64_t end = 0;

    bool operator==(const TableRow&) const = default;
};

/// A finished two-column table: immutable, shareable, lookup-indexed.
/// Rows are sorted by (end, start); suffix_order re-sorts them by
/// (low-ell bits of end, end, start) so both lookups are logarithmic.
class TradeoffTable {
public:
    TradeoffTable(TableSpec spec, StateWidth n, std::vector<TableRow> rows);

    const TableSpec& spec() const { return spec_; }
    StateWidth width() const { return width_; }
    const std::vector<TableRow>& rows() const { return rows_; }
    const std::vector<std::uint64_t>& suffix_order() const { return suffix_order_; }

    /// Row indices whose end has the given low-ell suffix, ascending by end.
    std::vector<std::uint64_t> rows_with_end_suffix(std::uint64_t suffix) const;
    /// Row indices whose end equals the given value, ascending by start.
    std::vector<std::uint64_t> rows_with_end(std::uint64_t end) const;

private:
    TableSpec spec_;
    StateWidth width_;
    std::vector<TableRow> rows_;
    std::vector<std::uint64_t> suffix_order_;
};

/// One chain evaluation. Constrained mode presets the top n-ell bits to ones
/// before evaluating; unconstrained mode evaluates the state as is.
std::uint64_t chain_step(std::uint64_t x, const TableSpec& spec, StateWidth n);

/// Build the table: M distinct seeded starts (prefix-preset in constrained
/// mode), each walked chain_len steps to its stored endpoint.
/// Identical (spec, n) inputs always produce an identical table.
TradeoffTable build_table(const TableSpec& spec, StateWidth n);

/// Work counters for one inversion, for termination checks.
struct InvertStats {
    std::uint64_t outer_steps = 0;
    std::uint64_t rewalks = 0;
    std::uint64_t rewalk_steps = 0;
    std::uint64_t false_alarms = 0;
};

/// Search the table for a key whose one-way image has the challenge as its
/// low-ell suffix (in constrained mode the key also carries the all-ones
/// prefix). Endpoint-suffix matches are tried first, then the forward walk
/// from the ones-padded challenge with full-endpoint matches; every
/// endpoint-matching row is rewalked, bounded by chain_len steps, so a
/// false alarm resumes the search instead of aborting it.
std::optional<std::uint64_t> invert(const TradeoffTable& table, std::uint64_t challenge,
                                    InvertStats* stats = nullptr);

/// Every challenge value reachable from this table: the low-ell suffixes of
/// all rows * chain_len images. Sorted, deduplicated. Refuses enumerations
/// beyond 2^24 entries.
std::vector<std::uint64_t> covered_set(const TradeoffTable& table);

/// Binary table file round-trip ("TMDT" header + end-sorted row records,
/// all little-endian). write_table is atomic (temp file + rename).
std::vector<std::uint8_t> serialize_table(const TradeoffTable& table);
void write_table(const TradeoffTable& table, const std::filesystem::path& path);
TradeoffTable read_table(const std::filesystem::path& path);

}  // namespace tmdto

#endif
