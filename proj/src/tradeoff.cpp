#include "tmdto/tradeoff.hpp"

#include <algorithm>
#include <cstring>
#include <iostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "tmdto/io.hpp"

namespace tmdto {

namespace {

std::uint64_t low_mask(int bits) {
    return bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_spec(const TableSpec& spec, StateWidth n) {
    if (spec.ell < 1 || spec.ell > n.bits)
        throw std::invalid_argument("table spec: ell must be in [1, n]");
    if (spec.chain_len < 1)
        throw std::invalid_argument("table spec: chain length must be at least 1");
}

}  // namespace

bool TableSpec::exceeds_matrix_stopping_rule(StateWidth n) const {
    const int space_bits = mode == Mode::constrained ? ell : n.bits;
    const auto work = static_cast<unsigned __int128>(rows) * chain_len * chain_len;
    return work > (static_cast<unsigned __int128>(1) << space_bits);
}

TradeoffTable::TradeoffTable(TableSpec spec, StateWidth n, std::vector<TableRow> rows)
    : spec_(spec), width_(n), rows_(std::move(rows)) {
    check_spec(spec_, width_);
    if (rows_.size() != spec_.rows)
        throw std::invalid_argument("table row count does not match its spec");
    std::sort(rows_.begin(), rows_.end(), [](const TableRow& a, const TableRow& b) {
        return a.end != b.end ? a.end < b.end : a.start < b.start;
    });
    suffix_order_.resize(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        suffix_order_[i] = i;
    const std::uint64_t mask = low_mask(spec_.ell);
    std::sort(suffix_order_.begin(), suffix_order_.end(),
              [&](std::uint64_t a, std::uint64_t b) {
                  const std::uint64_t sa = rows_[a].end & mask;
                  const std::uint64_t sb = rows_[b].end & mask;
                  if (sa != sb)
                      return sa < sb;
                  if (rows_[a].end != rows_[b].end)
                      return rows_[a].end < rows_[b].end;
                  return rows_[a].start < rows_[b].start;
              });
}

std::vector<std::uint64_t> TradeoffTable::rows_with_end_suffix(std::uint64_t suffix) const {
    const std::uint64_t mask = low_mask(spec_.ell);
    const auto lo = std::lower_bound(suffix_order_.begin(), suffix_order_.end(), suffix,
                                     [&](std::uint64_t idx, std::uint64_t value) {
                                         return (rows_[idx].end & mask) < value;
                                     });
    const auto hi = std::upper_bound(lo, suffix_order_.end(), suffix,
                                     [&](std::uint64_t value, std::uint64_t idx) {
                                         return value < (rows_[idx].end & mask);
                                     });
    return std::vector<std::uint64_t>(lo, hi);
}

std::vector<std::uint64_t> TradeoffTable::rows_with_end(std::uint64_t end) const {
    const auto lo = std::lower_bound(rows_.begin(), rows_.end(), end,
                                     [](const TableRow& row, std::uint64_t value) {
                                         return row.end < value;
                                     });
    std::vector<std::uint64_t> out;
    for (auto it = lo; it != rows_.end() && it->end == end; ++it)
        out.push_back(static_cast<std::uint64_t>(it - rows_.begin()));
    return out;
}

std::uint64_t chain_step(std::uint64_t x, const TableSpec& spec, StateWidth n) {
    if (spec.mode == Mode::constrained)
        x = constrain(x, n, spec.ell);
    return oneway_step(x, n);
}

TradeoffTable build_table(const TableSpec& spec, StateWidth n) {
    check_spec(spec, n);
    if (spec.rows < 1)
        throw std::invalid_argument("table spec: row count must be at least 1");

    const int space_bits = spec.mode == Mode::constrained ? spec.ell : n.bits;
    const auto space = static_cast<unsigned __int128>(1) << space_bits;
    if (static_cast<unsigned __int128>(spec.rows) > space)
        throw std::invalid_argument("table spec: cannot draw " + std::to_string(spec.rows) +
                                    " distinct starts from a 2^" + std::to_string(space_bits) +
                                    " space");
    if (spec.exceeds_matrix_stopping_rule(n))
        std::cerr << "warning: table rows * chain_len^2 exceeds the 2^" << space_bits
                  << " search space (matrix stopping rule)\n";

    SplitMix64 rng(spec.seed);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(spec.rows) * 2);
    std::vector<TableRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.rows));
    while (rows.size() < spec.rows) {
        const std::uint64_t draw = space_bits == 64
                                       ? rng.next()
                                       : rng.next_below(std::uint64_t{1} << space_bits);
        if (!seen.insert(draw).second)
            continue;
        const std::uint64_t start =
            spec.mode == Mode::constrained ? constrain(draw, n, spec.ell) : draw;
        std::uint64_t x = start;
        for (std::uint64_t i = 0; i < spec.chain_len; ++i)
            x = chain_step(x, spec, n);
        rows.push_back(TableRow{start, x});
    }
    return TradeoffTable(spec, n, std::move(rows));
}

namespace {

/// Walk one chain from its start, looking for a state whose image carries the
/// challenge suffix. Returns the evaluation-ready pre-image state, or nullopt
/// after chain_len steps (a false alarm when reached via an endpoint match).
std::optional<std::uint64_t> rewalk_chain(const TradeoffTable& table, std::uint64_t row_index,
                                          std::uint64_t challenge, InvertStats* stats) {
    const TableSpec& spec = table.spec();
    const StateWidth n = table.width();
    const std::uint64_t mask = low_mask(spec.ell);
    if (stats)
        ++stats->rewalks;
    std::uint64_t cur = table.rows()[row_index].start;
    for (std::uint64_t i = 0; i < spec.chain_len; ++i) {
        const std::uint64_t eval_ready =
            spec.mode == Mode::constrained ? constrain(cur, n, spec.ell) : cur;
        const std::uint64_t image = oneway_step(eval_ready, n);
        if (stats)
            ++stats->rewalk_steps;
        if ((image & mask) == challenge)
            return eval_ready;
        cur = image;
    }
    if (stats)
        ++stats->false_alarms;
    return std::nullopt;
}

}  // namespace

std::optional<std::uint64_t> invert(const TradeoffTable& table, std::uint64_t challenge,
                                    InvertStats* stats) {
    const TableSpec& spec = table.spec();
    const StateWidth n = table.width();
    if (challenge > low_mask(spec.ell))
        throw std::invalid_argument("challenge exceeds the table's ell-bit range");

    for (std::uint64_t row : table.rows_with_end_suffix(challenge)) {
        if (auto key = rewalk_chain(table, row, challenge, stats))
            return key;
    }

    std::uint64_t walk = constrain(challenge, n, spec.ell);
    for (std::uint64_t step = 0; step < spec.chain_len; ++step) {
        walk = chain_step(walk, spec, n);
        if (stats)
            ++stats->outer_steps;
        for (std::uint64_t row : table.rows_with_end(walk)) {
            if (auto key = rewalk_chain(table, row, challenge, stats))
                return key;
        }
    }
    return std::nullopt;
}

std::vector<std::uint64_t> covered_set(const TradeoffTable& table) {
    const TableSpec& spec = table.spec();
    const StateWidth n = table.width();
    const auto entries = static_cast<unsigned __int128>(spec.rows) * spec.chain_len;
    if (entries > (static_cast<unsigned __int128>(1) << 24))
        throw std::length_error("covered_set: rows * chain_len exceeds the 2^24 enumeration cap");

    const std::uint64_t mask = low_mask(spec.ell);
    std::vector<std::uint64_t> values;
    values.reserve(static_cast<std::size_t>(entries));
    for (const TableRow& row : table.rows()) {
        std::uint64_t x = row.start;
        for (std::uint64_t i = 0; i < spec.chain_len; ++i) {
            x = chain_step(x, spec, n);
            values.push_back(x & mask);
        }
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

namespace {

constexpr char table_magic[4] = {'T', 'M', 'D', 'T'};
constexpr std::uint32_t table_version = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= std::uint32_t{bytes[offset + i]} << (8 * i);
    return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= std::uint64_t{bytes[offset + i]} << (8 * i);
    return v;
}

constexpr std::size_t table_header_size = 48;

}  // namespace

std::vector<std::uint8_t> serialize_table(const TradeoffTable& table) {
    const TableSpec& spec = table.spec();
    std::vector<std::uint8_t> out;
    out.reserve(table_header_size + table.rows().size() * 16);
    out.insert(out.end(), table_magic, table_magic + 4);
    put_u32(out, table_version);
    put_u32(out, static_cast<std::uint32_t>(table.width().bits));
    put_u32(out, static_cast<std::uint32_t>(spec.difficulty));
    put_u32(out, static_cast<std::uint32_t>(spec.ell));
    put_u64(out, spec.rows);
    put_u64(out, spec.chain_len);
    put_u32(out, static_cast<std::uint32_t>(spec.mode));
    put_u64(out, spec.seed);
    for (const TableRow& row : table.rows()) {
        put_u64(out, row.start);
        put_u64(out, row.end);
    }
    return out;
}

void write_table(const TradeoffTable& table, const std::filesystem::path& path) {
    const auto bytes = serialize_table(table);
    atomic_write_file(path, std::span<const std::uint8_t>(bytes));
}

TradeoffTable read_table(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    if (bytes.size() < table_header_size)
        throw std::runtime_error(path.string() + ": truncated table header");
    if (std::memcmp(bytes.data(), table_magic, 4) != 0)
        throw std::runtime_error(path.string() + ": not a table file (bad magic)");
    const std::uint32_t version = get_u32(bytes, 4);
    if (version != table_version)
        throw std::runtime_error(path.string() + ": unsupported table version " +
                                 std::to_string(version));
    const std::uint32_t n_bits = get_u32(bytes, 8);
    if (n_bits < 1 || n_bits > 64)
        throw std::runtime_error(path.string() + ": state width out of range");

    TableSpec spec;
    spec.difficulty = static_cast<int>(get_u32(bytes, 12));
    spec.ell = static_cast<int>(get_u32(bytes, 16));
    spec.rows = get_u64(bytes, 20);
    spec.chain_len = get_u64(bytes, 28);
    const std::uint32_t mode = get_u32(bytes, 36);
    if (mode > 1)
        throw std::runtime_error(path.string() + ": unknown table mode " + std::to_string(mode));
    spec.mode = static_cast<Mode>(mode);
    spec.seed = get_u64(bytes, 40);

    if (bytes.size() != table_header_size + spec.rows * 16)
        throw std::runtime_error(path.string() + ": row data does not match header row count");
    std::vector<TableRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.rows));
    for (std::uint64_t i = 0; i < spec.rows; ++i) {
        const std::size_t off = table_header_size + static_cast<std::size_t>(i) * 16;
        rows.push_back(TableRow{get_u64(bytes, off), get_u64(bytes, off + 8)});
    }
    return TradeoffTable(spec, StateWidth(static_cast<int>(n_bits)), std::move(rows));
}

}  // namespace tmdto
