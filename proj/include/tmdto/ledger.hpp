#ifndef TMDTO_LEDGER_HPP
#define TMDTO_LEDGER_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmdto/params.hpp"
#include "tmdto/puzzle.hpp"

namespace tmdto {

/// A chain element. The digest is always computed from the canonical
/// serialization, never stored, so a block cannot disagree with its bytes.
struct Block {
    std::uint64_t height = 0;
    std::uint64_t prev_digest = 0;
    std::uint64_t miner = 0;
    int difficulty = 0;
    std::vector<std::uint64_t> tx_ids;
    std::uint64_t nonce = 0;
    std::uint64_t solution_key = 0;

    /// Canonical bytes: height, prev_digest, miner, j, tx_count, tx_ids,
    /// nonce, solution_key; each 8 bytes little-endian.
    std::vector<std::uint8_t> serialize() const;
    /// The prefix the puzzle runs over: everything except nonce and key.
    std::vector<std::uint8_t> puzzle_bytes() const;
    std::uint64_t digest() const;

    bool operator==(const Block&) const = default;
};

/// The all-zero root block. Carries no solution and is accepted axiomatically.
Block make_genesis();

/// Stateless re-check of a non-genesis block's puzzle, from its fields alone.
bool verify_block(const Block& block, const SystemParams& params);

enum class RejectReason { unknown_parent, bad_solution, duplicate_transaction, bad_height };

const char* to_string(RejectReason reason);

struct AppendResult {
    bool accepted = false;
    RejectReason reason = RejectReason::unknown_parent;  // valid when !accepted
};

/// Digest-keyed block store with longest-chain fork choice.
/// Single-writer; reads may be concurrent between writes.
class Ledger {
public:
    explicit Ledger(SystemParams params);

    /// Accepts iff the parent exists, heights are consecutive, the puzzle
    /// verifies and no transaction of the block already sits on its branch.
    AppendResult append_block(const Block& block);

    /// Maximal-height path from genesis; ties broken by smaller tip digest.
    std::vector<Block> canonical_chain() const;
    std::uint64_t canonical_tip() const;

    const Block* find_block(std::uint64_t digest) const;
    const Block& genesis() const { return genesis_; }
    std::uint64_t genesis_digest() const { return genesis_digest_; }
    const std::set<std::uint64_t>& tips() const { return tips_; }
    std::size_t block_count() const { return blocks_.size(); }
    const SystemParams& params() const { return params_; }

private:
    bool branch_contains_tx(std::uint64_t parent_digest,
                            const std::vector<std::uint64_t>& tx_ids) const;

    SystemParams params_;
    Block genesis_;
    std::uint64_t genesis_digest_;
    std::map<std::uint64_t, Block> blocks_;  // digest -> block
    std::set<std::uint64_t> tips_;
};

/// Chain files: one block per line, space-separated hex fields in canonical
/// field order. The genesis block is implicit and never written.
std::string format_block_line(const Block& block);
Block parse_block_line(const std::string& line);
void export_chain(const Ledger& ledger, const std::filesystem::path& path);
std::vector<Block> load_chain(const std::filesystem::path& path);

}  // namespace tmdto

#endif
