#include "tmdto/ledger.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "tmdto/corefn.hpp"
#include "tmdto/io.hpp"

namespace tmdto {

namespace {

void put_word(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::vector<std::uint8_t> Block::puzzle_bytes() const {
    std::vector<std::uint8_t> out;
    out.reserve(8 * (5 + tx_ids.size()));
    put_word(out, height);
    put_word(out, prev_digest);
    put_word(out, miner);
    put_word(out, static_cast<std::uint64_t>(difficulty));
    put_word(out, tx_ids.size());
    for (std::uint64_t tx : tx_ids)
        put_word(out, tx);
    return out;
}

std::vector<std::uint8_t> Block::serialize() const {
    std::vector<std::uint8_t> out = puzzle_bytes();
    put_word(out, nonce);
    put_word(out, solution_key);
    return out;
}

std::uint64_t Block::digest() const {
    const auto bytes = serialize();
    return block_digest(bytes);
}

Block make_genesis() {
    return Block{};
}

bool verify_block(const Block& block, const SystemParams& params) {
    if (block.height < 1)
        return false;
    if (!params.has_difficulty(block.difficulty))
        return false;

    const auto prefix = block.puzzle_bytes();
    std::vector<std::uint8_t> buf = prefix;
    buf.resize(buf.size() + 8);
    for (int i = 0; i < 8; ++i)
        buf[prefix.size() + i] = static_cast<std::uint8_t>(block.nonce >> (8 * i));
    const std::uint64_t digest = block_digest(buf);

    Challenge ch;
    ch.nonce = block.nonce;
    ch.digest = digest;
    ch.value = extract_challenge(digest, params.ell_for(block.difficulty));
    ch.difficulty = block.difficulty;
    ch.zero_prefix_bits = params.zero_prefix_bits;
    return verify_solution(PuzzleSolution{block.solution_key, ch}, prefix, params);
}

const char* to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::unknown_parent: return "unknown-parent";
        case RejectReason::bad_solution: return "bad-solution";
        case RejectReason::duplicate_transaction: return "duplicate-transaction";
        case RejectReason::bad_height: return "bad-height";
    }
    return "unknown";
}

Ledger::Ledger(SystemParams params) : params_(std::move(params)), genesis_(make_genesis()) {
    params_.validate();
    genesis_digest_ = genesis_.digest();
    blocks_.emplace(genesis_digest_, genesis_);
    tips_.insert(genesis_digest_);
}

bool Ledger::branch_contains_tx(std::uint64_t parent_digest,
                                const std::vector<std::uint64_t>& tx_ids) const {
    const std::unordered_set<std::uint64_t> wanted(tx_ids.begin(), tx_ids.end());
    std::uint64_t cur = parent_digest;
    while (true) {
        const auto it = blocks_.find(cur);
        if (it == blocks_.end())
            return false;
        const Block& block = it->second;
        for (std::uint64_t tx : block.tx_ids)
            if (wanted.count(tx))
                return true;
        if (block.height == 0)
            return false;
        cur = block.prev_digest;
    }
}

AppendResult Ledger::append_block(const Block& block) {
    const auto parent_it = blocks_.find(block.prev_digest);
    if (parent_it == blocks_.end())
        return {false, RejectReason::unknown_parent};
    const Block& parent = parent_it->second;
    if (block.height != parent.height + 1)
        return {false, RejectReason::bad_height};
    if (!verify_block(block, params_))
        return {false, RejectReason::bad_solution};

    std::unordered_set<std::uint64_t> in_block;
    for (std::uint64_t tx : block.tx_ids)
        if (!in_block.insert(tx).second)
            return {false, RejectReason::duplicate_transaction};

    // A re-submitted block re-offers transactions its own position already
    // holds; it must also never re-enter the tip set above its children.
    const std::uint64_t digest = block.digest();
    if (blocks_.count(digest))
        return {false, RejectReason::duplicate_transaction};
    if (branch_contains_tx(block.prev_digest, block.tx_ids))
        return {false, RejectReason::duplicate_transaction};

    blocks_.emplace(digest, block);
    tips_.erase(block.prev_digest);
    tips_.insert(digest);
    return {true, RejectReason::unknown_parent};
}

std::uint64_t Ledger::canonical_tip() const {
    std::uint64_t best_digest = genesis_digest_;
    std::uint64_t best_height = 0;
    for (std::uint64_t tip : tips_) {
        const Block& block = blocks_.at(tip);
        if (block.height > best_height ||
            (block.height == best_height && tip < best_digest)) {
            best_height = block.height;
            best_digest = tip;
        }
    }
    return best_digest;
}

std::vector<Block> Ledger::canonical_chain() const {
    std::vector<Block> chain;
    std::uint64_t cur = canonical_tip();
    while (true) {
        const Block& block = blocks_.at(cur);
        chain.push_back(block);
        if (block.height == 0)
            break;
        cur = block.prev_digest;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

const Block* Ledger::find_block(std::uint64_t digest) const {
    const auto it = blocks_.find(digest);
    return it == blocks_.end() ? nullptr : &it->second;
}

namespace {

std::string hex_word(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::uint64_t parse_hex_word(const std::string& token) {
    if (token.empty() || token.size() > 16)
        throw std::runtime_error("chain file: bad hex field '" + token + "'");
    std::uint64_t v = 0;
    for (char c : token) {
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            digit = c - 'A' + 10;
        else
            throw std::runtime_error("chain file: bad hex field '" + token + "'");
        v = (v << 4) | static_cast<std::uint64_t>(digit);
    }
    return v;
}

}  // namespace

std::string format_block_line(const Block& block) {
    std::string line = hex_word(block.height);
    line += ' ';
    line += hex_word(block.prev_digest);
    line += ' ';
    line += hex_word(block.miner);
    line += ' ';
    line += hex_word(static_cast<std::uint64_t>(block.difficulty));
    line += ' ';
    line += hex_word(block.tx_ids.size());
    for (std::uint64_t tx : block.tx_ids) {
        line += ' ';
        line += hex_word(tx);
    }
    line += ' ';
    line += hex_word(block.nonce);
    line += ' ';
    line += hex_word(block.solution_key);
    return line;
}

Block parse_block_line(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token)
        tokens.push_back(token);
    if (tokens.size() < 7)
        throw std::runtime_error("chain file: expected at least 7 fields, got " +
                                 std::to_string(tokens.size()));
    Block block;
    block.height = parse_hex_word(tokens[0]);
    block.prev_digest = parse_hex_word(tokens[1]);
    block.miner = parse_hex_word(tokens[2]);
    block.difficulty = static_cast<int>(parse_hex_word(tokens[3]));
    const std::uint64_t count = parse_hex_word(tokens[4]);
    if (tokens.size() != 7 + count)
        throw std::runtime_error("chain file: transaction count " + std::to_string(count) +
                                 " does not match field count " + std::to_string(tokens.size()));
    for (std::uint64_t i = 0; i < count; ++i)
        block.tx_ids.push_back(parse_hex_word(tokens[5 + i]));
    block.nonce = parse_hex_word(tokens[5 + count]);
    block.solution_key = parse_hex_word(tokens[6 + count]);
    return block;
}

void export_chain(const Ledger& ledger, const std::filesystem::path& path) {
    std::string text;
    for (const Block& block : ledger.canonical_chain()) {
        if (block.height == 0)
            continue;
        text += format_block_line(block);
        text += '\n';
    }
    atomic_write_file(path, text);
}

std::vector<Block> load_chain(const std::filesystem::path& path) {
    const std::string text = read_file_text(path);
    std::vector<Block> blocks;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        blocks.push_back(parse_block_line(line));
    }
    return blocks;
}

}  // namespace tmdto
