#include "tmdto/config.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "tmdto/io.hpp"

#include "json.hpp"

namespace tmdto {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t tx_stream_tag = 0x5458;  // "TX"

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& message) {
    throw ConfigError(origin + ": " + path + ": " + message);
}

void expect_object(const json& v, const std::string& origin, const std::string& path) {
    if (!v.is_object())
        fail(origin, path, "expected an object");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& path) {
    for (const auto& item : obj.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) {
            return item.key() == k;
        });
        if (!ok)
            fail(origin, path + "." + item.key(), "unknown field");
    }
}

const json& member(const json& obj, const char* key, const std::string& origin,
                   const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end())
        fail(origin, path + "." + key, "missing required field");
    return *it;
}

const json* opt_member(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::uint64_t as_u64(const json& v, const std::string& origin, const std::string& path) {
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(origin, path, "expected a nonnegative integer");
}

int as_int(const json& v, const std::string& origin, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(origin, path, "expected an integer");
    const std::int64_t raw = v.is_number_unsigned()
                                 ? static_cast<std::int64_t>(v.get<std::uint64_t>())
                                 : v.get<std::int64_t>();
    if (raw < INT32_MIN || raw > INT32_MAX)
        fail(origin, path, "integer out of range");
    return static_cast<int>(raw);
}

double as_double(const json& v, const std::string& origin, const std::string& path) {
    if (!v.is_number())
        fail(origin, path, "expected a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& origin, const std::string& path) {
    if (!v.is_string())
        fail(origin, path, "expected a string");
    return v.get<std::string>();
}

SystemParams parse_params(const json& block, const std::string& origin) {
    const std::string path = "params";
    expect_object(block, origin, path);
    reject_unknown_keys(block, {"n", "d", "slot_ticks", "challenge_ticks", "mode",
                                "difficulties"},
                        origin, path);

    const int n_bits = as_int(member(block, "n", origin, path), origin, path + ".n");
    if (n_bits < 1 || n_bits > 64)
        fail(origin, path + ".n", "state width must be in [1, 64]");

    SystemParams params;
    params.n = StateWidth(n_bits);
    params.zero_prefix_bits = as_int(member(block, "d", origin, path), origin, path + ".d");
    params.slot_ticks =
        as_u64(member(block, "slot_ticks", origin, path), origin, path + ".slot_ticks");
    if (params.slot_ticks < 1)
        fail(origin, path + ".slot_ticks", "slot duration must be positive");
    params.challenge_ticks = as_u64(member(block, "challenge_ticks", origin, path), origin,
                                    path + ".challenge_ticks");

    const std::string mode =
        as_string(member(block, "mode", origin, path), origin, path + ".mode");
    if (mode == "constrained")
        params.mode = Mode::constrained;
    else if (mode == "unconstrained")
        params.mode = Mode::unconstrained;
    else
        fail(origin, path + ".mode", "expected \"constrained\" or \"unconstrained\"");

    const json& lvls = member(block, "difficulties", origin, path);
    if (!lvls.is_array() || lvls.empty())
        fail(origin, path + ".difficulties", "expected a nonempty array");
    for (std::size_t i = 0; i < lvls.size(); ++i) {
        const std::string lpath = path + ".difficulties[" + std::to_string(i) + "]";
        expect_object(lvls[i], origin, lpath);
        reject_unknown_keys(lvls[i], {"j", "ell"}, origin, lpath);
        DifficultyLevel lvl;
        lvl.difficulty = as_int(member(lvls[i], "j", origin, lpath), origin, lpath + ".j");
        lvl.ell = as_int(member(lvls[i], "ell", origin, lpath), origin, lpath + ".ell");
        params.difficulties.push_back(lvl);
    }

    try {
        params.validate();
    } catch (const std::exception& e) {
        fail(origin, path, e.what());
    }
    return params;
}

NodeConfig parse_node(const json& block, const SystemParams& params, const std::string& origin,
                      const std::string& path) {
    expect_object(block, origin, path);
    reject_unknown_keys(block, {"id", "role", "seed", "budgets"}, origin, path);

    NodeConfig node;
    node.id = as_u64(member(block, "id", origin, path), origin, path + ".id");
    const std::string role =
        as_string(member(block, "role", origin, path), origin, path + ".role");
    if (role == "honest")
        node.role = Role::honest;
    else if (role == "malicious")
        node.role = Role::malicious;
    else
        fail(origin, path + ".role", "expected \"honest\" or \"malicious\"");
    node.seed = as_u64(member(block, "seed", origin, path), origin, path + ".seed");

    if (const json* budgets = opt_member(block, "budgets")) {
        if (!budgets->is_array())
            fail(origin, path + ".budgets", "expected an array");
        std::set<int> seen;
        for (std::size_t i = 0; i < budgets->size(); ++i) {
            const std::string bpath = path + ".budgets[" + std::to_string(i) + "]";
            const json& entry = (*budgets)[i];
            expect_object(entry, origin, bpath);
            reject_unknown_keys(entry, {"j", "rows", "chain_len"}, origin, bpath);
            DifficultyBudget budget;
            budget.difficulty = as_int(member(entry, "j", origin, bpath), origin, bpath + ".j");
            budget.rows = as_u64(member(entry, "rows", origin, bpath), origin, bpath + ".rows");
            budget.chain_len =
                as_u64(member(entry, "chain_len", origin, bpath), origin, bpath + ".chain_len");
            if (!params.has_difficulty(budget.difficulty))
                fail(origin, bpath + ".j", "unknown difficulty level");
            if (!seen.insert(budget.difficulty).second)
                fail(origin, bpath + ".j", "duplicate budget for one difficulty");
            node.budgets.push_back(budget);
        }
    }
    return node;
}

RunConfig parse_run(const json* block, const std::string& origin) {
    RunConfig run;
    if (block == nullptr) {
        run.tx_stream_seed = derive_seed(run.seed, tx_stream_tag);
        return run;
    }
    const std::string path = "run";
    expect_object(*block, origin, path);
    reject_unknown_keys(*block, {"rounds", "seed", "tx_stream_seed", "trials", "txs_per_block",
                                 "security_factor", "out_dir"},
                        origin, path);

    if (const json* v = opt_member(*block, "rounds")) {
        run.rounds = as_u64(*v, origin, path + ".rounds");
        if (run.rounds < 1)
            fail(origin, path + ".rounds", "must be at least 1");
    }
    if (const json* v = opt_member(*block, "seed"))
        run.seed = as_u64(*v, origin, path + ".seed");
    if (const json* v = opt_member(*block, "tx_stream_seed")) {
        run.tx_stream_seed = as_u64(*v, origin, path + ".tx_stream_seed");
        run.tx_stream_seed_set = true;
    } else {
        run.tx_stream_seed = derive_seed(run.seed, tx_stream_tag);
    }
    if (const json* v = opt_member(*block, "trials")) {
        run.trials = as_u64(*v, origin, path + ".trials");
        if (run.trials < 1)
            fail(origin, path + ".trials", "must be at least 1");
    }
    if (const json* v = opt_member(*block, "txs_per_block")) {
        run.txs_per_block = as_u64(*v, origin, path + ".txs_per_block");
        if (run.txs_per_block < 1)
            fail(origin, path + ".txs_per_block", "must be at least 1");
    }
    if (const json* v = opt_member(*block, "security_factor")) {
        run.security_factor = as_double(*v, origin, path + ".security_factor");
        if (!(run.security_factor > 0.0))
            fail(origin, path + ".security_factor", "must be positive");
    }
    if (const json* v = opt_member(*block, "out_dir"))
        run.out_dir = as_string(*v, origin, path + ".out_dir");
    return run;
}

}  // namespace

std::vector<NodeConfig> ExperimentConfig::honest_nodes() const {
    std::vector<NodeConfig> out;
    for (const NodeConfig& node : nodes)
        if (node.role == Role::honest)
            out.push_back(node);
    return out;
}

std::vector<NodeConfig> ExperimentConfig::malicious_nodes() const {
    std::vector<NodeConfig> out;
    for (const NodeConfig& node : nodes)
        if (node.role == Role::malicious)
            out.push_back(node);
    return out;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    expect_object(doc, origin, "document");
    reject_unknown_keys(doc, {"params", "nodes", "run"}, origin, "document");

    ExperimentConfig config;
    config.params = parse_params(member(doc, "params", origin, "document"), origin);

    const json& nodes = member(doc, "nodes", origin, "document");
    if (!nodes.is_array() || nodes.empty())
        fail(origin, "nodes", "expected a nonempty array");
    std::set<std::uint64_t> ids;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string path = "nodes[" + std::to_string(i) + "]";
        NodeConfig node = parse_node(nodes[i], config.params, origin, path);
        if (!ids.insert(node.id).second)
            fail(origin, path + ".id", "duplicate node id");
        config.nodes.push_back(std::move(node));
    }
    if (config.honest_nodes().empty())
        fail(origin, "nodes", "at least one honest node is required");

    config.run = parse_run(opt_member(doc, "run"), origin);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file_text(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.string());
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
    config.run.seed = seed;
    if (!config.run.tx_stream_seed_set)
        config.run.tx_stream_seed = derive_seed(seed, tx_stream_tag);
}

SimConfig to_sim_config(const ExperimentConfig& config) {
    SimConfig sim;
    sim.params = config.params;
    sim.nodes = config.nodes;
    sim.rounds = config.run.rounds;
    sim.seed = config.run.seed;
    sim.tx_stream_seed = config.run.tx_stream_seed;
    sim.txs_per_block = config.run.txs_per_block;
    return sim;
}

}  // namespace tmdto
