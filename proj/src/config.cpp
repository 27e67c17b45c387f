#include "crosslink/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace crosslink {

namespace {

using nlohmann::json;

ChainId chain_id_from(const json& j) { return ChainId::from_hex(j.get<std::string>()); }
Address address_from(const json& j) { return Address::from_hex(j.get<std::string>()); }
Word word_from(const json& j) {
    if (j.is_number_unsigned()) return Word::from_u64(j.get<std::uint64_t>());
    return Word::from_hex(j.get<std::string>());
}

FunctionKind kind_from(const std::string& s) {
    if (s == "read") return FunctionKind::ReadSlot;
    if (s == "write") return FunctionKind::WriteSlot;
    if (s == "store") return FunctionKind::StoreParam;
    throw ConfigError("unknown function kind: " + s);
}

ExposureMode mode_from(const std::string& s) {
    if (s == "read_only" || s == "ro") return ExposureMode::ReadOnly;
    if (s == "read_write" || s == "rw") return ExposureMode::ReadWrite;
    throw ConfigError("unknown exposure mode: " + s);
}

FeeSchedule fees_from(const json& j) {
    FeeSchedule f;
    if (j.contains("f_base")) f.f_base = j.at("f_base").get<FeeUnits>();
    if (j.contains("per_call")) f.per_call = j.at("per_call").get<FeeUnits>();
    if (j.contains("per_write")) f.per_write = j.at("per_write").get<FeeUnits>();
    if (j.contains("cd_multiplier")) {
        f.cd_multiplier_num = j.at("cd_multiplier").at(0).get<FeeUnits>();
        f.cd_multiplier_den = j.at("cd_multiplier").at(1).get<FeeUnits>();
        if (f.cd_multiplier_den == 0) throw ConfigError("cd_multiplier denominator is zero");
    }
    if (f.f_base == 0) throw ConfigError("f_base must be positive");
    return f;
}

ContractAccount contract_from(const json& j) {
    ContractAccount account;
    account.address = address_from(j.at("address"));
    for (const json& fj : j.value("functions", json::array())) {
        FunctionShape shape;
        shape.signature = fj.at("signature").get<std::string>();
        shape.selector = selector_of(shape.signature);
        shape.kind = kind_from(fj.at("kind").get<std::string>());
        shape.slot = fj.contains("slot") ? word_from(fj.at("slot")) : Word{};
        account.functions.emplace(shape.selector, shape);
    }
    if (j.contains("storage"))
        for (const auto& [key, value] : j.at("storage").items())
            account.storage.emplace(Word::from_hex(key), word_from(value));
    return account;
}

}  // namespace

WorldConfig parse_world_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    WorldConfig cfg;
    try {
        for (const json& cj : root.at("chains")) {
            ChainGenesis g;
            g.id = chain_id_from(cj.at("id"));
            g.name = cj.value("name", "chain-" + g.id.hex_tail(2));
            g.block_interval = cj.value("block_interval", Tick{1});
            if (g.block_interval == 0) throw ConfigError("block_interval must be positive");
            if (cj.contains("fees")) g.fees = fees_from(cj.at("fees"));

            for (const json& contract : cj.value("contracts", json::array()))
                g.contracts.push_back(contract_from(contract));

            for (const json& ej : cj.value("exposure", json::array())) {
                ExposureEntry entry;
                entry.contract = address_from(ej.at("contract"));
                entry.selector = selector_of(ej.at("signature").get<std::string>());
                entry.mode = mode_from(ej.value("mode", "read_only"));
                for (const json& key : ej.value("keys", json::array()))
                    entry.storage_keys.insert(word_from(key));
                g.exposure.entries.push_back(std::move(entry));
            }

            for (const json& aj : cj.value("accounts", json::array()))
                g.balances[address_from(aj.at("address"))] = aj.at("balance").get<FeeUnits>();

            cfg.chains.push_back(std::move(g));
        }

        for (const json& col : root.value("collateral", json::array())) {
            CollateralGenesis cg;
            cg.owner = chain_id_from(col.at("owner"));
            cg.host = chain_id_from(col.at("host"));
            cg.amount = col.at("amount").get<FeeUnits>();
            cfg.collateral.push_back(cg);
        }

        if (root.contains("transport")) {
            const json& t = root.at("transport");
            if (t.contains("latency")) {
                cfg.transport.latency_min = t.at("latency").at(0).get<Tick>();
                cfg.transport.latency_max = t.at("latency").at(1).get<Tick>();
                if (cfg.transport.latency_max < cfg.transport.latency_min)
                    throw ConfigError("latency range inverted");
            }
            cfg.transport.drop_probability = t.value("drop_probability", 0.0);
            if (cfg.transport.drop_probability < 0.0 || cfg.transport.drop_probability >= 1.0)
                throw ConfigError("drop_probability must lie in [0, 1)");
        }

        if (root.contains("auth"))
            cfg.auth.trust_compact_validation =
                root.at("auth").value("trust_compact_validation", true);

        for (const json& pj : root.value("phantom_chains", json::array()))
            cfg.phantom_chains.push_back(chain_id_from(pj));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }

    return cfg;
}

WorldConfig load_world_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_world_config(buffer.str());
}

ScenarioSection parse_scenario_section(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioSection s;
    if (!root.contains("scenario")) return s;
    const json& sc = root.at("scenario");
    try {
        if (sc.contains("read")) {
            const json& r = sc.at("read");
            s.read.provider_chain = chain_id_from(r.at("provider_chain"));
            s.read.provider = address_from(r.at("provider"));
            s.read.provider_slot = word_from(r.at("provider_slot"));
            s.read.requester_chain = chain_id_from(r.at("requester_chain"));
            s.read.requester = address_from(r.at("requester"));
            s.read.result_slot = word_from(r.at("result_slot"));
        }
        if (sc.contains("write")) {
            const json& w = sc.at("write");
            s.write.target_chain = chain_id_from(w.at("target_chain"));
            s.write.target = address_from(w.at("target"));
            s.write.target_slot = word_from(w.at("target_slot"));
            s.write.writer_chain = chain_id_from(w.at("writer_chain"));
            s.write.writer = address_from(w.at("writer"));
            s.write.flag_slot = word_from(w.at("flag_slot"));
            s.write.value = w.value("value", std::uint64_t{99});
        }
        if (sc.contains("dos")) {
            const json& d = sc.at("dos");
            s.dos.attacker_capital = d.at("attacker_capital").get<FeeUnits>();
            for (const json& c : d.value("costs", json::array()))
                s.dos.per_invocation_costs.push_back(c.get<FeeUnits>());
            s.dos.comp_max = d.value("comp_max", FeeUnits{0});
            s.dos.window = d.value("window", Tick{1});
        }
        if (sc.contains("fuzz")) {
            s.fuzz_iterations = sc.at("fuzz").value("iterations", s.fuzz_iterations);
            s.fuzz_batch = sc.at("fuzz").value("batch", s.fuzz_batch);
        }
        if (sc.contains("soak")) {
            s.soak_requests = sc.at("soak").value("requests", s.soak_requests);
            s.soak_local_txs = sc.at("soak").value("local_txs", s.soak_local_txs);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario schema error: ") + e.what());
    }
    return s;
}

}  // namespace crosslink
