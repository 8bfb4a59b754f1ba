#include "pgather/trace.hpp"

#include <nlohmann/json.hpp>
#include <ostream>

#include "pgather/hash.hpp"

namespace pgather {

namespace {

const char* wake_name(WakeEvent w) {
    switch (w) {
        case WakeEvent::scheduled: return "scheduled";
        case WakeEvent::visited: return "visited";
        case WakeEvent::none: break;
    }
    return "none";
}

nlohmann::json ids(const auto& range) {
    auto arr = nlohmann::json::array();
    for (AgentId id : range) arr.push_back(id.value);
    return arr;
}

}  // namespace

std::uint64_t Trace::digest() const {
    Fnv1a h;
    h.u64(goods.size());
    for (auto id : goods) h.u64(id.value);
    h.u64(n).u64(k).u64(f).u64(K).i64(tau).i64(modulus).u64(cap_twit).u64(staggered);
    for (const auto& rec : records) {
        h.i64(rec.round).u64(rec.agents.size());
        for (const auto& a : rec.agents) {
            h.u64(a.id.value).u64(a.byzantine).u64(a.active).u64(a.location).u64(static_cast<std::uint64_t>(a.wake));
            h.u64(a.announced).u64(a.action.is_wait() ? 0 : a.action.port());
            h.i64(a.num_round).u64(a.seed.value).u64(a.group.size());
            for (auto id : a.group) h.u64(id.value);
            h.u64(a.reset).u64(a.anomalies.size());
            for (auto id : a.anomalies) h.u64(id.value);
            h.u64(a.t_wit_digest).u64(a.cg_digest).u64(a.own_row.size());
            for (const auto& [id, v] : a.own_row) h.u64(id.value).i64(v);
            h.u64(a.widest_row);
        }
    }
    return h.value();
}

void write_jsonl(const Trace& trace, std::ostream& out) {
    nlohmann::json header = {
        {"type", "header"},    {"goods", ids(trace.goods)}, {"n", trace.n},
        {"k", trace.k},        {"f", trace.f},              {"K", trace.K},
        {"tau", trace.tau},    {"modulus", trace.modulus},  {"cap_twit", trace.cap_twit},
        {"staggered", trace.staggered},
    };
    out << header.dump() << '\n';
    for (const auto& rec : trace.records) {
        auto agents = nlohmann::json::array();
        for (const auto& a : rec.agents) {
            nlohmann::json j = {
                {"id", a.id.value},
                {"byzantine", a.byzantine},
                {"active", a.active},
                {"loc", a.location},
                {"action", a.action.is_wait() ? nlohmann::json("WAIT") : nlohmann::json(a.action.port())},
            };
            if (a.wake != WakeEvent::none) j["wake"] = wake_name(a.wake);
            if (a.active) {
                j["announced"] = to_hex(a.announced);
                j["numRound"] = a.num_round;
                j["seed"] = a.seed.value;
                j["R"] = ids(a.group);
                j["twit"] = to_hex(a.t_wit_digest);
                if (!a.byzantine) {
                    j["reset"] = a.reset;
                    j["anomalies"] = ids(a.anomalies);
                    j["cg"] = to_hex(a.cg_digest);
                    auto row = nlohmann::json::object();
                    for (const auto& [id, v] : a.own_row) row[std::to_string(id.value)] = v;
                    j["row"] = std::move(row);
                    j["widest_row"] = a.widest_row;
                }
            }
            agents.push_back(std::move(j));
        }
        out << nlohmann::json{{"type", "round"}, {"round", rec.round}, {"agents", std::move(agents)}}.dump() << '\n';
    }
}

}  // namespace pgather
