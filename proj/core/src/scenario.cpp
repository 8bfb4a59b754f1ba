#include "pgather/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

namespace pgather {

using nlohmann::json;

bool Scenario::operator==(const Scenario& o) const {
    return version == o.version && name == o.name && family == o.family && family_hash == o.family_hash &&
           graph == o.graph && bounds == o.bounds && agents == o.agents && initial_state == o.initial_state &&
           horizon == o.horizon && cap_twit == o.cap_twit;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ConfigError("scenario: " + where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) bad(where, std::string("missing field '") + key + "'");
    return obj.at(key);
}

template <typename T>
T integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < 0 || static_cast<std::uint64_t>(x) > std::numeric_limits<T>::max()) bad(where, "value out of range");
    return static_cast<T>(x);
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
            bad(where, "unknown field '" + k + "'");
        }
    }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) bad("root", "expected an object");
    reject_unknown(root,
                   {"version", "name", "family", "family_hash", "graph", "bounds", "agents", "initial_state",
                    "horizon", "cap_twit"},
                   "root");
    Scenario s;
    s.base_dir = base_dir;
    s.version = integer<int>(field(root, "version", "root"), "version");
    if (s.version != Scenario::kVersion) {
        bad("version", "unsupported version " + std::to_string(s.version));
    }
    s.name = text(field(root, "name", "root"), "name");
    if (root.contains("family")) s.family = text(root["family"], "family");
    if (root.contains("family_hash")) s.family_hash = text(root["family_hash"], "family_hash");

    const auto& g = field(root, "graph", "root");
    reject_unknown(g, {"generator", "size", "file"}, "graph");
    s.graph.generator = text(field(g, "generator", "graph"), "graph.generator");
    if (s.graph.generator == "file") {
        s.graph.file = text(field(g, "file", "graph"), "graph.file");
    } else if (s.graph.generator == "ring" || s.graph.generator == "line" || s.graph.generator == "star" ||
               s.graph.generator == "clique") {
        s.graph.size = integer<std::size_t>(field(g, "size", "graph"), "graph.size");
    } else {
        bad("graph.generator", "unknown generator '" + s.graph.generator + "'");
    }

    const auto& b = field(root, "bounds", "root");
    reject_unknown(b, {"N", "K", "F", "lambda_g"}, "bounds");
    s.bounds.N = integer<std::uint32_t>(field(b, "N", "bounds"), "bounds.N");
    s.bounds.K = integer<std::uint32_t>(field(b, "K", "bounds"), "bounds.K");
    s.bounds.F = integer<std::uint32_t>(field(b, "F", "bounds"), "bounds.F");
    s.bounds.lambda_g = integer<std::uint32_t>(field(b, "lambda_g", "bounds"), "bounds.lambda_g");

    const auto& agents = field(root, "agents", "root");
    if (!agents.is_array() || agents.empty()) bad("agents", "expected a non-empty array");
    std::set<std::uint32_t> seen;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto where = "agents[" + std::to_string(i) + "]";
        const auto& a = agents[i];
        reject_unknown(a, {"id", "start", "byzantine", "wake"}, where);
        AgentSpec spec;
        spec.id = AgentId{integer<std::uint32_t>(field(a, "id", where), where + ".id")};
        if (spec.id.value == 0) bad(where + ".id", "ids are positive");
        if (!seen.insert(spec.id.value).second) bad(where + ".id", "duplicate id " + std::to_string(spec.id.value));
        spec.start = integer<NodeIndex>(field(a, "start", where), where + ".start");
        if (a.contains("byzantine")) {
            const auto& z = a["byzantine"];
            reject_unknown(z, {"strategy", "params"}, where + ".byzantine");
            ByzantineSpec bz;
            bz.strategy = text(field(z, "strategy", where + ".byzantine"), where + ".byzantine.strategy");
            if (z.contains("params")) {
                if (!z["params"].is_object()) bad(where + ".byzantine.params", "expected an object");
                for (const auto& [k, v] : z["params"].items()) {
                    bz.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
                }
            }
            spec.byzantine = std::move(bz);
        }
        if (a.contains("wake")) {
            const auto& w = a["wake"];
            if (w.is_string() && w.get<std::string>() == "on_visit") {
                spec.wake.kind = WakeSpec::Kind::on_visit;
            } else if (w.is_number_integer()) {
                spec.wake.kind = WakeSpec::Kind::delay;
                spec.wake.delay = integer<Round>(w, where + ".wake");
            } else {
                bad(where + ".wake", "expected a delay or \"on_visit\"");
            }
            if (spec.byzantine && spec.wake.kind != WakeSpec::Kind::start) {
                bad(where + ".wake", "Byzantine agents are always active");
            }
        }
        s.agents.push_back(std::move(spec));
    }
    std::sort(s.agents.begin(), s.agents.end(), [](const AgentSpec& x, const AgentSpec& y) { return x.id < y.id; });
    if (std::none_of(s.agents.begin(), s.agents.end(), [](const AgentSpec& a) { return !a.byzantine; })) {
        bad("agents", "at least one good agent is required");
    }
    for (const auto& a : s.agents) {
        if (!a.byzantine && bit_length(a.id.value) > s.bounds.lambda_g) {
            bad("agents", "good id " + std::to_string(a.id.value) + " exceeds lambda_g bits");
        }
    }

    if (root.contains("initial_state")) {
        const auto& is = root["initial_state"];
        reject_unknown(is, {"mode", "seed", "case"}, "initial_state");
        const auto mode = text(field(is, "mode", "initial_state"), "initial_state.mode");
        if (mode == "clean") {
            s.initial_state.mode = InitialStateSpec::Mode::clean;
        } else if (mode == "arbitrary") {
            s.initial_state.mode = InitialStateSpec::Mode::arbitrary;
            s.initial_state.seed = integer<std::uint64_t>(field(is, "seed", "initial_state"), "initial_state.seed");
        } else if (mode == "crafted") {
            s.initial_state.mode = InitialStateSpec::Mode::crafted;
            s.initial_state.crafted = text(field(is, "case", "initial_state"), "initial_state.case");
        } else {
            bad("initial_state.mode", "expected clean, arbitrary or crafted");
        }
    }
    if (root.contains("horizon")) {
        s.horizon = integer<Round>(root["horizon"], "horizon");
        if (*s.horizon < 1) bad("horizon", "must be at least 1");
    }
    if (root.contains("cap_twit")) {
        if (!root["cap_twit"].is_boolean()) bad("cap_twit", "expected a boolean");
        s.cap_twit = root["cap_twit"].get<bool>();
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.parent_path());
}

std::string to_json(const Scenario& s) {
    json root;
    root["version"] = s.version;
    root["name"] = s.name;
    root["family"] = s.family;
    if (s.family_hash) root["family_hash"] = *s.family_hash;
    json g = {{"generator", s.graph.generator}};
    if (s.graph.generator == "file") {
        g["file"] = s.graph.file;
    } else {
        g["size"] = s.graph.size;
    }
    root["graph"] = g;
    root["bounds"] = {{"N", s.bounds.N}, {"K", s.bounds.K}, {"F", s.bounds.F}, {"lambda_g", s.bounds.lambda_g}};
    auto agents = json::array();
    for (const auto& a : s.agents) {
        json j = {{"id", a.id.value}, {"start", a.start}};
        if (a.byzantine) {
            json z = {{"strategy", a.byzantine->strategy}};
            if (!a.byzantine->params.empty()) z["params"] = a.byzantine->params;
            j["byzantine"] = z;
        }
        if (a.wake.kind == WakeSpec::Kind::on_visit) j["wake"] = "on_visit";
        if (a.wake.kind == WakeSpec::Kind::delay) j["wake"] = a.wake.delay;
        agents.push_back(j);
    }
    root["agents"] = agents;
    switch (s.initial_state.mode) {
        case InitialStateSpec::Mode::clean: root["initial_state"] = {{"mode", "clean"}}; break;
        case InitialStateSpec::Mode::arbitrary:
            root["initial_state"] = {{"mode", "arbitrary"}, {"seed", s.initial_state.seed}};
            break;
        case InitialStateSpec::Mode::crafted:
            root["initial_state"] = {{"mode", "crafted"}, {"case", s.initial_state.crafted}};
            break;
    }
    if (s.horizon) root["horizon"] = *s.horizon;
    root["cap_twit"] = s.cap_twit;
    return root.dump(2) + "\n";
}

void apply_wake_schedule(Scenario& s, const std::string& spec, std::int64_t tau) {
    std::vector<AgentSpec*> goods;
    for (auto& a : s.agents) {
        if (!a.byzantine) goods.push_back(&a);
    }
    for (auto* a : goods) a->wake = WakeSpec{};
    if (spec == "simultaneous") {
        return;
    }
    if (spec == "on_visit") {
        for (std::size_t i = 1; i < goods.size(); ++i) goods[i]->wake.kind = WakeSpec::Kind::on_visit;
        return;
    }
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "staggered") {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(arg);
        } catch (const std::logic_error&) {
            throw ConfigError("wake schedule: staggered needs a numeric seed, e.g. staggered:7");
        }
        std::mt19937_64 rng(seed);
        const auto early = static_cast<std::size_t>(rng() % goods.size());
        auto late = static_cast<std::size_t>(rng() % goods.size());
        if (goods.size() > 1 && late == early) late = (late + 1) % goods.size();
        for (std::size_t i = 0; i < goods.size(); ++i) {
            Round d = static_cast<Round>(rng() % static_cast<std::uint64_t>(tau + 1));
            if (i == early) d = 0;
            else if (i == late) d = tau;
            goods[i]->wake = d == 0 ? WakeSpec{} : WakeSpec{WakeSpec::Kind::delay, d};
        }
        return;
    }
    if (kind == "explicit") {
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("wake schedule: expected ID=DELAY, got '" + item + "'");
            std::uint32_t id = 0;
            Round d = 0;
            try {
                id = static_cast<std::uint32_t>(std::stoul(item.substr(0, eq)));
                d = std::stoll(item.substr(eq + 1));
            } catch (const std::logic_error&) {
                throw ConfigError("wake schedule: malformed item '" + item + "'");
            }
            auto it = std::find_if(goods.begin(), goods.end(), [&](AgentSpec* a) { return a->id.value == id; });
            if (it == goods.end()) throw ConfigError("wake schedule: no good agent with id " + std::to_string(id));
            if (d < 0 || d > tau) {
                throw ConfigError("wake schedule: delay " + std::to_string(d) + " outside 0..tau=" + std::to_string(tau));
            }
            (*it)->wake = d == 0 ? WakeSpec{} : WakeSpec{WakeSpec::Kind::delay, d};
        }
        return;
    }
    throw ConfigError("unknown wake schedule '" + spec + "'");
}

}  // namespace pgather
