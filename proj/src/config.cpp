#include "rha/config.hpp"

#include "rha/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rha {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(strip(item));
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw config_error("cannot parse " + what + " from '" + s + "'");
    }
}

// args like "beta=0.5,n_max=22" -> map
std::map<std::string, std::string> parse_kv_args(const std::string& body,
                                                 const std::string& what) {
    std::map<std::string, std::string> out;
    for (const std::string& part : split(body, ',')) {
        if (part.empty()) continue;
        size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw config_error("expected key=value in " + what + ": '" + part + "'");
        out[strip(part.substr(0, eq))] = strip(part.substr(eq + 1));
    }
    return out;
}

} // namespace

uint64_t parse_u64_token(const std::string& tok) {
    std::string t = strip(tok);
    uint64_t base = 0;
    size_t caret = t.find('^');
    std::string digits = t;
    if (caret != std::string::npos) {
        std::string b = strip(t.substr(0, caret));
        std::string e = strip(t.substr(caret + 1));
        auto to_u64 = [&](const std::string& d) {
            uint64_t v = 0;
            auto res = std::from_chars(d.data(), d.data() + d.size(), v);
            if (res.ec != std::errc() || res.ptr != d.data() + d.size())
                throw config_error("cannot parse integer '" + t + "'");
            return v;
        };
        uint64_t bb = to_u64(b), ee = to_u64(e);
        base = 1;
        for (uint64_t i = 0; i < ee; ++i) {
            if (base > UINT64_MAX / std::max<uint64_t>(bb, 1))
                throw config_error("integer overflow in '" + t + "'");
            base *= bb;
        }
        return base;
    }
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), base);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size())
        throw config_error("cannot parse integer '" + t + "'");
    return base;
}

Schedule parse_schedule(const std::string& spec) {
    std::string s = strip(spec);
    size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw config_error("schedule spec must look like kind(...): '" + spec + "'");
    std::string kind = strip(s.substr(0, open));
    std::string body = s.substr(open + 1, s.size() - open - 2);
    if (kind == "hilberg") {
        auto kv = parse_kv_args(body, "hilberg schedule");
        if (!kv.count("beta") || !kv.count("n_max"))
            throw config_error("hilberg schedule needs beta and n_max");
        return make_hilberg_schedule(parse_double(kv["beta"], "beta"),
                                     static_cast<int>(parse_u64_token(kv["n_max"])));
    }
    if (kind == "explicit") {
        std::string list = strip(body);
        if (list.size() < 2 || list.front() != '[' || list.back() != ']')
            throw config_error("explicit schedule needs a [k0,k1,...] list");
        std::vector<uint64_t> ks;
        for (const std::string& tok : split(list.substr(1, list.size() - 2), ','))
            if (!tok.empty()) ks.push_back(parse_u64_token(tok));
        if (ks.empty()) throw config_error("explicit schedule list is empty");
        return make_explicit_schedule(ks);
    }
    if (kind == "constant") {
        auto kv = parse_kv_args(body, "constant schedule");
        if (!kv.count("k") || !kv.count("n_max"))
            throw config_error("constant schedule needs k and n_max");
        return make_constant_schedule(parse_u64_token(kv["k"]),
                                      static_cast<int>(parse_u64_token(kv["n_max"])));
    }
    if (kind == "squaring") {
        auto kv = parse_kv_args(body, "squaring schedule");
        if (!kv.count("k0") || !kv.count("n_max"))
            throw config_error("squaring schedule needs k0 and n_max");
        return make_squaring_schedule(parse_u64_token(kv["k0"]),
                                      static_cast<int>(parse_u64_token(kv["n_max"])));
    }
    throw config_error("unknown schedule kind '" + kind + "'");
}

Schedule RunConfig::schedule() const {
    if (schedule_spec.empty()) throw config_error("no schedule configured");
    return parse_schedule(schedule_spec);
}

std::string RunConfig::extra_or(const std::string& key,
                                const std::string& dflt) const {
    auto it = extra.find(key);
    return it == extra.end() ? dflt : it->second;
}

uint64_t RunConfig::extra_u64(const std::string& key, uint64_t dflt) const {
    auto it = extra.find(key);
    return it == extra.end() ? dflt : parse_u64_token(it->second);
}

void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
    if (key == "schedule") {
        parse_schedule(value); // validate eagerly
        cfg.schedule_spec = value;
    } else if (key == "seed") {
        cfg.seed = parse_u64_token(value);
    } else if (key == "prefix_log2") {
        cfg.prefix_log2 = static_cast<int>(parse_u64_token(value));
    } else if (key == "m_grid") {
        cfg.m_grid.clear();
        for (const std::string& tok : split(value, ','))
            if (!tok.empty()) cfg.m_grid.push_back(parse_u64_token(tok));
        if (!std::is_sorted(cfg.m_grid.begin(), cfg.m_grid.end()))
            throw config_error("m_grid must be sorted ascending");
    } else if (key == "repetitions") {
        cfg.repetitions = parse_u64_token(value);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "jobs") {
        cfg.jobs = static_cast<int>(parse_u64_token(value));
        if (cfg.jobs < 1) throw config_error("jobs must be >= 1");
    } else if (key == "format") {
        if (value != "csv") throw config_error("only csv output is supported");
        cfg.format = value;
    } else {
        cfg.extra[key] = value;
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip(line);
        size_t hash = t.find('#');
        if (hash != std::string::npos) t = strip(t.substr(0, hash));
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) +
                               " is not key=value: '" + t + "'");
        apply_override(cfg, strip(t.substr(0, eq)), strip(t.substr(eq + 1)));
    }
    return cfg;
}

} // namespace rha
