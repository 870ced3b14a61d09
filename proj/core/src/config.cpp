#include "skewlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

using ojson = nlohmann::ordered_json;

double parse_decimal(const std::string& text, const std::string& where) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw Error("bad decimal \"" + text + "\" in " + where);
    return v;
}

double dec_field(const ojson& j, const char* key, const std::string& where) {
    if (!j.contains(key))
        throw Error("missing field " + std::string(key) + " in " + where);
    const ojson& v = j.at(key);
    if (!v.is_string())
        throw Error("field " + std::string(key) + " in " + where +
                    " must be decimal text");
    return parse_decimal(v.get<std::string>(), where + "." + key);
}

std::int64_t int_field(const ojson& j, const char* key,
                       const std::string& where) {
    if (!j.contains(key))
        throw Error("missing field " + std::string(key) + " in " + where);
    const ojson& v = j.at(key);
    if (!v.is_number_integer())
        throw Error("field " + std::string(key) + " in " + where +
                    " must be an integer");
    return v.get<std::int64_t>();
}

std::string str_field(const ojson& j, const char* key,
                      const std::string& where) {
    if (!j.contains(key))
        throw Error("missing field " + std::string(key) + " in " + where);
    const ojson& v = j.at(key);
    if (!v.is_string())
        throw Error("field " + std::string(key) + " in " + where +
                    " must be a string");
    return v.get<std::string>();
}

void check_digits(const std::string& s, int alphabet,
                  const std::string& where) {
    if (s.empty()) throw Error("empty word in " + where);
    for (char c : s)
        if (c < '1' || c > '0' + alphabet)
            throw Error("symbol '" + std::string(1, c) + "' out of range in " +
                        where);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const std::exception& ex) {
        throw Error(std::string("config is not valid json: ") + ex.what());
    }

    ExperimentConfig cfg;
    cfg.schema_version = static_cast<int>(int_field(j, "schema_version", "config"));
    if (cfg.schema_version != 1)
        throw Error("unsupported schema_version " +
                    std::to_string(cfg.schema_version));

    cfg.alphabet = static_cast<int>(int_field(j, "alphabet", "config"));
    if (cfg.alphabet < 1 || cfg.alphabet > 9)
        throw Error("alphabet size must be between 1 and 9");

    if (!j.contains("maps") || !j.at("maps").is_array())
        throw Error("config needs a maps array");
    for (const ojson& m : j.at("maps")) {
        MapSpec spec;
        spec.family = str_field(m, "family", "maps");
        if (spec.family != "sine")
            throw Error("unsupported map family \"" + spec.family + "\"");
        spec.a = dec_field(m, "a", "maps");
        spec.b = dec_field(m, "b", "maps");
        cfg.maps.push_back(spec);
    }
    if (cfg.maps.size() != static_cast<std::size_t>(cfg.alphabet))
        throw Error("maps array must have one entry per symbol");

    cfg.omega0 = str_field(j, "omega0", "config");
    check_digits(cfg.omega0, cfg.alphabet, "omega0");

    if (!j.contains("J0")) throw Error("config needs J0");
    cfg.j0.anchor = dec_field(j.at("J0"), "anchor", "J0");
    cfg.j0.length = dec_field(j.at("J0"), "length", "J0");
    if (!(cfg.j0.length > 0.0 && cfg.j0.length < 1.0))
        throw Error("J0 length must lie in (0, 1)");
    cfg.j0.anchor = wrap_unit(cfg.j0.anchor);

    if (!j.contains("schedule") || !j.at("schedule").is_array() ||
        j.at("schedule").empty())
        throw Error("config needs a nonempty schedule array");
    int sidx = 0;
    for (const ojson& s : j.at("schedule")) {
        std::string where = "schedule[" + std::to_string(sidx++) + "]";
        ScheduleEntry e;
        e.k = static_cast<int>(int_field(s, "k", where));
        if (e.k < 2) throw Error("repetition count must be >= 2 in " + where);
        e.R = static_cast<int>(int_field(s, "R", where));
        if (e.R < 1) throw Error("noise length must be >= 1 in " + where);
        std::string noise = str_field(s, "noise", where);
        if (noise == "search-exhaustive") {
            e.noise.kind = NoiseStrategy::Kind::Exhaustive;
        } else if (noise.rfind("search-sampled:", 0) == 0) {
            e.noise.kind = NoiseStrategy::Kind::Sampled;
            e.noise.samples = static_cast<std::uint64_t>(
                parse_decimal(noise.substr(15), where + ".noise"));
            if (e.noise.samples == 0)
                throw Error("sampled search needs a positive sample count in " +
                            where);
        } else if (noise.rfind("word:", 0) == 0) {
            e.fixed_word = noise.substr(5);
            check_digits(e.fixed_word, cfg.alphabet, where + ".noise");
            if (e.fixed_word.size() != static_cast<std::size_t>(e.R))
                throw Error("fixed noise word length disagrees with R in " +
                            where);
        } else {
            throw Error("unknown noise mode \"" + noise + "\" in " + where);
        }
        cfg.schedule.push_back(std::move(e));
    }

    if (!j.contains("tail_model")) throw Error("config needs tail_model");
    {
        const ojson& t = j.at("tail_model");
        cfg.tail.C = dec_field(t, "C", "tail_model");
        cfg.tail.ratio = dec_field(t, "ratio", "tail_model");
        cfg.tail.after_stage =
            static_cast<int>(int_field(t, "after_stage", "tail_model"));
        if (!(cfg.tail.ratio > 0.0 && cfg.tail.ratio < 1.0))
            throw Error("tail_model.ratio must lie in (0, 1)");
        if (!(cfg.tail.C > 0.0)) throw Error("tail_model.C must be positive");
    }

    if (!j.contains("builder")) throw Error("config needs builder");
    {
        const ojson& b = j.at("builder");
        cfg.builder.c_target = dec_field(b, "c_target", "builder");
        cfg.builder.grid_points =
            static_cast<int>(int_field(b, "grid", "builder"));
        cfg.builder.tol = dec_field(b, "tol", "builder");
        cfg.builder.max_iter = int_field(b, "max_iter", "builder");
        cfg.builder.psi = dec_field(b, "psi", "builder");
        if (!(cfg.builder.c_target > 0.0 && cfg.builder.c_target < 1.0))
            throw Error("builder.c_target must lie in (0, 1)");
        if (cfg.builder.grid_points < 8)
            throw Error("builder.grid must be >= 8");
        if (!(cfg.builder.tol > 0.0)) throw Error("builder.tol must be positive");
        if (!(cfg.builder.psi > 0.0)) throw Error("builder.psi must be positive");
    }

    if (!j.contains("fk")) throw Error("config needs fk");
    {
        const ojson& f = j.at("fk");
        cfg.fk.m_max = static_cast<int>(int_field(f, "m_max", "fk"));
        if (cfg.fk.m_max < 0) throw Error("fk.m_max must be >= 0");
        cfg.fk.dp_cap = int_field(f, "dp_cap", "fk");
        if (cfg.fk.dp_cap < 1) throw Error("fk.dp_cap must be >= 1");
        if (!f.contains("multiples") || !f.at("multiples").is_array() ||
            f.at("multiples").empty())
            throw Error("fk.multiples must be a nonempty array");
        cfg.fk.multiples.clear();
        for (const ojson& m : f.at("multiples")) {
            if (!m.is_number_integer() || m.get<std::int64_t>() < 1)
                throw Error("fk.multiples entries must be positive integers");
            cfg.fk.multiples.push_back(static_cast<int>(m.get<std::int64_t>()));
        }
    }

    if (!j.contains("measure")) throw Error("config needs measure");
    {
        const ojson& m = j.at("measure");
        cfg.measure.theta = dec_field(m, "theta", "measure");
        if (!(cfg.measure.theta > 0.0 && cfg.measure.theta < 1.0))
            throw Error("measure.theta must lie in (0, 1)");
        cfg.measure.window =
            static_cast<int>(int_field(m, "window", "measure"));
        if (cfg.measure.window < 0) throw Error("measure.window must be >= 0");
        cfg.measure.bins = static_cast<int>(int_field(m, "bins", "measure"));
        if (cfg.measure.bins < 1) throw Error("measure.bins must be >= 1");
        cfg.measure.sample_cap =
            static_cast<std::uint64_t>(int_field(m, "sample_cap", "measure"));
        cfg.measure.membership_slack =
            dec_field(m, "membership_slack", "measure");
        if (!(cfg.measure.membership_slack >= 0.0))
            throw Error("measure.membership_slack must be >= 0");
        if (m.contains("spanning")) {
            if (!m.at("spanning").is_array())
                throw Error("measure.spanning must be an array");
            int pidx = 0;
            for (const ojson& s : m.at("spanning")) {
                std::string where = "measure.spanning[" +
                                    std::to_string(pidx++) + "]";
                SpanningSpec sp;
                sp.n = int_field(s, "n", where);
                if (sp.n < 1) throw Error("spanning horizon must be >= 1");
                sp.eps = dec_field(s, "eps", where);
                if (!(sp.eps > 0.0 && sp.eps < 0.5))
                    throw Error("spanning eps must lie in (0, 0.5)");
                cfg.measure.spanning.push_back(sp);
            }
        }
    }

    cfg.seed = static_cast<std::uint64_t>(int_field(j, "seed", "config"));
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

MapFamily make_family(const ExperimentConfig& cfg) {
    std::vector<SineMap> maps;
    maps.reserve(cfg.maps.size());
    for (const MapSpec& m : cfg.maps) maps.push_back(SineMap{m.a, m.b});
    return MapFamily(maps);
}

std::string reference_config_text() {
    return R"({
  "schema_version": 1,
  "alphabet": 2,
  "maps": [
    {"family": "sine", "a": "0.0052", "b": "-0.7"},
    {"family": "sine", "a": "0", "b": "-0.62832"}
  ],
  "omega0": "2",
  "J0": {"anchor": "0.99", "length": "0.02"},
  "schedule": [
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"},
    {"k": 2, "R": 1, "noise": "search-exhaustive"}
  ],
  "tail_model": {"C": "1.0", "ratio": "0.5", "after_stage": 0},
  "builder": {"c_target": "0.9", "grid": 4096, "tol": "1e-12", "max_iter": 1000000, "psi": "1.1"},
  "fk": {"m_max": 8, "multiples": [1, 2, 4], "dp_cap": 20000},
  "measure": {
    "theta": "0.5",
    "window": 2,
    "bins": 64,
    "sample_cap": 10000000,
    "membership_slack": "1e-14",
    "spanning": [
      {"n": 10, "eps": "0.1"},
      {"n": 10, "eps": "0.05"},
      {"n": 10, "eps": "0.01"},
      {"n": 100, "eps": "0.1"},
      {"n": 100, "eps": "0.05"},
      {"n": 100, "eps": "0.01"},
      {"n": 1000, "eps": "0.1"},
      {"n": 1000, "eps": "0.05"},
      {"n": 1000, "eps": "0.01"}
    ]
  },
  "seed": 20240901
}
)";
}

}  // namespace skewlab
