#include "skewlab/stage_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {
using ojson = nlohmann::ordered_json;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("double formatting failed");
    return std::string(buf, p);
}

double parse_double_text(const std::string& text) {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw Error("bad decimal text \"" + text + "\"");
    return v;
}

std::string stages_to_json(const std::vector<Stage>& stages) {
    ojson doc;
    doc["schema_version"] = 1;
    ojson arr = ojson::array();
    for (const Stage& s : stages) {
        ojson e;
        e["n"] = s.n;
        e["word"] = s.xi.to_text();
        e["pi"] = s.pi;
        e["k"] = s.k;
        e["alpha"] = s.alpha.empty() ? std::string() : s.alpha.to_text();
        e["R"] = s.R;
        e["q"] = format_double(s.q);
        e["J"] = {{"anchor", format_double(s.J.anchor)},
                  {"length", format_double(s.J.length)}};
        e["c"] = format_double(s.c);
        e["c_log"] = format_double(s.c_log);
        e["lambda"] = format_double(s.lambda);
        e["rho"] = format_double(s.rho);
        e["rho_num"] = s.rho_num;
        e["rho_den"] = s.rho_den;
        arr.push_back(std::move(e));
    }
    doc["stages"] = std::move(arr);
    return doc.dump(2) + "\n";
}

std::vector<Stage> stages_from_json(const std::string& text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const std::exception& ex) {
        throw Error(std::string("stage file is not valid json: ") + ex.what());
    }
    if (!doc.contains("schema_version") ||
        doc.at("schema_version").get<int>() != 1)
        throw Error("unsupported stage file schema");
    if (!doc.contains("stages") || !doc.at("stages").is_array())
        throw Error("stage file needs a stages array");

    std::vector<Stage> out;
    for (const ojson& e : doc.at("stages")) {
        Stage s;
        s.n = e.at("n").get<int>();
        s.xi = Word::parse_text(e.at("word").get<std::string>());
        s.pi = e.at("pi").get<std::uint64_t>();
        s.k = e.at("k").get<int>();
        std::string alpha = e.at("alpha").get<std::string>();
        s.alpha = alpha.empty() ? Word() : Word::parse_text(alpha);
        s.R = e.at("R").get<std::uint64_t>();
        s.q = parse_double_text(e.at("q").get<std::string>());
        s.J.anchor = parse_double_text(e.at("J").at("anchor").get<std::string>());
        s.J.length = parse_double_text(e.at("J").at("length").get<std::string>());
        s.c = parse_double_text(e.at("c").get<std::string>());
        s.c_log = parse_double_text(e.at("c_log").get<std::string>());
        s.lambda = parse_double_text(e.at("lambda").get<std::string>());
        s.rho = parse_double_text(e.at("rho").get<std::string>());
        s.rho_num = e.at("rho_num").get<std::uint64_t>();
        s.rho_den = e.at("rho_den").get<std::uint64_t>();
        if (s.pi != s.xi.length())
            throw Error("stage " + std::to_string(s.n) +
                        " period disagrees with its word");
        out.push_back(std::move(s));
    }
    return out;
}

void save_stages(const std::string& path, const std::vector<Stage>& stages) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << stages_to_json(stages);
    if (!out) throw Error("write failed for " + path);
}

std::vector<Stage> load_stages(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open stage file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return stages_from_json(ss.str());
}

}  // namespace skewlab
