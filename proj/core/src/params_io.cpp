#include "tumor_dde/params_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tumor_dde/errors.hpp"

namespace tumor_dde {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw domain_violation("config: missing key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw domain_violation("config: key '" + key + "' must be a number");
    return v.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw domain_violation("config: unknown key '" + item.key() + "' in " + where);
    }
}

}  // namespace

FileConfig parse_params_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw domain_violation(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw domain_violation("config: top level must be an object");

    const std::set<std::string> top = {"r", "beta", "b_hat", "gamma", "sigma", "eta",
                                       "p", "m",    "g",     "a",     "tau1",  "tau2",
                                       "chemo"};
    reject_unknown(j, top, "the top-level object");

    FileConfig cfg{
        ModelParams::make(require_number(j, "r"), require_number(j, "beta"),
                          require_number(j, "b_hat"), require_number(j, "gamma"),
                          require_number(j, "sigma"), require_number(j, "eta"),
                          require_number(j, "p"), require_number(j, "m"),
                          require_number(j, "g"), require_number(j, "a"),
                          require_number(j, "tau1"), require_number(j, "tau2")),
        ChemoForcing::constant(0.0), false};
    cfg.forcing = ChemoForcing::constant(cfg.params.b_hat);

    if (j.contains("chemo")) {
        const json& c = j.at("chemo");
        if (!c.is_object()) throw domain_violation("config: chemo must be an object");
        reject_unknown(c, {"b0", "eps", "q"}, "the chemo object");
        cfg.forcing = ChemoForcing::cosine(require_number(c, "b0"), require_number(c, "eps"),
                                           require_number(c, "q"));
        cfg.has_chemo = true;
    }
    return cfg;
}

FileConfig load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_violation("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_params_json(ss.str());
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_g17(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, target);
}

std::string resolve_out_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::path(path).is_absolute()) return path;
    const char* dir = std::getenv("TUMOR_DDE_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    return (fs::path(dir) / path).string();
}

}  // namespace tumor_dde
