#include "hmmlyap/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hmmlyap {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& msg) { fail("SchemaError", msg); }

double parse_real(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    schema(where + " must be a number");
}

long long parse_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) schema(where + " must be an integer");
    return j.get<long long>();
}

std::uint64_t parse_seed(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0) {
        return static_cast<std::uint64_t>(j.get<long long>());
    }
    schema("seed must be a non-negative integer");
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) schema(where + " must be a non-empty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    Eigen::MatrixXd m;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.empty()) schema(where + " rows must be non-empty arrays");
        if (i == 0) {
            cols = row.size();
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            schema(where + " rows must all have the same length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                parse_real(row[c], where + " entry");
        }
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_real(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Triple parse_triple(const json& j) {
    if (!j.is_string()) schema("triples entries must be \"a:b:c\" strings");
    const std::string s = j.get<std::string>();
    Triple t;
    int parts[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t next = i < 2 ? s.find(':', pos) : s.size();
        if (next == std::string::npos) schema("triple must have three ':'-separated parts: " + s);
        const std::string piece = s.substr(pos, next - pos);
        try {
            parts[i] = std::stoi(piece);
        } catch (const std::exception&) {
            schema("triple part is not an integer: " + s);
        }
        pos = next + 1;
    }
    t.a = parts[0];
    t.b = parts[1];
    t.c = parts[2];
    return t;
}

} // namespace

HmmModel model_from_json(const json& j) {
    if (!j.is_object()) schema("model must be an object");
    for (const auto& item : j.items()) {
        if (item.key() != "p" && item.key() != "q") {
            schema("unknown model key: " + item.key());
        }
    }
    if (!j.contains("p") || !j.contains("q")) schema("model needs both p and q");
    return build_model(parse_matrix(j.at("p"), "p"), parse_matrix(j.at("q"), "q"));
}

HmmModel load_model(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        schema("cannot parse " + path + ": " + e.what());
    }
    return model_from_json(j);
}

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) schema("config must be an object");
    static const std::set<std::string> known = {
        "seed",   "model",   "T",        "n_max",  "n_min",   "N_lyap", "warmup",
        "steps",  "r",       "batches",  "windows", "m_depth", "tol",    "floor",
        "rank_tol", "p0",    "p1",       "epsilon", "eps_grid", "method", "mode",
        "curve",  "output",  "triples"};
    for (const auto& item : j.items()) {
        if (known.find(item.key()) == known.end()) {
            schema("unknown config key: " + item.key());
        }
    }
    if (!j.contains("seed")) schema("missing config key: seed");

    ExperimentConfig cfg;
    cfg.seed = parse_seed(j.at("seed"));

    if (j.contains("model")) {
        const json& m = j.at("model");
        if (m.is_string()) {
            std::filesystem::path p(m.get<std::string>());
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            cfg.model = load_model(p.string());
        } else {
            cfg.model = model_from_json(m);
        }
        cfg.has_model = true;
    }

    if (j.contains("T")) cfg.T = parse_int(j.at("T"), "T");
    if (j.contains("n_max")) cfg.n_max = parse_int(j.at("n_max"), "n_max");
    if (j.contains("n_min")) cfg.n_min = parse_int(j.at("n_min"), "n_min");
    if (j.contains("N_lyap")) cfg.N_lyap = parse_int(j.at("N_lyap"), "N_lyap");
    if (j.contains("warmup")) cfg.warmup = parse_int(j.at("warmup"), "warmup");
    if (j.contains("steps")) cfg.steps = parse_int(j.at("steps"), "steps");
    if (j.contains("r")) cfg.r = static_cast<int>(parse_int(j.at("r"), "r"));
    if (j.contains("batches")) cfg.batches = static_cast<int>(parse_int(j.at("batches"), "batches"));
    if (j.contains("windows")) cfg.windows = static_cast<int>(parse_int(j.at("windows"), "windows"));
    if (j.contains("m_depth")) cfg.m_depth = static_cast<int>(parse_int(j.at("m_depth"), "m_depth"));

    if (j.contains("tol")) cfg.tol = parse_real(j.at("tol"), "tol");
    if (j.contains("floor")) cfg.floor = parse_real(j.at("floor"), "floor");
    if (j.contains("rank_tol")) cfg.rank_tol = parse_real(j.at("rank_tol"), "rank_tol");
    if (j.contains("p0")) cfg.p0 = parse_real(j.at("p0"), "p0");
    if (j.contains("p1")) cfg.p1 = parse_real(j.at("p1"), "p1");
    if (j.contains("epsilon")) cfg.epsilon = parse_real(j.at("epsilon"), "epsilon");

    if (j.contains("eps_grid")) {
        const json& g = j.at("eps_grid");
        if (!g.is_array() || g.empty()) schema("eps_grid must be a non-empty array");
        cfg.eps_grid.clear();
        for (const json& e : g) cfg.eps_grid.push_back(parse_real(e, "eps_grid entry"));
    }

    if (j.contains("method")) {
        cfg.method = j.at("method").is_string() ? j.at("method").get<std::string>() : "";
        if (cfg.method != "regression" && cfg.method != "tail-max") {
            schema("method must be \"regression\" or \"tail-max\"");
        }
    }
    if (j.contains("mode")) {
        cfg.mode = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
        if (cfg.mode != "empirical" && cfg.mode != "rigorous") {
            schema("mode must be \"empirical\" or \"rigorous\"");
        }
    }
    if (j.contains("curve")) {
        cfg.curve = j.at("curve").is_string() ? j.at("curve").get<std::string>() : "";
        if (cfg.curve != "delta" && cfg.curve != "delta-tilde") {
            schema("curve must be \"delta\" or \"delta-tilde\"");
        }
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) schema("output must be a string");
        cfg.output = j.at("output").get<std::string>();
    }
    if (j.contains("triples")) {
        const json& ts = j.at("triples");
        if (!ts.is_array() || ts.empty()) schema("triples must be a non-empty array");
        for (const json& t : ts) cfg.triples.push_back(parse_triple(t));
        cfg.has_triples = true;
    }

    refresh_effective(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        schema("cannot parse " + path + ": " + e.what());
    }
    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    return config_from_json(j, dir.empty() ? "." : dir.string());
}

void refresh_effective(ExperimentConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    if (cfg.has_model) {
        j["model"]["p"] = matrix_to_json(cfg.model.p);
        j["model"]["q"] = matrix_to_json(cfg.model.q);
    }
    j["T"] = cfg.T;
    j["n_max"] = cfg.n_max;
    j["n_min"] = cfg.resolved_n_min();
    j["N_lyap"] = cfg.N_lyap;
    j["warmup"] = cfg.warmup;
    j["steps"] = cfg.steps;
    j["r"] = cfg.r;
    j["batches"] = cfg.batches;
    j["windows"] = cfg.windows;
    j["m_depth"] = cfg.m_depth;
    j["tol"] = json_real(cfg.tol);
    j["floor"] = json_real(cfg.floor);
    j["rank_tol"] = json_real(cfg.rank_tol);
    j["p0"] = json_real(cfg.p0);
    j["p1"] = json_real(cfg.p1);
    j["epsilon"] = json_real(cfg.epsilon);
    j["eps_grid"] = json::array();
    for (double e : cfg.eps_grid) j["eps_grid"].push_back(json_real(e));
    j["method"] = cfg.method;
    j["mode"] = cfg.mode;
    j["curve"] = cfg.curve;
    if (cfg.has_triples) {
        j["triples"] = json::array();
        for (const Triple& t : cfg.triples) j["triples"].push_back(format_triple(t));
    }
    cfg.effective = std::move(j);
}

json json_real(double x) {
    if (std::isfinite(x)) return json(x);
    if (std::isnan(x)) return json("nan");
    return json(x > 0 ? "inf" : "-inf");
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_triple(const Triple& t) {
    return std::to_string(t.a) + ":" + std::to_string(t.b) + ":" + std::to_string(t.c);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot open " + path + " for writing");
    out << content;
    if (!out) fail("IoError", "short write to " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

std::string render_csv(const json& config, const std::string& header,
                       const std::vector<std::string>& rows) {
    std::string out = "# config " + config.dump() + "\n" + header + "\n";
    for (const std::string& r : rows) {
        out += r;
        out += '\n';
    }
    return out;
}

json csv_embedded_config(const std::string& csv_text) {
    const std::string prefix = "# config ";
    if (csv_text.compare(0, prefix.size(), prefix) != 0) {
        schema("csv has no embedded config line");
    }
    const std::size_t eol = csv_text.find('\n');
    const std::string line =
        csv_text.substr(prefix.size(), eol == std::string::npos ? std::string::npos
                                                                : eol - prefix.size());
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        schema(std::string("embedded config is not valid json: ") + e.what());
    }
}

} // namespace hmmlyap
