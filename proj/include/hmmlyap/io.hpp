#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmmlyap/memloss.hpp"
#include "hmmlyap/model.hpp"

namespace hmmlyap {

// Fully resolved experiment configuration. `effective` is the canonical
// re-emittable JSON: defaults applied, model inlined, output location
// excluded, so that any emitted artifact can be regenerated byte-identically
// from the config it embeds.
struct ExperimentConfig {
    HmmModel model;
    bool has_model = false;
    std::uint64_t seed = 0;

    long long T = 0;  // 0 = derived per command
    long long n_max = 400;
    long long n_min = 0;  // 0 = n_max / 2
    long long N_lyap = 1000000;
    long long warmup = 200;
    long long steps = 200000;  // perturb sweep sample size
    int r = 0;                 // 0 = min(k, 2)
    int batches = 50;
    int windows = 20;
    int m_depth = 40;

    double tol = 0.05;
    double floor = 1e-290;
    double rank_tol = 1e-10;

    double p0 = 0.9;
    double p1 = 0.2;
    double epsilon = 0.1;
    std::vector<double> eps_grid{0.02, 0.05, 0.1};

    std::string method = "regression";
    std::string mode = "empirical";
    std::string curve = "delta";  // or "delta-tilde"
    std::string output = ".";

    std::vector<Triple> triples;
    bool has_triples = false;

    nlohmann::json effective;

    long long resolved_n_min() const { return n_min > 0 ? n_min : n_max / 2; }
};

// {"p": [[...]], "q": [[...]]} row-major. SchemaError on shape or key
// violations; stochasticity is enforced by build_model.
HmmModel model_from_json(const nlohmann::json& j);
HmmModel load_model(const std::string& path);

// Strict schema: unknown keys are SchemaErrors naming the key, seed is
// mandatory, "model" is inline matrices or a file path (resolved relative to
// the config file for load_config).
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Rebuilds `effective` from the typed fields (after command-line overrides).
void refresh_effective(ExperimentConfig& cfg);

// JSON value for a double: plain number when finite, "inf"/"-inf"/"nan"
// strings otherwise (nlohmann would emit null).
nlohmann::json json_real(double x);

// Shortest round-trip decimal form, '.' separator, no locale.
std::string format_real(double x);

std::string format_triple(const Triple& t);  // "a:b:c"

// Pretty, sorted keys, trailing newline.
std::string dump_json(const nlohmann::json& j);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// CSV with one leading "# config {...}" comment line carrying the compact
// effective config, then the header row, then pre-formatted rows.
std::string render_csv(const nlohmann::json& config, const std::string& header,
                       const std::vector<std::string>& rows);

// Extracts the config JSON back out of a rendered CSV (the reproducibility
// path). SchemaError when the comment line is missing.
nlohmann::json csv_embedded_config(const std::string& csv_text);

} // namespace hmmlyap
