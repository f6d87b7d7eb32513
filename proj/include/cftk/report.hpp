#pragma once

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cftk/scalar.hpp"

namespace cftk {

// Run-wide knobs; every subcommand reads these and echoes what it used.
struct RunConfig {
    std::uint64_t seed = 20240811;
    double ode_tol = 1e-10;
    std::size_t fourier_samples = 512;  // 2^k circle sampling
    long virasoro_cutoff = 8;
    Rational fermion_cutoff = Rational(3);
    std::string format = "json";

    static RunConfig defaults() { return RunConfig{}; }

    // key = value lines; '#' comments; unknown keys rejected
    static RunConfig from_stream(std::istream& in) {
        RunConfig c;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                auto a = s.find_first_not_of(" \t\r");
                auto b = s.find_last_not_of(" \t\r");
                return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (key.empty()) continue;
            if (key == "seed") c.seed = std::stoull(val);
            else if (key == "ode_tol") c.ode_tol = std::stod(val);
            else if (key == "fourier_samples") c.fourier_samples = std::stoul(val);
            else if (key == "virasoro_cutoff") c.virasoro_cutoff = std::stol(val);
            else if (key == "fermion_cutoff") c.fermion_cutoff = rational_from_string(val);
            else if (key == "format") c.format = val;
            else throw std::invalid_argument("unknown config key: " + key);
        }
        c.validate();
        return c;
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config file not found: " + path);
        return from_stream(in);
    }

    void apply_env() {
        if (const char* s = std::getenv("CFTK_SEED")) seed = std::stoull(s);
    }

    void validate() const {
        if (ode_tol <= 0) throw std::invalid_argument("ode_tol must be positive");
        if (fourier_samples == 0 || (fourier_samples & (fourier_samples - 1)) != 0)
            throw std::invalid_argument("fourier_samples must be a power of two");
        if (virasoro_cutoff < 0 || fermion_cutoff < 0) throw std::invalid_argument("negative cutoff");
    }

    nlohmann::json echo() const {
        return nlohmann::json{{"seed", seed},
                              {"ode_tol", ode_tol},
                              {"fourier_samples", fourier_samples},
                              {"virasoro_cutoff", virasoro_cutoff},
                              {"fermion_cutoff", to_string(fermion_cutoff)}};
    }
};

struct Report {
    std::string check;
    nlohmann::json params = nlohmann::json::object();
    std::string status = "pass";  // pass | fail | indeterminate
    nlohmann::json metrics = nlohmann::json::object();
    nlohmann::json provenance = nlohmann::json::object();

    void fail(const std::string& why) {
        status = "fail";
        if (!metrics.contains("failures")) metrics["failures"] = nlohmann::json::array();
        metrics["failures"].push_back(why);
    }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"check", check},
                              {"params", params},
                              {"status", status},
                              {"metrics", metrics},
                              {"provenance", provenance}};
    }
    int exit_code() const { return status == "pass" ? 0 : 1; }
};

}  // namespace cftk
