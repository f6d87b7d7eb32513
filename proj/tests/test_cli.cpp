#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* bin = std::getenv("CFTK_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = env_prefix + "\"" + bin + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) res.out.append(buf, n);
    int rc = pclose(pipe);
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

json load_schema() {
    const char* dir = std::getenv("CFTK_SCHEMA_DIR");
    REQUIRE(dir != nullptr);
    std::ifstream in(std::string(dir) + "/report.schema.json");
    REQUIRE(in.good());
    json s;
    in >> s;
    return s;
}

// validator for the subset of JSON Schema the published schema uses:
// type, required, properties, enum, additionalProperties
bool validate(const json& schema, const json& value, std::string& why) {
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        bool ok = (t == "object" && value.is_object()) || (t == "string" && value.is_string()) ||
                  (t == "array" && value.is_array()) || (t == "number" && value.is_number()) ||
                  (t == "boolean" && value.is_boolean());
        if (!ok) {
            why = "type mismatch, expected " + t;
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || e == value;
        if (!ok) {
            why = "value not in enum";
            return false;
        }
    }
    if (schema.contains("required"))
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>())) {
                why = "missing required key " + key.get<std::string>();
                return false;
            }
    if (schema.contains("properties"))
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
            if (value.contains(it.key()) && !validate(it.value(), value[it.key()], why)) {
                why = it.key() + ": " + why;
                return false;
            }
    if (schema.contains("additionalProperties") && schema["additionalProperties"] == false &&
        schema.contains("properties"))
        for (auto it = value.begin(); it != value.end(); ++it)
            if (!schema["properties"].contains(it.key())) {
                why = "unexpected key " + it.key();
                return false;
            }
    return true;
}

void check_schema(const json& report) {
    static const json schema = load_schema();
    std::string why;
    INFO(why);
    CHECK(validate(schema, report, why));
}

}  // namespace

TEST_CASE("gram subcommand emits the frozen Ising matrix") {
    auto r = run_cli("virasoro gram --c 1/2 --h 0 --level 2");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.out);
    check_schema(rep);
    CHECK(rep["status"] == "pass");
    CHECK(rep["metrics"]["matrix"] == json::parse(R"([["1/4","0"],["0","0"]])"));
}

TEST_CASE("code lattice subcommand matches the E8 report") {
    auto r = run_cli("code lattice --builtin hamming8 --report roots");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.out);
    check_schema(rep);
    CHECK(rep["metrics"]["root_count"] == "240");
    CHECK(rep["metrics"]["even"] == true);
    CHECK(rep["metrics"]["det"] == "1");
}

TEST_CASE("semigroup check passes below 1e-8") {
    auto r = run_cli("semigroup check --koenigs mobius:a=1/2 --t 0.5");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.out);
    check_schema(rep);
    CHECK(rep["status"] == "pass");
    CHECK(rep["metrics"]["max_residual"].get<double>() < 1e-8);
}

TEST_CASE("every subcommand's JSON validates against the published schema") {
    for (const char* args : {
             "virasoro irrep --c 1/2 --h 1/16 --cutoff 4",
             "virasoro norm-bound --t 1.0 --z-abs 0.3 --r 0.4 --cutoff 32",
             "semigroup evolve --koenigs identity --t 0.25 --samples 8",
             "annulus exact --c 1/2 --h 0 --koenigs mobius:a=1/2 --t 0.5 --cutoff 4",
             "annulus covariance --c 1/2 --h 0 --koenigs mobius:a=1/2 --t 0.5 --N 8 --j 0 --cutoff 4",
             "annulus region --koenigs identity --t 0.69",
             "fermion basis --cutoff 2",
             "fermion borcherds --samples 5 --cutoff 3/2",
             "fermion invariance --state nu --cutoff 2",
             "fermion char --cutoff 2",
             "fermion segal --r 1/3 --k 1 --cutoff 2",
             "intertwiner descend --charge \"psi(-1/2)|0>\" --cutoff 2 --grid 4",
             "intertwiner check --charge \"psi(-1/2)|0>\" --cutoff 2 --grid 5",
             "code predicates --builtin golay24",
             "code theta --builtin \"trivial(4)\" --cutoff 4",
             "code cocycle --builtin \"repetition(2)\" --epsilon -1",
             "code braid --p 1010 --q 1010 --kind semionic",
             "code braid --p 1010 --q 1100 --kind fermionic",
         }) {
        INFO(args);
        auto r = run_cli(args);
        REQUIRE(r.exit_code == 0);
        json rep = json::parse(r.out);
        check_schema(rep);
        CHECK(rep["status"] == "pass");
    }
}

TEST_CASE("identical seed and config give byte-identical reports") {
    auto a = run_cli("fermion borcherds --samples 12 --cutoff 3/2 --seed 99");
    auto b = run_cli("fermion borcherds --samples 12 --cutoff 3/2 --seed 99");
    CHECK(a.out == b.out);
    auto c = run_cli("annulus trotter --c 1/2 --h 0 --koenigs mobius:a=1/2 --t 1.0 --N 16 --cutoff 4");
    auto d = run_cli("annulus trotter --c 1/2 --h 0 --koenigs mobius:a=1/2 --t 1.0 --N 16 --cutoff 4");
    CHECK(c.out == d.out);
}

TEST_CASE("CFTK_SEED environment override lands in the provenance echo") {
    auto r = run_cli("fermion borcherds --samples 3 --cutoff 1", "CFTK_SEED=777 ");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.out);
    CHECK(rep["provenance"]["seed"] == 777);
    // explicit --seed wins over the environment
    auto r2 = run_cli("fermion borcherds --samples 3 --cutoff 1 --seed 5", "CFTK_SEED=777 ");
    CHECK(json::parse(r2.out)["provenance"]["seed"] == 5);
}

TEST_CASE("empty config equals explicit defaults") {
    std::string tmp = "/tmp/cftk_empty_config.txt";
    std::ofstream(tmp) << "# nothing here\n";
    auto a = run_cli("fermion char --cutoff 2 --config " + tmp);
    auto b = run_cli("fermion char --cutoff 2");
    CHECK(a.out == b.out);
    std::string tmp2 = "/tmp/cftk_config2.txt";
    std::ofstream(tmp2) << "seed = 4242\nfourier_samples = 256\n";
    auto c = run_cli("fermion char --cutoff 2 --config " + tmp2);
    CHECK(json::parse(c.out)["provenance"]["seed"] == 4242);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
    CHECK(run_cli("virasoro gram --c 1/2").exit_code == 2);           // missing required
    CHECK(run_cli("virasoro gram --c nonsense --h 0 --level 1").exit_code == 2);
    CHECK(run_cli("semigroup check --koenigs wat --t 0.5").exit_code == 2);
}

TEST_CASE("suite fast profile passes; the mutation canary fails with a named check") {
    auto ok = run_cli("suite --profile fast");
    REQUIRE(ok.exit_code == 0);
    json rep = json::parse(ok.out);
    check_schema(rep);
    CHECK(rep["status"] == "pass");
    CHECK(rep["metrics"]["criteria"].size() == 10);

    auto bad = run_cli("suite --profile fast --mutate");
    CHECK(bad.exit_code == 1);
    json brep = json::parse(bad.out);
    check_schema(brep);
    CHECK(brep["status"] == "fail");
    CHECK(brep["metrics"]["first_failure"] == "virasoro-gram");
}

TEST_CASE("csv and svg output formats") {
    auto csv = run_cli("code theta --builtin \"trivial(2)\" --cutoff 4 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.find("norm,count") == 0);
    CHECK(csv.out.find("2,4") != std::string::npos);  // 2n = 4 roots

    auto svg = run_cli("annulus region --koenigs identity --t 0.69 --format svg");
    REQUIRE(svg.exit_code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);

    auto gram_csv = run_cli("virasoro gram --c 1/2 --h 1/16 --level 1 --format csv");
    CHECK(gram_csv.out.find("1/8") == 0);
}

TEST_CASE("failing check writes a report and exits 1") {
    // non-unitary (c,h) signals a failed irrep with the offending level
    auto r = run_cli("virasoro irrep --c 1/2 --h 1/3 --cutoff 6");
    CHECK(r.exit_code == 1);
    json rep = json::parse(r.out);
    check_schema(rep);
    CHECK(rep["status"] == "fail");
    CHECK(rep["metrics"].contains("offending_level"));

    // semionic parity violation is rejected with a failing report
    auto b = run_cli("code braid --p 1010 --q 1100 --kind semionic");
    CHECK(b.exit_code == 1);
    json brep = json::parse(b.out);
    check_schema(brep);
    CHECK(brep["status"] == "fail");
}
