#include "ibt/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using ibt::Json;

struct RunConfig {
    long prime = 0;  // 0 = read from the instance file
    long degree = 0; // 0 = read from the instance file (default 1)
    long precision = 40;
    unsigned long long seed = 0;
    long den_cap = ibt::kDefaultDenominatorCap;
    long samples = 100;
    long radius = 1;
    std::string suite;
    std::string input;
    std::string output;
};

void add_common(CLI::App* cmd, RunConfig& cfg, bool needs_input) {
    cmd->fallthrough();
    auto* in = cmd->add_option("--input", cfg.input, "instance JSON file");
    if (needs_input) in->required();
    cmd->add_option("--prime", cfg.prime, "override the prime p");
    cmd->add_option("--degree", cfg.degree, "override the unramified degree s");
    cmd->add_option("--precision", cfg.precision, "working precision N")->default_val(40);
    cmd->add_option("--seed", cfg.seed, "seed for sampled checks")->default_val(0);
    cmd->add_option("--denominator-cap", cfg.den_cap, "largest allowed exponent denominator")
        ->default_val(ibt::kDefaultDenominatorCap);
    cmd->add_option("--samples", cfg.samples, "sample count for scans")->default_val(100);
    cmd->add_option("--radius", cfg.radius, "lattice enumeration radius")->default_val(1);
    cmd->add_option("--output", cfg.output, "write the report here instead of stdout");
}

Json config_json(const RunConfig& cfg, const ibt::Isocrystal& x) {
    return Json{{"prime", x.ctx()->p()},     {"degree", x.s()},
                {"precision", cfg.precision}, {"seed", cfg.seed},
                {"denominator_cap", cfg.den_cap}, {"samples", cfg.samples},
                {"radius", cfg.radius},      {"suite", cfg.suite},
                {"input", cfg.input}};
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ibt::InvalidParams("cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ibt::InvalidParams(std::string("malformed JSON input: ") + e.what());
    }
}

struct Loaded {
    Json file;
    ibt::Isocrystal x;
};

Loaded load_instance(const RunConfig& cfg) {
    Json file = load_json(cfg.input);
    if (cfg.prime > 0) file["p"] = cfg.prime;
    if (cfg.degree > 0) file["s"] = cfg.degree;
    return {file, ibt::isocrystal_from_json(file, cfg.precision)};
}

void emit(const RunConfig& cfg, const Json& payload) {
    std::string text = payload.dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw ibt::InvalidParams("cannot open output file: " + cfg.output);
    out << text;
}

int run_slopes(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    Json out = ibt::report_header("slopes", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    out["slopes"] = ibt::newton_point_to_json(newton_point(ld.x));
    out["decomposable"] = ibt::slope_determinant_identity(ld.x);
    emit(cfg, out);
    return 0;
}

int run_decompose(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    Json out = ibt::report_header("decompose", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    out["blocks"] = ibt::decomposition_to_json(isocline_decomposition(ld.x));
    emit(cfg, out);
    return 0;
}

int run_decent(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    long r = 1;
    for (const auto& l : ld.x.cached_newton_point()) r = ibt::lcm_long(r, ibt::rat_den_long(l));
    Json out = ibt::report_header("decent", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    out["s"] = r;
    out["decent"] = ibt::is_decent(ld.x, r);
    emit(cfg, out);
    return 0;
}

int run_min_check(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    if (!ld.file.contains("norm"))
        throw ibt::InvalidParams("min-check needs a \"norm\" object in the input file");
    ibt::Norm a = ibt::norm_from_json(ld.x.ctx(), ld.file.at("norm"), cfg.den_cap);
    Json out = ibt::report_header("min-check", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    out["norm"] = ibt::norm_to_json(a);
    out["displacement2"] = ibt::rat_str(ibt::displacement_squared(ld.x, a));
    out["min_nu2"] = ibt::rat_str(min_nu(ld.x));
    out["in_min"] = ibt::is_in_min(ld.x, a);
    emit(cfg, out);
    return 0;
}

int run_min_point(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    if (!ld.file.contains("shifts"))
        throw ibt::InvalidParams(
            "min-point needs a \"shifts\" array (one base exponent per block)");
    std::vector<ibt::Rat> shifts;
    for (const auto& s : ld.file.at("shifts")) {
        if (s.is_number_integer()) shifts.push_back(ibt::Rat(s.get<long>()));
        else shifts.push_back(ibt::rat_parse(s.get<std::string>()));
    }
    ibt::Norm a = ibt::min_point(ld.x, shifts);
    Json out = ibt::report_header("min-point", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    out["norm"] = ibt::norm_to_json(a);
    out["in_min"] = ibt::is_in_min(ld.x, a);
    out["displacement2"] = ibt::rat_str(ibt::displacement_squared(ld.x, a));
    emit(cfg, out);
    return 0;
}

int run_scan(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    ibt::ScanReport rep = ibt::kappa_scan(ld.x, cfg.samples, cfg.seed);
    Json out = ibt::scan_report_to_json(ld.x, rep);
    out["config"] = config_json(cfg, ld.x);
    emit(cfg, out);
    return rep.pass ? 0 : 1;
}

int run_crystals(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    auto lattices = ibt::enumerate_crystals(ld.x, cfg.radius);
    Json out = ibt::report_header("crystals", ld.x, cfg.seed);
    out["config"] = config_json(cfg, ld.x);
    Json arr = Json::array();
    std::vector<size_t> minimal;
    for (size_t i = 0; i < lattices.size(); ++i) {
        bool mini = ibt::is_minimal_crystal(ld.x, lattices[i]);
        arr.push_back(Json{{"basis", ibt::mat_to_json(lattices[i])}, {"minimal", mini}});
        if (mini) minimal.push_back(i);
    }
    out["crystals"] = std::move(arr);
    Json wits = Json::array();
    for (size_t t = 1; t < minimal.size(); ++t) {
        auto g = ibt::crystal_isomorphism(ld.x, lattices[minimal[0]], lattices[minimal[t]]);
        Json w{{"from", minimal[0]}, {"to", minimal[t]}};
        if (g) w["g"] = ibt::mat_to_json(*g);
        else w["g"] = nullptr;
        wits.push_back(std::move(w));
    }
    out["witnesses"] = std::move(wits);
    emit(cfg, out);
    return 0;
}

int run_verify(const RunConfig& cfg) {
    Loaded ld = load_instance(cfg);
    if (cfg.suite.empty()) throw ibt::InvalidParams("verify needs --suite");
    ibt::VerificationReport rep = ibt::verify_suite(ld.x, cfg.suite, cfg.seed);
    Json out = ibt::verification_report_to_json(ld.x, rep);
    out["config"] = config_json(cfg, ld.x);
    emit(cfg, out);
    return rep.pass ? 0 : 1;
}

void error_json(const std::string& code, const std::string& message) {
    std::cerr << Json{{"error", code}, {"message", message}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact isocrystal and building computations"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config with one section per subcommand");

    RunConfig cfg;
    auto* slopes = app.add_subcommand("slopes", "Newton point of an instance");
    add_common(slopes, cfg, true);
    auto* decompose = app.add_subcommand("decompose", "verified isoclinic decomposition");
    add_common(decompose, cfg, true);
    auto* decent = app.add_subcommand("decent", "descent identity at the slope lcm");
    add_common(decent, cfg, true);
    auto* min_check = app.add_subcommand("min-check", "exact displacement minimizer test");
    add_common(min_check, cfg, true);
    auto* min_point = app.add_subcommand("min-point", "construct a minimizing norm");
    add_common(min_point, cfg, true);
    auto* scan = app.add_subcommand("scan", "displacement bound and ratio scan");
    add_common(scan, cfg, true);
    auto* crystals = app.add_subcommand("crystals", "enumerate stable lattices");
    add_common(crystals, cfg, true);
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify, cfg, true);
    verify->add_option("--suite", cfg.suite, "prop1, thm2, bound37, or remark6")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("BadArguments", e.what());
        return 2;
    }

    try {
        if (slopes->parsed()) return run_slopes(cfg);
        if (decompose->parsed()) return run_decompose(cfg);
        if (decent->parsed()) return run_decent(cfg);
        if (min_check->parsed()) return run_min_check(cfg);
        if (min_point->parsed()) return run_min_point(cfg);
        if (scan->parsed()) return run_scan(cfg);
        if (crystals->parsed()) return run_crystals(cfg);
        if (verify->parsed()) return run_verify(cfg);
    } catch (const ibt::PrecisionExhausted& e) {
        error_json(e.code(), e.what());
        return 3;
    } catch (const ibt::DecompositionUnverified& e) {
        error_json(e.code(), e.what());
        return 3;
    } catch (const ibt::Error& e) {
        error_json(e.code(), e.what());
        return 2;
    } catch (const Json::exception& e) {
        error_json("BadInput", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_json("Unexpected", e.what());
        return 2;
    }
    return 2;
}
