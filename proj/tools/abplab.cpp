// Command-line front end: scenario-driven verification pipelines with
// deterministic JSON reports, plus a direct coefficient calculator.
//
// Subcommands
//   validate-space, w2, contact, abp-verify, cd-check, fabp-check, steiner
//       run one pipeline over a scenario config
//   coeff    print a distortion coefficient to 15 significant digits
//   batch    run many scenario files over a worker pool and emit a CSV summary
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error,
// 3 hypothesis violation, 4 unwritable output path.

#include "abplab/distortion.hpp"
#include "abplab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace {

int emit_scenario_result(const abplab::ScenarioResult& result, const std::string& out_override,
                         const std::string& fallback_stem) {
    if (result.exit_code >= 2) {
        std::fprintf(stderr, "error: %s\n", result.error.c_str());
        return result.exit_code;
    }
    for (const auto& o : result.outcomes)
        std::printf("[%s] %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str());
    std::string path = out_override;
    if (path.empty()) path = result.output_path;
    if (path.empty()) path = fallback_stem + ".report.json";
    if (!abplab::write_text_file(path, result.report.dump())) {
        std::fprintf(stderr, "error: cannot write report to '%s'\n", path.c_str());
        return 4;
    }
    std::printf("report: %s\n", path.c_str());
    return result.exit_code;
}

int run_single_check(const std::string& config_path, const std::string& check,
                     const std::string& out_override,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
    abplab::json config;
    try {
        config = abplab::load_json_file(config_path);
        for (const auto& [key, value] : overrides) {
            if (key == "kind") {
                config["params"]["kind"] = value;
            } else if (key == "t") {
                config["params"]["t"] = std::stod(value);
            } else if (key == "tol_eq") {
                config["tolerances"]["tol_eq"] = std::stod(value);
            } else if (key == "tol_dist") {
                config["tolerances"]["tol_dist"] = std::stod(value);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    const abplab::ScenarioResult result = abplab::run_scenario(config, {check});
    const std::string stem = config.value("name", std::string("scenario"));
    return emit_scenario_result(result, out_override, stem);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"abplab: metric-measure-space transport and contact-set laboratory"};
    app.require_subcommand(1);

    // ---- coeff ------------------------------------------------------------
    std::string coeff_op = "sigma";
    double c_kappa_arg = 0.0, c_K = 0.0, c_N = 2.0, c_t = 0.5, c_theta = 1.0;
    double c_L = 0.0, c_Theta = 1.0, c_Phi = 0.0;
    auto* coeff = app.add_subcommand("coeff", "print a coefficient to 15 significant digits");
    coeff->add_option("--op", coeff_op, "one of s, c, sigma, tau, abp")->required();
    coeff->add_option("--kappa", c_kappa_arg, "kappa for the s/c solutions");
    coeff->add_option("--K", c_K, "curvature bound");
    coeff->add_option("--N", c_N, "dimension bound");
    coeff->add_option("--t", c_t, "interpolation fraction / opening");
    coeff->add_option("--theta", c_theta, "distance argument");
    coeff->add_option("--L", c_L, "Laplacian sup norm");
    coeff->add_option("--Theta", c_Theta, "sup distance over D x Omega");
    coeff->add_option("--Phi", c_Phi, "inf distance over D x Omega");

    // ---- scenario pipelines -------------------------------------------------
    struct PipelineArgs {
        std::string config;
        std::string out;
    };
    const std::vector<std::string> pipelines = {"validate-space", "w2",       "contact",
                                                "abp-verify",     "cd-check", "fabp-check",
                                                "steiner"};
    std::map<std::string, PipelineArgs> pipeline_args;
    std::string contact_kind, contact_t, contact_tol_eq, contact_tol_dist;
    for (const std::string& name : pipelines) {
        auto* sub = app.add_subcommand(name, "run the " + name + " pipeline on a scenario");
        auto& args = pipeline_args[name];
        sub->add_option("config", args.config, "scenario JSON file")->required();
        sub->add_option("--out", args.out, "report output path");
        if (name == "contact") {
            sub->add_option("--kind", contact_kind, "contact kind: r1, r2, r1star");
            sub->add_option("--t", contact_t, "opening");
            sub->add_option("--tol-eq", contact_tol_eq, "equality tolerance");
            sub->add_option("--tol-dist", contact_tol_dist, "distance-band tolerance");
        }
    }

    // ---- batch ---------------------------------------------------------------
    std::vector<std::string> batch_files;
    std::string batch_csv;
    auto* batch = app.add_subcommand("batch", "run scenario files concurrently");
    batch->add_option("configs", batch_files, "scenario JSON files")->required();
    batch->add_option("--csv", batch_csv, "write a one-row-per-scenario CSV summary");

    CLI11_PARSE(app, argc, argv);

    if (coeff->parsed()) {
        try {
            double value = 0.0;
            bool infinite = false;
            if (coeff_op == "s") {
                value = abplab::s_kappa(c_kappa_arg, c_theta);
            } else if (coeff_op == "c") {
                value = abplab::c_kappa(c_kappa_arg, c_theta);
            } else if (coeff_op == "sigma") {
                const abplab::ExtendedReal r = abplab::sigma(c_K, c_N, c_t, c_theta);
                infinite = r.infinite;
                value = r.value;
            } else if (coeff_op == "tau") {
                const abplab::ExtendedReal r = abplab::tau(c_K, c_N, c_t, c_theta);
                infinite = r.infinite;
                value = r.value;
            } else if (coeff_op == "abp") {
                value = abplab::abp_coefficient(c_K, c_N, c_t, c_L, c_Theta, c_Phi).value;
            } else {
                std::fprintf(stderr, "error: unknown coefficient '%s'\n", coeff_op.c_str());
                return 2;
            }
            if (infinite) {
                std::printf("inf\n");
            } else {
                std::printf("%.15g\n", value);
            }
            return 0;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 2;
        }
    }

    for (const std::string& name : pipelines) {
        auto* sub = app.get_subcommand(name);
        if (!sub->parsed()) continue;
        std::vector<std::pair<std::string, std::string>> overrides;
        if (name == "contact") {
            if (!contact_kind.empty()) overrides.push_back({"kind", contact_kind});
            if (!contact_t.empty()) overrides.push_back({"t", contact_t});
            if (!contact_tol_eq.empty()) overrides.push_back({"tol_eq", contact_tol_eq});
            if (!contact_tol_dist.empty()) overrides.push_back({"tol_dist", contact_tol_dist});
        }
        const std::string check = name == "validate-space" ? "validate" : name;
        return run_single_check(pipeline_args[name].config, check, pipeline_args[name].out,
                                overrides);
    }

    if (batch->parsed()) {
        const abplab::BatchResult result = abplab::run_batch(batch_files);
        for (const auto& r : result.results) {
            if (r.exit_code >= 2) {
                std::fprintf(stderr, "[%s] error: %s\n", r.name.c_str(), r.error.c_str());
                continue;
            }
            for (const auto& o : r.outcomes)
                std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", r.name.c_str(),
                            o.name.c_str());
            if (!r.output_path.empty()) {
                if (!abplab::write_text_file(r.output_path, r.report.dump())) {
                    std::fprintf(stderr, "error: cannot write report to '%s'\n",
                                 r.output_path.c_str());
                    return 4;
                }
            }
        }
        if (!batch_csv.empty() && !abplab::write_text_file(batch_csv, result.csv)) {
            std::fprintf(stderr, "error: cannot write CSV to '%s'\n", batch_csv.c_str());
            return 4;
        }
        return result.exit_code;
    }

    return 2;
}
