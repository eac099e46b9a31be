#pragma once

// Scenario ingestion and orchestration: a declarative JSON config selects a
// space, regions, fields, measures and a list of checks; the runner executes
// the pipelines and emits deterministic JSON reports plus one PASS/FAIL line
// per check. Batch mode fans scenarios out over a worker pool.

#include "abplab/abpverify.hpp"
#include "abplab/calculus.hpp"
#include "abplab/contact.hpp"
#include "abplab/distortion.hpp"
#include "abplab/entropy.hpp"
#include "abplab/io.hpp"
#include "abplab/mmspace.hpp"
#include "abplab/report.hpp"
#include "abplab/transport.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace abplab {

struct CheckOutcome {
    std::string name;
    bool pass = false;
};

struct ScenarioResult {
    int exit_code = 0;  // 0 pass, 1 checks failed, 2 config, 3 hypothesis, 4 output
    std::string error;
    std::string name;
    std::string output_path;  // as requested by the config (may be empty)
    std::vector<CheckOutcome> outcomes;
    Json report;

    bool all_pass() const {
        for (const auto& o : outcomes)
            if (!o.pass) return false;
        return true;
    }
};

namespace detail {

inline ContactKind parse_kind(const std::string& kind) {
    if (kind == "r2") return ContactKind::R2;
    if (kind == "r1") return ContactKind::R1;
    if (kind == "r1star") return ContactKind::R1Star;
    throw ConfigError("params.kind: expected one of 'r1', 'r2', 'r1star', got '" + kind +
                      "'");
}

inline Json contact_to_json(const ContactSetResult& c) {
    Json out;
    out["kind"] = to_string(c.kind);
    out["opening"] = c.opening;
    out["members"] = Json::array_of(c.members);
    Json::Array wit;
    for (const auto& w : c.witnesses) wit.emplace_back(Json::array_of(w));
    out["witnesses"] = Json(std::move(wit));
    out["residuals"] = Json::array_of(c.residuals);
    out["r1_surjectivity"] = c.r1_surjectivity;
    out["tol_eq"] = c.tol_eq;
    out["tol_dist"] = c.tol_dist;
    return out;
}

inline Json abp_to_json(const AbpReport& r) {
    Json out;
    out["kind"] = to_string(r.kind);
    out["K"] = r.K;
    out["N"] = r.N;
    out["t"] = r.t;
    out["mass_D"] = r.mass_D;
    out["mass_R"] = r.mass_R;
    out["theta_sup"] = r.theta_sup;
    out["phi_inf"] = r.phi_inf;
    out["laplacian_sup"] = r.laplacian_sup;
    out["coefficient"] = r.coefficient;
    out["bound"] = r.bound;
    out["slack"] = r.slack;
    out["satisfied"] = r.satisfied;
    out["r1_surjectivity"] = r.r1_surjectivity;
    out["contact_size"] = r.contact_size;
    out["tol_eq"] = r.tol_eq_used;
    out["tol_dist"] = r.tol_dist_used;
    out["tol_slack"] = r.tolerances.tol_slack;
    if (r.has_exp_bound) {
        out["exp_bound"] = r.exp_bound;
        out["exp_slack"] = r.exp_slack;
        out["exp_satisfied"] = r.exp_satisfied;
    }
    return out;
}

inline Json inequality_to_json(const InequalityReport& r) {
    Json out;
    out["name"] = r.name;
    out["pass"] = r.pass;
    out["tol"] = r.tol;
    out["w2"] = r.w2;
    out["min_slack"] = r.min_slack;
    out["used_plan_retry"] = r.used_plan_retry;
    Json::Array entries;
    for (const auto& e : r.entries) {
        Json je;
        je["t"] = e.t;
        je["slack"] = e.trivial ? Json("trivial") : Json(e.slack);
        je["trivial"] = e.trivial;
        entries.emplace_back(std::move(je));
    }
    out["entries"] = Json(std::move(entries));
    return out;
}

inline Json steiner_to_json(const SteinerReport& r) {
    Json out;
    out["exterior_sphere_ok"] = r.exterior_sphere_ok;
    if (!r.exterior_sphere_ok) out["exterior_sphere_failure"] = r.exterior_sphere_failure;
    out["band_ok"] = r.band_ok;
    out["band_max_violation"] = r.band_max_violation;
    out["band_size"] = r.band_size;
    out["h_in_stated_range"] = r.h_in_stated_range;
    out["eps"] = Json::array_of(r.eps);
    out["mass"] = Json::array_of(r.mass);
    out["minkowski_plus"] = r.minkowski_plus;
    Json::Array annulus;
    for (const auto& e : r.annulus) {
        Json je;
        je["eps"] = e.eps;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["slack"] = e.slack;
        annulus.emplace_back(std::move(je));
    }
    out["annulus"] = Json(std::move(annulus));
    out["annulus_ok"] = r.annulus_ok;
    out["expansion_checked"] = r.expansion_checked;
    if (r.expansion_checked) {
        out["expansion_ok"] = r.expansion_ok;
        out["expansion_residual"] = Json::array_of(r.expansion_residual);
        out["remainder_coefficient"] = r.remainder_coefficient;
        out["remainder_stability"] = r.remainder_stability;
    }
    return out;
}

}  // namespace detail

/// Executes the checks listed in the config (or the explicit override) and
/// assembles the deterministic report. Never throws; failures land in
/// exit_code / error.
inline ScenarioResult run_scenario(const json& config,
                                   const std::vector<std::string>& check_override = {}) {
    ScenarioResult result;
    try {
        if (!config.is_object()) throw ConfigError("scenario: config must be a JSON object");
        result.name = config.value("name", std::string("scenario"));
        result.output_path = config.value("output", std::string());
        if (!config.contains("space")) throw ConfigError("scenario: field 'space' is required");
        std::vector<std::string> checks = check_override;
        if (checks.empty()) {
            if (!config.contains("checks"))
                throw ConfigError("scenario: field 'checks' is required");
            checks = config.at("checks").get<std::vector<std::string>>();
        }
        if (checks.empty()) throw ConfigError("scenario: empty check list");

        const DiscreteMMSpace space = parse_space(config.at("space"));
        const json params = config.value("params", json::object());
        const json tolerances = config.value("tolerances", json::object());

        auto need_region = [&](const char* field) {
            if (!config.contains(field))
                throw ConfigError(std::string("scenario: field '") + field +
                                  "' is required by the requested checks");
            return parse_region(config.at(field), space,
                                std::string(field) == "omega" ? RegionKind::OpenDomain
                                                              : RegionKind::VertexSet);
        };
        auto need_param = [&](const char* field) {
            if (!params.contains(field))
                throw ConfigError(std::string("scenario: params.") + field + " is required");
            return params.at(field).get<double>();
        };
        auto need_measure = [&](const char* field) {
            if (!config.contains(field))
                throw ConfigError(std::string("scenario: field '") + field +
                                  "' is required by the requested checks");
            return parse_measure(config.at(field), space);
        };
        auto default_tol_disc = [&](const ProbMeasure& mu0) {
            if (tolerances.contains("tol_disc"))
                return tolerances.at("tol_disc").get<double>();
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (PointId p = 0; p < space.size(); ++p) {
                const double rho = mu0.density(space, p);
                lo = std::min(lo, rho);
                hi = std::max(hi, rho);
            }
            return 5.0 * std::sqrt(space.mesh_size()) * (hi - lo);
        };

        Json checks_json;
        Json::Object checks_obj;
        for (const std::string& check : checks) {
            Json section;
            bool pass = false;
            if (check == "validate" || check == "validate-space") {
                const MetricValidationReport rep = validate_metric(space);
                section["tolerance"] = rep.tolerance;
                section["violation_count"] = rep.violations.size();
                Json::Array viols;
                for (std::size_t k = 0; k < std::min<std::size_t>(rep.violations.size(), 100);
                     ++k) {
                    const auto& v = rep.violations[k];
                    Json jv;
                    const char* kinds[] = {"diagonal", "symmetry", "negative",
                                           "triangle", "mass",     "edge_weight"};
                    jv["kind"] = kinds[static_cast<int>(v.kind)];
                    jv["i"] = v.i;
                    jv["j"] = v.j;
                    jv["k"] = v.k;
                    jv["detail"] = v.detail;
                    viols.emplace_back(std::move(jv));
                }
                section["violations"] = Json(std::move(viols));
                pass = rep.ok();
            } else if (check == "w2") {
                const ProbMeasure mu0 = need_measure("mu0");
                const ProbMeasure mu1 = need_measure("mu1");
                const TransportSolution sol = solve_w2(space, mu0, mu1);
                const double tol = 1e-9 * (1.0 + space.diameter() * space.diameter());
                const OptimalityReport cert =
                    verify_optimality(space, sol.plan, sol.potential, sol.c_potential, tol);
                section["cost"] = sol.cost;
                section["lp_cost"] = sol.lp_cost;
                section["duality_gap"] = sol.duality_gap;
                Json::Array plan;
                for (const auto& e : sol.plan) {
                    Json::Array entry = {Json(e.from), Json(e.to), Json(e.mass)};
                    plan.emplace_back(std::move(entry));
                }
                section["plan"] = Json(std::move(plan));
                section["potential"] = Json::array_of(sol.potential);
                section["c_potential"] = Json::array_of(sol.c_potential);
                section["certificate_pass"] = cert.pass;
                section["certificate_max_residual"] = cert.max_residual;
                section["certificate_tol"] = cert.tol;
                pass = cert.pass;
            } else if (check == "contact") {
                const Region omega = need_region("omega");
                const Region d_set = need_region("d_region");
                const ScalarField u = parse_field(
                    config.contains("u") ? config.at("u")
                                         : throw ConfigError("scenario: field 'u' is required"),
                    space);
                const ContactKind kind = detail::parse_kind(
                    params.value("kind", std::string("r2")));
                const double t =
                    kind == ContactKind::R1Star ? params.value("t", 0.0) : need_param("t");
                const double tol_eq = tolerances.contains("tol_eq")
                                          ? tolerances.at("tol_eq").get<double>()
                                          : default_tol_eq(space, u, kind, t);
                const double tol_dist = tolerances.value("tol_dist", space.mesh_size());
                const ContactSetResult c =
                    compute_contact_set(space, d_set, omega, u, t, kind, tol_eq, tol_dist);
                section = detail::contact_to_json(c);
                pass = !c.members.empty();
            } else if (check == "abp-verify") {
                const Region omega = need_region("omega");
                const Region d_set = need_region("d_region");
                if (!config.contains("u"))
                    throw ConfigError("scenario: field 'u' is required");
                const ScalarField u = parse_field(config.at("u"), space);
                const ContactKind kind =
                    detail::parse_kind(params.value("kind", std::string("r2")));
                AbpTolerances tols;
                tols.tol_eq = tolerances.value("tol_eq", -1.0);
                tols.tol_dist = tolerances.value("tol_dist", -1.0);
                tols.tol_slack = tolerances.value("tol_slack", 0.0);
                const AbpReport rep = verify_abp(space, d_set, omega, u, need_param("t"),
                                                 need_param("K"), need_param("N"), kind, tols);
                section = detail::abp_to_json(rep);
                // sup norms silently restrict to the interior mask; surface it
                section["omega_exits_interior"] = region_exits_interior(space, omega);
                pass = rep.satisfied && (!rep.has_exp_bound || rep.exp_satisfied);
            } else if (check == "cd-check") {
                const ProbMeasure mu0 = need_measure("mu0");
                const ProbMeasure mu1 = need_measure("mu1");
                const double K = need_param("K");
                const double N = need_param("N");
                const double nprime = params.value("N_prime", N);
                std::vector<double> samples =
                    config.value("samples", std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
                const double tol = default_tol_disc(mu0);
                const InequalityReport kn =
                    check_kn_convexity(space, mu0, mu1, K, N, samples, tol);
                const InequalityReport cd =
                    check_cd_inequality(space, mu0, mu1, K, nprime, samples, tol);
                section["kn_convexity"] = detail::inequality_to_json(kn);
                section["cd_inequality"] = detail::inequality_to_json(cd);
                pass = kn.pass && cd.pass;
            } else if (check == "fabp-check") {
                const Region omega = need_region("omega");
                const ProbMeasure mu0 = need_measure("mu0");
                const ProbMeasure mu1 = need_measure("mu1");
                const FunctionalAbpReport rep =
                    check_functional_abp(space, omega, mu0, mu1, need_param("K"),
                                         need_param("N"), default_tol_disc(mu0));
                section["pass"] = rep.pass;
                section["trivial"] = rep.trivial;
                section["tol"] = rep.tol;
                section["w2"] = rep.w2;
                section["laplacian_integral"] = rep.laplacian_integral;
                section["coefficient"] = rep.coefficient;
                section["bound"] = rep.bound;
                section["u_n_0"] = rep.u_n_0;
                section["u_n_1"] = rep.u_n_1;
                section["slack"] = rep.slack;
                pass = rep.pass;
            } else if (check == "steiner") {
                const Region omega = need_region("omega");
                const json sj = config.value("steiner", json::object());
                SteinerParams prm;
                prm.H = sj.value("H", 0.0);
                prm.N = sj.value("N", params.value("N", 2.0));
                prm.sigma_band = sj.value("sigma_band", 10.0 * space.mesh_size());
                prm.exterior_r = sj.value("exterior_r", 5.0 * space.mesh_size());
                if (!sj.contains("eps_list"))
                    throw ConfigError("scenario: steiner.eps_list is required");
                prm.eps_list = sj.at("eps_list").get<std::vector<double>>();
                prm.band_tol = sj.value("band_tol", 1e-9);
                prm.annulus_tol = sj.value("annulus_tol", 2.0 * space.mesh_size());
                prm.band_inner_offset = sj.value("band_inner_offset", -1.0);
                const SteinerReport rep = steiner_experiment(space, omega, prm);
                section = detail::steiner_to_json(rep);
                pass = rep.exterior_sphere_ok && rep.annulus_ok &&
                       (!rep.expansion_checked || rep.expansion_ok);
            } else {
                throw ConfigError("scenario: unknown check '" + check + "'");
            }
            section["status"] = pass ? "PASS" : "FAIL";
            checks_obj[check] = std::move(section);
            result.outcomes.push_back({check, pass});
        }
        result.report["name"] = result.name;
        result.report["checks"] = Json(std::move(checks_obj));
        result.exit_code = result.all_pass() ? 0 : 1;
    } catch (const HypothesisViolation& e) {
        result.exit_code = 3;
        result.error = std::string("hypothesis violation [") + e.hypothesis + "]: " + e.what();
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.error = e.what();
    } catch (const std::exception& e) {
        result.exit_code = 2;
        result.error = e.what();
    }
    return result;
}

inline bool write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return static_cast<bool>(out);
}

inline std::size_t worker_count() {
    if (const char* env = std::getenv("ABPLAB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return std::max(1u, std::min(hc, 8u));
}

struct BatchResult {
    int exit_code = 0;
    std::vector<ScenarioResult> results;
    std::string csv;
};

/// Runs the listed scenario files concurrently (ABPLAB_WORKERS overrides the
/// pool size); report writing stays in input order.
inline BatchResult run_batch(const std::vector<std::string>& paths) {
    BatchResult batch;
    batch.results.resize(paths.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(paths.size(), 1));
    auto work = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= paths.size()) return;
            try {
                const json config = load_json_file(paths[k]);
                batch.results[k] = run_scenario(config);
            } catch (const std::exception& e) {
                batch.results[k].exit_code = 2;
                batch.results[k].error = e.what();
                batch.results[k].name = paths[k];
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::vector<CsvSummaryRow> rows;
    for (const auto& r : batch.results) {
        CsvSummaryRow row;
        row.name = r.name;
        row.pass = r.exit_code == 0;
        row.checks_total = r.outcomes.size();
        for (const auto& o : r.outcomes) row.checks_passed += o.pass ? 1 : 0;
        row.report_file = r.output_path;
        rows.push_back(row);
        // exit-code precedence: config beats hypothesis beats plain failure
        auto rank = [](int code) {
            switch (code) {
                case 2: return 4;
                case 3: return 3;
                case 4: return 2;
                case 1: return 1;
                default: return 0;
            }
        };
        if (rank(r.exit_code) > rank(batch.exit_code)) batch.exit_code = r.exit_code;
    }
    batch.csv = csv_summary(rows);
    return batch;
}

}  // namespace abplab
