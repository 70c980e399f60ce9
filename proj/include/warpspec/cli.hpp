#pragma once

// Command layer: experiment configs (structured text, one key per line),
// orchestration of the construction / verification / spectral routines, and
// deterministic CSV/JSON artifact writers.  The CLI binary is a thin
// argument-parsing wrapper around run_command().
//
// Exit codes: 0 all verdicts pass, 1 configuration error, 2 growth-rate
// hypothesis violated, 3 numerical failure (barrier, comparison, solver).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpspec/barrier.hpp"
#include "warpspec/models.hpp"
#include "warpspec/profile.hpp"
#include "warpspec/radial.hpp"
#include "warpspec/spectral.hpp"

namespace warpspec {

struct ExperimentConfig {
    std::map<std::string, std::vector<std::string>> kv;

    static ExperimentConfig parse(const std::string& text) {
        ExperimentConfig cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key.empty()) continue;
            if (cfg.kv.count(key))
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": duplicate key '" + key + "'");
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t) toks.push_back(t);
            cfg.kv[key] = toks;
        }
        return cfg;
    }

    void allow_only(const std::vector<std::string>& allowed) const {
        for (const auto& [key, _] : kv) {
            bool ok = false;
            for (const auto& a : allowed) ok = ok || a == key;
            if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string str(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end() || it->second.empty())
            throw std::invalid_argument("config: missing value for '" + key + "'");
        return it->second[0];
    }
    std::string str_or(const std::string& key, const std::string& dflt) const {
        return has(key) ? str(key) : dflt;
    }
    double num(const std::string& key) const { return detail::parse_double(str(key)); }
    double num_or(const std::string& key, double dflt) const {
        return has(key) ? num(key) : dflt;
    }
    int integer(const std::string& key) const { return static_cast<int>(num(key)); }
    int integer_or(const std::string& key, int dflt) const {
        return has(key) ? integer(key) : dflt;
    }
    std::pair<double, double> pair(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end() || it->second.size() != 2)
            throw std::invalid_argument("config: '" + key + "' needs two values");
        return {detail::parse_double(it->second[0]), detail::parse_double(it->second[1])};
    }
    std::vector<double> list(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("config: missing '" + key + "'");
        std::vector<double> out;
        for (const auto& s : it->second) out.push_back(detail::parse_double(s));
        return out;
    }
    double positive(const std::string& key, double dflt) const {
        double v = num_or(key, dflt);
        if (!(v > 0)) throw std::invalid_argument("config: '" + key + "' must be positive");
        return v;
    }
};

namespace detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

// Constructors reachable from configs: model ground_state | negative_growth
// | inverse_square.
struct BuiltModel {
    WarpingProfile profile;
    nlohmann::json manifest;
    std::string name;
};

inline BuiltModel build_model_from_config(const ExperimentConfig& cfg) {
    std::string model = cfg.str("model");
    BuiltModel out;
    out.name = model;
    if (model == "ground_state") {
        int n = cfg.integer_or("n", 3);
        double kappa = cfg.positive("kappa", 1.0);
        double lambda0 = cfg.num("lambda0");
        auto m = build_ground_state_manifold(n, kappa, lambda0);
        out.profile = m.profile;
        out.manifest = {
            {"model", model},
            {"n", n},
            {"kappa", kappa},
            {"lambda0", lambda0},
            {"R0", m.R0},
            {"a0", m.a0},
            {"r0", m.r0},
            {"C_r0", m.C_r0},
            {"growth_rate", m.c},
            {"ess_bottom", ess_spectrum_bottom(m.c)},
            {"blend_window", {m.blend_lo, m.blend_hi}},
            {"checks",
             {{"joint_max_rel_err", m.checks.profile.joint_max_rel_err},
              {"pole_ok", m.checks.profile.pole_ok},
              {"positive", m.checks.profile.positive},
              {"ground_state_monotone", m.checks.monotone},
              {"max_residual", m.checks.max_residual},
              {"outer_mean_curvature_err", m.checks.mc_outer_err},
              {"inner_identity_err", m.checks.inner_identity_err}}}};
    } else if (model == "negative_growth") {
        int n = cfg.integer_or("n", 3);
        double c = cfg.num("c");
        double lambda = cfg.num("lambda");
        double eps = cfg.num_or("epsilon", 0.0);
        auto m = build_negative_growth_manifold(c, lambda, eps, n);
        out.profile = m.profile;
        out.manifest = {{"model", model},
                        {"n", n},
                        {"c", c},
                        {"lambda", lambda},
                        {"epsilon", m.epsilon},
                        {"R1", m.R1},
                        {"R", m.R},
                        {"c1", m.c1},
                        {"right_amplitude", m.right_amp},
                        {"rate_growing_side", m.rate_right},
                        {"rate_decaying_side", m.rate_left},
                        {"ess_bottom", ess_spectrum_bottom(c)},
                        {"checks",
                         {{"joint_max_rel_err", m.checks.profile.joint_max_rel_err},
                          {"positive", m.checks.profile.positive},
                          {"phi_monotone", m.checks.monotone},
                          {"max_residual", m.checks.max_residual},
                          {"outer_mean_curvature_err", m.checks.mc_outer_err}}}};
    } else if (model == "inverse_square") {
        int n = cfg.integer_or("n", 3);
        double c = cfg.num("c");
        double delta = cfg.num("delta");
        double r_switch = cfg.positive("r_switch", 1.0);
        auto m = build_inverse_square_growth_profile(n, c, delta, r_switch);
        out.profile = m.profile;
        out.manifest = {{"model", model},
                        {"n", n},
                        {"c", c},
                        {"delta", delta},
                        {"r_switch", r_switch},
                        {"ess_bottom", ess_spectrum_bottom(c)},
                        {"checks",
                         {{"joint_max_rel_err", m.checks.profile.joint_max_rel_err},
                          {"pole_ok", m.checks.profile.pole_ok},
                          {"positive", m.checks.profile.positive},
                          {"mean_curvature_err", m.checks.mc_outer_err}}}};
    } else {
        throw std::invalid_argument("unknown model '" + model +
                                    "' (ground_state | negative_growth | inverse_square)");
    }
    return out;
}

inline WarpingProfile load_profile(const ExperimentConfig& cfg) {
    if (cfg.has("profile")) return parse_profile(detail::read_file(cfg.str("profile")));
    if (cfg.has("model")) return build_model_from_config(cfg).profile;
    throw std::invalid_argument("config needs either 'profile <path>' or 'model <name>'");
}

inline const std::vector<std::string> kModelKeys = {"model",  "n",     "kappa",    "lambda0",
                                                    "c",      "lambda", "epsilon", "delta",
                                                    "r_switch"};

inline std::vector<std::string> with_model_keys(std::vector<std::string> extra) {
    extra.insert(extra.end(), kModelKeys.begin(), kModelKeys.end());
    return extra;
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

inline int cmd_construct(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         std::string& message) {
    cfg.allow_only(with_model_keys({"command", "out"}));
    BuiltModel m = build_model_from_config(cfg);
    detail::atomic_write(out_dir / (m.name + ".profile"), write_profile(m.profile));
    detail::atomic_write(out_dir / (m.name + ".manifest.json"), m.manifest.dump(2) + "\n");
    bool ok = m.manifest["checks"]["joint_max_rel_err"].get<double>() <= 1e-9;
    message = "construct " + m.name + ": wrote profile + manifest";
    return ok ? 0 : 3;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline GrowthRateCase case_from_config(const ExperimentConfig& cfg) {
    GrowthRateCase cs;
    cs.variant = case_variant_from_string(cfg.str("case"));
    cs.c = cfg.num("c");
    cs.lambda = cfg.num("lambda");
    cs.beta = cfg.num_or("beta", 0.0);
    cs.theta = cfg.num_or("theta", 0.0);
    cs.eps = cfg.num_or("eps", 0.0);
    cs.C1 = cfg.num_or("C1", 1.0);
    cs.delta = cfg.num_or("delta", 0.0);
    cs.validate();
    return cs;
}

struct HypothesisScan {
    bool pass = true;
    double first_violation = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
};

inline HypothesisScan scan_hypothesis(const WarpingProfile& p, const GrowthRateCase& cs,
                                      double r_lo, double r_hi, bool signed_distance = false) {
    auto hyp = cs.hypothesis();
    HypothesisScan out;
    int npts = std::max(2048, int(1024 * std::log10(std::max(r_hi / std::max(r_lo, 1e-6), 10.0))));
    for (int i = 0; i <= npts; ++i) {
        double r = r_lo * std::pow(r_hi / r_lo, double(i) / npts);
        bool near_joint = false;
        for (double j : p.joints())
            if (std::abs(r - j) < 1e-6) near_joint = true;
        if (near_joint) continue;
        double mc = signed_distance && r < 0 ? -mean_curvature(p, r) : mean_curvature(p, r);
        double bound = hyp.bound(r);
        double margin;
        switch (hyp.kind) {
            case GrowthRateCase::HypothesisKind::LowerBound: margin = mc - bound; break;
            case GrowthRateCase::HypothesisKind::UpperBound: margin = bound - mc; break;
            default: margin = 1e-6 * (1.0 + std::abs(bound)) - std::abs(mc - bound); break;
        }
        if (margin < out.worst_margin) out.worst_margin = margin;
        if (margin < -1e-9 * (1.0 + std::abs(bound)) && out.pass) {
            out.pass = false;
            out.first_violation = r;
        }
    }
    return out;
}

inline int cmd_verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                      std::string& message) {
    cfg.allow_only(with_model_keys({"command", "out", "profile", "case", "beta", "theta", "eps",
                                    "C1", "span", "anchor", "solution", "bracket", "rmax", "tol",
                                    "rows", "fit_window", "from", "u0", "du0"}));
    WarpingProfile profile = load_profile(cfg);
    GrowthRateCase cs = case_from_config(cfg);
    if (cs.variant == CaseVariant::II) {
        message = "variant ii yields subsolutions only; nothing to certify";
        return 1;
    }
    auto [span_lo, span_hi] = cfg.pair("span");
    double tol = cfg.positive("tol", 1e-8);
    double rmax = cfg.positive("rmax", std::min(span_hi, 50.0));

    bool lower_bound_case = cs.variant == CaseVariant::GroundLower;
    bool line_domain = profile.kind() == DomainKind::Line;

    // 1. growth-rate hypothesis on the scan range
    HypothesisScan hyp = scan_hypothesis(profile, cs, std::max(span_lo, profile.lo() + 1e-9),
                                         span_hi, line_domain);
    nlohmann::json report;
    report["case"] = to_string(cs.variant);
    report["hypothesis_pass"] = hyp.pass;
    report["hypothesis_worst_margin"] = hyp.worst_margin;
    if (!hyp.pass) {
        report["hypothesis_first_violation"] = hyp.first_violation;
        detail::atomic_write(out_dir / "verify.json", report.dump(2) + "\n");
        message = "growth-rate hypothesis violated at r = " +
                  detail::fmt_double(hyp.first_violation);
        return 2;
    }

    // 2. barrier residual sign
    Expr w = barrier_candidate(cs);
    bool want_super = !lower_bound_case;
    auto onset = residual_sign_onset(profile, cs.lambda, w, want_super,
                                     std::max(2.0, span_lo * 1e-2), 1e3, span_hi);
    if (!onset) {
        report["barrier_pass"] = false;
        detail::atomic_write(out_dir / "verify.json", report.dump(2) + "\n");
        message = "no uniform residual sign onset below 1e3";
        return 3;
    }
    double check_lo = std::max(*onset, span_lo);
    SignCheckReport barrier = want_super
                                  ? supersolution_check(profile, cs.lambda, w, check_lo, span_hi)
                                  : subsolution_check(profile, cs.lambda, w, check_lo, span_hi);
    report["barrier"] = w.str();
    report["barrier_onset"] = *onset;
    report["barrier_pass"] = barrier.pass;
    report["barrier_worst_normalized_residual"] = barrier.worst;
    if (!barrier.pass) {
        detail::atomic_write(out_dir / "verify.json", report.dump(2) + "\n");
        message = "barrier sign check failed at r = " +
                  detail::fmt_double(barrier.first_violation.value_or(check_lo));
        return 3;
    }

    // 3. the solution to be bounded
    RadialSolution sol;
    std::string solution_kind = cfg.str_or("solution", "ground_state");
    if (solution_kind == "ground_state") {
        auto [blo, bhi] = cfg.has("bracket") ? cfg.pair("bracket")
                                             : std::pair<double, double>{0.25 * cs.lambda,
                                                                         std::min(4.0 * cs.lambda,
                                                                                  0.99 * 0.25 * cs.c * cs.c)};
        auto gs = ground_state_search(profile, blo, bhi, rmax, tol, false);
        sol = gs.solution;
        report["lambda0"] = gs.lambda0;
    } else if (solution_kind == "integrate") {
        double from = cfg.num_or("from", std::max(profile.lo(), 1e-6));
        BoundaryCondition bc = BoundaryCondition::value_slope(cfg.num_or("u0", 1.0),
                                                              cfg.num_or("du0", 0.0));
        sol = integrate_radial(profile, cs.lambda, bc, from, rmax, std::min(tol, 1e-10));
    } else {
        throw std::invalid_argument("solution must be ground_state or integrate");
    }

    // 4. comparison envelope, anchored past the last profile joint (the tail
    //    behavior sets the one-point constant) unless the config pins it
    BoundTemplate shape = case_bound(cs);
    double joint_guard = profile.joints().empty() ? 0.0 : profile.joints().back() + 1.0;
    double cmp_anchor = cfg.has("anchor") ? cfg.num("anchor") : std::max(check_lo, joint_guard);
    cmp_anchor = std::max(cmp_anchor, sol.r.front() + 1e-9);
    if (cmp_anchor > sol.r.back())
        throw std::invalid_argument("comparison anchor beyond the sampled solution");
    ComparisonResult cmp = comparison_envelope(profile, sol, w, cmp_anchor, shape);
    report["comparison_pass"] = cmp.pass;
    report["comparison_constant"] = cmp.comparison_constant;
    report["envelope_constant"] = cmp.envelope.constant;
    report["envelope_gamma"] = cmp.envelope.gamma;
    report["max_ratio"] = cmp.max_ratio;
    if (cmp.violation_r) report["comparison_violation_r"] = *cmp.violation_r;

    // 5. decay fit on the tail of the solution
    double fit_lo = cfg.has("fit_window") ? cfg.pair("fit_window").first
                                          : std::max(sol.r.back() / 10.0, cmp_anchor);
    double fit_hi = cfg.has("fit_window") ? cfg.pair("fit_window").second : sol.r.back();
    try {
        DecayFit fit = decay_exponent_fit(sol, fit_lo, fit_hi);
        report["fit"] = {{"gamma", fit.gamma},
                         {"log_prefactor_power", fit.log_prefactor_power},
                         {"window", {fit.r_lo, fit.r_hi}},
                         {"residual_norm", fit.residual_norm}};
    } catch (const std::exception& e) {
        report["fit_error"] = e.what();
    }

    // 6. row table
    int rows = cfg.integer_or("rows", 64);
    std::string csv = "r,u,bound,ratio\n";
    double row_lo = cmp_anchor, row_hi = sol.r.back();
    for (int i = 0; i < rows; ++i) {
        double r = row_lo * std::pow(row_hi / row_lo, double(i) / (rows - 1));
        double uu = sol.eval(r);
        double bound = cmp.envelope.eval(r);
        double ratio = lower_bound_case ? bound / uu : std::abs(uu) / bound;
        csv += detail::fmt_double(r) + "," + detail::fmt_double(uu) + "," +
               detail::fmt_double(bound) + "," + detail::fmt_double(ratio) + "\n";
    }
    detail::atomic_write(out_dir / "report.csv", csv);
    bool pass = cmp.pass;
    report["verdict"] = pass ? "pass" : "fail";
    detail::atomic_write(out_dir / "verify.json", report.dump(2) + "\n");
    message = std::string("verify ") + to_string(cs.variant) + ": " + (pass ? "pass" : "fail") +
              ", envelope constant " + detail::fmt_double(cmp.envelope.constant);
    return pass ? 0 : 3;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

inline int cmd_spectrum(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        std::string& message) {
    cfg.allow_only(with_model_keys(
        {"command", "out", "profile", "rmax", "tol", "bracket", "count_threshold", "count_rmax"}));
    WarpingProfile profile = load_profile(cfg);
    double rmax = cfg.positive("rmax", 30.0);
    double tol = cfg.positive("tol", 1e-8);

    double ess = ess_spectrum_bottom(mean_curvature(profile, rmax));
    if (profile.kind() == DomainKind::Line)
        ess = std::min(ess, ess_spectrum_bottom(mean_curvature(profile, -rmax)));

    nlohmann::json rep;
    rep["ess_bottom"] = ess;
    rep["R_max"] = rmax;
    rep["boundary"] = "robin-decay";
    rep["method"] = "shooting";

    std::vector<double> discrete = discrete_spectrum_below(profile, ess, rmax, tol);
    rep["discrete"] = discrete;

    if (!discrete.empty()) {
        double lam = discrete.front();
        double half_gap = 0.45 * (discrete.size() > 1 ? discrete[1] - lam : ess - lam);
        auto gs = ground_state_search(profile, lam - std::min(half_gap, 0.5 * lam), lam + half_gap,
                                      rmax, tol, true);
        rep["lambda0"] = gs.lambda0;
        rep["lambda0_rmax_drift"] = gs.drift_rmax;
        detail::atomic_write(out_dir / "ground_state.csv", radial_to_csv(gs.solution));
    }

    if (cfg.has("count_threshold")) {
        double threshold = cfg.num("count_threshold");
        nlohmann::json counts = nlohmann::json::array();
        for (double rm : cfg.has("count_rmax") ? cfg.list("count_rmax")
                                               : std::vector<double>{rmax}) {
            counts.push_back({{"rmax", rm},
                              {"count", count_eigenvalues_below(profile, threshold, rm)}});
        }
        rep["counts"] = counts;
    }

    detail::atomic_write(out_dir / "spectrum.json", rep.dump(2) + "\n");
    message = "spectrum: " + std::to_string(discrete.size()) + " discrete value(s) below " +
              detail::fmt_double(ess);
    return 0;
}

// ---------------------------------------------------------------------------
// rayleigh
// ---------------------------------------------------------------------------

inline int cmd_rayleigh(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        std::string& message) {
    cfg.allow_only(with_model_keys(
        {"command", "out", "profile", "R", "kstart", "kcap", "growth_rate"}));
    WarpingProfile profile = load_profile(cfg);
    double c = cfg.has("growth_rate") ? cfg.num("growth_rate") : cfg.num("c");
    double delta = cfg.num("delta");
    double R = cfg.positive("R", 50.0);
    double kstart = cfg.positive("kstart", 4.0);
    double kcap = cfg.positive("kcap", 1e8);

    auto sweep = rayleigh_sweep(profile, c, R, delta, kstart, kcap);
    std::string csv = "k,value,majorant\n";
    for (const auto& e : sweep)
        csv += detail::fmt_double(e.k) + "," + detail::fmt_double(e.value) + "," +
               detail::fmt_double(e.majorant) + "\n";
    detail::atomic_write(out_dir / "rayleigh.csv", csv);

    nlohmann::json rep;
    rep["R"] = R;
    rep["c"] = c;
    rep["delta"] = delta;
    bool found = !sweep.empty() && sweep.back().value < 0;
    rep["negative_found"] = found;
    if (found) {
        rep["k_star"] = sweep.back().k;
        rep["value_at_k_star"] = sweep.back().value;
    }
    detail::atomic_write(out_dir / "rayleigh.json", rep.dump(2) + "\n");
    message = found ? "rayleigh: first negative form value at k = " +
                          detail::fmt_double(sweep.back().k)
                    : "rayleigh: no negative value below the k cap";
    return found ? 0 : 3;
}

// ---------------------------------------------------------------------------
// decay-fit
// ---------------------------------------------------------------------------

inline int cmd_decay_fit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                         std::string& message) {
    cfg.allow_only({"command", "out", "solution", "window"});
    RadialSolution sol = radial_from_csv(detail::read_file(cfg.str("solution")));
    auto [lo, hi] = cfg.pair("window");
    DecayFit fit = decay_exponent_fit(sol, lo, hi);
    nlohmann::json rep = {{"gamma", fit.gamma},
                          {"log_prefactor_power", fit.log_prefactor_power},
                          {"window", {fit.r_lo, fit.r_hi}},
                          {"residual_norm", fit.residual_norm}};
    detail::atomic_write(out_dir / "decayfit.json", rep.dump(2) + "\n");
    message = "decay-fit: gamma = " + detail::fmt_double(fit.gamma) +
              ", log-prefactor power = " + detail::fmt_double(fit.log_prefactor_power);
    return 0;
}

inline int cmd_case_table(const std::filesystem::path& out_dir, std::string& message) {
    detail::atomic_write(out_dir / "case_table.md", render_case_table());
    message = "case-table: wrote case_table.md";
    return 0;
}

// Dispatch used by both the CLI and the tests.
inline int run_command(const std::string& command, const ExperimentConfig& cfg,
                       const std::filesystem::path& out_dir, std::string& message) {
    try {
        if (command == "construct") return cmd_construct(cfg, out_dir, message);
        if (command == "verify") return cmd_verify(cfg, out_dir, message);
        if (command == "spectrum") return cmd_spectrum(cfg, out_dir, message);
        if (command == "rayleigh") return cmd_rayleigh(cfg, out_dir, message);
        if (command == "decay-fit") return cmd_decay_fit(cfg, out_dir, message);
        if (command == "case-table") return cmd_case_table(out_dir, message);
        message = "unknown command '" + command + "'";
        return 1;
    } catch (const std::invalid_argument& e) {
        message = std::string("configuration error: ") + e.what();
        return 1;
    } catch (const std::domain_error& e) {
        message = std::string("domain error: ") + e.what();
        return 3;
    } catch (const std::exception& e) {
        message = std::string("numerical failure: ") + e.what();
        return 3;
    }
}

} // namespace warpspec
