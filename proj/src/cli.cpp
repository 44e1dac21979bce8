#include "mixrip/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixrip/artifact.hpp"
#include "mixrip/experiments.hpp"
#include "mixrip/frequencies.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/mixtures.hpp"
#include "mixrip/ripbounds.hpp"
#include "mixrip/sketch.hpp"
#include "mixrip/util.hpp"

namespace mixrip {

namespace {

struct CommonOpts {
    std::string base = "dirac";
    int d = 2;
    int k = 2;
    int m = 4096;
    double s = 1.0;
    double eps = 8.0;
    double tau = 0.5;
    std::string scheme = "iid";
    std::uint64_t seed = 0;
    std::string out = "out";
    int threads = 0;
    std::string config;
    // command specific
    int kmin = 1;
    int kmax = 20;
    int draws = 20000;
    double box = 40.0;
};

void add_common(CLI::App* cmd, CommonOpts& o, std::map<std::string, CLI::Option*>& opts) {
    opts["base"] = cmd->add_option("--base", o.base)->check(CLI::IsMember({"dirac", "gaussian"}));
    opts["d"] = cmd->add_option("--d", o.d);
    opts["k"] = cmd->add_option("--k", o.k);
    opts["m"] = cmd->add_option("--m", o.m);
    opts["s"] = cmd->add_option("--s", o.s);
    opts["eps"] = cmd->add_option("--eps", o.eps);
    opts["tau"] = cmd->add_option("--tau", o.tau);
    opts["scheme"] =
        cmd->add_option("--scheme", o.scheme)->check(CLI::IsMember({"iid", "orthochi", "hd"}));
    opts["seed"] = cmd->add_option("--seed", o.seed)->required();
    opts["out"] = cmd->add_option("--out", o.out);
    opts["threads"] = cmd->add_option("--threads", o.threads);
    opts["config"] = cmd->add_option("--config", o.config);
    opts["kmin"] = cmd->add_option("--kmin", o.kmin);
    opts["kmax"] = cmd->add_option("--kmax", o.kmax);
    opts["draws"] = cmd->add_option("--draws", o.draws);
    opts["box"] = cmd->add_option("--box", o.box);
}

// config file values fill in options that were not given on the command line
void merge_config(CommonOpts& o, const std::map<std::string, CLI::Option*>& opts) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config);
    nlohmann::json j;
    in >> j;
    auto unset = [&](const std::string& key) {
        auto it = opts.find(key);
        return it != opts.end() && it->second->count() == 0 && j.contains(key);
    };
    if (unset("base")) o.base = j["base"].get<std::string>();
    if (unset("d")) o.d = j["d"].get<int>();
    if (unset("k")) o.k = j["k"].get<int>();
    if (unset("m")) o.m = j["m"].get<int>();
    if (unset("s")) o.s = j["s"].get<double>();
    if (unset("eps")) o.eps = j["eps"].get<double>();
    if (unset("tau")) o.tau = j["tau"].get<double>();
    if (unset("scheme")) o.scheme = j["scheme"].get<std::string>();
    if (unset("out")) o.out = j["out"].get<std::string>();
    if (unset("threads")) o.threads = j["threads"].get<int>();
    if (unset("kmin")) o.kmin = j["kmin"].get<int>();
    if (unset("kmax")) o.kmax = j["kmax"].get<int>();
    if (unset("draws")) o.draws = j["draws"].get<int>();
    if (unset("box")) o.box = j["box"].get<double>();
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (opts.find(it.key()) == opts.end())
            throw CLI::ValidationError("--config", "unknown key: " + it.key());
    }
}

nlohmann::json config_json(const CommonOpts& o) {
    nlohmann::json j;
    j["base"] = o.base;
    j["d"] = o.d;
    j["k"] = o.k;
    j["m"] = o.m;
    j["s"] = o.s;
    j["eps"] = o.eps;
    j["tau"] = o.tau;
    j["scheme"] = o.scheme;
    j["seed"] = o.seed;
    j["kmin"] = o.kmin;
    j["kmax"] = o.kmax;
    j["draws"] = o.draws;
    j["box"] = o.box;
    return j;
}

KernelSpec make_spec(const CommonOpts& o) {
    return KernelSpec(base_kind_from_name(o.base), o.s, o.d);
}

int finish(ArtifactWriter& aw, const CommonOpts& o,
           std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    aw.sidecar()["config"] = config_json(o);
    aw.sidecar()["runtime_seconds"] = dt.count();
    aw.write();
    std::printf("wrote %s\n", aw.csv_path().c_str());
    return aw.all_assertions_pass() ? 0 : 1;
}

int cmd_inequalities(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const InequalityLedger ledger = inequality_suite(o.seed);
    ArtifactWriter aw(o.out, "inequalities", o.seed);
    aw.set_columns({"name", "points", "violations", "worst_margin", "audit_pass"});
    for (const auto& e : ledger.entries) {
        aw.add_row({e.name, std::to_string(e.points), std::to_string(e.violations),
                    fmt17(e.worst_margin), e.audit_pass ? "1" : "0"});
        aw.add_assertion(e.name, e.pass(), "worst margin " + fmt17(e.worst_margin));
        std::printf("%-16s points=%-9lld violations=%lld worst=%.3e %s\n", e.name.c_str(),
                    e.points, e.violations, e.worst_margin, e.pass() ? "pass" : "FAIL");
    }
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_variance(const CommonOpts& o) {
    if (o.kmax < o.kmin || o.kmin < 1)
        throw CLI::ValidationError("--kmax", "empty k range");
    const auto t0 = std::chrono::steady_clock::now();
    VarianceConfig cfg;
    cfg.seed = o.seed;
    cfg.d = o.d;
    cfg.s = o.s;
    cfg.k_min = o.kmin;
    cfg.k_max = o.kmax;
    cfg.m = o.m == 4096 ? 50 : o.m;
    cfg.draws = o.draws;
    const VarianceResult res = variance_experiment(cfg);
    ArtifactWriter aw(o.out, "variance", o.seed);
    aw.set_columns({"k", "eps", "mv_mc", "mv_mc_se", "mv_closed", "mv_classical",
                    "mv_classical_se", "lower_bound"});
    for (const auto& r : res.rows) {
        aw.add_row({std::to_string(r.k), fmt17(r.eps), fmt17(r.mv_mc), fmt17(r.mv_mc_se),
                    fmt17(r.mv_closed), fmt17(r.mv_classical), fmt17(r.mv_classical_se),
                    fmt17(r.lower_bound)});
        std::printf("k=%-3d m*V_mc=%8.4f (se %.4f) closed=%8.4f classical=%6.4f lb=%7.4f\n",
                    r.k, r.mv_mc, r.mv_mc_se, r.mv_closed, r.mv_classical, r.lower_bound);
    }
    aw.add_assertion("classical_flat_2", res.pass_classical);
    aw.add_assertion("mc_matches_closed_3se", res.pass_closed);
    aw.add_assertion("lower_bound_k_over_7", res.pass_lower);
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_psitail(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    PsiTailConfig cfg;
    cfg.seed = o.seed;
    cfg.s = o.s == 1.0 ? 3.0 : o.s;
    const auto curves = psi_tail_experiment(cfg);
    ArtifactWriter aw(o.out, "psitail", o.seed);
    aw.set_columns({"d", "eps", "empirical", "hoeffding", "bernstein", "conjecture"});
    for (const auto& tc : curves) {
        for (std::size_t i = 0; i < tc.eps.size(); ++i)
            aw.add_row({std::to_string(tc.d), fmt17(tc.eps[i]), fmt17(tc.empirical[i]),
                        fmt17(tc.hoeffding[i]), fmt17(tc.bernstein[i]),
                        fmt17(tc.conjecture[i])});
        aw.add_assertion("mean_psi_is_1_d" + std::to_string(tc.d), tc.pass_mean,
                         "mean " + fmt17(tc.mean_psi) + " se " + fmt17(tc.mean_se));
        aw.add_assertion("below_bernstein_d" + std::to_string(tc.d), tc.pass_bernstein);
        std::printf("d=%-4d mean(psi)=%.5f (se %.5f) B=%.4g V=%.4g %s\n", tc.d, tc.mean_psi,
                    tc.mean_se, tc.b_psi, tc.v_psi,
                    tc.pass_mean && tc.pass_bernstein ? "pass" : "FAIL");
    }
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_psimm(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    PsiMmConfig cfg;
    cfg.seed = o.seed;
    cfg.d = o.d;
    cfg.s = o.s;
    cfg.eps = o.eps == 8.0 ? 1.0 : o.eps;
    const auto rows = psi_mm_moment_experiment(cfg);
    ArtifactWriter aw(o.out, "psimm", o.seed);
    aw.set_columns({"weight", "y_norm", "estimate", "se", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        aw.add_row({r.weight, fmt17(r.y_norm), fmt17(r.estimate), fmt17(r.se),
                    r.pass ? "1" : "0"});
        all = all && r.pass;
    }
    aw.add_assertion("second_moment_at_least_quarter", all);
    std::printf("%zu (weight, y) pairs, %s\n", rows.size(), all ? "all pass" : "FAIL");
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_tails(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    OmegaCubedConfig cfg;
    cfg.seed = o.seed;
    cfg.d = o.d;
    cfg.s = o.s;
    cfg.m = o.m == 4096 ? 64 : o.m;
    const auto rows = omega_cubed_tail_experiment(cfg);
    ArtifactWriter aw(o.out, "tails", o.seed);
    aw.set_columns({"tau", "threshold", "empirical", "bound", "se", "mean_moment"});
    bool all = true;
    for (const auto& r : rows) {
        aw.add_row({fmt17(r.tau), fmt17(r.threshold), fmt17(r.empirical), fmt17(r.bound),
                    fmt17(r.se), fmt17(r.mean_moment)});
        all = all && r.pass;
        std::printf("tau=%-5.2f empirical=%.2e bound=%.2e %s\n", r.tau, r.empirical, r.bound,
                    r.pass ? "pass" : "FAIL");
    }
    aw.add_assertion("exceedance_below_bound", all);
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_ripprob(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    RipProbConfig cfg;
    cfg.seed = o.seed;
    cfg.d = o.d;
    cfg.k = o.k;
    cfg.s = o.s;
    cfg.eps = o.eps == 8.0 ? 10.0 : o.eps;
    cfg.tau = o.tau;
    cfg.box = o.box;
    cfg.draws = o.draws == 20000 ? 20 : o.draws;
    const auto rows = rip_probability_experiment(cfg);
    ArtifactWriter aw(o.out, "ripprob", o.seed);
    aw.set_columns({"scheme", "m", "threshold", "frac_bound_exceed", "frac_emp_exceed",
                    "dominated", "defined", "draws"});
    bool dominated_all = true;
    for (const auto& r : rows) {
        aw.add_row({r.scheme, std::to_string(r.m), fmt17(r.threshold),
                    fmt17(r.frac_bound_exceed), fmt17(r.frac_emp_exceed),
                    std::to_string(r.dominated), std::to_string(r.defined),
                    std::to_string(r.draws)});
        if (r.dominated != r.defined) dominated_all = false;
        std::printf("%-9s m=%-6d emp_exceed=%.2f bound_exceed=%.2f dominated=%d/%d\n",
                    r.scheme.c_str(), r.m, r.frac_emp_exceed, r.frac_bound_exceed,
                    r.dominated, r.defined);
    }
    aw.add_assertion("empirical_dominated_by_bound", dominated_all);
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_legacy(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = legacy_lower_bound_experiment(o.s, o.d);
    ArtifactWriter aw(o.out, "legacy", o.seed);
    aw.set_columns({"base", "weight", "slope", "classification"});
    for (const auto& r : rows) {
        aw.add_row({r.base, r.weight, fmt17(r.slope), r.classification});
        std::printf("%-9s w=%-12s slope=%7.3f -> %s\n", r.base.c_str(), r.weight.c_str(),
                    r.slope, r.classification.c_str());
    }
    bool ok = rows.size() == 3 && rows[0].classification == "infinite" &&
              rows[1].classification == "finite" && rows[2].classification == "finite";
    aw.add_assertion("flat_dirac_diverges_weighted_bounded", ok);
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_rip(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const KernelSpec spec = make_spec(o);
    const WeightFunction flat = WeightFunction::flat();
    const FrequencyMatrix fm =
        o.scheme == "iid" ? sample_iid(spec, flat, o.m, o.seed)
                          : sample_structured(spec, o.m, scheme_from_name(o.scheme), o.seed);
    const SketchOperator op(fm, spec);
    const PsiEvaluator ev(op);
    const CoherenceResult coh = mutual_coherence(spec, o.eps, o.k, o.seed);
    DomainSpec dom;
    dom.which = ProcessKind::D;
    dom.eps = o.eps;
    dom.diameter = 2.0 * o.box * std::sqrt(static_cast<double>(o.d));
    dom.dim = o.d;
    RipReport rep = compute_rip_report(ev, dom, coh.estimate, o.k);
    const SmoothnessProfile prof = compute_c_kappa(spec, o.eps);
    rep.c_kappa = prof.c_kappa;

    ArtifactWriter aw(o.out, "rip", o.seed);
    aw.set_columns({"psi_m", "delta_m", "delta_dhat", "mu_mm", "mu_md", "mu_dd", "c",
                    "bound_delta_sk", "psi0", "c_kappa"});
    aw.add_row({fmt17(rep.psi_m), fmt17(rep.delta_m), fmt17(rep.delta_dhat),
                fmt17(rep.mu_mm), fmt17(rep.mu_md), fmt17(rep.mu_dd), fmt17(rep.c),
                rep.bound_defined ? fmt17(rep.bound_delta_sk) : "undefined",
                fmt17(rep.psi0), fmt17(rep.c_kappa)});
    aw.sidecar()["report"] = rep.to_json();
    aw.sidecar()["coherence_estimate"] = coh.estimate;
    aw.sidecar()["coherence_certificate"] = coh.certificate;
    aw.sidecar()["coherence_certificate_valid"] = coh.certificate_valid;
    std::printf("psi_m=%.6f delta_dhat=%.6f mu=(%.2e,%.2e,%.2e) c=%.4f\n", rep.psi_m,
                rep.delta_dhat, rep.mu_mm, rep.mu_md, rep.mu_dd, rep.c);
    if (rep.bound_defined)
        std::printf("bound on delta(S_k|A): %.6f\n", rep.bound_delta_sk);
    else
        std::printf("bound undefined (c >= 1)\n");
    CommonOpts oc = o;
    return finish(aw, oc, t0);
}

int cmd_sample_freqs(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const KernelSpec spec = make_spec(o);
    const WeightFunction flat = WeightFunction::flat();
    const FrequencyMatrix fm =
        o.scheme == "iid" ? sample_iid(spec, flat, o.m, o.seed)
                          : sample_structured(spec, o.m, scheme_from_name(o.scheme), o.seed);
    ArtifactWriter aw(o.out, "sample-freqs", o.seed);
    aw.set_columns({"file", "d", "m", "scheme"});
    const std::string bin = aw.csv_path().substr(0, aw.csv_path().size() - 4) + ".mxrp";
    std::filesystem::create_directories(o.out);
    save_frequency_matrix(fm, bin);
    export_frequency_csv(fm, aw.csv_path());
    aw.sidecar()["config"] = config_json(o);
    aw.sidecar()["binary"] = bin;
    std::ofstream js(aw.json_path());
    js << aw.sidecar().dump(2) << "\n";
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("wrote %s and %s (%.2fs)\n", aw.csv_path().c_str(), bin.c_str(), dt.count());
    return 0;
}

int cmd_sketch(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const KernelSpec spec = make_spec(o);
    const WeightFunction flat = WeightFunction::flat();
    const FrequencyMatrix fm =
        o.scheme == "iid" ? sample_iid(spec, flat, o.m, o.seed)
                          : sample_structured(spec, o.m, scheme_from_name(o.scheme), o.seed);
    const SketchOperator op(fm, spec);
    Rng rng(o.seed);
    const SignedMixture nu = sample_secant(o.k, spec, o.eps, o.box, rng);
    const ComplexSketch sk = op.sketch_signed_mixture(nu);
    ArtifactWriter aw(o.out, "sketch", o.seed);
    std::filesystem::create_directories(o.out);
    export_sketch_csv(sk, aw.csv_path());
    aw.sidecar()["config"] = config_json(o);
    aw.sidecar()["sketch_norm_sq"] = sketch_norm_sq(sk);
    std::ofstream js(aw.json_path());
    js << aw.sidecar().dump(2) << "\n";
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("||A nu||^2 = %.6f, wrote %s (%.2fs)\n", sketch_norm_sq(sk),
                aw.csv_path().c_str(), dt.count());
    return 0;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"weighted Fourier feature sketching and RIP bound experiments"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"rip",          "variance", "psitail",
                                               "psimm",        "tails",    "inequalities",
                                               "ripprob",      "legacy",   "sample-freqs",
                                               "sketch"};
    std::map<std::string, CommonOpts> opt_by_cmd;
    std::map<std::string, std::map<std::string, CLI::Option*>> flags_by_cmd;
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, opt_by_cmd[name], flags_by_cmd[name]);
    }

    try {
        app.parse(argc, argv);
        for (const auto& name : commands) {
            CLI::App* sub = app.get_subcommand(name);
            if (!sub->parsed()) continue;
            CommonOpts& o = opt_by_cmd[name];
            merge_config(o, flags_by_cmd[name]);
            if (o.threads > 0) set_default_threads(o.threads);
            if (name == "inequalities") return cmd_inequalities(o);
            if (name == "variance") return cmd_variance(o);
            if (name == "psitail") return cmd_psitail(o);
            if (name == "psimm") return cmd_psimm(o);
            if (name == "tails") return cmd_tails(o);
            if (name == "ripprob") return cmd_ripprob(o);
            if (name == "legacy") return cmd_legacy(o);
            if (name == "rip") return cmd_rip(o);
            if (name == "sample-freqs") return cmd_sample_freqs(o);
            if (name == "sketch") return cmd_sketch(o);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace mixrip
