// Command-line front end: load states and measurement records, run the
// certifiers, and emit verdicts with machine-readable reports.
//
// Exit codes: 0 certified/feasible, 2 inconclusive/infeasible, 1 error.

#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entcert/entcert.hpp"

using namespace entcert;

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

struct Options {
    double tol = defaults::psd_tol;
    std::string format = "text";
    int jobs = 1;
    std::string emit_path;
};

struct Outcome {
    int exit_code = kExitInconclusive;
    Json result;        // certificate / verdict payload
    std::string text;   // human-readable line
};

Outcome guarded(const std::function<Outcome()>& work) {
    try {
        return work();
    } catch (const std::exception& e) {
        Outcome out;
        out.exit_code = kExitError;
        out.result = Json{{"error", e.what()}};
        out.text = std::string("error: ") + e.what();
        return out;
    }
}

int aggregate_exit(const std::vector<Outcome>& outcomes) {
    int code = kExitCertified;
    for (const Outcome& o : outcomes) {
        if (o.exit_code == kExitError) return kExitError;
        if (o.exit_code == kExitInconclusive) code = kExitInconclusive;
    }
    return code;
}

// One job per input file, optionally in parallel, results in input order.
std::vector<Outcome> run_batch(const std::vector<std::string>& inputs, int jobs,
                               const std::function<Outcome(const std::string&)>& work) {
    std::vector<Outcome> outcomes(inputs.size());
    if (jobs <= 1 || inputs.size() <= 1) {
        for (size_t i = 0; i < inputs.size(); ++i)
            outcomes[i] = guarded([&, i] { return work(inputs[i]); });
        return outcomes;
    }
    std::vector<std::future<Outcome>> futures;
    futures.reserve(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i)
        futures.push_back(std::async(std::launch::async, [&, i] {
            return guarded([&, i] { return work(inputs[i]); });
        }));
    for (size_t i = 0; i < inputs.size(); ++i) outcomes[i] = futures[i].get();
    return outcomes;
}

void print_outcomes(const Options& opts, const std::vector<std::string>& inputs,
                    const std::vector<Outcome>& outcomes) {
    if (opts.format == "structured") {
        if (outcomes.size() == 1) {
            std::cout << outcomes[0].result.dump(2) << "\n";
        } else {
            Json arr = Json::array();
            for (size_t i = 0; i < outcomes.size(); ++i)
                arr.push_back(Json{{"input", inputs[i]}, {"result", outcomes[i].result}});
            std::cout << arr.dump(2) << "\n";
        }
        return;
    }
    for (size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes.size() > 1) std::cout << inputs[i] << ": ";
        std::cout << outcomes[i].text << "\n";
    }
}

void emit_reports(const Options& opts, const std::string& command, const Json& parameters,
                  const std::vector<std::string>& inputs, const std::vector<Outcome>& outcomes) {
    if (opts.emit_path.empty()) return;
    auto make_report = [&](size_t i) {
        CertificateReport report;
        report.command = command;
        if (i < inputs.size()) report.inputs = {{inputs[i], digest_file(inputs[i])}};
        report.parameters = parameters;
        report.result = outcomes[i].result;
        report.exit_code = outcomes[i].exit_code;
        return report;
    };
    if (outcomes.size() == 1) {
        make_report(0).write(opts.emit_path);
        return;
    }
    Json arr = Json::array();
    for (size_t i = 0; i < outcomes.size(); ++i)
        arr.push_back(make_report(i).to_json_with_timestamp());
    std::ofstream out(opts.emit_path);
    if (!out) throw ValidationError("report: cannot write '" + opts.emit_path + "'");
    out << arr.dump(2) << "\n";
}

std::string depth_text(const DepthCertificate& cert) {
    std::string line = std::string("verdict: ") + verdict_name(cert.verdict);
    if (cert.verdict == Verdict::CertifiedDepthAtMost)
        line += " " + std::to_string(cert.depth_bound);
    if (cert.verdict == Verdict::CertifiedBiseparableCut) line += " cut " + cert.cut.to_string();
    line += "  criterion: " + cert.criterion;
    line += "  witness_min_eig: " + fmt(cert.witness_min_eig);
    return line;
}

Outcome certificate_outcome(const DepthCertificate& cert) {
    Outcome out;
    out.exit_code = cert.certified() ? kExitCertified : kExitInconclusive;
    out.result = to_json(cert);
    out.text = depth_text(cert);
    return out;
}

Outcome compat_outcome(const AlphaResult& alpha, const CompatCertificate& cert) {
    Outcome out;
    out.exit_code = cert.certified ? kExitCertified : kExitInconclusive;
    out.result = Json{{"alpha", to_json(alpha)}, {"certificate", to_json(cert)}};
    out.text = "alpha_star: " + fmt(alpha.value_or_infinity());
    if (cert.certified)
        out.text += "  certified: beta in " + std::string(cert.beta_lower_open ? "(" : "[") +
                    fmt(cert.beta_lower) + ", inf)";
    else
        out.text += "  inconclusive";
    return out;
}

Outcome range_outcome(const Options& opts, const AlphaRange& range) {
    Outcome out;
    out.exit_code = range.empty_range ? kExitInconclusive : kExitCertified;
    out.result = to_json(range);
    if (range.empty_range)
        out.text = opts.format == "csv" ? "empty,empty" : "empty";
    else
        out.text = fmt(range.lo) + (opts.format == "csv" ? "," : " ") + fmt(range.hi);
    return out;
}

Outcome qubit_range_table() {
    Outcome out;
    out.exit_code = kExitCertified;
    std::cout << "N,alpha_min,alpha_max\n";
    Json rows = Json::array();
    for (int n = 2; n <= 5; ++n) {
        const AlphaRange r = ds_alpha_range(n, 2);
        std::cout << n << "," << fmt(r.lo) << "," << fmt(r.hi) << "\n";
        rows.push_back(Json{{"N", n}, {"range", to_json(r)}});
    }
    out.result = std::move(rows);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Certification of entanglement depth and compatibility via invertible positive maps"};
    app.require_subcommand(1);

    Options opts;
    app.add_option("--tol", opts.tol, "PSD decision tolerance")->capture_default_str();
    app.add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "structured"}))
        ->capture_default_str();
    app.add_option("--jobs", opts.jobs, "Parallel workers for batch inputs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--emit-certificate", opts.emit_path, "Write a JSON report to this path");

    // ---- state certifiers ----------------------------------------------------
    std::vector<std::string> state_paths;
    int depth_n = 1;
    CLI::App* depth = app.add_subcommand("depth", "Reduction-map entanglement-depth certificate");
    depth->add_option("--n", depth_n, "Depth offset: certifies depth at most N-n")
        ->capture_default_str();
    depth->add_option("state", state_paths, "Operator file(s)")->required();

    double bh_alpha = 0.0, bh_beta = 0.0;
    int bh_party = 0;
    CLI::App* bh = app.add_subcommand("bh", "Two-parameter map biseparability certificate");
    bh->add_option("--alpha", bh_alpha)->required();
    bh->add_option("--beta", bh_beta)->required();
    bh->add_option("--party", bh_party, "Tilde party")->capture_default_str();
    bh->add_option("state", state_paths, "Operator file(s)")->required();

    BHRegion bh4_region;
    int bh4_party = 0;
    CLI::App* bh4 = app.add_subcommand("bh4", "Four-parameter map separability certificate");
    bh4->add_option("--alpha", bh4_region.alpha)->required();
    bh4->add_option("--beta", bh4_region.beta)->required();
    bh4->add_option("--gamma", bh4_region.gamma)->required();
    bh4->add_option("--delta", bh4_region.delta)->required();
    bh4->add_option("--a", bh4_region.a, "Identity split weight a")->required();
    bh4->add_option("--b", bh4_region.b, "Identity split weight b")->required();
    bh4->add_option("--party", bh4_party)->capture_default_str();
    bh4->add_option("state", state_paths, "Operator file(s)")->required();

    std::string mixture_path;
    CLI::App* mixture = app.add_subcommand("mixture", "Party-mixture map certificate (3 qubits)");
    mixture->add_option("--map", mixture_path, "Mixture parameter file")->required();
    mixture->add_option("state", state_paths, "Operator file(s)")->required();

    CLI::App* sym =
        app.add_subcommand("sym", "Symmetric-sector separability certificate (N = 2, 3)");
    sym->add_option("state", state_paths, "Operator file(s)")->required();

    // ---- diagonal symmetric states --------------------------------------------
    std::vector<std::string> ds_paths;
    double ds_alpha = 0.0;
    bool ds_alpha_set = false;
    CLI::App* ds_check = app.add_subcommand("ds-check", "Hankel PPT check of a diagonal state");
    CLI::Option* ds_alpha_opt = ds_check->add_option(
        "--alpha", ds_alpha, "Also run the map-inverse certificate at this alpha");
    ds_check->add_option("state", ds_paths, "Diagonal-state file(s)")->required();

    int range_n = 2, range_d = 2;
    bool want_table1 = false;
    CLI::App* ds_range_cmd =
        app.add_subcommand("ds-range", "Validated alpha range for diagonal states");
    ds_range_cmd->add_option("--N", range_n)->required();
    ds_range_cmd->add_option("--d", range_d)->capture_default_str();
    ds_range_cmd->add_flag("--table1", want_table1, "Emit the qubit table for N = 2..5 as CSV");

    int dd_n = 2, dd_d = 3;
    CLI::App* dd_range_cmd = app.add_subcommand("dd-range", "Qudit alpha range via PSD bisection");
    dd_range_cmd->add_option("--N", dd_n)->required();
    dd_range_cmd->add_option("--d", dd_d)->required();

    CLI::App* table1 = app.add_subcommand("table1", "Qubit diagonal-state ranges, N = 2..5, CSV");

    // ---- compatibility ---------------------------------------------------------
    std::vector<std::string> moment_paths;
    CLI::App* toth_cmd = app.add_subcommand("toth", "Collective-moment inequality check");
    toth_cmd->add_option("moments", moment_paths, "Moments file(s)")->required();

    CLI::App* toth_alpha_cmd = app.add_subcommand("toth-alpha", "Extreme scaling of correlations");
    toth_alpha_cmd->add_option("moments", moment_paths, "Moments file(s)")->required();

    std::vector<std::string> table_paths;
    CLI::App* lhvm_cmd =
        app.add_subcommand("lhvm", "Local-polytope membership of a probability table");
    lhvm_cmd->add_option("table", table_paths, "Probability-table file(s)")->required();

    std::vector<std::string> corr_paths;
    CLI::App* lhvm_alpha_cmd =
        app.add_subcommand("lhvm-alpha", "Extreme scaling of a correlator vector");
    lhvm_alpha_cmd->add_option("correlators", corr_paths, "Correlator file(s)")->required();

    std::vector<std::string> pi_paths;
    CLI::App* pi_alpha_cmd =
        app.add_subcommand("pi-alpha", "Extreme scaling of symmetrized two-body correlators");
    pi_alpha_cmd->add_option("pi", pi_paths, "PI correlator file(s)")->required();

    std::string gamma_path;
    double sdp_delta = 0.0;
    int sdp_d = 2;
    CLI::App* sdp_alpha_cmd =
        app.add_subcommand("sdp-alpha", "PSD relaxation of the symmetrized scaling problem");
    sdp_alpha_cmd->add_option("--gamma", gamma_path, "Gamma family file")->required();
    sdp_alpha_cmd->add_option("--delta", sdp_delta, "Uniform relaxation gap bound")
        ->capture_default_str();
    sdp_alpha_cmd->add_option("--d", sdp_d, "Local outcome count for the beta interval")
        ->capture_default_str();
    sdp_alpha_cmd->add_option("pi", pi_paths, "PI correlator file(s)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints the message or the requested help text
        return code == 0 ? 0 : kExitError;
    }
    ds_alpha_set = ds_alpha_opt->count() > 0;

    try {
        std::vector<Outcome> outcomes;
        const std::vector<std::string>* inputs = &state_paths;
        bool printed = false;
        std::string command;
        Json parameters;

        if (*depth) {
            command = "depth";
            parameters = Json{{"n", depth_n}, {"tol", opts.tol}};
            outcomes = run_batch(state_paths, opts.jobs, [&](const std::string& path) {
                return certificate_outcome(
                    certify_depth_reduction(read_operator_file(path), depth_n, opts.tol));
            });
        } else if (*bh) {
            command = "bh";
            parameters = Json{{"alpha", bh_alpha}, {"beta", bh_beta}, {"party", bh_party},
                              {"tol", opts.tol}};
            outcomes = run_batch(state_paths, opts.jobs, [&](const std::string& path) {
                return certificate_outcome(
                    bh_certify(read_operator_file(path), bh_alpha, bh_beta, bh_party, opts.tol));
            });
        } else if (*bh4) {
            command = "bh4";
            parameters = Json{{"alpha", bh4_region.alpha}, {"beta", bh4_region.beta},
                              {"gamma", bh4_region.gamma}, {"delta", bh4_region.delta},
                              {"a", bh4_region.a},         {"b", bh4_region.b},
                              {"party", bh4_party},        {"tol", opts.tol}};
            outcomes = run_batch(state_paths, opts.jobs, [&](const std::string& path) {
                return certificate_outcome(
                    bh4_certify(read_operator_file(path), bh4_region, bh4_party, opts.tol));
            });
        } else if (*mixture) {
            command = "mixture";
            const MixtureParams params = read_mixture_params_file(mixture_path);
            parameters = Json{{"map", mixture_path}, {"tol", opts.tol}};
            outcomes = run_batch(state_paths, opts.jobs, [&](const std::string& path) {
                return certificate_outcome(
                    mixture_certify(read_operator_file(path), params, opts.tol));
            });
        } else if (*sym) {
            command = "sym";
            parameters = Json{{"tol", opts.tol}};
            outcomes = run_batch(state_paths, opts.jobs, [&](const std::string& path) {
                return certificate_outcome(
                    certify_symmetric_small(read_operator_file(path), opts.tol));
            });
        } else if (*ds_check) {
            command = "ds-check";
            inputs = &ds_paths;
            parameters = Json{{"tol", opts.tol}};
            if (ds_alpha_set) parameters["alpha"] = ds_alpha;
            outcomes = run_batch(ds_paths, opts.jobs, [&](const std::string& path) {
                const DiagonalSymmetricState state = read_ds_state_file(path);
                if (ds_alpha_set) return certificate_outcome(ds_certify(state, ds_alpha, opts.tol));
                const bool ppt = ds_ppt_check(state, opts.tol);
                Outcome out;
                out.exit_code = ppt ? kExitCertified : kExitInconclusive;
                out.result =
                    Json{{"half_chain_ppt", ppt}, {"separable", ppt && state.local_dim == 2}};
                out.text = ppt ? (state.local_dim == 2 ? "half-chain PPT: separable"
                                                       : "half-chain PPT")
                               : "not PPT";
                return out;
            });
        } else if (*ds_range_cmd) {
            command = "ds-range";
            inputs = nullptr;
            if (want_table1) {
                parameters = Json{{"table1", true}};
                outcomes = {qubit_range_table()};
                printed = true;
            } else {
                parameters = Json{{"N", range_n}, {"d", range_d}};
                outcomes = {range_outcome(opts, ds_alpha_range(range_n, range_d))};
            }
        } else if (*dd_range_cmd) {
            command = "dd-range";
            inputs = nullptr;
            parameters = Json{{"N", dd_n}, {"d", dd_d}};
            outcomes = {range_outcome(opts, dd_alpha_range(dd_n, dd_d))};
        } else if (*table1) {
            command = "table1";
            inputs = nullptr;
            outcomes = {qubit_range_table()};
            printed = true;
        } else if (*toth_cmd) {
            command = "toth";
            inputs = &moment_paths;
            outcomes = run_batch(moment_paths, opts.jobs, [&](const std::string& path) {
                const auto violations = toth_check(read_moments_file(path));
                Outcome out;
                out.exit_code = violations.empty() ? kExitCertified : kExitInconclusive;
                out.result = Json{{"violations", violations}};
                out.text = violations.empty() ? "compatible: no inequality violated" : "violated:";
                for (const auto& v : violations) out.text += " " + v;
                return out;
            });
        } else if (*toth_alpha_cmd) {
            command = "toth-alpha";
            inputs = &moment_paths;
            outcomes = run_batch(moment_paths, opts.jobs, [&](const std::string& path) {
                const CollectiveMoments m = read_moments_file(path);
                const AlphaResult alpha = toth_alpha(CorrelationFns::from_moments(m));
                return compat_outcome(alpha, sep_compat_certify(alpha, m.n_parties));
            });
        } else if (*lhvm_cmd) {
            command = "lhvm";
            inputs = &table_paths;
            outcomes = run_batch(table_paths, opts.jobs, [&](const std::string& path) {
                const bool feasible = lhvm_membership(read_probability_table_file(path));
                Outcome out;
                out.exit_code = feasible ? kExitCertified : kExitInconclusive;
                out.result = Json{{"local", feasible}};
                out.text = feasible ? "local: admits a hidden-variable model" : "not local";
                return out;
            });
        } else if (*lhvm_alpha_cmd) {
            command = "lhvm-alpha";
            inputs = &corr_paths;
            outcomes = run_batch(corr_paths, opts.jobs, [&](const std::string& path) {
                const CorrelatorVector corr = read_correlators_file(path);
                const AlphaResult alpha = lhvm_alpha(corr);
                return compat_outcome(
                    alpha, lhvm_certify(alpha, corr.scenario.outcomes, corr.scenario.parties));
            });
        } else if (*pi_alpha_cmd) {
            command = "pi-alpha";
            inputs = &pi_paths;
            outcomes = run_batch(pi_paths, opts.jobs, [&](const std::string& path) {
                const PICorrelators s = read_pi_file(path);
                const AlphaResult alpha = pi_alpha(s);
                return compat_outcome(alpha, pi_certify(alpha, s.n_parties));
            });
        } else if (*sdp_alpha_cmd) {
            command = "sdp-alpha";
            inputs = &pi_paths;
            const GammaFamily family = read_gamma_file(gamma_path);
            parameters = Json{{"gamma", gamma_path}, {"delta", sdp_delta}, {"d", sdp_d}};
            outcomes = run_batch(pi_paths, opts.jobs, [&](const std::string& path) {
                const PICorrelators s = read_pi_file(path);
                const AlphaResult alpha = sdp_relax_alpha(s.as_vector(), family);
                return compat_outcome(
                    alpha,
                    theta_body_certify(alpha.value_or_infinity(), sdp_delta, sdp_d, s.n_parties));
            });
        }

        if (!printed) print_outcomes(opts, inputs ? *inputs : std::vector<std::string>{}, outcomes);
        emit_reports(opts, command, parameters, inputs ? *inputs : std::vector<std::string>{},
                     outcomes);
        return aggregate_exit(outcomes);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
