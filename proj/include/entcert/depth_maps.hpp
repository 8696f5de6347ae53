#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "entcert/map_spec.hpp"
#include "entcert/operator_core.hpp"

namespace entcert {

// A certificate is a sufficient-condition verdict. Inconclusive never asserts
// entanglement; it only means this criterion did not fire.
enum class Verdict { CertifiedDepthAtMost, CertifiedBiseparableCut, CertifiedSeparable, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::CertifiedDepthAtMost: return "certified-depth-at-most";
        case Verdict::CertifiedBiseparableCut: return "certified-biseparable-cut";
        case Verdict::CertifiedSeparable: return "certified-separable";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct DepthCertificate {
    Verdict verdict = Verdict::Inconclusive;
    int depth_bound = 0;  // meaningful for CertifiedDepthAtMost
    PartySubset cut;      // meaningful for CertifiedBiseparableCut
    std::vector<std::pair<std::string, double>> params;
    double witness_min_eig = std::numeric_limits<double>::quiet_NaN();
    std::string criterion;
    std::string note;

    bool certified() const { return verdict != Verdict::Inconclusive; }

    static DepthCertificate inconclusive(std::string criterion, double witness,
                                         std::vector<std::pair<std::string, double>> params = {},
                                         std::string note = {}) {
        DepthCertificate c;
        c.criterion = std::move(criterion);
        c.witness_min_eig = witness;
        c.params = std::move(params);
        c.note = std::move(note);
        return c;
    }
};

// ---------------------------------------------------------------------------
// Reduction-type family: L_alpha(rho) = Tr(rho)*1 + alpha*rho
// ---------------------------------------------------------------------------

inline HermitianOperator reduction_apply(const HermitianOperator& rho, double alpha) {
    return apply_map(MapSpec::reduction(alpha), rho);
}

// Closed-form inverse: [sigma - Tr(sigma)*1/(D+alpha)] / alpha, D = dim.
inline HermitianOperator reduction_inverse(const HermitianOperator& sigma, double alpha) {
    const double d = static_cast<double>(sigma.dim());
    if (alpha == 0.0 || alpha == -d)
        throw NonInvertibleError("reduction_inverse: alpha in {0, -dim} has no inverse",
                                 std::numeric_limits<double>::quiet_NaN());
    Eigen::MatrixXcd out =
        (sigma.mat - (sigma.mat.trace() / (d + alpha)) *
                         Eigen::MatrixXcd::Identity(sigma.dim(), sigma.dim())) /
        alpha;
    return {sigma.shape, std::move(out)};
}

// Depth certificate from the reduction family. The validated alpha range is
// [-1, 2] independent of n, so the positive branch is decided at alpha = 2
// (lambda_min >= Tr/(D+2)) and the negative branch at alpha = -1
// (lambda_max <= Tr/(D-1)); the endpoints dominate by monotonicity of the
// threshold in alpha. Only the verdict label depends on n.
inline DepthCertificate certify_depth_reduction(const HermitianOperator& sigma, int n,
                                                double tol = defaults::psd_tol) {
    validate_state(sigma, tol);
    const int parties = sigma.shape.num_parties();
    if (n < 1 || n > parties - 1)
        throw ArgumentError("certify_depth_reduction: n must lie in [1, N-1]");

    const double d = static_cast<double>(sigma.dim());
    const double tr = sigma.trace();
    const Spectrum spec = spectrum(sigma);

    DepthCertificate cert;
    cert.criterion = "reduction-inverse";
    cert.params = {{"n", static_cast<double>(n)}};
    const double witness_pos = (spec.min() - tr / (d + 2.0)) / 2.0;
    const double witness_neg = tr / (d - 1.0) - spec.max();
    if (witness_pos >= -tol) {
        cert.verdict = Verdict::CertifiedDepthAtMost;
        cert.depth_bound = parties - n;
        cert.params.emplace_back("alpha", 2.0);
        cert.witness_min_eig = witness_pos;
    } else if (witness_neg >= -tol) {
        cert.verdict = Verdict::CertifiedDepthAtMost;
        cert.depth_bound = parties - n;
        cert.params.emplace_back("alpha", -1.0);
        cert.witness_min_eig = witness_neg;
    } else {
        cert.witness_min_eig = std::max(witness_pos, witness_neg);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Two-parameter family: L_{alpha,beta}(rho) = Tr(rho)*1 + alpha*rho + beta*tilde_A(rho)
// ---------------------------------------------------------------------------

inline bool two_param_region_ok(double alpha, double beta) {
    return alpha >= std::max(-1.0, beta / 2.0 - 1.0) && beta >= std::max(-1.0, alpha / 2.0 - 1.0);
}

inline HermitianOperator bh_apply(const HermitianOperator& rho, double alpha, double beta,
                                  int party) {
    if (party < 0 || party >= rho.shape.num_parties())
        throw ArgumentError("bh_apply: party index out of range");
    if (rho.shape.local_dims[party] != 2)
        throw UnsupportedDimensionError("bh_apply: tilde party must be a qubit");
    return apply_map(MapSpec::two_param(alpha, beta, party), rho);
}

// Closed-form inverse of the two-parameter family:
//   [alpha*sigma - beta*tilde_A(sigma) - (alpha-beta)/(D+alpha+beta) Tr(sigma)*1] / (alpha^2-beta^2)
inline HermitianOperator bh_inverse(const HermitianOperator& sigma, double alpha, double beta,
                                    int party) {
    const double d = static_cast<double>(sigma.dim());
    const double det = alpha * alpha - beta * beta;
    if (std::abs(det) <= 1e-12 * std::max(1.0, std::max(alpha * alpha, beta * beta)))
        throw NonInvertibleError("bh_inverse: alpha^2 == beta^2 has no inverse",
                                 std::numeric_limits<double>::infinity());
    if (std::abs(d + alpha + beta) <= 1e-12)
        throw NonInvertibleError("bh_inverse: dim + alpha + beta == 0 has no inverse",
                                 std::numeric_limits<double>::infinity());
    const HermitianOperator tilde_sigma = tilde(sigma, PartySubset::single(party));
    Eigen::MatrixXcd out =
        (alpha * sigma.mat - beta * tilde_sigma.mat -
         ((alpha - beta) / (d + alpha + beta)) * sigma.mat.trace() *
             Eigen::MatrixXcd::Identity(sigma.dim(), sigma.dim())) /
        det;
    return {sigma.shape, std::move(out)};
}

inline DepthCertificate bh_certify(const HermitianOperator& sigma, double alpha, double beta,
                                   int party, double tol = defaults::psd_tol) {
    if (!two_param_region_ok(alpha, beta))
        throw RegionError("bh_certify: (alpha, beta) outside the validated region",
                          {"alpha >= max(-1, beta/2 - 1)", "beta >= max(-1, alpha/2 - 1)"});
    validate_state(sigma, tol);
    const double witness = min_eigenvalue(bh_inverse(sigma, alpha, beta, party));

    DepthCertificate cert;
    cert.criterion = "two-param-inverse";
    cert.params = {{"alpha", alpha}, {"beta", beta}, {"party", static_cast<double>(party)}};
    cert.witness_min_eig = witness;
    if (witness >= -tol) {
        cert.verdict = Verdict::CertifiedBiseparableCut;
        cert.cut = PartySubset::single(party);
    }
    return cert;
}

// Boundary form of the two-parameter criterion (beta = param/2 - 1 substituted,
// overall positive prefactor dropped). Variant A weights the state by param,
// variant B swaps the roles of the state and its tilde.
enum class BoundaryVariant { A, B };

inline DepthCertificate criterion_boundary_check(const HermitianOperator& sigma, double param,
                                                 int party, BoundaryVariant variant,
                                                 double tol = defaults::psd_tol) {
    if (param < 0.0)
        throw RegionError("criterion_boundary_check: parameter must be >= 0 on the boundary",
                          {"param >= 0"});
    const double d = static_cast<double>(sigma.dim());
    const double denom = d + 1.5 * param - 1.0;
    const HermitianOperator tilde_sigma = tilde(sigma, PartySubset::single(party));
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(sigma.dim(), sigma.dim());
    const std::complex<double> tr = sigma.mat.trace();

    Eigen::MatrixXcd out;
    if (variant == BoundaryVariant::A)
        out = param * sigma.mat - (param / 2.0 - 1.0) * tilde_sigma.mat -
              ((1.0 + param / 2.0) / denom) * tr * eye;
    else
        out = param * tilde_sigma.mat - (param / 2.0 - 1.0) * sigma.mat -
              ((1.0 + param / 2.0) / denom) * tr * eye;

    const double witness = min_eigenvalue({sigma.shape, std::move(out)});
    DepthCertificate cert;
    cert.criterion = variant == BoundaryVariant::A ? "boundary-a" : "boundary-b";
    cert.params = {{"param", param}, {"party", static_cast<double>(party)}};
    cert.witness_min_eig = witness;
    if (witness >= -tol) {
        cert.verdict = Verdict::CertifiedBiseparableCut;
        cert.cut = PartySubset::single(party);
    }
    return cert;
}

// Asymptotic limit of the boundary criterion. Valid only with strict positivity:
// variant A certifies when sigma - tilde_A(sigma)/2 > 0, variant B when
// tilde_A(sigma) - sigma/2 > 0.
enum class AsymptoticVariant { A, B };

inline DepthCertificate criterion_asymptotic_check(const HermitianOperator& sigma, int party,
                                                   AsymptoticVariant variant,
                                                   double strict_tol = defaults::strict_tol) {
    const HermitianOperator tilde_sigma = tilde(sigma, PartySubset::single(party));
    Eigen::MatrixXcd out = (variant == AsymptoticVariant::A)
                               ? (sigma.mat - 0.5 * tilde_sigma.mat).eval()
                               : (tilde_sigma.mat - 0.5 * sigma.mat).eval();
    const double witness = min_eigenvalue({sigma.shape, std::move(out)});

    DepthCertificate cert;
    cert.criterion = variant == AsymptoticVariant::A ? "asymptotic-a" : "asymptotic-b";
    cert.params = {{"party", static_cast<double>(party)}};
    cert.witness_min_eig = witness;
    if (witness > strict_tol) {
        cert.verdict = Verdict::CertifiedBiseparableCut;
        cert.cut = PartySubset::single(party);
    }
    return cert;
}

// Partial-transpose proximity criteria. Certifies when sigma is PT-invariant
// on the party, or when sigma + sigma^T_A is positive definite and
// ||(sigma + sigma^T_A)^{-1}|| * ||sigma - sigma^T_A|| <= 1. The symmetrized
// part must be positive definite for the norm-product argument to apply;
// indefinite or rank-deficient sums fall through to Inconclusive.
inline DepthCertificate kraus_check(const HermitianOperator& sigma, int party,
                                    double tol = defaults::psd_tol) {
    if (!is_psd(sigma, tol)) throw ValidationError("kraus_check: input must be PSD");

    const HermitianOperator pt = partial_transpose(sigma, PartySubset::single(party));
    const HermitianOperator diff{sigma.shape, sigma.mat - pt.mat};
    const HermitianOperator sum{sigma.shape, sigma.mat + pt.mat};
    const double diff_norm = operator_norm(diff);

    DepthCertificate cert;
    cert.params = {{"party", static_cast<double>(party)}};
    if (diff_norm <= tol) {
        cert.verdict = Verdict::CertifiedBiseparableCut;
        cert.cut = PartySubset::single(party);
        cert.criterion = "pt-invariant";
        cert.witness_min_eig = diff_norm;
        return cert;
    }

    const double sum_min = min_eigenvalue(sum);
    cert.params.emplace_back("sum_min_eig", sum_min);
    cert.params.emplace_back("diff_norm", diff_norm);
    if (sum_min <= tol) {
        cert.criterion = "norm-product";
        cert.witness_min_eig = sum_min;
        cert.note = "sigma + sigma^T_A is not positive definite";
        return cert;
    }
    const double product = diff_norm / sum_min;
    cert.criterion = "norm-product";
    cert.witness_min_eig = 1.0 - product;
    cert.params.emplace_back("norm_product", product);
    if (product <= 1.0) {
        cert.verdict = Verdict::CertifiedBiseparableCut;
        cert.cut = PartySubset::single(party);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Four-parameter family and party mixtures
// ---------------------------------------------------------------------------

// Parameter point of the four-term map together with the split weights (a, b)
// that witness membership of the validated region.
struct BHRegion {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
    double a = 0.0, b = 0.0;

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (!(a >= 0.0 && a <= 1.0)) v.push_back("0 <= a <= 1");
        if (!(b >= 0.0 && b <= 1.0)) v.push_back("0 <= b <= 1");
        if (!(a + b <= 1.0)) v.push_back("a + b <= 1");
        if (!(alpha >= beta / 2.0 - a)) v.push_back("alpha >= beta/2 - a");
        if (!(beta >= alpha / 2.0 - a)) v.push_back("beta >= alpha/2 - a");
        if (!(gamma >= delta / 2.0 - b)) v.push_back("gamma >= delta/2 - b");
        if (!(delta >= gamma / 2.0 - b)) v.push_back("delta >= gamma/2 - b");
        if (!(alpha >= -1.0)) v.push_back("alpha >= -1");
        if (!(beta >= -1.0)) v.push_back("beta >= -1");
        if (!(gamma >= -1.0)) v.push_back("gamma >= -1");
        if (!(delta >= -1.0)) v.push_back("delta >= -1");
        return v;
    }

    bool valid() const { return violations().empty(); }
};

inline HermitianOperator bh4_apply(const HermitianOperator& rho, const BHRegion& region,
                                   int party) {
    const auto violations = region.violations();
    if (!violations.empty())
        throw RegionError("bh4_apply: parameters outside the validated region", violations);
    if (!rho.shape.all_qubits())
        throw UnsupportedDimensionError("bh4_apply: all parties must be qubits");
    return apply_map(MapSpec::four_param(region.alpha, region.beta, region.gamma, region.delta,
                                         party, rho.shape.num_parties()),
                     rho);
}

inline DepthCertificate bh4_certify(const HermitianOperator& sigma, const BHRegion& region,
                                    int party, double tol = defaults::psd_tol) {
    const auto violations = region.violations();
    if (!violations.empty())
        throw RegionError("bh4_certify: parameters outside the validated region", violations);
    validate_state(sigma, tol);
    const MapSpec map = MapSpec::four_param(region.alpha, region.beta, region.gamma, region.delta,
                                            party, sigma.shape.num_parties());
    const InversionResult inv = superop_invert(map, sigma.shape, sigma);
    const double witness = min_eigenvalue(inv.rho);

    DepthCertificate cert;
    cert.criterion = "four-param-inverse";
    cert.params = {{"alpha", region.alpha}, {"beta", region.beta},   {"gamma", region.gamma},
                   {"delta", region.delta}, {"a", region.a},         {"b", region.b},
                   {"party", static_cast<double>(party)}};
    cert.witness_min_eig = witness;
    if (witness >= -tol) cert.verdict = Verdict::CertifiedSeparable;
    return cert;
}

// Convex mixture of per-party four-term maps:
//   L(rho) = Tr(rho)*1 + sum_i p_i [alpha_i rho + beta_i tilde_i + gamma_i tilde_{rest i} + delta_i tilde_all]
struct MixtureParams {
    std::vector<double> weights;       // one per party, >= 0, summing to 1
    std::vector<BHRegion> per_party;

    void validate(int n_parties) const {
        if (static_cast<int>(weights.size()) != n_parties ||
            static_cast<int>(per_party.size()) != n_parties)
            throw ValidationError("MixtureParams: need one weight and one parameter set per party");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ValidationError("MixtureParams: weights must be nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ValidationError("MixtureParams: weights must sum to 1");
    }
};

inline MapSpec mixture_map_spec(const MixtureParams& params, int n_parties) {
    params.validate(n_parties);
    MapSpec m;
    m.add_trace_identity(1.0);
    double identity_coeff = 0.0;
    double all_coeff = 0.0;
    for (int i = 0; i < n_parties; ++i) {
        const double p = params.weights[i];
        const BHRegion& r = params.per_party[i];
        identity_coeff += p * r.alpha;
        if (p * r.beta != 0.0) m.add_tilde(p * r.beta, PartySubset::single(i));
        if (p * r.gamma != 0.0)
            m.add_tilde(p * r.gamma, PartySubset::single(i).complement(n_parties));
        all_coeff += p * r.delta;
    }
    m.add_identity(identity_coeff);
    if (all_coeff != 0.0) m.add_tilde(all_coeff, PartySubset::all(n_parties));
    return m;
}

inline HermitianOperator mixture_apply(const HermitianOperator& rho, const MixtureParams& params) {
    if (!rho.shape.all_qubits())
        throw UnsupportedDimensionError("mixture_apply: all parties must be qubits");
    return apply_map(mixture_map_spec(params, rho.shape.num_parties()), rho);
}

inline InversionResult mixture_invert(const HermitianOperator& sigma, const MixtureParams& params) {
    return superop_invert(mixture_map_spec(params, sigma.shape.num_parties()), sigma.shape, sigma);
}

// Certified path of the mixture map: three qubits, every per-party parameter
// set inside the validated region, sigma a state. A PSD pre-image certifies
// the absence of genuine 3-party entanglement (depth at most 2).
inline DepthCertificate mixture_certify(const HermitianOperator& sigma,
                                        const MixtureParams& params,
                                        double tol = defaults::psd_tol) {
    const int n = sigma.shape.num_parties();
    if (n != 3 || !sigma.shape.all_qubits())
        throw UnsupportedDimensionError("mixture_certify: certified path requires 3 qubits");
    for (int i = 0; i < n; ++i) {
        const auto violations = params.per_party[i].violations();
        if (!violations.empty())
            throw RegionError("mixture_certify: party " + std::to_string(i) +
                                  " parameters outside the validated region",
                              violations);
    }
    validate_state(sigma, tol);
    const InversionResult inv = mixture_invert(sigma, params);
    const double witness = min_eigenvalue(inv.rho);

    DepthCertificate cert;
    cert.criterion = "mixture-inverse";
    for (int i = 0; i < n; ++i) {
        const std::string tag = std::to_string(i);
        cert.params.emplace_back("p" + tag, params.weights[i]);
        cert.params.emplace_back("alpha" + tag, params.per_party[i].alpha);
        cert.params.emplace_back("beta" + tag, params.per_party[i].beta);
        cert.params.emplace_back("gamma" + tag, params.per_party[i].gamma);
        cert.params.emplace_back("delta" + tag, params.per_party[i].delta);
    }
    cert.witness_min_eig = witness;
    if (witness >= -tol) {
        cert.verdict = Verdict::CertifiedDepthAtMost;
        cert.depth_bound = n - 1;
    }
    return cert;
}

}  // namespace entcert
