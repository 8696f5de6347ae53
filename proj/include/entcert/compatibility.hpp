#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "entcert/errors.hpp"
#include "entcert/optim.hpp"

namespace entcert {

// ---------------------------------------------------------------------------
// Collective-spin moments and the separable-compatibility LP
// ---------------------------------------------------------------------------

// First and second moments of the collective spin J = sum_i sigma^(i)/2.
struct CollectiveMoments {
    int n_parties = 0;
    Eigen::Vector3d first = Eigen::Vector3d::Zero();   // <J_x>, <J_y>, <J_z>
    Eigen::Vector3d second = Eigen::Vector3d::Zero();  // <J_x^2>, <J_y^2>, <J_z^2>

    void validate() const {
        if (n_parties < 2) throw ValidationError("CollectiveMoments: need N >= 2");
        const double cap = n_parties * n_parties / 4.0;
        for (int a = 0; a < 3; ++a)
            if (second(a) < -1e-9 || second(a) > cap + 1e-9)
                throw ValidationError("CollectiveMoments: <J^2> outside [0, N^2/4]");
    }

    bool unpolarized(double tol = 1e-9) const { return first.norm() <= tol; }

    Eigen::Vector3d variances() const {
        return second - first.cwiseProduct(first);
    }
};

// Correlation functions C_a = <J_a^2> - N/4 of an unpolarized system.
struct CorrelationFns {
    int n_parties = 0;
    Eigen::Vector3d c = Eigen::Vector3d::Zero();

    static CorrelationFns from_moments(const CollectiveMoments& m) {
        m.validate();
        if (!m.unpolarized())
            throw ValidationError("CorrelationFns: moments must be unpolarized (<J> = 0)");
        return {m.n_parties, m.second.array() - m.n_parties / 4.0};
    }
};

// Checks the four inequality families that every separable state satisfies in
// the large-N sense. Returns identifiers of violated inequalities; empty means
// the moments are compatible. Families 3 and 4 run over the choices of the
// singled-out axis c.
inline std::vector<std::string> toth_check(const CollectiveMoments& m) {
    m.validate();
    const double n = m.n_parties;
    const Eigen::Vector3d var = m.variances();
    const double slack = 1e-9 * std::max(1.0, n * n);
    const char axis[3] = {'x', 'y', 'z'};

    std::vector<std::string> violated;
    if (m.second.sum() > n * (n + 2.0) / 4.0 + slack) violated.push_back("F1");
    if (var.sum() < n / 2.0 - slack) violated.push_back("F2");
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        if (m.second(a) + m.second(b) - (n - 1.0) * var(c) > n / 2.0 + slack)
            violated.push_back(std::string("F3:") + axis[c]);
        if ((n - 1.0) * (var(a) + var(b)) - m.second(c) < n * (n - 2.0) / 4.0 - slack)
            violated.push_back(std::string("F4:") + axis[c]);
    }
    return violated;
}

enum class Direction { Max, Min };

struct AlphaResult {
    OptStatus status = OptStatus::Infeasible;
    double alpha = 0.0;

    double value_or_infinity() const {
        return status == OptStatus::Unbounded ? std::numeric_limits<double>::infinity() : alpha;
    }
};

namespace detail {

// Inequalities of the scaled correlations, each as coeff * alpha <= bound with
// bound >= 0, so alpha = 0 is always feasible.
inline std::vector<std::pair<double, double>> toth_alpha_constraints(const CorrelationFns& corr) {
    const double n = corr.n_parties;
    const Eigen::Vector3d& c = corr.c;
    std::vector<std::pair<double, double>> rows;
    rows.emplace_back(4.0 * c.sum(), n * (n - 1.0));
    rows.emplace_back(-4.0 * c.sum(), n);
    for (int k = 0; k < 3; ++k) {
        const int a = (k + 1) % 3, b = (k + 2) % 3;
        rows.emplace_back(4.0 * (c(a) + c(b) - (n - 1.0) * c(k)), n * (n - 1.0));
        rows.emplace_back(-4.0 * ((n - 1.0) * (c(a) + c(b)) - c(k)), n * (n - 1.0));
    }
    return rows;
}

}  // namespace detail

// Extreme scale factor alpha keeping the scaled correlations compatible with
// the moment inequalities. One scalar variable, so the LP collapses to a ratio
// scan over the active bounds.
inline AlphaResult toth_alpha(const CorrelationFns& corr, Direction dir = Direction::Max) {
    const auto rows = detail::toth_alpha_constraints(corr);
    const double coeff_tol = 1e-12;
    bool bounded = false;
    double best = 0.0;
    for (const auto& [g, h] : rows) {
        if (dir == Direction::Max ? g > coeff_tol : g < -coeff_tol) {
            const double bound = h / g;
            if (!bounded || (dir == Direction::Max ? bound < best : bound > best)) {
                bounded = true;
                best = bound;
            }
        }
    }
    if (!bounded) return {OptStatus::Unbounded, 0.0};
    return {OptStatus::Optimal, best};
}

// Generic certificate with a beta interval [beta_lower, infinity).
struct CompatCertificate {
    bool certified = false;
    double alpha_star = 0.0;      // +inf for unbounded
    double beta_lower = 0.0;
    bool beta_lower_open = false;  // interval is (beta_lower, infinity)
    std::string criterion;
    std::string caveat;
};

namespace detail {

inline CompatCertificate beta_interval_certificate(const AlphaResult& alpha, double base,
                                                   std::string criterion, std::string caveat) {
    CompatCertificate cert;
    cert.criterion = std::move(criterion);
    cert.caveat = std::move(caveat);
    if (alpha.status == OptStatus::Unbounded) {
        // The interval lower bound base/(alpha-1) tends to 0: any beta > 0 works.
        cert.certified = true;
        cert.alpha_star = std::numeric_limits<double>::infinity();
        cert.beta_lower = 0.0;
        cert.beta_lower_open = true;
        return cert;
    }
    cert.alpha_star = alpha.alpha;
    if (alpha.status == OptStatus::Optimal && alpha.alpha > 1.0) {
        cert.certified = true;
        cert.beta_lower = base / (alpha.alpha - 1.0);
    }
    return cert;
}

}  // namespace detail

// If alpha* > 1, the observed moments admit a separable description after the
// inverse reduction map for every beta in [2^N/(alpha*-1), infinity).
inline CompatCertificate sep_compat_certify(const AlphaResult& alpha_star, int n_parties) {
    return detail::beta_interval_certificate(
        alpha_star, std::pow(2.0, n_parties), "toth-lp",
        "separable description is guaranteed in the thermodynamic limit");
}

// ---------------------------------------------------------------------------
// Bell scenarios, deterministic strategies, and the local polytope
// ---------------------------------------------------------------------------

struct BellScenario {
    int parties = 0;
    int settings = 0;
    int outcomes = 2;

    void validate() const {
        if (parties < 1 || settings < 1 || outcomes < 2)
            throw ValidationError("BellScenario: need parties >= 1, settings >= 1, outcomes >= 2");
    }

    // d^(m*n); throws when it exceeds the cap.
    long num_strategies(long cap = 1L << 20) const {
        validate();
        long count = 1;
        for (int i = 0; i < settings * parties; ++i) {
            count *= outcomes;
            if (count > cap)
                throw CapacityError("BellScenario: strategy count d^(mn) exceeds cap " +
                                    std::to_string(cap) +
                                    "; use the permutationally invariant projection");
        }
        return count;
    }

    // (1 + m(d-1))^n - 1 correlator coordinates (full plus marginal).
    long correlator_dim() const {
        validate();
        long count = 1;
        const long base = 1 + static_cast<long>(settings) * (outcomes - 1);
        for (int j = 0; j < parties; ++j) count *= base;
        return count - 1;
    }

    long settings_combos() const {
        long count = 1;
        for (int j = 0; j < parties; ++j) count *= settings;
        return count;
    }

    long outcome_combos() const {
        long count = 1;
        for (int j = 0; j < parties; ++j) count *= outcomes;
        return count;
    }
};

namespace detail {

// Outcome table a[party][setting] of deterministic strategy `id`: party j's
// digit in base d^m, whose base-d digits give the outcome per setting
// (setting 0 least significant).
inline std::vector<std::vector<int>> strategy_outcomes(const BellScenario& sc, long id) {
    std::vector<std::vector<int>> a(sc.parties, std::vector<int>(sc.settings));
    long per_party = 1;
    for (int x = 0; x < sc.settings; ++x) per_party *= sc.outcomes;
    for (int j = sc.parties - 1; j >= 0; --j) {
        long digit = id % per_party;
        id /= per_party;
        for (int x = 0; x < sc.settings; ++x) {
            a[j][x] = static_cast<int>(digit % sc.outcomes);
            digit /= sc.outcomes;
        }
    }
    return a;
}

// Fourier (root-of-unity) correlator vector of a deterministic strategy.
// Coordinates are indexed by per-party codes t_j in 0..m(d-1): t_j = 0 excludes
// the party, otherwise t_j - 1 = (x_j)(d-1) + (k_j - 1) selects setting x_j and
// power k_j. Party 0 is the most significant digit of the flattened index.
inline Eigen::VectorXcd strategy_correlators(const BellScenario& sc,
                                             const std::vector<std::vector<int>>& outcomes) {
    const long dim = sc.correlator_dim();
    const long base = 1 + static_cast<long>(sc.settings) * (sc.outcomes - 1);
    const std::complex<double> omega =
        std::exp(std::complex<double>(0.0, 2.0 * M_PI / sc.outcomes));

    Eigen::VectorXcd v(dim);
    std::vector<int> t(sc.parties, 0);
    for (long flat = 1; flat <= dim; ++flat) {
        long rem = flat;
        for (int j = sc.parties - 1; j >= 0; --j) {
            t[j] = static_cast<int>(rem % base);
            rem /= base;
        }
        int phase = 0;
        for (int j = 0; j < sc.parties; ++j) {
            if (t[j] == 0) continue;
            const int x = (t[j] - 1) / (sc.outcomes - 1);
            const int k = (t[j] - 1) % (sc.outcomes - 1) + 1;
            phase += k * outcomes[j][x];
        }
        v(flat - 1) = std::pow(omega, phase % sc.outcomes);
    }
    return v;
}

}  // namespace detail

// Correlator coordinates of every deterministic local strategy.
inline std::vector<Eigen::VectorXcd> enumerate_vertices(const BellScenario& sc,
                                                        long cap = 1L << 20) {
    const long count = sc.num_strategies(cap);
    std::vector<Eigen::VectorXcd> vertices;
    vertices.reserve(count);
    for (long id = 0; id < count; ++id)
        vertices.push_back(detail::strategy_correlators(sc, detail::strategy_outcomes(sc, id)));
    return vertices;
}

// Measured correlator vector in the same coordinate layout as the vertices.
struct CorrelatorVector {
    BellScenario scenario;
    Eigen::VectorXcd entries;

    void validate() const {
        scenario.validate();
        if (entries.size() != scenario.correlator_dim())
            throw ValidationError("CorrelatorVector: expected " +
                                  std::to_string(scenario.correlator_dim()) + " entries, got " +
                                  std::to_string(entries.size()));
        if (scenario.outcomes == 2)
            for (long i = 0; i < entries.size(); ++i)
                if (std::abs(entries(i).imag()) > 1e-9)
                    throw ValidationError(
                        "CorrelatorVector: binary-outcome correlators must be real");
    }

    // Measured binary correlators additionally satisfy |entry| <= 1; scaled
    // vectors (covariance checks, map images) may not, so this is separate.
    void validate_physical() const {
        validate();
        if (scenario.outcomes == 2)
            for (long i = 0; i < entries.size(); ++i)
                if (std::abs(entries(i).real()) > 1.0 + 1e-9)
                    throw ValidationError(
                        "CorrelatorVector: measured binary correlators must lie in [-1, 1]");
    }
};

// Full probability table p(a|x) over all settings combinations.
struct ProbabilityTable {
    BellScenario scenario;
    Eigen::MatrixXd probs;  // rows: settings combos, cols: outcome combos

    void validate() const {
        scenario.validate();
        if (probs.rows() != scenario.settings_combos() || probs.cols() != scenario.outcome_combos())
            throw ValidationError("ProbabilityTable: table has wrong dimensions");
        for (long s = 0; s < probs.rows(); ++s) {
            double sum = 0.0;
            for (long o = 0; o < probs.cols(); ++o) {
                if (probs(s, o) < -1e-12)
                    throw ValidationError("ProbabilityTable: negative probability");
                sum += probs(s, o);
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ValidationError("ProbabilityTable: block for a settings choice must sum to 1");
        }
    }
};

// Probability table of one deterministic strategy.
inline ProbabilityTable vertex_probability_table(const BellScenario& sc, long strategy_id) {
    const auto outcomes = detail::strategy_outcomes(sc, strategy_id);
    ProbabilityTable table{sc, Eigen::MatrixXd::Zero(sc.settings_combos(), sc.outcome_combos())};
    std::vector<int> x(sc.parties);
    for (long s = 0; s < sc.settings_combos(); ++s) {
        long rem = s;
        for (int j = sc.parties - 1; j >= 0; --j) {
            x[j] = static_cast<int>(rem % sc.settings);
            rem /= sc.settings;
        }
        long o = 0;
        for (int j = 0; j < sc.parties; ++j) o = o * sc.outcomes + outcomes[j][x[j]];
        table.probs(s, o) = 1.0;
    }
    return table;
}

// Membership of a probability table in the local polytope: feasibility of
// writing it as a convex combination of deterministic strategies.
inline bool lhvm_membership(const ProbabilityTable& table, long cap = 1L << 20) {
    table.validate();
    const long n_strategies = table.scenario.num_strategies(cap);
    const long rows = table.probs.rows() * table.probs.cols();

    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(n_strategies);
    lp.eq_a = Eigen::MatrixXd::Zero(rows + 1, n_strategies);
    lp.eq_b = Eigen::VectorXd::Zero(rows + 1);
    for (long i = 0; i < n_strategies; ++i) {
        const ProbabilityTable vt = vertex_probability_table(table.scenario, i);
        for (long s = 0; s < table.probs.rows(); ++s)
            for (long o = 0; o < table.probs.cols(); ++o)
                lp.eq_a(s * table.probs.cols() + o, i) = vt.probs(s, o);
        lp.eq_a(rows, i) = 1.0;
    }
    for (long s = 0; s < table.probs.rows(); ++s)
        for (long o = 0; o < table.probs.cols(); ++o)
            lp.eq_b(s * table.probs.cols() + o) = table.probs(s, o);
    lp.eq_b(rows) = 1.0;

    return solve_lp(lp).status == OptStatus::Optimal;
}

// Extreme scale factor keeping alpha * corr inside the local polytope, via an
// LP over (lambda, alpha). Real and imaginary parts contribute separate rows;
// binary-outcome scenarios are purely real.
inline AlphaResult lhvm_alpha(const CorrelatorVector& corr, Direction dir = Direction::Max,
                              long cap = 1L << 20) {
    corr.validate();
    if (corr.entries.norm() <= 1e-14) return {OptStatus::Unbounded, 0.0};

    const auto vertices = enumerate_vertices(corr.scenario, cap);
    const long n_strategies = static_cast<long>(vertices.size());
    const long coords = corr.entries.size();
    const bool complex_rows = corr.scenario.outcomes > 2;
    const long rows = complex_rows ? 2 * coords : coords;

    LinearProgram lp;
    const long alpha_col = n_strategies;
    lp.objective = Eigen::VectorXd::Zero(n_strategies + 1);
    lp.objective(alpha_col) = dir == Direction::Max ? 1.0 : -1.0;
    lp.free_vars.assign(n_strategies + 1, false);
    lp.free_vars[alpha_col] = true;
    lp.eq_a = Eigen::MatrixXd::Zero(rows + 1, n_strategies + 1);
    lp.eq_b = Eigen::VectorXd::Zero(rows + 1);
    for (long i = 0; i < n_strategies; ++i) {
        for (long c = 0; c < coords; ++c) {
            lp.eq_a(c, i) = vertices[i](c).real();
            if (complex_rows) lp.eq_a(coords + c, i) = vertices[i](c).imag();
        }
        lp.eq_a(rows, i) = 1.0;
    }
    for (long c = 0; c < coords; ++c) {
        lp.eq_a(c, alpha_col) = -corr.entries(c).real();
        if (complex_rows) lp.eq_a(coords + c, alpha_col) = -corr.entries(c).imag();
    }
    lp.eq_b(rows) = 1.0;

    const LPSolution sol = solve_lp(lp);
    if (sol.status != OptStatus::Optimal) return {sol.status, 0.0};
    return {OptStatus::Optimal, sol.x(alpha_col)};
}

// If alpha* > 1, the state behind the correlators admits a local-hidden-variable
// description after the inverse reduction map for beta in [d^N/(alpha*-1), inf).
inline CompatCertificate lhvm_certify(const AlphaResult& alpha_star, int outcomes_d,
                                      int n_parties) {
    return detail::beta_interval_certificate(alpha_star, std::pow(outcomes_d, n_parties),
                                             "lhvm-lp", "");
}

// ---------------------------------------------------------------------------
// Permutationally invariant one- and two-body projection (2 settings, 2 outcomes)
// ---------------------------------------------------------------------------

struct PICorrelators {
    int n_parties = 0;
    double s0 = 0.0, s1 = 0.0;        // one-body sums
    double s00 = 0.0, s01 = 0.0, s11 = 0.0;  // two-body sums over i != j

    Eigen::VectorXd as_vector() const {
        Eigen::VectorXd v(5);
        v << s0, s1, s00, s01, s11;
        return v;
    }

    void validate() const {
        if (n_parties < 1) throw ValidationError("PICorrelators: need N >= 1");
        const double n = n_parties;
        if (std::abs(s0) > n + 1e-9 || std::abs(s1) > n + 1e-9)
            throw ValidationError("PICorrelators: |one-body sum| exceeds N");
        const double cap = n * (n - 1.0) + 1e-9;
        if (std::abs(s00) > cap || std::abs(s01) > cap || std::abs(s11) > cap)
            throw ValidationError("PICorrelators: |two-body sum| exceeds N(N-1)");
    }
};

// One vertex per composition of N into the 4 sign strategies
// (s_0, s_1) in {(+,+), (+,-), (-,+), (-,-)}:
//   S_x  = sum_k c_k s_{x,k}
//   S_xy = S_x S_y - sum_k c_k s_{x,k} s_{y,k}   (diagonal i = j excluded)
inline std::vector<PICorrelators> pi_vertices(int n_parties) {
    if (n_parties < 1) throw ArgumentError("pi_vertices: need N >= 1");
    const double sign0[4] = {1.0, 1.0, -1.0, -1.0};
    const double sign1[4] = {1.0, -1.0, 1.0, -1.0};

    std::vector<PICorrelators> vertices;
    for (int c0 = 0; c0 <= n_parties; ++c0)
        for (int c1 = 0; c0 + c1 <= n_parties; ++c1)
            for (int c2 = 0; c0 + c1 + c2 <= n_parties; ++c2) {
                const int c3 = n_parties - c0 - c1 - c2;
                const double c[4] = {static_cast<double>(c0), static_cast<double>(c1),
                                     static_cast<double>(c2), static_cast<double>(c3)};
                PICorrelators v;
                v.n_parties = n_parties;
                double d00 = 0.0, d01 = 0.0, d11 = 0.0;
                for (int k = 0; k < 4; ++k) {
                    v.s0 += c[k] * sign0[k];
                    v.s1 += c[k] * sign1[k];
                    d00 += c[k] * sign0[k] * sign0[k];
                    d01 += c[k] * sign0[k] * sign1[k];
                    d11 += c[k] * sign1[k] * sign1[k];
                }
                v.s00 = v.s0 * v.s0 - d00;
                v.s01 = v.s0 * v.s1 - d01;
                v.s11 = v.s1 * v.s1 - d11;
                vertices.push_back(v);
            }
    return vertices;
}

// Extreme scale factor keeping alpha * S inside the projected polytope.
inline AlphaResult pi_alpha(const PICorrelators& s, Direction dir = Direction::Max) {
    s.validate();
    const Eigen::VectorXd target = s.as_vector();
    if (target.norm() <= 1e-14) return {OptStatus::Unbounded, 0.0};

    const auto vertices = pi_vertices(s.n_parties);
    const long n_vertices = static_cast<long>(vertices.size());
    const long alpha_col = n_vertices;

    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(n_vertices + 1);
    lp.objective(alpha_col) = dir == Direction::Max ? 1.0 : -1.0;
    lp.free_vars.assign(n_vertices + 1, false);
    lp.free_vars[alpha_col] = true;
    lp.eq_a = Eigen::MatrixXd::Zero(6, n_vertices + 1);
    lp.eq_b = Eigen::VectorXd::Zero(6);
    for (long i = 0; i < n_vertices; ++i) {
        lp.eq_a.block(0, i, 5, 1) = vertices[i].as_vector();
        lp.eq_a(5, i) = 1.0;
    }
    lp.eq_a.block(0, alpha_col, 5, 1) = -target;
    lp.eq_b(5) = 1.0;

    const LPSolution sol = solve_lp(lp);
    if (sol.status != OptStatus::Optimal) return {sol.status, 0.0};
    return {OptStatus::Optimal, sol.x(alpha_col)};
}

// Symmetrize a full correlator vector (2 settings, 2 outcomes) into the
// one- and two-body sums used by the projection.
inline PICorrelators pi_project(const CorrelatorVector& corr) {
    corr.validate();
    const BellScenario& sc = corr.scenario;
    if (sc.settings != 2 || sc.outcomes != 2)
        throw UnsupportedDimensionError("pi_project: requires the 2-setting 2-outcome scenario");

    const long base = 1 + sc.settings;
    auto coord = [&](const std::vector<int>& t) {
        long flat = 0;
        for (int j = 0; j < sc.parties; ++j) flat = flat * base + t[j];
        return corr.entries(flat - 1).real();
    };

    PICorrelators out;
    out.n_parties = sc.parties;
    for (int i = 0; i < sc.parties; ++i) {
        std::vector<int> t(sc.parties, 0);
        t[i] = 1;
        out.s0 += coord(t);
        t[i] = 2;
        out.s1 += coord(t);
    }
    for (int i = 0; i < sc.parties; ++i)
        for (int j = i + 1; j < sc.parties; ++j) {
            std::vector<int> t(sc.parties, 0);
            t[i] = 1, t[j] = 1;
            out.s00 += 2.0 * coord(t);
            t[i] = 2, t[j] = 2;
            out.s11 += 2.0 * coord(t);
            t[i] = 1, t[j] = 2;
            out.s01 += coord(t);
            t[i] = 2, t[j] = 1;
            out.s01 += coord(t);
        }
    return out;
}

// If alpha~ > 1, the projected correlators admit a permutationally invariant
// local model for beta in [d^N/(alpha~-1), infinity).
inline CompatCertificate pi_certify(const AlphaResult& alpha_tilde, int n_parties) {
    return detail::beta_interval_certificate(alpha_tilde, std::pow(2.0, n_parties), "pi-lp", "");
}

// ---------------------------------------------------------------------------
// Univariate PSD relaxation
// ---------------------------------------------------------------------------

// Constant matrices of the moment-method relaxation; index 0 is the constant
// block paired with y_0 = 1. Supplied as input data, never synthesized here.
struct GammaFamily {
    std::vector<Eigen::MatrixXd> matrices;

    void validate(long s_len) const {
        if (matrices.empty()) throw ValidationError("GammaFamily: no matrices");
        if (static_cast<long>(matrices.size()) != s_len + 1)
            throw ValidationError("GammaFamily: need len(S) + 1 matrices, got " +
                                  std::to_string(matrices.size()));
        const long dim = matrices[0].rows();
        for (const auto& g : matrices) {
            if (g.rows() != dim || g.cols() != dim)
                throw ValidationError("GammaFamily: matrices must be square of a common dimension");
            if ((g - g.transpose()).norm() > 1e-12 * std::max(1.0, g.norm()))
                throw ValidationError("GammaFamily: matrices must be symmetric");
        }
    }
};

// max alpha with Gamma_0 + alpha * sum_i S_i Gamma_i PSD: a univariate PSD
// feasibility problem solved by bracketed bisection.
inline AlphaResult sdp_relax_alpha(const Eigen::VectorXd& s, const GammaFamily& family,
                                   double tol = 1e-9) {
    family.validate(s.size());
    Eigen::MatrixXd direction = Eigen::MatrixXd::Zero(family.matrices[0].rows(),
                                                      family.matrices[0].cols());
    for (long i = 0; i < s.size(); ++i) direction += s(i) * family.matrices[i + 1];

    auto psd = [](const Eigen::MatrixXd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
        return solver.eigenvalues()(0) >= -1e-9;
    };
    if (!psd(family.matrices[0])) return {OptStatus::Infeasible, 0.0};
    const double direction_norm = direction.norm();
    if (direction_norm <= 1e-14) return {OptStatus::Unbounded, 0.0};

    BisectionSpec spec;
    spec.tolerance = tol;
    spec.predicate = [&](double alpha) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
            family.matrices[0] + alpha * direction, Eigen::EigenvaluesOnly);
        // noise floor scales with the matrix norm
        return solver.eigenvalues()(0) >= -1e-9 * (1.0 + std::abs(alpha) * direction_norm);
    };
    const double boundary = bisect_boundary(spec, 0.0, +1);
    if (std::isinf(boundary)) return {OptStatus::Unbounded, 0.0};
    return {OptStatus::Optimal, boundary};
}

// Certificate from the relaxation corrected by a uniform gap bound Delta:
// alpha_hat - Delta > 1 yields beta in [d^N/(alpha_hat - Delta - 1), infinity).
inline CompatCertificate theta_body_certify(double alpha_hat, double delta, int outcomes_d,
                                            int n_parties) {
    if (delta < 0.0) throw ArgumentError("theta_body_certify: Delta must be >= 0");
    AlphaResult corrected;
    if (std::isinf(alpha_hat)) {
        corrected = {OptStatus::Unbounded, 0.0};
    } else {
        corrected = {OptStatus::Optimal, alpha_hat - delta};
    }
    CompatCertificate cert = detail::beta_interval_certificate(
        corrected, std::pow(outcomes_d, n_parties), "theta-body", "");
    return cert;
}

}  // namespace entcert
