#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "entcert/compatibility.hpp"
#include "entcert/depth_maps.hpp"
#include "entcert/map_spec.hpp"
#include "entcert/operator_core.hpp"
#include "entcert/symmetric.hpp"

namespace entcert {

inline constexpr const char* tool_name = "entcert";
inline constexpr const char* tool_version = "0.1.0";

using Json = nlohmann::ordered_json;

namespace io_detail {

inline Json parse(std::istream& in, const std::string& what) {
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(what + ": malformed document: " + e.what());
    }
    return j;
}

inline Json parse_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ValidationError(what + ": cannot open '" + path + "'");
    return parse(in, what);
}

template <typename T>
T field(const Json& j, const std::string& key, const std::string& what) {
    if (!j.contains(key)) throw ValidationError(what + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(what + ": field '" + key + "' has the wrong type");
    }
}

inline Eigen::MatrixXd read_real_matrix(const Json& j, long dim, const std::string& what) {
    if (!j.is_array() || static_cast<long>(j.size()) != dim)
        throw ValidationError(what + ": expected " + std::to_string(dim) + " rows");
    Eigen::MatrixXd m(dim, dim);
    for (long r = 0; r < dim; ++r) {
        const Json& row = j.at(r);
        if (!row.is_array() || static_cast<long>(row.size()) != dim)
            throw ValidationError(what + ": row " + std::to_string(r) + " must have " +
                                  std::to_string(dim) + " entries");
        for (long c = 0; c < dim; ++c) m(r, c) = row.at(c).get<double>();
    }
    return m;
}

inline Json write_real_matrix(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (long r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace io_detail

// --------------------------------------------------------------------------
// Operator files: {"shape": {"local_dims": [...]}, "re": [[...]], "im": [[...]]}
// --------------------------------------------------------------------------

inline HermitianOperator read_operator(std::istream& in) {
    const Json j = io_detail::parse(in, "operator file");
    const Json shape_j = io_detail::field<Json>(j, "shape", "operator file");
    SystemShape shape{io_detail::field<std::vector<int>>(shape_j, "local_dims", "operator file")};
    shape.validate();
    const long dim = shape.dim();

    const Eigen::MatrixXd re =
        io_detail::read_real_matrix(io_detail::field<Json>(j, "re", "operator file"), dim,
                                    "operator file re");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(dim, dim);
    if (j.contains("im"))
        im = io_detail::read_real_matrix(j.at("im"), dim, "operator file im");
    Eigen::MatrixXcd mat = re.cast<std::complex<double>>();
    mat += std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
    return HermitianOperator::checked(std::move(shape), std::move(mat));
}

inline HermitianOperator read_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("operator file: cannot open '" + path + "'");
    return read_operator(in);
}

inline Json operator_to_json(const HermitianOperator& op) {
    Json j;
    j["shape"] = Json{{"local_dims", op.shape.local_dims}};
    j["re"] = io_detail::write_real_matrix(op.mat.real());
    j["im"] = io_detail::write_real_matrix(op.mat.imag());
    return j;
}

// --------------------------------------------------------------------------
// Map specifications: {"terms": [{"coeff": c, "kind": k, "subset": [...]}]}
// --------------------------------------------------------------------------

inline MapSpec read_map_spec(std::istream& in) {
    const Json j = io_detail::parse(in, "map file");
    MapSpec map;
    for (const Json& term : io_detail::field<Json>(j, "terms", "map file")) {
        const double coeff = io_detail::field<double>(term, "coeff", "map term");
        const std::string kind = io_detail::field<std::string>(term, "kind", "map term");
        if (kind == "trace_identity") {
            map.add_trace_identity(coeff);
        } else if (kind == "identity") {
            map.add_identity(coeff);
        } else if (kind == "tilde") {
            map.add_tilde(coeff, PartySubset{io_detail::field<std::vector<int>>(
                                     term, "subset", "map term")});
        } else {
            throw ValidationError("map term: unknown kind '" + kind + "'");
        }
    }
    return map;
}

inline Json map_spec_to_json(const MapSpec& map) {
    Json terms = Json::array();
    for (const MapTerm& t : map.terms) {
        Json term;
        term["coeff"] = t.coeff;
        switch (t.kind) {
            case TermKind::TraceIdentity: term["kind"] = "trace_identity"; break;
            case TermKind::Identity: term["kind"] = "identity"; break;
            case TermKind::Tilde:
                term["kind"] = "tilde";
                term["subset"] = t.subset.indices;
                break;
        }
        terms.push_back(std::move(term));
    }
    return Json{{"terms", std::move(terms)}};
}

// --------------------------------------------------------------------------
// Diagonal symmetric states: {"N": n, "d": d, "p": [...]}
// --------------------------------------------------------------------------

inline DiagonalSymmetricState read_ds_state(std::istream& in) {
    const Json j = io_detail::parse(in, "diagonal-state file");
    DiagonalSymmetricState s;
    s.n_parties = io_detail::field<int>(j, "N", "diagonal-state file");
    s.local_dim = j.contains("d") ? io_detail::field<int>(j, "d", "diagonal-state file") : 2;
    const auto p = io_detail::field<std::vector<double>>(j, "p", "diagonal-state file");
    s.weights = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<long>(p.size()));
    s.normalized = !j.contains("normalized") || j.at("normalized").get<bool>();
    s.validate();
    return s;
}

inline DiagonalSymmetricState read_ds_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("diagonal-state file: cannot open '" + path + "'");
    return read_ds_state(in);
}

// --------------------------------------------------------------------------
// Mixture parameters: {"weights": [...], "parties": [{"alpha": ..., "b": ...}]}
// --------------------------------------------------------------------------

inline MixtureParams read_mixture_params(std::istream& in) {
    const Json j = io_detail::parse(in, "mixture file");
    MixtureParams params;
    params.weights = io_detail::field<std::vector<double>>(j, "weights", "mixture file");
    for (const Json& party : io_detail::field<Json>(j, "parties", "mixture file")) {
        BHRegion r;
        r.alpha = io_detail::field<double>(party, "alpha", "mixture party");
        r.beta = io_detail::field<double>(party, "beta", "mixture party");
        r.gamma = io_detail::field<double>(party, "gamma", "mixture party");
        r.delta = io_detail::field<double>(party, "delta", "mixture party");
        r.a = io_detail::field<double>(party, "a", "mixture party");
        r.b = io_detail::field<double>(party, "b", "mixture party");
        params.per_party.push_back(r);
    }
    return params;
}

inline MixtureParams read_mixture_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("mixture file: cannot open '" + path + "'");
    return read_mixture_params(in);
}

// --------------------------------------------------------------------------
// Collective-moments records: {"N": n, "Jx": .., "Jx2": .., ...}
// --------------------------------------------------------------------------

inline CollectiveMoments read_moments(std::istream& in) {
    const Json j = io_detail::parse(in, "moments file");
    CollectiveMoments m;
    m.n_parties = io_detail::field<int>(j, "N", "moments file");
    m.first = Eigen::Vector3d(io_detail::field<double>(j, "Jx", "moments file"),
                              io_detail::field<double>(j, "Jy", "moments file"),
                              io_detail::field<double>(j, "Jz", "moments file"));
    m.second = Eigen::Vector3d(io_detail::field<double>(j, "Jx2", "moments file"),
                               io_detail::field<double>(j, "Jy2", "moments file"),
                               io_detail::field<double>(j, "Jz2", "moments file"));
    m.validate();
    return m;
}

inline CollectiveMoments read_moments_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("moments file: cannot open '" + path + "'");
    return read_moments(in);
}

// --------------------------------------------------------------------------
// Correlator records: scenario block plus sparse entry map (missing = 0)
// --------------------------------------------------------------------------

inline BellScenario read_scenario(const Json& j) {
    BellScenario sc;
    sc.parties = io_detail::field<int>(j, "parties", "scenario");
    sc.settings = io_detail::field<int>(j, "settings", "scenario");
    sc.outcomes = j.contains("outcomes") ? io_detail::field<int>(j, "outcomes", "scenario") : 2;
    sc.validate();
    return sc;
}

inline CorrelatorVector read_correlators(std::istream& in) {
    const Json j = io_detail::parse(in, "correlator file");
    CorrelatorVector corr;
    corr.scenario = read_scenario(io_detail::field<Json>(j, "scenario", "correlator file"));
    corr.entries = Eigen::VectorXcd::Zero(corr.scenario.correlator_dim());
    const long base = 1 + static_cast<long>(corr.scenario.settings) * (corr.scenario.outcomes - 1);
    for (const Json& entry : io_detail::field<Json>(j, "entries", "correlator file")) {
        const auto index = io_detail::field<std::vector<int>>(entry, "index", "correlator entry");
        if (static_cast<int>(index.size()) != corr.scenario.parties)
            throw ValidationError("correlator entry: index must list one code per party");
        long flat = 0;
        for (int t : index) {
            if (t < 0 || t >= base)
                throw ValidationError("correlator entry: per-party code out of range");
            flat = flat * base + t;
        }
        if (flat == 0)
            throw ValidationError("correlator entry: the all-excluded index is not a correlator");
        const double re = io_detail::field<double>(entry, "value", "correlator entry");
        const double im = entry.contains("im") ? entry.at("im").get<double>() : 0.0;
        corr.entries(flat - 1) = std::complex<double>(re, im);
    }
    corr.validate_physical();
    return corr;
}

inline CorrelatorVector read_correlators_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("correlator file: cannot open '" + path + "'");
    return read_correlators(in);
}

// --------------------------------------------------------------------------
// Probability tables: all settings blocks required, outcomes row-major
// --------------------------------------------------------------------------

inline ProbabilityTable read_probability_table(std::istream& in) {
    const Json j = io_detail::parse(in, "probability file");
    ProbabilityTable table;
    table.scenario = read_scenario(io_detail::field<Json>(j, "scenario", "probability file"));
    table.probs = Eigen::MatrixXd::Constant(table.scenario.settings_combos(),
                                            table.scenario.outcome_combos(), -1.0);
    for (const Json& block : io_detail::field<Json>(j, "blocks", "probability file")) {
        const auto settings = io_detail::field<std::vector<int>>(block, "settings", "probability block");
        if (static_cast<int>(settings.size()) != table.scenario.parties)
            throw ValidationError("probability block: one setting per party required");
        long s = 0;
        for (int x : settings) {
            if (x < 0 || x >= table.scenario.settings)
                throw ValidationError("probability block: setting out of range");
            s = s * table.scenario.settings + x;
        }
        const auto probs = io_detail::field<std::vector<double>>(block, "probs", "probability block");
        if (static_cast<long>(probs.size()) != table.scenario.outcome_combos())
            throw ValidationError("probability block: need one probability per outcome combination");
        for (long o = 0; o < table.probs.cols(); ++o) table.probs(s, o) = probs[o];
    }
    if ((table.probs.array() < 0.0).any())
        throw ValidationError("probability file: a settings block is missing");
    table.validate();
    return table;
}

inline ProbabilityTable read_probability_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("probability file: cannot open '" + path + "'");
    return read_probability_table(in);
}

// --------------------------------------------------------------------------
// PI records and Gamma families
// --------------------------------------------------------------------------

inline PICorrelators read_pi(std::istream& in) {
    const Json j = io_detail::parse(in, "pi file");
    PICorrelators s;
    s.n_parties = io_detail::field<int>(j, "N", "pi file");
    s.s0 = io_detail::field<double>(j, "S0", "pi file");
    s.s1 = io_detail::field<double>(j, "S1", "pi file");
    s.s00 = io_detail::field<double>(j, "S00", "pi file");
    s.s01 = io_detail::field<double>(j, "S01", "pi file");
    s.s11 = io_detail::field<double>(j, "S11", "pi file");
    s.validate();
    return s;
}

inline PICorrelators read_pi_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("pi file: cannot open '" + path + "'");
    return read_pi(in);
}

inline GammaFamily read_gamma(std::istream& in) {
    const Json j = io_detail::parse(in, "gamma file");
    const Json& mats = io_detail::field<Json>(j, "matrices", "gamma file");
    if (!mats.is_array() || mats.empty())
        throw ValidationError("gamma file: 'matrices' must be a nonempty list");
    const long dim = static_cast<long>(mats.at(0).size());
    GammaFamily family;
    for (const Json& m : mats)
        family.matrices.push_back(io_detail::read_real_matrix(m, dim, "gamma matrix"));
    return family;
}

inline GammaFamily read_gamma_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("gamma file: cannot open '" + path + "'");
    return read_gamma(in);
}

// --------------------------------------------------------------------------
// Certificate serialization
// --------------------------------------------------------------------------

namespace io_detail {

inline Json finite_or_string(double x) {
    if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
    if (std::isnan(x)) return Json(nullptr);
    return Json(x);
}

}  // namespace io_detail

inline Json to_json(const DepthCertificate& cert) {
    Json j;
    j["verdict"] = verdict_name(cert.verdict);
    if (cert.verdict == Verdict::CertifiedDepthAtMost) j["depth_bound"] = cert.depth_bound;
    if (cert.verdict == Verdict::CertifiedBiseparableCut) j["cut"] = cert.cut.indices;
    j["criterion"] = cert.criterion;
    j["witness_min_eig"] = io_detail::finite_or_string(cert.witness_min_eig);
    Json params;
    for (const auto& [key, value] : cert.params) params[key] = io_detail::finite_or_string(value);
    j["params"] = std::move(params);
    if (!cert.note.empty()) j["note"] = cert.note;
    return j;
}

inline Json to_json(const CompatCertificate& cert) {
    Json j;
    j["certified"] = cert.certified;
    j["alpha_star"] = io_detail::finite_or_string(cert.alpha_star);
    j["beta_lower"] = cert.beta_lower;
    j["beta_lower_open"] = cert.beta_lower_open;
    j["criterion"] = cert.criterion;
    if (!cert.caveat.empty()) j["caveat"] = cert.caveat;
    return j;
}

inline Json to_json(const AlphaResult& r) {
    return Json{{"status", opt_status_name(r.status)},
                {"alpha", io_detail::finite_or_string(r.value_or_infinity())}};
}

inline Json to_json(const AlphaRange& r) {
    return Json{{"empty", r.empty_range},
                {"alpha_min", io_detail::finite_or_string(r.lo)},
                {"alpha_max", io_detail::finite_or_string(r.hi)}};
}

// --------------------------------------------------------------------------
// Certificate reports
// --------------------------------------------------------------------------

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

inline std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("digest: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return "fnv1a64:" + fnv1a64_hex(buf.str());
}

inline std::string iso_timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// A report is the payload (deterministic for fixed inputs) plus a timestamp.
struct CertificateReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    Json parameters;
    Json result;
    int exit_code = 0;

    Json to_json_with_timestamp() const {
        Json j;
        j["tool"] = tool_name;
        j["version"] = tool_version;
        j["command"] = command;
        Json ins = Json::array();
        for (const auto& [path, digest] : inputs)
            ins.push_back(Json{{"path", path}, {"digest", digest}});
        j["inputs"] = std::move(ins);
        j["parameters"] = parameters;
        j["result"] = result;
        j["exit_code"] = exit_code;
        j["timestamp"] = iso_timestamp_utc();
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ValidationError("report: cannot write '" + path + "'");
        out << to_json_with_timestamp().dump(2) << "\n";
    }
};

}  // namespace entcert
