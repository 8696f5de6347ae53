#include "doctest.h"

#include <sstream>

#include "entcert/io.hpp"
#include "test_support.hpp"

using namespace entcert;
namespace ts = test_support;

TEST_CASE("operator files round-trip and reject mismatches") {
    const SystemShape shape = SystemShape::qubits(3);
    std::mt19937_64 gen(91);
    Eigen::MatrixXcd m = ts::random_density(8, gen);
    const HermitianOperator op{shape, m};

    std::stringstream buf;
    buf << operator_to_json(op).dump();
    const HermitianOperator back = read_operator(buf);
    CHECK(back.shape == shape);
    CHECK((back.mat - op.mat).norm() < 1e-15);

    SUBCASE("dimension mismatch is rejected") {
        Json bad = operator_to_json(op);
        bad["shape"]["local_dims"] = std::vector<int>{2, 2};
        std::stringstream in(bad.dump());
        CHECK_THROWS_AS(read_operator(in), ValidationError);
    }
    SUBCASE("non-Hermitian entries are rejected") {
        Json bad = operator_to_json(op);
        bad["re"][0][1] = bad["re"][0][1].get<double>() + 1.0;
        std::stringstream in(bad.dump());
        CHECK_THROWS_AS(read_operator(in), ValidationError);
    }
    SUBCASE("missing fields are rejected") {
        std::stringstream in(R"({"re": [[1]]})");
        CHECK_THROWS_AS(read_operator(in), ValidationError);
    }
}

TEST_CASE("map files round-trip") {
    MapSpec map = MapSpec::two_param(2.0, 0.5, 1);
    std::stringstream buf;
    buf << map_spec_to_json(map).dump();
    const MapSpec back = read_map_spec(buf);
    REQUIRE(back.terms.size() == map.terms.size());
    for (size_t i = 0; i < map.terms.size(); ++i) {
        CHECK(back.terms[i].coeff == map.terms[i].coeff);
        CHECK(back.terms[i].kind == map.terms[i].kind);
        CHECK(back.terms[i].subset == map.terms[i].subset);
    }

    std::stringstream bad(R"({"terms": [{"coeff": 1.0, "kind": "mystery"}]})");
    CHECK_THROWS_AS(read_map_spec(bad), ValidationError);
}

TEST_CASE("diagonal-state files") {
    std::stringstream in(R"({"N": 3, "d": 2, "p": [0.25, 0.25, 0.25, 0.25]})");
    const DiagonalSymmetricState s = read_ds_state(in);
    CHECK(s.n_parties == 3);
    CHECK(s.weights.sum() == doctest::Approx(1.0));

    std::stringstream bad(R"({"N": 3, "d": 2, "p": [0.5, 0.5]})");
    CHECK_THROWS_AS(read_ds_state(bad), ValidationError);
}

TEST_CASE("moments files") {
    std::stringstream in(
        R"({"N": 4, "Jx": 0, "Jy": 0, "Jz": 0, "Jx2": 3.0, "Jy2": 3.0, "Jz2": 0.0})");
    const CollectiveMoments m = read_moments(in);
    CHECK(m.n_parties == 4);
    CHECK(m.unpolarized());

    std::stringstream bad(R"({"N": 4, "Jx": 0, "Jy": 0, "Jz": 0, "Jx2": 3.0, "Jy2": 3.0})");
    CHECK_THROWS_AS(read_moments(bad), ValidationError);
}

TEST_CASE("correlator files") {
    const char* doc = R"({
        "scenario": {"parties": 2, "settings": 2, "outcomes": 2},
        "entries": [
            {"index": [1, 1], "value": 0.7071067811865476},
            {"index": [1, 2], "value": 0.7071067811865476},
            {"index": [2, 1], "value": 0.7071067811865476},
            {"index": [2, 2], "value": -0.7071067811865476}
        ]})";
    std::stringstream in(doc);
    const CorrelatorVector corr = read_correlators(in);
    CHECK(corr.entries(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(corr.entries(0).real() == 0.0);  // marginals default to zero

    SUBCASE("out-of-range code is rejected") {
        std::stringstream bad(
            R"({"scenario": {"parties": 2, "settings": 2}, "entries": [{"index": [3, 0], "value": 1}]})");
        CHECK_THROWS_AS(read_correlators(bad), ValidationError);
    }
    SUBCASE("all-excluded index is rejected") {
        std::stringstream bad(
            R"({"scenario": {"parties": 2, "settings": 2}, "entries": [{"index": [0, 0], "value": 1}]})");
        CHECK_THROWS_AS(read_correlators(bad), ValidationError);
    }
    SUBCASE("binary correlators above 1 are rejected") {
        std::stringstream bad(
            R"({"scenario": {"parties": 2, "settings": 2}, "entries": [{"index": [1, 1], "value": 1.5}]})");
        CHECK_THROWS_AS(read_correlators(bad), ValidationError);
    }
}

TEST_CASE("probability-table files") {
    const char* doc = R"({
        "scenario": {"parties": 1, "settings": 2, "outcomes": 2},
        "blocks": [
            {"settings": [0], "probs": [0.5, 0.5]},
            {"settings": [1], "probs": [1.0, 0.0]}
        ]})";
    std::stringstream in(doc);
    const ProbabilityTable table = read_probability_table(in);
    CHECK(table.probs(1, 0) == 1.0);

    SUBCASE("a missing block is rejected") {
        std::stringstream bad(R"({
            "scenario": {"parties": 1, "settings": 2, "outcomes": 2},
            "blocks": [{"settings": [0], "probs": [0.5, 0.5]}]})");
        CHECK_THROWS_AS(read_probability_table(bad), ValidationError);
    }
    SUBCASE("non-normalized blocks are rejected") {
        std::stringstream bad(R"({
            "scenario": {"parties": 1, "settings": 1, "outcomes": 2},
            "blocks": [{"settings": [0], "probs": [0.5, 0.4]}]})");
        CHECK_THROWS_AS(read_probability_table(bad), ValidationError);
    }
}

TEST_CASE("pi and gamma files") {
    std::stringstream pi_in(R"({"N": 3, "S0": 3, "S1": 3, "S00": 6, "S01": 6, "S11": 6})");
    const PICorrelators s = read_pi(pi_in);
    CHECK(s.s00 == 6.0);

    std::stringstream gamma_in(R"({"matrices": [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]})");
    const GammaFamily family = read_gamma(gamma_in);
    REQUIRE(family.matrices.size() == 2);
    CHECK(family.matrices[1](1, 1) == -1.0);
    CHECK_NOTHROW(family.validate(1));
}

TEST_CASE("certificate serialization") {
    DepthCertificate cert;
    cert.verdict = Verdict::CertifiedBiseparableCut;
    cert.cut = PartySubset{0};
    cert.criterion = "two-param-inverse";
    cert.params = {{"alpha", 2.0}, {"beta", 0.5}};
    cert.witness_min_eig = 0.01;
    const Json j = to_json(cert);
    CHECK(j["verdict"] == "certified-biseparable-cut");
    CHECK(j["cut"][0] == 0);
    CHECK(j["params"]["alpha"] == 2.0);

    const Json r = to_json(AlphaRange{-0.75, 1.0, false});
    CHECK(r["alpha_min"] == -0.75);
    const Json unbounded = to_json(AlphaResult{OptStatus::Unbounded, 0.0});
    CHECK(unbounded["alpha"] == "inf");
}

TEST_CASE("digests and report payloads are deterministic") {
    CHECK(fnv1a64_hex("entcert") == fnv1a64_hex("entcert"));
    CHECK(fnv1a64_hex("entcert") != fnv1a64_hex("entcerd"));

    CertificateReport report;
    report.command = "depth";
    report.inputs = {{"state.json", "fnv1a64:00"}};
    report.parameters = Json{{"n", 1}};
    report.result = Json{{"verdict", "inconclusive"}};
    report.exit_code = 2;
    Json a = report.to_json_with_timestamp();
    Json b = report.to_json_with_timestamp();
    a.erase("timestamp");
    b.erase("timestamp");
    CHECK(a.dump() == b.dump());
}
