#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perov/cone_space.hpp"
#include "perov/engine.hpp"
#include "perov/problem.hpp"
#include "perov/spectral.hpp"

namespace perov::report {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSchemaVersion = "1";

/// Shortest decimal string that round-trips to `x`.
std::string real(double x);
Json reals(std::span<const double> xs);
Json vec(const ConeVector& v);
Json matrix(const OperatorMatrix& a);

Json to_json(const SpectralRadius& r);
Json to_json(const ZeroConvergenceEvidence& ev);
Json to_json(const HypothesisCheck& h);
Json to_json(const AxiomReport& r);
Json to_json(const ContractionReport& r);
Json to_json(const SolveReport& r);
Json to_json(const SamplingConfig& c);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct DiscrepancyNote {
    std::string id;
    std::string text;
};

/// Fixed notes attached whenever a run touches the corresponding example.
std::vector<DiscrepancyNote> discrepancy_notes(std::string_view example_id);

struct RunReport {
    std::string command;
    /// Normalized options of the invocation.
    Json options = Json::object();
    std::string input_digest;
    SamplingConfig sampling;
    std::string verdict;
    Json payload = Json::object();
    std::vector<DiscrepancyNote> notes;
    double wall_time_seconds = 0.0;

    /// Everything except timing; a pure function of inputs and seed.
    Json body() const;
    std::string body_text() const;
    /// body plus "body_sha256" and "meta" (wall time).
    Json document() const;
};

/// One line of the stated-versus-computed table of a reproduction run.
struct ReproRow {
    std::string quantity;
    std::string stated;
    std::string computed;
    bool agrees = true;
    /// Rows that are only reported do not affect the verdict.
    bool asserted = true;
};

struct Reproduction {
    std::string id;
    std::vector<ReproRow> rows;
    std::vector<AxiomReport> b_metric;
    std::vector<AxiomReport> c_distance;
    ContractionReport contraction;
    HypothesisCheck hypothesis;
    SolveReport solve;
    bool pass = false;
    Json payload() const;
};

/// Space verification, contraction verification, hypothesis evidence and a
/// solve for a built-in example, compared against the stated values.
Reproduction reproduce_example(std::string_view id, const SamplingConfig& sampling = {},
                               const StopConfig& stop = {});

}  // namespace perov::report
