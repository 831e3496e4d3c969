#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perov/cone.hpp"
#include "perov/sampling.hpp"

namespace perov {

/// Power-type cone b-metric d(x, y) = (|x - y|^p, alpha |x - y|^p) on R^2.
///
/// The family satisfies the relaxed triangle inequality for b >= 2^{p-1}.
/// Smaller b >= 1 is accepted so the axiom suite can exhibit the failure.
struct BMetricSpec {
    double p = 2.0;
    double alpha = 1.0;
    double b = 2.0;

    /// Throws InvalidArgument unless p >= 1, alpha >= 1, b >= 1 (all finite).
    void validate() const;
    /// 2^{p-1}, the sufficient relaxation constant for this family.
    double sufficient_b() const;
    bool operator==(const BMetricSpec&) const = default;
};

/// Generalized c-distance q(x, y) = (psi(y), eta psi(y)) with psi(t) = a |t|^p.
/// Independent of its first argument.
struct CDistanceSpec {
    double p = 2.0;
    double a = 1.0;
    double eta = 1.0;

    /// Throws InvalidArgument unless p > 1, a > 0, eta >= 1 (all finite).
    void validate() const;
    bool operator==(const CDistanceSpec&) const = default;
};

ConeVector d_eval(const BMetricSpec& spec, double x, double y);
ConeVector q_eval(const CDistanceSpec& spec, double x, double y);

enum class AxiomId { B1, B2, B3, Q1, Q2, Q3, Q4 };
enum class Verdict { Pass, Fail, Skipped };

std::string_view axiom_name(AxiomId id);
std::string_view verdict_name(Verdict v);

/// A sampled tuple on which an axiom's inequality failed, with both sides.
struct AxiomWitness {
    std::vector<double> points;
    ConeVector lhs;
    ConeVector rhs;
};

struct AxiomReport {
    static constexpr std::size_t kMaxWitnesses = 16;

    AxiomId id;
    Verdict verdict = Verdict::Skipped;
    /// Number of sampled instances the inequality was evaluated on.
    std::size_t checked = 0;
    std::size_t violations = 0;
    /// Lexicographically smallest violating tuples, at most kMaxWitnesses.
    std::vector<AxiomWitness> witnesses;
    std::string note;
};

/// b1 (nonnegativity, identity of indiscernibles), b2 (exact symmetry) and b3
/// in the form d(u1, u3) ⪯ b [d(u1, u2) + d(u2, u3)] over all sampled triples.
std::vector<AxiomReport> verify_b_metric_axioms(const BMetricSpec& spec, const SampleSet& samples,
                                                const ConeOrderConfig& order = {});

/// A finite prefix of a sequence together with its declared limit.
struct ConvergentSequence {
    std::vector<double> terms;
    std::optional<double> limit;
};

/// lo + w/n -> lo and an alternating sequence -> midpoint. A prefix that
/// increases toward its limit is avoided: its supremum misses the limit value
/// and the finite check would fail for b = 1 although the axiom holds.
std::vector<ConvergentSequence> default_sequences(const Interval& domain, std::size_t depth = 64);

/// Parameters of the constructive q4 check.
struct Q4Probe {
    BMetricSpec d;
    std::vector<ConeVector> e_stars;
    /// Constants of the witness formula; default to the scale a of psi.
    std::optional<double> k1;
    std::optional<double> k2;
};

/// Interior points e* used when no list is supplied.
std::vector<ConeVector> default_e_stars();

/// q1 on all pairs, q2 on all triples, q3 on the supplied sequences (checked
/// to the supplied depth with e the componentwise supremum of the prefix), and
/// q4 through q4_witness when `q4` is given (Skipped otherwise).
/// Throws InvalidArgument for a sequence without a declared limit.
std::vector<AxiomReport> verify_c_distance_axioms(const CDistanceSpec& spec, double b, const SampleSet& samples,
                                                  const std::vector<ConvergentSequence>& sequences,
                                                  const std::optional<Q4Probe>& q4 = std::nullopt,
                                                  const ConeOrderConfig& order = {});

/// e = (e*_1 / (2^{p-1}(k1 + k2)), eta e*_2 / (2^{p-1} alpha (k1 + k2))).
/// Throws InvalidArgument when e* is not interior or k1 + k2 <= 0.
ConeVector q4_witness(const CDistanceSpec& spec, double alpha, double p, const ConeVector& e_star, double k1,
                      double k2);

/// Supremum over sampled triples and components of d(x,z)_i / (d(x,y)_i + d(y,z)_i),
/// skipping zero denominators. Throws InvalidArgument with fewer than three points.
double estimate_b_constant(const BMetricSpec& spec, const SampleSet& samples);

}  // namespace perov
