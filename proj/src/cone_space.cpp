#include "perov/cone_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "perov/errors.hpp"
#include "perov/kernels.hpp"

namespace perov {

namespace {

std::string shortest(double x) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
}

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

/// Both components of a two-dimensional distance over all sampled pairs,
/// row-major: value(i, j) = dist(points[i], points[j]).
struct PairTable {
    std::size_t n = 0;
    std::vector<double> first;
    std::vector<double> second;

    std::span<const double> row(int component, std::size_t i) const {
        const auto& v = component == 0 ? first : second;
        return {v.data() + i * n, n};
    }
    double at(int component, std::size_t i, std::size_t j) const {
        return (component == 0 ? first : second)[i * n + j];
    }
    ConeVector vec(std::size_t i, std::size_t j) const { return ConeVector{first[i * n + j], second[i * n + j]}; }
};

template <typename Dist>
PairTable tabulate(const std::vector<double>& points, Dist dist) {
    PairTable t;
    t.n = points.size();
    t.first.resize(t.n * t.n);
    t.second.resize(t.n * t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        for (std::size_t j = 0; j < t.n; ++j) {
            const ConeVector v = dist(points[i], points[j]);
            t.first[i * t.n + j] = v[0];
            t.second[i * t.n + j] = v[1];
        }
    }
    return t;
}

void add_witness(AxiomReport& report, std::vector<double> points, ConeVector lhs, ConeVector rhs) {
    ++report.violations;
    if (report.witnesses.size() < AxiomReport::kMaxWitnesses) {
        report.witnesses.push_back(AxiomWitness{std::move(points), std::move(lhs), std::move(rhs)});
    }
}

void finish(AxiomReport& report) { report.verdict = report.violations == 0 ? Verdict::Pass : Verdict::Fail; }

/// Relaxed triangle scan: table(i, k) ⪯ scale (table(i, j) + table(j, k)) for all i, j, k.
/// Loop order (i, j, k) over sorted points makes the recorded witnesses the
/// lexicographically smallest violating triples.
AxiomReport scan_relaxed_triangle(AxiomId id, const PairTable& t, const std::vector<double>& points, double scale,
                                  double eps) {
    AxiomReport report;
    report.id = id;
    const std::size_t n = t.n;
    std::vector<std::uint32_t> hits0(n), hits1(n), merged;
    merged.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t c0 = kernels::count_dominance_violations(t.row(0, i), t.at(0, i, j), t.row(0, j), scale,
                                                                       eps, hits0);
            const std::size_t c1 = kernels::count_dominance_violations(t.row(1, i), t.at(1, i, j), t.row(1, j), scale,
                                                                       eps, hits1);
            if (c0 == 0 && c1 == 0) continue;
            merged.clear();
            std::set_union(hits0.begin(), hits0.begin() + static_cast<std::ptrdiff_t>(c0), hits1.begin(),
                           hits1.begin() + static_cast<std::ptrdiff_t>(c1), std::back_inserter(merged));
            for (std::uint32_t k : merged) {
                ConeVector rhs = scale * (t.vec(i, j) + t.vec(j, k));
                add_witness(report, {points[i], points[j], points[k]}, t.vec(i, k), std::move(rhs));
            }
        }
    }
    report.checked = n * n * n;
    finish(report);
    return report;
}

}  // namespace

void BMetricSpec::validate() const {
    if (!finite_all({p, alpha, b})) throw InvalidArgument("b-metric parameters must be finite");
    if (p < 1.0) throw InvalidArgument("b-metric exponent p must be >= 1");
    if (alpha < 1.0) throw InvalidArgument("b-metric weight alpha must be >= 1");
    if (b < 1.0) throw InvalidArgument("b-metric constant b must be >= 1");
}

double BMetricSpec::sufficient_b() const { return std::pow(2.0, p - 1.0); }

void CDistanceSpec::validate() const {
    if (!finite_all({p, a, eta})) throw InvalidArgument("c-distance parameters must be finite");
    if (p <= 1.0) throw InvalidArgument("c-distance exponent p must be > 1");
    if (a <= 0.0) throw InvalidArgument("c-distance scale a must be > 0");
    if (eta < 1.0) throw InvalidArgument("c-distance weight eta must be >= 1");
}

ConeVector d_eval(const BMetricSpec& spec, double x, double y) {
    const double base = std::pow(std::abs(x - y), spec.p);
    return ConeVector{base, spec.alpha * base};
}

ConeVector q_eval(const CDistanceSpec& spec, double /*x*/, double y) {
    const double psi = spec.a * std::pow(std::abs(y), spec.p);
    return ConeVector{psi, spec.eta * psi};
}

std::string_view axiom_name(AxiomId id) {
    switch (id) {
        case AxiomId::B1: return "b1";
        case AxiomId::B2: return "b2";
        case AxiomId::B3: return "b3";
        case AxiomId::Q1: return "q1";
        case AxiomId::Q2: return "q2";
        case AxiomId::Q3: return "q3";
        case AxiomId::Q4: return "q4";
    }
    return "?";
}

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Skipped: return "skipped";
    }
    return "?";
}

std::vector<AxiomReport> verify_b_metric_axioms(const BMetricSpec& spec, const SampleSet& samples,
                                                const ConeOrderConfig& order) {
    spec.validate();
    const auto& pts = samples.points;
    const std::size_t n = pts.size();
    const PairTable d = tabulate(pts, [&](double x, double y) { return d_eval(spec, x, y); });
    const ConeVector theta = ConeVector::zero(2);

    AxiomReport b1;
    b1.id = AxiomId::B1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const ConeVector v = d.vec(i, j);
            const bool identity_ok = (i == j) ? v.is_zero() : !v.is_zero();
            if (!cone_leq(theta, v, ConeOrderConfig::exact()) || !identity_ok) {
                add_witness(b1, {pts[i], pts[j]}, theta, v);
            }
        }
    }
    b1.checked = n * n;
    finish(b1);

    AxiomReport b2;
    b2.id = AxiomId::B2;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(d.vec(i, j) == d.vec(j, i))) add_witness(b2, {pts[i], pts[j]}, d.vec(i, j), d.vec(j, i));
        }
    }
    b2.checked = n * (n - (n > 0 ? 1 : 0)) / 2;
    finish(b2);

    AxiomReport b3 = scan_relaxed_triangle(AxiomId::B3, d, pts, spec.b, order.epsilon);
    if (spec.b < spec.sufficient_b()) {
        b3.note = "b = " + shortest(spec.b) + " is below the sufficient constant 2^(p-1) = " +
                  shortest(spec.sufficient_b());
    }
    return {std::move(b1), std::move(b2), std::move(b3)};
}

std::vector<ConvergentSequence> default_sequences(const Interval& domain, std::size_t depth) {
    const double w = domain.hi - domain.lo;
    const double mid = domain.lo + 0.5 * w;
    std::vector<ConvergentSequence> out(2);
    for (std::size_t k = 1; k <= depth; ++k) {
        const double n = static_cast<double>(k);
        out[0].terms.push_back(domain.lo + w / n);
        out[1].terms.push_back(mid + ((k % 2 == 0) ? 1.0 : -1.0) * w / (2.0 * (n + 1.0)));
    }
    out[0].limit = domain.lo;
    out[1].limit = mid;
    return out;
}

std::vector<ConeVector> default_e_stars() {
    return {ConeVector{1.0, 1.0}, ConeVector{0.25, 0.5}, ConeVector{4.0, 4.0}, ConeVector{0.01, 0.01}};
}

ConeVector q4_witness(const CDistanceSpec& spec, double alpha, double p, const ConeVector& e_star, double k1,
                      double k2) {
    if (e_star.size() != 2) throw DimensionMismatch("q4 witness needs a two-dimensional e*");
    if (!(e_star[0] > 0.0 && e_star[1] > 0.0)) throw InvalidArgument("e* lies on the boundary of the cone");
    if (!(k1 + k2 > 0.0)) throw InvalidArgument("q4 witness needs k1 + k2 > 0");
    const double denom = std::pow(2.0, p - 1.0) * (k1 + k2);
    return ConeVector{e_star[0] / denom, spec.eta * e_star[1] / (denom * alpha)};
}

std::vector<AxiomReport> verify_c_distance_axioms(const CDistanceSpec& spec, double b, const SampleSet& samples,
                                                  const std::vector<ConvergentSequence>& sequences,
                                                  const std::optional<Q4Probe>& q4, const ConeOrderConfig& order) {
    spec.validate();
    for (std::size_t s = 0; s < sequences.size(); ++s) {
        if (!sequences[s].limit) {
            throw InvalidArgument("sequence " + std::to_string(s) + " has no declared limit");
        }
    }
    const auto& pts = samples.points;
    const std::size_t n = pts.size();
    const PairTable q = tabulate(pts, [&](double x, double y) { return q_eval(spec, x, y); });
    const ConeVector theta = ConeVector::zero(2);

    AxiomReport q1;
    q1.id = AxiomId::Q1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!cone_leq(theta, q.vec(i, j), ConeOrderConfig::exact())) add_witness(q1, {pts[i], pts[j]}, theta, q.vec(i, j));
    q1.checked = n * n;
    finish(q1);

    AxiomReport q2 = scan_relaxed_triangle(AxiomId::Q2, q, pts, b, order.epsilon);

    AxiomReport q3;
    q3.id = AxiomId::Q3;
    std::size_t depth = 0;
    for (const auto& seq : sequences) {
        depth = std::max(depth, seq.terms.size());
        for (double u : pts) {
            // Smallest e in P with q(u, v_n) ⪯ e for every checked n.
            double e0 = 0.0, e1 = 0.0;
            for (double v : seq.terms) {
                const ConeVector qv = q_eval(spec, u, v);
                e0 = std::max(e0, qv[0]);
                e1 = std::max(e1, qv[1]);
            }
            const ConeVector lhs = q_eval(spec, u, *seq.limit);
            const ConeVector rhs = b * ConeVector{e0, e1};
            if (!cone_leq(lhs, rhs, order)) add_witness(q3, {u, *seq.limit}, lhs, rhs);
            ++q3.checked;
        }
    }
    finish(q3);
    q3.note = "checked to depth " + std::to_string(depth) + " on " + std::to_string(sequences.size()) + " sequences";
    if (sequences.empty()) q3.verdict = Verdict::Skipped;

    AxiomReport q4r;
    q4r.id = AxiomId::Q4;
    if (!q4) {
        q4r.note = "no q4 probe supplied";
    } else {
        const BMetricSpec& dspec = q4->d;
        dspec.validate();
        const double k1 = q4->k1.value_or(spec.a);
        const double k2 = q4->k2.value_or(spec.a);
        const PairTable d = tabulate(pts, [&](double x, double y) { return d_eval(dspec, x, y); });
        std::vector<std::size_t> inside;
        for (const ConeVector& e_star : q4->e_stars) {
            const ConeVector e = q4_witness(spec, dspec.alpha, dspec.p, e_star, k1, k2);
            for (std::size_t k = 0; k < n; ++k) {
                inside.clear();
                // q(u3, u1) ≪ e, componentwise strict.
                for (std::size_t i = 0; i < n; ++i)
                    if (e[0] - q.at(0, k, i) > 0.0 && e[1] - q.at(1, k, i) > 0.0) inside.push_back(i);
                for (std::size_t i : inside) {
                    for (std::size_t j : inside) {
                        ++q4r.checked;
                        if (!(e_star[0] - d.at(0, i, j) > 0.0 && e_star[1] - d.at(1, i, j) > 0.0)) {
                            add_witness(q4r, {pts[i], pts[j], pts[k]}, d.vec(i, j), e_star);
                        }
                    }
                }
            }
        }
        finish(q4r);
        q4r.note = "k1 = " + shortest(k1) + ", k2 = " + shortest(k2) + ", " +
                   std::to_string(q4->e_stars.size()) + " interior e*";
    }
    return {std::move(q1), std::move(q2), std::move(q3), std::move(q4r)};
}

double estimate_b_constant(const BMetricSpec& spec, const SampleSet& samples) {
    spec.validate();
    const auto& pts = samples.points;
    if (pts.size() < 3) throw InvalidArgument("estimate_b_constant needs at least three distinct points");
    const PairTable d = tabulate(pts, [&](double x, double y) { return d_eval(spec, x, y); });
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < d.n; ++i)
            for (std::size_t j = 0; j < d.n; ++j)
                best = std::max(best, kernels::max_ratio(d.row(c, i), d.at(c, i, j), d.row(c, j)));
    if (!std::isfinite(best)) throw InvalidArgument("no sampled triple has a positive denominator");
    return best;
}

}  // namespace perov
