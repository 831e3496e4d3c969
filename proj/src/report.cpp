#include "perov/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>

#include "perov/errors.hpp"

namespace perov::report {

std::string real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json reals(std::span<const double> xs) {
    Json out = Json::array();
    for (double x : xs) out.push_back(real(x));
    return out;
}

Json vec(const ConeVector& v) { return reals(v.entries()); }

Json matrix(const OperatorMatrix& a) {
    Json out = Json::array();
    for (const auto& row : a.rows()) out.push_back(reals(row));
    return out;
}

Json to_json(const SpectralRadius& r) {
    return {{"value", real(r.value)},           {"lower", real(r.lower)},
            {"upper", real(r.upper)},           {"converged", r.converged},
            {"iterations", r.iterations},       {"gelfand16", real(r.gelfand16)},
            {"gelfand32", real(r.gelfand32)},   {"gelfand64", real(r.gelfand64)}};
}

Json to_json(const ZeroConvergenceEvidence& ev) {
    return {{"power_decay", ev.power_decay},
            {"decay_exponent", ev.decay_exponent},
            {"eigenvalue_criterion", ev.eigenvalue_criterion},
            {"spectral_radius", to_json(ev.radius)},
            {"neumann_invertible", ev.neumann_invertible},
            {"inverse_nonnegative", ev.inverse_nonnegative},
            {"near_critical", ev.near_critical},
            {"criteria_agree", ev.criteria_agree},
            {"verdict", ev.verdict}};
}

Json to_json(const HypothesisCheck& h) {
    Json out = {{"effective_operator", matrix(h.effective)}, {"evidence", to_json(h.evidence)}};
    if (h.alternate_order_radius) out["alternate_order_radius"] = real(*h.alternate_order_radius);
    if (h.norm_sum) out["norm_sum"] = real(*h.norm_sum);
    if (h.scaled_norm_sum_below_one) out["scaled_norm_sum_below_one"] = *h.scaled_norm_sum_below_one;
    return out;
}

Json to_json(const AxiomReport& r) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) w.push_back({{"points", reals(x.points)}, {"lhs", vec(x.lhs)}, {"rhs", vec(x.rhs)}});
    Json out = {{"axiom", std::string(axiom_name(r.id))},
                {"verdict", std::string(verdict_name(r.verdict))},
                {"checked", r.checked},
                {"violations", r.violations},
                {"witnesses", w}};
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

Json to_json(const ContractionReport& r) {
    Json v = Json::array();
    for (const auto& x : r.violations) {
        v.push_back({{"x1", real(x.x1)}, {"x2", real(x.x2)}, {"lhs", vec(x.lhs)}, {"rhs", vec(x.best_rhs)}});
    }
    Json out = {{"variant", r.thr2 ? "THR2" : "THR1"},
                {"pairs", r.pairs},
                {"violation_count", r.violation_count},
                {"violations", v},
                {"verdict", r.pass ? "pass" : "fail"}};
    if (!r.thr2) {
        Json m = Json::object();
        for (std::size_t k = 0; k < 3; ++k) m[std::string(ut_member_name(static_cast<UtMember>(k)))] = r.member_counts[k];
        out["certifying_members"] = m;
    }
    return out;
}

Json to_json(const SolveReport& r) {
    Json probe = Json::array();
    for (const auto& e : r.probe) {
        probe.push_back({{"start", real(e.start)},
                         {"limit", real(e.limit)},
                         {"iterations", e.iterations},
                         {"stop", std::string(stop_reason_name(e.reason))}});
    }
    return {{"status", std::string(solve_status_name(r.status))},
            {"fixed_point", real(r.fixed_point)},
            {"iterations", r.iterations},
            {"stop", std::string(stop_reason_name(r.reason))},
            {"final_step_distance", vec(r.final_step_distance)},
            {"residual", vec(r.residual)},
            {"tail_bound", vec(r.tail_bound)},
            {"fixed_point_gap", real(r.fixed_point_gap)},
            {"residual_within_tolerance", r.residual_within_tolerance},
            {"cauchy_certified", r.cauchy_certified},
            {"uniqueness_probe", probe},
            {"hypothesis", to_json(r.hypothesis)}};
}

Json to_json(const SamplingConfig& c) { return {{"grid", c.grid}, {"random", c.random}, {"seed", c.seed}}; }

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::vector<DiscrepancyNote> discrepancy_notes(std::string_view example_id) {
    if (example_id == "2.4") {
        return {{"2.4-norm",
                 "The stated operator norm of A is 3/10, but the largest row sum of A is 4/10. "
                 "The computed value 0.4 is used; b||A|| = 0.8 < 1 and r(2A) < 1 hold either way."}};
    }
    if (example_id == "2.8") {
        return {{"2.8-norm",
                 "An intermediate line states ||A1 x|| = 11/13 ||x||, while the stated conclusion is "
                 "||A1|| = 11/30. The largest row sum of A1 is 11/30, which is used."}};
    }
    if (example_id == "2.2") {
        return {{"2.2-gamma",
                 "gamma is not defined for this example. It is taken as the smaller of "
                 "(a11 + eta a12)^(1/p) and ((a21 + eta a22)/eta)^(1/p), the bounds implied by "
                 "beta^p <= a11 + eta a12 and eta beta^p <= a21 + eta a22."}};
    }
    return {};
}

Json RunReport::body() const {
    Json notes_json = Json::array();
    for (const auto& n : notes) notes_json.push_back({{"id", n.id}, {"text", n.text}});
    return {{"schema", std::string(kSchemaVersion)},
            {"command", command},
            {"options", options},
            {"input_digest", input_digest},
            {"seed", sampling.seed},
            {"sampling", to_json(sampling)},
            {"verdict", verdict},
            {"payload", payload},
            {"discrepancies", notes_json}};
}

std::string RunReport::body_text() const { return body().dump(2); }

Json RunReport::document() const {
    Json doc = body();
    doc["body_sha256"] = sha256_hex(body_text());
    doc["meta"] = {{"wall_time_seconds", real(wall_time_seconds)}};
    return doc;
}

namespace {

std::string pair_text(const ConeVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + real(v[i]);
    return s + ")";
}

bool all_pass(const std::vector<AxiomReport>& rs) {
    for (const auto& r : rs)
        if (r.verdict == Verdict::Fail) return false;
    return true;
}

}  // namespace

Json Reproduction::payload() const {
    Json table = Json::array();
    for (const auto& r : rows) {
        table.push_back({{"quantity", r.quantity},
                         {"stated", r.stated},
                         {"computed", r.computed},
                         {"agrees", r.agrees},
                         {"asserted", r.asserted}});
    }
    Json bm = Json::array(), cd = Json::array();
    for (const auto& r : b_metric) bm.push_back(to_json(r));
    for (const auto& r : c_distance) cd.push_back(to_json(r));
    return {{"example", id},
            {"table", table},
            {"b_metric_axioms", bm},
            {"c_distance_axioms", cd},
            {"contraction", to_json(contraction)},
            {"hypothesis", to_json(hypothesis)},
            {"solve", to_json(solve)}};
}

Reproduction reproduce_example(std::string_view id, const SamplingConfig& sampling, const StopConfig& stop) {
    const ProblemInstance p = builtin_example(id);
    Reproduction rep;
    rep.id = std::string(id);

    const auto extra = p.f.exception_points();
    const SampleSet samples = make_samples(p.domain, sampling, extra);
    rep.b_metric = verify_b_metric_axioms(p.d, samples, p.order);
    rep.c_distance = verify_c_distance_axioms(p.q, p.d.b, samples, default_sequences(p.domain),
                                              Q4Probe{p.d, default_e_stars(), std::nullopt, std::nullopt}, p.order);
    rep.contraction = check_contraction(p, samples);
    rep.hypothesis = validate_hypothesis(p);
    SolveConfig sc;
    sc.stop = stop;
    sc.seed = sampling.seed;
    rep.solve = solve(p, sc);

    const double b = p.d.b;
    auto& rows = rep.rows;
    const bool space_ok = all_pass(rep.b_metric) && all_pass(rep.c_distance);
    rows.push_back({"cone b-metric and c-distance axioms", "hold", space_ok ? "pass" : "fail", space_ok, true});
    rows.push_back({"contraction inequality on samples", "holds", rep.contraction.pass ? "pass" : "fail",
                    rep.contraction.pass, true});

    const double r_eff = rep.hypothesis.evidence.radius.value;
    if (id == "2.4") {
        const double nrm = operator_norm_inf(std::get<Thr1>(p.hypothesis).a);
        rows.push_back({"||A||", "3/10", real(nrm), std::abs(nrm - 0.3) <= 1e-12, false});
        rows.push_back({"b ||A|| < 1", "true", real(b * nrm), b * nrm < 1.0, true});
        rows.push_back({"r(bA) < 1", "true", real(r_eff), rep.hypothesis.evidence.verdict, true});
    } else if (id == "2.8") {
        const auto& h = std::get<Thr2>(p.hypothesis);
        const double n1 = operator_norm_inf(h.a1), n2 = operator_norm_inf(h.a2), n3 = operator_norm_inf(h.a3);
        rows.push_back({"||A1||", "11/30", real(n1), std::abs(n1 - 11.0 / 30.0) <= 1e-12, true});
        rows.push_back({"||A2||", "1/7", real(n2), std::abs(n2 - 1.0 / 7.0) <= 1e-12, true});
        rows.push_back({"||A3||", "2/9", real(n3), std::abs(n3 - 2.0 / 9.0) <= 1e-12, true});
        const double sum = n1 + n2 + n3;
        rows.push_back({"||A1|| + ||A2|| + ||A3|| < 1", "0.7317", real(sum), std::abs(sum - 0.7317) <= 1e-4, true});
        rows.push_back({"r(b (I - A3)^-1 (A1 + A2)) < 1", "true", real(r_eff), rep.hypothesis.evidence.verdict, true});
        const double alt = rep.hypothesis.alternate_order_radius.value_or(0.0);
        rows.push_back({"r(b (A1 + A2)(I - A3)^-1)", "-", real(alt), alt < 1.0, false});
        rows.push_back({"b (||A1|| + ||A2|| + ||A3||)", "-", real(b * sum), b * sum < 1.0, false});
    } else if (id == "2.2") {
        const auto c = example_22_constants();
        rows.push_back({"beta^p <= a11 + eta a12", "holds", real(c.row1_lhs) + " <= " + real(c.row1_rhs),
                        c.row1_lhs <= c.row1_rhs, true});
        rows.push_back({"eta beta^p <= a21 + eta a22", "holds", real(c.row2_lhs) + " <= " + real(c.row2_rhs),
                        c.row2_lhs <= c.row2_rhs, true});
        rows.push_back({"gamma", "undefined", real(c.gamma), true, false});
        rows.push_back({"beta in (0, gamma)", "true", real(c.beta), c.beta > 0.0 && c.beta < c.gamma, true});
        rows.push_back({"r(bA) < 1", "true", real(r_eff), rep.hypothesis.evidence.verdict, true});
    }
    const double u = rep.solve.fixed_point;
    rows.push_back({"fixed point u*", "0", real(u), std::abs(u) <= 1e-10, true});
    rows.push_back({"q(Tu*, Tu*)", "(0, 0)", pair_text(rep.solve.residual), rep.solve.residual.max_component() <= 1e-12,
                    true});
    rows.push_back({"uniqueness probe starts", "-", std::to_string(rep.solve.probe.size()),
                    rep.solve.status == SolveStatus::Converged, true});

    rep.pass = true;
    for (const auto& r : rows)
        if (r.asserted && !r.agrees) rep.pass = false;
    return rep;
}

}  // namespace perov::report
