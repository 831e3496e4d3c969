// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "perov/cli.hpp"
#include "perov/cone_space.hpp"
#include "perov/engine.hpp"
#include "perov/problem.hpp"
#include "perov/report.hpp"
#include "perov/spectral.hpp"

using namespace perov;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

/// Independent spectral radius: modulus of the largest eigenvalue from Eigen's
/// general eigensolver.
double oracle_radius(const OperatorMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

OperatorMatrix random_nonnegative(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(n * n);
    for (double& x : e) x = u(gen);
    return OperatorMatrix(n, std::move(e));
}

OperatorMatrix scaled_to_radius(const OperatorMatrix& a, double target) { return (target / oracle_radius(a)) * a; }

Outcome criterion1() {
    const auto p = builtin_example("2.8");
    const auto& h = std::get<Thr2>(p.hypothesis);
    const double n1 = operator_norm_inf(h.a1), n2 = operator_norm_inf(h.a2), n3 = operator_norm_inf(h.a3);
    const double sum = n1 + n2 + n3;
    std::ostringstream os;
    os.precision(12);
    os << "norms " << n1 << ", " << n2 << ", " << n3 << ", sum " << sum;
    const bool ok = std::abs(n1 - 11.0 / 30.0) <= 1e-12 && std::abs(n2 - 1.0 / 7.0) <= 1e-12 &&
                    std::abs(n3 - 2.0 / 9.0) <= 1e-12 && std::abs(sum - 0.7317) <= 1e-4;
    return {ok, os.str()};
}

Outcome end_to_end(const std::string& id) {
    const auto p = builtin_example(id);
    const SampleSet samples = make_samples(p.domain, SamplingConfig{}, p.f.exception_points());
    const ContractionReport c = check_contraction(p, samples);
    const SolveReport s = solve(p);
    bool ok = c.pass && c.pairs >= 33 * 33 + 256 && s.status == SolveStatus::Converged && s.probe.size() == 10;
    for (const auto& e : s.probe) ok = ok && std::abs(e.limit) <= 1e-10;
    ok = ok && std::abs(s.fixed_point) <= 1e-10 && s.residual.max_component() <= 1e-12;
    std::ostringstream os;
    os << c.pairs << " pairs " << (c.pass ? "pass" : "fail") << ", u* = " << s.fixed_point << " from "
       << s.probe.size() << " starts, residual max " << s.residual.max_component();
    return {ok, os.str()};
}

Outcome criterion3() {
    bool ok = true;
    std::string detail;
    for (const std::string id : {"2.2", "2.8"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = end_to_end(id);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && o.ok && secs < 5.0;
        detail += id + ": " + o.detail + (secs < 5.0 ? "" : " (over 5 s)") + "; ";
    }
    return {ok, detail};
}

Outcome criterion4() {
    std::mt19937_64 gen(20240607);
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    std::uniform_real_distribution<double> target(0.5, 1.5);
    std::size_t below = 0, disagreements = 0, wrong = 0, banded = 0;
    std::string first_problem;
    for (int k = 0; k < 1000; ++k) {
        const double s = target(gen);
        const OperatorMatrix a = scaled_to_radius(random_nonnegative(gen, dim(gen)), s);
        const double r = oracle_radius(a);
        if (r < 1.0) ++below;
        const bool in_band = std::abs(r - 1.0) < 1e-6;
        try {
            const ZeroConvergenceEvidence ev = is_zero_convergent(a);
            if (in_band) {
                ++banded;
                continue;
            }
            if (!ev.criteria_agree) ++disagreements;
            if (ev.verdict != (r < 1.0)) {
                ++wrong;
                if (first_problem.empty()) first_problem = "verdict mismatch at r = " + std::to_string(r);
            }
        } catch (const CriteriaDisagreement& e) {
            if (in_band) continue;
            ++disagreements;
            if (first_problem.empty()) first_problem = e.what();
        }
    }
    std::ostringstream os;
    os << "1000 matrices, " << below << " with r < 1, " << banded << " in band, " << disagreements
       << " disagreements, " << wrong << " wrong verdicts";
    if (!first_problem.empty()) os << " (" << first_problem << ")";
    return {disagreements == 0 && wrong == 0 && below > 350 && below < 650, os.str()};
}

Outcome criterion5() {
    const auto p = builtin_example("2.4");
    const OperatorMatrix& a = std::get<Thr1>(p.hypothesis).a;
    StopConfig stop;
    stop.early_stop = false;
    stop.max_iters = 51;
    const Trajectory t = picard_iterate(p, 0.5, stop);
    const ConeVector q0 = t.step_q.front();
    std::size_t checked = 0, bad = 0;
    for (std::size_t n = 0; n + 1 < t.iterates.size(); ++n) {
        const ConeVector bound = apriori_tail_bound(a, p.d.b, q0, n);
        for (std::size_t m = n + 1; m < t.iterates.size(); ++m) {
            ++checked;
            if (!cone_leq(p.qt(t.iterates[n], t.iterates[m]), bound, ConeOrderConfig{1e-12})) ++bad;
        }
    }
    const double at200 = apriori_tail_bound(a, p.d.b, q0, 200).max_component();
    std::ostringstream os;
    os << checked << " pairs (n < m <= 50), " << bad << " violations, bound at n = 200 is " << at200;
    return {bad == 0 && t.iterates.size() == 51 && at200 < 1e-8, os.str()};
}

Outcome criterion6() {
    const OperatorMatrix a{{0.5}};
    const ConeVector d0{1.0};
    double worst = 0.0, worst_pert = 0.0;
    bool reduces = true;
    for (unsigned n = 0; n <= 20; ++n) {
        const double oracle = std::pow(0.5, n) / (1.0 - 0.5);
        worst = std::max(worst, std::abs(perov_error_bound(a, d0, n)[0] - oracle));
        reduces = reduces && perturbation_bound(a, ConeVector{0.0}, d0, n) == perov_error_bound(a, d0, n);
        const double pert_oracle = 0.2 / (1.0 - 0.5) + oracle;
        worst_pert = std::max(worst_pert, std::abs(perturbation_bound(a, ConeVector{0.2}, d0, n)[0] - pert_oracle));
    }
    std::ostringstream os;
    os << "max error " << worst << ", perturbation max error " << worst_pert << ", reduces at a = 0: " << reduces;
    return {worst <= 1e-14 && worst_pert <= 1e-14 && reduces, os.str()};
}

Outcome criterion7() {
    const SampleSet samples = make_samples(Interval{0.0, 1.0}, SamplingConfig{});
    std::size_t suites = 0, failures = 0;
    for (double p : {1.5, 2.0, 3.0}) {
        for (double alpha : {1.0, 2.0}) {
            for (double eta : {1.0, 2.0}) {
                const BMetricSpec d{p, alpha, std::pow(2.0, p - 1.0)};
                const CDistanceSpec q{p, 1.0, eta};
                auto reports = verify_b_metric_axioms(d, samples);
                const auto more = verify_c_distance_axioms(q, d.b, samples, default_sequences(samples.domain),
                                                           Q4Probe{d, default_e_stars(), std::nullopt, std::nullopt});
                reports.insert(reports.end(), more.begin(), more.end());
                ++suites;
                for (const auto& r : reports)
                    if (r.verdict != Verdict::Pass) ++failures;
            }
        }
    }
    const auto mutated = verify_b_metric_axioms(BMetricSpec{2.0, 1.0, 1.0}, samples);
    const AxiomReport& b3 = mutated[2];
    const bool mutation_caught = b3.id == AxiomId::B3 && b3.verdict == Verdict::Fail && !b3.witnesses.empty();
    std::ostringstream os;
    os << suites << " parameter sets, " << failures << " axiom failures; b = 1 mutation: b3 "
       << verdict_name(b3.verdict) << " with " << b3.violations << " violations";
    if (!b3.witnesses.empty()) {
        const auto& w = b3.witnesses.front();
        os << ", witness (" << w.points[0] << ", " << w.points[1] << ", " << w.points[2] << ")";
    }
    return {failures == 0 && mutation_caught, os.str()};
}

Outcome criterion8() {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    std::uniform_real_distribution<double> target(0.05, 0.98), u(0.0, 1.0);
    std::size_t holds = 0, checked = 0;
    for (int k = 0; k < 100; ++k) {
        const OperatorMatrix a = scaled_to_radius(random_nonnegative(gen, dim(gen)), target(gen));
        if (!is_zero_convergent(a).verdict) return {false, "generated matrix not zero-convergent"};
        for (int j = 0; j < 100; ++j) {
            std::vector<double> e(a.size());
            for (double& x : e) x = (u(gen) < 0.2) ? 0.0 : u(gen);
            if (std::all_of(e.begin(), e.end(), [](double x) { return x == 0.0; })) e[0] = 1.0;
            const ConeVector v(e);
            ++checked;
            if (cone_leq(v, a * v, ConeOrderConfig::exact())) ++holds;
        }
    }
    return {holds == 0, std::to_string(checked) + " pairs, u <= Au held " + std::to_string(holds) + " times"};
}

std::string body_of(const std::string& id) {
    std::ostringstream out, err;
    const int code = run_cli({"reproduce", "--example", id, "--seed", "42", "--json", "-"}, out, err);
    if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
    auto doc = report::Json::parse(out.str());
    doc.erase("meta");
    return doc.dump(2);
}

Outcome criterion9() {
    bool ok = true;
    std::string detail;
    for (const std::string id : {"2.2", "2.4", "2.8"}) {
        const std::string a = body_of(id), b = body_of(id);
        const bool same = a == b && a.rfind("exit", 0) != 0;
        ok = ok && same;
        detail += id + (same ? " identical (" + std::to_string(a.size()) + " bytes)" : " DIFFERENT") + "; ";
    }
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "example 2.8 operator norms", 1.0, criterion1},
        {2, "example 2.4 end to end", 5.0, [] { return end_to_end("2.4"); }},
        {3, "examples 2.2 and 2.8 end to end", 10.0, criterion3},
        {4, "zero-convergence criteria agree on 1000 random matrices", 30.0, criterion4},
        {5, "a priori tail bound dominates the 2.4 trajectory", 1.0, criterion5},
        {6, "Perov error and perturbation bounds, scalar case", 1.0, criterion6},
        {7, "axiom suites and the b = 1 mutation", 10.0, criterion7},
        {8, "u <= Au never holds for zero-convergent A", 5.0, criterion8},
        {9, "reproduce reports are byte-identical", 30.0, criterion9},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::ostringstream t;
        t.precision(3);
        t << secs;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << t.str() << " s"
                  << (in_time ? "" : ", over the time limit") << "] " << o.detail << "\n";
    }
    return failed == 0 ? 0 : 1;
}
