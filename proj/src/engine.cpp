#include "perov/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace perov {

namespace {

std::vector<double> exception_points(const ProblemInstance& p) {
    auto pts = p.f.exception_points();
    if (p.t.map) {
        const auto more = p.t.map->exception_points();
        pts.insert(pts.end(), more.begin(), more.end());
    }
    return pts;
}

std::vector<std::pair<double, double>> contraction_pairs(const ProblemInstance& p, const SampleSet& samples) {
    const auto extra = exception_points(p);
    return make_pairs(samples.domain, samples.config, extra);
}

void finish(ContractionReport& r, std::vector<ContractionViolation> all) {
    r.violation_count = all.size();
    r.pass = all.empty();
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return std::pair(a.x1, a.x2) < std::pair(b.x1, b.x2);
    });
    if (all.size() > ContractionReport::kMaxViolations) all.erase(all.begin() + ContractionReport::kMaxViolations, all.end());
    r.violations = std::move(all);
}

ConeVector tolerance_vector(std::size_t n, double tol) { return ConeVector::filled(n, tol); }

}  // namespace

std::string_view ut_member_name(UtMember m) {
    switch (m) {
        case UtMember::Qxy: return "q(Tx1,Tx2)";
        case UtMember::Qxfx: return "q(Tx1,Tfx1)";
        case UtMember::Qyfy: return "q(Tx2,Tfx2)";
    }
    return "?";
}

ContractionReport check_thr1(const ProblemInstance& p, const SampleSet& samples) {
    const auto* h = std::get_if<Thr1>(&p.hypothesis);
    if (!h) throw InvalidArgument("check_thr1 needs a THR1 hypothesis");
    ContractionReport r;
    r.pair_points = contraction_pairs(p, samples);
    r.pairs = r.pair_points.size();
    r.members.reserve(r.pairs);
    std::vector<ContractionViolation> bad;
    for (const auto& [x1, x2] : r.pair_points) {
        const double fx1 = p.eval_f(x1), fx2 = p.eval_f(x2);
        const ConeVector lhs = p.qt(fx1, fx2);
        const std::array<ConeVector, 3> cand{h->a * p.qt(x1, x2), h->a * p.qt(x1, fx1), h->a * p.qt(x2, fx2)};
        std::optional<UtMember> member;
        std::size_t best = 0;
        double best_excess = cone_excess(lhs, cand[0]);
        for (std::size_t k = 0; k < 3; ++k) {
            if (cone_leq(lhs, cand[k], p.order)) {
                member = static_cast<UtMember>(k);
                break;
            }
            const double ex = cone_excess(lhs, cand[k]);
            if (ex < best_excess) {
                best_excess = ex;
                best = k;
            }
        }
        r.members.push_back(member);
        if (member) {
            ++r.member_counts[static_cast<std::size_t>(*member)];
        } else {
            bad.push_back({x1, x2, lhs, cand[best]});
        }
    }
    finish(r, std::move(bad));
    return r;
}

ContractionReport check_thr2(const ProblemInstance& p, const SampleSet& samples) {
    const auto* h = std::get_if<Thr2>(&p.hypothesis);
    if (!h) throw InvalidArgument("check_thr2 needs a THR2 hypothesis");
    ContractionReport r;
    r.thr2 = true;
    r.pair_points = contraction_pairs(p, samples);
    r.pairs = r.pair_points.size();
    std::vector<ContractionViolation> bad;
    for (const auto& [x1, x2] : r.pair_points) {
        const double fx1 = p.eval_f(x1), fx2 = p.eval_f(x2);
        const ConeVector lhs = p.qt(fx1, fx2);
        const ConeVector rhs = h->a1 * p.qt(x1, x2) + h->a2 * p.qt(x1, fx1) + h->a3 * p.qt(x2, fx2);
        if (!cone_leq(lhs, rhs, p.order)) bad.push_back({x1, x2, lhs, rhs});
    }
    finish(r, std::move(bad));
    return r;
}

ContractionReport check_contraction(const ProblemInstance& p, const SampleSet& samples) {
    return std::holds_alternative<Thr1>(p.hypothesis) ? check_thr1(p, samples) : check_thr2(p, samples);
}

std::string_view stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::BoundMet: return "bound-met";
        case StopReason::StepMet: return "step-met";
        case StopReason::MaxIters: return "max-iters";
    }
    return "?";
}

std::string_view solve_status_name(SolveStatus s) {
    return s == SolveStatus::Converged ? "converged" : "max-iters";
}

ConeVector step_bound(const OperatorMatrix& a_eff, const ConeVector& q0, unsigned long long n) {
    return matrix_power(a_eff, n) * q0;
}

ConeVector apriori_tail_bound(const OperatorMatrix& a_eff, double b, const ConeVector& q0, unsigned long long n) {
    const OperatorMatrix inv = neumann_inverse(b * a_eff);
    return b * (matrix_power(a_eff, n) * (inv * q0));
}

ConeVector perov_error_bound(const OperatorMatrix& a, const ConeVector& d0, unsigned long long n) {
    const OperatorMatrix inv = neumann_inverse(a);
    return matrix_power(a, n) * (inv * d0);
}

ConeVector perturbation_bound(const OperatorMatrix& a, const ConeVector& perturbation, const ConeVector& d0,
                              unsigned long long n) {
    if (!cone_leq(ConeVector::zero(perturbation.size()), perturbation, ConeOrderConfig::exact())) {
        throw InvalidArgument("perturbation bound needs a ⪰ θ");
    }
    const OperatorMatrix inv = neumann_inverse(a);
    return inv * perturbation + matrix_power(a, n) * (inv * d0);
}

Trajectory picard_iterate(const ProblemInstance& p, double x0, const StopConfig& stop) {
    return picard_iterate(p, validate_hypothesis(p).effective, x0, stop);
}

Trajectory picard_iterate(const ProblemInstance& p, const OperatorMatrix& a_eff, double x0, const StopConfig& stop) {
    if (!std::isfinite(x0) || !p.domain.contains(x0)) {
        throw InvalidArgument("start point " + std::to_string(x0) + " is outside the domain");
    }
    if (stop.max_iters == 0) throw InvalidArgument("max_iters must be positive");
    const double b = p.d.b;
    const OperatorMatrix inv = neumann_inverse(b * a_eff);
    const ConeVector tol = tolerance_vector(p.n, stop.tol);
    const ConeOrderConfig exact = ConeOrderConfig::exact();

    Trajectory t;
    std::optional<ConeVector> power_m;  // A_eff^n (I - bA_eff)^{-1} q0
    double x = x0;
    for (;;) {
        const double fx = p.eval_f(x);
        if (!std::isfinite(fx) || !p.domain.contains(fx, p.match_eps)) {
            std::ostringstream os;
            os.precision(17);
            os << "iterate f(" << x << ") = " << fx << " left the domain";
            throw IterateEscapedDomain(os.str());
        }
        ConeVector qn = p.qt(x, fx);
        power_m = power_m ? a_eff * *power_m : inv * qn;
        ConeVector tail = b * *power_m;

        const bool step_met = fx == x && cone_leq(qn, tol, exact);
        const bool bound_met = cone_leq(tail, tol, exact);
        t.iterates.push_back(x);
        t.step_q.push_back(std::move(qn));
        t.tail.push_back(std::move(tail));
        t.next = fx;
        if (stop.early_stop && step_met) {
            t.reason = StopReason::StepMet;
            break;
        }
        if (stop.early_stop && bound_met) {
            t.reason = StopReason::BoundMet;
            break;
        }
        if (t.iterates.size() >= stop.max_iters) {
            t.reason = StopReason::MaxIters;
            break;
        }
        x = fx;
    }
    return t;
}

bool cauchy_certificate(const ProblemInstance& p, const Trajectory& t, const OperatorMatrix& a_eff,
                        const CauchyConfig& cfg) {
    if (t.iterates.empty()) throw InvalidArgument("cauchy_certificate needs a nonempty trajectory");
    const ConeOrderConfig order{cfg.slack};
    const ConeVector& q0 = t.step_q.front();
    ConeVector bound = q0;
    for (std::size_t n = 0; n < t.step_q.size(); ++n) {
        if (n > 0) bound = a_eff * bound;
        if (!cone_leq(t.step_q[n], bound, order)) return false;
    }
    std::vector<double> xs(t.iterates.begin(), t.iterates.end());
    xs.push_back(t.next);
    const std::size_t window = std::min(xs.size(), cfg.pair_window);
    for (std::size_t n = 0; n < std::min(window, t.tail.size()); ++n) {
        for (std::size_t m = n + 1; m < window; ++m) {
            if (!cone_leq(p.qt(xs[n], xs[m]), t.tail[n], order)) return false;
        }
    }
    return true;
}

SolveReport solve(const ProblemInstance& p, const SolveConfig& cfg) {
    SolveReport rep;
    rep.hypothesis = validate_hypothesis(p);
    if (!rep.hypothesis.evidence.verdict) {
        throw ValidationError("hypothesis", "the effective operator is not zero-convergent after scaling by b");
    }
    const OperatorMatrix& a_eff = rep.hypothesis.effective;

    std::vector<double> starts = cfg.starts;
    if (starts.empty()) {
        starts = {p.domain.lo, p.domain.hi};
        const auto rnd = uniform_points(p.domain, cfg.random_starts, cfg.seed);
        starts.insert(starts.end(), rnd.begin(), rnd.end());
    }

    std::optional<Trajectory> first;
    for (double s : starts) {
        Trajectory t = picard_iterate(p, a_eff, s, cfg.stop);
        rep.probe.push_back({s, t.iterates.back(), t.iterates.size(), t.reason});
        if (t.reason == StopReason::MaxIters) rep.status = SolveStatus::MaxIters;
        if (!first) first = std::move(t);
    }

    const double u = first->iterates.back();
    const double fu = first->next;
    rep.fixed_point = u;
    rep.iterations = first->iterates.size();
    rep.reason = first->reason;
    rep.final_step_distance = d_eval(p.d, u, fu);
    rep.residual = p.qt(u, u);
    rep.tail_bound = first->tail.back();
    rep.fixed_point_gap = std::abs(fu - u);
    const ConeVector tol = tolerance_vector(p.n, cfg.stop.tol);
    rep.residual_within_tolerance = cone_leq(rep.residual, tol, ConeOrderConfig::exact()) &&
                                    cone_leq(rep.final_step_distance, tol, ConeOrderConfig::exact());
    rep.cauchy_certified = cauchy_certificate(p, *first, a_eff);

    const double utol = cfg.uniqueness_tol.value_or(2.0 * cfg.stop.tol);
    for (std::size_t i = 0; i < rep.probe.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.probe.size(); ++j) {
            const auto& a = rep.probe[i];
            const auto& c = rep.probe[j];
            if (a.reason == StopReason::MaxIters || c.reason == StopReason::MaxIters) continue;
            if (std::abs(a.limit - c.limit) > utol) {
                std::ostringstream os;
                os.precision(17);
                os << "starts " << a.start << " and " << c.start << " reached limits " << a.limit << " and " << c.limit;
                throw LimitsDisagree(os.str(), std::move(rep));
            }
        }
    }
    return rep;
}

}  // namespace perov
