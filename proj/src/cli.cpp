#include "perov/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "perov/engine.hpp"
#include "perov/errors.hpp"
#include "perov/report.hpp"

namespace perov {

namespace {

using report::Json;
using report::real;

struct Options {
    std::string input;
    std::string example;
    double alpha = 1.0;
    std::string json_path;
    std::uint64_t seed = 42;
    std::size_t grid = 33;
    std::size_t samples = 256;
    double tol = 1e-10;
    std::size_t max_iters = 10'000;
    // matrix-check / bound
    std::string matrix;
    double scale = 1.0;
    std::string d0;
    std::string a;
    unsigned long long n = 10;
    std::vector<double> x0;
    // space-verify overrides of d
    std::optional<double> p_override;
    std::optional<double> b_override;
};

/// Input problems: either a file or a built-in example.
struct Loaded {
    ProblemInstance problem;
    std::string digest;
    std::string example_id;
};

class UsageError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Loaded load_document(const Options& o) {
    if (o.input.empty() == o.example.empty()) throw UsageError("give exactly one of --input and --example");
    if (!o.example.empty()) {
        ProblemInstance p = builtin_example(o.example, BuiltinOptions{o.alpha});
        return {std::move(p), "example:" + o.example + ";alpha=" + real(o.alpha), o.example};
    }
    const std::string text = read_file(o.input);
    return {parse_problem_document(text), "sha256:" + report::sha256_hex(text), ""};
}

Loaded load(const Options& o) {
    Loaded l = load_document(o);
    validate_problem(l.problem);
    return l;
}

std::vector<double> parse_reals(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

/// "a,b;c,d" -> [[a,b],[c,d]].
OperatorMatrix parse_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_reals(row, ','));
    if (rows.empty()) throw UsageError("empty matrix");
    return OperatorMatrix::from_rows(rows);
}

SamplingConfig sampling_of(const Options& o) { return {o.grid, o.samples, o.seed}; }

void print_rows(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) out << "  " << std::left << std::setw(static_cast<int>(w)) << k << "  " << v << "\n";
}

std::string vec_text(const ConeVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + real(v[i]);
    return s + ")";
}

std::string flag(bool b) { return b ? "yes" : "no"; }

void print_evidence(std::ostream& out, const ZeroConvergenceEvidence& ev) {
    print_rows(out, {{"power decay", flag(ev.power_decay) + " (k = " + std::to_string(ev.decay_exponent) + ")"},
                     {"spectral radius", real(ev.radius.value) + " in [" + real(ev.radius.lower) + ", " +
                                             real(ev.radius.upper) + "]"},
                     {"r < 1", flag(ev.eigenvalue_criterion)},
                     {"Neumann series", flag(ev.neumann_invertible)},
                     {"(I - A)^-1 >= 0", flag(ev.inverse_nonnegative)},
                     {"near critical", flag(ev.near_critical)},
                     {"zero-convergent", flag(ev.verdict)}});
}

void print_axioms(std::ostream& out, const std::vector<AxiomReport>& rs) {
    for (const auto& r : rs) {
        out << "  " << std::left << std::setw(4) << axiom_name(r.id) << std::setw(8) << verdict_name(r.verdict)
            << "checked " << r.checked << ", violations " << r.violations;
        if (!r.note.empty()) out << "  [" << r.note << "]";
        out << "\n";
        if (!r.witnesses.empty()) {
            const auto& w = r.witnesses.front();
            out << "      witness (";
            for (std::size_t i = 0; i < w.points.size(); ++i) out << (i ? ", " : "") << real(w.points[i]);
            out << "): " << vec_text(w.lhs) << " vs " << vec_text(w.rhs) << "\n";
        }
    }
}

void print_contraction(std::ostream& out, const ContractionReport& r) {
    out << "  " << (r.thr2 ? "THR2" : "THR1") << " on " << r.pairs << " pairs: " << (r.pass ? "pass" : "FAIL")
        << ", violations " << r.violation_count << "\n";
    if (!r.thr2 && r.pass) {
        for (std::size_t k = 0; k < 3; ++k) {
            if (r.member_counts[k]) {
                out << "    certified by " << ut_member_name(static_cast<UtMember>(k)) << ": " << r.member_counts[k] << "\n";
            }
        }
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 5); ++i) {
        const auto& v = r.violations[i];
        out << "    (" << real(v.x1) << ", " << real(v.x2) << "): " << vec_text(v.lhs) << " vs " << vec_text(v.best_rhs)
            << "\n";
    }
}

void print_solve(std::ostream& out, const SolveReport& s) {
    print_rows(out, {{"status", std::string(solve_status_name(s.status))},
                     {"u*", real(s.fixed_point)},
                     {"iterations", std::to_string(s.iterations) + " (" + std::string(stop_reason_name(s.reason)) + ")"},
                     {"q(Tu*, Tu*)", vec_text(s.residual)},
                     {"d(x_N, f x_N)", vec_text(s.final_step_distance)},
                     {"tail bound", vec_text(s.tail_bound)},
                     {"Cauchy certificate", flag(s.cauchy_certified)},
                     {"starts", std::to_string(s.probe.size())}});
}

struct Outcome {
    int code = 0;
    report::RunReport rep;
};

Json options_json(const std::string& cmd, const Options& o) {
    Json j = Json::object();
    if (!o.input.empty()) j["input"] = o.input;
    if (!o.example.empty()) {
        j["example"] = o.example;
        j["alpha"] = real(o.alpha);
    }
    if (cmd == "solve" || cmd == "reproduce") {
        j["tol"] = real(o.tol);
        j["max_iters"] = o.max_iters;
    }
    if (cmd == "matrix-check" || cmd == "bound") {
        if (!o.matrix.empty()) j["matrix"] = o.matrix;
        if (cmd == "matrix-check") j["scale"] = real(o.scale);
    }
    if (cmd == "bound") {
        j["n"] = o.n;
        if (!o.d0.empty()) j["d0"] = o.d0;
        if (!o.a.empty()) j["a"] = o.a;
    }
    if (!o.x0.empty()) j["x0"] = report::reals(o.x0);
    if (o.p_override) j["p"] = real(*o.p_override);
    if (o.b_override) j["b"] = real(*o.b_override);
    return j;
}

Outcome cmd_matrix_check(const Options& o, std::ostream& out) {
    Outcome res;
    if (o.matrix.empty()) throw UsageError("--matrix is required");
    const OperatorMatrix a = o.scale * parse_matrix(o.matrix);
    if (!a.is_nonnegative()) throw UsageError("matrix must be entrywise nonnegative");
    const ZeroConvergenceEvidence ev = is_zero_convergent(a);
    res.rep.input_digest = "sha256:" + report::sha256_hex(o.matrix + ";scale=" + real(o.scale));
    res.rep.payload = {{"matrix", report::matrix(a)},
                       {"operator_norm", real(operator_norm_inf(a))},
                       {"evidence", report::to_json(ev)}};
    res.rep.verdict = ev.verdict ? "pass" : "fail";
    res.code = ev.verdict ? 0 : 1;
    out << "matrix-check (" << a.size() << "x" << a.size() << ", ||A|| = " << real(operator_norm_inf(a)) << ")\n";
    print_evidence(out, ev);
    return res;
}

bool all_pass(const std::vector<AxiomReport>& rs) {
    for (const auto& r : rs)
        if (r.verdict == Verdict::Fail) return false;
    return true;
}

Outcome cmd_space_verify(const Options& o, std::ostream& out) {
    Outcome res;
    Loaded l = load(o);
    ProblemInstance& p = l.problem;
    if (o.p_override) p.d.p = *o.p_override;
    if (o.b_override) p.d.b = *o.b_override;
    try {
        p.d.validate();
    } catch (const InvalidArgument& e) {
        throw ValidationError("d", e.what());
    }
    res.rep.input_digest = l.digest;
    res.rep.notes = report::discrepancy_notes(l.example_id);
    const SampleSet samples = make_samples(p.domain, sampling_of(o), p.f.exception_points());
    const auto bm = verify_b_metric_axioms(p.d, samples, p.order);
    const auto cd = verify_c_distance_axioms(p.q, p.d.b, samples, default_sequences(p.domain),
                                             Q4Probe{p.d, default_e_stars(), std::nullopt, std::nullopt}, p.order);
    const double b_est = estimate_b_constant(p.d, samples);
    Json bmj = Json::array(), cdj = Json::array();
    for (const auto& r : bm) bmj.push_back(report::to_json(r));
    for (const auto& r : cd) cdj.push_back(report::to_json(r));
    res.rep.payload = {{"d", {{"p", real(p.d.p)}, {"alpha", real(p.d.alpha)}, {"b", real(p.d.b)}}},
                       {"q", {{"p", real(p.q.p)}, {"a", real(p.q.a)}, {"eta", real(p.q.eta)}}},
                       {"sample_points", samples.points.size()},
                       {"b_estimate", real(b_est)},
                       {"b_metric_axioms", bmj},
                       {"c_distance_axioms", cdj}};
    const bool ok = all_pass(bm) && all_pass(cd);
    res.rep.verdict = ok ? "pass" : "fail";
    res.code = ok ? 0 : 1;
    out << "space-verify on " << samples.points.size() << " points (estimated b = " << real(b_est) << ")\n";
    print_axioms(out, bm);
    print_axioms(out, cd);
    return res;
}

Outcome cmd_contraction_verify(const Options& o, std::ostream& out) {
    Outcome res;
    Loaded l = load_document(o);
    res.rep.input_digest = l.digest;
    res.rep.notes = report::discrepancy_notes(l.example_id);
    try {
        validate_problem(l.problem);
    } catch (const ValidationError& e) {
        res.rep.verdict = "error";
        res.rep.payload = {{"error", e.what()}};
        if (e.path().rfind("hypothesis", 0) == 0) {
            try {
                res.rep.payload["hypothesis"] = report::to_json(validate_hypothesis(l.problem));
            } catch (const Error&) {
            }
        }
        res.code = 2;
        out << "contraction-verify: " << e.what() << "\n";
        return res;
    }
    const ProblemInstance& p = l.problem;
    const HypothesisCheck h = validate_hypothesis(p);
    const SampleSet samples = make_samples(p.domain, sampling_of(o), p.f.exception_points());
    const ContractionReport c = check_contraction(p, samples);
    res.rep.payload = {{"hypothesis", report::to_json(h)}, {"contraction", report::to_json(c)}};
    res.rep.verdict = c.pass ? "pass" : "fail";
    res.code = c.pass ? 0 : 1;
    out << "contraction-verify\n";
    print_evidence(out, h.evidence);
    print_contraction(out, c);
    return res;
}

SolveConfig solve_config(const Options& o) {
    SolveConfig sc;
    sc.stop.tol = o.tol;
    sc.stop.max_iters = o.max_iters;
    sc.seed = o.seed;
    sc.starts = o.x0;
    return sc;
}

Outcome cmd_solve(const Options& o, std::ostream& out) {
    Outcome res;
    Loaded l = load(o);
    res.rep.input_digest = l.digest;
    res.rep.notes = report::discrepancy_notes(l.example_id);
    try {
        const SolveReport s = solve(l.problem, solve_config(o));
        const bool ok = s.status == SolveStatus::Converged && s.residual_within_tolerance;
        res.rep.payload = {{"solve", report::to_json(s)}};
        res.rep.verdict = ok ? "pass" : "fail";
        res.code = ok ? 0 : 1;
        out << "solve\n";
        print_solve(out, s);
    } catch (const LimitsDisagree& e) {
        res.rep.payload = {{"solve", report::to_json(e.report())}, {"error", e.what()}};
        res.rep.verdict = "fail";
        res.code = 1;
        out << "solve: limits disagree: " << e.what() << "\n";
    }
    return res;
}

Outcome cmd_bound(const Options& o, std::ostream& out) {
    Outcome res;
    if (!o.matrix.empty()) {
        const OperatorMatrix a = parse_matrix(o.matrix);
        if (o.d0.empty()) throw UsageError("--d0 is required with --matrix");
        const ConeVector d0(parse_reals(o.d0, ','));
        const ConeVector err = perov_error_bound(a, d0, o.n);
        res.rep.input_digest = "sha256:" + report::sha256_hex(o.matrix);
        res.rep.payload = {{"n", o.n}, {"error_bound", report::vec(err)}};
        std::vector<std::pair<std::string, std::string>> rows{{"A^n (I - A)^-1 d0", vec_text(err)}};
        if (!o.a.empty()) {
            const ConeVector pert = perturbation_bound(a, ConeVector(parse_reals(o.a, ',')), d0, o.n);
            res.rep.payload["perturbation_bound"] = report::vec(pert);
            rows.push_back({"(I - A)^-1 a + A^n (I - A)^-1 d0", vec_text(pert)});
        }
        out << "bound (n = " << o.n << ")\n";
        print_rows(out, rows);
    } else {
        Loaded l = load(o);
        const ProblemInstance& p = l.problem;
        res.rep.input_digest = l.digest;
        res.rep.notes = report::discrepancy_notes(l.example_id);
        const HypothesisCheck h = validate_hypothesis(p);
        const double x0 = o.x0.empty() ? p.domain.hi : o.x0.front();
        if (!p.domain.contains(x0)) throw UsageError("--x0 is outside the domain");
        const ConeVector q0 = p.qt(x0, p.eval_f(x0));
        const ConeVector step = step_bound(h.effective, q0, o.n);
        const ConeVector tail = apriori_tail_bound(h.effective, p.d.b, q0, o.n);
        res.rep.payload = {{"x0", real(x0)},
                           {"n", o.n},
                           {"q0", report::vec(q0)},
                           {"step_bound", report::vec(step)},
                           {"tail_bound", report::vec(tail)},
                           {"effective_operator", report::matrix(h.effective)}};
        out << "bound from x0 = " << real(x0) << " (n = " << o.n << ")\n";
        print_rows(out, {{"q(Tx0, Tx1)", vec_text(q0)}, {"A^n q0", vec_text(step)}, {"b A^n (I - bA)^-1 q0", vec_text(tail)}});
    }
    res.rep.verdict = "pass";
    return res;
}

Outcome cmd_reproduce(const Options& o, std::ostream& out) {
    Outcome res;
    if (o.example.empty()) throw UsageError("--example is required");
    StopConfig stop;
    stop.tol = o.tol;
    stop.max_iters = o.max_iters;
    const report::Reproduction r = report::reproduce_example(o.example, sampling_of(o), stop);
    res.rep.input_digest = "example:" + o.example;
    res.rep.notes = report::discrepancy_notes(o.example);
    res.rep.payload = r.payload();
    res.rep.verdict = r.pass ? "pass" : "fail";
    res.code = r.pass ? 0 : 1;
    out << "reproduce " << o.example << "\n";
    std::size_t wq = 8, ws = 6, wc = 8;
    for (const auto& row : r.rows) {
        wq = std::max(wq, row.quantity.size());
        ws = std::max(ws, row.stated.size());
        wc = std::max(wc, row.computed.size());
    }
    auto line = [&](const std::string& q, const std::string& s, const std::string& c, const std::string& m) {
        out << "  " << std::left << std::setw(static_cast<int>(wq)) << q << "  " << std::setw(static_cast<int>(ws)) << s
            << "  " << std::setw(static_cast<int>(wc)) << c << "  " << m << "\n";
    };
    line("quantity", "stated", "computed", "");
    for (const auto& row : r.rows) {
        line(row.quantity, row.stated, row.computed,
             row.agrees ? "ok" : (row.asserted ? "MISMATCH" : "differs (noted)"));
    }
    for (const auto& n : res.rep.notes) out << "  note [" << n.id << "]: " << n.text << "\n";
    return res;
}

int emit(const std::string& cmd, const Options& o, Outcome res, double seconds, std::ostream& out, std::ostream& err) {
    res.rep.command = cmd;
    res.rep.options = options_json(cmd, o);
    res.rep.sampling = sampling_of(o);
    res.rep.wall_time_seconds = seconds;
    if (!o.json_path.empty()) {
        const std::string text = res.rep.document().dump(2) + "\n";
        if (o.json_path == "-") {
            out << text;
        } else {
            std::ofstream f(o.json_path, std::ios::binary);
            if (!f || !(f << text)) {
                err << "error: cannot write '" << o.json_path << "'\n";
                return 2;
            }
        }
    }
    return res.code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certify Perov-type contractions on cone b-metric spaces and iterate to the fixed point", "perov"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool problem, bool sampling) {
        sub->add_option("--json", o.json_path, "Write the JSON report to PATH (- for standard output)");
        if (problem) {
            sub->add_option("--input", o.input, "Problem definition file");
            sub->add_option("--example", o.example, "Built-in example id (2.2, 2.4, 2.8)");
            sub->add_option("--alpha", o.alpha, "Weight alpha of the 2.4 and 2.8 families");
        }
        sub->add_option("--seed", o.seed, "Random seed");
        if (sampling) {
            sub->add_option("--grid", o.grid, "Grid points per axis");
            sub->add_option("--samples", o.samples, "Random samples");
        }
        sub->add_option("--tol", o.tol, "Tolerance vector component");
        sub->add_option("--max-iters", o.max_iters, "Iteration cap");
    };

    CLI::App* mc = app.add_subcommand("matrix-check", "Zero-convergence evidence for a nonnegative matrix");
    common(mc, false, false);
    mc->add_option("--matrix", o.matrix, "Rows separated by ';', entries by ','")->required();
    mc->add_option("--scale", o.scale, "Multiply the matrix by this factor");

    CLI::App* sv = app.add_subcommand("space-verify", "Check the b-metric and c-distance axioms on samples");
    common(sv, true, true);
    sv->add_option("--p", o.p_override, "Override the exponent of d");
    sv->add_option("--b", o.b_override, "Override the constant b of d");

    CLI::App* cv = app.add_subcommand("contraction-verify", "Check the contraction inequality on sampled pairs");
    common(cv, true, true);

    CLI::App* so = app.add_subcommand("solve", "Picard iteration with the uniqueness probe");
    common(so, true, false);
    so->add_option("--x0", o.x0, "Start points (default: endpoints and 8 seeded points)");

    CLI::App* bo = app.add_subcommand("bound", "Error and tail bounds");
    common(bo, true, false);
    bo->add_option("--matrix", o.matrix, "Operator A for the error bound");
    bo->add_option("--d0", o.d0, "d(u0, u1) as comma separated components");
    bo->add_option("--a", o.a, "Perturbation vector a");
    bo->add_option("--n", o.n, "Iteration index");
    bo->add_option("--x0", o.x0, "Start point of the tail bound");

    CLI::App* re = app.add_subcommand("reproduce", "End-to-end run of a built-in example");
    common(re, true, true);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    const auto t0 = std::chrono::steady_clock::now();
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();
    try {
        // With --json - the report owns standard output.
        std::ostringstream discarded;
        std::ostream& human = o.json_path == "-" ? discarded : out;
        Outcome res;
        if (sub == mc) res = cmd_matrix_check(o, human);
        else if (sub == sv) res = cmd_space_verify(o, human);
        else if (sub == cv) res = cmd_contraction_verify(o, human);
        else if (sub == so) res = cmd_solve(o, human);
        else if (sub == bo) res = cmd_bound(o, human);
        else res = cmd_reproduce(o, human);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return emit(cmd, o, std::move(res), secs, out, err);
    } catch (const IterateEscapedDomain& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace perov
