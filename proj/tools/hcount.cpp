// hcount: exact counts of partitions without unit parts, the closed-form
// estimators, error tables and the constant refits.
//
// Exit codes: 0 success, 1 verification mismatch, 2 domain or usage error,
// 3 numerical degeneracy.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcount/errors.hpp"
#include "hcount/estimators.hpp"
#include "hcount/exact.hpp"
#include "hcount/fitting.hpp"
#include "hcount/report.hpp"

using namespace hcount;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitDomain = 2;
constexpr int kExitDegenerate = 3;

// Largest n accepted per exact method; beyond these a run takes minutes.
constexpr Index kRecursionMax = 100000;
constexpr Index kSumPqMax = 20000;

struct Range {
    Index lo = 0, hi = 0, step = 1;
};

Index parse_index(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw DomainError("not a nonnegative integer: '" + s + "'");
    }
    try {
        return static_cast<Index>(std::stoull(s));
    } catch (const std::out_of_range&) {
        throw DomainError("integer out of range: '" + s + "'");
    }
}

// lo:hi:step, lo:hi (step 1) or a single n
Range parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (!text.empty() && text.back() == ':') parts.push_back("");
    Range r;
    if (parts.size() == 1) {
        r.lo = r.hi = parse_index(parts[0]);
    } else if (parts.size() == 2 || parts.size() == 3) {
        r.lo = parse_index(parts[0]);
        r.hi = parse_index(parts[1]);
        if (parts.size() == 3) r.step = parse_index(parts[2]);
    } else {
        throw DomainError("range must be lo:hi:step, got '" + text + "'");
    }
    if (r.lo > r.hi) throw DomainError("range '" + text + "' has lo > hi");
    if (r.step < 1) throw DomainError("range '" + text + "' needs step >= 1");
    return r;
}

FormulaId parse_formula_or_throw(const std::string& name) {
    const auto id = parse_formula(name);
    if (!id) throw DomainError("unknown formula '" + name + "'");
    return *id;
}

Index oracle_bound_from_env(Index fallback) {
    const char* env = std::getenv("HCOUNT_ORACLE_BOUND");
    if (env == nullptr || *env == '\0') return fallback;
    return parse_index(env);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw DomainError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct Options {
    std::string format;  // empty: json for fit, text otherwise
    std::string output;
    Index oracle_bound = kDefaultOracleBound;
};

BigCount exact_by(const std::string& method, Index n, Index oracle_bound) {
    if (method == "recursion") {
        if (n > kRecursionMax) throw DomainError("recursion supports n <= " + std::to_string(kRecursionMax));
        return h_exact_recursion(n);
    }
    if (method == "difference") {
        if (n > kRecursionMax) throw DomainError("difference supports n <= " + std::to_string(kRecursionMax));
        return h_exact_difference(n);
    }
    if (method == "sum-pq") {
        if (n > kSumPqMax) throw DomainError("sum-pq supports n <= " + std::to_string(kSumPqMax));
        return h_exact_sum_pq(n);
    }
    if (method == "oracle") return oracle_count(n, 2, oracle_bound);
    throw DomainError("unknown method '" + method + "'");
}

int cmd_exact(const Options& opt, Index n, const std::string& method, bool verify) {
    nlohmann::ordered_json j;
    std::string text;
    if (!verify) {
        const BigCount v = exact_by(method, n, opt.oracle_bound);
        j = {{"n", n}, {"method", method}, {"value", v.to_string()}};
        text = v.to_string() + "\n";
    } else {
        std::vector<std::string> methods{"recursion", "difference"};
        if (n >= 2 && n <= kSumPqMax) methods.push_back("sum-pq");
        if (n <= opt.oracle_bound) methods.push_back("oracle");
        std::map<std::string, BigCount> values;
        for (const auto& m : methods) values.emplace(m, exact_by(m, n, opt.oracle_bound));
        const BigCount& ref = values.at("recursion");
        bool agree = true;
        nlohmann::ordered_json per;
        for (const auto& m : methods) {
            agree = agree && values.at(m) == ref;
            per[m] = values.at(m).to_string();
        }
        Output out(opt.output);
        std::ostream& os = out.stream();
        if (opt.format == "json") {
            j = {{"n", n}, {"value", ref.to_string()}, {"methods", per}, {"agree", agree}};
            os << j.dump(2) << "\n";
        } else if (opt.format == "csv") {
            os << "method,value\n";
            for (const auto& m : methods) os << m << "," << values.at(m).to_string() << "\n";
        } else {
            os << ref.to_string() << "\n";
            for (const auto& m : methods) os << "  " << m << ": " << values.at(m).to_string() << "\n";
            os << (agree ? "all methods agree\n" : "MISMATCH between methods\n");
        }
        return agree ? 0 : kExitMismatch;
    }
    Output out(opt.output);
    if (opt.format == "json") {
        out.stream() << j.dump(2) << "\n";
    } else if (opt.format == "csv") {
        out.stream() << "n,value\n" << n << "," << j["value"].get<std::string>() << "\n";
    } else {
        out.stream() << text;
    }
    return 0;
}

int cmd_estimate(const Options& opt, Index n, const std::string& formula, bool round, const FormulaParams& params) {
    const FormulaId id = parse_formula_or_throw(formula);
    const Estimate e = estimate(id, n, params);
    const bool integral = round || is_rounded(id);
    Output out(opt.output);
    if (opt.format == "json") {
        nlohmann::ordered_json j = {{"n", n},
                                    {"formula", std::string(formula_name(id))},
                                    {"value", std::stod(format_real(e.value))},
                                    {"rounded", e.rounded.to_string()}};
        out.stream() << j.dump(2) << "\n";
    } else if (opt.format == "csv") {
        out.stream() << "n,formula,value,rounded\n"
                     << n << "," << formula_name(id) << "," << format_real(e.value) << "," << e.rounded.to_string()
                     << "\n";
    } else {
        out.stream() << (integral ? e.rounded.to_string() : format_real(e.value)) << "\n";
    }
    return 0;
}

int cmd_table(const Options& opt, const Range& r, bool with_p) {
    if (r.hi > kRecursionMax) throw DomainError("table supports n <= " + std::to_string(kRecursionMax));
    const PartitionTable table(r.hi);
    Output out(opt.output);
    std::ostream& os = out.stream();
    if (opt.format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (Index n = r.lo; n <= r.hi; n += r.step) {
            nlohmann::ordered_json row = {{"n", n}, {"h", table.h(n).to_string()}};
            if (with_p) row["p"] = table.p(n).to_string();
            rows.push_back(std::move(row));
        }
        os << rows.dump(2) << "\n";
        return 0;
    }
    if (opt.format == "csv") os << (with_p ? "n,h,p\n" : "n,h\n");
    for (Index n = r.lo; n <= r.hi; n += r.step) {
        const char* sep = opt.format == "csv" ? "," : "  ";
        os << n << sep << table.h(n).to_string();
        if (with_p) os << sep << table.p(n).to_string();
        os << "\n";
    }
    return 0;
}

int cmd_errors(const Options& opt, const std::string& formula, const Range& r) {
    if (r.hi > kRecursionMax) throw DomainError("errors supports n <= " + std::to_string(kRecursionMax));
    const ErrorTable t = error_table(parse_formula_or_throw(formula), r.lo, r.hi, r.step);
    Output out(opt.output);
    if (opt.format == "csv") {
        out.stream() << to_csv(t);
    } else if (opt.format == "json") {
        out.stream() << to_json(t);
    } else {
        out.stream() << to_text(t);
    }
    return 0;
}

int cmd_compare(const Options& opt, const std::vector<std::string>& formulas, const Range& r) {
    std::vector<FormulaId> ids;
    for (const auto& f : formulas) ids.push_back(parse_formula_or_throw(f));
    if (r.hi > kRecursionMax) throw DomainError("compare supports n <= " + std::to_string(kRecursionMax));
    const PartitionTable table(r.hi);
    const Comparison c = compare_formulas(table, ids, r.lo, r.hi, r.step);
    Output out(opt.output);
    if (opt.format == "csv") {
        out.stream() << to_csv(c);
    } else if (opt.format == "json") {
        out.stream() << to_json(c);
    } else {
        out.stream() << to_text(c);
    }
    return 0;
}

void emit_fit(std::ostream& os, const Options& opt, const FitResult& r) {
    os << (opt.format == "text" ? to_text(r) : to_json(r));
}

int cmd_fit(const Options& opt, const std::string& target, const Range& g) {
    static const std::vector<std::string> kTargets{"c1", "c4", "c5", "c5-linear", "c7a", "c7b", "c7-alt",
                                                   "c8", "g3", "g1-grid"};
    if (std::find(kTargets.begin(), kTargets.end(), target) == kTargets.end()) {
        throw DomainError("unknown fit target '" + target + "'");
    }
    if (g.hi > kRecursionMax) throw DomainError("fit grid supports n <= " + std::to_string(kRecursionMax));
    const SampleGrid grid = SampleGrid::range(g.lo, g.hi, g.step);
    const Index reach = target == "c8" ? 100 : grid.max();
    const PartitionTable table(reach);
    Output out(opt.output);
    std::ostream& os = out.stream();
    Options fit_opt = opt;
    if (fit_opt.format == "csv" && target != "g1-grid") fit_opt.format = "json";

    if (target == "c1") {
        emit_fit(os, fit_opt, minimize_g2(build_c1_series(table, grid), -50, 100, Real(1e-7)));
    } else if (target == "c4") {
        emit_fit(os, fit_opt, fit_c4(table, grid));
    } else if (target == "c5") {
        emit_fit(os, fit_opt, fit_c5(table, grid));
    } else if (target == "c5-linear") {
        emit_fit(os, fit_opt, fit_c5_linear(table, grid));
    } else if (target == "c7a") {
        emit_fit(os, fit_opt, fit_c7(C7Form::A, table, grid));
    } else if (target == "c7b") {
        emit_fit(os, fit_opt, fit_c7(C7Form::B, table, grid));
    } else if (target == "c7-alt") {
        emit_fit(os, fit_opt, fit_c7_inverse_linear(table, grid));
        emit_fit(os, fit_opt, fit_c7_inverse_quadratic(table, grid));
    } else if (target == "c8") {
        const ParityFits f = fit_c8(table);
        emit_fit(os, fit_opt, f.odd);
        emit_fit(os, fit_opt, f.even);
    } else if (target == "g3") {
        const DataSeries s = build_c1_series(table, grid);
        const LatticeMin lm = grid_min_g3(s, Real(0.1), Real(0.9), 33, -50, 100, 31);
        const SurfaceMin sm = refine_g3(s, lm.e1 - Real(0.025), lm.e1 + Real(0.025), lm.c1 - 5, lm.c1 + 5, Real(1e-7));
        nlohmann::ordered_json j = {
            {"lattice", {{"e1", std::stod(format_real(lm.e1))}, {"c1", std::stod(format_real(lm.c1))},
                         {"g3", std::stod(format_real(lm.value))}, {"local_minima", lm.local_minima}}},
            {"refined", {{"e1", std::stod(format_real(sm.e1))}, {"c1", std::stod(format_real(sm.c1))},
                         {"g3", std::stod(format_real(sm.value))}}},
            {"grid", grid.describe()}};
        if (opt.format == "text") {
            os << "lattice minimum e1=" << format_real(lm.e1) << " c1=" << format_real(lm.c1)
               << " G3=" << format_real(lm.value) << " (" << lm.local_minima << " local minima)\n"
               << "refined minimum e1=" << format_real(sm.e1) << " c1=" << format_real(sm.c1)
               << " G3=" << format_real(sm.value) << "\n";
        } else {
            os << j.dump(2) << "\n";
        }
    } else {  // g1-grid
        const DataSeries s = build_c1_series(table, grid);
        os << "a1,c1,g1\n";
        for (const SurfacePoint& p : g1_grid(s, Real(0.3), Real(0.7), 41, -50, 100, 61)) {
            os << format_real(p.a1) << "," << format_real(p.c1) << "," << format_real(p.value) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact counts and estimates of h(n), the number of partitions of n without parts equal to 1"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    Index bound_flag = 0;
    app.add_option("--format", opt.format, "Output format: text | csv | json (default json for fit, else text)")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("-o,--output", opt.output, "Output file (default: standard output)");
    app.add_option("--oracle-bound", bound_flag, "Largest n for the enumeration oracle (env HCOUNT_ORACLE_BOUND)");

    std::string n_text, range_text, method = "recursion", formula, target, grid_text = "80:8000:20";
    bool verify = false, round = false, with_p = false;
    FormulaParams params;
    std::vector<std::string> formulas;

    auto* exact = app.add_subcommand("exact", "Exact h(n)");
    exact->add_option("n", n_text, "Index n")->required();
    exact->add_option("--method", method, "recursion | difference | sum-pq | oracle")
        ->check(CLI::IsMember({"recursion", "difference", "sum-pq", "oracle"}))
        ->capture_default_str();
    exact->add_flag("--verify", verify, "Run every applicable method and compare");

    auto* est = app.add_subcommand("estimate", "Closed-form estimate at n");
    est->add_option("n", n_text, "Index n")->required();
    est->add_option("--formula", formula, "Formula name")->required();
    est->add_flag("--round", round, "Print floor(value + 1/2)");
    est->add_option("--a", params.a, "Ingham a (ingham-general)");
    est->add_option("--b", params.b, "Ingham b (ingham-general)");
    est->add_option("--q", params.q, "Number of parts (auluck-pq)");

    auto* table = app.add_subcommand("table", "Exact h(n) over a range");
    table->add_option("range", range_text, "lo:hi:step")->required();
    table->add_flag("--with-p", with_p, "Add p(n)");

    auto* errors = app.add_subcommand("errors", "Relative-error table of one formula");
    errors->add_option("formula", formula, "Formula name")->required();
    errors->add_option("range", range_text, "lo:hi:step")->required();

    auto* fit = app.add_subcommand("fit", "Refit a constant family from exact data");
    fit->add_option("target", target, "c1 | c4 | c5 | c5-linear | c7a | c7b | c7-alt | c8 | g3 | g1-grid")
        ->required();
    fit->add_option("--grid", grid_text, "Sampling grid lo:hi:step")->capture_default_str();

    auto* compare = app.add_subcommand("compare", "Compare formulas over a range");
    compare->add_option("formulas", formula, "Comma-separated formula names")->required();
    compare->add_option("range", range_text, "lo:hi:step")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitDomain;
    }

    try {
        if (opt.format.empty()) opt.format = *fit ? "json" : "text";
        opt.oracle_bound = bound_flag > 0 ? bound_flag : oracle_bound_from_env(kDefaultOracleBound);
        if (*exact) return cmd_exact(opt, parse_index(n_text), method, verify);
        if (*est) return cmd_estimate(opt, parse_index(n_text), formula, round, params);
        if (*table) return cmd_table(opt, parse_range(range_text), with_p);
        if (*errors) return cmd_errors(opt, formula, parse_range(range_text));
        if (*fit) return cmd_fit(opt, target, parse_range(grid_text));
        if (*compare) {
            std::stringstream ss(formula);
            for (std::string f; std::getline(ss, f, ',');) formulas.push_back(f);
            return cmd_compare(opt, formulas, parse_range(range_text));
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitDomain;
}
