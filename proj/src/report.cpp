#include "hcount/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hcount/errors.hpp"

namespace hcount {

namespace {

using Json = nlohmann::ordered_json;

// JSON numbers carry the same 12 significant digits as the CSV
double json_real(Real x) {
    if (!std::isfinite(x)) return static_cast<double>(x);
    return std::stod(format_real(x));
}

std::string fixed_target_error(FormulaId id) {
    return "formula " + std::string(formula_name(id)) + " has no fixed exact target for an error table";
}

}  // namespace

std::string format_real(Real x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
}

Real relative_error(const BigCount& exact, Real estimate) {
    if (exact.is_zero()) throw DomainError("relative error against an exact value of 0 is undefined");
    const ScaledValue s = exact.scaled();
    if (s.exponent < std::numeric_limits<Real>::max_exponent - 2) {
        const Real e = std::ldexp(s.mantissa, static_cast<int>(s.exponent));
        return (estimate - e) / e;
    }
    // beyond long double range: compare in scaled form
    int ex = 0;
    const Real m = std::frexp(estimate, &ex);
    return std::ldexp(m / s.mantissa, static_cast<int>(ex - s.exponent)) - 1;
}

ErrorTable error_table(FormulaId id, Index lo, Index hi, Index step) {
    if (step < 1) throw DomainError("error_table: step must be >= 1");
    if (lo > hi) throw DomainError("error_table: empty range");
    return error_table(PartitionTable(hi), id, lo, hi, step);
}

ErrorTable error_table(const PartitionTable& table, FormulaId id, Index lo, Index hi, Index step) {
    if (step < 1) throw DomainError("error_table: step must be >= 1");
    if (lo > hi) throw DomainError("error_table: empty range");
    if (id == FormulaId::AULUCK_PQ || id == FormulaId::INGHAM_GENERAL) {
        throw DomainError(fixed_target_error(id));
    }
    if (table.max_n() < hi) throw DomainError("error_table: partition table does not reach hi");

    ErrorTable t;
    t.formula = id;
    t.lo = lo;
    t.hi = hi;
    t.step = step;
    const bool vs_p = estimates_p(id);
    for (Index n = lo; n <= hi; n += step) {
        if (!in_domain(id, n)) {
            t.notes.push_back("n=" + std::to_string(n) + " skipped: outside domain of " +
                              std::string(formula_name(id)));
            continue;
        }
        const BigCount& exact = vs_p ? table.p(n) : table.h(n);
        if (exact.is_zero()) {
            t.notes.push_back("n=" + std::to_string(n) + " skipped: exact value is 0");
            continue;
        }
        const Estimate e = estimate(id, n);
        ErrorRow row;
        row.n = n;
        row.exact = exact;
        row.estimate = e.value;
        row.rounded = e.rounded;
        row.rel_err = relative_error(exact, e.value);
        const BigCount diff = e.rounded - exact;
        row.rel_err_rounded = diff.is_zero() ? Real(0) : relative_error(exact, e.rounded.to_long_double());
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw DomainError("error_table: no in-domain index in the requested range");

    Real sum = 0;
    for (const ErrorRow& r : t.rows) {
        const Real a = std::fabs(r.rel_err);
        sum += a;
        if (r.n == t.rows.front().n || a > t.summary.max_abs_rel_err) {
            t.summary.max_abs_rel_err = a;
            t.summary.argmax = r.n;
        }
    }
    t.summary.mean_abs_rel_err = sum / static_cast<Real>(t.rows.size());
    return t;
}

Comparison compare_formulas(const PartitionTable& table, std::span<const FormulaId> ids, Index lo, Index hi,
                            Index step) {
    if (ids.size() < 2) throw DomainError("compare: needs at least two formulas");
    Comparison c;
    c.formulas.assign(ids.begin(), ids.end());
    for (FormulaId id : ids) c.tables.push_back(error_table(table, id, lo, hi, step));

    std::set<Index> common;
    for (const ErrorRow& r : c.tables.front().rows) common.insert(r.n);
    for (std::size_t f = 1; f < c.tables.size(); ++f) {
        std::set<Index> here;
        for (const ErrorRow& r : c.tables[f].rows) {
            if (common.count(r.n)) here.insert(r.n);
        }
        common = std::move(here);
    }
    c.ns.assign(common.begin(), common.end());
    if (c.ns.empty()) throw DomainError("compare: no index where every formula is defined");

    const std::size_t k = ids.size();
    c.wins.assign(k, 0);
    c.mean_abs.assign(k, 0);
    std::vector<std::size_t> cursor(k, 0);
    for (Index n : c.ns) {
        int best = 0;
        Real best_err = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const auto& rows = c.tables[f].rows;
            while (rows[cursor[f]].n != n) ++cursor[f];
            const Real a = std::fabs(rows[cursor[f]].rel_err);
            c.mean_abs[f] += a;
            if (f == 0 || a < best_err) {
                best = static_cast<int>(f);
                best_err = a;
            }
        }
        c.winner.push_back(best);
        ++c.wins[best];
    }
    for (Real& m : c.mean_abs) m /= static_cast<Real>(c.ns.size());
    return c;
}

std::string to_csv(const ErrorTable& t) {
    std::string out = "n,exact,estimate,rounded,rel_err,rel_err_rounded\n";
    for (const ErrorRow& r : t.rows) {
        out += std::to_string(r.n) + "," + r.exact.to_string() + "," + format_real(r.estimate) + "," +
               r.rounded.to_string() + "," + format_real(r.rel_err) + "," + format_real(r.rel_err_rounded) + "\n";
    }
    return out;
}

namespace {

Json table_json(const ErrorTable& t) {
    Json j;
    j["formula"] = std::string(formula_name(t.formula));
    j["range"] = {{"lo", t.lo}, {"hi", t.hi}, {"step", t.step}};
    Json rows = Json::array();
    for (const ErrorRow& r : t.rows) {
        rows.push_back({{"n", r.n},
                        {"exact", r.exact.to_string()},
                        {"estimate", json_real(r.estimate)},
                        {"rounded", r.rounded.to_string()},
                        {"rel_err", json_real(r.rel_err)},
                        {"rel_err_rounded", json_real(r.rel_err_rounded)}});
    }
    j["rows"] = std::move(rows);
    j["summary"] = {{"max_abs_rel_err", json_real(t.summary.max_abs_rel_err)},
                    {"mean_abs_rel_err", json_real(t.summary.mean_abs_rel_err)},
                    {"argmax", t.summary.argmax}};
    j["notes"] = t.notes;
    return j;
}

std::string summary_line(const ErrorTable& t) {
    return std::string(formula_name(t.formula)) + ": " + std::to_string(t.rows.size()) +
           " rows, max |rel_err| = " + format_real(t.summary.max_abs_rel_err) + " at n = " +
           std::to_string(t.summary.argmax) + ", mean |rel_err| = " + format_real(t.summary.mean_abs_rel_err);
}

}  // namespace

std::string to_json(const ErrorTable& t) { return table_json(t).dump(2) + "\n"; }

std::string to_text(const ErrorTable& t) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%8s  %19s  %19s  %19s  %19s\n", "n", "estimate", "rel_err", "|rel_err|",
                  "rel_err_rounded");
    os << line;
    for (const ErrorRow& r : t.rows) {
        std::snprintf(line, sizeof line, "%8zu  %19.12Lg  %19.12Lg  %19.12Lg  %19.12Lg\n", r.n, r.estimate, r.rel_err,
                      std::fabs(r.rel_err), r.rel_err_rounded);
        os << line;
    }
    for (const std::string& note : t.notes) os << "# " << note << "\n";
    os << summary_line(t) << "\n";
    return os.str();
}

std::string to_csv(const Comparison& c) {
    std::string out = "n";
    for (FormulaId id : c.formulas) out += ",rel_err_" + std::string(formula_name(id));
    out += ",winner\n";
    std::vector<std::size_t> cursor(c.formulas.size(), 0);
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
        out += std::to_string(c.ns[i]);
        for (std::size_t f = 0; f < c.formulas.size(); ++f) {
            const auto& rows = c.tables[f].rows;
            while (rows[cursor[f]].n != c.ns[i]) ++cursor[f];
            out += "," + format_real(rows[cursor[f]].rel_err);
        }
        out += "," + std::string(formula_name(c.formulas[c.winner[i]])) + "\n";
    }
    return out;
}

std::string to_json(const Comparison& c) {
    Json j;
    Json per = Json::array();
    for (std::size_t f = 0; f < c.formulas.size(); ++f) {
        per.push_back({{"formula", std::string(formula_name(c.formulas[f]))},
                       {"wins", c.wins[f]},
                       {"mean_abs_rel_err", json_real(c.mean_abs[f])},
                       {"max_abs_rel_err", json_real(c.tables[f].summary.max_abs_rel_err)}});
    }
    j["formulas"] = std::move(per);
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
        rows.push_back({{"n", c.ns[i]}, {"winner", std::string(formula_name(c.formulas[c.winner[i]]))}});
    }
    j["per_n"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string to_text(const Comparison& c) {
    std::ostringstream os;
    os << "compared on " << c.ns.size() << " indices\n";
    for (std::size_t f = 0; f < c.formulas.size(); ++f) {
        os << formula_name(c.formulas[f]) << ": wins " << c.wins[f] << ", mean |rel_err| "
           << format_real(c.mean_abs[f]) << ", max |rel_err| " << format_real(c.tables[f].summary.max_abs_rel_err)
           << "\n";
    }
    return os.str();
}

std::string to_json(const FitResult& r) {
    Json j;
    j["target"] = std::string(fit_target_name(r.target));
    j["label"] = r.label;
    Json coef = Json::array();
    for (Real v : r.coefficients) coef.push_back(json_real(v));
    j["coefficients"] = std::move(coef);
    j["objective_value"] = json_real(r.objective_value);
    Json published = Json::array();
    for (Real v : r.paper_values) published.push_back(json_real(v));
    j["paper_values"] = std::move(published);
    j["max_rel_deviation"] = json_real(r.max_rel_deviation);
    j["condition_number"] = json_real(r.condition_number);
    j["grid"] = r.grid;
    return j.dump(2) + "\n";
}

std::string to_text(const FitResult& r) {
    std::ostringstream os;
    os << fit_target_name(r.target) << "  " << r.label << "\n";
    for (std::size_t i = 0; i < r.coefficients.size(); ++i) {
        os << "  coef[" << i << "] = " << format_real(r.coefficients[i]);
        if (i < r.paper_values.size()) os << "   (published " << format_real(r.paper_values[i]) << ")";
        os << "\n";
    }
    os << "  objective = " << format_real(r.objective_value) << "\n";
    if (!r.paper_values.empty()) os << "  max relative deviation = " << format_real(r.max_rel_deviation) << "\n";
    if (r.condition_number > 0) os << "  condition number = " << format_real(r.condition_number) << "\n";
    if (!r.grid.empty()) os << "  grid = " << r.grid << "\n";
    return os.str();
}

}  // namespace hcount
