#pragma once

// Relative errors of the estimators against exact h(n) (or p(n)), error
// tables, side-by-side comparisons, and their CSV / JSON / text renderings.

#include <string>
#include <vector>

#include "hcount/estimators.hpp"
#include "hcount/exact.hpp"
#include "hcount/fitting.hpp"

namespace hcount {

/// (estimate - exact) / exact, exact converted to long double via its top
/// 64 bits. DomainError when exact == 0.
Real relative_error(const BigCount& exact, Real estimate);

struct ErrorRow {
    Index n = 0;
    BigCount exact;
    Real estimate = 0;
    BigCount rounded;
    Real rel_err = 0;
    Real rel_err_rounded = 0;
};

struct ErrorSummary {
    Real max_abs_rel_err = 0;
    Real mean_abs_rel_err = 0;
    Index argmax = 0;
};

struct ErrorTable {
    FormulaId formula = FormulaId::IG;
    Index lo = 0, hi = 0, step = 1;
    std::vector<ErrorRow> rows;
    std::vector<std::string> notes;  // skipped indices and why
    ErrorSummary summary;
};

/// One row per in-domain n in lo, lo+step, ..., hi with a nonzero exact value.
/// h-estimators are scored against h(n); HR, RH0 and RH2 against p(n).
/// DomainError on an empty range, step 0, a formula without a fixed target
/// (AULUCK_PQ, INGHAM_GENERAL) or when every n is skipped.
ErrorTable error_table(FormulaId id, Index lo, Index hi, Index step);
/// Same, reusing a prebuilt table (must reach hi).
ErrorTable error_table(const PartitionTable& table, FormulaId id, Index lo, Index hi, Index step);

struct Comparison {
    std::vector<FormulaId> formulas;
    std::vector<ErrorTable> tables;
    std::vector<Index> ns;       // indices where every formula is defined
    std::vector<int> winner;     // per n: index into formulas of the smallest |rel_err|, ties to the first
    std::vector<int> wins;       // per formula
    std::vector<Real> mean_abs;  // per formula over ns
};

Comparison compare_formulas(const PartitionTable& table, std::span<const FormulaId> ids, Index lo, Index hi,
                            Index step);

/// n,exact,estimate,rounded,rel_err,rel_err_rounded with %.12Lg reals and LF endings.
std::string to_csv(const ErrorTable& t);
std::string to_json(const ErrorTable& t);
std::string to_text(const ErrorTable& t);

std::string to_csv(const Comparison& c);
std::string to_json(const Comparison& c);
std::string to_text(const Comparison& c);

std::string to_json(const FitResult& r);
std::string to_text(const FitResult& r);

/// %.12Lg
std::string format_real(Real x);

}  // namespace hcount
