#pragma once

// Re-derivation of the fitted constants from exact h(n): the C1 exponent
// correction (least squares nested inside a 1-D / 2-D search over the shift
// c1 and the exponent e1) and the linear-in-coefficients fits C4, C5, C'_5,
// C7 and C8.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hcount/estimators.hpp"
#include "hcount/exact.hpp"

namespace hcount {

/// Sample indices lo, lo+step, ..., hi.
struct SampleGrid {
    std::vector<Index> points;

    /// n = 60 + 20k, k = 1..397 (80..8000 step 20).
    static SampleGrid standard();
    static SampleGrid range(Index lo, Index hi, Index step);

    Index max() const { return points.back(); }
    std::string describe() const;
};

struct DataSeries {
    std::vector<Real> xs;
    std::vector<Real> ys;
    std::string label;

    /// Throws std::invalid_argument unless sizes match, size >= 2 and xs is
    /// strictly increasing.
    void validate() const;
};

struct LinearFit {
    Real a = 0;    // slope
    Real b = 0;    // intercept
    Real rms = 0;  // sqrt(mean squared residual)
};

/// Closed-form least squares y ~ a x + b from the sample moments:
/// a = (mean(xy) - mean(x) mean(y)) / (mean(x^2) - mean(x)^2), b = mean(y) - a mean(x).
/// DegenerateError when all xs are equal.
LinearFit linear_lsq(std::span<const Real> xs, std::span<const Real> ys);
LinearFit linear_lsq(const DataSeries& series);

enum class FitTarget { C1_EXPONENT, C4, C5, C5_LINEAR, C7A, C7B, C8_ODD, C8_EVEN, OTHER };

std::string_view fit_target_name(FitTarget t);

struct FitResult {
    FitTarget target = FitTarget::OTHER;
    std::string label;
    std::vector<Real> coefficients;
    Real objective_value = 0;  // rms residual (E1 for the C1 fit)
    std::vector<Real> paper_values;
    Real max_rel_deviation = 0;  // max_i |coef_i - published_i| / |published_i|
    Real condition_number = 0;   // of the column-scaled normal matrix; 0 when not applicable
    std::string grid;            // sampling description

    void finish_against(std::vector<Real> published);
};

/// Series (n, C1(n)) with C1(n) = 3/(2 pi^2) * ln(12 sqrt(2 n^3) h(n) / pi)^2 - n.
DataSeries build_c1_series(const PartitionTable& table, const SampleGrid& grid);

/// Mean squared residual of the best line through (1/(n + c1)^e1, C1(n)),
/// together with that line. e1 == 0.5 uses 1/sqrt(.) so g3(0.5, c) == g2(c).
struct NestedFit {
    LinearFit line;
    Real mean_square = 0;
};
NestedFit regress_shifted_power(Real e1, Real c1, const DataSeries& series);

Real g2_objective(Real c1, const DataSeries& series);
Real g3_objective(Real e1, Real c1, const DataSeries& series);

/// Plain mean squared residual of C1(n) - a1/sqrt(n + c1) - b1 with b1
/// eliminated as the mean (the (a1, c1) surface).
Real g1_objective(Real a1, Real c1, const DataSeries& series);

/// Golden-section search for a minimiser of f on [lo, hi] to bracket width tol.
struct ScalarMin {
    Real x = 0;
    Real value = 0;
    int iterations = 0;
};
ScalarMin golden_section(const std::function<Real(Real)>& f, Real lo, Real hi, Real tol);

/// Minimise G2 over c1 in [lo, hi]: a coarse scan picks the basin, golden
/// section refines it. Coefficients are {a1, b1, c1}; objective is E1.
FitResult minimize_g2(const DataSeries& series, Real lo, Real hi, Real tol);

struct LatticeMin {
    Real e1 = 0;
    Real c1 = 0;
    Real value = 0;
    int local_minima = 0;  // strict 8-neighbour minima on the lattice
    std::vector<Real> e_axis;
    std::vector<Real> c_axis;
    std::vector<Real> values;  // row-major [e][c]
};

/// G3 evaluated on an e_steps x c_steps lattice over the given ranges.
LatticeMin grid_min_g3(const DataSeries& series, Real e_lo, Real e_hi, int e_steps, Real c_lo, Real c_hi,
                       int c_steps);

struct SurfaceMin {
    Real e1 = 0;
    Real c1 = 0;
    Real value = 0;
};
/// Nested golden section (outer e1, inner c1) inside the given box.
SurfaceMin refine_g3(const DataSeries& series, Real e_lo, Real e_hi, Real c_lo, Real c_hi, Real tol);

struct SurfacePoint {
    Real a1;
    Real c1;
    Real value;
};
std::vector<SurfacePoint> g1_grid(const DataSeries& series, Real a_lo, Real a_hi, int a_steps, Real c_lo,
                                  Real c_hi, int c_steps);

using BasisFunction = std::function<Real(Real)>;

/// Linear least squares y ~ sum_j coef_j * basis_j(x) via normal equations on
/// column-scaled basis values, Gaussian elimination with partial pivoting and
/// one step of iterative refinement. DegenerateError if singular.
FitResult least_squares(std::span<const Real> xs, std::span<const Real> ys, const std::vector<BasisFunction>& basis);

/// Residuals y - model(x) of a fit over a basis.
std::vector<Real> residuals(std::span<const Real> xs, std::span<const Real> ys, const std::vector<BasisFunction>& basis,
                            std::span<const Real> coefficients);

/// Target pi exp(pi sqrt(2n/3)) / (12 sqrt2 h(n)) on the grid.
DataSeries denominator_series(const PartitionTable& table, std::span<const Index> points);
/// Same minus n^{3/2}.
DataSeries reduced_denominator_series(const PartitionTable& table, std::span<const Index> points);
/// pi^2 exp(pi sqrt(2n/3)) / (24 sqrt3 n^2 (I_g(n) - h(n))); DomainError listing
/// every n with I_g(n) <= h(n).
DataSeries correction_series(const PartitionTable& table, std::span<const Index> points);

FitResult fit_c4(const PartitionTable& table, const SampleGrid& grid);
FitResult fit_c5(const PartitionTable& table, const SampleGrid& grid);
FitResult fit_c5_linear(const PartitionTable& table, const SampleGrid& grid);

enum class C7Form { A, B };
FitResult fit_c7(C7Form form, const PartitionTable& table, const SampleGrid& grid);
/// The rejected C7 shapes a/n + b and a/n + b/n^2 + c, for comparison.
FitResult fit_c7_inverse_linear(const PartitionTable& table, const SampleGrid& grid);
FitResult fit_c7_inverse_quadratic(const PartitionTable& table, const SampleGrid& grid);

struct ParityFits {
    FitResult odd;
    FitResult even;
};
/// Separate {n, sqrt n, 1} fits of the reduced denominator over odd n in 3..99
/// and even n in 4..100. Table must reach 100.
ParityFits fit_c8(const PartitionTable& table);

}  // namespace hcount
