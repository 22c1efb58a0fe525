#include "hcount/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hcount/errors.hpp"

namespace hcount {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
const Real kExpScale = kPi * std::sqrt(Real(2) / Real(3));
const Real kSqrt2 = std::sqrt(Real(2));
const Real kSqrt3 = std::sqrt(Real(3));

Real as_real(Index n) { return static_cast<Real>(n); }

void require_covered(const PartitionTable& table, Index max_n) {
    if (table.max_n() < max_n) {
        throw DomainError("partition table reaches " + std::to_string(table.max_n()) + ", fit needs " +
                          std::to_string(max_n));
    }
}

std::vector<Real> to_reals(std::span<const Index> points) {
    std::vector<Real> xs;
    xs.reserve(points.size());
    for (Index n : points) xs.push_back(as_real(n));
    return xs;
}

// ln(pi exp(pi sqrt(2n/3)) / (12 sqrt2 h(n)))
Real log_denominator(const PartitionTable& table, Index n) {
    if (table.h(n).is_zero()) throw DomainError("h(" + std::to_string(n) + ") = 0 has no denominator");
    return std::log(kPi / (12 * kSqrt2)) + kExpScale * std::sqrt(as_real(n)) - table.h(n).log();
}

std::string describe_points(std::span<const Index> points) {
    if (points.empty()) return "empty";
    if (points.size() == 1) return std::to_string(points.front());
    const Index step = points[1] - points[0];
    return std::to_string(points.front()) + ":" + std::to_string(points.back()) + ":" + std::to_string(step);
}

}  // namespace

SampleGrid SampleGrid::standard() {
    SampleGrid g;
    for (Index k = 1; k <= 397; ++k) g.points.push_back(60 + 20 * k);
    return g;
}

SampleGrid SampleGrid::range(Index lo, Index hi, Index step) {
    if (step < 1 || lo > hi) throw DomainError("grid range needs lo <= hi and step >= 1");
    SampleGrid g;
    for (Index n = lo; n <= hi; n += step) g.points.push_back(n);
    return g;
}

std::string SampleGrid::describe() const { return describe_points(points); }

void DataSeries::validate() const {
    if (xs.size() != ys.size()) throw std::invalid_argument("DataSeries " + label + ": xs/ys size mismatch");
    if (xs.size() < 2) throw std::invalid_argument("DataSeries " + label + ": needs at least 2 points");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("DataSeries " + label + ": xs not strictly increasing");
    }
}

LinearFit linear_lsq(std::span<const Real> xs, std::span<const Real> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("linear_lsq: needs >= 2 paired points");
    const Real m = static_cast<Real>(xs.size());
    Real sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const Real mx = sx / m, my = sy / m;
    // centred moments; algebraically the same as mean(xy) - mean(x) mean(y)
    Real sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Real dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (!(sxx > 0)) throw DegenerateError("linear_lsq: all x values are equal");
    LinearFit fit;
    fit.a = sxy / sxx;
    fit.b = my - fit.a * mx;
    Real ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Real r = ys[i] - (fit.a * xs[i] + fit.b);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / m);
    return fit;
}

LinearFit linear_lsq(const DataSeries& series) { return linear_lsq(series.xs, series.ys); }

std::string_view fit_target_name(FitTarget t) {
    switch (t) {
        case FitTarget::C1_EXPONENT: return "C1_EXPONENT";
        case FitTarget::C4: return "C4";
        case FitTarget::C5: return "C5";
        case FitTarget::C5_LINEAR: return "C5_LINEAR";
        case FitTarget::C7A: return "C7A";
        case FitTarget::C7B: return "C7B";
        case FitTarget::C8_ODD: return "C8_ODD";
        case FitTarget::C8_EVEN: return "C8_EVEN";
        case FitTarget::OTHER: return "OTHER";
    }
    return "OTHER";
}

void FitResult::finish_against(std::vector<Real> published) {
    paper_values = std::move(published);
    max_rel_deviation = 0;
    const std::size_t k = std::min(paper_values.size(), coefficients.size());
    for (std::size_t i = 0; i < k; ++i) {
        const Real dev = std::fabs(coefficients[i] - paper_values[i]) / std::fabs(paper_values[i]);
        max_rel_deviation = std::max(max_rel_deviation, dev);
    }
}

DataSeries build_c1_series(const PartitionTable& table, const SampleGrid& grid) {
    require_covered(table, grid.max());
    DataSeries s;
    s.label = "C1";
    s.xs = to_reals(grid.points);
    s.ys.reserve(grid.points.size());
    const Real scale = 3 / (2 * kPi * kPi);
    for (Index n : grid.points) {
        const Real x = as_real(n);
        const Real l = std::log(12 * std::sqrt(2 * x * x * x) / kPi) + table.h(n).log();
        s.ys.push_back(scale * l * l - x);
    }
    return s;
}

NestedFit regress_shifted_power(Real e1, Real c1, const DataSeries& series) {
    std::vector<Real> us;
    us.reserve(series.xs.size());
    for (Real x : series.xs) {
        const Real base = x + c1;
        if (!(base > 0)) {
            throw DomainError("shift c1=" + std::to_string(static_cast<double>(c1)) + " makes n + c1 <= 0 at n=" +
                              std::to_string(static_cast<double>(x)));
        }
        us.push_back(e1 == Real(0.5) ? 1 / std::sqrt(base) : std::pow(base, -e1));
    }
    NestedFit out;
    out.line = linear_lsq(us, series.ys);
    out.mean_square = out.line.rms * out.line.rms;
    return out;
}

Real g2_objective(Real c1, const DataSeries& series) { return regress_shifted_power(Real(0.5), c1, series).mean_square; }

Real g3_objective(Real e1, Real c1, const DataSeries& series) {
    if (!(e1 > 0) || !(e1 < 1)) throw DomainError("g3: exponent e1 must lie in (0, 1)");
    return regress_shifted_power(e1, c1, series).mean_square;
}

Real g1_objective(Real a1, Real c1, const DataSeries& series) {
    std::vector<Real> r;
    r.reserve(series.xs.size());
    Real mean = 0;
    for (std::size_t i = 0; i < series.xs.size(); ++i) {
        const Real base = series.xs[i] + c1;
        if (!(base > 0)) throw DomainError("g1: n + c1 <= 0");
        r.push_back(series.ys[i] - a1 / std::sqrt(base));
        mean += r.back();
    }
    mean /= static_cast<Real>(r.size());
    Real ss = 0;
    for (Real v : r) ss += (v - mean) * (v - mean);
    return ss / static_cast<Real>(r.size());
}

ScalarMin golden_section(const std::function<Real(Real)>& f, Real lo, Real hi, Real tol) {
    if (!(lo < hi)) throw DomainError("golden_section: needs lo < hi");
    if (!(tol > 0)) throw DomainError("golden_section: needs tol > 0");
    const Real inv_phi = (std::sqrt(Real(5)) - 1) / 2;
    Real a = lo, b = hi;
    Real x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    Real f1 = f(x1), f2 = f(x2);
    int it = 0;
    while (b - a > tol) {
        ++it;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    ScalarMin m;
    m.x = (a + b) / 2;
    m.value = f(m.x);
    m.iterations = it;
    return m;
}

FitResult minimize_g2(const DataSeries& series, Real lo, Real hi, Real tol) {
    series.validate();
    if (!(lo < hi)) throw DomainError("minimize_g2: needs lo < hi");
    auto g = [&](Real c) { return g2_objective(c, series); };

    // coarse scan to locate the basin; golden section then works on a bracket
    constexpr int kScan = 300;
    const Real h = (hi - lo) / kScan;
    int best = 0;
    Real best_value = std::numeric_limits<Real>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const Real v = g(lo + h * i);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const Real a = lo + h * std::max(best - 1, 0);
    const Real b = lo + h * std::min(best + 1, kScan);
    const ScalarMin m = golden_section(g, a, b, tol);

    const NestedFit nf = regress_shifted_power(Real(0.5), m.x, series);
    FitResult r;
    r.target = FitTarget::C1_EXPONENT;
    r.label = "C1(n) = a1/sqrt(n + c1) + b1";
    r.coefficients = {nf.line.a, nf.line.b, m.x};
    r.objective_value = nf.mean_square;
    const auto& k = constants();
    r.finish_against({k.a1, k.b1, k.c1});
    return r;
}

LatticeMin grid_min_g3(const DataSeries& series, Real e_lo, Real e_hi, int e_steps, Real c_lo, Real c_hi,
                       int c_steps) {
    series.validate();
    if (e_steps < 2 || c_steps < 2 || !(e_lo < e_hi) || !(c_lo < c_hi)) {
        throw DomainError("grid_min_g3: needs >= 2 steps per axis over nonempty ranges");
    }
    LatticeMin out;
    for (int i = 0; i < e_steps; ++i) out.e_axis.push_back(e_lo + (e_hi - e_lo) * i / (e_steps - 1));
    for (int j = 0; j < c_steps; ++j) out.c_axis.push_back(c_lo + (c_hi - c_lo) * j / (c_steps - 1));
    out.values.resize(static_cast<std::size_t>(e_steps) * c_steps);
    auto at = [&](int i, int j) -> Real& { return out.values[static_cast<std::size_t>(i) * c_steps + j]; };

    out.value = std::numeric_limits<Real>::infinity();
    for (int i = 0; i < e_steps; ++i) {
        for (int j = 0; j < c_steps; ++j) {
            at(i, j) = g3_objective(out.e_axis[i], out.c_axis[j], series);
            if (at(i, j) < out.value) {
                out.value = at(i, j);
                out.e1 = out.e_axis[i];
                out.c1 = out.c_axis[j];
            }
        }
    }
    for (int i = 0; i < e_steps; ++i) {
        for (int j = 0; j < c_steps; ++j) {
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= e_steps || nj >= c_steps) continue;
                    if (!(at(i, j) < at(ni, nj))) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (minimum) ++out.local_minima;
        }
    }
    return out;
}

SurfaceMin refine_g3(const DataSeries& series, Real e_lo, Real e_hi, Real c_lo, Real c_hi, Real tol) {
    auto inner = [&](Real e) { return golden_section([&](Real c) { return g3_objective(e, c, series); }, c_lo, c_hi, tol); };
    const ScalarMin outer = golden_section([&](Real e) { return inner(e).value; }, e_lo, e_hi, tol);
    const ScalarMin best_c = inner(outer.x);
    return {outer.x, best_c.x, best_c.value};
}

std::vector<SurfacePoint> g1_grid(const DataSeries& series, Real a_lo, Real a_hi, int a_steps, Real c_lo,
                                  Real c_hi, int c_steps) {
    if (a_steps < 2 || c_steps < 2) throw DomainError("g1_grid: needs >= 2 steps per axis");
    std::vector<SurfacePoint> out;
    out.reserve(static_cast<std::size_t>(a_steps) * c_steps);
    for (int i = 0; i < a_steps; ++i) {
        const Real a = a_lo + (a_hi - a_lo) * i / (a_steps - 1);
        for (int j = 0; j < c_steps; ++j) {
            const Real c = c_lo + (c_hi - c_lo) * j / (c_steps - 1);
            out.push_back({a, c, g1_objective(a, c, series)});
        }
    }
    return out;
}

namespace {

using Matrix = std::vector<std::vector<Real>>;

// Gaussian elimination with partial pivoting on a copy of A.
std::vector<Real> solve(Matrix a, std::vector<Real> b) {
    const std::size_t k = b.size();
    Real scale = 0;
    for (const auto& row : a) {
        for (Real v : row) scale = std::max(scale, std::fabs(v));
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        if (!(std::fabs(a[pivot][col]) > scale * std::numeric_limits<Real>::epsilon())) {
            throw DegenerateError("least squares: singular normal matrix");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < k; ++r) {
            const Real f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < k; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Real> x(k);
    for (std::size_t i = k; i-- > 0;) {
        Real s = b[i];
        for (std::size_t c = i + 1; c < k; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

Real one_norm(const Matrix& a) {
    Real best = 0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        Real s = 0;
        for (const auto& row : a) s += std::fabs(row[c]);
        best = std::max(best, s);
    }
    return best;
}

// 1-norm condition number, inverse formed column by column
Real condition(const Matrix& a) {
    const std::size_t k = a.size();
    Matrix inv(k, std::vector<Real>(k));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Real> e(k, 0);
        e[j] = 1;
        const auto col = solve(a, e);
        for (std::size_t i = 0; i < k; ++i) inv[i][j] = col[i];
    }
    return one_norm(a) * one_norm(inv);
}

}  // namespace

FitResult least_squares(std::span<const Real> xs, std::span<const Real> ys, const std::vector<BasisFunction>& basis) {
    const std::size_t m = xs.size(), k = basis.size();
    if (m != ys.size()) throw std::invalid_argument("least_squares: xs/ys size mismatch");
    if (k == 0 || m < k) throw DegenerateError("least_squares: fewer points than basis functions");

    // design matrix with each column scaled to unit max magnitude
    Matrix design(m, std::vector<Real>(k));
    std::vector<Real> col_scale(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            design[i][j] = basis[j](xs[i]);
            col_scale[j] = std::max(col_scale[j], std::fabs(design[i][j]));
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (!(col_scale[j] > 0)) throw DegenerateError("least_squares: basis function vanishes on every point");
        for (std::size_t i = 0; i < m; ++i) design[i][j] /= col_scale[j];
    }

    Matrix normal(k, std::vector<Real>(k, 0));
    std::vector<Real> rhs(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            rhs[r] += design[i][r] * ys[i];
            for (std::size_t c = r; c < k; ++c) normal[r][c] += design[i][r] * design[i][c];
        }
    }
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < r; ++c) normal[r][c] = normal[c][r];
    }

    std::vector<Real> coef = solve(normal, rhs);
    // one step of iterative refinement on the normal equations
    std::vector<Real> resid(k);
    for (std::size_t r = 0; r < k; ++r) {
        Real s = rhs[r];
        for (std::size_t c = 0; c < k; ++c) s -= normal[r][c] * coef[c];
        resid[r] = s;
    }
    const std::vector<Real> delta = solve(normal, resid);
    for (std::size_t j = 0; j < k; ++j) coef[j] += delta[j];

    FitResult out;
    out.condition_number = condition(normal);
    out.coefficients.resize(k);
    for (std::size_t j = 0; j < k; ++j) out.coefficients[j] = coef[j] / col_scale[j];
    Real ss = 0;
    for (Real r : residuals(xs, ys, basis, out.coefficients)) ss += r * r;
    out.objective_value = std::sqrt(ss / static_cast<Real>(m));
    return out;
}

std::vector<Real> residuals(std::span<const Real> xs, std::span<const Real> ys, const std::vector<BasisFunction>& basis,
                            std::span<const Real> coefficients) {
    std::vector<Real> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Real model = 0;
        for (std::size_t j = 0; j < basis.size(); ++j) model += coefficients[j] * basis[j](xs[i]);
        out[i] = ys[i] - model;
    }
    return out;
}

DataSeries denominator_series(const PartitionTable& table, std::span<const Index> points) {
    if (!points.empty()) require_covered(table, *std::max_element(points.begin(), points.end()));
    DataSeries s;
    s.label = "denominator";
    s.xs = to_reals(points);
    for (Index n : points) s.ys.push_back(std::exp(log_denominator(table, n)));
    return s;
}

DataSeries reduced_denominator_series(const PartitionTable& table, std::span<const Index> points) {
    DataSeries s = denominator_series(table, points);
    s.label = "denominator - n^1.5";
    for (std::size_t i = 0; i < s.xs.size(); ++i) s.ys[i] -= s.xs[i] * std::sqrt(s.xs[i]);
    return s;
}

DataSeries correction_series(const PartitionTable& table, std::span<const Index> points) {
    if (!points.empty()) require_covered(table, *std::max_element(points.begin(), points.end()));
    DataSeries s;
    s.label = "C7 target";
    s.xs = to_reals(points);
    std::string offending;
    for (Index n : points) {
        const Real x = as_real(n);
        if (table.h(n).is_zero()) {
            offending += " " + std::to_string(n);
            continue;
        }
        const Real log_h = table.h(n).log();
        const Real log_ig = std::log(kPi / 12) + kExpScale * std::sqrt(x) - std::log(std::sqrt(2 * x * x * x));
        // I_g - h = h * expm1(ln I_g - ln h), without cancellation
        const Real rel = std::expm1(log_ig - log_h);
        if (!(rel > 0)) {
            offending += " " + std::to_string(n);
            continue;
        }
        const Real log_target = std::log(kPi * kPi / (24 * kSqrt3)) + kExpScale * std::sqrt(x) - 2 * std::log(x) -
                                log_h - std::log(rel);
        s.ys.push_back(std::exp(log_target));
    }
    if (!offending.empty()) throw DomainError("C7 target needs I_g(n) > h(n); fails at n =" + offending);
    return s;
}

namespace {

BasisFunction power(Real e) {
    if (e == 0) return [](Real) { return Real(1); };
    if (e == 1) return [](Real x) { return x; };
    if (e == Real(0.5)) return [](Real x) { return std::sqrt(x); };
    if (e == Real(1.5)) return [](Real x) { return x * std::sqrt(x); };
    if (e == -1) return [](Real x) { return 1 / x; };
    if (e == Real(-0.5)) return [](Real x) { return 1 / std::sqrt(x); };
    if (e == Real(-1.5)) return [](Real x) { return 1 / (x * std::sqrt(x)); };
    if (e == -2) return [](Real x) { return 1 / (x * x); };
    return [e](Real x) { return std::pow(x, e); };
}

std::vector<BasisFunction> powers(std::initializer_list<Real> exps) {
    std::vector<BasisFunction> out;
    for (Real e : exps) out.push_back(power(e));
    return out;
}

template <std::size_t N>
std::vector<Real> to_vector(const std::array<Real, N>& a) {
    return {a.begin(), a.end()};
}

FitResult fit_series(const DataSeries& s, std::initializer_list<Real> exps, FitTarget target, std::string label,
                     std::string grid) {
    s.validate();
    FitResult r = least_squares(s.xs, s.ys, powers(exps));
    r.target = target;
    r.label = std::move(label);
    r.grid = std::move(grid);
    return r;
}

}  // namespace

FitResult fit_c4(const PartitionTable& table, const SampleGrid& grid) {
    FitResult r = fit_series(denominator_series(table, grid.points), {1.5, 1, 0.5, 0}, FitTarget::C4,
                             "C4(n) = a4 n^1.5 + b4 n + c4 n^0.5 + d4", grid.describe());
    r.finish_against(to_vector(constants().c4));
    return r;
}

FitResult fit_c5(const PartitionTable& table, const SampleGrid& grid) {
    FitResult r = fit_series(reduced_denominator_series(table, grid.points), {1, 0.5, 0}, FitTarget::C5,
                             "C5(n) = b5 n + c5 n^0.5 + d5", grid.describe());
    r.finish_against(to_vector(constants().c5));
    return r;
}

FitResult fit_c5_linear(const PartitionTable& table, const SampleGrid& grid) {
    FitResult r = fit_series(reduced_denominator_series(table, grid.points), {1, 0}, FitTarget::C5_LINEAR,
                             "C'5(n) = slope n + intercept", grid.describe());
    r.finish_against(to_vector(constants().c5_linear));
    return r;
}

FitResult fit_c7(C7Form form, const PartitionTable& table, const SampleGrid& grid) {
    const DataSeries s = correction_series(table, grid.points);
    if (form == C7Form::A) {
        FitResult r = fit_series(s, {-0.5, -1, -1.5, -2, 0}, FitTarget::C7A,
                                 "C7a(n) = k0/n^0.5 + k1/n + k2/n^1.5 + k3/n^2 + k4", grid.describe());
        r.finish_against(to_vector(constants().c7a));
        return r;
    }
    FitResult r =
        fit_series(s, {-0.5, -1, -1.5, 0}, FitTarget::C7B, "C7b(n) = k0/n^0.5 + k1/n + k2/n^1.5 + k3", grid.describe());
    r.finish_against(to_vector(constants().c7b));
    return r;
}

FitResult fit_c7_inverse_linear(const PartitionTable& table, const SampleGrid& grid) {
    return fit_series(correction_series(table, grid.points), {-1, 0}, FitTarget::OTHER, "C7(n) = a/n + b",
                      grid.describe());
}

FitResult fit_c7_inverse_quadratic(const PartitionTable& table, const SampleGrid& grid) {
    return fit_series(correction_series(table, grid.points), {-1, -2, 0}, FitTarget::OTHER, "C7(n) = a/n + b/n^2 + c",
                      grid.describe());
}

ParityFits fit_c8(const PartitionTable& table) {
    require_covered(table, 100);
    const SampleGrid odd = SampleGrid::range(3, 99, 2);
    const SampleGrid even = SampleGrid::range(4, 100, 2);
    ParityFits out;
    out.odd = fit_series(reduced_denominator_series(table, odd.points), {1, 0.5, 0}, FitTarget::C8_ODD,
                         "C8(n) = alpha n + beta n^0.5 + gamma, odd n", odd.describe());
    out.odd.finish_against(to_vector(constants().c8_odd));
    out.even = fit_series(reduced_denominator_series(table, even.points), {1, 0.5, 0}, FitTarget::C8_EVEN,
                          "C8(n) = alpha n + beta n^0.5 + gamma, even n", even.describe());
    out.even.finish_against(to_vector(constants().c8_even));
    return out;
}

}  // namespace hcount
