#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "contagion/params.hpp"
#include "contagion/time_grid.hpp"

namespace contagion {

/// Solutions l_1..l_m and c_m of the forward Laplace ODE system on a grid.
///
/// The stacked system has m = 2n generation intensities; generation i of
/// component 1 is stacked at position 2i-1, component 2 at 2i. Odd l's
/// decay at delta2, even l's at delta1, and the initial values run in
/// reverse: l_1(0) = v_m, l_2(0) = v_{m-1}, ..., l_m(0) = v_1.
class LaplaceGrid {
public:
    LaplaceGrid(std::size_t generations, std::vector<double> init, TimeGrid grid,
                std::vector<std::vector<double>> l, std::vector<double> c);

    std::size_t generations() const noexcept { return n_; }
    std::size_t system_size() const noexcept { return 2 * n_; }
    const std::vector<double>& init() const noexcept { return init_; }
    const TimeGrid& grid() const noexcept { return grid_; }

    /// l_i over the grid, 1-based as in the recursion.
    std::span<const double> l(std::size_t i) const;
    std::span<const double> c() const noexcept { return c_; }

private:
    std::size_t n_;
    std::vector<double> init_;
    TimeGrid grid_;
    std::vector<std::vector<double>> l_;
    std::vector<double> c_;
};

/// Recursive trapezoid solution of the forward system for initial vector
/// v (length m = 2n, componentwise >= 0).
LaplaceGrid solve_l(const ModelParams& params, std::span<const double> v, const TimeGrid& grid);

/// E[exp(-sum v_i Lambda^(i)_T) | Lambda_0 = (lambda0, 0, ..., 0)] with
/// T = grid.t_max().
double finite_T_laplace(const ModelParams& params, std::span<const double> v, double T,
                        const TimeGrid& grid);

struct LaplaceOptions {
    /// Truncate the infinite integrals once every l is below this.
    double tail_tol = 1e-10;
    /// Give up extending the horizon past this many units of 1/min(delta).
    double max_horizon_factor = 1e5;
    /// Generation cap for limiting_laplace.
    int max_generations = 64;
    /// Geometric grid parameters relative to 1/max(delta).
    double dt0 = 1e-4;
    double ratio = 1.02;
    double dt_max = 0.05;
    /// Report fine + (fine - coarse)/3 instead of the fine-grid value.
    bool richardson = true;
};

struct LaplaceResult {
    double value = 1.0;
    /// Quadrature estimate |fine - coarse|/3 plus the tail bound, on the
    /// scale of `value`.
    double error_estimate = 0.0;
    int n_used = 0;
    /// |mu^{n+1} - mu^n| at the stopping generation (limiting_laplace).
    double gap = 0.0;
    double horizon = 0.0;
    double tail_bound = 0.0;
};

/// Limiting transform of the n-generation truncation at (v1, v2): every
/// type-1 generation is weighted by v1 and every type-2 generation by v2.
LaplaceResult limiting_laplace_finite(const ModelParams& params, double v1, double v2, int n,
                                      const LaplaceOptions& options = {});

/// Limiting (= stationary) transform of the full process. Iterates the
/// truncation until successive values differ by less than tol.
/// Throws NonStationaryError without the spectral-radius condition and
/// ConvergenceError when max_generations is reached first.
LaplaceResult limiting_laplace(const ModelParams& params, double v1, double v2, double tol,
                               const LaplaceOptions& options = {});

/// Generation cap large enough for successive gaps to fall below tol at
/// the model's spectral radius; never below the default of 64.
int generation_cap_for(const ModelParams& params, double tol);

/// l-functions of the repeated (v1, v2) pattern over the adaptive horizon
/// used by limiting_laplace_finite. Useful for inspecting decay and the
/// generation ordering.
LaplaceGrid limiting_l_grid(const ModelParams& params, double v1, double v2, int n,
                            const LaplaceOptions& options = {});

/// Trapezoid integral over the grid plus an exponential tail fitted to
/// the last tenth of the grid. The fitted tail is written to *tail when
/// non-null (zero if the values are not decaying).
double integrate_with_tail(const TimeGrid& grid, std::span<const double> values,
                           double* tail = nullptr);

struct ResidualOptions {
    double dt = 1e-3;       ///< uniform step
    double fd_step = 1e-5;  ///< relative central-difference step
    double tail_tol = 1e-10;
};

/// Residual of the stationary condition equation at the computed limiting
/// transform of the 2n-dimensional stacked system. Zero in exact
/// arithmetic; what remains is quadrature and differencing error.
double stationarity_residual(const ModelParams& params, std::span<const double> v, int n,
                             const ResidualOptions& options = {});

}  // namespace contagion
