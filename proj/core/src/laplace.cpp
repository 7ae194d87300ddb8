#include "contagion/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "contagion/errors.hpp"
#include "contagion/stationarity.hpp"

namespace contagion {

LaplaceGrid::LaplaceGrid(std::size_t generations, std::vector<double> init, TimeGrid grid,
                         std::vector<std::vector<double>> l, std::vector<double> c)
    : n_(generations),
      init_(std::move(init)),
      grid_(std::move(grid)),
      l_(std::move(l)),
      c_(std::move(c)) {}

std::span<const double> LaplaceGrid::l(std::size_t i) const {
    if (i < 1 || i > l_.size()) throw DomainError("l index out of range");
    return l_[i - 1];
}

namespace {

using Series = std::vector<double>;

/// exp(-delta * h_j) for every grid step.
Series step_decay(const TimeGrid& grid, double delta) {
    Series out(grid.size() - 1);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
        out[j] = std::exp(-delta * (grid[j + 1] - grid[j]));
    return out;
}

/// Pure decay v * exp(-delta t) on the grid.
Series decaying(const TimeGrid& grid, double v, double delta) {
    Series out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = v * std::exp(-delta * grid[j]);
    return out;
}

/// Solves y' = -delta y + f(t), y(0) = y0 with the trapezoid rule applied
/// to y(t_{j+1}) = e^{-delta h} y(t_j) + int_{t_j}^{t_{j+1}} e^{-delta (t_{j+1}-s)} f(s) ds.
void integrate_linear(const TimeGrid& grid, const Series& decay, const Series& f, double y0,
                      Series& y) {
    y.resize(grid.size());
    y[0] = y0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const double h = grid[j + 1] - grid[j];
        y[j + 1] = decay[j] * y[j] + 0.5 * h * (decay[j] * f[j] + f[j + 1]);
    }
}

/// 1 - g1k(x1) g2k(x2): both marks of a type-k event land at the same
/// time, so their transforms multiply.
double offspring_source(const ModelParams& p, int k, double x1, double x2) {
    const double a = p.g(1, k).laplace_complement(x1);
    const double b = p.g(2, k).laplace_complement(x2);
    return a + b - a * b;
}

/// The type-2 ("odd") and type-1 ("even") members of one generation pair.
/// Odd l's decay at delta2, even l's at delta1.
struct GenerationPair {
    Series odd;
    Series even;
};

struct Recursion {
    const ModelParams& p;
    const TimeGrid& grid;
    Series decay1;
    Series decay2;

    Recursion(const ModelParams& params, const TimeGrid& g)
        : p(params), grid(g), decay1(step_decay(g, params.delta1)), decay2(step_decay(g, params.delta2)) {}

    GenerationPair first(double odd0, double even0) const {
        return {decaying(grid, odd0, p.delta2), decaying(grid, even0, p.delta1)};
    }

    /// l_{2k+1}, l_{2k+2} from l_{2k-1} (prev.odd) and l_{2k} (prev.even).
    void next(const GenerationPair& prev, double odd0, double even0, GenerationPair& out,
              Series& scratch) const {
        const std::size_t n = grid.size();
        scratch.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            scratch[j] = offspring_source(p, 2, prev.even[j], prev.odd[j]);
        integrate_linear(grid, decay2, scratch, odd0, out.odd);
        for (std::size_t j = 0; j < n; ++j)
            scratch[j] = offspring_source(p, 1, prev.even[j], prev.odd[j]);
        integrate_linear(grid, decay1, scratch, even0, out.even);
    }
};

void check_init(std::span<const double> v) {
    if (v.size() < 2 || v.size() % 2 != 0)
        throw DomainError("initial vector length must be an even m = 2n >= 2");
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw DomainError("initial vector entries must be finite and >= 0");
}

/// rho1 (1 - h1(l_{2n})) + rho2 (1 - h2(l_{2n-1})) on the grid.
Series shot_integrand(const ModelParams& p, std::span<const double> odd_last,
                      std::span<const double> even_last) {
    Series q(odd_last.size());
    for (std::size_t j = 0; j < q.size(); ++j)
        q[j] = p.rho1 * p.h1.laplace_complement(even_last[j]) +
               p.rho2 * p.h2.laplace_complement(odd_last[j]);
    return q;
}

double trapezoid(const TimeGrid& grid, std::span<const double> values) {
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
        sum += 0.5 * (grid[j + 1] - grid[j]) * (values[j] + values[j + 1]);
    return sum;
}

/// Decay rate of a least-squares fit of log(values) over the last tenth
/// of the grid; 0 if the values are not positive and decaying there.
double fitted_decay_rate(const TimeGrid& grid, std::span<const double> values) {
    const double t_from = 0.9 * grid.t_max();
    double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t j = grid.locate(t_from); j < grid.size(); ++j) {
        if (!(values[j] > 0.0)) return 0.0;
        const double t = grid[j], y = std::log(values[j]);
        sw += 1;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    if (sw < 3) return 0.0;
    const double denom = sw * stt - st * st;
    if (!(denom > 0.0)) return 0.0;
    const double slope = (sw * sty - st * sy) / denom;
    return slope < 0.0 ? -slope : 0.0;
}

double tail_of(const TimeGrid& grid, std::span<const double> values) {
    const double last = values[grid.size() - 1];
    if (last == 0.0) return 0.0;
    const double r = fitted_decay_rate(grid, values);
    return r > 0.0 ? last / r : 0.0;
}

double max_last(const GenerationPair& pair) {
    return std::max(pair.odd.back(), pair.even.back());
}

struct Exponent {
    double integral = 0.0;    ///< int_0^inf of the shot integrand, tail included
    double tail_bound = 0.0;  ///< rho mu_H int_T^inf l
};

Exponent shot_exponent(const ModelParams& p, const TimeGrid& grid, const GenerationPair& last) {
    const Series q = shot_integrand(p, last.odd, last.even);
    Exponent e;
    e.integral = integrate_with_tail(grid, q);
    e.tail_bound = p.rho1 * p.h1.mean() * tail_of(grid, last.even) +
                   p.rho2 * p.h2.mean() * tail_of(grid, last.odd);
    return e;
}

double min_delta(const ModelParams& p) { return std::min(p.delta1, p.delta2); }
double max_delta(const ModelParams& p) { return std::max(p.delta1, p.delta2); }

double initial_horizon(const ModelParams& p, double vmax, double tail_tol) {
    return std::max(std::log(std::max(vmax, tail_tol) / tail_tol), 1.0) / min_delta(p);
}

TimeGrid limiting_grid(const ModelParams& p, double horizon, const LaplaceOptions& o) {
    const double unit = 1.0 / max_delta(p);
    return TimeGrid::geometric(horizon, {o.dt0 * unit, o.ratio, o.dt_max * unit});
}

[[noreturn]] void horizon_exhausted(double horizon, double last) {
    std::ostringstream msg;
    msg << "l-functions still at " << last << " after horizon " << horizon
        << "; tail did not decay below tolerance";
    throw ConvergenceError(msg.str(), last);
}

/// Repeated-pattern generations on a grid, advanced one pair at a time.
class PatternSweep {
public:
    PatternSweep(const ModelParams& p, const TimeGrid& grid, double v1, double v2)
        : rec_(p, grid), v1_(v1), v2_(v2), current_(rec_.first(v2, v1)) {}

    void advance() {
        rec_.next(current_, v2_, v1_, spare_, scratch_);
        std::swap(current_, spare_);
        ++generation_;
    }
    const GenerationPair& current() const { return current_; }
    int generation() const { return generation_; }

private:
    Recursion rec_;
    double v1_, v2_;
    GenerationPair current_;
    GenerationPair spare_;
    Series scratch_;
    int generation_ = 1;
};

struct Combined {
    double value;
    double error;
    double tail_bound;
};

Combined combine(const Exponent& fine, const Exponent& coarse, bool richardson) {
    const double diff = std::abs(fine.integral - coarse.integral) / 3.0;
    const double exponent =
        richardson ? fine.integral + (fine.integral - coarse.integral) / 3.0 : fine.integral;
    const double value = std::exp(-exponent);
    return {value, value * (diff + fine.tail_bound), value * fine.tail_bound};
}

void check_v(double v1, double v2) {
    if (!(v1 >= 0.0) || !(v2 >= 0.0) || !std::isfinite(v1) || !std::isfinite(v2))
        throw DomainError("Laplace arguments must be finite and >= 0");
}

}  // namespace

double integrate_with_tail(const TimeGrid& grid, std::span<const double> values, double* tail) {
    const double t = tail_of(grid, values);
    if (tail) *tail = t;
    return trapezoid(grid, values) + t;
}

LaplaceGrid solve_l(const ModelParams& params, std::span<const double> v, const TimeGrid& grid) {
    require_valid(params);
    check_init(v);
    const std::size_t m = v.size();
    const std::size_t n = m / 2;

    // l_i(0) = v_{m+1-i}
    auto init_of = [&](std::size_t i) { return v[m - i]; };

    Recursion rec(params, grid);
    std::vector<Series> l(m);
    GenerationPair pair = rec.first(init_of(1), init_of(2));
    GenerationPair next;
    Series scratch;
    l[0] = pair.odd;
    l[1] = pair.even;
    for (std::size_t k = 1; k < n; ++k) {
        rec.next(pair, init_of(2 * k + 1), init_of(2 * k + 2), next, scratch);
        std::swap(pair, next);
        l[2 * k] = pair.odd;
        l[2 * k + 1] = pair.even;
    }

    const Series q = shot_integrand(params, l[m - 2], l[m - 1]);
    Series c(grid.size(), 0.0);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
        c[j + 1] = c[j] + 0.5 * (grid[j + 1] - grid[j]) * (q[j] + q[j + 1]);

    return LaplaceGrid(n, std::vector<double>(v.begin(), v.end()), grid, std::move(l),
                       std::move(c));
}

double finite_T_laplace(const ModelParams& params, std::span<const double> v, double T,
                        const TimeGrid& grid) {
    require_valid(params);
    check_init(v);
    if (T == 0.0) return std::exp(-v[0] * params.lambda0[0] - v[1] * params.lambda0[1]);
    if (std::abs(T - grid.t_max()) > 1e-12 * std::max(1.0, T))
        throw DomainError("finite_T_laplace needs T equal to the grid end point");
    const LaplaceGrid sol = solve_l(params, v, grid);
    const std::size_t m = sol.system_size();
    const std::size_t last = grid.size() - 1;
    return std::exp(-sol.l(m)[last] * params.lambda0[0] - sol.l(m - 1)[last] * params.lambda0[1] -
                    sol.c()[last]);
}

LaplaceResult limiting_laplace_finite(const ModelParams& params, double v1, double v2, int n,
                                      const LaplaceOptions& options) {
    require_valid(params);
    check_v(v1, v2);
    if (n < 1) throw DomainError("generation count must be >= 1");
    LaplaceResult result;
    result.n_used = n;
    if (v1 == 0.0 && v2 == 0.0) return result;

    const double max_horizon = options.max_horizon_factor / min_delta(params);
    for (double horizon = initial_horizon(params, std::max(v1, v2), options.tail_tol);;
         horizon *= 2.0) {
        const TimeGrid fine = limiting_grid(params, horizon, options);
        PatternSweep sweep(params, fine, v1, v2);
        while (sweep.generation() < n) sweep.advance();
        const double last = max_last(sweep.current());
        if (last >= options.tail_tol) {
            if (horizon * 2.0 > max_horizon) horizon_exhausted(horizon, last);
            continue;
        }
        const TimeGrid coarse = fine.coarsened();
        PatternSweep coarse_sweep(params, coarse, v1, v2);
        while (coarse_sweep.generation() < n) coarse_sweep.advance();

        const auto c = combine(shot_exponent(params, fine, sweep.current()),
                               shot_exponent(params, coarse, coarse_sweep.current()),
                               options.richardson);
        result.value = c.value;
        result.error_estimate = c.error;
        result.tail_bound = c.tail_bound;
        result.horizon = horizon;
        return result;
    }
}

LaplaceResult limiting_laplace(const ModelParams& params, double v1, double v2, double tol,
                               const LaplaceOptions& options) {
    require_valid(params);
    check_v(v1, v2);
    require_stationary(params);
    if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
    LaplaceResult result;
    result.n_used = 1;
    if (v1 == 0.0 && v2 == 0.0) return result;

    const double max_horizon = options.max_horizon_factor / min_delta(params);
    for (double horizon = initial_horizon(params, std::max(v1, v2), options.tail_tol);;
         horizon *= 2.0) {
        const TimeGrid fine = limiting_grid(params, horizon, options);
        const TimeGrid coarse = fine.coarsened();
        PatternSweep fs(params, fine, v1, v2);
        PatternSweep cs(params, coarse, v1, v2);

        auto evaluate = [&] {
            return combine(shot_exponent(params, fine, fs.current()),
                           shot_exponent(params, coarse, cs.current()), options.richardson);
        };
        Combined prev = evaluate();
        Combined cur = prev;
        double gap = 0.0;
        bool converged = false;
        while (fs.generation() < options.max_generations) {
            fs.advance();
            cs.advance();
            cur = evaluate();
            gap = std::abs(cur.value - prev.value);
            if (gap < tol) {
                converged = true;
                break;
            }
            prev = cur;
        }

        const double last = max_last(fs.current());
        if (last >= options.tail_tol) {
            if (horizon * 2.0 > max_horizon) horizon_exhausted(horizon, last);
            continue;
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "generation cap " << options.max_generations
                << " reached with successive gap " << gap;
            throw ConvergenceError(msg.str(), gap);
        }
        result.value = cur.value;
        result.error_estimate = cur.error;
        result.tail_bound = cur.tail_bound;
        result.gap = gap;
        result.n_used = fs.generation() - 1;
        result.horizon = horizon;
        return result;
    }
}

int generation_cap_for(const ModelParams& params, double tol) {
    const int floor = LaplaceOptions{}.max_generations;
    const double r = check_c2(params).radius;
    if (!(r > 0.0) || r >= 1.0 || !(tol > 0.0) || tol >= 1.0) return floor;
    const double needed = std::ceil(std::log(tol) / std::log(r)) + 16.0;
    return needed > floor ? static_cast<int>(std::min(needed, 1e6)) : floor;
}

LaplaceGrid limiting_l_grid(const ModelParams& params, double v1, double v2, int n,
                            const LaplaceOptions& options) {
    require_valid(params);
    check_v(v1, v2);
    if (n < 1) throw DomainError("generation count must be >= 1");
    std::vector<double> v(2 * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 == 0) ? v1 : v2;

    const double max_horizon = options.max_horizon_factor / min_delta(params);
    for (double horizon = initial_horizon(params, std::max({v1, v2, options.tail_tol}),
                                          options.tail_tol);;
         horizon *= 2.0) {
        const TimeGrid grid = limiting_grid(params, horizon, options);
        LaplaceGrid sol = solve_l(params, v, grid);
        double last = 0.0;
        for (std::size_t i = 1; i <= sol.system_size(); ++i)
            last = std::max(last, sol.l(i)[grid.size() - 1]);
        if (last < options.tail_tol) return sol;
        if (horizon * 2.0 > max_horizon) horizon_exhausted(horizon, last);
    }
}

double stationarity_residual(const ModelParams& params, std::span<const double> v, int n,
                             const ResidualOptions& options) {
    require_valid(params);
    check_init(v);
    if (n < 1 || v.size() != 2 * static_cast<std::size_t>(n))
        throw DomainError("initial vector length must equal 2n");
    const std::size_t m = v.size();
    const double vmax = *std::max_element(v.begin(), v.end());
    if (vmax == 0.0) return 0.0;

    // One grid for every perturbed evaluation, long enough for the largest.
    const double vtop = vmax * (1.0 + 4.0 * options.fd_step);
    std::vector<double> top(m, vtop);
    double horizon = initial_horizon(params, vtop, options.tail_tol);
    for (;; horizon *= 2.0) {
        const TimeGrid probe = TimeGrid::for_rates(horizon, max_delta(params));
        const LaplaceGrid sol = solve_l(params, top, probe);
        double last = 0.0;
        for (std::size_t i = 1; i <= m; ++i) last = std::max(last, sol.l(i)[probe.size() - 1]);
        if (last < options.tail_tol) break;
        if (horizon > 1e5 / min_delta(params)) horizon_exhausted(horizon, last);
    }
    const TimeGrid grid = TimeGrid::uniform(horizon, options.dt);

    auto transform = [&](std::span<const double> w) {
        const LaplaceGrid sol = solve_l(params, w, grid);
        const Series q = shot_integrand(params, sol.l(m - 1), sol.l(m));
        return std::exp(-integrate_with_tail(grid, q));
    };

    const double pi = transform(v);

    // d pi / d v_j, 0-based j.
    std::vector<double> grad(m);
    std::vector<double> w(v.begin(), v.end());
    for (std::size_t j = 0; j < m; ++j) {
        if (v[j] > 0.0) {
            const double h = options.fd_step * v[j];
            w[j] = v[j] + h;
            const double up = transform(w);
            w[j] = v[j] - h;
            const double down = transform(w);
            grad[j] = (up - down) / (2.0 * h);
        } else {
            const double h = options.fd_step * vmax;
            w[j] = h;
            const double f1 = transform(w);
            w[j] = 2.0 * h;
            const double f2 = transform(w);
            grad[j] = (-3.0 * pi + 4.0 * f1 - f2) / (2.0 * h);
        }
        w[j] = v[j];
    }

    // Time derivatives of l at 0 straight from the ODE right-hand sides.
    auto l0 = [&](std::size_t i) { return v[m - i]; };  // l_i(0) = v_{m+1-i}
    std::vector<double> ldot(m + 1);
    ldot[1] = -params.delta2 * l0(1);
    ldot[2] = -params.delta1 * l0(2);
    for (std::size_t k = 1; k < static_cast<std::size_t>(n); ++k) {
        const double a = l0(2 * k - 1), b = l0(2 * k);
        ldot[2 * k + 1] = -params.delta2 * l0(2 * k + 1) + offspring_source(params, 2, b, a);
        ldot[2 * k + 2] = -params.delta1 * l0(2 * k + 2) + offspring_source(params, 1, b, a);
    }

    double residual = 0.0;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
        const std::size_t nk = static_cast<std::size_t>(n) - k;
        residual += ldot[2 * nk + 2] * grad[2 * k - 2] + ldot[2 * nk + 1] * grad[2 * k - 1];
    }
    residual -= params.rho1 * params.h1.laplace_complement(v[0]) * pi;
    residual -= params.rho2 * params.h2.laplace_complement(v[1]) * pi;
    return residual;
}

}  // namespace contagion
