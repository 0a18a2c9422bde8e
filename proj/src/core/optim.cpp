#include "firmtrack/core/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace firmtrack::optim {

Result nelder_mead(const Objective& f, std::vector<double> x0, const Options& opts) {
    const int n = static_cast<int>(x0.size());
    Result res;
    if (n == 0) {
        res.x = std::move(x0);
        res.value = f(res.x);
        res.evaluations = 1;
        res.converged = true;
        return res;
    }

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) {
        double step = opts.initial_step;
        if (simplex[i + 1][i] != 0.0) step = opts.initial_step * std::fabs(simplex[i + 1][i]);
        simplex[i + 1][i] += std::max(step, 1e-4);
    }
    for (int i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<int> order(n + 1);
    while (evals < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        int best = order[0], worst = order[n], second_worst = order[n - 1];

        double spread = std::fabs(fv[worst] - fv[best]);
        double scale = std::fabs(fv[best]) + std::fabs(fv[worst]) + 1e-10;
        if (spread <= opts.rel_tolerance * scale) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= n;

        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j) x[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
            return x;
        };

        std::vector<double> xr = blend(alpha);
        double fr = eval(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(gamma);
            double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            simplex[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            std::vector<double> xc = blend(-rho);
            double fc = eval(xc);
            if (fc < fv[worst]) {
                simplex[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int j = 0; j < n; ++j)
                        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }

    int best = static_cast<int>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = simplex[best];
    res.value = fv[best];
    res.evaluations = evals;
    return res;
}

std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x, double step) {
    std::vector<double> g(x.size());
    std::vector<double> xp = x;
    for (size_t i = 0; i < x.size(); ++i) {
        double h = step * std::max(1.0, std::fabs(x[i]));
        xp[i] = x[i] + h;
        double fp = f(xp);
        xp[i] = x[i] - h;
        double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Result bfgs_polish(const Objective& f, std::vector<double> x0, const Options& opts) {
    const int n = static_cast<int>(x0.size());
    Result res;
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evaluations = 1;
    if (n == 0) {
        res.converged = true;
        return res;
    }

    // Inverse Hessian approximation, identity start.
    std::vector<double> h(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) h[static_cast<size_t>(i) * n + i] = 1.0;

    auto grad = [&](const std::vector<double>& x) {
        res.evaluations += 2 * n;
        return numeric_gradient(f, x);
    };

    std::vector<double> g = grad(res.x);
    for (int iter = 0; iter < 100 && res.evaluations < opts.max_evaluations; ++iter) {
        std::vector<double> dir(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dir[i] -= h[static_cast<size_t>(i) * n + j] * g[j];

        double gd = 0.0;
        for (int i = 0; i < n; ++i) gd += g[i] * dir[i];
        if (gd >= 0.0) break;  // not a descent direction; stop polishing

        double t = 1.0;
        std::vector<double> xn(n);
        double fn = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 30 && res.evaluations < opts.max_evaluations; ++ls) {
            for (int i = 0; i < n; ++i) xn[i] = res.x[i] + t * dir[i];
            fn = f(xn);
            ++res.evaluations;
            if (std::isfinite(fn) && fn <= res.value + 1e-4 * t * gd) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> gn = grad(xn);
        std::vector<double> s(n), y(n);
        for (int i = 0; i < n; ++i) {
            s[i] = xn[i] - res.x[i];
            y[i] = gn[i] - g[i];
        }
        double sy = 0.0;
        for (int i = 0; i < n; ++i) sy += s[i] * y[i];

        double improvement = res.value - fn;
        res.x = xn;
        res.value = fn;
        g = std::move(gn);

        if (sy > 1e-12) {
            // BFGS inverse update: H = (I - r s y')H(I - r y s') + r s s'
            double r = 1.0 / sy;
            std::vector<double> hy(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) hy[i] += h[static_cast<size_t>(i) * n + j] * y[j];
            double yhy = 0.0;
            for (int i = 0; i < n; ++i) yhy += y[i] * hy[i];
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    h[static_cast<size_t>(i) * n + j] +=
                        (1.0 + r * yhy) * r * s[i] * s[j] - r * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }

        if (improvement <= opts.rel_tolerance * (std::fabs(res.value) + 1e-10)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Result minimize(const Objective& f, std::vector<double> x0, const Options& opts) {
    Options nm_opts = opts;
    nm_opts.max_evaluations = std::max(1, opts.max_evaluations * 7 / 10);
    Result nm = nelder_mead(f, std::move(x0), nm_opts);

    Options polish_opts = opts;
    polish_opts.max_evaluations = std::max(1, opts.max_evaluations - nm.evaluations);
    Result polished = bfgs_polish(f, nm.x, polish_opts);
    polished.evaluations += nm.evaluations;
    if (polished.value > nm.value) {
        polished.x = std::move(nm.x);
        polished.value = nm.value;
    }
    polished.converged = polished.converged || nm.converged;
    return polished;
}

}  // namespace firmtrack::optim
