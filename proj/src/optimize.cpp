#include "wgslr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wgslr/errors.hpp"

namespace wgslr {

namespace {

double eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

ScalarMaximum golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(f, c);
    double fd = eval(f, d);
    for (int iter = 0; iter < 200 && (b - a) > tol * (1.0 + std::abs(c)); ++iter) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(f, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(f, d);
        }
    }
    return fc >= fd ? ScalarMaximum{c, fc} : ScalarMaximum{d, fd};
}

} // namespace

ScalarMaximum maximize_bounded(const std::function<double(double)>& f, double lower, double upper,
                               const BoundedSearchOptions& options) {
    if (!(lower <= upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw DomainError("invalid search interval");
    }
    if (lower == upper) return {lower, eval(f, lower)};

    std::vector<double> grid;
    const int nu = std::max(options.uniform_points, 2);
    for (int i = 0; i < nu; ++i) {
        grid.push_back(lower + (upper - lower) * i / (nu - 1));
    }
    // Geometric points between lower + span*1e-9 and the first uniform step.
    const double span = upper - lower;
    const double g_lo = span * 1e-9;
    const double g_hi = span / (nu - 1);
    for (int i = 0; i < options.geometric_points; ++i) {
        const double t = options.geometric_points == 1 ? 0.0 : static_cast<double>(i) / (options.geometric_points - 1);
        grid.push_back(lower + g_lo * std::pow(g_hi / g_lo, t));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    grid.front() = lower;
    grid.back() = upper;

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = eval(f, grid[i]);

    ScalarMaximum best{grid[0], values[0]};
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] > best.value) best = {grid[i], values[i]};
        const bool left_ok = i == 0 || values[i] >= values[i - 1];
        const bool right_ok = i + 1 == grid.size() || values[i] >= values[i + 1];
        if (left_ok && right_ok && values[i] > -std::numeric_limits<double>::infinity()) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    if (peaks.size() > static_cast<std::size_t>(options.refine_starts)) peaks.resize(options.refine_starts);

    for (std::size_t i : peaks) {
        const double a = grid[i == 0 ? 0 : i - 1];
        const double b = grid[std::min(i + 1, grid.size() - 1)];
        const ScalarMaximum local = golden_section(f, a, b, options.x_tolerance);
        if (local.value > best.value) best = local;
    }
    return best;
}

} // namespace wgslr
