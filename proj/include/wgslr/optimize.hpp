#pragma once

#include <functional>

namespace wgslr {

struct ScalarMaximum {
    double x;
    double value;
};

struct BoundedSearchOptions {
    int uniform_points = 32;
    /// Extra geometrically spaced starts crowding the lower bound, where
    /// error-probability likelihoods change fastest.
    int geometric_points = 32;
    /// Local grid maxima refined by golden section.
    int refine_starts = 4;
    double x_tolerance = 1e-12;
};

/// Maximise f over the closed interval [lower, upper]: coarse grid, then
/// golden-section refinement around the best local grid maxima. -inf values
/// are allowed; NaN is treated as -inf.
ScalarMaximum maximize_bounded(const std::function<double(double)>& f, double lower, double upper,
                               const BoundedSearchOptions& options = {});

} // namespace wgslr
