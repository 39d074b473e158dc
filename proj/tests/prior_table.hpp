#pragma once

namespace wgslr::oracle {

struct PriorTableRow {
    double mean;
    double variance;
    double shape1;
    double shape2;
    double q05;
    double q95;
};

// Reference prior table: moments, shapes to 3 decimals, 5% / 95% fractiles to 7.
inline constexpr PriorTableRow kPriorTable[] = {
    {1e-1, 5e-3, 1.400, 5.600, 0.0124384, 0.2377969},
    {1e-1, 1e-2, 0.600, 2.400, 0.0012744, 0.3103297},
    {1e-2, 5e-5, 1.940, 95.060, 0.0017324, 0.0237371},
    {1e-2, 1e-4, 0.960, 47.040, 0.0004717, 0.0300839},
    {1e-3, 5e-7, 1.994, 995.006, 0.0001772, 0.0023721},
    {1e-3, 1e-6, 0.996, 497.004, 0.0000509, 0.0029970},
    {1e-4, 5e-9, 1.999, 9995.001, 0.0000178, 0.0002372},
    {1e-4, 1e-8, 1.000, 4997.000, 0.0000051, 0.0002996},
    {1e-5, 5e-11, 2.000, 99995.000, 0.0000018, 0.0000237},
    {1e-5, 1e-10, 1.000, 49997.000, 0.0000005, 0.0000300},
};

} // namespace wgslr::oracle
