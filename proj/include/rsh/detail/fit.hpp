#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace rsh::detail {

struct LineFit {
    double slope;
    double intercept;
};

// Ordinary least squares y = slope * x + intercept.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need at least two paired samples");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0)
        throw std::invalid_argument("least_squares: abscissae are all equal");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

} // namespace rsh::detail
