#include "alphahash/bounds.hpp"

#include "alphahash/schemes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace alphahash {

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;

void require_alpha(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must be in [0, 1]");
    }
}

}  // namespace

double perfect_length_bound(std::size_t k)
{
    if (k < 1) {
        throw std::invalid_argument("perfect_length_bound: k must be >= 1");
    }
    return static_cast<double>(k) * std::numbers::log2e + 3.0;
}

double mixture_rate_bound(double alpha)
{
    require_alpha(alpha);
    return lambda_for_alpha(alpha) * std::numbers::log2e;
}

double divergence_length_bound(std::size_t k, double entropy_x)
{
    const double kd = static_cast<double>(k);
    const double divergence = kd * std::log2(kd) - entropy_x;
    if (divergence < -1e-9) {
        throw std::invalid_argument("divergence_length_bound: entropy exceeds k log2 k");
    }
    const double d = std::max(divergence, 0.0);
    return d + std::log2(d + 1.0) + 5.0;
}

double sampling_rate_bound(double alpha)
{
    require_alpha(alpha);
    const double lambda = lambda_for_alpha(alpha);
    if (lambda == 0.0) {
        return 0.0;
    }
    const double a = 1.0 - lambda / 2.0;
    const double b = a - kOneMinusInvE * (1.0 - lambda);
    return lambda * std::numbers::log2e - lambda * std::log2(a / b);
}

double sampling_main_terms(std::size_t k, double alpha)
{
    require_alpha(alpha);
    const double lambda = lambda_for_alpha(alpha);
    if (lambda == 0.0) {
        return 0.0;
    }
    const double kd = static_cast<double>(k);
    const double a = 1.0 - (lambda - 1.0 / kd) / 2.0;
    const double b = a - kOneMinusInvE * (1.0 - lambda - 1.0 / kd);
    return lambda * kd * std::numbers::log2e - lambda * kd * std::log2(a / b);
}

double sampling_residue(std::size_t k)
{
    const double kd = static_cast<double>(k);
    return std::log2(kd * std::log2(kd) + 1.0) + 5.0;
}

double sampling_length_bound(std::size_t k, double alpha)
{
    if (k < 2) {
        throw std::invalid_argument("sampling_length_bound: k must be >= 2");
    }
    return sampling_main_terms(k, alpha) + sampling_residue(k);
}

std::vector<BoundPoint> sweep(std::span<const double> alpha_grid)
{
    std::vector<BoundPoint> points;
    points.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        points.push_back({alpha, mixture_rate_bound(alpha), sampling_rate_bound(alpha)});
    }
    return points;
}

std::vector<double> uniform_alpha_grid(std::size_t points)
{
    std::vector<double> grid;
    grid.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return grid;
}

}  // namespace alphahash
