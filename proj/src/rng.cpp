#include "priceidx/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace priceidx::rng {

double Sampler::normal() {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Sampler::gamma(double shape) {
    if (!(shape > 0.0)) {
        throw std::invalid_argument("gamma shape must be positive");
    }
    if (shape < 1.0) {
        // Boost to shape+1 and scale back by a uniform power.
        const double u = uniform01_open();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

std::vector<double> Sampler::dirichlet(std::size_t length, double concentration) {
    if (length == 0) {
        throw std::invalid_argument("dirichlet length must be positive");
    }
    if (!(concentration > 0.0)) {
        throw std::invalid_argument("dirichlet concentration must be positive");
    }
    std::vector<double> draws(length);
    double total = 0.0;
    for (auto& g : draws) {
        g = gamma(concentration);
        total += g;
    }
    for (auto& g : draws) g /= total;
    return draws;
}

} // namespace priceidx::rng
