#include "casolyte/thermal.hpp"

#include <cmath>
#include <stdexcept>

#include "casolyte/constants.hpp"

namespace casolyte {

ThermalContext ThermalContext::at(double temperature_K) {
    if (!(temperature_K > 0.0))
        throw std::domain_error("ThermalContext: temperature must be positive");
    ThermalContext ctx;
    ctx.temperature = temperature_K;
    ctx.thermal_energy = constants::k_boltzmann * temperature_K;
    ctx.first_matsubara = 2.0 * constants::pi * ctx.thermal_energy / constants::hbar;
    return ctx;
}

double matsubara_frequency(const ThermalContext& ctx, int n) {
    if (n < 0)
        throw std::domain_error("matsubara_frequency: index must be >= 0");
    return static_cast<double>(n) * ctx.first_matsubara;
}

double mean_mode_energy(const ThermalContext& ctx, double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("mean_mode_energy: frequency must be positive");
    const double x = 0.5 * constants::hbar * omega / ctx.thermal_energy;
    // coth(x) = 1 + 2 / (e^{2x} - 1); expm1 keeps the classical limit
    // (hbar omega / 2) * (1/x) = kT exact to machine precision as x -> 0.
    const double coth = 1.0 + 2.0 / std::expm1(2.0 * x);
    return 0.5 * constants::hbar * omega * coth;
}

} // namespace casolyte
