#pragma once

namespace casolyte {

// Temperature bundle used throughout: kT sets the energy scale of thermal
// fluctuations and 2 pi kT / hbar the spacing of imaginary (Matsubara)
// frequencies.
struct ThermalContext {
    double temperature;     // K
    double thermal_energy;  // kT, J
    double first_matsubara; // xi_1 = 2 pi kT / hbar, rad/s

    static ThermalContext at(double temperature_K);
};

// xi_n = n * 2 pi kT / hbar for n >= 0 (xi_0 = 0).
double matsubara_frequency(const ThermalContext& ctx, int n);

// Mean energy of a single harmonic fluctuation mode of angular frequency
// omega at temperature T: (hbar omega / 2) coth(hbar omega / 2 kT).
// Tends to kT for hbar omega << kT and hbar omega / 2 for hbar omega >> kT.
double mean_mode_energy(const ThermalContext& ctx, double omega);

} // namespace casolyte
