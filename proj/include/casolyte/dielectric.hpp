#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "casolyte/thermal.hpp"

namespace casolyte {

// Thrown for malformed material/scenario input (bad JSON, missing or unknown
// fields, out-of-range values). CLI maps it to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Debye rotational relaxation term: d / (1 + xi * tau).
struct RotationalTerm {
    double strength;          // dimensionless, > 0
    double relaxation_time_s; // tau, s
};

// Damped oscillator term: c * w^2 / (w^2 + xi^2 + g * xi).
struct OscillatorTerm {
    double strength;      // c, dimensionless, >= 0
    double resonance;     // w, rad/s
    double damping = 0.0; // g, rad/s, >= 0
};

// Dielectric response on the imaginary frequency axis,
//   eps(i xi) = eps_inf + sum_j d_j/(1 + xi tau_j)
//             + sum_k c_k w_k^2/(w_k^2 + xi^2 + g_k xi),
// which is real, positive and monotonically decreasing in xi for any
// admissible parameter set. Evaluations are memoized (the Matsubara grid
// revisits the same frequencies constantly).
class MaterialModel {
  public:
    MaterialModel(std::string name, double eps_inf, std::vector<RotationalTerm> rotational,
                  std::vector<OscillatorTerm> oscillators, std::string source = "");

    MaterialModel(const MaterialModel& other);
    MaterialModel& operator=(const MaterialModel& other);
    MaterialModel(MaterialModel&&) noexcept = default;
    MaterialModel& operator=(MaterialModel&&) noexcept = default;

    static MaterialModel vacuum();
    static MaterialModel from_json_file(const std::string& path);
    static MaterialModel from_json_text(const std::string& text, const std::string& origin);

    // eps(i xi) for xi >= 0 (rad/s). Thread safe.
    double permittivity(double xi) const;
    double static_permittivity() const { return permittivity(0.0); }

    const std::string& name() const { return name_; }
    const std::string& source() const { return source_; }
    double eps_inf() const { return eps_inf_; }
    const std::vector<RotationalTerm>& rotational() const { return rotational_; }
    const std::vector<OscillatorTerm>& oscillators() const { return oscillators_; }

  private:
    double evaluate(double xi) const;

    // The memo lives behind a pointer so models stay movable; copies start
    // with a fresh cache.
    struct Memo {
        std::mutex mutex;
        std::unordered_map<double, double> values;
    };

    std::string name_;
    std::string source_;
    double eps_inf_;
    std::vector<RotationalTerm> rotational_;
    std::vector<OscillatorTerm> oscillators_;
    mutable std::unique_ptr<Memo> memo_;
};

// Relative dielectric mismatch of b against reference a at imaginary
// frequency xi: |eps_a - eps_b| / eps_a.
double index_mismatch(const MaterialModel& a, const MaterialModel& b, double xi);

struct IonSpecies {
    double concentration_mol_per_m3; // bulk number concentration / N_A
    int valence;                     // signed charge number, nonzero
};

// Ionic content of the gap solution. Either a species list (Debye length
// computed from the ionic strength) or a directly specified screening
// length for solutions given only by their nominal salt grade.
struct Electrolyte {
    double solvent_static_permittivity = 1.0;
    std::vector<IonSpecies> species;
    std::optional<double> fixed_debye_length; // m, overrides species if set

    static Electrolyte salt_mM(double solvent_eps_static, double concentration_mM,
                               int valence = 1); // symmetric z:z salt
    static Electrolyte with_debye_length(double lambda_m);
    static Electrolyte none(double solvent_eps_static); // ion-free solvent

    bool has_ions() const;

    // Debye screening length sqrt(eps0 eps_b kT / sum_i n_i q_i^2), in m.
    // Infinite (with no throw) for an ion-free solution; callers flag it.
    double debye_length(const ThermalContext& ctx) const;
};

} // namespace casolyte
