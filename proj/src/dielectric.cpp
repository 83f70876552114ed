#include "casolyte/dielectric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "casolyte/constants.hpp"

namespace casolyte {

MaterialModel::MaterialModel(std::string name, double eps_inf,
                             std::vector<RotationalTerm> rotational,
                             std::vector<OscillatorTerm> oscillators, std::string source)
    : name_(std::move(name)), source_(std::move(source)), eps_inf_(eps_inf),
      rotational_(std::move(rotational)), oscillators_(std::move(oscillators)),
      memo_(std::make_unique<Memo>()) {
    if (name_.empty())
        throw ValidationError("material: name must not be empty");
    if (!(eps_inf_ >= 1.0) || !std::isfinite(eps_inf_))
        throw ValidationError("material '" + name_ + "': epsilon_infinity must be >= 1");
    for (const auto& t : rotational_) {
        if (!(t.strength > 0.0) || !std::isfinite(t.strength))
            throw ValidationError("material '" + name_ + "': rotational strength must be > 0");
        if (!(t.relaxation_time_s > 0.0) || !std::isfinite(t.relaxation_time_s))
            throw ValidationError("material '" + name_ + "': relaxation_time_s must be > 0");
    }
    for (const auto& t : oscillators_) {
        if (!(t.strength >= 0.0) || !std::isfinite(t.strength))
            throw ValidationError("material '" + name_ + "': oscillator strength must be >= 0");
        if (!(t.resonance > 0.0) || !std::isfinite(t.resonance))
            throw ValidationError("material '" + name_ + "': oscillator resonance must be > 0");
        if (!(t.damping >= 0.0) || !std::isfinite(t.damping))
            throw ValidationError("material '" + name_ + "': oscillator damping must be >= 0");
    }
}

MaterialModel::MaterialModel(const MaterialModel& other)
    : name_(other.name_), source_(other.source_), eps_inf_(other.eps_inf_),
      rotational_(other.rotational_), oscillators_(other.oscillators_),
      memo_(std::make_unique<Memo>()) {}

MaterialModel& MaterialModel::operator=(const MaterialModel& other) {
    if (this != &other) {
        name_ = other.name_;
        source_ = other.source_;
        eps_inf_ = other.eps_inf_;
        rotational_ = other.rotational_;
        oscillators_ = other.oscillators_;
        memo_ = std::make_unique<Memo>();
    }
    return *this;
}

MaterialModel MaterialModel::vacuum() { return MaterialModel("vacuum", 1.0, {}, {}, "definition"); }

double MaterialModel::evaluate(double xi) const {
    double eps = eps_inf_;
    for (const auto& t : rotational_)
        eps += t.strength / (1.0 + xi * t.relaxation_time_s);
    for (const auto& t : oscillators_) {
        const double w2 = t.resonance * t.resonance;
        eps += t.strength * w2 / (w2 + xi * xi + t.damping * xi);
    }
    return eps;
}

double MaterialModel::permittivity(double xi) const {
    if (!(xi >= 0.0))
        throw std::domain_error("permittivity: imaginary frequency must be >= 0");
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        auto it = memo_->values.find(xi);
        if (it != memo_->values.end())
            return it->second;
    }
    const double eps = evaluate(xi);
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        memo_->values.emplace(xi, eps);
    }
    return eps;
}

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ValidationError(where + ": missing field '" + key + "'");
    if (!j.at(key).is_number())
        throw ValidationError(where + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    if (!j.is_object())
        throw ValidationError(where + ": must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k)
                ok = true;
        if (!ok)
            throw ValidationError(where + ": unknown field '" + it.key() + "'");
    }
}

} // namespace

MaterialModel MaterialModel::from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object())
        throw ValidationError(origin + ": top level must be an object");
    reject_unknown(j, {"name", "source", "epsilon_infinity", "rotational_terms", "oscillator_terms"},
                   origin);
    if (!j.contains("name") || !j.at("name").is_string())
        throw ValidationError(origin + ": missing string field 'name'");
    if (!j.contains("source") || !j.at("source").is_string())
        throw ValidationError(origin + ": missing string field 'source'");
    const double eps_inf = require_number(j, "epsilon_infinity", origin);

    std::vector<RotationalTerm> rot;
    if (j.contains("rotational_terms")) {
        if (!j.at("rotational_terms").is_array())
            throw ValidationError(origin + ": 'rotational_terms' must be an array");
        for (const auto& t : j.at("rotational_terms")) {
            reject_unknown(t, {"strength", "relaxation_time_s"}, origin + " rotational term");
            rot.push_back({require_number(t, "strength", origin + " rotational term"),
                           require_number(t, "relaxation_time_s", origin + " rotational term")});
        }
    }
    std::vector<OscillatorTerm> osc;
    if (j.contains("oscillator_terms")) {
        if (!j.at("oscillator_terms").is_array())
            throw ValidationError(origin + ": 'oscillator_terms' must be an array");
        for (const auto& t : j.at("oscillator_terms")) {
            reject_unknown(t, {"strength", "resonance_rad_s", "damping_rad_s"},
                           origin + " oscillator term");
            OscillatorTerm o;
            o.strength = require_number(t, "strength", origin + " oscillator term");
            o.resonance = require_number(t, "resonance_rad_s", origin + " oscillator term");
            o.damping = t.contains("damping_rad_s")
                            ? require_number(t, "damping_rad_s", origin + " oscillator term")
                            : 0.0;
            osc.push_back(o);
        }
    }
    return MaterialModel(j.at("name").get<std::string>(), eps_inf, std::move(rot), std::move(osc),
                         j.at("source").get<std::string>());
}

MaterialModel MaterialModel::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("material file '" + path + "': cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), "material file '" + path + "'");
}

double index_mismatch(const MaterialModel& a, const MaterialModel& b, double xi) {
    const double ea = a.permittivity(xi);
    return std::abs(ea - b.permittivity(xi)) / ea;
}

Electrolyte Electrolyte::salt_mM(double solvent_eps_static, double concentration_mM, int valence) {
    if (!(concentration_mM >= 0.0))
        throw ValidationError("electrolyte: salt concentration must be >= 0");
    if (valence == 0)
        throw ValidationError("electrolyte: ion valence must be nonzero");
    Electrolyte el;
    el.solvent_static_permittivity = solvent_eps_static;
    const double c = concentration_mM; // 1 mM = 1 mol/m^3
    if (c > 0.0) {
        el.species.push_back({c, valence});
        el.species.push_back({c, -valence});
    }
    return el;
}

Electrolyte Electrolyte::with_debye_length(double lambda_m) {
    if (!(lambda_m > 0.0))
        throw ValidationError("electrolyte: debye length must be > 0");
    Electrolyte el;
    el.fixed_debye_length = lambda_m;
    return el;
}

Electrolyte Electrolyte::none(double solvent_eps_static) {
    Electrolyte el;
    el.solvent_static_permittivity = solvent_eps_static;
    return el;
}

bool Electrolyte::has_ions() const {
    if (fixed_debye_length)
        return std::isfinite(*fixed_debye_length);
    for (const auto& s : species)
        if (s.concentration_mol_per_m3 > 0.0)
            return true;
    return false;
}

double Electrolyte::debye_length(const ThermalContext& ctx) const {
    if (fixed_debye_length)
        return *fixed_debye_length;
    double charge_density2 = 0.0; // sum_i n_i q_i^2, C^2/m^3
    for (const auto& s : species) {
        if (!(s.concentration_mol_per_m3 >= 0.0))
            throw ValidationError("electrolyte: ion concentration must be >= 0");
        if (s.valence == 0)
            throw ValidationError("electrolyte: ion valence must be nonzero");
        const double n = s.concentration_mol_per_m3 * constants::avogadro;
        const double q = s.valence * constants::elementary_charge;
        charge_density2 += n * q * q;
    }
    if (charge_density2 == 0.0)
        return std::numeric_limits<double>::infinity();
    return std::sqrt(constants::epsilon0 * solvent_static_permittivity * ctx.thermal_energy /
                     charge_density2);
}

} // namespace casolyte
