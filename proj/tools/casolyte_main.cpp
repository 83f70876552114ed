#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casolyte/constants.hpp"
#include "casolyte/curved.hpp"
#include "casolyte/planar.hpp"
#include "casolyte/scenario.hpp"

namespace {

using namespace casolyte;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_not_converged = 3;
constexpr int exit_io = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct KV {
    std::vector<std::pair<std::string, std::string>> items;
    void add(const std::string& k, double v) { items.push_back({k, fmt(v)}); }
    void add(const std::string& k, const std::string& v) { items.push_back({k, v}); }
    void print() const {
        for (const auto& [k, v] : items)
            std::cout << k << " " << v << "\n";
    }
    int write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "error: cannot open '" << path << "' for writing\n";
            return exit_io;
        }
        for (size_t i = 0; i < items.size(); ++i)
            out << (i ? "," : "") << items[i].first;
        out << "\n";
        for (size_t i = 0; i < items.size(); ++i)
            out << (i ? "," : "") << items[i].second;
        out << "\n";
        return exit_ok;
    }
};

std::string flags_or_dash(const std::vector<std::string>& flags) {
    if (flags.empty())
        return "-";
    std::string s;
    for (size_t i = 0; i < flags.size(); ++i)
        s += (i ? ";" : "") + flags[i];
    return s;
}

struct CommonOpts {
    double temperature = 293.0;
    double tol = 0.0; // 0 = defaults
    std::string out;

    TruncationConfig config() const {
        TruncationConfig cfg;
        if (tol > 0.0) {
            cfg.quad_rel_tol = tol;
            cfg.matsubara_rel_tol = tol;
            cfg.channel.target_rel_tol = tol;
        }
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-T,--temperature", o.temperature, "Temperature in K")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", o.tol, "Relative tolerance for quadrature, series and channel sums");
    cmd->add_option("--out", o.out, "Write the result as CSV to this path");
}

int finish(const KV& kv, const CommonOpts& o, bool converged) {
    kv.print();
    if (!o.out.empty()) {
        const int rc = kv.write_csv(o.out);
        if (rc != exit_ok)
            return rc;
    }
    return converged ? exit_ok : exit_not_converged;
}

int run_planar(const std::string& gap_s, const std::string& width_s, const std::string& area_s,
               const std::string& gap_mat_path, const std::string& body_mat_path, double salt_mM,
               double debye_nm, const CommonOpts& o) {
    const ThermalContext ctx = ThermalContext::at(o.temperature);
    PlanarGeometry geom;
    geom.gap = parse_length(gap_s);
    geom.slab_width = width_s.empty() ? std::numeric_limits<double>::infinity() : parse_length(width_s);
    geom.area = parse_area(area_s);
    geom.validate();
    const TruncationConfig cfg = o.config();

    if (salt_mM > 0.0 && debye_nm > 0.0)
        throw ValidationError("give --salt-mM or --debye-nm, not both");
    if (gap_mat_path.empty() != body_mat_path.empty())
        throw ValidationError("give both --gap-material and --body-material or neither");

    KV kv;
    kv.add("gap_m", geom.gap);
    if (std::isfinite(geom.slab_width))
        kv.add("width_m", geom.slab_width);
    kv.add("area_m2", geom.area);
    kv.add("temperature_K", ctx.temperature);

    if (gap_mat_path.empty()) {
        // No materials: only the universal, material-independent part exists.
        const double u = geom.area * universal_energy_per_area(geom.gap, ctx);
        kv.add("universal_J", u);
        kv.add("universal_kBT", u / ctx.thermal_energy);
        kv.add("total_J", u);
        kv.add("total_kBT", u / ctx.thermal_energy);
        kv.add("converged", 1.0);
        kv.add("flags", "universal_only_no_materials");
        return finish(kv, o, true);
    }

    const MaterialModel gap_mat = MaterialModel::from_json_file(gap_mat_path);
    const MaterialModel body_mat = MaterialModel::from_json_file(body_mat_path);
    Electrolyte el = Electrolyte::none(gap_mat.static_permittivity());
    if (debye_nm > 0.0)
        el = Electrolyte::with_debye_length(debye_nm * 1e-9);
    else if (salt_mM > 0.0)
        el = Electrolyte::salt_mM(gap_mat.static_permittivity(), salt_mM);

    const EnergyBreakdown b = total_planar_energy(geom, gap_mat, el, body_mat, ctx, cfg);
    const double kt = ctx.thermal_energy;
    kv.add("universal_J", b.universal);
    kv.add("universal_kBT", b.universal / kt);
    kv.add("longitudinal_J", b.longitudinal);
    kv.add("longitudinal_kBT", b.longitudinal / kt);
    kv.add("nonuniversal_J", b.nonuniversal);
    kv.add("nonuniversal_kBT", b.nonuniversal / kt);
    kv.add("total_J", b.total);
    kv.add("total_kBT", b.total / kt);
    kv.add("universal_to_nonuniversal_ratio",
           b.nonuniversal == 0.0 ? std::numeric_limits<double>::infinity()
                                 : std::abs(b.universal / b.nonuniversal));
    kv.add("matsubara_cutoff", static_cast<double>(b.convergence.matsubara_cutoff));
    kv.add("tail_estimate_J", b.convergence.tail_estimate);
    kv.add("quad_rel_err", b.convergence.quadrature_rel_err);
    kv.add("converged", b.convergence.converged ? 1.0 : 0.0);
    kv.add("flags", flags_or_dash(b.convergence.flags));
    return finish(kv, o, b.convergence.converged);
}

int run_spheres(const std::string& r1_s, const std::string& r2_s, const std::string& gap_s,
                const CommonOpts& o) {
    const ThermalContext ctx = ThermalContext::at(o.temperature);
    SpherePair g{parse_length(r1_s), parse_length(r2_s), parse_length(gap_s)};
    const TruncationConfig cfg = o.config();
    UniversalResult res;
    const double energy = sphere_universal_energy(g, ctx, &res, cfg.channel);
    KV kv;
    kv.add("gap_m", g.gap);
    kv.add("x", g.aspect_x());
    kv.add("u", g.aspect_u());
    kv.add("conformal_y", conformal_parameter(g));
    kv.add("f", res.value);
    kv.add("f_pfa", f_pfa(g));
    kv.add("f_ssa", f_ssa(g));
    kv.add("f_ssa_center", f_ssa_center(g));
    kv.add("f_interp_approx", f_interpolated_approx(g));
    kv.add("energy_J", energy);
    kv.add("energy_kBT", energy / ctx.thermal_energy);
    kv.add("order_used", static_cast<double>(res.order_used));
    kv.add("converged", res.report.converged ? 1.0 : 0.0);
    kv.add("flags", flags_or_dash(res.report.flags));
    return finish(kv, o, res.report.converged);
}

int run_cylinders(const std::string& r1_s, const std::string& r2_s, const std::string& gap_s,
                  const std::string& length_s, const CommonOpts& o) {
    const ThermalContext ctx = ThermalContext::at(o.temperature);
    CylinderPair g{parse_length(r1_s), parse_length(r2_s), parse_length(gap_s),
                   parse_length(length_s)};
    const TruncationConfig cfg = o.config();
    UniversalResult res;
    const double energy = cylinder_universal_energy(g, ctx, &res, cfg.channel, cfg);
    KV kv;
    kv.add("gap_m", g.gap);
    kv.add("x", g.aspect_x());
    kv.add("u", g.aspect_u());
    kv.add("phi", res.value);
    kv.add("phi_pfa", phi_pfa(g));
    kv.add("phi_ssa", phi_ssa(g));
    kv.add("phi_ssa_center", phi_ssa_center(g));
    kv.add("phi_interp_approx", phi_interpolated_approx(g));
    kv.add("energy_J", energy);
    kv.add("energy_kBT", energy / ctx.thermal_energy);
    kv.add("order_used", static_cast<double>(res.order_used));
    kv.add("converged", res.report.converged ? 1.0 : 0.0);
    kv.add("flags", flags_or_dash(res.report.flags));
    return finish(kv, o, res.report.converged);
}

int run_crossover(const std::string& family, const std::string& r1_s, const std::string& r2_s,
                  const std::string& length_s, double threshold, const CommonOpts& o) {
    CrossoverQuery q;
    if (family == "spheres")
        q.family = CrossoverQuery::Family::spheres;
    else if (family == "cylinders")
        q.family = CrossoverQuery::Family::cylinders;
    else
        throw ValidationError("crossover: --family must be spheres or cylinders");
    q.radius1 = parse_length(r1_s);
    q.radius2 = parse_length(r2_s);
    if (!length_s.empty())
        q.length = parse_length(length_s);
    q.threshold_kBT = threshold;
    const TruncationConfig cfg = o.config();
    const double d = find_crossover_gap(q, cfg.channel, cfg);
    KV kv;
    kv.add("crossover_gap_m", d);
    kv.add("crossover_gap_um", d * 1e6);
    kv.add("threshold_kBT", threshold);
    return finish(kv, o, true);
}

int run_scenario_cmd(const std::string& path, const std::string& out_path, int threads) {
    const Scenario sc = Scenario::from_json_file(path);
    const ScenarioTable table = run_scenario(sc, threads);
    if (out_path.empty() || out_path == "-") {
        write_table_csv(table, sc, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open '" << out_path << "' for writing\n";
            return exit_io;
        }
        write_table_csv(table, sc, out);
    }
    return table.all_converged ? exit_ok : exit_not_converged;
}

int run_materials_validate(const std::string& dir, const CommonOpts& o) {
    const ThermalContext ctx = ThermalContext::at(o.temperature);
    const auto report = survey_materials(dir, ctx);
    bool all_valid = true;
    std::printf("%-32s %-8s %-12s %-14s %-14s %s\n", "file", "status", "eps_static", "eps_at_xi1",
                "mismatch_water", "name");
    for (const auto& e : report) {
        const std::string base = e.file.substr(e.file.find_last_of('/') + 1);
        if (e.valid) {
            std::printf("%-32s %-8s %-12.6g %-14.6g %-14.6g %s\n", base.c_str(), "ok",
                        e.eps_static, e.eps_first_matsubara, e.mismatch_vs_reference,
                        e.name.c_str());
        } else {
            all_valid = false;
            std::printf("%-32s %-8s %s\n", base.c_str(), "INVALID", e.error.c_str());
        }
    }
    return all_valid ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"casolyte: thermal Casimir/Lifshitz free energies in electrolyte solution"};
    app.require_subcommand(1);

    CommonOpts planar_o, spheres_o, cylinders_o, crossover_o, materials_o;

    auto* planar = app.add_subcommand("planar", "Plates or slabs across a liquid gap");
    std::string p_gap, p_width, p_area = "1 um^2", p_gapmat, p_bodymat;
    double p_salt = 0.0, p_debye = 0.0;
    planar->add_option("--gap", p_gap, "Surface separation, e.g. 100nm")->required();
    planar->add_option("--width", p_width, "Slab width (omit for half spaces)");
    planar->add_option("--area", p_area, "Plate area, e.g. 1 um^2");
    planar->add_option("--gap-material", p_gapmat, "Gap medium material JSON");
    planar->add_option("--body-material", p_bodymat, "Body material JSON");
    planar->add_option("--salt-mM", p_salt, "Symmetric 1:1 salt concentration in mM");
    planar->add_option("--debye-nm", p_debye, "Debye screening length in nm");
    add_common(planar, planar_o);

    auto* spheres = app.add_subcommand("spheres", "Universal interaction of two spheres");
    std::string s_r1, s_r2, s_gap;
    spheres->add_option("--r1", s_r1, "Radius of sphere 1")->required();
    spheres->add_option("--r2", s_r2, "Radius of sphere 2")->required();
    spheres->add_option("--gap", s_gap, "Surface separation")->required();
    add_common(spheres, spheres_o);

    auto* cylinders = app.add_subcommand("cylinders", "Universal interaction of two parallel cylinders");
    std::string c_r1, c_r2, c_gap, c_len;
    cylinders->add_option("--r1", c_r1, "Radius of cylinder 1")->required();
    cylinders->add_option("--r2", c_r2, "Radius of cylinder 2")->required();
    cylinders->add_option("--gap", c_gap, "Surface separation")->required();
    cylinders->add_option("--length", c_len, "Common length")->required();
    add_common(cylinders, cylinders_o);

    auto* crossover = app.add_subcommand("crossover", "Gap at which |F| reaches a kT threshold");
    std::string x_family = "spheres", x_r1, x_r2, x_len;
    double x_threshold = 1.0;
    crossover->add_option("--family", x_family, "spheres or cylinders");
    crossover->add_option("--r1", x_r1, "Radius 1")->required();
    crossover->add_option("--r2", x_r2, "Radius 2")->required();
    crossover->add_option("--length", x_len, "Cylinder length");
    crossover->add_option("--threshold", x_threshold, "Threshold in kT");
    add_common(crossover, crossover_o);

    auto* scenario = app.add_subcommand("scenario", "Scenario file operations");
    auto* scen_run = scenario->add_subcommand("run", "Run a sweep scenario to CSV");
    std::string sc_file, sc_out;
    int sc_threads = 1;
    scen_run->add_option("file", sc_file, "Scenario JSON file")->required();
    scen_run->add_option("--out", sc_out, "Output CSV path ('-' = stdout)");
    scen_run->add_option("--threads", sc_threads, "Worker threads (output is identical)")
        ->check(CLI::Range(1, 64));
    scenario->require_subcommand(1);

    auto* materials = app.add_subcommand("materials", "Material file operations");
    auto* mat_validate = materials->add_subcommand("validate", "Validate a directory of materials");
    std::string mat_dir;
    mat_validate->add_option("dir", mat_dir, "Directory with material JSON files")->required();
    add_common(mat_validate, materials_o);
    materials->require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (*planar)
            return run_planar(p_gap, p_width, p_area, p_gapmat, p_bodymat, p_salt, p_debye,
                              planar_o);
        if (*spheres)
            return run_spheres(s_r1, s_r2, s_gap, spheres_o);
        if (*cylinders)
            return run_cylinders(c_r1, c_r2, c_gap, c_len, cylinders_o);
        if (*crossover)
            return run_crossover(x_family, x_r1, x_r2, x_len, x_threshold, crossover_o);
        if (*scen_run)
            return run_scenario_cmd(sc_file, sc_out, sc_threads);
        if (*mat_validate)
            return run_materials_validate(mat_dir, materials_o);
        return exit_validation;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_validation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const NonContractionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
