#include "casolyte/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "casolyte/constants.hpp"

namespace casolyte {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct UnitEntry {
    const char* suffix;
    double factor;
};

double parse_with_units(const std::string& text, const UnitEntry* units, size_t n_units,
                        const char* what) {
    size_t pos = 0;
    double value;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ValidationError(std::string(what) + " '" + text + "': no leading number");
    }
    std::string unit = text.substr(pos);
    const auto strip = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    unit = strip(unit);
    if (unit.empty())
        throw ValidationError(std::string(what) + " '" + text +
                              "': unit suffix required (e.g. nm, um, m)");
    for (size_t i = 0; i < n_units; ++i)
        if (unit == units[i].suffix)
            return value * units[i].factor;
    throw ValidationError(std::string(what) + " '" + text + "': unknown unit '" + unit + "'");
}

constexpr UnitEntry length_units[] = {
    {"nm", 1e-9}, {"um", 1e-6}, {"µm", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2}, {"m", 1.0},
};
constexpr UnitEntry area_units[] = {
    {"nm^2", 1e-18}, {"um^2", 1e-12},  {"µm^2", 1e-12},
    {"mm^2", 1e-6},  {"cm^2", 1e-4},   {"m^2", 1.0},
};

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

double get_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ValidationError(where + ": missing numeric field '" + key + "'");
    return j.at(key).get<double>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ValidationError(where + ": missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

double get_length(const json& j, const char* key, const std::string& where) {
    return parse_length(get_string(j, key, where));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double parse_length(const std::string& text) {
    return parse_with_units(text, length_units, std::size(length_units), "length");
}

double parse_area(const std::string& text) {
    return parse_with_units(text, area_units, std::size(area_units), "area");
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        out[i] = spacing == SweepSpacing::log_spacing ? min * std::pow(max / min, t)
                                                      : min + (max - min) * t;
    }
    out.front() = min;
    out.back() = max;
    return out;
}

Scenario Scenario::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("scenario file '" + path + "': cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), "scenario file '" + path + "'",
                          fs::path(path).parent_path().string());
}

Scenario Scenario::from_json_text(const std::string& text, const std::string& origin,
                                  const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": not valid JSON (" + e.what() + ")");
    }
    reject_unknown(j, {"name", "temperature_K", "geometry", "materials", "electrolyte", "sweep",
                       "tolerances"},
                   origin);

    Scenario sc;
    sc.name = get_string(j, "name", origin);
    if (j.contains("temperature_K")) {
        sc.temperature_K = get_number(j, "temperature_K", origin);
        if (!(sc.temperature_K > 0.0))
            throw ValidationError(origin + ": temperature_K must be > 0");
    }

    if (!j.contains("sweep"))
        throw ValidationError(origin + ": missing 'sweep'");
    const json& sw = j.at("sweep");
    reject_unknown(sw, {"variable", "min", "max", "points", "spacing"}, origin + " sweep");
    const std::string var = get_string(sw, "variable", origin + " sweep");
    if (var == "gap")
        sc.sweep.variable = SweepVariable::gap;
    else if (var == "width")
        sc.sweep.variable = SweepVariable::width;
    else if (var == "salt_mM")
        sc.sweep.variable = SweepVariable::salt_mM;
    else
        throw ValidationError(origin + " sweep: variable must be gap, width or salt_mM");
    if (sc.sweep.variable == SweepVariable::salt_mM) {
        sc.sweep.min = get_number(sw, "min", origin + " sweep");
        sc.sweep.max = get_number(sw, "max", origin + " sweep");
    } else {
        sc.sweep.min = get_length(sw, "min", origin + " sweep");
        sc.sweep.max = get_length(sw, "max", origin + " sweep");
    }
    const double pts = get_number(sw, "points", origin + " sweep");
    sc.sweep.points = static_cast<int>(pts);
    if (sc.sweep.points != pts || sc.sweep.points < 2)
        throw ValidationError(origin + " sweep: degenerate sweep, need an integer points >= 2");
    if (!(sc.sweep.min < sc.sweep.max))
        throw ValidationError(origin + " sweep: degenerate sweep, need min < max");
    if (sw.contains("spacing")) {
        const std::string sp = get_string(sw, "spacing", origin + " sweep");
        if (sp == "log")
            sc.sweep.spacing = SweepSpacing::log_spacing;
        else if (sp == "linear")
            sc.sweep.spacing = SweepSpacing::linear_spacing;
        else
            throw ValidationError(origin + " sweep: spacing must be 'log' or 'linear'");
    }
    if (sc.sweep.spacing == SweepSpacing::log_spacing && !(sc.sweep.min > 0.0))
        throw ValidationError(origin + " sweep: log spacing needs min > 0");
    if (!(sc.sweep.min >= 0.0))
        throw ValidationError(origin + " sweep: min must be >= 0");

    if (!j.contains("geometry"))
        throw ValidationError(origin + ": missing 'geometry'");
    const json& ge = j.at("geometry");
    const std::string gw = origin + " geometry";
    const std::string type = get_string(ge, "type", gw);
    const bool gap_swept = sc.sweep.variable == SweepVariable::gap;
    const bool width_swept = sc.sweep.variable == SweepVariable::width;
    auto need_gap = [&]() {
        if (gap_swept) {
            if (ge.contains("gap"))
                throw ValidationError(gw + ": omit 'gap' when it is the sweep variable");
            return;
        }
        sc.gap = get_length(ge, "gap", gw);
    };
    if (type == "planar" || type == "slabs") {
        sc.kind = type == "planar" ? GeometryKind::planar : GeometryKind::slabs;
        reject_unknown(ge, {"type", "gap", "width", "area"}, gw);
        need_gap();
        if (sc.kind == GeometryKind::slabs) {
            if (width_swept) {
                if (ge.contains("width"))
                    throw ValidationError(gw + ": omit 'width' when it is the sweep variable");
            } else {
                sc.width = get_length(ge, "width", gw);
            }
        } else if (ge.contains("width") || width_swept) {
            throw ValidationError(gw + ": 'width' only applies to slabs");
        }
        if (ge.contains("area"))
            sc.area = parse_area(get_string(ge, "area", gw));
    } else if (type == "spheres" || type == "cylinders") {
        sc.kind = type == "spheres" ? GeometryKind::spheres : GeometryKind::cylinders;
        if (width_swept || sc.sweep.variable == SweepVariable::salt_mM)
            throw ValidationError(gw + ": curved geometries only sweep 'gap'");
        if (sc.kind == GeometryKind::spheres)
            reject_unknown(ge, {"type", "radius_1", "radius_2", "gap"}, gw);
        else
            reject_unknown(ge, {"type", "radius_1", "radius_2", "gap", "length"}, gw);
        sc.radius1 = get_length(ge, "radius_1", gw);
        sc.radius2 = get_length(ge, "radius_2", gw);
        need_gap();
        if (sc.kind == GeometryKind::cylinders)
            sc.length = get_length(ge, "length", gw);
    } else {
        throw ValidationError(gw + ": type must be planar, slabs, spheres or cylinders");
    }

    if (j.contains("materials")) {
        const json& ma = j.at("materials");
        reject_unknown(ma, {"gap", "body"}, origin + " materials");
        if (!ma.contains("gap") || !ma.contains("body"))
            throw ValidationError(origin + " materials: provide both 'gap' and 'body' or neither");
        const auto resolve = [&base_dir](const std::string& p) {
            fs::path fp(p);
            if (fp.is_relative() && !base_dir.empty())
                fp = fs::path(base_dir) / fp;
            return fp.string();
        };
        sc.gap_material =
            MaterialModel::from_json_file(resolve(get_string(ma, "gap", origin + " materials")));
        sc.body_material =
            MaterialModel::from_json_file(resolve(get_string(ma, "body", origin + " materials")));
    }

    if (j.contains("electrolyte")) {
        if (sc.sweep.variable == SweepVariable::salt_mM)
            throw ValidationError(origin +
                                  ": omit 'electrolyte' when sweeping salt_mM (it is rebuilt per "
                                  "sweep point as a symmetric 1:1 salt)");
        const json& el = j.at("electrolyte");
        reject_unknown(el, {"debye_length", "species"}, origin + " electrolyte");
        if (el.contains("debye_length") == el.contains("species"))
            throw ValidationError(origin +
                                  " electrolyte: give exactly one of 'debye_length' or 'species'");
        if (el.contains("debye_length")) {
            sc.electrolyte = Electrolyte::with_debye_length(
                parse_length(get_string(el, "debye_length", origin + " electrolyte")));
        } else {
            if (!sc.gap_material)
                throw ValidationError(origin + " electrolyte: species need a gap material (its "
                                               "static permittivity sets the screening length)");
            Electrolyte e = Electrolyte::none(sc.gap_material->static_permittivity());
            if (!el.at("species").is_array() || el.at("species").empty())
                throw ValidationError(origin + " electrolyte: 'species' must be a nonempty array");
            for (const auto& s : el.at("species")) {
                reject_unknown(s, {"concentration_mM", "valence"}, origin + " electrolyte species");
                const double c = get_number(s, "concentration_mM", origin + " electrolyte species");
                const double z = get_number(s, "valence", origin + " electrolyte species");
                if (!(c >= 0.0))
                    throw ValidationError(origin + " electrolyte: concentration_mM must be >= 0");
                if (z != static_cast<int>(z) || z == 0.0)
                    throw ValidationError(origin +
                                          " electrolyte: valence must be a nonzero integer");
                e.species.push_back({c, static_cast<int>(z)}); // 1 mM = 1 mol/m^3
            }
            sc.electrolyte = std::move(e);
        }
    } else if (sc.sweep.variable == SweepVariable::salt_mM && !sc.gap_material) {
        throw ValidationError(origin + ": salt sweeps need materials (the gap material's static "
                                       "permittivity sets the screening length)");
    }

    if (j.contains("tolerances")) {
        const json& to = j.at("tolerances");
        reject_unknown(to,
                       {"quad_rel_tol", "quad_max_nodes", "matsubara_rel_tol",
                        "matsubara_max_terms", "channel_rel_tol", "channel_max_order"},
                       origin + " tolerances");
        TruncationConfig& cfg = sc.tolerances;
        if (to.contains("quad_rel_tol"))
            cfg.quad_rel_tol = get_number(to, "quad_rel_tol", origin);
        if (to.contains("quad_max_nodes"))
            cfg.quad_max_nodes = static_cast<int>(get_number(to, "quad_max_nodes", origin));
        if (to.contains("matsubara_rel_tol"))
            cfg.matsubara_rel_tol = get_number(to, "matsubara_rel_tol", origin);
        if (to.contains("matsubara_max_terms"))
            cfg.matsubara_max_terms = static_cast<int>(get_number(to, "matsubara_max_terms", origin));
        if (to.contains("channel_rel_tol"))
            cfg.channel.target_rel_tol = get_number(to, "channel_rel_tol", origin);
        if (to.contains("channel_max_order"))
            cfg.channel.max_order_budget = static_cast<int>(get_number(to, "channel_max_order", origin));
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ValidationError(origin + " tolerances: " + e.what());
        }
    }

    const bool curved = sc.kind == GeometryKind::spheres || sc.kind == GeometryKind::cylinders;
    if (!curved && sc.electrolyte.has_ions() && sc.electrolyte.fixed_debye_length &&
        !sc.body_material)
        throw ValidationError(origin + ": the screened zero-frequency term needs materials");
    return sc;
}

namespace {

struct Row {
    std::vector<double> nums;
    bool converged = true;
    std::string flags;
};

std::string join_flags(const std::vector<std::string>& flags) {
    if (flags.empty())
        return "-";
    std::string out;
    for (size_t i = 0; i < flags.size(); ++i) {
        if (i)
            out += ';';
        out += flags[i];
    }
    return out;
}

// PFA estimate of the nonzero-Matsubara part for a sphere pair: the planar
// per-area energy integrated over the gap profile,
//   F ~ 2 pi R_eff Int_d^inf E(h) dh  (h = d/s maps the tail to s in (0,1]).
// Approximate by construction; reported in its own clearly labeled column.
double sphere_nonuniversal_pfa(double gap, double reff, const MaterialModel& gap_mat,
                               const MaterialModel& body_mat, const ThermalContext& ctx,
                               TruncationConfig cfg, ConvergenceReport& rep) {
    cfg.quad_rel_tol = std::max(cfg.quad_rel_tol, 1e-7);
    auto per_area = [&](double h) {
        PlanarGeometry pg{h, inf, 1.0};
        ConvergenceReport inner;
        auto term = [&](int n) {
            return matsubara_term_per_area(n, pg, gap_mat, body_mat, ctx, cfg, inner);
        };
        const double v = sum_with_tail(term, cfg, inner);
        rep.converged = rep.converged && inner.converged;
        return v;
    };
    auto integrand = [&](double s) { return per_area(gap / s) / (s * s); };
    ConvergenceReport qrep;
    const double integral = gap * integrate_finite(integrand, 0.0, 1.0, cfg, qrep);
    rep.converged = rep.converged && qrep.converged;
    return 2.0 * constants::pi * reff * integral;
}

Row planar_row(const Scenario& sc, const ThermalContext& ctx, double v) {
    const double gap = sc.sweep.variable == SweepVariable::gap ? v : sc.gap;
    const double width = sc.sweep.variable == SweepVariable::width ? v : sc.width;
    Electrolyte el = sc.electrolyte;
    if (sc.sweep.variable == SweepVariable::salt_mM)
        el = Electrolyte::salt_mM(sc.gap_material->static_permittivity(), v);

    PlanarGeometry geom{gap, width, sc.area};
    EnergyBreakdown b;
    if (sc.gap_material && sc.body_material) {
        b = total_planar_energy(geom, *sc.gap_material, el, *sc.body_material, ctx, sc.tolerances);
    } else {
        geom.validate();
        b.universal = sc.area * universal_energy_per_area(gap, ctx);
        b.total = b.universal;
        b.convergence.flags.push_back("universal_only_no_materials");
    }
    const double kt = ctx.thermal_energy;
    const double ratio = b.nonuniversal == 0.0 ? inf : std::abs(b.universal / b.nonuniversal);
    Row row;
    row.nums = {v,
                b.total,
                b.total / kt,
                b.universal,
                b.universal / kt,
                b.longitudinal,
                b.longitudinal / kt,
                b.nonuniversal,
                b.nonuniversal / kt,
                ratio,
                static_cast<double>(b.convergence.matsubara_cutoff),
                b.convergence.tail_estimate,
                b.convergence.quadrature_rel_err};
    row.converged = b.convergence.converged;
    row.flags = join_flags(b.convergence.flags);
    return row;
}

Row sphere_row(const Scenario& sc, const ThermalContext& ctx, double v) {
    SpherePair g{sc.radius1, sc.radius2, v};
    UniversalResult res = f_exact(g, sc.tolerances.channel);
    const double kt = ctx.thermal_energy;
    const double energy = -kt * res.value;
    Row row;
    row.nums = {v,
                g.aspect_x(),
                g.aspect_u(),
                conformal_parameter(g),
                res.value,
                f_pfa(g),
                f_ssa(g),
                f_ssa_center(g),
                f_interpolated_approx(g),
                energy,
                energy / kt,
                static_cast<double>(res.order_used)};
    if (sc.gap_material && sc.body_material) {
        const double nu = sphere_nonuniversal_pfa(v, g.effective_radius(), *sc.gap_material,
                                                  *sc.body_material, ctx, sc.tolerances,
                                                  res.report);
        row.nums.push_back(nu);
        row.nums.push_back(nu / kt);
    }
    row.converged = res.report.converged;
    row.flags = join_flags(res.report.flags);
    return row;
}

Row cylinder_row(const Scenario& sc, const ThermalContext& ctx, double v) {
    CylinderPair g{sc.radius1, sc.radius2, v, sc.length};
    UniversalResult res;
    const double energy = cylinder_universal_energy(g, ctx, &res, sc.tolerances.channel,
                                                    sc.tolerances);
    const double kt = ctx.thermal_energy;
    Row row;
    row.nums = {v,
                g.aspect_x(),
                g.aspect_u(),
                res.value,
                phi_pfa(g),
                phi_ssa(g),
                phi_ssa_center(g),
                phi_interpolated_approx(g),
                energy,
                energy / kt,
                static_cast<double>(res.order_used)};
    row.converged = res.report.converged;
    row.flags = join_flags(res.report.flags);
    return row;
}

std::vector<std::string> columns_for(const Scenario& sc) {
    std::string swept = "gap_m";
    if (sc.sweep.variable == SweepVariable::width)
        swept = "width_m";
    else if (sc.sweep.variable == SweepVariable::salt_mM)
        swept = "salt_mM";
    switch (sc.kind) {
    case GeometryKind::planar:
    case GeometryKind::slabs:
        return {swept,
                "total_J",
                "total_kBT",
                "universal_J",
                "universal_kBT",
                "longitudinal_J",
                "longitudinal_kBT",
                "nonuniversal_J",
                "nonuniversal_kBT",
                "universal_to_nonuniversal_ratio",
                "matsubara_cutoff",
                "tail_estimate_J",
                "quad_rel_err"};
    case GeometryKind::spheres: {
        std::vector<std::string> c{swept,         "x",     "u",
                                   "conformal_y", "f",     "f_pfa",
                                   "f_ssa",       "f_ssa_center", "f_interp_approx",
                                   "energy_J",    "energy_kBT",   "order_used"};
        if (sc.gap_material && sc.body_material) {
            c.push_back("nonuniversal_pfa_approx_J");
            c.push_back("nonuniversal_pfa_approx_kBT");
        }
        return c;
    }
    case GeometryKind::cylinders:
        return {swept,      "x",       "u",          "phi",
                "phi_pfa",  "phi_ssa", "phi_ssa_center", "phi_interp_approx",
                "energy_J", "energy_kBT", "order_used"};
    }
    return {};
}

} // namespace

ScenarioTable run_scenario(const Scenario& sc, int threads) {
    const ThermalContext ctx = ThermalContext::at(sc.temperature_K);
    const std::vector<double> values = sc.sweep.values();
    const size_t n = values.size();

    std::vector<Row> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (size_t i; (i = cursor.fetch_add(1)) < n;) {
            try {
                switch (sc.kind) {
                case GeometryKind::planar:
                case GeometryKind::slabs:
                    rows[i] = planar_row(sc, ctx, values[i]);
                    break;
                case GeometryKind::spheres:
                    rows[i] = sphere_row(sc, ctx, values[i]);
                    break;
                case GeometryKind::cylinders:
                    rows[i] = cylinder_row(sc, ctx, values[i]);
                    break;
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nt = std::clamp<int>(threads, 1, 64);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int t = 0; t < nt; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (size_t i = 0; i < n; ++i)
        if (errors[i])
            std::rethrow_exception(errors[i]);

    ScenarioTable table;
    table.columns = columns_for(sc);
    for (auto& r : rows) {
        table.rows.push_back(std::move(r.nums));
        table.row_flags.push_back(std::move(r.flags));
        table.row_converged.push_back(r.converged);
        table.all_converged = table.all_converged && r.converged;
    }
    return table;
}

void write_table_csv(const ScenarioTable& table, const Scenario& sc, std::ostream& out) {
    out << "# scenario: " << sc.name << "\n";
    out << "# temperature_K: " << fmt(sc.temperature_K) << "\n";
    if (sc.gap_material)
        out << "# gap_material: " << sc.gap_material->name() << "\n";
    if (sc.body_material)
        out << "# body_material: " << sc.body_material->name() << "\n";
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << ",converged,flags\n";
    for (size_t r = 0; r < table.rows.size(); ++r) {
        for (size_t c = 0; c < table.rows[r].size(); ++c)
            out << (c ? "," : "") << fmt(table.rows[r][c]);
        out << ',' << (table.row_converged[r] ? 1 : 0) << ',' << table.row_flags[r] << "\n";
    }
}

std::vector<MaterialReportEntry> survey_materials(const std::string& dir,
                                                  const ThermalContext& ctx) {
    if (!fs::is_directory(dir))
        throw ValidationError("materials directory '" + dir + "' does not exist");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    std::vector<MaterialReportEntry> out;
    std::vector<std::optional<MaterialModel>> models;
    for (const auto& f : files) {
        MaterialReportEntry e;
        e.file = f;
        try {
            MaterialModel m = MaterialModel::from_json_file(f);
            e.valid = true;
            e.name = m.name();
            e.source = m.source();
            e.eps_static = m.static_permittivity();
            e.eps_first_matsubara = m.permittivity(ctx.first_matsubara);
            models.emplace_back(std::move(m));
        } catch (const ValidationError& err) {
            e.error = err.what();
            models.emplace_back(std::nullopt);
        }
        out.push_back(std::move(e));
    }
    const MaterialModel* reference = nullptr;
    for (const auto& m : models)
        if (m && m->name() == "water")
            reference = &*m;
    if (reference)
        for (size_t i = 0; i < out.size(); ++i)
            if (models[i])
                out[i].mismatch_vs_reference =
                    index_mismatch(*reference, *models[i], ctx.first_matsubara);
    return out;
}

} // namespace casolyte
