#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "casolyte/curved.hpp"
#include "casolyte/dielectric.hpp"
#include "casolyte/planar.hpp"

namespace casolyte {

// Strict unit-suffixed quantity parsing. Lengths: nm, um, mm, cm, m.
// Areas: the same with ^2. A bare number is rejected: every distance in a
// scenario file carries its unit.
double parse_length(const std::string& text);
double parse_area(const std::string& text);

enum class GeometryKind { planar, slabs, spheres, cylinders };
enum class SweepVariable { gap, width, salt_mM };
enum class SweepSpacing { log_spacing, linear_spacing };

struct SweepSpec {
    SweepVariable variable = SweepVariable::gap;
    double min = 0.0; // m, or mM for salt sweeps
    double max = 0.0;
    int points = 0;
    SweepSpacing spacing = SweepSpacing::log_spacing;

    std::vector<double> values() const;
};

// A fully validated scenario file: one geometry, optional materials and
// electrolyte, one swept variable.
struct Scenario {
    std::string name;
    GeometryKind kind = GeometryKind::planar;
    double temperature_K = 293.0;

    double gap = 0.0; // unset when swept
    double width = std::numeric_limits<double>::infinity();
    double area = 1e-12;
    double radius1 = 0.0, radius2 = 0.0, length = 0.0;

    std::optional<MaterialModel> gap_material;
    std::optional<MaterialModel> body_material;
    Electrolyte electrolyte; // default: ion free; rebuilt per point for salt sweeps

    SweepSpec sweep;
    TruncationConfig tolerances;

    // Parses and validates; material paths resolve relative to the scenario
    // file. Unknown fields anywhere are rejected.
    static Scenario from_json_file(const std::string& path);
    static Scenario from_json_text(const std::string& text, const std::string& origin,
                                   const std::string& base_dir);
};

struct ScenarioTable {
    std::vector<std::string> columns; // flags column last
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_flags;
    std::vector<bool> row_converged;
    bool all_converged = true;
};

// Computes every sweep row. Rows are distributed over `threads` workers;
// each row's reduction order is fixed, so the output is bit-identical for
// any thread count.
ScenarioTable run_scenario(const Scenario& sc, int threads = 1);

// CSV with '#' metadata lines, a header row, then one row per sweep point.
// Numbers are printed with %.17g so a round trip through text is exact.
void write_table_csv(const ScenarioTable& table, const Scenario& sc, std::ostream& out);

struct MaterialReportEntry {
    std::string file;
    bool valid = false;
    std::string error;
    std::string name;
    std::string source;
    double eps_static = 0.0;
    double eps_first_matsubara = 0.0;
    double mismatch_vs_reference = 0.0; // against the entry named "water", if any
};

// Loads and validates every *.json in dir; never throws on bad files, they
// come back with valid = false and the reason.
std::vector<MaterialReportEntry> survey_materials(const std::string& dir,
                                                  const ThermalContext& ctx);

} // namespace casolyte
