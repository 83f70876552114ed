#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "casolyte/constants.hpp"
#include "casolyte/curved.hpp"
#include "casolyte/planar.hpp"
#include "casolyte/scenario.hpp"

namespace py = pybind11;
using namespace casolyte;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Thermal Casimir/Lifshitz free energies between dielectric bodies in electrolyte";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NonContractionError>(m, "NonContractionError", PyExc_ArithmeticError);

    auto constants = m.def_submodule("constants");
    constants.attr("k_boltzmann") = constants::k_boltzmann;
    constants.attr("hbar") = constants::hbar;
    constants.attr("c_light") = constants::c_light;
    constants.attr("zeta3") = constants::zeta3;
    constants.attr("univ_hamaker_kT") = constants::univ_hamaker_kT;

    py::class_<ThermalContext>(m, "ThermalContext")
        .def_static("at", &ThermalContext::at, py::arg("temperature_K"))
        .def_readonly("temperature", &ThermalContext::temperature)
        .def_readonly("thermal_energy", &ThermalContext::thermal_energy)
        .def_readonly("first_matsubara", &ThermalContext::first_matsubara);
    m.def("matsubara_frequency", &matsubara_frequency, py::arg("ctx"), py::arg("n"));
    m.def("mean_mode_energy", &mean_mode_energy, py::arg("ctx"), py::arg("omega"));

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("converged", &ConvergenceReport::converged)
        .def_readonly("achieved_rel_err", &ConvergenceReport::achieved_rel_err)
        .def_readonly("nodes_used", &ConvergenceReport::nodes_used)
        .def_readonly("terms_used", &ConvergenceReport::terms_used)
        .def_readonly("tail_estimate", &ConvergenceReport::tail_estimate)
        .def_readonly("flags", &ConvergenceReport::flags);

    py::class_<ChannelTruncation>(m, "ChannelTruncation")
        .def(py::init<>())
        .def_readwrite("initial_order", &ChannelTruncation::initial_order)
        .def_readwrite("auto_grow", &ChannelTruncation::auto_grow)
        .def_readwrite("target_rel_tol", &ChannelTruncation::target_rel_tol)
        .def_readwrite("max_order_budget", &ChannelTruncation::max_order_budget);

    py::class_<TruncationConfig>(m, "TruncationConfig")
        .def(py::init<>())
        .def_readwrite("quad_rel_tol", &TruncationConfig::quad_rel_tol)
        .def_readwrite("quad_max_nodes", &TruncationConfig::quad_max_nodes)
        .def_readwrite("matsubara_rel_tol", &TruncationConfig::matsubara_rel_tol)
        .def_readwrite("matsubara_max_terms", &TruncationConfig::matsubara_max_terms)
        .def_readwrite("channel", &TruncationConfig::channel);

    py::class_<MaterialModel>(m, "MaterialModel")
        .def_static("from_json_file", &MaterialModel::from_json_file, py::arg("path"))
        .def_static("vacuum", &MaterialModel::vacuum)
        .def("permittivity", &MaterialModel::permittivity, py::arg("xi"))
        .def_property_readonly("name", &MaterialModel::name)
        .def_property_readonly("static_permittivity", &MaterialModel::static_permittivity);
    m.def("index_mismatch", &index_mismatch, py::arg("a"), py::arg("b"), py::arg("xi"));

    py::class_<Electrolyte>(m, "Electrolyte")
        .def_static("salt_mM", &Electrolyte::salt_mM, py::arg("solvent_eps_static"),
                    py::arg("concentration_mM"), py::arg("valence") = 1)
        .def_static("with_debye_length", &Electrolyte::with_debye_length, py::arg("lambda_m"))
        .def_static("none", &Electrolyte::none, py::arg("solvent_eps_static"))
        .def("has_ions", &Electrolyte::has_ions)
        .def("debye_length", &Electrolyte::debye_length, py::arg("ctx"));

    py::class_<PlanarGeometry>(m, "PlanarGeometry")
        .def(py::init([](double gap, double slab_width, double area) {
                 PlanarGeometry g{gap, slab_width, area};
                 g.validate();
                 return g;
             }),
             py::arg("gap"), py::arg("slab_width") = std::numeric_limits<double>::infinity(),
             py::arg("area") = 1e-12)
        .def_readonly("gap", &PlanarGeometry::gap)
        .def_readonly("slab_width", &PlanarGeometry::slab_width)
        .def_readonly("area", &PlanarGeometry::area);

    py::class_<MatsubaraTerm>(m, "MatsubaraTerm")
        .def_readonly("n", &MatsubaraTerm::n)
        .def_readonly("energy", &MatsubaraTerm::energy);
    py::class_<BreakdownConvergence>(m, "BreakdownConvergence")
        .def_readonly("matsubara_cutoff", &BreakdownConvergence::matsubara_cutoff)
        .def_readonly("tail_estimate", &BreakdownConvergence::tail_estimate)
        .def_readonly("quadrature_rel_err", &BreakdownConvergence::quadrature_rel_err)
        .def_readonly("flags", &BreakdownConvergence::flags)
        .def_readonly("converged", &BreakdownConvergence::converged);
    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("universal", &EnergyBreakdown::universal)
        .def_readonly("longitudinal", &EnergyBreakdown::longitudinal)
        .def_readonly("nonuniversal", &EnergyBreakdown::nonuniversal)
        .def_readonly("total", &EnergyBreakdown::total)
        .def_readonly("nonuniversal_terms", &EnergyBreakdown::nonuniversal_terms)
        .def_readonly("convergence", &EnergyBreakdown::convergence);

    m.def("universal_energy_per_area", &universal_energy_per_area, py::arg("gap"), py::arg("ctx"));
    m.def(
        "universal_energy_per_area_by_quadrature",
        [](double gap, const ThermalContext& ctx, const TruncationConfig& cfg) {
            ConvergenceReport rep;
            const double v = universal_energy_per_area_by_quadrature(gap, ctx, cfg, rep);
            return py::make_tuple(v, rep);
        },
        py::arg("gap"), py::arg("ctx"), py::arg("cfg") = TruncationConfig{});
    m.def(
        "longitudinal_energy_per_area",
        [](double gap, const Electrolyte& el, double eps_body, const ThermalContext& ctx,
           const TruncationConfig& cfg) {
            ConvergenceReport rep;
            const double v = longitudinal_energy_per_area(gap, el, eps_body, ctx, cfg, rep);
            return py::make_tuple(v, rep);
        },
        py::arg("gap"), py::arg("electrolyte"), py::arg("body_static_permittivity"),
        py::arg("ctx"), py::arg("cfg") = TruncationConfig{});

    py::enum_<Polarization>(m, "Polarization").value("te", Polarization::te).value("tm", Polarization::tm);
    m.def("fresnel_coefficient", &fresnel_coefficient, py::arg("pol"), py::arg("eps1"),
          py::arg("eps2"), py::arg("xi"), py::arg("k"));
    m.def("slab_reflection", &slab_reflection, py::arg("pol"), py::arg("eps1"), py::arg("eps2"),
          py::arg("xi"), py::arg("k"), py::arg("width"));
    m.def(
        "matsubara_term_per_area",
        [](int n, const PlanarGeometry& g, const MaterialModel& gm, const MaterialModel& bm,
           const ThermalContext& ctx, const TruncationConfig& cfg) {
            ConvergenceReport rep;
            const double v = matsubara_term_per_area(n, g, gm, bm, ctx, cfg, rep);
            return py::make_tuple(v, rep);
        },
        py::arg("n"), py::arg("geometry"), py::arg("gap_material"), py::arg("body_material"),
        py::arg("ctx"), py::arg("cfg") = TruncationConfig{});
    m.def("total_planar_energy", &total_planar_energy, py::arg("geometry"),
          py::arg("gap_material"), py::arg("electrolyte"), py::arg("body_material"),
          py::arg("ctx"), py::arg("cfg") = TruncationConfig{});

    py::class_<SpherePair>(m, "SpherePair")
        .def(py::init([](double r1, double r2, double gap) {
                 SpherePair g{r1, r2, gap};
                 g.validate();
                 return g;
             }),
             py::arg("radius1"), py::arg("radius2"), py::arg("gap"))
        .def_readonly("radius1", &SpherePair::radius1)
        .def_readonly("radius2", &SpherePair::radius2)
        .def_readonly("gap", &SpherePair::gap)
        .def_property_readonly("effective_radius", &SpherePair::effective_radius)
        .def_property_readonly("aspect_x", &SpherePair::aspect_x)
        .def_property_readonly("aspect_u", &SpherePair::aspect_u)
        .def_property_readonly("center_distance", &SpherePair::center_distance);

    py::class_<CylinderPair>(m, "CylinderPair")
        .def(py::init([](double r1, double r2, double gap, double length) {
                 CylinderPair g{r1, r2, gap, length};
                 g.validate();
                 return g;
             }),
             py::arg("radius1"), py::arg("radius2"), py::arg("gap"), py::arg("length"))
        .def_readonly("radius1", &CylinderPair::radius1)
        .def_readonly("radius2", &CylinderPair::radius2)
        .def_readonly("gap", &CylinderPair::gap)
        .def_readonly("length", &CylinderPair::length)
        .def_property_readonly("effective_radius", &CylinderPair::effective_radius)
        .def_property_readonly("aspect_x", &CylinderPair::aspect_x)
        .def_property_readonly("aspect_u", &CylinderPair::aspect_u)
        .def_property_readonly("center_distance", &CylinderPair::center_distance);

    py::class_<UniversalResult>(m, "UniversalResult")
        .def_readonly("value", &UniversalResult::value)
        .def_readonly("order_used", &UniversalResult::order_used)
        .def_readonly("report", &UniversalResult::report);

    m.def("f_pfa", &f_pfa);
    m.def("f_ssa", &f_ssa);
    m.def("f_ssa_center", &f_ssa_center);
    m.def("f_interpolated_approx", &f_interpolated_approx);
    m.def("phi_pfa", &phi_pfa);
    m.def("phi_ssa", &phi_ssa);
    m.def("phi_ssa_center", &phi_ssa_center);
    m.def("phi_interpolated_approx", &phi_interpolated_approx);
    m.def("conformal_parameter", &conformal_parameter);
    m.def("conformal_parameter_plus_form", &conformal_parameter_plus_form);
    m.def("f_exact", &f_exact, py::arg("geometry"), py::arg("truncation") = ChannelTruncation{});
    m.def("phi_exact", &phi_exact, py::arg("geometry"),
          py::arg("truncation") = ChannelTruncation{}, py::arg("cfg") = TruncationConfig{});
    m.def("f_dipole_single_round_trip", &f_dipole_single_round_trip);
    m.def("phi_dipole_single_round_trip", &phi_dipole_single_round_trip, py::arg("geometry"),
          py::arg("cfg") = TruncationConfig{});
    m.def(
        "sphere_universal_energy",
        [](const SpherePair& g, const ThermalContext& ctx, const ChannelTruncation& tr) {
            UniversalResult res;
            const double e = sphere_universal_energy(g, ctx, &res, tr);
            return py::make_tuple(e, res);
        },
        py::arg("geometry"), py::arg("ctx"), py::arg("truncation") = ChannelTruncation{});
    m.def(
        "cylinder_universal_energy",
        [](const CylinderPair& g, const ThermalContext& ctx, const ChannelTruncation& tr,
           const TruncationConfig& cfg) {
            UniversalResult res;
            const double e = cylinder_universal_energy(g, ctx, &res, tr, cfg);
            return py::make_tuple(e, res);
        },
        py::arg("geometry"), py::arg("ctx"), py::arg("truncation") = ChannelTruncation{},
        py::arg("cfg") = TruncationConfig{});

    py::class_<CrossoverQuery> cq(m, "CrossoverQuery");
    py::enum_<CrossoverQuery::Family>(cq, "Family")
        .value("spheres", CrossoverQuery::Family::spheres)
        .value("cylinders", CrossoverQuery::Family::cylinders);
    cq.def(py::init<>())
        .def_readwrite("family", &CrossoverQuery::family)
        .def_readwrite("radius1", &CrossoverQuery::radius1)
        .def_readwrite("radius2", &CrossoverQuery::radius2)
        .def_readwrite("length", &CrossoverQuery::length)
        .def_readwrite("threshold_kBT", &CrossoverQuery::threshold_kBT);
    m.def("find_crossover_gap", &find_crossover_gap, py::arg("query"),
          py::arg("truncation") = ChannelTruncation{}, py::arg("cfg") = TruncationConfig{});

    py::class_<TabulatedUniversalFunction>(m, "TabulatedUniversalFunction")
        .def_static("from_csv_file", &TabulatedUniversalFunction::from_csv_file, py::arg("path"))
        .def("evaluate", &TabulatedUniversalFunction::evaluate, py::arg("x"), py::arg("u") = -1.0)
        .def_property_readonly("has_aspect_column", &TabulatedUniversalFunction::has_aspect_column)
        .def_property_readonly("size", &TabulatedUniversalFunction::size);

    m.def("parse_length", &parse_length, py::arg("text"));
    m.def("parse_area", &parse_area, py::arg("text"));
}
