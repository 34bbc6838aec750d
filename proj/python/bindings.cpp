#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtbc/band.hpp"
#include "qtbc/delta.hpp"
#include "qtbc/observables.hpp"
#include "qtbc/oracle.hpp"
#include "qtbc/scenario.hpp"

namespace py = pybind11;
using namespace qtbc;

namespace {

py::array_t<cdouble> to_array(const std::vector<cdouble>& v) {
  return py::array_t<cdouble>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
                              v.data());
}

py::array_t<double> to_array_d(const std::vector<double>& v) {
  return py::array_t<double>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
                             v.data());
}

std::vector<cdouble> from_array(const py::array_t<cdouble>& a) {
  return std::vector<cdouble>(a.data(), a.data() + a.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Crank-Nicolson solver for the time-dependent Schrodinger equation on a "
            "finite box closed by exact transparent boundary conditions";
  m.attr("__version__") = "0.1.0";

  py::class_<Grid1D, std::shared_ptr<Grid1D>>(m, "Grid1D")
      .def(py::init<double, int>(), py::arg("half_width"), py::arg("points"))
      .def_readonly("a", &Grid1D::a)
      .def_readonly("nx", &Grid1D::nx)
      .def_readonly("dx", &Grid1D::dx)
      .def_property_readonly("x", [](const Grid1D& g) { return to_array_d(g.x); });

  py::class_<TimeScheme>(m, "TimeScheme")
      .def(py::init<int, double>(), py::arg("n_steps"), py::arg("total_time"))
      .def_static("spreading_units", &TimeScheme::spreading_units, py::arg("n_steps"),
                  py::arg("tau_final"), py::arg("sigma0"))
      .def_readonly("n_steps", &TimeScheme::n_steps)
      .def_readonly("total_time", &TimeScheme::total_time)
      .def_readonly("dt", &TimeScheme::dt)
      .def_readonly("mu2", &TimeScheme::mu2)
      .def_readonly("mu", &TimeScheme::mu);

  py::class_<WavePacketSpec>(m, "WavePacketSpec")
      .def(py::init([](double x0, double sigma0, double v) {
             return WavePacketSpec{x0, sigma0, v};
           }),
           py::arg("x0") = 0.0, py::arg("sigma0") = 0.2, py::arg("v") = 0.0)
      .def_readwrite("x0", &WavePacketSpec::x0)
      .def_readwrite("sigma0", &WavePacketSpec::sigma0)
      .def_readwrite("v", &WavePacketSpec::v);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def_static("none", &PotentialSpec::none)
      .def_static("static_gaussian", &PotentialSpec::static_gaussian, py::arg("v0"),
                  py::arg("b"))
      .def_static("driven_gaussian", &PotentialSpec::driven_gaussian, py::arg("v0"),
                  py::arg("b"), py::arg("omega"))
      .def_static("double_well", &PotentialSpec::double_well, py::arg("v0"), py::arg("b"),
                  py::arg("a0"))
      .def_static("driven_delta", &PotentialSpec::driven_delta, py::arg("lambda0"),
                  py::arg("amplitude"), py::arg("freq_factor"));

  py::class_<ComplexField>(m, "ComplexField")
      .def_property_readonly("values",
                             [](const ComplexField& f) { return to_array(f.values); })
      .def_property_readonly("x", [](const ComplexField& f) { return to_array_d(f.grid->x); });

  m.def("make_gaussian",
        [](std::shared_ptr<Grid1D> g, const WavePacketSpec& s) { return make_gaussian(g, s); },
        py::arg("grid"), py::arg("spec"));
  m.def("eval_potential", &eval_potential, py::arg("spec"), py::arg("x"), py::arg("tau_mid"));
  m.def("analytic_free_density", &analytic_free_density, py::arg("spec"), py::arg("x"),
        py::arg("tau"));
  m.def("support_leak_ratio", &support_leak_ratio);
  m.def("interior_norm", &interior_norm);
  m.def("cq_coefficient", &cq_coefficient, py::arg("q"));
  m.def("kernel_sum_origin", &kernel_sum_origin, py::arg("p"), py::arg("mu"));
  m.def("free_green_1d", &free_green_1d, py::arg("energy"), py::arg("x"));
  m.def("outgoing_root", &outgoing_root);

  py::class_<KernelTable, std::shared_ptr<KernelTable>>(m, "KernelTable")
      .def(py::init<cdouble, int, int, double>(), py::arg("mu2"), py::arg("n_steps"),
           py::arg("dft_size") = 0, py::arg("eta") = 0.0)
      .def_property_readonly("mu2", &KernelTable::mu2)
      .def_property_readonly("mu", &KernelTable::mu)
      .def_property_readonly("dft_size", &KernelTable::dft_size)
      .def_property_readonly("eta", &KernelTable::eta)
      .def("cq", &KernelTable::cq)
      .def("origin_cross_check", &KernelTable::origin_cross_check)
      .def("sum_at", &KernelTable::sum_at, py::arg("p"), py::arg("x"),
           py::arg("k_perp2") = 0.0)
      .def("sums",
           [](const KernelTable& t, double x, double k2) { return to_array(t.sums(x, k2)); },
           py::arg("x"), py::arg("k_perp2") = 0.0)
      .def("add_transverse_mode", &KernelTable::add_transverse_mode);

  py::enum_<Side>(m, "Side").value("left", Side::left).value("right", Side::right);

  py::class_<Stepper1D>(m, "Stepper1D")
      .def(py::init([](std::shared_ptr<Grid1D> grid, const TimeScheme& scheme,
                       const PotentialSpec& pot, std::shared_ptr<KernelTable> table,
                       py::array_t<cdouble> initial, double transverse_energy,
                       double tau_per_step) {
             StepperOptions opt;
             opt.transverse_energy = transverse_energy;
             opt.tau_per_step = tau_per_step;
             return std::make_unique<Stepper1D>(grid, scheme, pot, table,
                                                ComplexField(grid, from_array(initial)), opt);
           }),
           py::arg("grid"), py::arg("scheme"), py::arg("potential"), py::arg("kernel"),
           py::arg("initial"), py::arg("transverse_energy") = 0.0,
           py::arg("tau_per_step") = 0.0)
      .def("step", &Stepper1D::step)
      .def_property_readonly("n", &Stepper1D::step_index)
      .def_property_readonly("psi",
                             [](const Stepper1D& s) { return to_array(s.psi().values); })
      .def_property_readonly("interior_norm",
                             [](const Stepper1D& s) { return interior_norm(s.psi()); })
      .def("boundary_values",
           [](const Stepper1D& s, Side side) { return to_array(s.history(side).values); })
      .def("boundary_derivatives",
           [](const Stepper1D& s, Side side) { return to_array(s.history(side).derivs); })
      .def("exterior_value",
           [](const Stepper1D& s, double x0) {
             return exterior_reconstruct(s.history(Side::left), s.history(Side::right),
                                         s.kernel(), s.grid().a, x0, s.step_index());
           },
           py::arg("x0"));

  py::class_<DeltaRun>(m, "DeltaRun")
      .def(py::init<double, double, double, int, double>(), py::arg("lambda0"),
           py::arg("amplitude"), py::arg("freq_factor"), py::arg("n_steps"), py::arg("dt"))
      .def("run", &DeltaRun::run)
      .def_property_readonly("omega0", &DeltaRun::omega0)
      .def_property_readonly("dt", &DeltaRun::dt)
      .def_property_readonly("phase_factor", &DeltaRun::phase_factor)
      .def("lambda_at", &DeltaRun::lambda, py::arg("n"))
      .def("chi", &DeltaRun::chi, py::arg("n"))
      .def("psi_origin", &DeltaRun::psi_origin, py::arg("n"))
      .def("origin_density_normalized", &DeltaRun::origin_density_normalized, py::arg("n"))
      .def("autocorrelation", &DeltaRun::autocorrelation, py::arg("n"))
      .def("psi_offorigin", &DeltaRun::psi_offorigin, py::arg("x"), py::arg("n"),
           py::arg("kernel"));

  m.def("bound_phase", &bound_phase, py::arg("mu2"), py::arg("omega0"));

  py::class_<BandGrid, std::shared_ptr<BandGrid>>(m, "BandGrid")
      .def(py::init<std::shared_ptr<Grid1D>, int, double, double>(), py::arg("x_grid"),
           py::arg("ny"), py::arg("y_min"), py::arg("y_max"))
      .def_readonly("ny", &BandGrid::ny)
      .def_readonly("dy", &BandGrid::dy)
      .def_property_readonly("y", [](const BandGrid& g) { return to_array_d(g.y); })
      .def_property_readonly("ky", [](const BandGrid& g) { return to_array_d(g.ky); });

  py::class_<Packet2DSpec>(m, "Packet2DSpec")
      .def(py::init([](double x0, double y0, double sigma0, double vx, double vy) {
             return Packet2DSpec{x0, y0, sigma0, vx, vy};
           }),
           py::arg("x0") = 0.0, py::arg("y0") = 1.0, py::arg("sigma0") = 0.2,
           py::arg("vx") = 0.0, py::arg("vy") = 0.0);

  py::class_<BandSolver>(m, "BandSolver")
      .def(py::init([](std::shared_ptr<BandGrid> grid, const TimeScheme& scheme,
                       const Packet2DSpec& packet) {
             return std::make_unique<BandSolver>(grid, scheme, packet);
           }),
           py::arg("grid"), py::arg("scheme"), py::arg("packet"))
      .def("step", &BandSolver::step)
      .def_property_readonly("n", &BandSolver::step_index)
      .def("density",
           [](const BandSolver& s) {
             const auto& g = s.grid();
             const std::vector<double> rho = s.density();
             return py::array_t<double>(
                 std::vector<py::ssize_t>{g.x->nx, g.ny}, rho.data());
           })
      .def("conservation_total", &BandSolver::conservation_total)
      .def_property_readonly("initial_total", &BandSolver::initial_total);

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def_static("defaults", &SimulationConfig::defaults, py::arg("scenario"))
      .def_static("from_file", &SimulationConfig::from_file, py::arg("path"))
      .def("apply_override", &SimulationConfig::apply_override, py::arg("key"),
           py::arg("value"))
      .def_readwrite("scenario", &SimulationConfig::scenario)
      .def_readwrite("a", &SimulationConfig::a)
      .def_readwrite("nx", &SimulationConfig::nx)
      .def_readwrite("n_steps", &SimulationConfig::n_steps)
      .def_readwrite("t_final", &SimulationConfig::t_final)
      .def_readwrite("sigma0", &SimulationConfig::sigma0)
      .def_readwrite("x0", &SimulationConfig::x0)
      .def_readwrite("v", &SimulationConfig::v)
      .def_readwrite("v0", &SimulationConfig::v0)
      .def_readwrite("b", &SimulationConfig::b)
      .def_readwrite("omega", &SimulationConfig::omega)
      .def_readwrite("a0", &SimulationConfig::a0)
      .def_readwrite("lambda0", &SimulationConfig::lambda0)
      .def_readwrite("amplitude", &SimulationConfig::amplitude)
      .def_readwrite("freq_factor", &SimulationConfig::freq_factor)
      .def_readwrite("n_pulses", &SimulationConfig::n_pulses)
      .def_readwrite("ny", &SimulationConfig::ny)
      .def_readwrite("y_min", &SimulationConfig::y_min)
      .def_readwrite("y_max", &SimulationConfig::y_max)
      .def_readwrite("center_y", &SimulationConfig::center_y)
      .def_readwrite("vx", &SimulationConfig::vx)
      .def_readwrite("vy", &SimulationConfig::vy)
      .def_readwrite("out_dir", &SimulationConfig::out_dir)
      .def_readwrite("snapshot_stride", &SimulationConfig::snapshot_stride)
      .def_readwrite("oracle", &SimulationConfig::oracle);

  m.def("validate_config", [](const SimulationConfig& cfg) {
    py::list out;
    for (const auto& issue : validate_config(cfg)) {
      const char* tag = issue.severity == Severity::error
                            ? "error"
                            : issue.severity == Severity::warning ? "warning" : "ok";
      out.append(py::make_tuple(tag, issue.name, issue.message));
    }
    return out;
  });

  m.def("run_scenario", [](const SimulationConfig& cfg) {
    const RunReport report = run_scenario(cfg);
    py::list checks;
    for (const auto& c : report.checks)
      checks.append(py::make_tuple(c.name, c.pass, c.details));
    py::dict out;
    out["ok"] = report.ok();
    out["out_dir"] = report.out_dir;
    out["checks"] = checks;
    out["files"] = report.files;
    return out;
  });
}
