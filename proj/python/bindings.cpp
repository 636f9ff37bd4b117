#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmshape/covariance_control.hpp"
#include "swarmshape/errors.hpp"
#include "swarmshape/friction.hpp"
#include "swarmshape/geometry.hpp"
#include "swarmshape/physics.hpp"
#include "swarmshape/position_control.hpp"
#include "swarmshape/scenario.hpp"
#include "swarmshape/settle.hpp"

namespace py = pybind11;
using namespace swarmshape;

namespace {

Vec2 vec(std::pair<double, double> p) { return {p.first, p.second}; }

std::vector<std::pair<double, double>> commands(const MoveSequence& seq) {
    std::vector<std::pair<double, double>> out;
    for (const MoveCommand& c : seq.commands) out.emplace_back(c.displacement.x, c.displacement.y);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<SwarmError>(m, "SwarmError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Moments>(m, "Moments")
        .def_readonly("mean_x", &Moments::mean_x)
        .def_readonly("mean_y", &Moments::mean_y)
        .def_readonly("var_x", &Moments::var_x)
        .def_readonly("var_y", &Moments::var_y)
        .def_readonly("cov_xy", &Moments::cov_xy)
        .def_readonly("corr", &Moments::corr)
        .def_readonly("degenerate", &Moments::degenerate)
        .def("__repr__", [](const Moments& s) {
            return "Moments(mean=(" + std::to_string(s.mean_x) + ", " + std::to_string(s.mean_y) +
                   "), var=(" + std::to_string(s.var_x) + ", " + std::to_string(s.var_y) +
                   "), cov=" + std::to_string(s.cov_xy) + ")";
        });

    m.def("polygon_moments", [](const std::vector<std::pair<double, double>>& vs) {
        std::vector<Vec2> v;
        for (const auto& p : vs) v.push_back(vec(p));
        return polygon_moments(Polygon(std::move(v)));
    }, py::arg("vertices"));
    m.def("point_moments", [](const std::vector<std::pair<double, double>>& ps) {
        std::vector<Vec2> v;
        for (const auto& p : ps) v.push_back(vec(p));
        return point_moments(v);
    }, py::arg("points"));
    m.def("square_moments", [](double beta, double area) { return square_moments({beta, area}); },
          py::arg("beta"), py::arg("area"));
    m.def("square_region", [](double beta, double area) {
        std::vector<std::pair<double, double>> out;
        for (Vec2 v : square_region({beta, area}).vertices()) out.emplace_back(v.x, v.y);
        return out;
    }, py::arg("beta"), py::arg("area"));
    m.def("circle_moments", [](double beta, double h) { return circle_moments({beta, h}); }, py::arg("beta"),
          py::arg("fill_height"));
    m.def("forward_force", [](double force, double theta, double mu_f) { return forward_force(force, theta, {mu_f}); },
          py::arg("force"), py::arg("theta"), py::arg("mu_f"));
    m.def("boundary_layer_velocity",
          [](double u0, double h, double y) { return boundary_layer_velocity({u0, h}, y); }, py::arg("u0"),
          py::arg("layer_height"), py::arg("y"));

    m.def("arrange_two_robots",
          [](std::pair<double, double> s1, std::pair<double, double> s2, std::pair<double, double> e1,
             std::pair<double, double> e2, double L) {
              const TwoRobotPlan plan = arrange_two_robots({vec(s1), vec(s2), vec(e1), vec(e2), L});
              std::vector<std::pair<double, double>> end;
              for (Vec2 p : plan.final_state.positions) end.emplace_back(p.x, p.y);
              return py::dict(py::arg("moves") = commands(plan.moves), py::arg("final") = end,
                              py::arg("rounds_x") = plan.rounds_x, py::arg("rounds_y") = plan.rounds_y);
          },
          py::arg("s1"), py::arg("s2"), py::arg("e1"), py::arg("e2"), py::arg("L") = 1.0);

    m.def("arrange_n_robots", [](const std::string& shape, int n, int clearance, std::uint64_t seed) {
        const Zones z = make_column_zones(shape_cells(shape, n, seed), clearance);
        const NRobotPlan plan = arrange_n_robots(z);
        std::vector<std::pair<int, int>> goals, end;
        for (Cell c : z.goals) goals.emplace_back(c.x, c.y);
        for (Cell c : plan.final_state) end.emplace_back(c.x, c.y);
        return py::dict(py::arg("moves") = commands(plan.moves), py::arg("goals") = goals, py::arg("final") = end,
                        py::arg("distance") = total_distance(plan.moves), py::arg("loops") = plan.loops);
    }, py::arg("shape") = "random", py::arg("n") = 8, py::arg("clearance") = 2, py::arg("seed") = 0);

    m.def("run_scenario", [](const std::string& kind, const std::map<std::string, std::string>& params,
                             std::uint64_t seed) {
        ScenarioOutput out;
        {
            py::gil_scoped_release release;
            out = run_scenario({kind, params, seed});
        }
        py::dict files;
        for (const OutputFile& f : out.files) files[py::str(f.name)] = py::str(f.content);
        return py::dict(py::arg("files") = files, py::arg("summary") = out.summary,
                        py::arg("parameters") = out.resolved);
    }, py::arg("kind"), py::arg("params") = std::map<std::string, std::string>{}, py::arg("seed") = 0);
    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
    m.def("checksum", [](const std::string& s) { return checksum(s); }, py::arg("data"));
}
