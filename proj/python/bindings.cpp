#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgp/cayley.hpp"
#include "sgp/errors.hpp"
#include "sgp/experiments.hpp"
#include "sgp/kinematics.hpp"
#include "sgp/pencil.hpp"
#include "sgp/structure.hpp"

namespace py = pybind11;

namespace {

using Points = Eigen::Matrix<double, 6, 3, Eigen::RowMajor>;

sgp::PlatformGeometry make_geometry(const Points& top, const Points& base, const std::string& variant) {
  sgp::PlatformGeometry g;
  for (int i = 0; i < 6; ++i) {
    g.top[i] = top.row(i).transpose();
    g.base[i] = base.row(i).transpose();
  }
  g.variant = sgp::parse_variant(variant);
  return g;
}

Points to_points(const std::array<sgp::Vec3, 6>& pts) {
  Points P;
  for (int i = 0; i < 6; ++i) P.row(i) = pts[i].transpose();
  return P;
}

sgp::LegMeasurements make_lengths(const std::array<double, 6>& L) {
  sgp::LegMeasurements m;
  m.L = L;
  return m;
}

struct Solution {
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 3, Eigen::RowMajor> p, t;
  Eigen::VectorXd residuals;
  std::vector<bool> real;
  std::vector<int> partner;
  double gap = 0, error_metric = 0, rcond = 0;
  int real_count = 0;
  std::map<std::string, double> timings_ms;
};

Solution to_solution(const sgp::SolutionSet& S) {
  const int n = static_cast<int>(S.accepted.size());
  Solution out;
  out.p.resize(n, 3);
  out.t.resize(n, 3);
  out.residuals.resize(n);
  for (int k = 0; k < n; ++k) {
    const sgp::Candidate& c = S.root(k);
    out.p.row(k) = c.pose.p.transpose();
    out.t.row(k) = c.pose.t.transpose();
    out.residuals(k) = c.residual;
    out.real.push_back(c.real);
  }
  out.partner = S.partner;
  out.gap = S.gap;
  out.error_metric = sgp::error_metric(S);
  out.rcond = S.rcond;
  out.real_count = S.real_count();
  out.timings_ms = {{"template", S.timings.template_ms}, {"plu", S.timings.plu_ms}, {"qz", S.timings.qz_ms},
                    {"filter", S.timings.filter_ms}, {"total", S.timings.total_ms}};
  return out;
}

sgp::SchurPath parse_schur(const std::string& s) {
  if (s == "backsub") return sgp::SchurPath::BackSubstitution;
  if (s == "offline") return sgp::SchurPath::OfflineSeries;
  throw sgp::InputError("unknown Schur path '" + s + "' (expected backsub or offline)");
}

sgp::LengthMode parse_mode(const std::string& s) {
  if (s == "uniform") return sgp::LengthMode::UniformSquared;
  if (s == "pose") return sgp::LengthMode::FromPose;
  throw sgp::InputError("unknown length mode '" + s + "' (expected uniform or pose)");
}

}  // namespace

PYBIND11_MODULE(_sgpfk, m) {
  m.doc() = "Forward kinematics of the general Stewart-Gough platform by an elimination template";

  auto base_error = py::register_exception<sgp::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<sgp::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<sgp::SingularParametrizationError>(m, "SingularParametrizationError", base_error.ptr());
  py::register_exception<sgp::DegenerateInstanceError>(m, "DegenerateInstanceError", base_error.ptr());
  py::register_exception<sgp::SolverFailureError>(m, "SolverFailureError", base_error.ptr());
  py::register_exception<sgp::StructureError>(m, "StructureError", base_error.ptr());

  py::class_<Solution>(m, "Solution")
      .def_readonly("p", &Solution::p, "Cayley parameters of the 40 roots, shape (40, 3)")
      .def_readonly("t", &Solution::t, "Translations of the 40 roots, shape (40, 3)")
      .def_readonly("residuals", &Solution::residuals)
      .def_readonly("real", &Solution::real)
      .def_readonly("partner", &Solution::partner, "Slot of the conjugate root, own slot if real, -1 if unpaired")
      .def_readonly("gap", &Solution::gap)
      .def_readonly("error_metric", &Solution::error_metric)
      .def_readonly("rcond", &Solution::rcond)
      .def_readonly("real_count", &Solution::real_count)
      .def_readonly("timings_ms", &Solution::timings_ms)
      .def("__len__", [](const Solution& s) { return s.residuals.size(); })
      .def("__repr__", [](const Solution& s) {
        return "<Solution roots=" + std::to_string(s.residuals.size()) + " real=" + std::to_string(s.real_count) + ">";
      });

  m.def(
      "forward_kinematics",
      [](const Points& top, const Points& base, const std::array<double, 6>& L, const std::string& variant,
         bool frame_conditioning, const std::string& schur, int polish) {
        sgp::SolveOptions o;
        o.frame_conditioning = frame_conditioning;
        o.schur_path = parse_schur(schur);
        o.polish_iterations = polish;
        sgp::PlatformGeometry g = make_geometry(top, base, variant);
        sgp::LegMeasurements lm = make_lengths(L);
        sgp::SolutionSet S;
        {
          py::gil_scoped_release release;
          S = sgp::forward_kinematics(g, lm, o);
        }
        return to_solution(S);
      },
      py::arg("top"), py::arg("base"), py::arg("L"), py::arg("variant") = "66", py::arg("frame_conditioning") = true,
      py::arg("schur") = "backsub", py::arg("polish") = 0,
      "Solve for all 40 poses given 6 x 3 attachment points and 6 squared leg lengths");

  m.def("cayley_rotation", [](const sgp::Vec3& p) { return sgp::cayley_rotation<double>(p); }, py::arg("p"));
  m.def(
      "inverse_cayley", [](const sgp::Mat3& R) { return sgp::inverse_cayley<double>(R); }, py::arg("R"));
  m.def(
      "leg_lengths",
      [](const Points& top, const Points& base, const sgp::Vec3& p, const sgp::Vec3& t) {
        sgp::Pose pose{p, t};
        return sgp::leg_lengths_from_pose(make_geometry(top, base, "66"), pose).L;
      },
      py::arg("top"), py::arg("base"), py::arg("p"), py::arg("t"));

  m.def(
      "generate_instance",
      [](const std::string& variant, std::uint64_t seed, std::uint64_t trial, const std::string& mode) {
        sgp::SplitMix64 rng = sgp::trial_stream(seed, trial);
        sgp::PlatformGeometry g = sgp::gen_geometry(sgp::parse_variant(variant), rng);
        sgp::GeneratedLengths gl = sgp::gen_lengths(g, parse_mode(mode), rng);
        py::dict d;
        d["top"] = to_points(g.top);
        d["base"] = to_points(g.base);
        d["variant"] = sgp::variant_name(g.variant);
        d["L"] = gl.L.L;
        if (gl.truth) d["truth"] = py::make_tuple(gl.truth->p, gl.truth->t);
        else d["truth"] = py::none();
        return d;
      },
      py::arg("variant") = "66", py::arg("seed") = 1, py::arg("trial") = 0, py::arg("mode") = "pose",
      "Seeded random instance as used by the experiment harness");

  m.def("structure_info", [] {
    const sgp::TemplateStructure& s = sgp::standard_structure();
    py::dict d;
    d["rows"] = s.num_rows();
    d["cols"] = s.num_template_cols();
    d["eliminated"] = s.sizes[0];
    d["excessive"] = s.sizes[1];
    d["reducible"] = s.sizes[2];
    d["basic"] = s.sizes[3];
    d["dropped"] = s.dropped.size();
    std::vector<std::string> basic;
    for (int k = 0; k < s.sizes[3]; ++k) basic.push_back(s.column(s.block_offset(sgp::ColumnBlock::Basic) + k).to_string());
    d["basic_monomials"] = basic;
    return d;
  });
}
