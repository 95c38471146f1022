#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monocomp/baselines.hpp"
#include "monocomp/gallery/control.hpp"
#include "monocomp/gallery/fracture.hpp"
#include "monocomp/gallery/imaging.hpp"
#include "monocomp/gallery/mmatrix.hpp"
#include "monocomp/solver.hpp"

namespace py = pybind11;
using namespace monocomp;

namespace {

SparseMatrix sparse_from_coo(std::size_t rows, std::size_t cols,
                             py::array_t<std::int64_t> r, py::array_t<std::int64_t> c,
                             py::array_t<double> v) {
  const auto rr = r.unchecked<1>();
  const auto cc = c.unchecked<1>();
  const auto vv = v.unchecked<1>();
  if (rr.shape(0) != cc.shape(0) || rr.shape(0) != vv.shape(0))
    throw std::invalid_argument("coo arrays must have equal length");
  std::vector<SparseMatrix::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(rr.shape(0)));
  for (py::ssize_t k = 0; k < rr.shape(0); ++k)
    trips.push_back({static_cast<std::size_t>(rr(k)), static_cast<std::size_t>(cc(k)), vv(k)});
  return SparseMatrix::from_triplets(rows, cols, std::move(trips));
}

SparseMatrix sparse_from_dense(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  const auto buf = a.unchecked<2>();
  std::vector<SparseMatrix::Triplet> trips;
  for (py::ssize_t i = 0; i < buf.shape(0); ++i)
    for (py::ssize_t j = 0; j < buf.shape(1); ++j)
      if (buf(i, j) != 0.0)
        trips.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), buf(i, j)});
  return SparseMatrix::from_triplets(static_cast<std::size_t>(buf.shape(0)),
                                     static_cast<std::size_t>(buf.shape(1)), std::move(trips));
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_monocomp, m) {
  m.doc() = "Monotone reweighted solver for nonsmooth nonconvex composite least squares";

  py::enum_<PenaltyKind>(m, "PenaltyKind")
      .value("PowerLaw", PenaltyKind::PowerLaw)
      .value("Scad", PenaltyKind::Scad)
      .value("Mcp", PenaltyKind::Mcp);

  py::class_<Penalty>(m, "Penalty")
      .def(py::init([](const std::string& kind, double lam, double tau) {
             return Penalty(penalty_kind_from_string(kind), lam, tau);
           }),
           py::arg("kind"), py::arg("lam"), py::arg("tau"))
      .def_property_readonly("kind", [](const Penalty& p) { return to_string(p.kind()); })
      .def_property_readonly("lam", &Penalty::lambda)
      .def_property_readonly("tau", &Penalty::tau)
      .def("phi", &Penalty::phi)
      .def("phi_prime", &Penalty::phi_prime)
      .def("prox", &Penalty::prox, py::arg("v"), py::arg("eta"));

  py::class_<SmoothedPenalty>(m, "SmoothedPenalty")
      .def(py::init<Penalty, double>(), py::arg("base"), py::arg("epsilon"))
      .def("psi", &SmoothedPenalty::psi)
      .def("psi_prime", &SmoothedPenalty::psi_prime)
      .def("weight", &SmoothedPenalty::weight);

  py::class_<SparseMatrix>(m, "SparseMatrix")
      .def_static("from_coo", &sparse_from_coo, py::arg("rows"), py::arg("cols"), py::arg("row"),
                  py::arg("col"), py::arg("value"))
      .def_static("from_dense", &sparse_from_dense)
      .def_static("identity", &SparseMatrix::identity)
      .def_property_readonly("shape",
                             [](const SparseMatrix& s) { return py::make_tuple(s.rows(), s.cols()); })
      .def("nnz", &SparseMatrix::nnz)
      .def("matvec",
           [](const SparseMatrix& s, const std::vector<double>& x) { return to_numpy(s.multiply(x)); })
      .def("to_dense", [](const SparseMatrix& s) {
        py::array_t<double> out({s.rows(), s.cols()});
        auto buf = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < s.rows(); ++i)
          for (std::size_t j = 0; j < s.cols(); ++j) buf(i, j) = 0.0;
        for (std::size_t i = 0; i < s.rows(); ++i) {
          const auto cs = s.row_cols(i);
          const auto vs = s.row_values(i);
          for (std::size_t k = 0; k < cs.size(); ++k) buf(i, cs[k]) = vs[k];
        }
        return out;
      });

  py::class_<CompositeProblem>(m, "CompositeProblem")
      .def(py::init([](const SparseMatrix& a, const std::vector<double>& b, const SparseMatrix& l,
                       const Penalty& pen, double qscale, const std::string& witness) {
             CompositeProblem p{a, b, l, pen, qscale,
                                witness == "joint" ? CoercivityWitness::JointKernel
                                                   : CoercivityWitness::FullColumnRank};
             p.validate();
             return p;
           }),
           py::arg("a"), py::arg("b"), py::arg("lambda_op"), py::arg("penalty"),
           py::arg("qscale") = 0.5, py::arg("witness") = "full_rank")
      .def_property_readonly("dim", &CompositeProblem::dim)
      .def("j", [](const CompositeProblem& p, const std::vector<double>& x) { return j_value(p, x); })
      .def("j_eps", [](const CompositeProblem& p, double eps,
                       const std::vector<double>& x) { return j_eps_value(p, eps, x); })
      .def("optimality_residual", [](const CompositeProblem& p, double eps,
                                     const std::vector<double>& x) {
        return to_numpy(optimality_residual(p, eps, x));
      });

  py::class_<ContinuationSchedule>(m, "ContinuationSchedule")
      .def(py::init<>())
      .def_readwrite("eps_start", &ContinuationSchedule::eps_start)
      .def_readwrite("eps_floor", &ContinuationSchedule::eps_floor)
      .def_readwrite("decay", &ContinuationSchedule::decay)
      .def_readwrite("inner_tolerance", &ContinuationSchedule::inner_tolerance)
      .def_readwrite("inner_max_iterations", &ContinuationSchedule::inner_max_iterations);

  py::class_<LinearSolveOptions>(m, "LinearSolveOptions")
      .def(py::init<>())
      .def_property(
          "method",
          [](const LinearSolveOptions& o) {
            return o.method == SolveMethod::DirectCholesky ? "direct" : "cg";
          },
          [](LinearSolveOptions& o, const std::string& m) {
            o.method = m == "cg" ? SolveMethod::ConjugateGradient : SolveMethod::DirectCholesky;
          })
      .def_readwrite("cg_tolerance", &LinearSolveOptions::cg_tolerance)
      .def_readwrite("cg_max_iterations", &LinearSolveOptions::cg_max_iterations)
      .def_readwrite("diagonal_shift", &LinearSolveOptions::diagonal_shift);

  py::class_<StageTrace>(m, "StageTrace")
      .def_readonly("eps", &StageTrace::eps)
      .def_readonly("j_eps", &StageTrace::j_eps)
      .def_readonly("j_unreg", &StageTrace::j_unreg)
      .def_readonly("residuals", &StageTrace::residuals)
      .def_readonly("descent_gaps", &StageTrace::descent_gaps)
      .def_readonly("iterations", &StageTrace::iterations)
      .def_readonly("converged", &StageTrace::converged);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("x", [](const SolveReport& r) { return to_numpy(r.x); })
      .def_readonly("stages", &SolveReport::stages)
      .def_readonly("total_inner_iterations", &SolveReport::total_inner_iterations)
      .def_readonly("final_residual", &SolveReport::final_residual)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("wall_seconds", &SolveReport::wall_seconds);

  m.def(
      "inner_solve",
      [](const CompositeProblem& p, double eps, const std::vector<double>& x0,
         const ContinuationSchedule& s, const LinearSolveOptions& o) {
        return inner_solve(p, eps, x0, s, o);
      },
      py::arg("problem"), py::arg("eps"), py::arg("x0"),
      py::arg("schedule") = ContinuationSchedule{}, py::arg("options") = LinearSolveOptions{});
  m.def(
      "continuation_solve",
      [](const CompositeProblem& p, const std::vector<double>& x0, const ContinuationSchedule& s,
         const LinearSolveOptions& o) { return continuation_solve(p, x0, s, o); },
      py::arg("problem"), py::arg("x0") = std::vector<double>{},
      py::arg("schedule") = ContinuationSchedule{}, py::arg("options") = LinearSolveOptions{});

  py::class_<GistConfig>(m, "GistConfig")
      .def(py::init<>())
      .def_readwrite("relative_tolerance", &GistConfig::relative_tolerance)
      .def_readwrite("max_iterations", &GistConfig::max_iterations)
      .def_readwrite("nonmonotone_window", &GistConfig::nonmonotone_window);
  py::class_<FistaConfig>(m, "FistaConfig")
      .def(py::init<>())
      .def_readwrite("step", &FistaConfig::step)
      .def_readwrite("max_iterations", &FistaConfig::max_iterations)
      .def_readwrite("relative_tolerance", &FistaConfig::relative_tolerance);
  m.def(
      "gist_solve",
      [](const CompositeProblem& p, const GistConfig& c, const std::vector<double>& x0) {
        return gist_solve(p, c, x0);
      },
      py::arg("problem"), py::arg("config") = GistConfig{}, py::arg("x0"));
  m.def(
      "fista_solve",
      [](const CompositeProblem& p, const FistaConfig& c, const std::vector<double>& x0) {
        return fista_solve(p, c, x0);
      },
      py::arg("problem"), py::arg("config") = FistaConfig{}, py::arg("x0"));
  m.def("default_start", [](const CompositeProblem& p, const LinearSolveOptions& o) {
    return to_numpy(default_start(p, o));
  }, py::arg("problem"), py::arg("options") = LinearSolveOptions{});

  // gallery
  auto g = m.def_submodule("gallery");
  g.def("build_mmatrix", [](std::size_t n, double lam, double tau) {
    auto inst = gallery::build_mmatrix(n, lam, tau);
    return py::make_tuple(inst.problem, to_numpy(inst.forcing), to_numpy(inst.poisson_solution));
  }, py::arg("n"), py::arg("lam"), py::arg("tau"));
  g.def("build_control", [](double lam, double tau) {
    auto inst = gallery::build_control(lam, tau);
    return py::make_tuple(inst.problem, to_numpy(inst.target));
  }, py::arg("lam") = 1e-4, py::arg("tau") = 0.5);
  g.def("control_schedule", &gallery::control_schedule);
  g.def("heat_semigroup_apply", [](std::size_t n, double s, const std::vector<double>& v) {
    return to_numpy(gallery::heat_semigroup_apply(n, s, v));
  });
  g.def(
      "build_fracture_1d",
      [](std::size_t n_half, const Penalty& pen, double gamma, double t) {
        gallery::Fracture1DModel model;
        model.half_intervals = n_half;
        model.penalty = pen;
        model.gamma = gamma;
        return build_fracture_1d(model, t);
      },
      py::arg("half_intervals"), py::arg("penalty"), py::arg("gamma"), py::arg("t"));
}
