#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "sparseshare/errors.hpp"
#include "sparseshare/leakage.hpp"
#include "sparseshare/optimizer.hpp"
#include "sparseshare/rng.hpp"
#include "sparseshare/sharing.hpp"
#include "sparseshare/simulator.hpp"

namespace py = pybind11;
using namespace sparseshare;

namespace {

SparseMatrix matrix_from_array(std::uint32_t q, py::array_t<std::int64_t, py::array::c_style |
                                                                        py::array::forcecast> arr) {
  if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-d array");
  return SparseMatrix::from_dense(PrimeField(q), arr.shape(0), arr.shape(1),
                                  std::span<const std::int64_t>(arr.data(), arr.size()));
}

py::array_t<std::uint32_t> matrix_to_array(const SparseMatrix& m) {
  py::array_t<std::uint32_t> out({m.rows(), m.cols()});
  const auto dense = m.to_dense();
  std::copy(dense.begin(), dense.end(), out.mutable_data());
  return out;
}

ShareParams make_params(std::uint32_t q, std::uint32_t n,
                        const std::optional<std::vector<std::uint32_t>>& alphas) {
  const PrimeField f(q);
  if (!alphas) return ShareParams::canonical(f, n);
  std::vector<FieldElement> els;
  for (auto a : *alphas) els.push_back(f.element(a));
  return ShareParams(f, std::move(els));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse secret sharing over prime fields";

  auto base = py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
  py::register_exception<MultipleRootsError>(m, "MultipleRootsError", base.ptr());
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("is_prime", &is_prime);
  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("stream"));

  py::class_<SparseMatrix>(m, "SparseMatrix")
      .def(py::init([](std::uint32_t q, py::array_t<std::int64_t, py::array::c_style |
                                                                    py::array::forcecast> a) {
             return matrix_from_array(q, a);
           }),
           py::arg("q"), py::arg("dense"))
      .def_static("from_triplets",
                  [](std::uint32_t q, std::size_t rows, std::size_t cols,
                     const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>& t) {
                    std::vector<Triplet> trips;
                    for (auto [r, c, v] : t) trips.push_back({r, c, v});
                    return SparseMatrix::from_triplets(PrimeField(q), rows, cols, std::move(trips));
                  })
      .def_property_readonly("q", [](const SparseMatrix& a) { return a.field().modulus(); })
      .def_property_readonly("shape",
                             [](const SparseMatrix& a) { return py::make_tuple(a.rows(), a.cols()); })
      .def_property_readonly("nnz", &SparseMatrix::nnz)
      .def("triplets",
           [](const SparseMatrix& a) {
             std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> out;
             for (const auto& t : a.entries()) out.emplace_back(t.row, t.col, t.value);
             return out;
           })
      .def("to_dense", &matrix_to_array)
      .def("__matmul__", &sp_mul)
      .def("__add__", &add)
      .def("__sub__", &sub)
      .def(py::self == py::self)
      .def("__repr__", [](const SparseMatrix& a) {
        std::ostringstream os;
        os << "SparseMatrix(q=" << a.field().modulus() << ", shape=(" << a.rows() << ", "
           << a.cols() << "), nnz=" << a.nnz() << ")";
        return os.str();
      });

  m.def("sample_source_matrix",
        [](std::uint32_t q, double s, std::size_t rows, std::size_t cols, std::uint64_t seed) {
          return sample_source_matrix(SourceModel(PrimeField(q), s), rows, cols, seed);
        },
        py::arg("q"), py::arg("s"), py::arg("rows"), py::arg("cols"), py::arg("seed"));
  m.def("empirical_sparsity", &empirical_sparsity);
  m.def("multiply_cost", &multiply_cost);
  m.def("read_matrix", py::overload_cast<const std::filesystem::path&>(&read_matrix));
  m.def("write_matrix",
        py::overload_cast<const SparseMatrix&, const std::filesystem::path&>(&write_matrix));

  py::class_<SymmetricSharePMF>(m, "SharePMF")
      .def(py::init([](std::uint32_t q, std::uint32_t n, double p1, double p_star) {
             return SymmetricSharePMF(PrimeField(q), n, p1, p_star);
           }),
           py::arg("q"), py::arg("n"), py::arg("p1"), py::arg("p_star"))
      .def_static("uniform", [](std::uint32_t q, std::uint32_t n) {
        return SymmetricSharePMF::uniform(PrimeField(q), n);
      })
      .def_property_readonly("q", &SymmetricSharePMF::q)
      .def_property_readonly("n", &SymmetricSharePMF::n)
      .def_property_readonly("p1", &SymmetricSharePMF::p1)
      .def_property_readonly("p1_inv", &SymmetricSharePMF::p1_inv)
      .def_property_readonly("p_star", &SymmetricSharePMF::p_star)
      .def_property_readonly("p_star_inv", &SymmetricSharePMF::p_star_inv)
      .def("__repr__", [](const SymmetricSharePMF& p) {
        std::ostringstream os;
        os.precision(17);
        os << "SharePMF(q=" << p.q() << ", n=" << p.n() << ", p1=" << p.p1()
           << ", p_star=" << p.p_star() << ")";
        return os.str();
      });

  m.def("feasible_sd_range",
        [](double s, std::uint32_t q, std::uint32_t n) {
          const auto r = feasible_sd_range(s, q, n);
          return py::make_tuple(r.lo, r.hi);
        },
        py::arg("s"), py::arg("q"), py::arg("n"));
  m.def("share_sparsity", &share_sparsity, py::arg("pmf"), py::arg("s"));
  m.def("q_entropy", py::overload_cast<double, std::uint32_t>(&q_entropy), py::arg("s"),
        py::arg("q"));
  m.def("analytic_leakage", &analytic_leakage, py::arg("pmf"), py::arg("s"), py::arg("s_d"));
  m.def("brute_force_mi",
        [](const SymmetricSharePMF& pmf, double s, std::size_t share,
           const std::optional<std::vector<std::uint32_t>>& alphas) {
          return brute_force_mi(SourceModel(pmf.field(), s), pmf,
                                make_params(pmf.q(), pmf.n(), alphas), share);
        },
        py::arg("pmf"), py::arg("s"), py::arg("share") = 0, py::arg("alphas") = py::none());
  m.def("stationarity_residual", &stationarity_residual);
  m.def("balance_error", &balance_error);

  m.def("find_p_star", &find_p_star, py::arg("s"), py::arg("s_d"), py::arg("q"), py::arg("n"));
  m.def("solve_optimal_pmf", &solve_optimal_pmf, py::arg("s"), py::arg("s_d"), py::arg("q"),
        py::arg("n"));

  py::class_<TradeoffPoint>(m, "TradeoffPoint")
      .def_readonly("s", &TradeoffPoint::s)
      .def_readonly("s_d", &TradeoffPoint::s_d)
      .def_readonly("q", &TradeoffPoint::q)
      .def_readonly("n", &TradeoffPoint::n)
      .def_readonly("p1", &TradeoffPoint::p1)
      .def_readonly("p_star", &TradeoffPoint::p_star)
      .def_readonly("leakage", &TradeoffPoint::leakage)
      .def_readonly("relative", &TradeoffPoint::relative);
  m.def("optimal_tradeoff_point", &optimal_tradeoff_point, py::arg("s"), py::arg("s_d"),
        py::arg("q"), py::arg("n"));
  m.def("sweep_tradeoff",
        [](double s, std::uint32_t q, std::uint32_t n, const std::vector<double>& grid) {
          return sweep_tradeoff(s, q, n, grid).points;
        },
        py::arg("s"), py::arg("q"), py::arg("n"), py::arg("s_d_grid"));
  m.def("grid_search_oracle",
        [](double s, double s_d, std::uint32_t q, std::uint32_t n, double resolution) {
          const auto g = grid_search_oracle(s, s_d, q, n, resolution);
          return py::make_tuple(g.p1, g.p_star, g.leakage);
        },
        py::arg("s"), py::arg("s_d"), py::arg("q"), py::arg("n"), py::arg("resolution") = 1e-5);
  m.def("verify_lemma1",
        [](double s, double s_avg, std::uint32_t q, const std::vector<double>& grid) {
          const auto t = verify_lemma1(s, s_avg, q, grid);
          std::vector<std::pair<double, double>> rows;
          for (const auto& r : t.rows) rows.emplace_back(r.s_delta, r.total_leakage);
          return py::make_tuple(rows, t.argmin);
        },
        py::arg("s"), py::arg("s_avg"), py::arg("q"), py::arg("s_delta_grid"));

  py::class_<ProductEvaluation>(m, "ProductEvaluation")
      .def_property_readonly("alpha", [](const ProductEvaluation& e) { return e.alpha.value; })
      .def_readonly("h", &ProductEvaluation::h);

  m.def("encode",
        [](const SparseMatrix& a, const SymmetricSharePMF& pmf, std::uint64_t seed,
           const std::optional<std::vector<std::uint32_t>>& alphas) {
          return encode(a, pmf, make_params(pmf.q(), pmf.n(), alphas), seed).shares;
        },
        py::arg("a"), py::arg("pmf"), py::arg("seed"), py::arg("alphas") = py::none(),
        "Shares A + alpha_i R, one per evaluation point (default alphas 1..n).");
  m.def("evaluate_task",
        [](const SparseMatrix& share_a, const SparseMatrix& share_b, std::uint32_t alpha) {
          return ProductEvaluation{share_a.field().element(alpha), sp_mul(share_a, share_b)};
        },
        py::arg("share_a"), py::arg("share_b"), py::arg("alpha"));
  m.def("reconstruct_product",
        [](const std::vector<ProductEvaluation>& evals, bool cross_check) {
          return reconstruct_product(evals, cross_check);
        },
        py::arg("evaluations"), py::arg("cross_check") = false);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n", &SimConfig::n)
      .def_readwrite("q", &SimConfig::q)
      .def_readwrite("rows", &SimConfig::rows)
      .def_readwrite("inner", &SimConfig::inner)
      .def_readwrite("cols", &SimConfig::cols)
      .def_readwrite("s_a", &SimConfig::s_a)
      .def_readwrite("s_b", &SimConfig::s_b)
      .def_readwrite("s_d_a", &SimConfig::s_d_a)
      .def_readwrite("s_d_b", &SimConfig::s_d_b)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("stragglers", &SimConfig::stragglers)
      .def_readwrite("straggler_delay", &SimConfig::straggler_delay);

  py::class_<WorkerOutcome>(m, "WorkerOutcome")
      .def_readonly("alpha", &WorkerOutcome::alpha)
      .def_readonly("cost", &WorkerOutcome::cost)
      .def_readonly("baseline_cost", &WorkerOutcome::baseline_cost)
      .def_readonly("finish_time", &WorkerOutcome::finish_time)
      .def_readonly("straggler", &WorkerOutcome::straggler);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("workers", &SimReport::workers)
      .def_readonly("used_workers", &SimReport::used_workers)
      .def_readonly("completion_time", &SimReport::completion_time)
      .def_readonly("decode_ok", &SimReport::decode_ok)
      .def_readonly("baseline_decode_ok", &SimReport::baseline_decode_ok)
      .def_readonly("cost_sparse", &SimReport::cost_sparse)
      .def_readonly("cost_dense_baseline", &SimReport::cost_dense_baseline)
      .def_readonly("relative_leakage_a", &SimReport::relative_leakage_a)
      .def_readonly("relative_leakage_b", &SimReport::relative_leakage_b)
      .def("__str__", &format_report);

  m.def("run_simulation", &run_simulation, py::arg("config"));
}
