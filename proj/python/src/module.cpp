#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bppnet/applications.hpp"
#include "bppnet/cli.hpp"
#include "bppnet/coverage.hpp"
#include "bppnet/distances.hpp"
#include "bppnet/interference.hpp"
#include "bppnet/montecarlo.hpp"
#include "bppnet/specfun.hpp"

namespace py = pybind11;
using namespace bppnet;

namespace {

TxSelectionPolicy policy_of(const std::string& name, int k)
{
    if (name == "uniform")
        return UniformSelection{};
    if (name == "kclosest")
        return KClosestSelection{k};
    throw py::value_error("policy must be 'uniform' or 'kclosest'");
}

ReceiverLocation receiver_of(const std::string& name, double nu0)
{
    if (name == "central")
        return CentralReceiver{};
    if (name == "random")
        return RandomReceiver{};
    if (name == "at")
        return ReceiverAtRadius{nu0};
    throw py::value_error("receiver must be 'central', 'random' or 'at'");
}

InterfererWeighting weighting_of(const std::string& name)
{
    if (name == "paper")
        return InterfererWeighting::PaperBinomialTruncated;
    if (name == "hypergeometric")
        return InterfererWeighting::Hypergeometric;
    throw py::value_error("weighting must be 'paper' or 'hypergeometric'");
}

NetworkModel model_of(int n_tx, int n_active, double alpha, double disk_radius)
{
    return {disk_radius, n_tx, n_active, alpha};
}

QuadratureSettings settings_of(double rel_tol)
{
    QuadratureSettings q;
    q.rel_tol = rel_tol;
    return q;
}

SirQuery query_of(const std::string& policy, int k, int n_tx, int n_active, double alpha, double beta,
                  const std::string& receiver, double nu0, const std::string& weighting, double disk_radius)
{
    SirQuery q;
    q.threshold_linear = beta;
    q.model = model_of(n_tx, n_active, alpha, disk_radius);
    q.policy = policy_of(policy, k);
    q.receiver = receiver_of(receiver, nu0);
    q.weighting = weighting_of(weighting);
    return q;
}

CacheProblem cache_of(int library_size, int cache_size, double gamma, int n_tx, int n_active, double alpha,
                      double beta, const std::string& weighting)
{
    CacheProblem p;
    p.library_size = library_size;
    p.cache_size = cache_size;
    p.zipf_gamma = gamma;
    p.model = model_of(n_tx, n_active, alpha, 1.0);
    p.beta = beta;
    p.weighting = weighting_of(weighting);
    return p;
}

#define QUERY_ARGS                                                                                      \
    py::kw_only(), py::arg("policy") = "uniform", py::arg("k") = 1, py::arg("n_tx") = 5,               \
        py::arg("n_active") = 5, py::arg("alpha") = 4.0, py::arg("beta") = 1.0,                          \
        py::arg("receiver") = "central", py::arg("nu0") = 0.0, py::arg("weighting") = "paper",           \
        py::arg("disk_radius") = 1.0

} // namespace

PYBIND11_MODULE(_bppnet, m)
{
    m.doc() = "Coverage, rate and caching analysis for finite wireless networks";

    auto base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    (void)base;

    m.def("gauss_2f1", [](double a, double b, double c, double z) { return gauss_2f1({a, b, c, z}); },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
    m.def("c_kernel", &c_kernel, py::arg("alpha"), py::arg("s"), py::arg("x"));
    m.def("d_kernel", &d_kernel, py::arg("alpha"), py::arg("s"), py::arg("x"), py::arg("n"));

    m.def("central_pdf", &central_pdf, py::arg("w"), py::arg("disk_radius") = 1.0);
    m.def("central_cdf", &central_cdf, py::arg("w"), py::arg("disk_radius") = 1.0);
    m.def("cond_pdf_w", &cond_pdf_w, py::arg("w"), py::arg("nu0"), py::arg("disk_radius") = 1.0);
    m.def("cond_cdf_w", &cond_cdf_w, py::arg("w"), py::arg("nu0"), py::arg("disk_radius") = 1.0);
    m.def(
        "serving_pdf_kclosest",
        [](double r, int k, int n_tx, double nu0, double disk_radius) {
            return serving_pdf_kclosest(r, {k, n_tx, PiecewiseDistanceLaw(nu0, disk_radius)});
        },
        py::arg("r"), py::arg("k"), py::arg("n_tx"), py::arg("nu0") = 0.0, py::arg("disk_radius") = 1.0);

    m.def(
        "split_weights",
        [](int k, int n_tx, int n_active, const std::string& weighting) {
            return split_weights(k, n_tx, n_active, weighting_of(weighting)).weights;
        },
        py::arg("k"), py::arg("n_tx"), py::arg("n_active"), py::arg("weighting") = "paper");
    m.def(
        "laplace_uniform",
        [](double s, double nu0, int n_active, double alpha) {
            return laplace_uniform(s, nu0, model_of(n_active, n_active, alpha, 1.0));
        },
        py::arg("s"), py::arg("nu0"), py::arg("n_active"), py::arg("alpha") = 4.0);

    m.def(
        "coverage",
        [](const std::string& policy, int k, int n_tx, int n_active, double alpha, double beta,
           const std::string& receiver, double nu0, const std::string& weighting, double disk_radius,
           double rel_tol) {
            const auto r = coverage(query_of(policy, k, n_tx, n_active, alpha, beta, receiver, nu0, weighting,
                                             disk_radius),
                                    settings_of(rel_tol));
            return py::make_tuple(r.probability, r.quadrature_error_estimate);
        },
        QUERY_ARGS, py::arg("rel_tol") = 1e-8,
        "Coverage probability and quadrature error estimate.");

    m.def(
        "sc_coverage",
        [](int antennas, bool correlated, const std::string& policy, int k, int n_tx, int n_active, double alpha,
           double beta, const std::string& receiver, double nu0, const std::string& weighting,
           double disk_radius) {
            DiversityQuery d;
            d.base = query_of(policy, k, n_tx, n_active, alpha, beta, receiver, nu0, weighting, disk_radius);
            d.antennas = antennas;
            d.correlated = correlated;
            return sc_coverage(d, nu0);
        },
        py::arg("antennas"), py::arg("correlated") = true, QUERY_ARGS,
        "Selection-combining coverage for a receiver at radius nu0.");

    m.def(
        "nse",
        [](const std::string& policy, int k, int n_tx, int n_active, double alpha, double beta,
           const std::string& weighting) {
            return nse(policy_of(policy, k), model_of(n_tx, n_active, alpha, 1.0), beta, weighting_of(weighting));
        },
        py::kw_only(), py::arg("policy") = "uniform", py::arg("k") = 1, py::arg("n_tx") = 5,
        py::arg("n_active") = 5, py::arg("alpha") = 4.0, py::arg("beta") = 1.0, py::arg("weighting") = "paper");
    m.def(
        "optimal_active_count",
        [](const std::string& policy, int k, int n_tx, double alpha, double beta, const std::string& weighting) {
            py::gil_scoped_release release;
            const auto r = optimal_active_count(policy_of(policy, k), n_tx, beta, alpha, weighting_of(weighting));
            return std::make_tuple(r.n_active, r.nse, r.curve);
        },
        py::kw_only(), py::arg("policy") = "uniform", py::arg("k") = 1, py::arg("n_tx") = 5,
        py::arg("alpha") = 4.0, py::arg("beta") = 1.0, py::arg("weighting") = "paper",
        "(n_active*, nse*, nse for every N^a).");

    m.def("zipf_pmf", &zipf_pmf, py::arg("j"), py::arg("library_size"), py::arg("gamma"));
    m.def(
        "optimize_caching",
        [](int library_size, int cache_size, double gamma, int n_tx, int n_active, double alpha, double beta,
           const std::string& weighting) {
            const auto p = cache_of(library_size, cache_size, gamma, n_tx, n_active, alpha, beta, weighting);
            CacheSolution s;
            {
                py::gil_scoped_release release;
                s = optimize_caching(p);
            }
            py::dict out;
            out["b"] = s.placement.probabilities;
            out["hit"] = s.hit;
            out["throughput"] = throughput(n_active, s.hit);
            out["coverage_by_k"] = s.coverage_by_k;
            return out;
        },
        py::kw_only(), py::arg("library_size"), py::arg("cache_size"), py::arg("gamma"), py::arg("n_tx") = 5,
        py::arg("n_active") = 5, py::arg("alpha") = 4.0, py::arg("beta") = 1.0, py::arg("weighting") = "paper");

    m.def(
        "simulate_coverage",
        [](long trials, std::uint64_t seed, const std::string& sampling, int lanes, const std::string& policy,
           int k, int n_tx, int n_active, double alpha, double beta, const std::string& receiver, double nu0,
           const std::string& weighting, double disk_radius) {
            SimulationPlan plan;
            plan.trials = trials;
            plan.seed = seed;
            plan.lanes = lanes;
            if (sampling == "iid")
                plan.sampling = InterfererSampling::IidResample;
            else if (sampling == "subset")
                plan.sampling = InterfererSampling::WithoutReplacementSubset;
            else
                throw py::value_error("sampling must be 'iid' or 'subset'");
            const auto q = query_of(policy, k, n_tx, n_active, alpha, beta, receiver, nu0, weighting, disk_radius);
            EstimateWithCI e;
            {
                py::gil_scoped_release release;
                e = simulate_coverage(q, plan);
            }
            return py::make_tuple(e.mean, e.half_width_95, e.trials);
        },
        py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("sampling") = "iid", py::arg("lanes") = 1,
        QUERY_ARGS, "(mean, 95% half width, trials).");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command; returns (exit code, stdout, stderr).");
}
