// Python bindings for the main operations: field arithmetic, L-polynomials,
// ensemble statistics, the combinatorial prediction and the kernel integrals.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hyperell/charsum.hpp"
#include "hyperell/combinat.hpp"
#include "hyperell/ensemble.hpp"
#include "hyperell/ffq.hpp"
#include "hyperell/gao.hpp"
#include "hyperell/lfun.hpp"
#include "hyperell/rmt.hpp"
#include "hyperell/testfn.hpp"
#include "hyperell/verify.hpp"

namespace py = pybind11;
using namespace hyperell;

namespace {

ffq::MonicPoly monic_from(int64_t q, const std::vector<int64_t>& coeffs) {
    return ffq::MonicPoly(ffq::FieldOrder(q), coeffs);
}

std::vector<testfn::TestFn> parse_fns(const std::vector<std::string>& specs) {
    std::vector<testfn::TestFn> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(testfn::TestFn::parse(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_hyperell, m) {
    m.doc() = "hyperelliptic ensemble L-function statistics and USp kernel predictions";

    m.def(
        "jacobi",
        [](int64_t q, const std::vector<int64_t>& top, const std::vector<int64_t>& modulus) {
            ffq::FieldOrder f(q);
            return ffq::jacobi(ffq::Poly(f, top), ffq::Poly(f, modulus));
        },
        py::arg("q"), py::arg("top"), py::arg("modulus"),
        "Jacobi symbol (top/modulus) over F_q[x]; coefficients low to high");

    m.def(
        "is_squarefree",
        [](int64_t q, const std::vector<int64_t>& coeffs) {
            return ffq::is_squarefree(ffq::Poly(ffq::FieldOrder(q), coeffs));
        },
        py::arg("q"), py::arg("coeffs"));

    m.def(
        "mobius_mu",
        [](int64_t q, const std::vector<int64_t>& coeffs) {
            return ffq::mobius_mu(monic_from(q, coeffs));
        },
        py::arg("q"), py::arg("coeffs"));

    m.def(
        "prime_count", [](int r, int64_t q) { return ffq::prime_count(r, ffq::FieldOrder(q)); },
        py::arg("r"), py::arg("q"));

    m.def(
        "primes_of_degree",
        [](int r, int64_t q) {
            std::vector<std::vector<int64_t>> out;
            for (const auto& p : ffq::primes_of_degree(r, ffq::FieldOrder(q)))
                out.push_back(p.poly().coeffs());
            return out;
        },
        py::arg("r"), py::arg("q"));

    m.def(
        "l_star",
        [](int64_t q, const std::vector<int64_t>& d_coeffs) {
            lfun::StarData sd = lfun::star_reduce(lfun::l_coeffs(monic_from(q, d_coeffs)));
            py::dict out;
            out["lambda"] = sd.lambda;
            out["delta"] = sd.delta;
            out["coeffs"] = sd.Astar;
            out["record"] = lfun::star_record(sd);
            return out;
        },
        py::arg("q"), py::arg("d_coeffs"),
        "Completed L-polynomial of chi_D with the trivial zero removed");

    m.def(
        "scaled_traces",
        [](int64_t q, const std::vector<int64_t>& h_coeffs, int r_max) {
            return lfun::scaled_traces(monic_from(q, h_coeffs), r_max).c;
        },
        py::arg("q"), py::arg("h_coeffs"), py::arg("r_max"));

    m.def(
        "eigenphases",
        [](int64_t q, const std::vector<int64_t>& h_coeffs) {
            lfun::Eigenphases ep = lfun::eigenphases(lfun::star_data_fast(monic_from(q, h_coeffs)));
            return py::make_tuple(ep.theta, ep.residual);
        },
        py::arg("q"), py::arg("h_coeffs"),
        "Eigenphases in [0, pi] and the unit-circle residual");

    m.def(
        "avg_nlevel",
        [](int64_t q, int g, int n, const std::vector<std::string>& tf_specs, bool exhaustive,
           int64_t samples, uint64_t seed, unsigned threads) {
            ffq::FieldOrder f(q);
            auto spec = exhaustive ? ensemble::EnsembleSpec::exhaust(f, g)
                                   : ensemble::EnsembleSpec::sampled(f, g, samples, seed);
            auto res = ensemble::avg_nlevel(spec, parse_fns(tf_specs), n, threads);
            return py::make_tuple(res.mean, res.stderr_est, res.count);
        },
        py::arg("q"), py::arg("g"), py::arg("n"), py::arg("tf_specs"),
        py::arg("exhaustive") = true, py::arg("samples") = 10000, py::arg("seed") = 1,
        py::arg("threads") = 0,
        "Ensemble mean of the sieved n-level density: (mean, stderr, count)");

    m.def(
        "linear_stat_single",
        [](int64_t q, const std::vector<int64_t>& h_coeffs, const std::string& tf_spec) {
            ffq::MonicPoly h = monic_from(q, h_coeffs);
            int g = (h.degree() - 1) / 2;
            testfn::TestFn fn = testfn::TestFn::parse(tf_spec);
            int rneed = static_cast<int>(std::ceil(2.0 * g * fn.support()));
            auto st = lfun::traces_from_star(lfun::star_data_fast(h), rneed);
            return ensemble::linear_stat(st, fn, g);
        },
        py::arg("q"), py::arg("h_coeffs"), py::arg("tf_spec"));

    m.def(
        "a_value",
        [](const std::vector<std::string>& tf_specs) {
            auto r = gao::A_value(gao::FnSet(parse_fns(tf_specs)));
            return py::make_tuple(r.value, r.err);
        },
        py::arg("tf_specs"), "The combinatorial n-level prediction A(f_1..f_n)");

    m.def(
        "kernel_integral",
        [](const std::vector<std::string>& tf_specs, int n, double x_max, uint64_t seed) {
            rmt::KernelSpec spec;
            spec.x_max = x_max;
            spec.qmc_seed = seed;
            auto r = rmt::kernel_integral(parse_fns(tf_specs), n, spec);
            return py::make_tuple(r.value, r.err, r.stderr_est);
        },
        py::arg("tf_specs"), py::arg("n"), py::arg("x_max") = 60.0, py::arg("seed") = 2024);

    m.def(
        "rmt_empirical",
        [](const std::vector<std::string>& tf_specs, int g, int64_t samples, uint64_t seed, int n,
           unsigned threads) {
            auto r = rmt::nlevel_rmt_empirical(parse_fns(tf_specs), g, samples, seed, n, threads);
            return py::make_tuple(r.mean, r.stderr_est, r.count);
        },
        py::arg("tf_specs"), py::arg("g"), py::arg("samples"), py::arg("seed") = 1,
        py::arg("n") = 1, py::arg("threads") = 0);

    m.def(
        "s_brute",
        [](int beta, const std::vector<int>& r, int64_t q) {
            return charsum::S_brute(beta, r, ffq::FieldOrder(q));
        },
        py::arg("beta"), py::arg("r"), py::arg("q"),
        "Multiple character sum over monic B and ordered distinct prime tuples");

    m.def(
        "sigma_sum",
        [](const std::vector<int>& r, int alpha, int64_t q) {
            return combinat::sigma_sum(r, alpha, q).to_string();
        },
        py::arg("r"), py::arg("alpha"), py::arg("q"));

    m.def(
        "avg_p_exact",
        [](const std::vector<int>& r, int64_t q, int g) {
            auto res = charsum::avg_P_exact(r, ffq::FieldOrder(q), g);
            return py::make_tuple(res.equal, res.lhs.to_double(), res.lhs.to_string());
        },
        py::arg("r"), py::arg("q"), py::arg("g"));

    m.def(
        "run_verify_suite",
        [](const std::string& name, unsigned threads) {
            verify::Options opt;
            opt.threads = threads;
            std::vector<py::dict> out;
            for (const auto& r : verify::run_suite(name, opt)) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.push_back(d);
            }
            return out;
        },
        py::arg("name"), py::arg("threads") = 0);
}
