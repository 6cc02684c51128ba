// Python module _r2sf: field context, family construction, nuclei, linear
// sets, signatures, known-family comparison and the report runner. Results
// that are already JSON in C++ cross the boundary as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "r2sf/catalog.hpp"
#include "r2sf/error.hpp"
#include "r2sf/linset.hpp"
#include "r2sf/report.hpp"

namespace py = pybind11;
using namespace r2sf;

namespace {

FamilySpec to_spec(const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params) {
  FamilySpec s;
  s.family = family;
  s.p = p;
  s.h = h;
  s.n = n;
  for (const auto& [k, v] : params) {
    const std::string key = py::str(k);
    if (key == "r") s.r = v.cast<long long>();
    else if (key == "s") s.s = v.cast<long long>();
    else if (key == "t") s.t = v.cast<long long>();
    else if (key == "a") s.a = py::str(v);
    else if (key == "b") s.b = py::str(v);
    else if (key == "c") s.c = py::str(v);
    else if (key == "f") s.f = py::str(v);
    else if (key == "g") s.g = py::str(v);
    else if (key == "xi") s.xi = py::str(v);
    else throw InvalidArgument("unknown family parameter '" + key + "'");
  }
  return s;
}

SignatureOptions sig_opts(const std::string& mode, const std::string& nuclei, unsigned workers) {
  SignatureOptions o;
  o.mode = mode;
  o.nuclei = nuclei;
  o.workers = workers;
  return o;
}

}  // namespace

PYBIND11_MODULE(_r2sf, m) {
  m.doc() = "Rank-two presemifields and their linear sets";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.def("field_info", [](unsigned p, unsigned h, unsigned n) { return field_json(*Field::make(p, h, n)).dump(); },
        py::arg("p"), py::arg("h"), py::arg("n"));

  m.def(
      "spread",
      [](const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params) {
        const SpreadMap S = build_family(to_spec(family, p, h, n, params));
        std::vector<std::pair<std::string, std::string>> out;
        for (int i = 0; i < 4; ++i) out.emplace_back(S.entry(i).fx.to_string(), S.entry(i).gy.to_string());
        return out;
      },
      py::arg("family"), py::arg("p"), py::arg("h"), py::arg("n"), py::arg("params"));

  m.def(
      "zero_divisor_free",
      [](const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params, unsigned workers) {
        const SpreadMap S = build_family(to_spec(family, p, h, n, params));
        py::gil_scoped_release release;
        return zero_divisor_check(S, workers);
      },
      py::arg("family"), py::arg("p"), py::arg("h"), py::arg("n"), py::arg("params"), py::arg("workers") = 1);

  m.def(
      "nuclei",
      [](const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params,
         const std::string& method, std::uint64_t seed) {
        const SpreadMap S = build_family(to_spec(family, p, h, n, params));
        py::gil_scoped_release release;
        NucleiReport r;
        if (method == "spreadset") r = nuclei_spreadset(normalize_spread(S));
        else if (method == "bruteforce") r = nuclei_bruteforce(S);
        else if (method == "sampled") r = nuclei_sampled(S, seed);
        else throw InvalidArgument("nuclei method must be spreadset, bruteforce or sampled");
        return nuclei_json(r).dump();
      },
      py::arg("family"), py::arg("p"), py::arg("h"), py::arg("n"), py::arg("params"),
      py::arg("method") = "spreadset", py::arg("seed") = 0);

  m.def(
      "weight_spectrum",
      [](const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params, unsigned workers) {
        const SpreadMap S = build_family(to_spec(family, p, h, n, params));
        py::gil_scoped_release release;
        const auto x = weight_spectrum(build_linear_set(S, workers));
        return std::vector<std::uint64_t>(x.begin() + 1, x.end());
      },
      py::arg("family"), py::arg("p"), py::arg("h"), py::arg("n"), py::arg("params"), py::arg("workers") = 1);

  m.def(
      "distinguish",
      [](const std::string& family, unsigned p, unsigned h, unsigned n, const py::dict& params,
         const std::string& mode, unsigned workers) {
        const SpreadMap S = build_family(to_spec(family, p, h, n, params));
        py::gil_scoped_release release;
        const Signature sig = signature(S, sig_opts(mode, "spreadset", workers)).sig;
        const Verdict v = distinguish(sig);
        return nlohmann::json{{"compatible", v.compatible()}, {"verdicts", to_json(v)}}.dump();
      },
      py::arg("family"), py::arg("p"), py::arg("h"), py::arg("n"), py::arg("params"), py::arg("mode") = "exhaustive",
      py::arg("workers") = 1);

  m.def(
      "run",
      [](const std::string& command, const std::string& family, unsigned p, unsigned h, unsigned n,
         const py::dict& params, const std::string& mode, const std::string& nuclei, const std::string& derive,
         const std::string& suite, std::uint64_t cap, std::uint64_t seed, unsigned workers) {
        RunConfig c;
        c.command = command;
        c.spec = to_spec(family, p, h, n, params);
        c.mode = mode;
        c.nuclei = nuclei;
        c.derive = derive;
        c.suite = suite;
        c.cap = cap;
        c.seed = seed;
        c.workers = workers;
        py::gil_scoped_release release;
        const Report r = run(c);
        return std::make_pair(r.exit_code(), r.to_json().dump());
      },
      py::arg("command"), py::arg("family") = "dA", py::arg("p") = 3, py::arg("h") = 1, py::arg("n") = 3,
      py::arg("params") = py::dict(), py::arg("mode") = "exhaustive", py::arg("nuclei") = "spreadset",
      py::arg("derive") = "", py::arg("suite") = "", py::arg("cap") = 100000000ull, py::arg("seed") = 0,
      py::arg("workers") = 1);

  m.def("suite_names", &suite_names);
  m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;
}
