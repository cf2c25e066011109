#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nkconf/ops.hpp"
#include "nkconf/search.hpp"
#include "nkconf/systematic.hpp"

namespace py = pybind11;
using namespace nk;

namespace {

py::tuple point_tuple(const HomPoint& p) { return py::make_tuple(p.x, p.y, p.w); }
py::tuple line_tuple(const HomLine& l) { return py::make_tuple(l.a, l.b, l.c); }

Tolerance tolerance(double incidence, double separation) {
    Tolerance t{incidence, separation};
    t.check();
    return t;
}

// Search results keep the full state alive so certificates can be looked up later.
struct SearchResult {
    std::shared_ptr<SearchState> state;
    long long lo, hi;
};

}  // namespace

PYBIND11_MODULE(_nkconf, m) {
    m.doc() = "Geometric and symbolic (n_k) configuration engine";

    // Instances carry the error kind tag as .kind
    static PyObject* exc = PyErr_NewException("nkconf._nkconf.NkError", PyExc_ValueError, nullptr);
    m.attr("NkError") = py::handle(exc);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::handle(exc)(py::str(e.what()));
            inst.attr("kind") = e.kind();
            PyErr_SetObject(exc, inst.ptr());
        }
    });

    py::class_<Descriptor>(m, "Descriptor")
        .def_readonly("n", &Descriptor::n)
        .def_readonly("k", &Descriptor::k)
        .def_readonly("p", &Descriptor::p)
        .def_readonly("q", &Descriptor::q)
        .def_readonly("flexible", &Descriptor::flexible)
        .def_readonly("central_sym", &Descriptor::central_sym)
        .def_property_readonly("expr", [](const Descriptor& d) { return d.expr.to_string(); })
        .def("__repr__", &Descriptor::to_string);

    py::class_<Configuration>(m, "Configuration")
        .def_readonly("k", &Configuration::k)
        .def_property_readonly("points",
                               [](const Configuration& c) {
                                   py::list out;
                                   for (const auto& p : c.points) out.append(point_tuple(p));
                                   return out;
                               })
        .def_property_readonly("lines",
                               [](const Configuration& c) {
                                   py::list out;
                                   for (const auto& l : c.lines) out.append(line_tuple(l));
                                   return out;
                               })
        .def_readonly("flags", &Configuration::flags)
        .def_property_readonly("expr", [](const Configuration& c) { return c.meta.expr; })
        .def_property_readonly("flexible", [](const Configuration& c) { return c.meta.flexible; })
        .def("to_json", [](const Configuration& c) { return to_json(c); })
        .def("to_svg", [](const Configuration& c, int size, bool labels,
                          bool pencils) { return render_svg(c, {size, labels, pencils}); },
             py::arg("size") = 800, py::arg("labels") = false, py::arg("pencils") = false)
        .def("__len__", [](const Configuration& c) { return c.points.size(); })
        .def("__repr__", [](const Configuration& c) {
            return "<Configuration (" + std::to_string(c.points.size()) + "_" + std::to_string(c.k) + ")>";
        });

    m.def("from_json", &from_json, py::arg("text"));
    m.def("load", &load_json_file, py::arg("path"));

    m.def(
        "construct",
        [](const std::string& expr, std::uint64_t seed, double incidence, double separation) {
            return construct(parse_expr(expr), seed, tolerance(incidence, separation));
        },
        py::arg("expr"), py::arg("seed") = 0, py::arg("tol_incidence") = 1e-8, py::arg("tol_separation") = 1e-5);

    m.def(
        "verify",
        [](const Configuration& c, double incidence, double separation) {
            auto r = verify(c, tolerance(incidence, separation));
            py::dict d;
            d["passed"] = r.passed;
            d["k"] = r.k;
            d["max_residual"] = r.max_residual;
            d["problems"] = r.problems;
            d["summary"] = r.summary();
            return d;
        },
        py::arg("cfg"), py::arg("tol_incidence") = 1e-8, py::arg("tol_separation") = 1e-5);

    m.def(
        "pencils",
        [](const Configuration& c) {
            auto r = detect_pencils(c);
            return py::make_tuple(r.p, r.q);
        },
        py::arg("cfg"), "Sizes (p, q) of the two largest independent parallel pencils.");

    m.def(
        "evaluate", [](const std::string& expr, int k) { return evaluate(parse_expr(expr), k); }, py::arg("expr"),
        py::arg("k"));

    py::class_<SearchResult>(m, "SearchResult")
        .def_property_readonly("k", [](const SearchResult& r) { return r.state->k; })
        .def_property_readonly("missing", [](const SearchResult& r) { return missing_report(*r.state, r.lo, r.hi); })
        .def_property_readonly("bound", [](const SearchResult& r) { return bound(*r.state, r.lo, r.hi); })
        .def("has", [](const SearchResult& r, long long n) { return r.state->has(n); })
        .def("get", [](const SearchResult& r, long long n) { return r.state->get(n); })
        .def("certificate", [](const SearchResult& r, long long n) { return certificate(*r.state, n).to_string(); })
        .def("audit",
             [](const SearchResult& r) {
                 auto a = audit(*r.state, bound(*r.state, r.lo, r.hi), r.hi);
                 return py::make_tuple(a.checked, a.failures);
             })
        .def("to_json", [](const SearchResult& r) {
            return search_json(*r.state, r.lo, r.hi, audit(*r.state, r.lo, r.hi));
        });

    m.def(
        "search",
        [](int k, std::optional<long long> n_max, bool du2) {
            SearchOptions opt;
            opt.k = k;
            opt.n_max = n_max ? *n_max : (k == 6 ? 7350 : 576);
            opt.du2 = du2;
            SearchResult r;
            {
                py::gil_scoped_release release;
                r.state = std::make_shared<SearchState>(run_search(opt));
            }
            r.lo = search_floor(k);
            r.hi = opt.n_max;
            return r;
        },
        py::arg("k") = 5, py::arg("n_max") = py::none(), py::arg("du2") = true);

    m.def("cross_ratio", [](std::array<double, 3> a, std::array<double, 3> b, std::array<double, 3> c,
                            std::array<double, 3> d) {
        auto P = [](const std::array<double, 3>& v) { return HomPoint(v[0], v[1], v[2]); };
        return cross_ratio(P(a), P(b), P(c), P(d));
    });
}
