#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tcw/bisim.hpp"
#include "tcw/checker.hpp"
#include "tcw/distinguish.hpp"
#include "tcw/error.hpp"
#include "tcw/logic.hpp"
#include "tcw/pes_text.hpp"
#include "tcw/proc.hpp"

namespace py = pybind11;
using namespace tcw;

namespace {

std::vector<std::string> names(const Pes& p, EventSet s)
{
    std::vector<std::string> out;
    for (EventId e : s) out.push_back(p.event(e).name);
    return out;
}

EventSet events_of(const Pes& p, const std::vector<std::string>& ids)
{
    EventSet s;
    for (const auto& n : ids) s.insert(p.id_of(n));
    return s;
}

TransitionMode mode_of(const std::string& m)
{
    if (m == "single") return TransitionMode::Single;
    if (m == "step") return TransitionMode::Step;
    if (m == "pomset") return TransitionMode::Pomset;
    throw Error(ErrorKind::InvalidArgument, "unknown mode '" + m + "'");
}

Fragment fragment_of(const std::string& f)
{
    auto r = parse_fragment(f);
    if (!r) throw Error(ErrorKind::InvalidArgument, "unknown fragment '" + f + "'");
    return *r;
}

} // namespace

PYBIND11_MODULE(_tcw, m)
{
    m.doc() = "Prime event structures, event-based logic and the true-concurrency spectrum";

    static py::exception<Error> tcw_error(m, "TcwError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = tcw_error;
            py::object exc = err(e.what());
            exc.attr("kind") = std::string(error_kind_name(e.kind()));
            if (e.has_position()) {
                exc.attr("line") = e.position().line;
                exc.attr("column") = e.position().column;
            }
            PyErr_SetObject(tcw_error.ptr(), exc.ptr());
        }
    });

    py::class_<Pes>(m, "Pes")
        .def_property_readonly("name", &Pes::name)
        .def("__len__", &Pes::size)
        .def_property_readonly("events", [](const Pes& p) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& e : p.events()) out.push_back({e.name, e.label});
            return out;
        })
        .def("relation", [](const Pes& p, const std::string& a, const std::string& b) {
            return std::string(relation_name(relation(p, p.id_of(a), p.id_of(b))));
        })
        .def("configurations", [](const Pes& p) {
            std::vector<std::vector<std::string>> out;
            for (EventSet c : enum_configurations(p)) out.push_back(names(p, c));
            return out;
        })
        .def("transitions", [](const Pes& p, const std::vector<std::string>& config, const std::string& mode) {
            std::vector<std::vector<std::string>> out;
            for (const auto& t : transitions(p, events_of(p, config), mode_of(mode))) out.push_back(names(p, t.step));
            return out;
        }, py::arg("config"), py::arg("mode") = "single")
        .def("__str__", [](const Pes& p) { return print_pes(p); })
        .def("__eq__", [](const Pes& a, const Pes& b) { return a == b; });

    m.def("parse_pes", [](const std::string& text) { return parse_pes(text); });
    m.def("load_pes", &load_pes_file);
    m.def("compile_term", [](const std::string& term, const std::string& name) { return compile_term(std::string_view(term), name); },
          py::arg("term"), py::arg("name") = "P");

    m.def("normalize_formula", [](const std::string& f) { return to_string(parse_formula(f)); });
    m.def("free_vars", [](const std::string& f) { return free_vars(parse_formula(f)); });
    m.def("classify", [](const std::string& f) { return classify_fragment(parse_formula(f)).names(); });

    m.def("check", [](const Pes& p, const std::string& f, const std::vector<std::string>& config,
                      const std::map<std::string, std::string>& bind) {
        Env env;
        for (const auto& [v, e] : bind) env[v] = p.id_of(e);
        EventSet c = events_of(p, config);
        if (!p.is_configuration(c)) throw Error(ErrorKind::NotAConfiguration, "not a configuration");
        return satisfies(p, c, env, parse_formula(f));
    }, py::arg("pes"), py::arg("formula"), py::arg("config") = std::vector<std::string>{},
       py::arg("bind") = std::map<std::string, std::string>{});

    m.def("equiv", [](const Pes& a, const Pes& b, const std::string& rel) {
        auto r = parse_equivalence(rel);
        if (!r) throw Error(ErrorKind::InvalidArgument, "unknown relation '" + rel + "'");
        return check_equivalence(a, b, *r).equivalent;
    });

    m.def("spectrum", [](const Pes& a, const Pes& b) {
        Spectrum s = spectrum(a, b);
        return std::map<std::string, bool>{
            {"bisim", s.interleaving}, {"step", s.step}, {"pomset", s.pomset}, {"hp", s.hp}, {"hhp", s.hhp}};
    });

    m.def("distinguish", [](const Pes& a, const Pes& b, const std::string& frag) {
        Distinction d = distinguish(a, b, fragment_of(frag));
        return py::make_tuple(to_string(d.formula), d.verified);
    });
}
