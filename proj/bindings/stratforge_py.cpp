// Python bindings: thin JSON-text shims over the C++ pipeline.  Keeping the
// boundary at serialized documents means the Python side never sees GMP types.

#include <pybind11/pybind11.h>

#include "stratforge/serialize.hpp"

namespace py = pybind11;
using namespace stratforge;

namespace {

serialize::InputDoc parse(const std::string& text) {
    return serialize::parse_input_text(text);
}

std::string stratify(const std::string& input_text) {
    auto doc = parse(input_text);
    return serialize::dump(serialize::to_json(strat::assemble_partition(doc.ws, doc.kind)));
}

std::string links(const std::string& input_text, int max_depth) {
    auto doc = parse(input_text);
    return serialize::dump(
        serialize::to_json(local_model::link_tree(doc.ws, doc.kind, max_depth)));
}

std::string verify(const std::string& input_text, std::size_t samples, uint64_t seed,
                   double eps_scale) {
    auto doc = parse(input_text);
    auto tree = local_model::link_tree(doc.ws, doc.kind);
    return serialize::dump(
        serialize::to_json(sampler::verify_ledgers(doc.ws, tree, samples, seed, eps_scale)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "stratified reduction of abelian weight systems";
    m.attr("schema_version") = serialize::kSchemaVersion;

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<integrity_error>(m, "IntegrityError", PyExc_RuntimeError);

    m.def("stratify", &stratify, py::arg("input_json"),
          "Partition of the quotient as a JSON document.");
    m.def("links", &links, py::arg("input_json"), py::arg("max_depth") = -1,
          "Recursive link tree as a JSON document.");
    m.def("verify", &verify, py::arg("input_json"), py::arg("samples") = 20000,
          py::arg("seed") = 1, py::arg("eps_scale") = sampler::kEpsScale,
          "Monte Carlo verification report as a JSON document.");
}
