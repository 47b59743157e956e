#include "stratforge/serialize.hpp"

namespace stratforge::serialize {

using intlin::GroupDescriptor;
using intlin::Int;
using intlin::IntMatrix;
using intlin::Rat;
using intlin::RatMatrix;
using local_model::LinkNode;
using sampler::LinkCheck;
using sampler::StratumCheck;
using strat::Stratum;
using strat::Support;

namespace {

json int_to_json(const Int& v) {
    // int64 when it fits, decimal string otherwise; parse accepts both.
    if (v.fits_slong_p()) return static_cast<long>(v.get_si());
    return v.get_str();
}

Int int_from_json(const json& j, const char* field) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw input_error(std::string("expected an integer at '") + field + "'");
}

json rat_to_json(const Rat& v) { return v.get_str(); }

Rat rat_from_json(const json& j, const char* field) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) {
        try {
            Rat r(j.get<std::string>());
            r.canonicalize();
            return r;
        } catch (const std::invalid_argument&) {
        }
    }
    throw input_error(std::string("expected a rational at '") + field + "'");
}

json int_vector_to_json(const std::vector<Int>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back(int_to_json(x));
    return arr;
}

std::vector<Int> int_vector_from_json(const json& j, const char* field) {
    if (!j.is_array()) throw input_error(std::string("expected an array at '") + field + "'");
    std::vector<Int> v;
    for (const auto& x : j) v.push_back(int_from_json(x, field));
    return v;
}

json int_matrix_to_json(const IntMatrix& m) {
    json out = json::object();
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(int_to_json(m.at(i, j)));
    out["data"] = data;
    return out;
}

IntMatrix int_matrix_from_json(const json& j, const char* field) {
    // Shaped form {rows, cols, data} or plain nested arrays (input documents).
    if (j.is_object()) {
        const std::size_t rows = j.at("rows").get<std::size_t>();
        const std::size_t cols = j.at("cols").get<std::size_t>();
        const auto& data = j.at("data");
        if (!data.is_array() || data.size() != rows * cols)
            throw input_error(std::string("matrix data size mismatch at '") + field + "'");
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t c = 0; c < cols; ++c)
                m.at(i, c) = int_from_json(data[i * cols + c], field);
        return m;
    }
    if (j.is_array()) {
        const std::size_t rows = j.size();
        std::size_t cols = 0;
        if (rows > 0) {
            if (!j[0].is_array())
                throw input_error(std::string("expected a matrix (array of rows) at '") +
                                  field + "'");
            cols = j[0].size();
        }
        IntMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            if (!j[i].is_array() || j[i].size() != cols)
                throw input_error(std::string("ragged matrix at '") + field + "'");
            for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = int_from_json(j[i][c], field);
        }
        return m;
    }
    throw input_error(std::string("expected a matrix at '") + field + "'");
}

json rat_matrix_to_json(const RatMatrix& m) {
    json out = json::object();
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(rat_to_json(m.at(i, j)));
    out["data"] = data;
    return out;
}

RatMatrix rat_matrix_from_json(const json& j, const char* field) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols)
        throw input_error(std::string("matrix data size mismatch at '") + field + "'");
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c)
            m.at(i, c) = rat_from_json(data[i * cols + c], field);
    return m;
}

json group_to_json(const GroupDescriptor& g) {
    json out = json::object();
    out["ambient_torus_rank"] = g.ambient_torus_rank;
    out["ambient_moduli"] = int_vector_to_json(g.ambient_moduli);
    out["torus_rank"] = g.torus_rank;
    out["invariant_factors"] = int_vector_to_json(g.invariant_factors);
    out["embedding"] = rat_matrix_to_json(g.embedding);
    out["annihilator"] = int_matrix_to_json(g.annihilator);
    return out;
}

GroupDescriptor group_from_json(const json& j) {
    GroupDescriptor g;
    g.ambient_torus_rank = j.at("ambient_torus_rank").get<std::size_t>();
    g.ambient_moduli = int_vector_from_json(j.at("ambient_moduli"), "ambient_moduli");
    g.torus_rank = j.at("torus_rank").get<std::size_t>();
    g.invariant_factors = int_vector_from_json(j.at("invariant_factors"), "invariant_factors");
    g.embedding = rat_matrix_from_json(j.at("embedding"), "embedding");
    g.annihilator = int_matrix_from_json(j.at("annihilator"), "annihilator");
    return g;
}

json support_to_json(const Support& s) {
    json arr = json::array();
    for (int j : s) arr.push_back(j);
    return arr;
}

Support support_from_json(const json& j) { return j.get<Support>(); }

const json& require(const json& j, const char* field) {
    if (!j.is_object() || !j.contains(field))
        throw input_error(std::string("missing field '") + field + "'");
    return j.at(field);
}

}  // namespace

std::string kind_name(Kind kind) {
    return kind == Kind::symplectic_at_zero ? "symplectic_at_zero" : "contact_sphere";
}

Kind kind_from_name(const std::string& name) {
    if (name == "symplectic_at_zero") return Kind::symplectic_at_zero;
    if (name == "contact_sphere") return Kind::contact_sphere;
    throw input_error("unknown kind '" + name +
                      "' (expected symplectic_at_zero or contact_sphere)");
}

json to_json(const WeightSystem& ws) {
    json out = json::object();
    out["torus_rank"] = ws.torus_rank;
    out["moduli"] = int_vector_to_json(ws.moduli);
    out["weights"] = int_matrix_to_json(ws.weights);
    out["finite_chars"] = int_matrix_to_json(ws.finite_chars);
    return out;
}

WeightSystem weight_system_from_json(const json& j) {
    const std::size_t k = require(j, "torus_rank").get<std::size_t>();
    auto moduli = int_vector_from_json(require(j, "moduli"), "moduli");
    IntMatrix weights = int_matrix_from_json(require(j, "weights"), "weights");
    IntMatrix chars = int_matrix_from_json(require(j, "finite_chars"), "finite_chars");
    if (weights.rows() != k)
        throw input_error("weights must have torus_rank rows");
    if (chars.rows() != moduli.size())
        throw input_error("finite_chars must have one row per modulus");
    // Nested-array empty matrices lose the column count; recover n from the
    // other matrix, or from an explicit "n" field when both are empty.
    std::size_t n = std::max(weights.cols(), chars.cols());
    if (k == 0 && moduli.empty() && j.contains("n")) n = j.at("n").get<std::size_t>();
    if (weights.rows() == 0) weights = IntMatrix(0, n);
    if (chars.rows() == 0) chars = IntMatrix(0, n);
    if (weights.cols() != chars.cols())
        throw input_error("weights and finite_chars disagree on the number of coordinates");
    return WeightSystem(k, std::move(moduli), std::move(weights), std::move(chars));
}

InputDoc parse_input(const json& j) {
    InputDoc doc;
    doc.ws = weight_system_from_json(j);
    doc.kind = kind_from_name(require(j, "kind").get<std::string>());
    return doc;
}

InputDoc parse_input_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw input_error("input is not valid JSON");
    return parse_input(j);
}

json to_json(const Partition& p) {
    json out = json::object();
    out["schema_version"] = kSchemaVersion;
    out["ambient"] = to_json(p.ambient);
    out["kind"] = kind_name(p.kind);
    json strata = json::array();
    for (const auto& st : p.strata) {
        json s = json::object();
        s["isotropy"] = group_to_json(st.isotropy);
        json sups = json::array();
        for (const auto& sup : st.supports) sups.push_back(support_to_json(sup));
        s["supports"] = sups;
        s["dimension"] = st.dimension;
        s["is_open"] = st.is_open;
        s["is_principal"] = st.is_principal;
        strata.push_back(s);
    }
    out["strata"] = strata;
    json frontier = json::array();
    for (const auto& [lo, hi] : p.frontier) frontier.push_back(json::array({lo, hi}));
    out["frontier"] = frontier;
    out["free_coords"] = support_to_json(p.free_coords);
    return out;
}

Partition partition_from_json(const json& j) {
    if (require(j, "schema_version").get<int>() != kSchemaVersion)
        throw input_error("unsupported schema_version");
    Partition p;
    p.ambient = weight_system_from_json(j.at("ambient"));
    p.kind = kind_from_name(j.at("kind").get<std::string>());
    for (const auto& s : require(j, "strata")) {
        Stratum st;
        st.isotropy = group_from_json(s.at("isotropy"));
        for (const auto& sup : s.at("supports")) st.supports.push_back(support_from_json(sup));
        st.dimension = s.at("dimension").get<int>();
        st.is_open = s.at("is_open").get<bool>();
        st.is_principal = s.at("is_principal").get<bool>();
        p.strata.push_back(std::move(st));
    }
    for (const auto& e : require(j, "frontier"))
        p.frontier.emplace_back(e[0].get<int>(), e[1].get<int>());
    p.free_coords = support_from_json(require(j, "free_coords"));
    return p;
}

namespace {

json node_to_json(const LinkNode& node) {
    json out = json::object();
    out["stratum"] = node.stratum;
    out["fixed_dim"] = node.fixed_dim;
    if (node.link) out["link"] = to_json(*node.link);
    if (node.link_partition) {
        json lp = to_json(*node.link_partition);
        lp.erase("schema_version");
        out["link_partition"] = lp;
    }
    json children = json::array();
    for (const auto& c : node.children) children.push_back(node_to_json(c));
    out["children"] = children;
    out["truncated"] = node.truncated;
    return out;
}

LinkNode node_from_json(const json& j) {
    LinkNode node;
    node.stratum = j.at("stratum").get<int>();
    node.fixed_dim = j.at("fixed_dim").get<int>();
    if (j.contains("link")) node.link = weight_system_from_json(j.at("link"));
    if (j.contains("link_partition")) {
        json lp = j.at("link_partition");
        lp["schema_version"] = kSchemaVersion;
        node.link_partition = partition_from_json(lp);
    }
    for (const auto& c : j.at("children")) node.children.push_back(node_from_json(c));
    node.truncated = j.at("truncated").get<bool>();
    return node;
}

}  // namespace

json to_json(const LinkTree& tree) {
    json out = json::object();
    out["schema_version"] = kSchemaVersion;
    out["partition"] = to_json(tree.partition);
    json nodes = json::array();
    for (const auto& n : tree.nodes) nodes.push_back(node_to_json(n));
    out["nodes"] = nodes;
    return out;
}

LinkTree link_tree_from_json(const json& j) {
    if (require(j, "schema_version").get<int>() != kSchemaVersion)
        throw input_error("unsupported schema_version");
    LinkTree tree;
    tree.partition = partition_from_json(j.at("partition"));
    for (const auto& n : require(j, "nodes")) tree.nodes.push_back(node_from_json(n));
    return tree;
}

json to_json(const VerificationReport& report) {
    json out = json::object();
    out["schema_version"] = kSchemaVersion;
    out["seed"] = report.seed;
    out["pass"] = report.pass;
    out["incomplete"] = report.incomplete;
    out["density"] = report.density;
    out["homogeneity_residual"] = report.homogeneity_residual;
    out["equivariance_residual"] = report.equivariance_residual;
    json strata = json::array();
    for (const auto& sc : report.strata) {
        json s = json::object();
        s["stratum"] = sc.stratum;
        s["predicted_dim"] = sc.predicted_dim;
        s["estimated_dim"] = sc.estimated_dim;
        s["spectral_gap"] = sc.spectral_gap;
        s["predicted_neighbor_dims"] = sc.predicted_neighbor_dims;
        s["sampled_neighbor_dims"] = sc.sampled_neighbor_dims;
        s["ledger_ok"] = sc.ledger_ok;
        strata.push_back(s);
    }
    out["strata"] = strata;
    json links = json::array();
    for (const auto& lc : report.links) {
        json l = json::object();
        l["path"] = lc.path;
        l["components"] = lc.components;
        l["eps"] = lc.eps;
        l["samples"] = lc.samples;
        links.push_back(l);
    }
    out["links"] = links;
    json params = json::object();
    params["theta_dim"] = report.theta_dim;
    params["eps_scale"] = report.eps_scale;
    params["budget"] = report.budget;
    out["parameters"] = params;
    return out;
}

VerificationReport report_from_json(const json& j) {
    if (require(j, "schema_version").get<int>() != kSchemaVersion)
        throw input_error("unsupported schema_version");
    VerificationReport r;
    r.seed = j.at("seed").get<uint64_t>();
    r.pass = j.at("pass").get<bool>();
    r.incomplete = j.at("incomplete").get<bool>();
    r.density = j.at("density").get<double>();
    r.homogeneity_residual = j.at("homogeneity_residual").get<double>();
    r.equivariance_residual = j.at("equivariance_residual").get<double>();
    for (const auto& s : j.at("strata")) {
        StratumCheck sc;
        sc.stratum = s.at("stratum").get<int>();
        sc.predicted_dim = s.at("predicted_dim").get<int>();
        sc.estimated_dim = s.at("estimated_dim").get<int>();
        sc.spectral_gap = s.at("spectral_gap").get<double>();
        sc.predicted_neighbor_dims = s.at("predicted_neighbor_dims").get<std::vector<int>>();
        sc.sampled_neighbor_dims = s.at("sampled_neighbor_dims").get<std::vector<int>>();
        sc.ledger_ok = s.at("ledger_ok").get<bool>();
        r.strata.push_back(std::move(sc));
    }
    for (const auto& l : j.at("links")) {
        LinkCheck lc;
        lc.path = l.at("path").get<std::string>();
        lc.components = l.at("components").get<int>();
        lc.eps = l.at("eps").get<double>();
        lc.samples = l.at("samples").get<int>();
        r.links.push_back(std::move(lc));
    }
    const auto& params = j.at("parameters");
    r.theta_dim = params.at("theta_dim").get<double>();
    r.eps_scale = params.at("eps_scale").get<double>();
    r.budget = params.at("budget").get<std::size_t>();
    return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace stratforge::serialize
