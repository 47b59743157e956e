// strat-forge: stratify quotients of weight systems, build link trees, and
// run the Monte Carlo verifier.
//
// Exit codes: 0 all checks pass, 1 usage or input error, 2 integrity error
// (output contradicting a structural invariant, including golden mismatches
// and failed verification thresholds).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "stratforge/serialize.hpp"

namespace {

using namespace stratforge;
using serialize::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw input_error("cannot open output file: " + out_path);
    out << text;
}

std::string group_name(const intlin::GroupDescriptor& g) {
    if (g.is_trivial()) return "trivial";
    std::string s;
    if (g.torus_rank == 1) s = "T";
    else if (g.torus_rank > 1) s = "T^" + std::to_string(g.torus_rank);
    for (const auto& d : g.invariant_factors) {
        if (!s.empty()) s += " x ";
        s += "Z/" + d.get_str();
    }
    return s;
}

std::string support_str(const strat::Support& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

std::string partition_text(const strat::Partition& p) {
    std::ostringstream os;
    os << "kind: " << serialize::kind_name(p.kind) << "\n";
    if (!p.free_coords.empty())
        os << "free coordinates (fixed by the whole group): "
           << support_str(p.free_coords) << "\n";
    os << "strata (" << p.strata.size() << "):\n";
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        const auto& st = p.strata[i];
        os << "  [" << i << "] dim " << st.dimension << "  isotropy "
           << group_name(st.isotropy) << (st.is_open ? "  open" : "")
           << (st.is_principal ? " principal" : "") << "\n";
        os << "      supports:";
        for (const auto& s : st.supports) os << " " << support_str(s);
        os << "\n";
    }
    // Frontier as an indented Hasse diagram: each stratum under the covering
    // strata of its closure relation.
    os << "frontier (lower < upper):\n";
    if (p.frontier.empty()) {
        os << "  (none)\n";
    } else {
        for (std::size_t u = 0; u < p.strata.size(); ++u) {
            bool any = false;
            for (const auto& [lo, hi] : p.frontier)
                if (hi == static_cast<int>(u)) any = true;
            if (!any) continue;
            os << "  [" << u << "] dim " << p.strata[u].dimension << "\n";
            for (const auto& [lo, hi] : p.frontier)
                if (hi == static_cast<int>(u))
                    os << "    <- [" << lo << "] dim " << p.strata[lo].dimension << "\n";
        }
    }
    return os.str();
}

void link_node_text(std::ostringstream& os, const local_model::LinkNode& node,
                    const strat::Partition& owner, int indent) {
    const std::string pad(indent * 2, ' ');
    const auto& st = owner.strata[node.stratum];
    os << pad << "stratum [" << node.stratum << "] dim " << st.dimension << " isotropy "
       << group_name(st.isotropy);
    if (!node.link) {
        os << "  (open, empty link)\n";
        return;
    }
    os << "\n" << pad << "  disk dim " << node.fixed_dim << ", link = sphere quotient of "
       << node.link->n() << " coords under " << node.link->torus_rank << "-torus";
    // Dimension ledger: disk dim plus cone over each link stratum.
    os << "\n" << pad << "  ledger: {" << node.fixed_dim;
    if (node.link_partition)
        for (const auto& lst : node.link_partition->strata)
            os << ", " << node.fixed_dim + 1 + lst.dimension;
    os << "}\n";
    if (node.truncated) {
        os << pad << "  (depth limit reached)\n";
        return;
    }
    for (const auto& child : node.children)
        link_node_text(os, child, *node.link_partition, indent + 2);
}

std::string link_tree_text(const local_model::LinkTree& tree) {
    std::ostringstream os;
    os << partition_text(tree.partition);
    os << "link tree:\n";
    for (const auto& node : tree.nodes) link_node_text(os, node, tree.partition, 1);
    return os.str();
}

std::string report_text(const sampler::VerificationReport& r) {
    std::ostringstream os;
    os << "verification: " << (r.pass ? "PASS" : "FAIL")
       << (r.incomplete ? " (incomplete: budget exhausted)" : "") << "\n";
    os << "  seed " << r.seed << "  budget " << r.budget << "  eps_scale " << r.eps_scale
       << "  theta_dim " << r.theta_dim << "\n";
    os << "  homogeneity residual  " << r.homogeneity_residual << "\n";
    os << "  equivariance residual " << r.equivariance_residual << "\n";
    os << "  principal density     " << r.density << "\n";
    for (const auto& sc : r.strata) {
        os << "  stratum [" << sc.stratum << "] dim " << sc.predicted_dim << " estimated ";
        if (sc.estimated_dim < 0) os << "(skipped)";
        else os << sc.estimated_dim;
        os << "  ledger " << (sc.ledger_ok ? "ok" : "MISMATCH") << "\n";
    }
    for (const auto& lc : r.links)
        os << "  link " << lc.path << ": " << lc.components << " component(s) from "
           << lc.samples << " samples\n";
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"stratified reduction of abelian weight systems"};
    app.require_subcommand(1);

    std::string input, out_path, format = "json", golden;
    uint64_t seed = 1;
    std::size_t samples = 20000;
    int max_depth = -1;
    double eps_scale = sampler::kEpsScale;

    for (const char* name : {"stratify", "links", "verify", "report"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--input", input)->required();
        sub->add_option("--seed", seed);
        sub->add_option("--samples", samples);
        sub->add_option("--max-depth", max_depth);
        sub->add_option("--eps-scale", eps_scale);
        sub->add_option("--out", out_path);
        sub->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--golden", golden);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    serialize::InputDoc doc = serialize::parse_input_text(read_file(input));

    json machine;
    std::string text;
    bool thresholds_ok = true;

    if (command == "stratify") {
        strat::Partition p = strat::assemble_partition(doc.ws, doc.kind);
        machine = serialize::to_json(p);
        text = partition_text(p);
    } else if (command == "links") {
        local_model::LinkTree tree = local_model::link_tree(doc.ws, doc.kind, max_depth);
        machine = serialize::to_json(tree);
        text = link_tree_text(tree);
    } else if (command == "verify") {
        local_model::LinkTree tree = local_model::link_tree(doc.ws, doc.kind, max_depth);
        auto report = sampler::verify_ledgers(doc.ws, tree, samples, seed, eps_scale);
        machine = serialize::to_json(report);
        text = report_text(report);
        thresholds_ok = report.pass;
    } else {  // report
        local_model::LinkTree tree = local_model::link_tree(doc.ws, doc.kind, max_depth);
        auto report = sampler::verify_ledgers(doc.ws, tree, samples, seed, eps_scale);
        machine = json::object();
        machine["schema_version"] = serialize::kSchemaVersion;
        machine["partition"] = serialize::to_json(tree.partition);
        machine["link_tree"] = serialize::to_json(tree);
        machine["verification"] = serialize::to_json(report);
        text = link_tree_text(tree) + report_text(report);
        thresholds_ok = report.pass;
    }

    const std::string payload =
        format == "json" ? serialize::dump(machine) : text;
    write_output(out_path, payload);

    if (!golden.empty()) {
        const std::string expected = read_file(golden);
        if (serialize::dump(machine) != expected)
            throw integrity_error("output differs from golden file " + golden);
    }
    if (!thresholds_ok) throw integrity_error("verification thresholds not met");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const stratforge::integrity_error& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 2;
    } catch (const stratforge::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
