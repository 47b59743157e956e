#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stratforge/serialize.hpp"

using namespace stratforge;
using intlin::IntMatrix;
using serialize::json;
using strat::Kind;
using torus_rep::WeightSystem;

namespace {

WeightSystem make_ws(std::vector<std::vector<long>> rows) {
    const std::size_t k = rows.size();
    const std::size_t n = rows.empty() ? 0 : rows[0].size();
    IntMatrix w(k, n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) w.at(i, j) = rows[i][j];
    return WeightSystem(k, {}, w, IntMatrix(0, n));
}

WeightSystem mixed_ws() {
    IntMatrix w(1, 3);
    w.at(0, 0) = 2;
    w.at(0, 1) = -2;
    w.at(0, 2) = 1;
    IntMatrix c(1, 3);
    c.at(0, 0) = 1;
    c.at(0, 1) = 0;
    c.at(0, 2) = 1;
    return WeightSystem(1, {intlin::Int(2)}, w, c);
}

}  // namespace

TEST_CASE("input document parsing") {
    auto doc = serialize::parse_input_text(R"({
      "torus_rank": 1, "moduli": [], "weights": [[1, -1]],
      "finite_chars": [], "kind": "symplectic_at_zero"})");
    CHECK(doc.ws.torus_rank == 1);
    CHECK(doc.ws.n() == 2);
    CHECK(doc.kind == Kind::symplectic_at_zero);

    CHECK_THROWS_AS(serialize::parse_input_text("not json"), input_error);
    CHECK_THROWS_AS(serialize::parse_input_text(R"({"torus_rank": 1})"), input_error);
    CHECK_THROWS_AS(serialize::parse_input_text(R"({
      "torus_rank": 1, "moduli": [], "weights": [[1, -1]],
      "finite_chars": [], "kind": "bogus"})"),
                    input_error);
    CHECK_THROWS_AS(serialize::parse_input_text(R"({
      "torus_rank": 2, "moduli": [], "weights": [[1, -1]],
      "finite_chars": [], "kind": "contact_sphere"})"),
                    input_error);
}

TEST_CASE("weight system round trip") {
    for (auto ws : {make_ws({{1, -1}}), make_ws({{1, 0, -1}, {0, 1, -1}}), mixed_ws()}) {
        auto j = serialize::to_json(ws);
        CHECK(serialize::weight_system_from_json(j) == ws);
    }
}

TEST_CASE("partition round trip and schema pinning") {
    auto p = strat::assemble_partition(mixed_ws(), Kind::symplectic_at_zero);
    auto j = serialize::to_json(p);
    CHECK(j.at("schema_version") == serialize::kSchemaVersion);
    auto p2 = serialize::partition_from_json(j);
    CHECK(serialize::to_json(p2) == j);
    CHECK(p2.strata.size() == p.strata.size());
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        CHECK(intlin::group_equal(p2.strata[i].isotropy, p.strata[i].isotropy));
        CHECK(p2.strata[i].supports == p.strata[i].supports);
        CHECK(p2.strata[i].dimension == p.strata[i].dimension);
    }
    CHECK(p2.frontier == p.frontier);

    json bad = j;
    bad["schema_version"] = 999;
    CHECK_THROWS_AS(serialize::partition_from_json(bad), input_error);
}

TEST_CASE("link tree round trip") {
    auto tree = local_model::link_tree(make_ws({{2, -2, 1}}), Kind::symplectic_at_zero);
    auto j = serialize::to_json(tree);
    auto tree2 = serialize::link_tree_from_json(j);
    CHECK(serialize::to_json(tree2) == j);
}

TEST_CASE("verification report round trip is byte-lossless") {
    auto ws = make_ws({{1, -1}});
    auto tree = local_model::link_tree(ws, Kind::symplectic_at_zero);
    auto report = sampler::verify_ledgers(ws, tree, 5000, 99);
    auto j = serialize::to_json(report);
    auto report2 = serialize::report_from_json(j);
    CHECK(serialize::dump(serialize::to_json(report2)) == serialize::dump(j));
}

TEST_CASE("dumps are deterministic") {
    auto p = strat::assemble_partition(make_ws({{1, 1, -1}}), Kind::symplectic_at_zero);
    CHECK(serialize::dump(serialize::to_json(p)) == serialize::dump(serialize::to_json(p)));
}
