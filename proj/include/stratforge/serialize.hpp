#pragma once

// JSON boundary of the library.  Inputs carry exact integers only; outputs
// are versioned (schema_version) and deterministic: the same object always
// dumps to the same bytes.

#include <json.hpp>

#include <string>

#include "stratforge/sampler.hpp"

namespace stratforge::serialize {

using json = nlohmann::ordered_json;
using local_model::LinkTree;
using sampler::VerificationReport;
using strat::Kind;
using strat::Partition;
using torus_rep::WeightSystem;

constexpr int kSchemaVersion = 1;

// A parsed input document: the weight system plus which quotient to take.
struct InputDoc {
    WeightSystem ws;
    Kind kind = Kind::symplectic_at_zero;
};

// Parses {torus_rank, moduli, weights, finite_chars, kind} with nested-array
// matrices.  Throws input_error with a field-level message on malformed input.
InputDoc parse_input(const json& j);
InputDoc parse_input_text(const std::string& text);

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

json to_json(const WeightSystem& ws);
WeightSystem weight_system_from_json(const json& j);

json to_json(const Partition& p);
Partition partition_from_json(const json& j);

json to_json(const LinkTree& tree);
LinkTree link_tree_from_json(const json& j);

json to_json(const VerificationReport& report);
VerificationReport report_from_json(const json& j);

// Canonical dump: 2-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace stratforge::serialize
