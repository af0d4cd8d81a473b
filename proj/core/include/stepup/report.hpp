#pragma once

// JSON views of results, used by the CLI reports and by extractor traces.

#include <nlohmann/json.hpp>

#include "stepup/coloring.hpp"
#include "stepup/hypergraph.hpp"
#include "stepup/steiner.hpp"
#include "stepup/witness.hpp"

namespace stepup {

using Json = nlohmann::ordered_json;

Json to_json(const PropertyReport& r);
Json to_json(const CertificationResult& r);
Json to_json(const SteinerSystem& s);
Json to_json(const AlphaResult& r);

/// Vertices, deltas, rule tag, and the three colors the rule consulted.
Json to_json(const Edge& e, const PairColoring& phi);
Json to_json(const FiveSetViolation& v, const StepUpHypergraph& h);
Json to_json(const K5Result& r, const StepUpHypergraph& h);

Json to_json(const Anchors& a);
Json to_json(const MonotoneRun& run, const LayerStack& stack);
Json to_json(const EdgeWitness& w, const PairColoring& phi);

/// Layer sizes, beta targets, and whether each target was met.
Json layer_summary(const LayerStack& stack);

/// Reads the "vertices" array of an emitted edge / witness payload.
std::array<Vertex, 4> edge_vertices_from_json(const Json& j);

} // namespace stepup
