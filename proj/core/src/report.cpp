#include "stepup/report.hpp"

namespace stepup {

namespace {

Json deltas_json(std::span<const BitIndex> d) {
    Json out = Json::array();
    for (auto x : d) out.push_back(static_cast<int>(x));
    return out;
}

Json point_json(const AnchorPoint& p) {
    return Json{{"position", p.position}, {"layer", p.layer}, {"delta", static_cast<int>(p.delta)}};
}

} // namespace

Json to_json(const PropertyReport& r) {
    Json j{{"pass", r.pass}};
    if (!r.pass) {
        j["failed_property"] = r.failed_property;
        j["detail"] = r.detail;
    }
    return j;
}

Json to_json(const CertificationResult& r) {
    Json j{{"verdict", to_string(r.verdict)}, {"checked", r.checked}, {"total", r.total}};
    j["counterexample"] = r.counterexample ? Json(*r.counterexample) : Json(nullptr);
    return j;
}

Json to_json(const SteinerSystem& s) {
    return Json{{"n", s.n}, {"count", s.triples.size()}, {"pair_disjoint", is_pair_disjoint(s)},
                {"triples", s.triples}};
}

Json to_json(const AlphaResult& r) {
    return Json{{"alpha", r.alpha}, {"witness", r.witness}, {"nodes", r.nodes}};
}

Json to_json(const Edge& e, const PairColoring& phi) {
    const int d1 = e.deltas[0], d2 = e.deltas[1], d3 = e.deltas[2];
    return Json{{"vertices", e.vertices},
                {"deltas", deltas_json(e.deltas)},
                {"rule", to_string(e.rule)},
                {"colors",
                 {{"d1d2", to_string(phi.color(d1, d2))},
                  {"d2d3", to_string(phi.color(d2, d3))},
                  {"d1d3", to_string(phi.color(d1, d3))}}}};
}

Json to_json(const FiveSetViolation& v, const StepUpHypergraph& h) {
    Json subsets = Json::array();
    for (int skip = 4; skip >= 0; --skip) {
        std::array<Vertex, 4> s{};
        for (int i = 0, k = 0; i < 5; ++i)
            if (i != skip) s[k++] = v.vertices[i];
        subsets.push_back(to_json(describe_4set(h, s), h.coloring()));
    }
    return Json{{"vertices", v.vertices}, {"note", v.note}, {"subsets", subsets}};
}

Json to_json(const K5Result& r, const StepUpHypergraph& h) {
    Json j{{"k5_free", !r.violation && !r.cancelled},
           {"vertices", r.vertices},
           {"five_sets", r.five_sets},
           {"shards", r.shards},
           {"cancelled", r.cancelled}};
    j["violation"] = r.violation ? to_json(*r.violation, h) : Json(nullptr);
    return j;
}

Json to_json(const Anchors& a) {
    return Json{{"a", point_json(a.a)},   {"b1", point_json(a.b1)}, {"b2", point_json(a.b2)},
                {"b3", point_json(a.b3)}, {"pigeonhole", {a.pigeonhole.first, a.pigeonhole.second}},
                {"B1", point_json(a.B1)}, {"B3", point_json(a.B3)}, {"c", point_json(a.c)},
                {"d", point_json(a.d)},   {"e", point_json(a.e)},   {"f", point_json(a.f)}};
}

Json to_json(const MonotoneRun& run, const LayerStack& stack) {
    Json values = Json::array();
    for (auto p : run.positions) values.push_back(static_cast<int>(stack.delta_at(p)));
    return Json{{"layer", run.layer},
                {"direction", to_string(run.direction)},
                {"positions", run.positions},
                {"deltas", values}};
}

Json to_json(const EdgeWitness& w, const PairColoring& phi) {
    Json j{{"branch", to_string(w.branch)}};
    if (w.edge.rule != EdgeRule::None) {
        j["edge"] = to_json(w.edge, phi);
        j["vertices"] = w.edge.vertices;
        j["q_indices"] = w.q_indices;
    }
    if (w.good_triple) j["good_triple"] = {w.good_triple->a, w.good_triple->b, w.good_triple->c};
    if (w.anchors) j["anchors"] = to_json(*w.anchors);
    if (!w.candidates.empty()) {
        Json cands = Json::array();
        for (const auto& c : w.candidates) {
            Json cj{{"label", c.label}, {"indices", c.indices}};
            if (c.skipped)
                cj["skipped"] = true;
            else
                cj["rule"] = to_string(c.rule), cj["is_edge"] = c.is_edge;
            cands.push_back(std::move(cj));
        }
        j["candidates"] = std::move(cands);
        j["candidate_index"] = w.candidate_index ? Json(*w.candidate_index) : Json(nullptr);
    }
    if (!w.layer_sizes.empty()) {
        j["layer_sizes"] = w.layer_sizes;
        j["beta"] = w.beta;
    }
    return j;
}

Json layer_summary(const LayerStack& stack) {
    Json layers = Json::array();
    for (std::size_t t = 0; t < stack.depth(); ++t) {
        const double target = stack.beta(t);
        const auto size = stack.layer(t).size();
        layers.push_back(Json{{"layer", t}, {"size", size}, {"beta", target},
                              {"meets_beta", static_cast<double>(size) >= target}});
    }
    return Json{{"vertices", stack.vertex_count()}, {"n", stack.run_length()}, {"layers", layers}};
}

std::array<Vertex, 4> edge_vertices_from_json(const Json& j) {
    const Json& v = j.contains("vertices") ? j.at("vertices") : j.at("edge").at("vertices");
    if (!v.is_array() || v.size() != 4)
        throw Error(ErrorCode::MalformedTuple, "expected a 4-element \"vertices\" array");
    return v.get<std::array<Vertex, 4>>();
}

} // namespace stepup
