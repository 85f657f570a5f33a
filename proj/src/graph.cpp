#include "pathcert/graph.hpp"

#include "pathcert/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pathcert {

namespace {

template <typename Seq, typename Key>
std::int32_t find_index(const Seq& seq, std::string_view id, Key key) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (key(seq[i]) == id) return static_cast<std::int32_t>(i);
    }
    return -1;
}

Violation violation(Violation::Kind kind, std::string msg, SourceLoc loc) {
    return Violation{kind, std::move(msg), loc};
}

void validate_block(const BlockSpec& b, std::vector<Violation>& out) {
    std::set<std::string> verts;
    for (const auto& v : b.vertices) {
        if (!verts.insert(v).second) {
            out.push_back(violation(Violation::Kind::Duplicate,
                                    "block " + b.name + ": duplicate vertex '" + v + "'", b.loc));
        }
    }
    std::set<std::string> ids;
    for (const auto& e : b.edges) {
        if (!ids.insert(e.id).second) {
            out.push_back(violation(Violation::Kind::Duplicate,
                                    "block " + b.name + ": duplicate edge id '" + e.id + "'", e.loc));
        }
        for (const auto* end : {&e.range, &e.source}) {
            if (!verts.count(*end)) {
                out.push_back(violation(Violation::Kind::Resolution,
                                        "block " + b.name + ", edge " + e.id + ": unknown vertex '" + *end + "'",
                                        e.loc));
            }
        }
    }
    for (const auto& r : b.rays) {
        if (!ids.insert(r.id).second) {
            out.push_back(violation(Violation::Kind::Duplicate,
                                    "block " + b.name + ": duplicate id '" + r.id + "'", r.loc));
        }
        if (!verts.count(r.attach)) {
            out.push_back(violation(Violation::Kind::Resolution,
                                    "block " + b.name + ", ray " + r.id + ": unknown vertex '" + r.attach + "'",
                                    r.loc));
        }
    }
}

}  // namespace

std::int32_t BlockTemplate::vertex_index(std::string_view id) const {
    return find_index(vertices, id, [](const std::string& s) -> const std::string& { return s; });
}
std::int32_t BlockTemplate::edge_index(std::string_view id) const {
    return find_index(edges, id, [](const TemplateEdge& e) -> const std::string& { return e.id; });
}
std::int32_t BlockTemplate::ray_index(std::string_view id) const {
    return find_index(rays, id, [](const TemplateRay& r) -> const std::string& { return r.id; });
}
std::int32_t CrossTemplate::edge_index(std::string_view id) const {
    return find_index(edges, id, [](const TemplateEdge& e) -> const std::string& { return e.id; });
}

std::vector<Violation> validate_graph(const GraphSpec& spec) {
    std::vector<Violation> out;
    if (spec.repeat.empty()) {
        out.push_back(violation(Violation::Kind::Structure, "graph " + spec.name + ": repeat section is empty", {}));
    }
    std::map<std::string, const BlockSpec*> blocks;
    for (const auto* section : {&spec.base, &spec.repeat}) {
        for (const auto& b : *section) {
            if (!blocks.emplace(b.name, &b).second) {
                out.push_back(violation(Violation::Kind::Duplicate, "duplicate block name '" + b.name + "'", b.loc));
            }
            validate_block(b, out);
        }
    }
    std::map<std::pair<std::string, std::string>, std::set<std::string>> cross_ids;
    for (const auto& c : spec.cross) {
        auto up = blocks.find(c.upper);
        auto lo = blocks.find(c.lower);
        if (up == blocks.end()) {
            out.push_back(violation(Violation::Kind::Resolution, "cross: unknown block '" + c.upper + "'", c.loc));
        }
        if (lo == blocks.end()) {
            out.push_back(violation(Violation::Kind::Resolution, "cross: unknown block '" + c.lower + "'", c.loc));
        }
        auto& ids = cross_ids[{c.upper, c.lower}];
        for (const auto& e : c.edges) {
            const std::string where = "cross " + c.upper + " -> " + c.lower + ", edge " + e.id;
            if (!ids.insert(e.id).second) {
                out.push_back(violation(Violation::Kind::Duplicate, where + ": duplicate edge id", e.loc));
            }
            if (up != blocks.end()) {
                const BlockSpec& b = *up->second;
                if (std::find(b.vertices.begin(), b.vertices.end(), e.range) == b.vertices.end()) {
                    out.push_back(violation(Violation::Kind::Resolution,
                                            where + ": unknown vertex '" + e.range + "'", e.loc));
                }
                auto clash = [&](const auto& list) {
                    return std::any_of(list.begin(), list.end(), [&](const auto& d) { return d.id == e.id; });
                };
                if (clash(b.edges) || clash(b.rays)) {
                    out.push_back(violation(Violation::Kind::Duplicate,
                                            where + ": id also used inside block " + b.name, e.loc));
                }
            }
            if (lo != blocks.end()) {
                const BlockSpec& b = *lo->second;
                if (std::find(b.vertices.begin(), b.vertices.end(), e.source) == b.vertices.end()) {
                    out.push_back(violation(Violation::Kind::Resolution,
                                            where + ": unknown vertex '" + e.source + "'", e.loc));
                }
            }
        }
    }
    return out;
}

namespace {

BlockTemplate compile_block(const BlockSpec& b) {
    BlockTemplate t;
    t.name = b.name;
    t.vertices = b.vertices;
    for (const auto& e : b.edges) {
        t.edges.push_back({e.id, t.vertex_index(e.range), t.vertex_index(e.source)});
    }
    for (const auto& r : b.rays) t.rays.push_back({r.id, t.vertex_index(r.attach)});
    const std::size_t n = t.vertices.size();
    t.in_edges.assign(n, {});
    t.out_edges.assign(n, {});
    t.rays_at.assign(n, {});
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        t.in_edges[t.edges[i].range].push_back(static_cast<std::int32_t>(i));
        t.out_edges[t.edges[i].source].push_back(static_cast<std::int32_t>(i));
    }
    for (std::size_t i = 0; i < t.rays.size(); ++i) t.rays_at[t.rays[i].attach].push_back(static_cast<std::int32_t>(i));

    // Kahn's algorithm: an edge orders its range before its source.
    std::vector<int> pending(n, 0);
    for (const auto& e : t.edges) ++pending[e.source];
    std::vector<std::int32_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (pending[v] == 0) ready.push_back(static_cast<std::int32_t>(v));
    }
    while (!ready.empty()) {
        std::int32_t v = ready.front();
        ready.erase(ready.begin());
        t.topo.push_back(v);
        for (std::int32_t ei : t.in_edges[v]) {
            if (--pending[t.edges[ei].source] == 0) ready.push_back(t.edges[ei].source);
        }
    }
    t.acyclic = t.topo.size() == n;
    return t;
}

// Depth-first search for a directed cycle; returns template edge indices in
// path order (each edge's source is the next edge's range).
std::vector<std::int32_t> find_cycle(const BlockTemplate& t) {
    const std::size_t n = t.vertices.size();
    std::vector<int> colour(n, 0);
    std::vector<std::int32_t> via(n, -1);  // edge used to enter a vertex
    std::vector<std::int32_t> cycle;
    // Walk along path direction: from vertex v (a range), take edges e with
    // range v and move to s(e).
    std::function<bool(std::int32_t)> dfs = [&](std::int32_t v) {
        colour[v] = 1;
        for (std::int32_t ei : t.in_edges[v]) {
            std::int32_t w = t.edges[ei].source;
            if (colour[w] == 1) {
                std::vector<std::int32_t> rev{ei};
                for (std::int32_t u = v; u != w; u = t.edges[via[u]].range) rev.push_back(via[u]);
                cycle.assign(rev.rbegin(), rev.rend());
                return true;
            }
            if (colour[w] == 0) {
                via[w] = ei;
                if (dfs(w)) return true;
            }
        }
        colour[v] = 2;
        return false;
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (colour[v] == 0 && dfs(static_cast<std::int32_t>(v))) break;
    }
    return cycle;
}

}  // namespace

StagedGraph StagedGraph::from_spec(GraphSpec spec) {
    auto violations = validate_graph(spec);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "invalid graph " << spec.name << ":";
        for (const auto& v : violations) os << "\n  " << v.message;
        throw InvalidGraph(os.str());
    }
    auto data = std::make_shared<Data>();
    data->spec = std::move(spec);
    std::map<std::string, std::int32_t> index;
    for (const auto* section : {&data->spec.base, &data->spec.repeat}) {
        for (const auto& b : *section) {
            index[b.name] = static_cast<std::int32_t>(data->templates.size());
            data->templates.push_back(compile_block(b));
        }
    }
    const std::size_t T = data->templates.size();
    data->cross_lookup.assign(T * T, -1);
    for (const auto& c : data->spec.cross) {
        std::int32_t up = index[c.upper];
        std::int32_t lo = index[c.lower];
        std::int32_t& slot = data->cross_lookup[up * T + lo];
        if (slot < 0) {
            slot = static_cast<std::int32_t>(data->crosses.size());
            CrossTemplate ct;
            ct.upper = up;
            ct.lower = lo;
            ct.in_edges.assign(data->templates[up].vertices.size(), {});
            ct.out_edges.assign(data->templates[lo].vertices.size(), {});
            data->crosses.push_back(std::move(ct));
        }
        CrossTemplate& ct = data->crosses[slot];
        for (const auto& e : c.edges) {
            auto i = static_cast<std::int32_t>(ct.edges.size());
            TemplateEdge te{e.id, data->templates[up].vertex_index(e.range), data->templates[lo].vertex_index(e.source)};
            ct.edges.push_back(te);
            ct.in_edges[te.range].push_back(i);
            ct.out_edges[te.source].push_back(i);
        }
    }

    StagedGraph g;
    g.data_ = data;
    for (std::int32_t ti = 0; ti < static_cast<std::int32_t>(T); ++ti) {
        const BlockTemplate& t = data->templates[ti];
        if (t.acyclic) continue;
        // First stage using this template.
        std::int64_t stage = ti < g.base_count() ? ti + g.first_stage() : ti - g.base_count() + 1;
        data->principality.principal = false;
        data->principality.block = t.name;
        for (std::int32_t ei : find_cycle(t)) data->principality.cycle.push_back(EdgeRef::within(stage, ei));
        break;
    }
    return g;
}

std::int32_t StagedGraph::template_index(std::int64_t stage) const {
    if (stage < first_stage()) throw BoundsError("stage " + std::to_string(stage) + " precedes the first stage");
    if (stage <= 0) return static_cast<std::int32_t>(stage - first_stage());
    return base_count() + static_cast<std::int32_t>((stage - 1) % period());
}

const CrossTemplate* StagedGraph::cross(std::int64_t stage) const {
    const std::size_t T = data_->templates.size();
    std::int32_t slot = data_->cross_lookup[template_index(stage) * T + template_index(stage + 1)];
    return slot < 0 ? nullptr : &data_->crosses[slot];
}

bool StagedGraph::contains(const VertexRef& v) const {
    if (v.stage < first_stage() || v.local < 0) return false;
    const BlockTemplate& t = block(v.stage);
    if (v.kind == VertexKind::Block) return v.depth == 0 && v.local < static_cast<std::int32_t>(t.vertices.size());
    return v.depth >= 1 && v.local < static_cast<std::int32_t>(t.rays.size());
}

bool StagedGraph::contains(const EdgeRef& e) const {
    if (e.stage < first_stage() || e.index < 0) return false;
    switch (e.kind) {
        case EdgeKind::Within:
            return e.depth == 0 && e.index < static_cast<std::int32_t>(block(e.stage).edges.size());
        case EdgeKind::Cross: {
            const CrossTemplate* c = cross(e.stage);
            return e.depth == 0 && c && e.index < static_cast<std::int32_t>(c->edges.size());
        }
        case EdgeKind::Ray:
            return e.depth >= 1 && e.index < static_cast<std::int32_t>(block(e.stage).rays.size());
    }
    return false;
}

VertexRef StagedGraph::range(const EdgeRef& e) const {
    switch (e.kind) {
        case EdgeKind::Within:
            return VertexRef::block(e.stage, block(e.stage).edges[e.index].range);
        case EdgeKind::Cross:
            return VertexRef::block(e.stage, cross(e.stage)->edges[e.index].range);
        case EdgeKind::Ray:
            if (e.depth == 1) return VertexRef::block(e.stage, block(e.stage).rays[e.index].attach);
            return VertexRef::ray(e.stage, e.index, e.depth - 1);
    }
    return {};
}

VertexRef StagedGraph::source(const EdgeRef& e) const {
    switch (e.kind) {
        case EdgeKind::Within:
            return VertexRef::block(e.stage, block(e.stage).edges[e.index].source);
        case EdgeKind::Cross:
            return VertexRef::block(e.stage + 1, cross(e.stage)->edges[e.index].source);
        case EdgeKind::Ray:
            return VertexRef::ray(e.stage, e.index, e.depth);
    }
    return {};
}

std::vector<EdgeRef> StagedGraph::incoming_edges(const VertexRef& v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex " + std::to_string(v.stage) + "/" + std::to_string(v.local));
    std::vector<EdgeRef> out;
    if (v.kind == VertexKind::Ray) {
        out.push_back(EdgeRef::ray(v.stage, v.local, v.depth + 1));
        return out;
    }
    const BlockTemplate& t = block(v.stage);
    for (std::int32_t ei : t.in_edges[v.local]) out.push_back(EdgeRef::within(v.stage, ei));
    if (const CrossTemplate* c = cross(v.stage)) {
        for (std::int32_t ei : c->in_edges[v.local]) out.push_back(EdgeRef::cross(v.stage, ei));
    }
    for (std::int32_t r : t.rays_at[v.local]) out.push_back(EdgeRef::ray(v.stage, r, 1));
    return out;
}

std::vector<EdgeRef> StagedGraph::outgoing_edges(const VertexRef& v) const {
    if (!contains(v)) throw UnknownVertex("unknown vertex " + std::to_string(v.stage) + "/" + std::to_string(v.local));
    std::vector<EdgeRef> out;
    if (v.kind == VertexKind::Ray) {
        out.push_back(EdgeRef::ray(v.stage, v.local, v.depth));
        return out;
    }
    for (std::int32_t ei : block(v.stage).out_edges[v.local]) out.push_back(EdgeRef::within(v.stage, ei));
    if (v.stage > first_stage()) {
        if (const CrossTemplate* c = cross(v.stage - 1)) {
            for (std::int32_t ei : c->out_edges[v.local]) out.push_back(EdgeRef::cross(v.stage - 1, ei));
        }
    }
    return out;
}

EdgeRef StagedGraph::resolve_edge(std::string_view id, std::int64_t stage, std::int64_t depth) const {
    if (stage < first_stage()) {
        throw ResolutionError("edge '" + std::string(id) + "': stage " + std::to_string(stage) + " out of range");
    }
    const BlockTemplate& t = block(stage);
    if (depth > 0) {
        std::int32_t r = t.ray_index(id);
        if (r < 0) throw ResolutionError("unknown ray '" + std::string(id) + "' at stage " + std::to_string(stage));
        return EdgeRef::ray(stage, r, depth);
    }
    if (std::int32_t i = t.edge_index(id); i >= 0) return EdgeRef::within(stage, i);
    if (const CrossTemplate* c = cross(stage)) {
        if (std::int32_t i = c->edge_index(id); i >= 0) return EdgeRef::cross(stage, i);
    }
    throw ResolutionError("unknown edge '" + std::string(id) + "' at stage " + std::to_string(stage));
}

VertexRef StagedGraph::resolve_vertex(std::string_view id, std::int64_t stage) const {
    if (stage < first_stage()) {
        throw ResolutionError("vertex '" + std::string(id) + "': stage " + std::to_string(stage) + " out of range");
    }
    std::int32_t v = block(stage).vertex_index(id);
    if (v < 0) throw ResolutionError("unknown vertex '" + std::string(id) + "' at stage " + std::to_string(stage));
    return VertexRef::block(stage, v);
}

std::string StagedGraph::label(const VertexRef& v) const {
    const BlockTemplate& t = block(v.stage);
    if (v.kind == VertexKind::Block) return t.vertices[v.local] + "@" + std::to_string(v.stage);
    return t.rays[v.local].id + "@" + std::to_string(v.stage) + ":" + std::to_string(v.depth);
}

const std::string& StagedGraph::edge_id(const EdgeRef& e) const {
    switch (e.kind) {
        case EdgeKind::Within: return block(e.stage).edges[e.index].id;
        case EdgeKind::Cross: return cross(e.stage)->edges[e.index].id;
        case EdgeKind::Ray: break;
    }
    return block(e.stage).rays[e.index].id;
}

std::string StagedGraph::label(const EdgeRef& e) const {
    std::string s = edge_id(e) + "@" + std::to_string(e.stage);
    if (e.kind == EdgeKind::Ray) s += ":" + std::to_string(e.depth);
    return s;
}

PrincipalityReport is_principal(const StagedGraph& g) { return g.principality(); }

std::vector<EdgeRef> incoming_edges(const StagedGraph& g, const VertexRef& v) { return g.incoming_edges(v); }

bool FiniteGraphSlice::contains(const VertexRef& v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}
bool FiniteGraphSlice::contains(const EdgeRef& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
}

FiniteGraphSlice realize_slice(const StagedGraph& g, std::int64_t H, std::int64_t D) {
    if (H < 1) throw BoundsError("slice needs at least one stage");
    if (D < 1) throw BoundsError("slice ray depth must be at least 1");
    FiniteGraphSlice s;
    s.min_stage = g.first_stage();
    s.max_stage = g.first_stage() + H - 1;
    s.max_depth = D;
    for (std::int64_t st = s.min_stage; st <= s.max_stage; ++st) {
        const BlockTemplate& t = g.block(st);
        for (std::size_t v = 0; v < t.vertices.size(); ++v) s.vertices.push_back(VertexRef::block(st, static_cast<std::int32_t>(v)));
        for (std::size_t r = 0; r < t.rays.size(); ++r) {
            for (std::int64_t d = 1; d <= D; ++d) {
                s.vertices.push_back(VertexRef::ray(st, static_cast<std::int32_t>(r), d));
                s.edges.push_back(EdgeRef::ray(st, static_cast<std::int32_t>(r), d));
            }
        }
        for (std::size_t e = 0; e < t.edges.size(); ++e) s.edges.push_back(EdgeRef::within(st, static_cast<std::int32_t>(e)));
        if (st < s.max_stage) {
            if (const CrossTemplate* c = g.cross(st)) {
                for (std::size_t e = 0; e < c->edges.size(); ++e) s.edges.push_back(EdgeRef::cross(st, static_cast<std::int32_t>(e)));
            }
        }
    }
    std::sort(s.vertices.begin(), s.vertices.end());
    std::sort(s.edges.begin(), s.edges.end());
    for (const EdgeRef& e : s.edges) {
        s.incoming[g.range(e)].push_back(e);
        s.source_of[e] = g.source(e);
    }
    return s;
}

}  // namespace pathcert
