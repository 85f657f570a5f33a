#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pathcert {

// ---------------------------------------------------------------------------
// References into the infinite graph
// ---------------------------------------------------------------------------

enum class VertexKind : std::uint8_t { Block = 0, Ray = 1 };
enum class EdgeKind : std::uint8_t { Within = 0, Cross = 1, Ray = 2 };

/// A vertex of the infinite graph. Repeat stages are numbered from 1; base
/// stages occupy 0, -1, ... (stage 1 - b is the first base stage).
///
/// `local` is a vertex index into the stage's block template (Block) or a ray
/// index (Ray). Ray vertices have depth >= 1; depth 0 is the attach vertex,
/// which is always represented as a Block reference.
struct VertexRef {
    std::int64_t stage = 0;
    VertexKind kind = VertexKind::Block;
    std::int32_t local = 0;
    std::int64_t depth = 0;

    static VertexRef block(std::int64_t stage, std::int32_t local) {
        return {stage, VertexKind::Block, local, 0};
    }
    static VertexRef ray(std::int64_t stage, std::int32_t ray, std::int64_t depth) {
        return {stage, VertexKind::Ray, ray, depth};
    }
    bool is_block() const { return kind == VertexKind::Block; }
    auto operator<=>(const VertexRef&) const = default;
};

/// An edge of the infinite graph.
///
/// Within(stage, i): template edge i of the stage's block.
/// Cross(stage, i): cross edge i between `stage` (range) and `stage + 1` (source).
/// Ray(stage, r, d): edge of ray r with range at depth d-1 and source at depth d.
struct EdgeRef {
    std::int64_t stage = 0;
    EdgeKind kind = EdgeKind::Within;
    std::int32_t index = 0;
    std::int64_t depth = 0;

    static EdgeRef within(std::int64_t stage, std::int32_t i) { return {stage, EdgeKind::Within, i, 0}; }
    static EdgeRef cross(std::int64_t stage, std::int32_t i) { return {stage, EdgeKind::Cross, i, 0}; }
    static EdgeRef ray(std::int64_t stage, std::int32_t r, std::int64_t d) { return {stage, EdgeKind::Ray, r, d}; }

    /// The same template edge moved by `delta` stages.
    EdgeRef shifted(std::int64_t delta) const { return {stage + delta, kind, index, depth}; }
    auto operator<=>(const EdgeRef&) const = default;
};

// ---------------------------------------------------------------------------
// Raw description (what the DSL produces, before validation)
// ---------------------------------------------------------------------------

struct SourceLoc {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct EdgeDecl {
    std::string id;
    std::string range;
    std::string source;
    SourceLoc loc;
    bool operator==(const EdgeDecl& o) const { return id == o.id && range == o.range && source == o.source; }
};

struct RayDecl {
    std::string id;
    std::string attach;
    SourceLoc loc;
    bool operator==(const RayDecl& o) const { return id == o.id && attach == o.attach; }
};

struct BlockSpec {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<EdgeDecl> edges;
    std::vector<RayDecl> rays;
    SourceLoc loc;
    bool operator==(const BlockSpec& o) const {
        return name == o.name && vertices == o.vertices && edges == o.edges && rays == o.rays;
    }
};

/// `cross upper -> lower`: edges with range in a stage of template `upper` and
/// source in the following stage, of template `lower`.
struct CrossSpec {
    std::string upper;
    std::string lower;
    std::vector<EdgeDecl> edges;
    SourceLoc loc;
    bool operator==(const CrossSpec& o) const {
        return upper == o.upper && lower == o.lower && edges == o.edges;
    }
};

struct GraphSpec {
    std::string name;
    std::vector<BlockSpec> base;
    std::vector<BlockSpec> repeat;
    std::vector<CrossSpec> cross;
    bool operator==(const GraphSpec&) const = default;
};

struct Violation {
    enum class Kind { Resolution, Duplicate, Structure };
    Kind kind = Kind::Structure;
    std::string message;
    SourceLoc loc;
};

/// Checks every structural invariant of a description; empty iff valid.
std::vector<Violation> validate_graph(const GraphSpec& spec);

// ---------------------------------------------------------------------------
// Compiled, validated graph
// ---------------------------------------------------------------------------

struct TemplateEdge {
    std::string id;
    std::int32_t range = 0;
    std::int32_t source = 0;
};

struct TemplateRay {
    std::string id;
    std::int32_t attach = 0;
};

struct BlockTemplate {
    std::string name;
    std::vector<std::string> vertices;
    std::vector<TemplateEdge> edges;
    std::vector<TemplateRay> rays;

    std::vector<std::vector<std::int32_t>> in_edges;   // by vertex: edges with that range
    std::vector<std::vector<std::int32_t>> out_edges;  // by vertex: edges with that source
    std::vector<std::vector<std::int32_t>> rays_at;    // by vertex: rays attached there
    std::vector<std::int32_t> topo;                    // range-before-source order (acyclic only)
    bool acyclic = true;

    std::int32_t vertex_index(std::string_view id) const;
    std::int32_t edge_index(std::string_view id) const;
    std::int32_t ray_index(std::string_view id) const;
};

struct CrossTemplate {
    std::int32_t upper = -1;
    std::int32_t lower = -1;
    std::vector<TemplateEdge> edges;                   // range in upper, source in lower
    std::vector<std::vector<std::int32_t>> in_edges;   // by upper vertex
    std::vector<std::vector<std::int32_t>> out_edges;  // by lower vertex

    std::int32_t edge_index(std::string_view id) const;
};

struct PrincipalityReport {
    bool principal = true;
    std::string block;            // template holding the cycle
    std::vector<EdgeRef> cycle;   // concrete cycle at the first stage using that template
};

class StagedGraph {
public:
    /// Validates and compiles; throws InvalidGraph listing every violation.
    static StagedGraph from_spec(GraphSpec spec);

    const GraphSpec& spec() const { return data_->spec; }
    const std::string& name() const { return data_->spec.name; }

    std::int32_t base_count() const { return static_cast<std::int32_t>(data_->spec.base.size()); }
    std::int32_t period() const { return static_cast<std::int32_t>(data_->spec.repeat.size()); }
    std::int64_t first_stage() const { return 1 - base_count(); }
    std::int32_t template_count() const { return static_cast<std::int32_t>(data_->templates.size()); }

    /// Index into templates(): base blocks first, then repeat blocks.
    std::int32_t template_index(std::int64_t stage) const;
    const BlockTemplate& templ(std::int32_t index) const { return data_->templates[index]; }
    const BlockTemplate& block(std::int64_t stage) const { return templ(template_index(stage)); }
    /// Cross edges between `stage` and `stage + 1`, or nullptr when there are none.
    const CrossTemplate* cross(std::int64_t stage) const;

    bool contains(const VertexRef& v) const;
    bool contains(const EdgeRef& e) const;
    VertexRef range(const EdgeRef& e) const;
    VertexRef source(const EdgeRef& e) const;

    /// Edges with range v (finite: row-finiteness). Throws UnknownVertex.
    std::vector<EdgeRef> incoming_edges(const VertexRef& v) const;
    /// Edges with source v. Throws UnknownVertex.
    std::vector<EdgeRef> outgoing_edges(const VertexRef& v) const;

    /// Resolves `id` at `stage`: within edge, then cross edge, then ray edge
    /// (ray edges need depth >= 1). Throws ResolutionError.
    EdgeRef resolve_edge(std::string_view id, std::int64_t stage, std::int64_t depth = 0) const;
    VertexRef resolve_vertex(std::string_view id, std::int64_t stage) const;

    std::string label(const VertexRef& v) const;
    std::string label(const EdgeRef& e) const;
    /// Template id of an edge (no stage decoration).
    const std::string& edge_id(const EdgeRef& e) const;

    PrincipalityReport principality() const { return data_->principality; }
    bool periodic_stage(std::int64_t stage) const { return stage >= 1; }

private:
    struct Data {
        GraphSpec spec;
        std::vector<BlockTemplate> templates;
        std::vector<CrossTemplate> crosses;
        std::vector<std::int32_t> cross_lookup;  // templates^2 -> index into crosses or -1
        PrincipalityReport principality;
    };
    std::shared_ptr<const Data> data_;
};

/// Principal iff the graph has no directed cycle; cycles can only live inside
/// one block template because cross and ray edges change stage or depth.
PrincipalityReport is_principal(const StagedGraph& g);

/// Convenience wrapper equal to g.incoming_edges(v).
std::vector<EdgeRef> incoming_edges(const StagedGraph& g, const VertexRef& v);

// ---------------------------------------------------------------------------
// Finite slices
// ---------------------------------------------------------------------------

struct FiniteGraphSlice {
    std::int64_t min_stage = 0;
    std::int64_t max_stage = 0;   // inclusive
    std::int64_t max_depth = 0;   // inclusive ray depth
    std::vector<VertexRef> vertices;  // sorted
    std::vector<EdgeRef> edges;       // sorted
    std::map<VertexRef, std::vector<EdgeRef>> incoming;  // range -> edges
    std::map<EdgeRef, VertexRef> source_of;

    bool contains(const VertexRef& v) const;
    bool contains(const EdgeRef& e) const;
};

/// The first H stages (base stages first) with rays cut at depth D.
/// Throws BoundsError when H < 1 or D < 1.
FiniteGraphSlice realize_slice(const StagedGraph& g, std::int64_t H, std::int64_t D);

}  // namespace pathcert
