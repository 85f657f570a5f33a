#pragma once

#include "pathcert/bigint.hpp"
#include "pathcert/path.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pathcert {

/// Exact numbers of finite paths from a fixed source vertex to every block
/// vertex, stage by stage (computed lazily, downwards).
class ReachCounter {
public:
    ReachCounter(const StagedGraph& g, const VertexRef& source);

    /// Counts at every block vertex of `stage` (zeros above the source).
    const std::vector<BigInt>& at(std::int64_t stage);
    /// Count for any vertex, including ray vertices.
    BigInt count(const VertexRef& v);
    const VertexRef& source() const { return source_; }

private:
    const StagedGraph* g_;
    VertexRef source_;
    std::int64_t first_;
    std::vector<std::vector<BigInt>> rows_;
    std::vector<BigInt> zeros_;
};

struct Budget {
    /// Tail periods followed past the stage where the cylinder stops mattering.
    std::int64_t periods = 3;
    /// Extra edges allowed for the reachability pattern to settle.
    std::int64_t length = 64;
};

struct CountResult {
    enum class Kind { Exact, AtLeast, Infinite };
    Kind kind = Kind::Exact;
    BigInt count;
    std::string certificate;

    bool exact() const { return kind == Kind::Exact; }
    static const char* kind_name(Kind k);
};

/// One canonical splice y = q . shift(x, m) contributing `weight` members.
struct Splice {
    enum class Kind {
        Cylinder,   // q = alpha_1..alpha_j, x continues alpha
        Whole,      // q = alpha
        Deviation,  // q = alpha . q' . e with e != x_m, weight = number of q'
    };
    Kind kind = Kind::Whole;
    std::size_t m = 0;
    std::size_t j = 0;
    EdgeRef edge;
    BigInt weight;
};

using SpliceVisitor = std::function<void(const Splice&)>;

/// #([x] cap Z(alpha)). Throws NotPrincipal.
CountResult orbit_count(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, Budget budget = {});

/// orbit_count that reports every contributing splice.
CountResult walk_orbit(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha, Budget budget,
                       const SpliceVisitor& visit);

/// The members themselves (orbit_count must be Exact). Throws
/// NonExactCount when the count is not exact or exceeds `limit`.
std::vector<InfinitePath> orbit_members(const StagedGraph& g, const InfinitePath& x, const FinitePath& alpha,
                                        Budget budget, std::size_t limit);

}  // namespace pathcert
