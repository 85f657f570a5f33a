#include "pathcert/dsl.hpp"

#include "pathcert/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pathcert {

namespace {

struct Token {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    SourceLoc loc;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.loc = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::Int;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            t.kind = Token::Kind::Sym;
            t.text = "->";
            advance(2);
        } else if (std::string_view("{};,[]@:.+-").find(c) != std::string_view::npos) {
            t.kind = Token::Kind::Sym;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.loc = {line, col};
    out.push_back(end);
    return out;
}

struct EdgeToken {
    std::string id;
    std::int64_t stage = 0;
    std::int64_t depth = 0;
    SourceLoc loc;
};

struct TailDecl {
    TailTemplate::Kind kind = TailTemplate::Kind::Ray;
    std::string ray;
    std::vector<std::string> pattern;
    bool relative = false;  // stage given as n or n+k
    std::int64_t stage = 0;
    SourceLoc loc;
};

struct PathDecl {
    std::string name;
    std::vector<EdgeToken> prefix;
    TailDecl tail;
    SourceLoc loc;
};

struct FamilyDecl {
    std::string name;
    std::string descend_path;          // empty when given inline
    std::vector<std::string> descend_pattern;
    std::int64_t descend_from = 1;
    std::vector<std::vector<std::string>> pivots;
    TailDecl tail;
    std::int64_t n_min = 1;
    SourceLoc loc;
};

struct Parsed {
    GraphSpec spec;
    std::vector<PathDecl> paths;
    std::vector<FamilyDecl> families;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Parsed document() {
        Parsed out;
        out.spec = graph();
        while (!at_end()) {
            if (peek_is("path")) {
                out.paths.push_back(path());
            } else if (peek_is("family")) {
                out.families.push_back(family());
            } else {
                fail("expected 'path' or 'family'");
            }
        }
        return out;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool peek_is(std::string_view text) const {
        return peek().kind != Token::Kind::End && peek().kind != Token::Kind::Int && peek().text == text;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(msg + ", got " + got, t.loc.line, t.loc.column);
    }
    void expect(std::string_view text) {
        if (!peek_is(text)) fail("expected '" + std::string(text) + "'");
        ++pos_;
    }
    bool accept(std::string_view text) {
        if (!peek_is(text)) return false;
        ++pos_;
        return true;
    }
    std::string ident() {
        if (peek().kind != Token::Kind::Ident) fail("expected identifier");
        return toks_[pos_++].text;
    }
    std::int64_t integer() {
        bool neg = accept("-");
        if (peek().kind != Token::Kind::Int) fail("expected integer");
        const Token& t = toks_[pos_++];
        try {
            std::int64_t v = std::stoll(t.text);
            return neg ? -v : v;
        } catch (const std::out_of_range&) {
            throw SyntaxError("integer out of range", t.loc.line, t.loc.column);
        }
    }

    GraphSpec graph() {
        GraphSpec g;
        expect("graph");
        g.name = ident();
        expect("{");
        if (accept("base")) g.base = block_list();
        if (!peek_is("repeat")) fail("expected 'repeat'");
        ++pos_;
        g.repeat = block_list();
        while (peek_is("cross")) g.cross.push_back(cross());
        expect("}");
        return g;
    }

    std::vector<BlockSpec> block_list() {
        std::vector<BlockSpec> out;
        expect("{");
        do {
            out.push_back(block());
        } while (peek_is("block"));
        expect("}");
        return out;
    }

    BlockSpec block() {
        BlockSpec b;
        b.loc = peek().loc;
        expect("block");
        b.name = ident();
        expect("{");
        while (!accept("}")) {
            if (accept("vertex")) {
                b.vertices.push_back(ident());
                while (accept(",")) b.vertices.push_back(ident());
                expect(";");
            } else if (peek_is("edge")) {
                b.edges.push_back(edge_decl());
            } else if (peek_is("ray")) {
                RayDecl r;
                r.loc = peek().loc;
                ++pos_;
                r.id = ident();
                expect("attach");
                r.attach = ident();
                expect(";");
                b.rays.push_back(std::move(r));
            } else {
                fail("expected 'vertex', 'edge', 'ray' or '}'");
            }
        }
        return b;
    }

    EdgeDecl edge_decl() {
        EdgeDecl e;
        e.loc = peek().loc;
        expect("edge");
        e.id = ident();
        expect("range");
        e.range = ident();
        expect("source");
        e.source = ident();
        expect(";");
        return e;
    }

    CrossSpec cross() {
        CrossSpec c;
        c.loc = peek().loc;
        expect("cross");
        c.upper = ident();
        expect("->");
        c.lower = ident();
        expect("{");
        do {
            c.edges.push_back(edge_decl());
        } while (peek_is("edge"));
        expect("}");
        return c;
    }

    std::vector<std::string> id_list_in_brackets() {
        std::vector<std::string> out;
        expect("[");
        out.push_back(ident());
        while (accept(",")) out.push_back(ident());
        expect("]");
        return out;
    }

    // "n", "n+k", "n-k" or an integer.
    void stage_expr(TailDecl& t, bool allow_relative) {
        if (peek_is("n")) {
            if (!allow_relative) fail("stage 'n' is only meaningful inside a family");
            ++pos_;
            t.relative = true;
            t.stage = 0;
            if (accept("+")) {
                t.stage = integer();
            } else if (peek_is("-")) {
                t.stage = integer();
            }
            return;
        }
        t.stage = integer();
    }

    TailDecl tail(bool allow_relative) {
        TailDecl t;
        t.loc = peek().loc;
        if (accept("ray")) {
            t.kind = TailTemplate::Kind::Ray;
            t.ray = ident();
            expect("at");
            expect("stage");
            stage_expr(t, allow_relative);
        } else if (accept("descent")) {
            t.kind = TailTemplate::Kind::Descent;
            t.pattern = id_list_in_brackets();
            expect("from");
            expect("stage");
            stage_expr(t, allow_relative);
        } else {
            fail("expected 'ray' or 'descent'");
        }
        return t;
    }

    PathDecl path() {
        PathDecl p;
        p.loc = peek().loc;
        expect("path");
        p.name = ident();
        expect("{");
        expect("prefix");
        if (!peek_is(";")) {
            do {
                EdgeToken e;
                e.loc = peek().loc;
                e.id = ident();
                expect("@");
                e.stage = integer();
                if (accept(":")) e.depth = integer();
                p.prefix.push_back(std::move(e));
            } while (accept(","));
        }
        expect(";");
        expect("tail");
        p.tail = tail(false);
        expect(";");
        expect("}");
        return p;
    }

    FamilyDecl family() {
        FamilyDecl f;
        f.loc = peek().loc;
        expect("family");
        f.name = ident();
        expect("{");
        expect("descend");
        if (peek_is("[")) {
            f.descend_pattern = id_list_in_brackets();
            if (accept("from")) {
                expect("stage");
                f.descend_from = integer();
            }
        } else {
            f.descend_path = ident();
        }
        expect("to");
        expect("n");
        expect(";");
        expect("pivot");
        do {
            std::vector<std::string> chain{ident()};
            while (accept(".")) chain.push_back(ident());
            f.pivots.push_back(std::move(chain));
        } while (accept(","));
        expect(";");
        expect("tail");
        f.tail = tail(true);
        expect(";");
        expect("min");
        f.n_min = integer();
        expect(";");
        expect("}");
        return f;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string where(SourceLoc loc) { return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": "; }

StagedGraph build_graph(const GraphSpec& spec) {
    auto violations = validate_graph(spec);
    for (const auto& v : violations) {
        const std::string msg = where(v.loc) + v.message;
        switch (v.kind) {
            case Violation::Kind::Duplicate: throw DuplicateIdError(msg);
            case Violation::Kind::Resolution: throw ResolutionError(msg);
            case Violation::Kind::Structure: throw InvalidGraph(msg);
        }
    }
    return StagedGraph::from_spec(spec);
}

VertexRef descent_start(const StagedGraph& g, const std::string& first_id, std::int64_t stage, SourceLoc loc) {
    try {
        return g.range(g.resolve_edge(first_id, stage));
    } catch (const BoundsError& e) {
        throw ResolutionError(where(loc) + e.what());
    } catch (const ResolutionError& e) {
        throw ResolutionError(where(loc) + e.what());
    }
}

InfinitePath resolve_path(const StagedGraph& g, const PathDecl& d) {
    try {
        std::vector<EdgeRef> edges;
        for (const auto& t : d.prefix) edges.push_back(g.resolve_edge(t.id, t.stage, t.depth));
        TailSpec tail;
        VertexRef tail_start;
        if (d.tail.kind == TailTemplate::Kind::Ray) {
            if (d.tail.stage < g.first_stage()) throw ResolutionError("ray stage out of range");
            const BlockTemplate& b = g.block(d.tail.stage);
            const std::int32_t r = b.ray_index(d.tail.ray);
            if (r < 0) throw ResolutionError("unknown ray '" + d.tail.ray + "'");
            tail = RayTail{d.tail.stage, r, 0};
            tail_start = VertexRef::block(d.tail.stage, b.rays[r].attach);
        } else {
            tail_start = descent_start(g, d.tail.pattern.front(), d.tail.stage, d.tail.loc);
            tail = resolve_descent(g, tail_start, d.tail.pattern);
        }
        VertexRef anchor = edges.empty() ? tail_start : g.range(edges.front());
        return InfinitePath::make(g, make_finite_path(g, anchor, std::move(edges)), std::move(tail));
    } catch (const SyntaxError&) {
        throw;
    } catch (const InputError& e) {
        throw ResolutionError(where(d.loc) + "path " + d.name + ": " + e.what());
    }
}

}  // namespace

const InfinitePath& Document::path(std::string_view name) const {
    for (const auto& p : paths) {
        if (p.name == name) return p.path;
    }
    throw ResolutionError("no path named '" + std::string(name) + "'");
}

const PathFamily& Document::family(std::string_view name) const {
    for (const auto& f : families) {
        if (f.name == name) return f;
    }
    throw ResolutionError("no family named '" + std::string(name) + "'");
}

GraphSpec parse_graph_spec(std::string_view text) { return Parser(text).document().spec; }

StagedGraph parse_graph_dsl(std::string_view text) { return build_graph(parse_graph_spec(text)); }

Document parse_document(std::string_view text) {
    Parsed parsed = Parser(text).document();
    Document doc{build_graph(parsed.spec), {}, {}};
    const StagedGraph& g = doc.graph;
    for (const auto& d : parsed.paths) {
        for (const auto& p : doc.paths) {
            if (p.name == d.name) throw DuplicateIdError(where(d.loc) + "duplicate path name '" + d.name + "'");
        }
        doc.paths.push_back({d.name, resolve_path(g, d)});
    }
    for (const auto& d : parsed.families) {
        for (const auto& f : doc.families) {
            if (f.name == d.name) throw DuplicateIdError(where(d.loc) + "duplicate family name '" + d.name + "'");
        }
        PathFamily F;
        F.name = d.name;
        F.n_min = d.n_min;
        try {
            if (!d.descend_path.empty()) {
                F.descent = doc.path(d.descend_path);
            } else {
                VertexRef start = descent_start(g, d.descend_pattern.front(), d.descend_from, d.loc);
                F.descent = InfinitePath::make(g, FinitePath{start, {}}, resolve_descent(g, start, d.descend_pattern));
            }
            if (!F.descent.descent_tail()) throw ResolutionError("family descent must be a periodic descent");
            TailTemplate tail;
            tail.kind = d.tail.kind;
            tail.ray = d.tail.ray;
            tail.pattern = d.tail.pattern;
            if (!d.tail.relative) throw ResolutionError("family tail stage must be given relative to n");
            tail.stage_offset = d.tail.stage;
            for (const auto& chain : d.pivots) F.pivots.push_back(PivotRule{0, chain, tail});
            for (std::int64_t n = F.n_min; n < F.n_min + F.n_period(g); ++n) materialize(g, F, n);
        } catch (const SyntaxError&) {
            throw;
        } catch (const InputError& e) {
            throw ResolutionError(where(d.loc) + "family " + d.name + ": " + e.what());
        }
        doc.families.push_back(std::move(F));
    }
    return doc;
}

std::string render(const GraphSpec& spec) {
    std::ostringstream os;
    auto blocks = [&](const char* section, const std::vector<BlockSpec>& list) {
        os << "  " << section << " {\n";
        for (const auto& b : list) {
            os << "    block " << b.name << " {\n";
            if (!b.vertices.empty()) {
                os << "      vertex ";
                for (std::size_t i = 0; i < b.vertices.size(); ++i) os << (i ? ", " : "") << b.vertices[i];
                os << ";\n";
            }
            for (const auto& e : b.edges) os << "      edge " << e.id << " range " << e.range << " source " << e.source << ";\n";
            for (const auto& r : b.rays) os << "      ray " << r.id << " attach " << r.attach << ";\n";
            os << "    }\n";
        }
        os << "  }\n";
    };
    os << "graph " << spec.name << " {\n";
    if (!spec.base.empty()) blocks("base", spec.base);
    blocks("repeat", spec.repeat);
    for (const auto& c : spec.cross) {
        os << "  cross " << c.upper << " -> " << c.lower << " {\n";
        for (const auto& e : c.edges) os << "    edge " << e.id << " range " << e.range << " source " << e.source << ";\n";
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace pathcert
