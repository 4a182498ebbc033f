#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpa/graph.hpp"

namespace lpa {

namespace {

struct Token {
    enum class Kind { ident, number, punct, end };
    Kind kind = Kind::end;
    std::string text;
    long long value = 0;
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                bump();
            tok_.kind = Token::Kind::ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            size_t start = pos_;
            if (c == '-') bump();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                bump();
            tok_.kind = Token::Kind::number;
            tok_.text = text_.substr(start, pos_ - start);
            try {
                tok_.value = std::stoll(tok_.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", tok_.line, tok_.col);
            }
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            bump();
            bump();
            tok_.kind = Token::Kind::punct;
            tok_.text = "->";
            return;
        }
        static const std::string punct = ";:{},*+";
        if (punct.find(c) != std::string::npos) {
            bump();
            tok_.kind = Token::Kind::punct;
            tok_.text = std::string(1, c);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class GraphParser {
public:
    explicit GraphParser(const std::string& text) : lex_(text) {}

    GraphSpec parse() {
        bool saw_finite = false;
        bool saw_ladder = false;
        while (lex_.peek().kind != Token::Kind::end) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Kind::ident)
                throw ParseError("expected a statement", t.line, t.col);
            if (t.text == "ladder") {
                if (saw_ladder)
                    throw ParseError("only one ladder block is allowed", t.line, t.col);
                if (saw_finite)
                    throw ParseError("ladder block cannot be mixed with finite statements",
                                     t.line, t.col);
                saw_ladder = true;
                parse_ladder();
            } else if (t.text == "vertex" || t.text == "edge" || t.text == "infedges") {
                if (saw_ladder)
                    throw ParseError("finite statements cannot be mixed with a ladder block",
                                     t.line, t.col);
                saw_finite = true;
                parse_finite_stmt();
            } else {
                throw ParseError("unknown statement '" + t.text + "'", t.line, t.col);
            }
        }
        if (saw_ladder) {
            validate_ladder();
            return ladder_;
        }
        if (!saw_finite) throw ParseError("empty graph description", 1, 1);
        return build_finite();
    }

private:
    Token expect_ident(const char* what) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::ident)
            throw ParseError(std::string("expected ") + what, t.line, t.col);
        return t;
    }

    Token expect_keyword(const std::string& kw) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::ident || t.text != kw)
            throw ParseError("expected '" + kw + "'", t.line, t.col);
        return t;
    }

    Token expect_punct(const std::string& p) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::punct || t.text != p)
            throw ParseError("expected '" + p + "'", t.line, t.col);
        return t;
    }

    long long expect_number() {
        Token t = lex_.next();
        if (t.kind != Token::Kind::number)
            throw ParseError("expected an integer", t.line, t.col);
        return t.value;
    }

    long long expect_positive(const char* what) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::number || t.value <= 0)
            throw ParseError(std::string(what) + " must be a positive integer", t.line, t.col);
        return t.value;
    }

    void parse_finite_stmt() {
        Token head = lex_.next();
        if (head.text == "vertex") {
            Token id = expect_ident("a vertex id");
            expect_punct(";");
            declare_id(id);
            vertices_.push_back({id.text, false});
        } else if (head.text == "edge") {
            Token id = expect_ident("an edge id");
            expect_punct(":");
            Token src = expect_ident("a source vertex id");
            expect_punct("->");
            Token dst = expect_ident("a target vertex id");
            expect_punct(";");
            declare_id(id);
            edges_.push_back({id.text, src.text, dst.text, false});
            endpoint_tokens_.push_back({src, dst});
        } else {  // infedges
            Token src = expect_ident("a source vertex id");
            expect_punct("->");
            Token dst = expect_ident("a target vertex id");
            expect_punct(";");
            edges_.push_back({synthesize_inf_id(src.text, dst.text), src.text, dst.text, true});
            endpoint_tokens_.push_back({src, dst});
        }
    }

    std::string synthesize_inf_id(const std::string& src, const std::string& dst) {
        std::string base = "inf_" + src + "_" + dst;
        std::string id = base;
        int n = 2;
        while (declared_.count(id)) id = base + "_" + std::to_string(n++);
        declared_.insert(id);
        return id;
    }

    void declare_id(const Token& id) {
        if (!declared_.insert(id.text).second)
            throw ParseError("id '" + id.text + "' already declared", id.line, id.col);
    }

    GraphSpec build_finite() {
        // Resolve endpoint references with positions for error reporting.
        std::set<std::string> vertex_ids;
        for (const auto& v : vertices_) vertex_ids.insert(v.id);
        for (size_t i = 0; i < edges_.size(); ++i) {
            const auto& [src, dst] = endpoint_tokens_[i];
            if (!vertex_ids.count(src.text))
                throw ParseError("edge endpoint references undeclared vertex '" + src.text + "'",
                                 src.line, src.col);
            if (!vertex_ids.count(dst.text))
                throw ParseError("edge endpoint references undeclared vertex '" + dst.text + "'",
                                 dst.line, dst.col);
        }
        return FiniteGraph::build(std::move(vertices_), std::move(edges_));
    }

    void parse_ladder() {
        Token head = lex_.next();  // 'ladder'
        ladder_tok_ = head;
        expect_punct("{");
        bool saw_spine = false;
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::punct && t.text == "}") {
                lex_.next();
                break;
            }
            if (t.kind != Token::Kind::ident)
                throw ParseError("expected a ladder declaration", t.line, t.col);
            if (t.text == "spine") {
                if (saw_spine) throw ParseError("duplicate spine declaration", t.line, t.col);
                saw_spine = true;
                lex_.next();
                Token kind = expect_ident("'nat' or 'int'");
                if (kind.text == "nat") ladder_.spine = SpineKind::nat;
                else if (kind.text == "int") ladder_.spine = SpineKind::integers;
                else throw ParseError("spine must be 'nat' or 'int'", kind.line, kind.col);
                expect_punct(";");
            } else if (t.text == "loops") {
                lex_.next();
                parse_loop_pattern();
                expect_punct(";");
            } else if (t.text == "tail") {
                lex_.next();
                parse_tail();
            } else if (t.text == "tail_exception") {
                lex_.next();
                expect_keyword("col");
                long long col = expect_number();
                Token len_kw = expect_keyword("length");
                long long len = expect_number();
                if (len <= 0)
                    throw ParseError("tail_exception length must be positive", len_kw.line,
                                     len_kw.col);
                expect_punct(";");
                ladder_.exceptions.push_back({col, len});
            } else {
                throw ParseError("unknown ladder declaration '" + t.text + "'", t.line, t.col);
            }
        }
    }

    void parse_loop_pattern() {
        Token t = expect_ident("a loop pattern");
        if (t.text == "all") {
            ladder_.loops.kind = LoopPattern::Kind::all;
        } else if (t.text == "none") {
            ladder_.loops.kind = LoopPattern::Kind::none;
        } else if (t.text == "cols") {
            ladder_.loops.kind = LoopPattern::Kind::cols;
            ladder_.loops.cols.push_back(expect_number());
            while (lex_.peek().kind == Token::Kind::punct && lex_.peek().text == ",") {
                lex_.next();
                ladder_.loops.cols.push_back(expect_number());
            }
            std::sort(ladder_.loops.cols.begin(), ladder_.loops.cols.end());
            ladder_.loops.cols.erase(
                std::unique(ladder_.loops.cols.begin(), ladder_.loops.cols.end()),
                ladder_.loops.cols.end());
        } else if (t.text == "from") {
            ladder_.loops.kind = LoopPattern::Kind::from;
            ladder_.loops.start = expect_number();
            expect_keyword("step");
            ladder_.loops.step = expect_positive("loop pattern step");
        } else {
            throw ParseError("loop pattern must be all, none, cols or from", t.line, t.col);
        }
    }

    void parse_tail() {
        TailFamily f;
        expect_keyword("start");
        f.start_col = expect_number();
        Token step_kw = expect_keyword("step");
        f.step = expect_number();
        if (f.step <= 0)
            throw ParseError("tail step must be a positive integer", step_kw.line, step_kw.col);
        Token len_kw = expect_keyword("length");
        f.slope = expect_number();
        expect_punct("*");
        Token tvar = expect_ident("'t'");
        if (tvar.text != "t") throw ParseError("expected 't'", tvar.line, tvar.col);
        if (lex_.peek().kind == Token::Kind::punct && lex_.peek().text == "+") {
            lex_.next();
            f.offset = expect_number();
        } else {
            f.offset = 0;
        }
        expect_punct(";");
        if (f.slope < 0)
            throw ParseError("tail length slope must be non-negative", len_kw.line, len_kw.col);
        if (f.offset <= 0)
            throw ParseError("tail length must be positive for every index (constant term >= 1)",
                             len_kw.line, len_kw.col);
        ladder_.families.push_back(f);
    }

    void validate_ladder() {
        if (ladder_.spine == SpineKind::nat) {
            for (const auto& f : ladder_.families)
                if (f.start_col < 0)
                    throw ParseError("tail start column " + std::to_string(f.start_col) +
                                     " is off a nat spine", ladder_tok_.line, ladder_tok_.col);
            for (const auto& e : ladder_.exceptions)
                if (e.col < 0)
                    throw ParseError("tail_exception column " + std::to_string(e.col) +
                                     " is off a nat spine", ladder_tok_.line, ladder_tok_.col);
        }
        long long lcm_steps = 1;
        for (const auto& f : ladder_.families) {
            lcm_steps = std::lcm(lcm_steps, f.step);
            if (lcm_steps > 2'000'000)
                throw ParseError("tail family steps too large to analyze",
                                 ladder_tok_.line, ladder_tok_.col);
        }
    }

    Lexer lex_;
    std::vector<VertexInfo> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::pair<Token, Token>> endpoint_tokens_;
    std::set<std::string> declared_;
    LadderSpec ladder_;
    Token ladder_tok_;
};

std::string loop_pattern_text(const LoopPattern& p) {
    switch (p.kind) {
        case LoopPattern::Kind::none: return "none";
        case LoopPattern::Kind::all: return "all";
        case LoopPattern::Kind::cols: {
            std::string s = "cols ";
            for (size_t i = 0; i < p.cols.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(p.cols[i]);
            }
            return s;
        }
        case LoopPattern::Kind::from:
            return "from " + std::to_string(p.start) + " step " + std::to_string(p.step);
    }
    return "none";
}

}  // namespace

GraphSpec parse_graph(const std::string& text) {
    try {
        return GraphParser(text).parse();
    } catch (const DomainError& e) {
        // Graph construction problems surface as semantic parse errors.
        throw ParseError(e.what());
    }
}

std::string print_graph(const GraphSpec& g) {
    std::ostringstream os;
    if (const auto* fg = std::get_if<FiniteGraph>(&g)) {
        for (int v = 0; v < fg->vertex_count(); ++v)
            os << "vertex " << fg->vertex(v).id << ";\n";
        for (int e = 0; e < fg->edge_count(); ++e) {
            const Edge& ed = fg->edge(e);
            if (ed.infinite_family)
                os << "infedges " << ed.src << " -> " << ed.dst << ";\n";
            else
                os << "edge " << ed.id << ": " << ed.src << " -> " << ed.dst << ";\n";
        }
        return os.str();
    }
    const auto& l = std::get<LadderSpec>(g);
    os << "ladder {\n";
    os << "  spine " << (l.spine == SpineKind::nat ? "nat" : "int") << ";\n";
    if (l.loops.kind != LoopPattern::Kind::none)
        os << "  loops " << loop_pattern_text(l.loops) << ";\n";
    for (const auto& f : l.families)
        os << "  tail start " << f.start_col << " step " << f.step << " length " << f.slope
           << "*t+" << f.offset << ";\n";
    for (const auto& e : l.exceptions)
        os << "  tail_exception col " << e.col << " length " << e.length << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace lpa
