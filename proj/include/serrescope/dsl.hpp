#pragma once

#include <sstream>

#include "serrescope/algebra.hpp"

namespace serrescope {

struct AlgebraSpec {
    std::string name;
    Quiver quiver;
    std::vector<Relation> relations;
};

namespace detail {

struct Token {
    enum Kind { Ident, Number, Sym, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
   public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

   private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = src_[pos_];
        if (isalpha(uchar(c)) || c == '_') {
            tok_.kind = Token::Ident;
            while (pos_ < src_.size() &&
                   (isalnum(uchar(src_[pos_])) || src_[pos_] == '_')) {
                tok_.text += src_[pos_++];
                ++col_;
            }
        } else if (isdigit(uchar(c))) {
            tok_.kind = Token::Number;
            while (pos_ < src_.size() && isdigit(uchar(src_[pos_]))) {
                tok_.text += src_[pos_++];
                ++col_;
            }
        } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            tok_.kind = Token::Sym;
            tok_.text = "->";
            pos_ += 2;
            col_ += 2;
        } else {
            tok_.kind = Token::Sym;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
        }
    }

    static unsigned char uchar(char c) { return static_cast<unsigned char>(c); }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

[[noreturn]] inline void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg + (t.kind == Token::End ? " (at end of input)"
                                                 : " (near '" + t.text + "')"),
                     t.line, t.col);
}

inline Token expect_sym(Lexer& lex, const std::string& s) {
    Token t = lex.take();
    if (t.kind != Token::Sym || t.text != s) fail(t, "expected '" + s + "'");
    return t;
}

inline Token expect_ident(Lexer& lex, const std::string& what) {
    Token t = lex.take();
    if (t.kind != Token::Ident) fail(t, "expected " + what);
    return t;
}

inline bool at_sym(const Lexer& lex, const std::string& s) {
    return lex.peek().kind == Token::Sym && lex.peek().text == s;
}

}  // namespace detail

// Grammar:
//   algebra NAME {
//     vertices: v1, v2;
//     arrows: a: v1 -> v2, b: v2 -> v1;
//     relations: a*b, 1*a*b - 1/2*b*a;
//   }
// '#' starts a comment; arrows and relations sections are optional; relation
// words compose left to right.
inline AlgebraSpec parse_algebra_spec(const std::string& text) {
    using detail::Token;
    detail::Lexer lex(text);
    AlgebraSpec spec;

    Token kw = detail::expect_ident(lex, "'algebra'");
    if (kw.text != "algebra") detail::fail(kw, "expected 'algebra'");
    spec.name = detail::expect_ident(lex, "algebra name").text;
    spec.quiver.name = spec.name;
    detail::expect_sym(lex, "{");

    Token sec = detail::expect_ident(lex, "'vertices'");
    if (sec.text != "vertices") detail::fail(sec, "expected 'vertices' section first");
    detail::expect_sym(lex, ":");
    while (true) {
        spec.quiver.vertices.push_back(detail::expect_ident(lex, "vertex name").text);
        if (detail::at_sym(lex, ",")) {
            lex.take();
            continue;
        }
        break;
    }
    detail::expect_sym(lex, ";");

    if (lex.peek().kind == Token::Ident && lex.peek().text == "arrows") {
        lex.take();
        detail::expect_sym(lex, ":");
        while (true) {
            Arrow a;
            a.name = detail::expect_ident(lex, "arrow name").text;
            detail::expect_sym(lex, ":");
            Token s = detail::expect_ident(lex, "source vertex");
            detail::expect_sym(lex, "->");
            Token t = detail::expect_ident(lex, "target vertex");
            try {
                a.src = spec.quiver.vertex_index(s.text);
            } catch (const ShapeError&) {
                detail::fail(s, "unknown vertex '" + s.text + "'");
            }
            try {
                a.tgt = spec.quiver.vertex_index(t.text);
            } catch (const ShapeError&) {
                detail::fail(t, "unknown vertex '" + t.text + "'");
            }
            spec.quiver.arrows.push_back(std::move(a));
            if (detail::at_sym(lex, ",")) {
                lex.take();
                continue;
            }
            break;
        }
        detail::expect_sym(lex, ";");
    }

    if (lex.peek().kind == Token::Ident && lex.peek().text == "relations") {
        lex.take();
        detail::expect_sym(lex, ":");
        while (true) {
            Relation rel;
            bool first_term = true;
            while (true) {
                Rat sign(1);
                if (detail::at_sym(lex, "-")) {
                    lex.take();
                    sign = Rat(-1);
                } else if (detail::at_sym(lex, "+")) {
                    lex.take();
                } else if (!first_term) {
                    break;  // no sign: end of this relation
                }
                first_term = false;
                PathTerm term;
                term.coeff = sign;
                if (lex.peek().kind == Token::Number) {
                    Token num = lex.take();
                    Int n(num.text);
                    Int d(1);
                    if (detail::at_sym(lex, "/")) {
                        lex.take();
                        Token den = lex.take();
                        if (den.kind != Token::Number) detail::fail(den, "expected denominator");
                        d = Int(den.text);
                        if (d == 0) detail::fail(den, "zero denominator");
                    }
                    term.coeff *= Rat(n, d);
                    detail::expect_sym(lex, "*");
                }
                while (true) {
                    Token a = detail::expect_ident(lex, "arrow name");
                    try {
                        term.arrows.push_back(spec.quiver.arrow_index(a.text));
                    } catch (const ShapeError&) {
                        detail::fail(a, "unknown arrow '" + a.text + "'");
                    }
                    if (detail::at_sym(lex, "*")) {
                        lex.take();
                        if (lex.peek().kind == Token::Number)
                            detail::fail(lex.peek(), "coefficient must precede the word");
                        continue;
                    }
                    break;
                }
                rel.push_back(std::move(term));
            }
            spec.relations.push_back(std::move(rel));
            if (detail::at_sym(lex, ",")) {
                lex.take();
                continue;
            }
            break;
        }
        detail::expect_sym(lex, ";");
    }

    Token close = lex.take();
    if (close.kind != Token::Sym || close.text != "}")
        detail::fail(close, "expected '}'");
    Token end = lex.take();
    if (end.kind != Token::End) detail::fail(end, "trailing input after '}'");
    try {
        spec.quiver.validate();
    } catch (const ShapeError& e) {
        throw ParseError(e.what(), close.line, close.col);
    }
    return spec;
}

inline Algebra build_algebra(const AlgebraSpec& spec, int max_dim = 200000) {
    return Algebra::build(spec.quiver, spec.relations, max_dim);
}

inline std::string serialize_spec(const AlgebraSpec& spec) {
    std::ostringstream os;
    os << "algebra " << spec.name << " {\n  vertices: ";
    for (size_t i = 0; i < spec.quiver.vertices.size(); ++i)
        os << (i ? ", " : "") << spec.quiver.vertices[i];
    os << ";\n";
    if (!spec.quiver.arrows.empty()) {
        os << "  arrows:\n";
        for (size_t i = 0; i < spec.quiver.arrows.size(); ++i) {
            const Arrow& a = spec.quiver.arrows[i];
            os << "    " << a.name << ": " << spec.quiver.vertices[size_t(a.src)] << " -> "
               << spec.quiver.vertices[size_t(a.tgt)]
               << (i + 1 < spec.quiver.arrows.size() ? ",\n" : ";\n");
        }
    }
    if (!spec.relations.empty()) {
        os << "  relations:\n";
        for (size_t r = 0; r < spec.relations.size(); ++r) {
            os << "    ";
            for (size_t t = 0; t < spec.relations[r].size(); ++t) {
                const PathTerm& term = spec.relations[r][t];
                Rat c = term.coeff;
                if (t == 0) {
                    if (c < Rat(0)) os << "-";
                } else {
                    os << (c < Rat(0) ? " - " : " + ");
                }
                Rat a = c < Rat(0) ? -c : c;
                if (a != Rat(1)) os << to_string(a) << "*";
                for (size_t k = 0; k < term.arrows.size(); ++k)
                    os << (k ? "*" : "") << spec.quiver.arrows[size_t(term.arrows[k])].name;
            }
            os << (r + 1 < spec.relations.size() ? ",\n" : ";\n");
        }
    }
    os << "}\n";
    return os.str();
}

// Presentation-level tensor product: grid quiver, commuting squares, and the
// factor relations lifted to every row and column.
inline AlgebraSpec tensor_spec(const AlgebraSpec& A, const AlgebraSpec& B) {
    AlgebraSpec T;
    T.name = A.name + "_x_" + B.name;
    T.quiver.name = T.name;
    int vb = B.quiver.nvertices();
    auto vtx = [&](int i, int j) { return i * vb + j; };
    for (const auto& u : A.quiver.vertices)
        for (const auto& w : B.quiver.vertices) T.quiver.vertices.push_back(u + "_" + w);

    // horizontal arrows first: h(alpha, j), then vertical v(i, beta)
    std::vector<std::vector<int>> hidx(A.quiver.arrows.size(),
                                       std::vector<int>(size_t(vb), -1));
    for (size_t a = 0; a < A.quiver.arrows.size(); ++a)
        for (int j = 0; j < vb; ++j) {
            const Arrow& al = A.quiver.arrows[a];
            hidx[a][size_t(j)] = T.quiver.narrows();
            T.quiver.arrows.push_back({"h_" + al.name + "_" + B.quiver.vertices[size_t(j)],
                                       vtx(al.src, j), vtx(al.tgt, j)});
        }
    std::vector<std::vector<int>> vidx(size_t(A.quiver.nvertices()),
                                       std::vector<int>(B.quiver.arrows.size(), -1));
    for (int i = 0; i < A.quiver.nvertices(); ++i)
        for (size_t b = 0; b < B.quiver.arrows.size(); ++b) {
            const Arrow& be = B.quiver.arrows[b];
            vidx[size_t(i)][b] = T.quiver.narrows();
            T.quiver.arrows.push_back({"v_" + A.quiver.vertices[size_t(i)] + "_" + be.name,
                                       vtx(i, be.src), vtx(i, be.tgt)});
        }

    // commuting squares
    for (size_t a = 0; a < A.quiver.arrows.size(); ++a)
        for (size_t b = 0; b < B.quiver.arrows.size(); ++b) {
            const Arrow& al = A.quiver.arrows[a];
            const Arrow& be = B.quiver.arrows[b];
            Relation r;
            r.push_back({Rat(1), {hidx[a][size_t(be.src)], vidx[size_t(al.tgt)][b]}});
            r.push_back({Rat(-1), {vidx[size_t(al.src)][b], hidx[a][size_t(be.tgt)]}});
            T.relations.push_back(std::move(r));
        }
    // lifted relations: a relation of A lives in every column j, with each
    // arrow alpha replaced by h(alpha, j); dually for B
    for (const Relation& r : A.relations)
        for (int j = 0; j < vb; ++j) {
            Relation lifted;
            for (const PathTerm& t : r) {
                PathTerm lt;
                lt.coeff = t.coeff;
                for (int a : t.arrows) lt.arrows.push_back(hidx[size_t(a)][size_t(j)]);
                lifted.push_back(std::move(lt));
            }
            T.relations.push_back(std::move(lifted));
        }
    for (const Relation& r : B.relations)
        for (int i = 0; i < A.quiver.nvertices(); ++i) {
            Relation lifted;
            for (const PathTerm& t : r) {
                PathTerm lt;
                lt.coeff = t.coeff;
                for (int b : t.arrows) lt.arrows.push_back(vidx[size_t(i)][size_t(b)]);
                lifted.push_back(std::move(lt));
            }
            T.relations.push_back(std::move(lifted));
        }
    return T;
}

// ---- built-in corpus ----

inline const std::vector<std::pair<std::string, std::string>>& corpus_entries() {
    auto linear = [](const std::string& name, int n) {
        std::string s = "algebra " + name + " {\n  vertices: ";
        for (int i = 1; i <= n; ++i) s += (i > 1 ? ", v" : "v") + std::to_string(i);
        s += ";\n";
        if (n > 1) {
            s += "  arrows: ";
            for (int i = 1; i < n; ++i)
                s += (i > 1 ? ", " : "") + ("a" + std::to_string(i)) + ": v" +
                     std::to_string(i) + " -> v" + std::to_string(i + 1);
            s += ";\n";
        }
        return s + "}\n";
    };
    // D_n: chain v1 -> ... -> v(n-2), then v(n-2) -> v(n-1) and v(n-2) -> vn
    auto dynkin_d = [](const std::string& name, int n) {
        std::string s = "algebra " + name + " {\n  vertices: ";
        for (int i = 1; i <= n; ++i) s += (i > 1 ? ", v" : "v") + std::to_string(i);
        s += ";\n  arrows: ";
        for (int i = 1; i <= n - 3; ++i)
            s += (i > 1 ? ", " : "") + ("a" + std::to_string(i)) + ": v" + std::to_string(i) +
                 " -> v" + std::to_string(i + 1);
        s += ", b1: v" + std::to_string(n - 2) + " -> v" + std::to_string(n - 1);
        s += ", b2: v" + std::to_string(n - 2) + " -> v" + std::to_string(n);
        return s + ";\n}\n";
    };
    // E_n: chain v1 -> ... -> v(n-1) with vn hanging off v3
    auto dynkin_e = [](const std::string& name, int n) {
        std::string s = "algebra " + name + " {\n  vertices: ";
        for (int i = 1; i <= n; ++i) s += (i > 1 ? ", v" : "v") + std::to_string(i);
        s += ";\n  arrows: ";
        for (int i = 1; i <= n - 2; ++i)
            s += (i > 1 ? ", " : "") + ("a" + std::to_string(i)) + ": v" + std::to_string(i) +
                 " -> v" + std::to_string(i + 1);
        s += ", b1: v3 -> v" + std::to_string(n);
        return s + ";\n}\n";
    };
    auto kronecker = [](const std::string& name, int k) {
        std::string s = "algebra " + name + " {\n  vertices: v1, v2;\n  arrows: ";
        for (int i = 1; i <= k; ++i)
            s += (i > 1 ? ", " : "") + ("a" + std::to_string(i)) + ": v1 -> v2";
        return s + ";\n}\n";
    };

    static const std::vector<std::pair<std::string, std::string>> entries = {
        {"a1", linear("a1", 1)},
        {"a2", linear("a2", 2)},
        {"a3", linear("a3", 3)},
        {"a4", linear("a4", 4)},
        {"a5", linear("a5", 5)},
        {"a6", linear("a6", 6)},
        {"a7", linear("a7", 7)},
        {"a8", linear("a8", 8)},
        {"d4", dynkin_d("d4", 4)},
        {"d5", dynkin_d("d5", 5)},
        {"d6", dynkin_d("d6", 6)},
        {"e6", dynkin_e("e6", 6)},
        {"e7", dynkin_e("e7", 7)},
        {"e8", dynkin_e("e8", 8)},
        {"kronecker2", kronecker("kronecker2", 2)},
        {"kronecker3", kronecker("kronecker3", 3)},
        {"kronecker4", kronecker("kronecker4", 4)},
        {"square",
         "algebra square {\n"
         "  vertices: v00, v10, v01, v11;\n"
         "  arrows: a: v00 -> v10, b: v10 -> v11, c: v00 -> v01, d: v01 -> v11;\n"
         "  relations: a*b - c*d;\n"
         "}\n"},
        {"a2xa3",
         "algebra a2xa3 {\n"
         "  vertices: v11, v12, v13, v21, v22, v23;\n"
         "  arrows: a1: v11 -> v21, a2: v12 -> v22, a3: v13 -> v23,\n"
         "          b1: v11 -> v12, c1: v12 -> v13,\n"
         "          b2: v21 -> v22, c2: v22 -> v23;\n"
         "  relations: a1*b2 - b1*a2, a2*c2 - c1*a3;\n"
         "}\n"},
        {"nakayama_x2",
         "algebra nakayama_x2 {\n  vertices: v;\n  arrows: x: v -> v;\n  relations: x*x;\n}\n"},
        {"nakayama_x3",
         "algebra nakayama_x3 {\n  vertices: v;\n  arrows: x: v -> v;\n  relations: "
         "x*x*x;\n}\n"},
        {"nakayama_cyclic3",
         "algebra nakayama_cyclic3 {\n"
         "  vertices: v1, v2, v3;\n"
         "  arrows: a: v1 -> v2, b: v2 -> v3, c: v3 -> v1;\n"
         "  relations: a*b, b*c, c*a;\n"
         "}\n"},
    };
    return entries;
}

inline std::vector<std::string> corpus_names() {
    std::vector<std::string> names;
    for (const auto& [n, s] : corpus_entries()) names.push_back(n);
    return names;
}

inline std::string corpus_source(const std::string& name) {
    for (const auto& [n, s] : corpus_entries())
        if (n == name) return s;
    throw ShapeError("unknown corpus algebra '" + name + "'");
}

inline AlgebraSpec corpus_spec(const std::string& name) {
    return parse_algebra_spec(corpus_source(name));
}

}  // namespace serrescope
