#include "skewlab/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace skewlab {

namespace {

constexpr std::uint64_t kMaxLen = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMaxLen / a)
        throw LimitError("word-length-overflow", "word length exceeds 64 bits");
    return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (b > kMaxLen - a)
        throw LimitError("word-length-overflow", "word length exceeds 64 bits");
    return a + b;
}

}  // namespace

Word::Word() : node_(nullptr) {}

std::uint64_t Word::length() const { return node_ ? node_->len : 0; }

Symbol Word::max_symbol() const { return node_ ? node_->maxsym : 0; }

Word Word::literal(std::vector<Symbol> syms) {
    if (syms.empty()) return Word();
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Lit;
    n->len = syms.size();
    n->maxsym = *std::max_element(syms.begin(), syms.end());
    for (Symbol s : syms)
        if (s == 0) throw Error("symbol 0 is not in the alphabet");
    n->syms = std::move(syms);
    return Word(std::move(n));
}

Word Word::literal(const std::string& digits) {
    std::vector<Symbol> syms;
    syms.reserve(digits.size());
    for (char c : digits) {
        if (c < '1' || c > '9')
            throw Error(std::string("bad symbol character '") + c +
                        "' (alphabet symbols are digits 1..9)");
        syms.push_back(static_cast<Symbol>(c - '0'));
    }
    return literal(std::move(syms));
}

Word Word::power(const Word& base, std::uint64_t e) {
    if (e == 0 || base.empty()) return e == 1 ? base : Word();
    if (e == 1) return base;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Pow;
    n->a = base.node_;
    n->exp = e;
    n->len = checked_mul(base.length(), e);
    n->maxsym = base.max_symbol();
    return Word(std::move(n));
}

Word Word::concat(const Word& a, const Word& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Cat;
    n->a = a.node_;
    n->b = b.node_;
    n->len = checked_add(a.length(), b.length());
    n->maxsym = std::max(a.max_symbol(), b.max_symbol());
    return Word(std::move(n));
}

Symbol Word::at(std::uint64_t i) const {
    if (i >= length()) throw Error("word index out of range");
    const Node* nd = node_.get();
    while (true) {
        switch (nd->kind) {
            case Node::Kind::Lit:
                return nd->syms[i];
            case Node::Kind::Pow:
                i %= nd->a->len;
                nd = nd->a.get();
                break;
            case Node::Kind::Cat:
                if (i < nd->a->len) {
                    nd = nd->a.get();
                } else {
                    i -= nd->a->len;
                    nd = nd->b.get();
                }
                break;
        }
    }
}

std::vector<Symbol> Word::expand(std::uint64_t cap) const {
    if (length() > cap)
        throw LimitError("word-expansion-cap",
                         "word too long to expand: " + std::to_string(length()));
    std::vector<Symbol> out;
    out.reserve(static_cast<std::size_t>(length()));
    for_each([&](Symbol s) { out.push_back(s); });
    return out;
}

std::string Word::expand_digits(std::uint64_t cap) const {
    if (max_symbol() > 9)
        throw Error("word has symbols beyond 9, no digit form");
    if (length() > cap)
        throw LimitError("word-expansion-cap",
                         "word too long to expand: " + std::to_string(length()));
    std::string out;
    out.reserve(static_cast<std::size_t>(length()));
    for_each([&](Symbol s) { out.push_back(static_cast<char>('0' + s)); });
    return out;
}

bool Word::same_expansion(const Word& other, std::uint64_t cap) const {
    if (length() != other.length()) return false;
    return expand(cap) == other.expand(cap);
}

std::string Word::to_text() const {
    if (!node_) return "LITERAL:\"\"";
    const Node* nd = node_.get();
    switch (nd->kind) {
        case Node::Kind::Lit: {
            std::string s = "LITERAL:\"";
            for (Symbol sym : nd->syms) {
                if (sym > 9) throw Error("symbol beyond 9 has no digit form");
                s.push_back(static_cast<char>('0' + sym));
            }
            s += "\"";
            return s;
        }
        case Node::Kind::Pow:
            return "POWER(" + Word(nd->a).to_text() + "," +
                   std::to_string(nd->exp) + ")";
        case Node::Kind::Cat:
            return "CONCAT(" + Word(nd->a).to_text() + "," +
                   Word(nd->b).to_text() + ")";
    }
    throw Error("unreachable word node kind");
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c))
            throw Error("word grammar: expected '" + std::string(1, c) +
                        "' at offset " + std::to_string(pos));
    }
    bool peek_word(const char* kw) {
        skip_ws();
        std::size_t n = std::string(kw).size();
        return s.compare(pos, n, kw) == 0;
    }
    void eat_word(const char* kw) {
        if (!peek_word(kw))
            throw Error(std::string("word grammar: expected ") + kw);
        pos += std::string(kw).size();
    }
    std::uint64_t integer() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw Error("word grammar: expected integer at offset " +
                        std::to_string(pos));
        std::uint64_t v = 0;
        while (pos < s.size() &&
               std::isdigit(static_cast<unsigned char>(s[pos]))) {
            std::uint64_t d = static_cast<std::uint64_t>(s[pos] - '0');
            if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
                throw LimitError("word-length-overflow",
                                 "exponent exceeds 64 bits");
            v = v * 10 + d;
            ++pos;
        }
        return v;
    }

    Word expr() {
        skip_ws();
        if (peek_word("LITERAL")) {
            eat_word("LITERAL");
            expect(':');
            expect('"');
            std::string digits;
            while (pos < s.size() && s[pos] != '"') digits.push_back(s[pos++]);
            expect('"');
            if (digits.empty())
                throw Error("word grammar: empty literal");
            return Word::literal(digits);
        }
        if (peek_word("POWER")) {
            eat_word("POWER");
            expect('(');
            Word base = expr();
            expect(',');
            std::uint64_t e = integer();
            expect(')');
            if (e == 0) throw Error("word grammar: power exponent must be >= 1");
            return Word::power(base, e);
        }
        if (peek_word("CONCAT")) {
            eat_word("CONCAT");
            expect('(');
            Word acc = expr();
            if (!consume(','))
                throw Error("word grammar: CONCAT needs at least two children");
            do {
                acc = Word::concat(acc, expr());
            } while (consume(','));
            expect(')');
            return acc;
        }
        throw Error("word grammar: expected LITERAL, POWER or CONCAT at offset " +
                    std::to_string(pos));
    }
};

}  // namespace

Word Word::parse_text(const std::string& text) {
    Parser p(text);
    Word w = p.expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error("word grammar: trailing characters at offset " +
                    std::to_string(p.pos));
    return w;
}

}  // namespace skewlab
