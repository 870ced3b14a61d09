#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skewlab/errors.hpp"

namespace skewlab {

// Symbols are 1..k with k <= 9 in the text grammar (digit literals).
using Symbol = std::uint8_t;

// Immutable expression tree for long words: literals, concatenations and
// powers. Lengths are cached per node so indexing costs O(depth).
class Word {
  public:
    Word();  // empty word

    static Word literal(std::vector<Symbol> syms);
    static Word literal(const std::string& digits);  // chars '1'..'9'
    static Word power(const Word& base, std::uint64_t e);
    static Word concat(const Word& a, const Word& b);

    std::uint64_t length() const;
    bool empty() const { return length() == 0; }
    Symbol at(std::uint64_t i) const;
    Symbol max_symbol() const;

    // Streams symbols of positions [begin, end) in order. F: void(Symbol).
    template <class F>
    void for_each(F&& f) const {
        for_each_range(0, length(), f);
    }
    template <class F>
    void for_each_range(std::uint64_t begin, std::uint64_t end, F&& f) const;

    std::vector<Symbol> expand(std::uint64_t cap) const;
    std::string expand_digits(std::uint64_t cap) const;

    bool same_expansion(const Word& other, std::uint64_t cap) const;

    // Text grammar: LITERAL:"121" | POWER(expr,k) | CONCAT(e1,e2,...).
    // Emission is binary CONCAT; the parser accepts n-ary.
    std::string to_text() const;
    static Word parse_text(const std::string& text);

  private:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    explicit Word(NodePtr n) : node_(std::move(n)) {}

    struct Node {
        enum class Kind { Lit, Pow, Cat } kind;
        std::vector<Symbol> syms;  // Lit
        NodePtr a, b;              // Pow: a; Cat: a and b
        std::uint64_t exp = 0;     // Pow
        std::uint64_t len = 0;
        Symbol maxsym = 0;
    };

    template <class F>
    static void walk_range(const Node* nd, std::uint64_t lo, std::uint64_t hi,
                           F& f);

    NodePtr node_;  // null means empty word
};

template <class F>
void Word::walk_range(const Node* nd, std::uint64_t lo, std::uint64_t hi,
                      F& f) {
    if (!nd || lo >= hi) return;
    switch (nd->kind) {
        case Node::Kind::Lit:
            for (std::uint64_t i = lo; i < hi; ++i) f(nd->syms[i]);
            return;
        case Node::Kind::Cat: {
            std::uint64_t alen = nd->a ? nd->a->len : 0;
            if (lo < alen)
                walk_range(nd->a.get(), lo, hi < alen ? hi : alen, f);
            if (hi > alen)
                walk_range(nd->b.get(), lo > alen ? lo - alen : 0, hi - alen,
                           f);
            return;
        }
        case Node::Kind::Pow: {
            std::uint64_t L = nd->a->len;
            for (std::uint64_t r = lo / L; r * L < hi; ++r) {
                std::uint64_t s = r * L;
                std::uint64_t sublo = lo > s ? lo - s : 0;
                std::uint64_t subhi = (hi - s < L) ? hi - s : L;
                walk_range(nd->a.get(), sublo, subhi, f);
            }
            return;
        }
    }
}

template <class F>
void Word::for_each_range(std::uint64_t begin, std::uint64_t end,
                          F&& f) const {
    if (begin > end || end > length())
        throw Error("word range out of bounds");
    walk_range(node_.get(), begin, end, f);
}

}  // namespace skewlab
