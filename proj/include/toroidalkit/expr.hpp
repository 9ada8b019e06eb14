#pragma once

#include "toroidalkit/errors.hpp"
#include "toroidalkit/maptoroidal.hpp"
#include "toroidalkit/tensormod.hpp"

#include <string>
#include <vector>

namespace toroidalkit {

// Parsers for the printed forms of elements and vectors, so reported counterexamples can be fed
// back through a config:
//   algebra element   "2/3 e@(1,0,0) + -1 K2@(0,1,0) + d1@(0,0,0)"
//   map element       "e@(1,0,0)(s) + 1/2 d1@(0,0,0)(1)"
//   module vector     "[v1|w2|(0,1,0)] + -1/3 [v2|w1|(0,0,0)]"

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// Splits on top-level " + " and returns (coefficient, body) pairs.
inline std::vector<std::pair<Rational, std::string>> split_terms(const std::string& text) {
    std::vector<std::pair<Rational, std::string>> out;
    const std::string s = trim(text);
    if (s.empty()) throw ValidationError("empty expression");
    if (s == "0") return out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(" + ", pos);
        std::string term = trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        if (term.empty()) throw ValidationError("empty term in '" + s + "'");
        Rational c(1);
        const auto sp = term.find(' ');
        if (sp != std::string::npos) {
            c = Rational::parse(term.substr(0, sp));
            term = trim(term.substr(sp + 1));
        } else if (term[0] == '-' && term.size() > 1 && !std::isdigit(static_cast<unsigned char>(term[1]))) {
            c = Rational(-1);
            term = term.substr(1);
        }
        out.emplace_back(c, term);
        if (next == std::string::npos) break;
        pos = next + 3;
    }
    return out;
}

inline Degree parse_degree(const std::string& s) {
    const std::string t = trim(s);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw ValidationError("bad degree '" + s + "'");
    std::vector<int> xs;
    std::size_t pos = 1;
    while (pos < t.size() - 1) {
        std::size_t comma = t.find(',', pos);
        if (comma == std::string::npos || comma > t.size() - 1) comma = t.size() - 1;
        const std::string part = trim(t.substr(pos, comma - pos));
        try {
            std::size_t used = 0;
            xs.push_back(std::stoi(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ValidationError("bad degree entry '" + part + "'");
        }
        pos = comma + 1;
    }
    if (xs.empty() || static_cast<int>(xs.size()) > kMaxRank) throw ValidationError("bad degree '" + s + "'");
    return Degree::from(xs);
}

// "label@(..)" to a canonical element.
inline AlgElement parse_symbol(const Toroidal& t, const std::string& s, const Rational& c) {
    const auto at = s.find('@');
    if (at == std::string::npos) throw ValidationError("symbol '" + s + "' lacks '@degree'");
    const std::string label = s.substr(0, at);
    const Degree m = parse_degree(s.substr(at + 1));
    t.check_degree(m);
    for (int a = 0; a < t.g().dim(); ++a)
        if (t.g().labels[a] == label) return t.loop(label, m, c);
    if (label.size() >= 2 && (label[0] == 'K' || label[0] == 'd')) {
        int i = 0;
        try {
            std::size_t used = 0;
            i = std::stoi(label.substr(1), &used);
            if (used != label.size() - 1) throw std::invalid_argument(label);
        } catch (const std::exception&) {
            throw ValidationError("unknown symbol '" + label + "'");
        }
        if (i < 1 || i > t.n()) throw ValidationError("index out of range in '" + label + "'");
        return label[0] == 'K' ? t.kahler(i - 1, m, c) : t.der(i - 1, m, c);
    }
    throw ValidationError("unknown symbol '" + label + "'");
}

}  // namespace detail

inline AlgElement parse_alg_element(const Toroidal& t, const std::string& text) {
    AlgElement x;
    for (const auto& [c, body] : detail::split_terms(text)) x += detail::parse_symbol(t, body, c);
    return x;
}

inline MapElement parse_map_element(const MapToroidal& L, const std::string& text) {
    MapElement x;
    for (const auto& [c, body] : detail::split_terms(text)) {
        // the coefficient label is the trailing "(...)" after the degree
        const auto close = body.find(')', body.find('@'));
        if (close == std::string::npos || close + 1 >= body.size() || body[close + 1] != '(' || body.back() != ')')
            throw ValidationError("map term '" + body + "' needs a coefficient label, as in e@(1,0,0)(s)");
        const std::string label = body.substr(close + 2, body.size() - close - 3);
        x += L.tensor(detail::parse_symbol(L.tau(), body.substr(0, close + 1), c), label);
    }
    return x;
}

inline ModuleVector parse_module_vector(const TensorModule& M, const std::string& text) {
    ModuleVector v;
    for (const auto& [c, body] : detail::split_terms(text)) {
        if (body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw ValidationError("module term '" + body + "' must look like [v1|w1|(0,0,0)]");
        const std::string in = body.substr(1, body.size() - 2);
        const auto p1 = in.find('|');
        const auto p2 = in.find('|', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) throw ValidationError("bad module term '" + body + "'");
        const std::string l1 = in.substr(0, p1), l2 = in.substr(p1 + 1, p2 - p1 - 1);
        const Degree r = detail::parse_degree(in.substr(p2 + 1));
        M.check_degree(r);
        int i1 = -1, i2 = -1;
        for (int i = 0; i < M.v1().dim; ++i)
            if (M.v1().label(i) == l1) i1 = i;
        for (int i = 0; i < M.v2().dim; ++i)
            if (M.v2().labels[i] == l2) i2 = i;
        if (i1 < 0 || i2 < 0) throw ValidationError("unknown basis label in '" + body + "'");
        v.add({r, i1, i2}, c);
    }
    return v;
}

}  // namespace toroidalkit
