#pragma once

#include <splitkit/element.hpp>
#include <splitkit/matrix.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace splitkit {

/// PD-code link diagram. Edges are the segments of the projection between
/// crossing slots; a crossing X(a,b,c,d) lists them counterclockwise from the
/// incoming under-edge a, so the under-strand runs a -> c. Components give the
/// edges of each link component in orientation order; orientation of the
/// over-strand and the crossing sign are derived from them.
struct LinkDiagram {
    struct Crossing {
        int a = 0, b = 0, c = 0, d = 0;  // edge indices (dense)
        int over_in = -1;                // b or d; -1 while unresolved
        int sign = 0;                    // +1 iff over_in == d
        int under_in_arc = -1, under_out_arc = -1, over_arc = -1;
    };

    std::vector<Crossing> crossings;
    std::vector<std::vector<int>> components;  // dense edge ids, orientation order
    std::vector<Rat> framings;                 // one per component
    std::vector<std::string> edge_names;       // dense id -> original label
    std::vector<int> comp_of_edge;
    std::vector<int> arc_of_edge;
    int n_arcs = 0;
    std::vector<int> comp_of_arc;

    int n_components() const { return static_cast<int>(components.size()); }
    int n_edges() const { return static_cast<int>(edge_names.size()); }
};

namespace detail {

struct PdText {
    std::vector<std::array<std::string, 4>> crossings;
};

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

[[noreturn]] inline void pd_fail(std::size_t pos, const std::string& what) {
    throw std::invalid_argument("PD syntax error at offset " + std::to_string(pos) + ": " + what);
}

inline PdText parse_pd_text(const std::string& s) {
    PdText out;
    std::size_t i = 0;
    skip_ws(s, i);
    if (s.compare(i, 3, "PD[") != 0) pd_fail(i, "expected 'PD['");
    i += 3;
    skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
        ++i;
        skip_ws(s, i);
        if (i != s.size()) pd_fail(i, "trailing characters");
        return out;
    }
    for (;;) {
        skip_ws(s, i);
        if (s.compare(i, 2, "X(") != 0) pd_fail(i, "expected 'X('");
        i += 2;
        std::array<std::string, 4> labels;
        for (int k = 0; k < 4; ++k) {
            skip_ws(s, i);
            std::size_t start = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            if (i == start) pd_fail(i, "expected edge label");
            labels[static_cast<std::size_t>(k)] = s.substr(start, i - start);
            skip_ws(s, i);
            const char want = k < 3 ? ',' : ')';
            if (i >= s.size() || s[i] != want) pd_fail(i, std::string("expected '") + want + "'");
            ++i;
        }
        out.crossings.push_back(labels);
        skip_ws(s, i);
        if (i < s.size() && s[i] == ',') {
            ++i;
            continue;
        }
        if (i < s.size() && s[i] == ']') {
            ++i;
            break;
        }
        pd_fail(i, "expected ',' or ']'");
    }
    skip_ws(s, i);
    if (i != s.size()) pd_fail(i, "trailing characters");
    return out;
}

}  // namespace detail

/// Builds and validates a LinkDiagram from PD text plus component data
/// (edge labels per component in orientation order) and framings.
inline LinkDiagram parse_pd(const std::string& text,
                            const std::vector<std::vector<std::string>>& components,
                            const std::vector<Rat>& framings = {}) {
    const auto pd = detail::parse_pd_text(text);

    LinkDiagram d;
    std::map<std::string, int> edge_id;
    auto intern = [&](const std::string& label) {
        auto it = edge_id.find(label);
        if (it != edge_id.end()) return it->second;
        const int id = static_cast<int>(d.edge_names.size());
        edge_id.emplace(label, id);
        d.edge_names.push_back(label);
        return id;
    };

    for (const auto& c : pd.crossings) {
        LinkDiagram::Crossing cr{};
        cr.a = intern(c[0]);
        cr.b = intern(c[1]);
        cr.c = intern(c[2]);
        cr.d = intern(c[3]);
        d.crossings.push_back(cr);
    }
    for (const auto& comp : components) {
        std::vector<int> ids;
        for (const auto& l : comp) ids.push_back(intern(l));
        if (ids.empty()) throw std::invalid_argument("empty component");
        d.components.push_back(std::move(ids));
    }
    d.framings = framings;
    d.framings.resize(d.components.size(), Rat(0));

    // usage counts: every edge appearing in crossings appears exactly twice
    std::vector<int> uses(static_cast<std::size_t>(d.n_edges()), 0);
    for (const auto& c : d.crossings)
        for (int e : {c.a, c.b, c.c, c.d}) ++uses[static_cast<std::size_t>(e)];
    for (int e = 0; e < d.n_edges(); ++e)
        if (uses[static_cast<std::size_t>(e)] != 0 && uses[static_cast<std::size_t>(e)] != 2)
            throw std::invalid_argument("edge '" + d.edge_names[static_cast<std::size_t>(e)] +
                                        "' used " + std::to_string(uses[static_cast<std::size_t>(e)]) +
                                        " times in crossings");

    // components partition the edges
    d.comp_of_edge.assign(static_cast<std::size_t>(d.n_edges()), -1);
    std::vector<int> succ(static_cast<std::size_t>(d.n_edges()), -1);
    for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
        const auto& comp = d.components[ci];
        for (std::size_t t = 0; t < comp.size(); ++t) {
            const int e = comp[t];
            if (d.comp_of_edge[static_cast<std::size_t>(e)] != -1)
                throw std::invalid_argument("edge '" + d.edge_names[static_cast<std::size_t>(e)] +
                                            "' listed twice in components");
            d.comp_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(ci);
            succ[static_cast<std::size_t>(e)] = comp[(t + 1) % comp.size()];
        }
    }
    for (int e = 0; e < d.n_edges(); ++e)
        if (d.comp_of_edge[static_cast<std::size_t>(e)] == -1)
            throw std::invalid_argument("edge '" + d.edge_names[static_cast<std::size_t>(e)] +
                                        "' missing from components");

    // under-strand consistency and over-strand orientation
    // head = the crossing slot where an edge terminates; tail = where it starts
    enum : char { kUnknown = 0, kHead = 1, kTail = 2 };
    std::vector<std::array<char, 2>> endk(static_cast<std::size_t>(d.n_edges()), {kUnknown, kUnknown});
    std::vector<std::array<std::pair<int, int>, 2>> occ(
        static_cast<std::size_t>(d.n_edges()));  // (crossing, slot 0..3)
    std::vector<int> nocc(static_cast<std::size_t>(d.n_edges()), 0);
    auto note = [&](int e, int cross, int slot) {
        occ[static_cast<std::size_t>(e)][static_cast<std::size_t>(nocc[static_cast<std::size_t>(e)]++)] = {
            cross, slot};
    };
    for (std::size_t ci = 0; ci < d.crossings.size(); ++ci) {
        const auto& c = d.crossings[ci];
        note(c.a, static_cast<int>(ci), 0);
        note(c.b, static_cast<int>(ci), 1);
        note(c.c, static_cast<int>(ci), 2);
        note(c.d, static_cast<int>(ci), 3);
    }
    auto set_end = [&](int e, int cross, int slot, char kind) {
        for (int o = 0; o < nocc[static_cast<std::size_t>(e)]; ++o) {
            auto [cr, sl] = occ[static_cast<std::size_t>(e)][static_cast<std::size_t>(o)];
            if (cr == cross && sl == slot) {
                auto& k = endk[static_cast<std::size_t>(e)][static_cast<std::size_t>(o)];
                if (k != kUnknown && k != kind)
                    throw std::invalid_argument("inconsistent orientation at edge '" +
                                                d.edge_names[static_cast<std::size_t>(e)] + "'");
                k = kind;
                return;
            }
        }
        throw std::logic_error("missing occurrence record");
    };
    for (std::size_t ci = 0; ci < d.crossings.size(); ++ci) {
        const auto& c = d.crossings[ci];
        if (succ[static_cast<std::size_t>(c.a)] != c.c)
            throw std::invalid_argument("under-strand of crossing " + std::to_string(ci + 1) +
                                        " does not follow the component order");
        if (c.b == c.d)
            throw std::invalid_argument("over-strand of crossing " + std::to_string(ci + 1) +
                                        " has both ends on one edge");
        set_end(c.a, static_cast<int>(ci), 0, kHead);
        set_end(c.c, static_cast<int>(ci), 2, kTail);
    }
    // propagate: each edge has exactly one head and one tail end
    auto other_kind = [&](int e, int cross, int slot) -> char {
        for (int o = 0; o < nocc[static_cast<std::size_t>(e)]; ++o) {
            auto [cr, sl] = occ[static_cast<std::size_t>(e)][static_cast<std::size_t>(o)];
            if (cr != cross || sl != slot)
                return endk[static_cast<std::size_t>(e)][static_cast<std::size_t>(o)];
        }
        return kUnknown;
    };
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t ci = 0; ci < d.crossings.size(); ++ci) {
            auto& c = d.crossings[ci];
            if (c.over_in != -1) continue;
            const bool b_in_succ = succ[static_cast<std::size_t>(c.b)] == c.d;
            const bool d_in_succ = succ[static_cast<std::size_t>(c.d)] == c.b;
            int over_in_slot = -1;  // 1 for b, 3 for d
            if (b_in_succ && !d_in_succ) over_in_slot = 1;
            else if (d_in_succ && !b_in_succ) over_in_slot = 3;
            else if (!b_in_succ && !d_in_succ)
                throw std::invalid_argument("over-strand of crossing " + std::to_string(ci + 1) +
                                            " does not follow the component order");
            else {
                const char kb = other_kind(c.b, static_cast<int>(ci), 1);
                const char kd = other_kind(c.d, static_cast<int>(ci), 3);
                // if b's other end is a tail, b terminates here: b is over-in
                if (kb == kTail || kd == kHead) over_in_slot = 1;
                else if (kb == kHead || kd == kTail) over_in_slot = 3;
            }
            if (over_in_slot == -1) continue;
            c.over_in = over_in_slot == 1 ? c.b : c.d;
            c.sign = over_in_slot == 3 ? 1 : -1;
            set_end(c.over_in, static_cast<int>(ci), over_in_slot, kHead);
            set_end(over_in_slot == 1 ? c.d : c.b, static_cast<int>(ci), over_in_slot == 1 ? 3 : 1,
                    kTail);
            progress = true;
        }
    }
    for (std::size_t ci = 0; ci < d.crossings.size(); ++ci) {
        if (d.crossings[ci].over_in == -1)
            throw std::invalid_argument("cannot orient the over-strand of crossing " +
                                        std::to_string(ci + 1));
    }

    // Wirtinger arcs: edges merged through over-passes
    std::vector<int> uf(static_cast<std::size_t>(d.n_edges()));
    for (int e = 0; e < d.n_edges(); ++e) uf[static_cast<std::size_t>(e)] = e;
    std::function<int(int)> find = [&](int x) {
        while (uf[static_cast<std::size_t>(x)] != x) x = uf[static_cast<std::size_t>(x)] =
                                                            uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& c : d.crossings) {
        const int over_out = c.over_in == c.b ? c.d : c.b;
        uf[static_cast<std::size_t>(find(c.over_in))] = find(over_out);
    }
    d.arc_of_edge.assign(static_cast<std::size_t>(d.n_edges()), -1);
    for (int e = 0; e < d.n_edges(); ++e) {
        const int root = find(e);
        if (d.arc_of_edge[static_cast<std::size_t>(root)] == -1) {
            d.arc_of_edge[static_cast<std::size_t>(root)] = d.n_arcs++;
            d.comp_of_arc.push_back(d.comp_of_edge[static_cast<std::size_t>(root)]);
        }
        d.arc_of_edge[static_cast<std::size_t>(e)] = d.arc_of_edge[static_cast<std::size_t>(root)];
    }
    for (auto& c : d.crossings) {
        c.under_in_arc = d.arc_of_edge[static_cast<std::size_t>(c.a)];
        c.under_out_arc = d.arc_of_edge[static_cast<std::size_t>(c.c)];
        c.over_arc = d.arc_of_edge[static_cast<std::size_t>(c.b)];
    }
    return d;
}

/// Off-diagonal entries are half-sums of signed inter-component crossings;
/// the diagonal carries the declared framings.
inline RatMat pairwise_linking(const LinkDiagram& d) {
    const std::size_t n = static_cast<std::size_t>(d.n_components());
    RatMat m(n, n);
    for (const auto& c : d.crossings) {
        const int i = d.comp_of_edge[static_cast<std::size_t>(c.a)];
        const int j = d.comp_of_edge[static_cast<std::size_t>(c.b)];
        if (i == j) continue;
        const Rat half = Rat(c.sign, 2);
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) += half;
        m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) += half;
    }
    for (std::size_t i = 0; i < n; ++i) m(i, i) = d.framings[i];
    return m;
}

/// Truncated Magnus series: noncommutative words in X_1..X_l with rational
/// coefficients, cut beyond `trunc` letters. Group elements keep constant
/// term 1.
class MagnusSeries {
public:
    explicit MagnusSeries(int trunc) : trunc_(trunc) {}

    static MagnusSeries one(int trunc) {
        MagnusSeries s(trunc);
        s.coeffs_[{}] = 1;
        return s;
    }
    /// Meridian image 1 + X_i.
    static MagnusSeries generator(int var, int trunc) {
        MagnusSeries s = one(trunc);
        s.coeffs_[{var}] = 1;
        return s;
    }

    int truncation() const { return trunc_; }
    Rat coeff(const std::vector<int>& word) const {
        auto it = coeffs_.find(word);
        return it == coeffs_.end() ? Rat(0) : it->second;
    }

    MagnusSeries operator*(const MagnusSeries& o) const {
        MagnusSeries r(trunc_);
        for (const auto& [wa, ca] : coeffs_)
            for (const auto& [wb, cb] : o.coeffs_) {
                if (static_cast<int>(wa.size() + wb.size()) > trunc_) continue;
                std::vector<int> w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                auto& c = r.coeffs_[w];
                c += ca * cb;
                if (c == 0) r.coeffs_.erase(w);
            }
        return r;
    }

    MagnusSeries inverse() const {
        if (coeff({}) != 1) throw std::domain_error("inverting a series without constant term 1");
        MagnusSeries n = *this;
        n.coeffs_.erase({});
        MagnusSeries r = one(trunc_);
        MagnusSeries pow = one(trunc_);
        for (int k = 1; k <= trunc_; ++k) {
            pow = pow * n;
            if (pow.coeffs_.empty()) break;
            for (const auto& [w, c] : pow.coeffs_) {
                auto& rc = r.coeffs_[w];
                rc += (k % 2 == 0 ? c : -c);
                if (rc == 0) r.coeffs_.erase(w);
            }
        }
        return r;
    }

    MagnusSeries pow(long e) const {
        MagnusSeries base = e >= 0 ? *this : inverse();
        long n = e >= 0 ? e : -e;
        MagnusSeries r = one(trunc_);
        for (long i = 0; i < n; ++i) r = r * base;
        return r;
    }

    bool operator==(const MagnusSeries& o) const {
        return trunc_ == o.trunc_ && coeffs_ == o.coeffs_;
    }

private:
    int trunc_;
    std::map<std::vector<int>, Rat> coeffs_;
};

namespace detail {

struct ComponentWalk {
    // undercrossing transitions in orientation order, starting from the
    // component's first edge
    struct Under {
        int over_arc;
        int sign;
        int from_arc, to_arc;
    };
    std::vector<Under> unders;
    int base_arc = -1;
};

inline ComponentWalk walk_component(const LinkDiagram& d, int comp) {
    ComponentWalk w;
    const auto& edges = d.components[static_cast<std::size_t>(comp)];
    w.base_arc = d.arc_of_edge[static_cast<std::size_t>(edges[0])];
    for (std::size_t t = 0; t < edges.size(); ++t) {
        const int e = edges[t];
        const int enext = edges[(t + 1) % edges.size()];
        for (const auto& c : d.crossings) {
            if (c.a == e && c.c == enext) {
                w.unders.push_back({c.over_arc, c.sign,
                                    d.arc_of_edge[static_cast<std::size_t>(e)],
                                    d.arc_of_edge[static_cast<std::size_t>(enext)]});
                break;
            }
        }
    }
    return w;
}

/// Magnus values of all Wirtinger arc generators, iterated to stability at
/// the given truncation. Base arcs stay exactly 1 + X_component.
inline std::vector<MagnusSeries> arc_series(const LinkDiagram& d, int trunc) {
    std::vector<MagnusSeries> val(static_cast<std::size_t>(d.n_arcs), MagnusSeries(trunc));
    for (int a = 0; a < d.n_arcs; ++a)
        val[static_cast<std::size_t>(a)] =
            MagnusSeries::generator(d.comp_of_arc[static_cast<std::size_t>(a)], trunc);

    std::vector<ComponentWalk> walks;
    for (int c = 0; c < d.n_components(); ++c) walks.push_back(walk_component(d, c));

    for (int round = 0; round < trunc; ++round) {
        for (const auto& w : walks) {
            for (std::size_t t = 0; t < w.unders.size(); ++t) {
                const auto& uc = w.unders[t];
                if (uc.to_arc == w.base_arc) continue;  // the closing relation is redundant
                const MagnusSeries& o = val[static_cast<std::size_t>(uc.over_arc)];
                val[static_cast<std::size_t>(uc.to_arc)] =
                    o.pow(-uc.sign) * val[static_cast<std::size_t>(uc.from_arc)] * o.pow(uc.sign);
            }
        }
    }
    return val;
}

}  // namespace detail

/// Magnus expansion of the k-th longitude (with the self-winding removed).
inline MagnusSeries longitude_series(const LinkDiagram& d, int k, int trunc = 3) {
    if (k < 1 || k > d.n_components()) throw std::invalid_argument("component index out of range");
    const auto vals = detail::arc_series(d, trunc);
    const auto w = detail::walk_component(d, k - 1);
    MagnusSeries lambda = MagnusSeries::one(trunc);
    for (const auto& uc : w.unders)
        lambda = lambda * vals[static_cast<std::size_t>(uc.over_arc)].pow(uc.sign);
    const Rat self = lambda.coeff({k - 1});
    if (denominator(self) != 1)
        throw std::logic_error("non-integral self-winding in longitude");
    lambda = lambda * MagnusSeries::generator(k - 1, trunc).pow(-static_cast<long>(numerator(self)));
    return lambda;
}

/// Milnor triple linking number: coefficient of X_i X_j in the k-th longitude.
/// Requires the three components to be pairwise algebraically split.
inline Rat mu_bar_ijk(const LinkDiagram& d, int i, int j, int k) {
    const int n = d.n_components();
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n || i == j || i == k || j == k)
        throw std::invalid_argument("component indices must be distinct and in range");
    const RatMat lk = pairwise_linking(d);
    const std::array<std::pair<int, int>, 3> pairs{{{i, j}, {i, k}, {j, k}}};
    for (auto [p, q] : pairs)
        if (lk(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(q - 1)) != 0)
            throw std::domain_error("components " + std::to_string(p) + " and " + std::to_string(q) +
                                    " are not algebraically split");
    return longitude_series(d, k).coeff({i - 1, j - 1});
}

/// Degree-<=1 element predicted from framings and triple linking numbers:
/// sum of (Fr_i/2)-weighted struts minus mu-weighted tripods, over {1+..l+}.
inline DiagramElement build_degree1_part(const std::vector<Rat>& framings,
                                         const std::map<std::array<int, 3>, Rat>& mu, int l) {
    if (static_cast<int>(framings.size()) != l)
        throw std::invalid_argument("one framing per component required");
    const ColorSet colors = ColorSet::top_bottom(l, 0);
    DiagramElement out(colors);
    for (int i = 0; i < l; ++i) {
        if (framings[static_cast<std::size_t>(i)] == 0) continue;
        JacobiDiagram s = JacobiDiagram::make(0, {i, i}, {{0, 1}});
        out.add(s, framings[static_cast<std::size_t>(i)] / 2);
    }
    for (const auto& [t, c] : mu) {
        auto [i, j, k] = t;
        if (!(1 <= i && i < j && j < k && k <= l))
            throw std::invalid_argument("mu keys must be increasing triples in range");
        if (c == 0) continue;
        JacobiDiagram y = JacobiDiagram::make(1, {i - 1, j - 1, k - 1}, {{0, 3}, {1, 4}, {2, 5}});
        out.add(y, -c);
    }
    return out;
}

}  // namespace splitkit
