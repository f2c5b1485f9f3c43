#pragma once

#include <splitkit/colors.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace splitkit {

/// A Jacobi diagram: uni-trivalent graph with oriented trivalent vertices and
/// colored legs. Half-edge h of trivalent vertex v in slot s is h = 3v+s, the
/// cyclic order at v being (3v, 3v+1, 3v+2). Leg j owns half-edge 3*n_tri + j
/// and carries a color index into some ColorSet. `mate` is the edge matching.
struct JacobiDiagram {
    int n_tri = 0;
    std::vector<int> leg_color;  // leg index -> color index
    std::vector<int> mate;       // half-edge -> half-edge

    int n_legs() const { return static_cast<int>(leg_color.size()); }
    int n_half_edges() const { return 3 * n_tri + n_legs(); }
    int leg_he(int leg) const { return 3 * n_tri + leg; }
    bool is_leg_he(int he) const { return he >= 3 * n_tri; }
    int idegree() const { return n_tri; }

    static JacobiDiagram empty() { return JacobiDiagram{}; }

    static JacobiDiagram make(int n_tri, std::vector<int> leg_colors,
                              const std::vector<std::pair<int, int>>& edges) {
        JacobiDiagram d;
        d.n_tri = n_tri;
        d.leg_color = std::move(leg_colors);
        d.mate.assign(static_cast<std::size_t>(d.n_half_edges()), -1);
        for (auto [a, b] : edges) {
            if (a < 0 || b < 0 || a >= d.n_half_edges() || b >= d.n_half_edges() || a == b)
                throw std::invalid_argument("edge endpoint out of range");
            if (d.mate[a] != -1 || d.mate[b] != -1)
                throw std::invalid_argument("half-edge used twice");
            d.mate[a] = b;
            d.mate[b] = a;
        }
        d.validate();
        return d;
    }

    void validate() const {
        if (mate.size() != static_cast<std::size_t>(n_half_edges()))
            throw std::invalid_argument("mate table size mismatch");
        for (int h = 0; h < n_half_edges(); ++h) {
            if (mate[h] < 0 || mate[h] >= n_half_edges())
                throw std::invalid_argument("dangling half-edge " + std::to_string(h));
            if (mate[h] == h || mate[mate[h]] != h)
                throw std::invalid_argument("mate table is not a perfect matching");
        }
    }

    bool has_tadpole() const {
        for (int v = 0; v < n_tri; ++v)
            for (int s = 0; s < 3; ++s)
                if (mate[3 * v + s] / 3 == v && !is_leg_he(mate[3 * v + s])) return true;
        return false;
    }
};

/// Canonical-form key; total order makes element storage deterministic.
struct DiagramKey {
    std::vector<std::int32_t> code;
    auto operator<=>(const DiagramKey&) const = default;
};

struct CanonResult {
    int sign = 0;  // +1, -1, or 0 when the diagram is zero under AS
    JacobiDiagram canonical;
    DiagramKey key;
};

namespace detail {

// Dihedral arrangements of a cyclic triple. First three are rotations
// (sign +1), last three reversals (sign -1).
inline constexpr std::array<std::array<int, 3>, 6> kPerm = {{
    {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {1, 0, 2}, {2, 1, 0}}};

inline constexpr std::array<int, 6> kPermSign = {1, 1, 1, -1, -1, -1};

inline int inv_perm(int p, int orig_slot) {
    for (int k = 0; k < 3; ++k)
        if (kPerm[p][k] == orig_slot) return k;
    return -1;
}

// Canonical discovery code for one connected component with >= 1 trivalent
// vertex. The code is minimized over the start vertex, per-vertex dihedral
// orientation, and discovery order; prefix pruning keeps the search small.
// Token stream: for each assigned vertex in order, its three slots emit either
// (0, color) for a leg or (1, 3*j+s) for the far end of an internal edge.
class ComponentCanon {
public:
    ComponentCanon(const JacobiDiagram& d, const std::vector<int>& verts)
        : d_(d), verts_(verts), t_(static_cast<int>(verts.size())) {
        new_idx_.assign(static_cast<std::size_t>(d.n_tri), -1);
        perm_.assign(static_cast<std::size_t>(d.n_tri), 0);
        order_.reserve(static_cast<std::size_t>(t_));
    }

    // Returns false when the component is zero (an automorphism realizes both
    // signs). On success, code/sign describe the canonical representative.
    bool run(std::vector<std::int32_t>& code_out, int& sign_out) {
        greedy_seed();
        for (int v : verts_) {
            for (int p = 0; p < 6; ++p) {
                order_.clear();
                std::fill(new_idx_.begin(), new_idx_.end(), -1);
                new_idx_[static_cast<std::size_t>(v)] = 0;
                perm_[static_cast<std::size_t>(v)] = p;
                order_.push_back(v);
                code_.clear();
                dfs(0, 0);
            }
        }
        if (plus_ && minus_) return false;
        code_out = best_;
        sign_out = plus_ ? 1 : -1;
        return true;
    }

private:
    // One pruning-free descent taking the smallest token at each step; the
    // resulting complete code bounds the real search.
    void greedy_seed() {
        order_.clear();
        std::fill(new_idx_.begin(), new_idx_.end(), -1);
        new_idx_[static_cast<std::size_t>(verts_[0])] = 0;
        perm_[static_cast<std::size_t>(verts_[0])] = 0;
        order_.push_back(verts_[0]);
        code_.clear();
        for (int pos = 0; pos < 3 * t_; ++pos) {
            const int i = pos / 3, k = pos % 3;
            const int v = order_[static_cast<std::size_t>(i)];
            const int orig_slot = kPerm[perm_[static_cast<std::size_t>(v)]][k];
            const int m = d_.mate[3 * v + orig_slot];
            if (d_.is_leg_he(m)) {
                code_.push_back(0);
                code_.push_back(d_.leg_color[m - 3 * d_.n_tri]);
                continue;
            }
            const int w = m / 3, s_w = m % 3;
            code_.push_back(1);
            if (new_idx_[static_cast<std::size_t>(w)] != -1) {
                code_.push_back(3 * new_idx_[static_cast<std::size_t>(w)] +
                                inv_perm(perm_[static_cast<std::size_t>(w)], s_w));
            } else {
                int p = 0;
                while (inv_perm(p, s_w) != 0) ++p;
                new_idx_[static_cast<std::size_t>(w)] = static_cast<int>(order_.size());
                perm_[static_cast<std::size_t>(w)] = p;
                code_.push_back(3 * new_idx_[static_cast<std::size_t>(w)]);
                order_.push_back(w);
            }
        }
        best_ = code_;
        have_best_ = true;
        int sign = 1;
        for (int v : order_) sign *= kPermSign[perm_[static_cast<std::size_t>(v)]];
        plus_ = sign > 0;
        minus_ = sign < 0;
        code_.clear();
    }
    // cmp: 0 while equal to the best prefix, -1 once possibly smaller (the
    // completion re-compares in full, since best_ may move under a branch).
    void dfs(int pos, int cmp) {
        if (pos == 3 * t_) {
            int sign = 1;
            for (int v : order_) sign *= kPermSign[perm_[static_cast<std::size_t>(v)]];
            if (have_best_ && cmp == 0) {
                (sign > 0 ? plus_ : minus_) = true;
                return;
            }
            if (!have_best_ || code_ < best_) {
                best_ = code_;
                have_best_ = true;
                plus_ = sign > 0;
                minus_ = sign < 0;
            } else if (code_ == best_) {
                (sign > 0 ? plus_ : minus_) = true;
            }
            return;
        }
        const int i = pos / 3, k = pos % 3;
        const int v = order_[static_cast<std::size_t>(i)];
        const int orig_slot = kPerm[perm_[static_cast<std::size_t>(v)]][k];
        const int m = d_.mate[3 * v + orig_slot];
        if (d_.is_leg_he(m)) {
            emit(pos, cmp, 0, d_.leg_color[m - 3 * d_.n_tri], [&](int c2) { dfs(pos + 1, c2); });
            return;
        }
        const int w = m / 3, s_w = m % 3;
        if (new_idx_[static_cast<std::size_t>(w)] != -1) {
            const int enc = 3 * new_idx_[static_cast<std::size_t>(w)] +
                            inv_perm(perm_[static_cast<std::size_t>(w)], s_w);
            emit(pos, cmp, 1, enc, [&](int c2) { dfs(pos + 1, c2); });
            return;
        }
        const int next = static_cast<int>(order_.size());
        // try orientations in token order so pruning bites early
        for (int shat = 0; shat < 3; ++shat) {
            const int enc = 3 * next + shat;
            for (int p = 0; p < 6; ++p) {
                if (inv_perm(p, s_w) != shat) continue;
                new_idx_[static_cast<std::size_t>(w)] = next;
                perm_[static_cast<std::size_t>(w)] = p;
                order_.push_back(w);
                emit(pos, cmp, 1, enc, [&](int c2) { dfs(pos + 1, c2); });
                order_.pop_back();
                new_idx_[static_cast<std::size_t>(w)] = -1;
            }
        }
    }

    template <class Next>
    void emit(int pos, int cmp, std::int32_t a, std::int32_t b, Next&& next) {
        if (cmp == 0) {
            const std::int32_t ba = best_[static_cast<std::size_t>(2 * pos)];
            const std::int32_t bb = best_[static_cast<std::size_t>(2 * pos + 1)];
            if (a > ba || (a == ba && b > bb)) return;  // prune
            if (a < ba || b < bb) cmp = -1;
        }
        code_.push_back(a);
        code_.push_back(b);
        next(cmp);
        code_.pop_back();
        code_.pop_back();
    }

    const JacobiDiagram& d_;
    const std::vector<int>& verts_;
    const int t_;
    std::vector<int> new_idx_, perm_, order_;
    std::vector<std::int32_t> code_, best_;
    bool have_best_ = false, plus_ = false, minus_ = false;
};

}  // namespace detail

inline JacobiDiagram decode_diagram(const DiagramKey& key);

/// AS-canonical form. Returns sign 0 exactly when the diagram is zero in the
/// quotient: it contains a tadpole, or some component admits an orientation-
/// odd automorphism. Otherwise d = sign * canonical in A(colors).
inline CanonResult canonical_as(const JacobiDiagram& d) {
    d.validate();
    CanonResult res;
    if (d.has_tadpole()) return res;

    // connected components over half-edges
    const int H = d.n_half_edges();
    std::vector<int> comp(static_cast<std::size_t>(H), -1);
    int ncomp = 0;
    for (int h0 = 0; h0 < H; ++h0) {
        if (comp[static_cast<std::size_t>(h0)] != -1) continue;
        std::vector<int> stack{h0};
        comp[static_cast<std::size_t>(h0)] = ncomp;
        while (!stack.empty()) {
            int h = stack.back();
            stack.pop_back();
            std::vector<int> nbrs{d.mate[h]};
            if (!d.is_leg_he(h)) {
                const int v = h / 3, s = h - 3 * v;
                nbrs.push_back(3 * v + (s + 1) % 3);
                nbrs.push_back(3 * v + (s + 2) % 3);
            }
            for (int nb : nbrs)
                if (comp[static_cast<std::size_t>(nb)] == -1) {
                    comp[static_cast<std::size_t>(nb)] = ncomp;
                    stack.push_back(nb);
                }
        }
        ++ncomp;
    }

    std::vector<std::vector<int>> comp_verts(static_cast<std::size_t>(ncomp));
    for (int v = 0; v < d.n_tri; ++v)
        comp_verts[static_cast<std::size_t>(comp[static_cast<std::size_t>(3 * v)])].push_back(v);

    std::vector<std::vector<std::int32_t>> codes;
    int sign = 1;
    for (int c = 0; c < ncomp; ++c) {
        if (!comp_verts[static_cast<std::size_t>(c)].empty()) {
            detail::ComponentCanon cc(d, comp_verts[static_cast<std::size_t>(c)]);
            std::vector<std::int32_t> code;
            int s = 0;
            if (!cc.run(code, s)) return res;  // zero
            std::vector<std::int32_t> full;
            full.push_back(1);
            full.push_back(static_cast<std::int32_t>(comp_verts[static_cast<std::size_t>(c)].size()));
            int nl = 0;
            for (std::size_t i = 0; i + 1 < code.size(); i += 2)
                if (code[i] == 0) ++nl;
            full.push_back(nl);
            full.insert(full.end(), code.begin(), code.end());
            codes.push_back(std::move(full));
            sign *= s;
        }
    }
    // strut components: exactly two legs joined by one edge
    for (int leg = 0; leg < d.n_legs(); ++leg) {
        const int h = d.leg_he(leg);
        const int m = d.mate[h];
        if (!d.is_leg_he(m)) continue;
        if (m < h) continue;  // count each strut once
        const int c1 = d.leg_color[leg];
        const int c2 = d.leg_color[m - 3 * d.n_tri];
        codes.push_back({0, std::min(c1, c2), std::max(c1, c2)});
    }

    std::sort(codes.begin(), codes.end());
    DiagramKey key;
    key.code.push_back(static_cast<std::int32_t>(codes.size()));
    for (const auto& c : codes) key.code.insert(key.code.end(), c.begin(), c.end());

    res.sign = sign;
    res.key = std::move(key);
    res.canonical = decode_diagram(res.key);
    return res;
}

/// Rebuilds the canonical representative from its key.
inline JacobiDiagram decode_diagram(const DiagramKey& key) {
    const auto& c = key.code;
    std::size_t pos = 0;
    auto next = [&]() -> std::int32_t {
        if (pos >= c.size()) throw std::invalid_argument("truncated diagram key");
        return c[pos++];
    };
    const int ncomp = next();
    struct TriComp {
        int t;
        std::vector<std::int32_t> toks;
    };
    std::vector<std::pair<int, int>> strut_colors;
    std::vector<TriComp> tris;
    for (int i = 0; i < ncomp; ++i) {
        const int tag = next();
        if (tag == 0) {
            int a = next(), b = next();
            strut_colors.emplace_back(a, b);
        } else {
            TriComp tc;
            tc.t = next();
            next();  // leg count, recomputed below
            tc.toks.resize(static_cast<std::size_t>(6 * tc.t));
            for (auto& x : tc.toks) x = next();
            tris.push_back(std::move(tc));
        }
    }
    if (pos != c.size()) throw std::invalid_argument("trailing data in diagram key");

    JacobiDiagram d;
    std::vector<std::pair<int, int>> edges;
    int vbase = 0;
    std::vector<std::pair<int, int>> tri_leg_slots;  // (half-edge slot, color)
    for (const auto& tc : tris) {
        std::set<std::pair<int, int>> seen;
        for (int slot = 0; slot < 3 * tc.t; ++slot) {
            const std::int32_t tag = tc.toks[static_cast<std::size_t>(2 * slot)];
            const std::int32_t val = tc.toks[static_cast<std::size_t>(2 * slot + 1)];
            if (tag == 0) {
                tri_leg_slots.emplace_back(3 * vbase + slot, val);
            } else {
                const int other = static_cast<int>(val);
                auto key2 = std::minmax(slot, other);
                if (seen.insert({key2.first, key2.second}).second)
                    edges.emplace_back(3 * vbase + key2.first, 3 * vbase + key2.second);
            }
        }
        vbase += tc.t;
    }
    d.n_tri = vbase;
    // legs: trivalent-attached legs in slot order, then strut legs
    for (auto [he, color] : tri_leg_slots) {
        const int leg = d.n_legs();
        d.leg_color.push_back(color);
        edges.emplace_back(he, 3 * vbase + leg);
    }
    for (auto [c1, c2] : strut_colors) {
        const int l1 = d.n_legs();
        d.leg_color.push_back(c1);
        d.leg_color.push_back(c2);
        edges.emplace_back(3 * vbase + l1, 3 * vbase + l1 + 1);
    }
    d.mate.assign(static_cast<std::size_t>(d.n_half_edges()), -1);
    for (auto [a, b] : edges) {
        d.mate[static_cast<std::size_t>(a)] = b;
        d.mate[static_cast<std::size_t>(b)] = a;
    }
    d.validate();
    return d;
}

}  // namespace splitkit
