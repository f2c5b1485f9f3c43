#pragma once

#include <splitkit/element.hpp>
#include <splitkit/matrix.hpp>

#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

namespace splitkit {

/// Thrown when a gluing closes a chain of struts into a vertexless circle,
/// which lies outside the span of uni-trivalent graphs.
struct CircleError : std::domain_error {
    CircleError() : std::domain_error("gluing produced a circle component (no vertices)") {}
};

/// Glues the given disjoint leg pairs of one diagram: the paired legs vanish
/// and their attaching edges are fused. Colors of surviving legs keep their
/// positions' colors.
inline JacobiDiagram glue_legs(const JacobiDiagram& d, const std::vector<std::pair<int, int>>& leg_pairs) {
    const int L = d.n_legs();
    std::vector<int> conn(static_cast<std::size_t>(L), -1);  // leg -> partner leg
    for (auto [a, b] : leg_pairs) {
        if (a < 0 || b < 0 || a >= L || b >= L || a == b)
            throw std::invalid_argument("bad leg pair");
        if (conn[static_cast<std::size_t>(a)] != -1 || conn[static_cast<std::size_t>(b)] != -1)
            throw std::invalid_argument("leg glued twice");
        conn[static_cast<std::size_t>(a)] = b;
        conn[static_cast<std::size_t>(b)] = a;
    }
    auto is_glued_he = [&](int he) {
        return d.is_leg_he(he) && conn[static_cast<std::size_t>(he - 3 * d.n_tri)] != -1;
    };

    // resolve each surviving half-edge through chains of glued struts
    auto resolve = [&](int he) {
        int m = d.mate[static_cast<std::size_t>(he)];
        int steps = 0;
        while (is_glued_he(m)) {
            const int leg = m - 3 * d.n_tri;
            const int partner = conn[static_cast<std::size_t>(leg)];
            m = d.mate[static_cast<std::size_t>(d.leg_he(partner))];
            if (++steps > d.n_half_edges()) throw CircleError();
        }
        return m;
    };

    JacobiDiagram r;
    r.n_tri = d.n_tri;
    std::vector<int> new_leg(static_cast<std::size_t>(L), -1);
    for (int leg = 0; leg < L; ++leg) {
        if (conn[static_cast<std::size_t>(leg)] != -1) continue;
        new_leg[static_cast<std::size_t>(leg)] = r.n_legs();
        r.leg_color.push_back(d.leg_color[static_cast<std::size_t>(leg)]);
    }
    auto remap = [&](int he) {
        if (!d.is_leg_he(he)) return he;
        const int nl = new_leg[static_cast<std::size_t>(he - 3 * d.n_tri)];
        return 3 * r.n_tri + nl;
    };
    r.mate.assign(static_cast<std::size_t>(r.n_half_edges()), -1);
    for (int he = 0; he < d.n_half_edges(); ++he) {
        if (is_glued_he(he)) continue;
        const int m = resolve(he);
        if (m == he || is_glued_he(m)) throw CircleError();
        r.mate[static_cast<std::size_t>(remap(he))] = remap(m);
    }
    // a chain of glued struts with no surviving end is a circle
    for (int leg = 0; leg < L; ++leg) {
        if (conn[static_cast<std::size_t>(leg)] == -1) continue;
        const int m = d.mate[static_cast<std::size_t>(d.leg_he(leg))];
        if (!is_glued_he(m)) continue;
        // both ends of this edge are glued legs: walk to check some chain end survives
        int cur = d.leg_he(leg);
        int steps = 0;
        bool open = false;
        int probe = d.mate[static_cast<std::size_t>(cur)];
        while (true) {
            if (!is_glued_he(probe)) {
                open = true;
                break;
            }
            const int partner = conn[static_cast<std::size_t>(probe - 3 * d.n_tri)];
            probe = d.mate[static_cast<std::size_t>(d.leg_he(partner))];
            if (++steps > d.n_half_edges()) break;
        }
        if (!open) throw CircleError();
    }
    r.validate();
    return r;
}

/// All sets of disjoint unordered leg pairs drawn from `legs`, with a weight
/// callback per pair; zero-weight pairs are pruned. `perfect` restricts to
/// pairings covering every leg. The callback also receives the unpaired legs.
template <class WeightFn, class F>
void for_each_pairing(const std::vector<int>& legs, WeightFn&& weight, bool perfect, F&& fn) {
    const int n = static_cast<int>(legs.size());
    enum : char { kFree = 0, kPaired = 1, kSkipped = 2 };
    std::vector<char> state(static_cast<std::size_t>(n), kFree);
    std::vector<std::pair<int, int>> pairs;

    std::function<void(int, Rat)> rec = [&](int lo, Rat w) {
        int a = lo;
        while (a < n && state[static_cast<std::size_t>(a)] != kFree) ++a;
        if (a == n) {
            std::vector<int> free_legs;
            for (int i = 0; i < n; ++i)
                if (state[static_cast<std::size_t>(i)] == kSkipped)
                    free_legs.push_back(legs[static_cast<std::size_t>(i)]);
            fn(pairs, free_legs, w);
            return;
        }
        if (!perfect) {
            state[static_cast<std::size_t>(a)] = kSkipped;
            rec(a + 1, w);
            state[static_cast<std::size_t>(a)] = kFree;
        }
        for (int b = a + 1; b < n; ++b) {
            if (state[static_cast<std::size_t>(b)] != kFree) continue;
            const Rat pw = weight(legs[static_cast<std::size_t>(a)], legs[static_cast<std::size_t>(b)]);
            if (pw == 0) continue;
            state[static_cast<std::size_t>(a)] = kPaired;
            state[static_cast<std::size_t>(b)] = kPaired;
            pairs.emplace_back(legs[static_cast<std::size_t>(a)], legs[static_cast<std::size_t>(b)]);
            rec(a + 1, w * pw);
            pairs.pop_back();
            state[static_cast<std::size_t>(a)] = kFree;
            state[static_cast<std::size_t>(b)] = kFree;
        }
    };
    rec(0, Rat(1));
}

namespace detail {

template <class F>
void for_each_bijection(const std::vector<int>& xs, const std::vector<int>& ys, F&& fn) {
    std::vector<int> perm(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) perm[i] = static_cast<int>(i);
    std::vector<std::pair<int, int>> match(xs.size());
    std::sort(perm.begin(), perm.end());
    do {
        for (std::size_t i = 0; i < xs.size(); ++i)
            match[i] = {xs[i], ys[static_cast<std::size_t>(perm[i])]};
        fn(match);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

inline JacobiDiagram union_of(const JacobiDiagram& da, const JacobiDiagram& db,
                              const std::vector<int>& recolor_b, std::vector<int>* b_leg_map) {
    JacobiDiagram d;
    d.n_tri = da.n_tri + db.n_tri;
    d.leg_color = da.leg_color;
    for (int c : db.leg_color) d.leg_color.push_back(recolor_b.empty() ? c : recolor_b.at(static_cast<std::size_t>(c)));
    d.mate.assign(static_cast<std::size_t>(d.n_half_edges()), -1);
    auto map_a = [&](int h) { return da.is_leg_he(h) ? h + 3 * db.n_tri : h; };
    auto map_b = [&](int h) {
        return db.is_leg_he(h) ? h + 3 * da.n_tri + da.n_legs() : h + 3 * da.n_tri;
    };
    for (int h = 0; h < da.n_half_edges(); ++h)
        d.mate[static_cast<std::size_t>(map_a(h))] = map_a(da.mate[h]);
    for (int h = 0; h < db.n_half_edges(); ++h)
        d.mate[static_cast<std::size_t>(map_b(h))] = map_b(db.mate[h]);
    if (b_leg_map) {
        b_leg_map->resize(static_cast<std::size_t>(db.n_legs()));
        for (int l = 0; l < db.n_legs(); ++l) (*b_leg_map)[static_cast<std::size_t>(l)] = da.n_legs() + l;
    }
    return d;
}

}  // namespace detail

/// Symmetric gluing pairing over the color subset S: per S-color, sums over
/// all bijections between the S-legs of each left and right diagram (zero
/// when multiplicities differ). Result is colored by (left - S) ∪ (right - S).
inline DiagramElement glue_pairing(const DiagramElement& left, const DiagramElement& right,
                                   const std::vector<std::string>& over) {
    const ColorSet& cl = left.colors();
    const ColorSet& cr = right.colors();
    std::set<std::string> sset(over.begin(), over.end());
    for (const auto& s : over) {
        cl.require(s);
        cr.require(s);
    }
    std::vector<std::string> out_labels;
    std::vector<int> lmap(cl.size(), -1), rmap(cr.size(), -1);
    for (std::size_t i = 0; i < cl.size(); ++i)
        if (!sset.count(cl.labels()[i])) {
            lmap[i] = static_cast<int>(out_labels.size());
            out_labels.push_back(cl.labels()[i]);
        }
    for (std::size_t i = 0; i < cr.size(); ++i)
        if (!sset.count(cr.labels()[i])) {
            for (const auto& l : out_labels)
                if (l == cr.labels()[i])
                    throw std::domain_error("pairing color sets overlap outside S: " + cr.labels()[i]);
            rmap[i] = static_cast<int>(out_labels.size());
            out_labels.push_back(cr.labels()[i]);
        }
    const ColorSet out_colors((out_labels));

    std::optional<int> cap = left.idegree_cap();
    if (right.idegree_cap() && (!cap || *right.idegree_cap() < *cap)) cap = right.idegree_cap();
    DiagramElement out(out_colors, cap);
    if (left.truncated() || right.truncated()) out.mark_truncated();

    // sentinel recolor: S-colors of both sides share a scratch palette
    const int scratch_base = static_cast<int>(out_labels.size());
    std::vector<int> s_index(cl.size(), -1);
    {
        int k = 0;
        for (std::size_t i = 0; i < cl.size(); ++i)
            if (sset.count(cl.labels()[i])) s_index[i] = scratch_base + k++;
    }
    std::vector<int> s_index_r(cr.size(), -1);
    for (std::size_t i = 0; i < cr.size(); ++i)
        if (sset.count(cr.labels()[i]))
            s_index_r[i] = s_index[static_cast<std::size_t>(cl.require(cr.labels()[i]))];

    for (const auto& [kl, tl] : left.terms()) {
        for (const auto& [kr, tr] : right.terms()) {
            // recolor into the combined palette
            std::vector<int> ra(cl.size()), rb(cr.size());
            for (std::size_t i = 0; i < cl.size(); ++i) ra[i] = lmap[i] >= 0 ? lmap[i] : s_index[i];
            for (std::size_t i = 0; i < cr.size(); ++i) rb[i] = rmap[i] >= 0 ? rmap[i] : s_index_r[i];
            JacobiDiagram da = tl.diagram;
            for (auto& c : da.leg_color) c = ra[static_cast<std::size_t>(c)];
            std::vector<int> b_leg_map;
            JacobiDiagram u = detail::union_of(da, tr.diagram, rb, &b_leg_map);

            // per S-color leg lists
            bool feasible = true;
            std::vector<std::vector<int>> la(over.size()), lb(over.size());
            std::vector<int> scolor(over.size());
            for (std::size_t s = 0; s < over.size(); ++s)
                scolor[s] = s_index[static_cast<std::size_t>(cl.require(over[s]))];
            for (int l = 0; l < da.n_legs(); ++l)
                for (std::size_t s = 0; s < over.size(); ++s)
                    if (da.leg_color[static_cast<std::size_t>(l)] == scolor[s]) la[s].push_back(l);
            for (int l = 0; l < tr.diagram.n_legs(); ++l) {
                const int c = rb[static_cast<std::size_t>(tr.diagram.leg_color[static_cast<std::size_t>(l)])];
                for (std::size_t s = 0; s < over.size(); ++s)
                    if (c == scolor[s]) lb[s].push_back(b_leg_map[static_cast<std::size_t>(l)]);
            }
            for (std::size_t s = 0; s < over.size(); ++s)
                if (la[s].size() != lb[s].size()) feasible = false;
            if (!feasible) continue;

            // product of per-color bijections
            std::vector<std::pair<int, int>> pairs;
            std::function<void(std::size_t)> rec = [&](std::size_t s) {
                if (s == over.size()) {
                    out.add(glue_legs(u, pairs), tl.coeff * tr.coeff);
                    return;
                }
                if (la[s].empty()) {
                    rec(s + 1);
                    return;
                }
                detail::for_each_bijection(la[s], lb[s], [&](const std::vector<std::pair<int, int>>& m) {
                    const std::size_t base = pairs.size();
                    pairs.insert(pairs.end(), m.begin(), m.end());
                    rec(s + 1);
                    pairs.resize(base);
                });
            };
            rec(0);
        }
    }
    return out;
}

/// Sum over sets of disjoint unordered leg pairs, each pair {v,w} weighted by
/// form(color v, color w); mode `all` keeps only perfect matchings. Pairs of
/// legs attached to the same trivalent vertex vanish under AS and are skipped.
enum class GlueMode { some, all };

inline DiagramElement glue_legs_with_form(const DiagramElement& e, const RatMat& form, GlueMode mode) {
    const std::size_t n = e.colors().size();
    if (form.rows() != n || form.cols() != n)
        throw std::invalid_argument("form size does not match the color set");

    // symmetry required on the span of colors actually used by legs
    std::vector<bool> used(n, false);
    for (const auto& [k, t] : e.terms())
        for (int c : t.diagram.leg_color) used[static_cast<std::size_t>(c)] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (used[i] && used[j] && form(i, j) != form(j, i))
                throw std::domain_error("gluing form is not symmetric on the element's colors");

    DiagramElement out(e.colors(), e.idegree_cap());
    if (e.truncated()) out.mark_truncated();
    for (const auto& [k, term] : e.terms()) {
        const JacobiDiagram& d = term.diagram;
        std::vector<int> legs(static_cast<std::size_t>(d.n_legs()));
        for (int i = 0; i < d.n_legs(); ++i) legs[static_cast<std::size_t>(i)] = i;
        auto weight = [&](int a, int b) -> Rat {
            const int ha = d.mate[static_cast<std::size_t>(d.leg_he(a))];
            const int hb = d.mate[static_cast<std::size_t>(d.leg_he(b))];
            if (!d.is_leg_he(ha) && !d.is_leg_he(hb) && ha / 3 == hb / 3) return Rat(0);  // AS
            return form(static_cast<std::size_t>(d.leg_color[static_cast<std::size_t>(a)]),
                        static_cast<std::size_t>(d.leg_color[static_cast<std::size_t>(b)]));
        };
        for_each_pairing(legs, weight, mode == GlueMode::all,
                         [&](const std::vector<std::pair<int, int>>& pairs, const std::vector<int>&,
                             const Rat& w) { out.add(glue_legs(d, pairs), term.coeff * w); });
    }
    return out;
}

}  // namespace splitkit
