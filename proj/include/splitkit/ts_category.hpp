#pragma once

#include <splitkit/glue.hpp>
#include <splitkit/strata.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

namespace splitkit {

/// Expands exp_⊔ of a strut combination. The matrix is read as the combination
/// assigning the unordered strut {i,j} the coefficient m_ij (including the
/// diagonal). Truncation is by diagram degree, i.e. the number of struts.
inline DiagramElement exp_strut(const ColorSet& colors, const RatMat& m, int degree_cap) {
    if (m.rows() != colors.size() || m.cols() != colors.size())
        throw std::invalid_argument("strut matrix size does not match colors");
    if (!m.is_symmetric()) throw std::domain_error("strut matrix must be symmetric");
    if (degree_cap < 0) throw std::invalid_argument("negative degree cap");

    struct StrutType {
        int i, j;
        Rat c;
    };
    std::vector<StrutType> types;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (m(i, j) != 0) types.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});

    DiagramElement out(colors);
    std::vector<int> counts(types.size(), 0);
    std::function<void(std::size_t, int, Rat)> rec = [&](std::size_t t, int total, Rat coeff) {
        if (t == types.size()) {
            JacobiDiagram d;
            d.n_tri = 0;
            std::vector<std::pair<int, int>> edges;
            for (std::size_t k = 0; k < types.size(); ++k)
                for (int r = 0; r < counts[k]; ++r) {
                    const int l1 = d.n_legs();
                    d.leg_color.push_back(types[k].i);
                    d.leg_color.push_back(types[k].j);
                    edges.emplace_back(l1, l1 + 1);
                }
            d.mate.assign(static_cast<std::size_t>(d.n_half_edges()), -1);
            for (auto [a, b] : edges) {
                d.mate[static_cast<std::size_t>(a)] = b;
                d.mate[static_cast<std::size_t>(b)] = a;
            }
            out.add(d, coeff);
            return;
        }
        Rat c = coeff;
        for (int k = 0; total + k <= degree_cap; ++k) {
            counts[t] = k;
            rec(t + 1, total + k, c);
            c = c * types[t].c / (k + 1);
        }
        counts[t] = 0;
    };
    rec(0, 0, Rat(1));
    return out;
}

/// Morphism of the top-substantial category ^tsA(g, f): colors {1+..g+, 1-..f-},
/// stored as the strut matrix of eq-style Gaussian part together with the
/// strut-free Y part truncated at an i-degree cap.
struct Morphism {
    int g = 0;         // source genus (top colors)
    int f = 0;         // target genus (bottom colors)
    RatMat strut;      // (g+f) x (g+f): rows 0..g-1 are i+, g..g+f-1 are i-
    DiagramElement y;  // over ColorSet::top_bottom(g, f), no strut components
    int cap = 0;

    static Morphism make(int g, int f, RatMat strut, DiagramElement y, int cap) {
        Morphism m{g, f, std::move(strut), std::move(y), cap};
        m.validate();
        return m;
    }

    static Morphism identity(int g, int cap) {
        RatMat s(static_cast<std::size_t>(2 * g), static_cast<std::size_t>(2 * g));
        for (int i = 0; i < g; ++i) {
            s(static_cast<std::size_t>(i), static_cast<std::size_t>(g + i)) = 1;
            s(static_cast<std::size_t>(g + i), static_cast<std::size_t>(i)) = 1;
        }
        return make(g, g, std::move(s), DiagramElement::unit(ColorSet::top_bottom(g, g), cap), cap);
    }

    void validate() const {
        const std::size_t n = static_cast<std::size_t>(g + f);
        if (strut.rows() != n || strut.cols() != n)
            throw std::invalid_argument("strut matrix size mismatch");
        if (!strut.is_symmetric()) throw std::domain_error("strut matrix must be symmetric");
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
                if (strut(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != 0)
                    throw std::domain_error("top-top strut block must vanish");
        if (y.colors() != ColorSet::top_bottom(g, f))
            throw std::domain_error("y part colored by the wrong set");
        if (has_strut_component(y))
            throw std::domain_error("y part contains a strut component");
        if (!y.idegree_cap() || *y.idegree_cap() > cap)
            throw std::domain_error("y part not truncated at the morphism cap");
    }

    /// eq-(2.2)-style expansion exp_⊔(strut/2) ⊔ y, truncated at total degree.
    /// The matrix is read Lk-style: the unordered strut {i,j} carries S_ij off
    /// the diagonal and S_ii/2 on it.
    DiagramElement materialize(int degree_cap) const {
        RatMat half = strut;
        for (std::size_t i = 0; i < half.rows(); ++i) half(i, i) /= 2;
        DiagramElement ex = exp_strut(y.colors(), half, degree_cap);
        DiagramElement full = disjoint_union(ex, y);
        DiagramElement out(full.colors(), full.idegree_cap());
        if (full.truncated()) out.mark_truncated();
        for (const auto& [k, t] : full.terms())
            if (t.diagram.n_tri + t.diagram.n_legs() <= 2 * degree_cap) out.add_canonical(k, t.diagram, t.coeff);
        return out;
    }
};

/// Composite in ^tsA: glues all i+ legs of d to all i- legs of e. The strut
/// part composes in closed form (chains through the glued struts); the Y parts
/// glue exhaustively with the strut chains supplying recolorings and partial
/// self-pairings. Verified against brute-force gluing by the test oracle.
inline Morphism compose(const Morphism& d, const Morphism& e, int cap) {
    if (e.f != d.g) throw std::domain_error("genus mismatch in composition");
    if (d.cap < cap || e.cap < cap)
        throw std::domain_error("operands must be truncated at or above the requested cap");
    const int g = d.g, f = d.f, h = e.g;
    const std::size_t gu = static_cast<std::size_t>(g), fu = static_cast<std::size_t>(f),
                      hu = static_cast<std::size_t>(h);

    // blocks: X = d[g+, f-], A = d[f-, f-], Q = e[g-, g-], Y = e[g-, h+]
    RatMat X(gu, fu), A(fu, fu), Q(gu, gu), Y(gu, hu);
    for (std::size_t i = 0; i < gu; ++i)
        for (std::size_t a = 0; a < fu; ++a) X(i, a) = d.strut(i, gu + a);
    for (std::size_t a = 0; a < fu; ++a)
        for (std::size_t b = 0; b < fu; ++b) A(a, b) = d.strut(gu + a, gu + b);
    for (std::size_t i = 0; i < gu; ++i)
        for (std::size_t j = 0; j < gu; ++j) Q(i, j) = e.strut(hu + i, hu + j);
    for (std::size_t i = 0; i < gu; ++i)
        for (std::size_t b = 0; b < hu; ++b) Y(i, b) = e.strut(hu + i, b);

    const RatMat QX = Q * X;
    const RatMat Xt = X.transpose();

    RatMat s(hu + fu, hu + fu);
    const RatMat bottom = A + Xt * Q * X;   // f- x f-
    const RatMat cross = Y.transpose() * X;  // h+ x f-
    for (std::size_t b = 0; b < hu; ++b)
        for (std::size_t a = 0; a < fu; ++a) {
            s(b, hu + a) = cross(b, a);
            s(hu + a, b) = cross(b, a);
        }
    for (std::size_t a = 0; a < fu; ++a)
        for (std::size_t b = 0; b < fu; ++b) s(hu + a, hu + b) = bottom(a, b);

    const ColorSet out_colors = ColorSet::top_bottom(h, f);
    DiagramElement y_out(out_colors, cap);
    if (d.y.truncated() || e.y.truncated()) y_out.mark_truncated();

    // wires: a leftover d-side i+ leg can exit through Y (to h+) or through a
    // Q-then-X chain (to f-); a leftover e-side i- leg exits through X.
    auto out_top = [&](int b) { return b; };                 // h+ index -> out color
    auto out_bot = [&](int a) { return h + a; };             // f- index -> out color
    std::vector<ColorCombo> wire_d(gu), wire_e(gu);
    for (std::size_t i = 0; i < gu; ++i) {
        for (std::size_t b = 0; b < hu; ++b)
            if (Y(i, b) != 0) wire_d[i].emplace_back(out_top(static_cast<int>(b)), Y(i, b));
        for (std::size_t a = 0; a < fu; ++a)
            if (QX(i, a) != 0) wire_d[i].emplace_back(out_bot(static_cast<int>(a)), QX(i, a));
        for (std::size_t a = 0; a < fu; ++a)
            if (X(i, a) != 0) wire_e[i].emplace_back(out_bot(static_cast<int>(a)), X(i, a));
    }

    for (const auto& [kd, td] : d.y.terms()) {
        for (const auto& [ke, te] : e.y.terms()) {
            const JacobiDiagram& D = td.diagram;
            const JacobiDiagram& E = te.diagram;
            if (D.idegree() + E.idegree() > cap) {
                y_out.mark_truncated();
                continue;
            }
            // union with e-part colors shifted into a scratch palette:
            // out colors [0, h+f); d-top scratch h+f+i; e-bottom scratch h+f+g+i
            const int base = h + f;
            std::vector<int> recolor_d(static_cast<std::size_t>(g + f));
            for (int i = 0; i < g; ++i) recolor_d[static_cast<std::size_t>(i)] = base + i;
            for (int a = 0; a < f; ++a) recolor_d[static_cast<std::size_t>(g + a)] = out_bot(a);
            std::vector<int> recolor_e(static_cast<std::size_t>(h + g));
            for (int b = 0; b < h; ++b) recolor_e[static_cast<std::size_t>(b)] = out_top(b);
            for (int i = 0; i < g; ++i) recolor_e[static_cast<std::size_t>(h + i)] = base + g + i;

            JacobiDiagram Dr = D;
            for (auto& c : Dr.leg_color) c = recolor_d[static_cast<std::size_t>(c)];
            std::vector<int> e_leg_map;
            JacobiDiagram U = detail::union_of(Dr, E, recolor_e, &e_leg_map);

            std::vector<int> dlegs, elegs;  // legs of U needing treatment
            for (int l = 0; l < U.n_legs(); ++l) {
                const int c = U.leg_color[static_cast<std::size_t>(l)];
                if (c >= base && c < base + g) dlegs.push_back(l);
                if (c >= base + g) elegs.push_back(l);
            }

            auto qweight = [&](int la, int lb) -> Rat {
                const int ha = U.mate[static_cast<std::size_t>(U.leg_he(la))];
                const int hb = U.mate[static_cast<std::size_t>(U.leg_he(lb))];
                if (!U.is_leg_he(ha) && !U.is_leg_he(hb) && ha / 3 == hb / 3) return Rat(0);
                const std::size_t i = static_cast<std::size_t>(U.leg_color[static_cast<std::size_t>(la)] - base);
                const std::size_t j = static_cast<std::size_t>(U.leg_color[static_cast<std::size_t>(lb)] - base);
                return Q(i, j);
            };

            // choose Q-glued pairs among d-top legs, then direct matchings of
            // the remaining d-top legs with same-index e-bottom legs
            for_each_pairing(dlegs, qweight, false,
                [&](const std::vector<std::pair<int, int>>& qpairs, const std::vector<int>& dfree,
                    const Rat& qw) {
                    // partial matching: per color index i, between d-free legs
                    // colored base+i and e legs colored base+g+i
                    std::vector<std::vector<int>> dby(gu), eby(gu);
                    for (int l : dfree)
                        dby[static_cast<std::size_t>(U.leg_color[static_cast<std::size_t>(l)] - base)].push_back(l);
                    for (int l : elegs)
                        eby[static_cast<std::size_t>(U.leg_color[static_cast<std::size_t>(l)] - base - g)].push_back(l);

                    std::vector<std::pair<int, int>> glued(qpairs);
                    std::function<void(std::size_t)> per_color = [&](std::size_t i) {
                        if (i == gu) {
                            // glue, then expand leftover scratch legs through wires
                            JacobiDiagram Gd;
                            try {
                                Gd = glue_legs(U, glued);
                            } catch (const CircleError&) {
                                throw std::logic_error("strut-free parts cannot close circles");
                            }
                            std::vector<ColorCombo> combos(static_cast<std::size_t>(Gd.n_legs()));
                            for (int l = 0; l < Gd.n_legs(); ++l) {
                                const int c = Gd.leg_color[static_cast<std::size_t>(l)];
                                if (c < base)
                                    combos[static_cast<std::size_t>(l)] = {{c, Rat(1)}};
                                else if (c < base + g)
                                    combos[static_cast<std::size_t>(l)] = wire_d[static_cast<std::size_t>(c - base)];
                                else
                                    combos[static_cast<std::size_t>(l)] = wire_e[static_cast<std::size_t>(c - base - g)];
                            }
                            expand_legs_into(y_out, Gd, td.coeff * te.coeff * qw, combos);
                            return;
                        }
                        const auto& ds = dby[i];
                        const auto& es = eby[i];
                        // all partial injective matchings between ds and es
                        std::vector<char> etaken(es.size(), 0);
                        std::function<void(std::size_t)> pick = [&](std::size_t di) {
                            if (di == ds.size()) {
                                per_color(i + 1);
                                return;
                            }
                            pick(di + 1);  // leave this d leg to its wire
                            for (std::size_t ei = 0; ei < es.size(); ++ei) {
                                if (etaken[ei]) continue;
                                etaken[ei] = 1;
                                glued.emplace_back(ds[di], es[ei]);
                                pick(di + 1);
                                glued.pop_back();
                                etaken[ei] = 0;
                            }
                        };
                        pick(0);
                    };
                    per_color(0);
                });
        }
    }

    return Morphism::make(h, f, std::move(s), std::move(y_out), cap);
}

/// Tensor product: disjoint union with e's colors shifted by (d.g, d.f).
inline Morphism tensor(const Morphism& d, const Morphism& e) {
    const int g = d.g + e.g, f = d.f + e.f;
    RatMat s(static_cast<std::size_t>(g + f), static_cast<std::size_t>(g + f));
    auto top = [&](bool second, int i) { return second ? d.g + i : i; };
    auto bot = [&](bool second, int a) { return g + (second ? d.f + a : a); };
    auto embed = [&](const Morphism& m, bool second) {
        for (int i = 0; i < m.g + m.f; ++i)
            for (int j = 0; j < m.g + m.f; ++j) {
                const Rat v = m.strut(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                if (v == 0) continue;
                const int oi = i < m.g ? top(second, i) : bot(second, i - m.g);
                const int oj = j < m.g ? top(second, j) : bot(second, j - m.g);
                s(static_cast<std::size_t>(oi), static_cast<std::size_t>(oj)) = v;
            }
    };
    embed(d, false);
    embed(e, true);

    const int cap = std::min(d.cap, e.cap);
    const ColorSet out_colors = ColorSet::top_bottom(g, f);
    DiagramElement yd(out_colors, cap), ye(out_colors, cap);
    auto recolor_into = [&](const Morphism& m, bool second, DiagramElement& out) {
        for (const auto& [k, t] : m.y.terms()) {
            JacobiDiagram dd = t.diagram;
            for (auto& c : dd.leg_color)
                c = c < m.g ? top(second, c) : bot(second, c - m.g);
            out.add(dd, t.coeff);
        }
        if (m.y.truncated()) out.mark_truncated();
    };
    recolor_into(d, false, yd);
    recolor_into(e, true, ye);
    return Morphism::make(g, f, std::move(s), disjoint_union(yd, ye), cap);
}

}  // namespace splitkit
