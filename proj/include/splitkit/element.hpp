#pragma once

#include <splitkit/diagram.hpp>
#include <splitkit/rational.hpp>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace splitkit {

/// Q-linear combination of AS-canonical Jacobi diagrams over a fixed ColorSet.
/// Terms above the optional i-degree cap are dropped and flagged (`truncated`).
class DiagramElement {
public:
    struct Term {
        Rat coeff;
        JacobiDiagram diagram;
    };

    DiagramElement() = default;
    explicit DiagramElement(ColorSet colors, std::optional<int> idegree_cap = std::nullopt)
        : colors_(std::move(colors)), cap_(idegree_cap) {}

    static DiagramElement zero(ColorSet colors, std::optional<int> cap = std::nullopt) {
        return DiagramElement(std::move(colors), cap);
    }
    /// The empty diagram with coefficient 1 (the unit for disjoint union).
    static DiagramElement unit(ColorSet colors, std::optional<int> cap = std::nullopt) {
        DiagramElement e(std::move(colors), cap);
        e.add(JacobiDiagram::empty(), Rat(1));
        return e;
    }

    const ColorSet& colors() const { return colors_; }
    std::optional<int> idegree_cap() const { return cap_; }
    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }
    void set_cap(std::optional<int> cap) { cap_ = cap; }

    const std::map<DiagramKey, Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Canonicalizes and accumulates; silently drops AS-zero diagrams.
    void add(const JacobiDiagram& d, const Rat& coeff) {
        if (coeff == 0) return;
        for (int c : d.leg_color)
            if (c < 0 || c >= static_cast<int>(colors_.size()))
                throw std::domain_error("leg color outside the element's color set");
        if (cap_ && d.idegree() > *cap_) {
            truncated_ = true;
            return;
        }
        CanonResult cr = canonical_as(d);
        if (cr.sign == 0) return;
        add_canonical(std::move(cr.key), std::move(cr.canonical), coeff * cr.sign);
    }

    void add_canonical(DiagramKey key, JacobiDiagram canon, const Rat& coeff) {
        if (coeff == 0) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), Term{coeff, std::move(canon)});
        } else {
            it->second.coeff += coeff;
            if (it->second.coeff == 0) terms_.erase(it);
        }
    }

    DiagramElement& operator+=(const DiagramElement& o) {
        require_same_colors(o);
        for (const auto& [k, t] : o.terms_) {
            if (cap_ && t.diagram.idegree() > *cap_) {
                truncated_ = true;
                continue;
            }
            add_canonical(k, t.diagram, t.coeff);
        }
        truncated_ = truncated_ || o.truncated_;
        return *this;
    }
    DiagramElement operator+(const DiagramElement& o) const {
        DiagramElement r = *this;
        r += o;
        return r;
    }
    DiagramElement operator-(const DiagramElement& o) const { return *this + o.scaled(Rat(-1)); }

    DiagramElement scaled(const Rat& c) const {
        DiagramElement r(colors_, cap_);
        r.truncated_ = truncated_;
        if (c == 0) return r;
        for (const auto& [k, t] : terms_) r.terms_.emplace(k, Term{t.coeff * c, t.diagram});
        return r;
    }

    bool operator==(const DiagramElement& o) const {
        if (colors_ != o.colors_ || terms_.size() != o.terms_.size()) return false;
        auto it = o.terms_.begin();
        for (const auto& [k, t] : terms_) {
            if (k != it->first || t.coeff != it->second.coeff) return false;
            ++it;
        }
        return true;
    }
    bool operator!=(const DiagramElement& o) const { return !(*this == o); }

    /// Keeps only terms of the given i-degree.
    DiagramElement idegree_part(int t) const {
        DiagramElement r(colors_, cap_);
        r.truncated_ = truncated_;
        for (const auto& [k, term] : terms_)
            if (term.diagram.idegree() == t) r.terms_.emplace(k, term);
        return r;
    }

    int max_idegree() const {
        int m = 0;
        for (const auto& [k, t] : terms_) m = std::max(m, t.diagram.idegree());
        return m;
    }

    void require_same_colors(const DiagramElement& o) const {
        if (colors_ != o.colors_) throw std::domain_error("color set mismatch between elements");
    }

private:
    ColorSet colors_;
    std::map<DiagramKey, Term> terms_;
    std::optional<int> cap_;
    bool truncated_ = false;
};

inline bool has_strut_component(const JacobiDiagram& d) {
    for (int leg = 0; leg < d.n_legs(); ++leg)
        if (d.is_leg_he(d.mate[d.leg_he(leg)])) return true;
    return false;
}

inline bool has_strut_component(const DiagramElement& e) {
    for (const auto& [k, t] : e.terms())
        if (has_strut_component(t.diagram)) return true;
    return false;
}

/// True when some strut component has both leg colors in `part` (indices).
inline bool has_strut_in(const JacobiDiagram& d, const std::vector<bool>& part) {
    for (int leg = 0; leg < d.n_legs(); ++leg) {
        const int m = d.mate[d.leg_he(leg)];
        if (!d.is_leg_he(m)) continue;
        const int other = m - 3 * d.n_tri;
        if (part[static_cast<std::size_t>(d.leg_color[leg])] &&
            part[static_cast<std::size_t>(d.leg_color[other])])
            return true;
    }
    return false;
}

/// Disjoint union of elements over the same color set (bilinear).
inline DiagramElement disjoint_union(const DiagramElement& a, const DiagramElement& b) {
    a.require_same_colors(b);
    std::optional<int> cap = a.idegree_cap();
    if (b.idegree_cap() && (!cap || *b.idegree_cap() < *cap)) cap = b.idegree_cap();
    DiagramElement r(a.colors(), cap);
    if (a.truncated() || b.truncated()) r.mark_truncated();
    for (const auto& [ka, ta] : a.terms())
        for (const auto& [kb, tb] : b.terms()) {
            const JacobiDiagram &da = ta.diagram, &db = tb.diagram;
            JacobiDiagram d;
            d.n_tri = da.n_tri + db.n_tri;
            d.leg_color = da.leg_color;
            d.leg_color.insert(d.leg_color.end(), db.leg_color.begin(), db.leg_color.end());
            d.mate.assign(static_cast<std::size_t>(d.n_half_edges()), -1);
            auto map_a = [&](int h) { return da.is_leg_he(h) ? h + 3 * db.n_tri : h; };
            auto map_b = [&](int h) {
                return db.is_leg_he(h) ? h + 3 * da.n_tri + da.n_legs() : h + 3 * da.n_tri;
            };
            for (int h = 0; h < da.n_half_edges(); ++h)
                d.mate[static_cast<std::size_t>(map_a(h))] = map_a(da.mate[h]);
            for (int h = 0; h < db.n_half_edges(); ++h)
                d.mate[static_cast<std::size_t>(map_b(h))] = map_b(db.mate[h]);
            r.add(d, ta.coeff * tb.coeff);
        }
    return r;
}

/// Multiplies each diagram by r^(number of legs colored `label`).
inline DiagramElement scale_color(const DiagramElement& e, const std::string& label, const Rat& r) {
    const int ci = e.colors().require(label);
    DiagramElement out(e.colors(), e.idegree_cap());
    if (e.truncated()) out.mark_truncated();
    for (const auto& [k, t] : e.terms()) {
        int n = 0;
        for (int c : t.diagram.leg_color)
            if (c == ci) ++n;
        Rat f(1);
        for (int i = 0; i < n; ++i) f *= r;
        out.add_canonical(k, t.diagram, t.coeff * f);
    }
    return out;
}

/// Formal Q-combination of colors, used for multilinear leg expansion.
using ColorCombo = std::vector<std::pair<int, Rat>>;

/// Distributes every leg of (diagram, coeff) over the per-leg combinations,
/// producing an element over `target`. A leg with an empty combination kills
/// the diagram.
inline void expand_legs_into(DiagramElement& out, const JacobiDiagram& d, const Rat& coeff,
                             const std::vector<ColorCombo>& leg_combos) {
    const int L = d.n_legs();
    if (static_cast<int>(leg_combos.size()) != L)
        throw std::invalid_argument("one combination required per leg");
    std::vector<int> choice(static_cast<std::size_t>(L), 0);
    JacobiDiagram work = d;

    std::function<void(int, Rat)> rec = [&](int leg, Rat c) {
        if (c == 0) return;
        if (leg == L) {
            out.add(work, coeff * c);
            return;
        }
        for (const auto& [color, w] : leg_combos[static_cast<std::size_t>(leg)]) {
            work.leg_color[static_cast<std::size_t>(leg)] = color;
            rec(leg + 1, c * w);
        }
    };
    rec(0, Rat(1));
}

/// Spec operation: legs of `d` carry formal combinations over `basis`.
inline DiagramElement multilinear_expand(const JacobiDiagram& d,
                                         const std::vector<ColorCombo>& leg_combos,
                                         const ColorSet& basis,
                                         std::optional<int> cap = std::nullopt) {
    for (const auto& combo : leg_combos)
        for (const auto& [color, w] : combo)
            if (color < 0 || color >= static_cast<int>(basis.size()))
                throw std::domain_error("combination color outside the declared span");
    DiagramElement out(basis, cap);
    expand_legs_into(out, d, Rat(1), leg_combos);
    return out;
}

}  // namespace splitkit
