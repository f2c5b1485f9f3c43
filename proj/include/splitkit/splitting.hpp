#pragma once

#include <splitkit/glue.hpp>
#include <splitkit/strata.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace splitkit {

/// Family of r surgery blocks: per block a homology basis and an antisymmetric
/// trivector (stored on increasing triples), plus the cross-block linking form
/// on the direct sum and the recoloring into the target color set.
struct LPFamily {
    struct Block {
        std::vector<std::string> basis;
        std::map<std::array<int, 3>, Rat> mu;  // increasing index triples
    };

    std::vector<Block> blocks;
    RatMat ell;  // over the concatenated basis; zero diagonal blocks
    std::map<std::string, std::map<std::string, Rat>> rho;  // source label -> target combo
    ColorSet target;

    std::size_t r() const { return blocks.size(); }

    ColorSet sum_colors() const {
        std::vector<std::string> labels;
        for (const auto& b : blocks) labels.insert(labels.end(), b.basis.begin(), b.basis.end());
        return ColorSet(labels);
    }

    void validate() const {
        const ColorSet sum = sum_colors();  // throws on duplicate labels
        std::size_t n = sum.size();
        if (ell.rows() != n || ell.cols() != n)
            throw std::invalid_argument("linking form size does not match the direct-sum basis");
        if (!ell.is_symmetric()) throw std::domain_error("cross-block linking form must be symmetric");
        std::size_t off = 0;
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.basis.size(); ++i)
                for (std::size_t j = 0; j < b.basis.size(); ++j)
                    if (ell(off + i, off + j) != 0)
                        throw std::domain_error("linking form has a nonzero diagonal block");
            for (const auto& [t, c] : b.mu) {
                auto [x, y, z] = t;
                const int dim = static_cast<int>(b.basis.size());
                if (!(0 <= x && x < y && y < z && z < dim))
                    throw std::invalid_argument("trivector triples must be increasing and in range");
            }
            off += b.basis.size();
        }
        for (const auto& l : sum.labels())
            if (!rho.count(l))
                throw std::domain_error("recoloring undefined on label '" + l + "'");
        for (const auto& [src, combo] : rho) {
            sum.require(src);
            for (const auto& [dst, c] : combo) target.require(dst);
        }
    }

    /// Normalizes an arbitrary-order triple list into increasing-triple storage.
    static std::map<std::array<int, 3>, Rat> normalize_mu(
        const std::vector<std::pair<std::array<int, 3>, Rat>>& raw) {
        std::map<std::array<int, 3>, Rat> mu;
        for (const auto& [t, c] : raw) {
            std::array<int, 3> s = t;
            int sign = 1;
            // sort the triple, tracking the permutation parity
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2 - a; ++b)
                    if (s[static_cast<std::size_t>(b)] > s[static_cast<std::size_t>(b + 1)]) {
                        std::swap(s[static_cast<std::size_t>(b)], s[static_cast<std::size_t>(b + 1)]);
                        sign = -sign;
                    }
            if (s[0] == s[1] || s[1] == s[2]) continue;  // wedge with a repeat vanishes
            auto& acc = mu[s];
            acc += sign * c;
            if (acc == 0) mu.erase(s);
        }
        return mu;
    }
};

/// Disjoint union over blocks of the tripod realizations of each trivector,
/// colored in the direct-sum basis; homogeneous of i-degree r.
inline DiagramElement mu_to_tripods(const LPFamily& fam) {
    fam.validate();
    const ColorSet colors = fam.sum_colors();
    DiagramElement out = DiagramElement::unit(colors);
    std::size_t off = 0;
    for (const auto& b : fam.blocks) {
        DiagramElement block_elem(colors);
        for (const auto& [t, c] : b.mu) {
            auto [x, y, z] = t;
            JacobiDiagram tripod = JacobiDiagram::make(
                1,
                {static_cast<int>(off) + x, static_cast<int>(off) + y, static_cast<int>(off) + z},
                {{0, 3}, {1, 4}, {2, 5}});
            block_elem.add(tripod, c);
        }
        out = disjoint_union(out, block_elem);
        off += b.basis.size();
    }
    return out;
}

/// Recolors legs through a linear color map, expanding multilinearly into the
/// target basis; a leg mapped to zero kills its diagram.
inline DiagramElement rho_recolor(const DiagramElement& e,
                                  const std::map<std::string, std::map<std::string, Rat>>& map,
                                  const ColorSet& target) {
    std::vector<ColorCombo> per_color(e.colors().size());
    std::vector<bool> defined(e.colors().size(), false);
    for (const auto& [src, combo] : map) {
        const int si = e.colors().index_of(src);
        if (si < 0) continue;
        defined[static_cast<std::size_t>(si)] = true;
        for (const auto& [dst, c] : combo)
            if (c != 0) per_color[static_cast<std::size_t>(si)].emplace_back(target.require(dst), c);
    }
    DiagramElement out(target, e.idegree_cap());
    if (e.truncated()) out.mark_truncated();
    for (const auto& [k, t] : e.terms()) {
        std::vector<ColorCombo> combos(static_cast<std::size_t>(t.diagram.n_legs()));
        for (int l = 0; l < t.diagram.n_legs(); ++l) {
            const int c = t.diagram.leg_color[static_cast<std::size_t>(l)];
            if (!defined[static_cast<std::size_t>(c)])
                throw std::domain_error("recoloring undefined on color '" + e.colors().label(c) + "'");
            combos[static_cast<std::size_t>(l)] = per_color[static_cast<std::size_t>(c)];
        }
        expand_legs_into(out, t.diagram, t.coeff, combos);
    }
    return out;
}

/// Right-hand side of the splitting formulas: tripods for mu, legs glued with
/// the cross-block linking form, then recolored. Exactly the i-degree-r part.
inline DiagramElement splitting_rhs(const LPFamily& fam, GlueMode mode) {
    fam.validate();
    DiagramElement tripods = mu_to_tripods(fam);
    DiagramElement glued = glue_legs_with_form(tripods, fam.ell, mode);
    DiagramElement out = rho_recolor(glued, fam.rho, fam.target);
    return out.idegree_part(static_cast<int>(fam.r()));
}

/// Assembles an alternating sum over subsets of {1..r}; values are indexed by
/// bitmask. All 2^r subsets must be present.
inline DiagramElement alternating_sum(const std::map<unsigned long, DiagramElement>& values, int r) {
    if (r < 0 || r > 24) throw std::invalid_argument("subset count out of range");
    const unsigned long total = 1ul << r;
    auto it = values.find(0);
    if (it == values.end()) throw std::domain_error("missing value for the empty subset");
    DiagramElement acc(it->second.colors(), it->second.idegree_cap());
    for (unsigned long m = 0; m < total; ++m) {
        auto v = values.find(m);
        if (v == values.end())
            throw std::domain_error("missing value for subset mask " + std::to_string(m));
        const int bits = __builtin_popcountl(m);
        acc += bits % 2 == 0 ? v->second : v->second.scaled(Rat(-1));
    }
    return normal_form(acc);
}

}  // namespace splitkit
