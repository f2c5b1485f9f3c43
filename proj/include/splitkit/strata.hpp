#pragma once

#include <splitkit/element.hpp>
#include <splitkit/matrix.hpp>

#include <functional>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace splitkit {

enum class StratumFlavor { full, Y };

namespace detail {

/// All perfect matchings on n labeled slots (n even), as lists of pairs.
template <class F>
void for_each_perfect_matching(int n, F&& fn) {
    std::vector<int> partner(static_cast<std::size_t>(n), -1);
    std::vector<std::pair<int, int>> pairs;
    std::function<void()> rec = [&]() {
        int a = 0;
        while (a < n && partner[static_cast<std::size_t>(a)] != -1) ++a;
        if (a == n) {
            fn(pairs);
            return;
        }
        for (int b = a + 1; b < n; ++b) {
            if (partner[static_cast<std::size_t>(b)] != -1) continue;
            partner[static_cast<std::size_t>(a)] = b;
            partner[static_cast<std::size_t>(b)] = a;
            pairs.emplace_back(a, b);
            rec();
            pairs.pop_back();
            partner[static_cast<std::size_t>(a)] = -1;
            partner[static_cast<std::size_t>(b)] = -1;
        }
    };
    rec();
}

struct StratumData {
    std::vector<DiagramKey> keys;             // sorted
    std::vector<JacobiDiagram> diagrams;      // aligned with keys
    std::map<DiagramKey, std::size_t> index;
    // reduced-echelon IHX relator rows over the diagram basis
    std::vector<std::pair<std::size_t, std::vector<Rat>>> rows;  // (pivot, row)
};

/// I, H, X rewiring at the internal edge (he1, he2): relocates the four
/// adjacent strand ends by the permutation pi over half-edge positions.
inline JacobiDiagram rewire(const JacobiDiagram& d, const std::vector<std::pair<int, int>>& reloc) {
    std::vector<int> pi(static_cast<std::size_t>(d.n_half_edges()));
    for (int h = 0; h < d.n_half_edges(); ++h) pi[static_cast<std::size_t>(h)] = h;
    for (auto [from, to] : reloc) pi[static_cast<std::size_t>(from)] = to;
    JacobiDiagram r = d;
    for (int h = 0; h < d.n_half_edges(); ++h)
        r.mate[static_cast<std::size_t>(pi[static_cast<std::size_t>(h)])] =
            pi[static_cast<std::size_t>(d.mate[static_cast<std::size_t>(h)])];
    return r;
}

inline std::vector<JacobiDiagram> enumerate_stratum_diagrams(int t, const std::vector<int>& legs,
                                                             StratumFlavor flavor) {
    const int L = static_cast<int>(legs.size());
    const int n = 3 * t + L;
    std::map<DiagramKey, JacobiDiagram> seen;
    if (n % 2 != 0) return {};
    if (n == 0) {
        std::vector<JacobiDiagram> out{JacobiDiagram::empty()};
        return out;
    }
    for_each_perfect_matching(n, [&](const std::vector<std::pair<int, int>>& pairs) {
        JacobiDiagram d;
        d.n_tri = t;
        d.leg_color = legs;
        d.mate.assign(static_cast<std::size_t>(n), -1);
        for (auto [a, b] : pairs) {
            d.mate[static_cast<std::size_t>(a)] = b;
            d.mate[static_cast<std::size_t>(b)] = a;
        }
        if (flavor == StratumFlavor::Y && has_strut_component(d)) return;
        CanonResult cr = canonical_as(d);
        if (cr.sign == 0) return;
        seen.emplace(std::move(cr.key), std::move(cr.canonical));
    });
    std::vector<JacobiDiagram> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(std::move(v));
    return out;
}

/// The three-term IHX elements attached to every internal edge of every
/// stratum diagram. Identically-zero combinations are dropped.
inline std::vector<DiagramElement> stratum_relators(const ColorSet& colors, int t,
                                                    const std::vector<int>& legs,
                                                    StratumFlavor flavor) {
    std::vector<DiagramElement> out;
    if (t < 2) return out;
    for (const JacobiDiagram& d : enumerate_stratum_diagrams(t, legs, flavor)) {
        for (int he1 = 0; he1 < 3 * d.n_tri; ++he1) {
            const int he2 = d.mate[static_cast<std::size_t>(he1)];
            if (he2 < he1 || d.is_leg_he(he2)) continue;
            const int u = he1 / 3, su = he1 % 3;
            const int v = he2 / 3, sv = he2 % 3;
            if (u == v) continue;  // tadpole; not present in canonical diagrams
            const int A = 3 * u + (su + 1) % 3, B = 3 * u + (su + 2) % 3;
            const int C = 3 * v + (sv + 1) % 3, D = 3 * v + (sv + 2) % 3;
            // H: occupants (b,c) at u, (d,a) at v;  X: (a,c) at u, (d,b) at v.
            JacobiDiagram h = rewire(d, {{A, D}, {B, A}, {C, B}, {D, C}});
            JacobiDiagram x = rewire(d, {{B, D}, {C, B}, {D, C}});
            DiagramElement rel(colors);
            rel.add(d, Rat(1));
            rel.add(h, Rat(-1));
            rel.add(x, Rat(1));
            if (!rel.is_zero()) out.push_back(std::move(rel));
        }
    }
    return out;
}

inline const StratumData& stratum_data(int t, const std::vector<int>& legs, StratumFlavor flavor) {
    using Key = std::tuple<int, std::vector<int>, int>;
    static std::map<Key, StratumData> memo;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const Key key{t, legs, flavor == StratumFlavor::Y ? 1 : 0};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    StratumData data;
    int max_color = -1;
    for (int c : legs) max_color = std::max(max_color, c);
    std::vector<std::string> labels;
    for (int c = 0; c <= max_color; ++c) labels.push_back("#" + std::to_string(c));
    const ColorSet scratch(labels);

    for (JacobiDiagram& d : enumerate_stratum_diagrams(t, legs, flavor)) {
        CanonResult cr = canonical_as(d);
        data.index.emplace(cr.key, data.keys.size());
        data.keys.push_back(std::move(cr.key));
        data.diagrams.push_back(std::move(d));
    }

    if (t >= 2 && !data.keys.empty()) {
        auto relators = stratum_relators(scratch, t, legs, flavor);
        if (!relators.empty()) {
            RatMat m(relators.size(), data.keys.size());
            for (std::size_t r = 0; r < relators.size(); ++r)
                for (const auto& [k, term] : relators[r].terms())
                    m(r, data.index.at(k)) = term.coeff;
            rref(m);
            for (std::size_t r = 0; r < m.rows(); ++r) {
                std::size_t pivot = m.cols();
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (m(r, j) != 0) {
                        pivot = j;
                        break;
                    }
                if (pivot == m.cols()) break;  // zero rows trail
                std::vector<Rat> row(m.cols());
                for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(r, j);
                data.rows.emplace_back(pivot, std::move(row));
            }
        }
    }
    return memo.emplace(key, std::move(data)).first->second;
}

}  // namespace detail

/// Generating set of IHX relators for one (i-degree, leg multiset) stratum.
inline std::vector<DiagramElement> ihx_relators(const ColorSet& colors, int idegree,
                                                const std::vector<std::string>& leg_multiset) {
    std::vector<int> legs;
    for (const auto& l : leg_multiset) legs.push_back(colors.require(l));
    std::sort(legs.begin(), legs.end());
    return detail::stratum_relators(colors, idegree, legs, StratumFlavor::full);
}

/// Reduction against the echelonized IHX relator basis, stratum by stratum.
/// Idempotent; two elements are equal in A(colors) iff their normal forms are.
inline DiagramElement normal_form(const DiagramElement& e) {
    DiagramElement out(e.colors(), e.idegree_cap());
    if (e.truncated()) out.mark_truncated();

    std::map<std::pair<int, std::vector<int>>, std::vector<const DiagramElement::Term*>> buckets;
    std::map<std::pair<int, std::vector<int>>, std::vector<DiagramKey>> bucket_keys;
    for (const auto& [k, term] : e.terms()) {
        std::vector<int> legs = term.diagram.leg_color;
        std::sort(legs.begin(), legs.end());
        auto bk = std::make_pair(term.diagram.idegree(), std::move(legs));
        buckets[bk].push_back(&term);
        bucket_keys[bk].push_back(k);
    }

    for (auto& [bk, terms] : buckets) {
        const auto& [t, legs] = bk;
        if (t < 2) {
            for (std::size_t i = 0; i < terms.size(); ++i)
                out.add_canonical(bucket_keys[bk][i], terms[i]->diagram, terms[i]->coeff);
            continue;
        }
        const auto& data = detail::stratum_data(t, legs, StratumFlavor::full);
        std::vector<Rat> vec(data.keys.size());
        for (std::size_t i = 0; i < terms.size(); ++i) {
            auto it = data.index.find(bucket_keys[bk][i]);
            if (it == data.index.end())
                throw std::logic_error("canonical diagram missing from its stratum");
            vec[it->second] += terms[i]->coeff;
        }
        for (const auto& [pivot, row] : data.rows) {
            if (vec[pivot] == 0) continue;
            const Rat f = vec[pivot];
            for (std::size_t j = pivot; j < row.size(); ++j)
                if (row[j] != 0) vec[j] -= f * row[j];
        }
        for (std::size_t j = 0; j < vec.size(); ++j)
            if (vec[j] != 0) {
                CanonResult cr = canonical_as(data.diagrams[j]);
                out.add_canonical(cr.key, data.diagrams[j], vec[j]);
            }
    }
    return out;
}

/// Dimension of one stratum of A(colors) (or of the strut-free subspace)
/// after AS and IHX reduction.
inline int dim_stratum(const ColorSet& colors, int idegree,
                       const std::vector<std::string>& leg_multiset, StratumFlavor flavor) {
    std::vector<int> legs;
    for (const auto& l : leg_multiset) legs.push_back(colors.require(l));
    std::sort(legs.begin(), legs.end());
    const auto& data = detail::stratum_data(idegree, legs, flavor);
    return static_cast<int>(data.keys.size() - data.rows.size());
}

}  // namespace splitkit
