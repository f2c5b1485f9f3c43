#pragma once

#include <splitkit/glue.hpp>
#include <splitkit/matrix.hpp>
#include <splitkit/strata.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace splitkit {

/// H_1 of the boundary surface with its intersection form x•y = x^T J y.
struct SymplecticSpace {
    std::vector<std::string> basis;
    RatMat intersection;  // antisymmetric, nondegenerate

    std::size_t dim() const { return basis.size(); }
    void validate() const {
        if (intersection.rows() != dim() || intersection.cols() != dim())
            throw std::invalid_argument("intersection matrix size mismatch");
        if (!intersection.is_antisymmetric())
            throw std::domain_error("intersection form must be antisymmetric");
        if (rank(intersection) != dim())
            throw std::domain_error("intersection form must be nondegenerate");
        if (dim() % 2 != 0) throw std::domain_error("odd-dimensional symplectic space");
    }

    static SymplecticSpace standard(int genus) {
        SymplecticSpace s;
        const std::size_t n = static_cast<std::size_t>(2 * genus);
        s.intersection = RatMat(n, n);
        for (int i = 0; i < genus; ++i) {
            s.basis.push_back("a" + std::to_string(i + 1));
            s.intersection(static_cast<std::size_t>(i), static_cast<std::size_t>(genus + i)) = 1;
            s.intersection(static_cast<std::size_t>(genus + i), static_cast<std::size_t>(i)) = -1;
        }
        for (int i = 0; i < genus; ++i) s.basis.push_back("b" + std::to_string(i + 1));
        return s;
    }

    Rat pair(const RatMat& x, const RatMat& y) const {  // column vectors
        return (x.transpose() * intersection * y)(0, 0);
    }
};

/// Homology-level model of a Q-LP surgery class: the boundary space plus the
/// Lagrangian (columns of `lagrangian` span L).
struct SurgeryClass {
    SymplecticSpace space;
    RatMat lagrangian;  // 2g x g, columns = basis of L

    int genus() const { return static_cast<int>(space.dim() / 2); }
    void validate() const {
        space.validate();
        const std::size_t n = space.dim();
        if (lagrangian.rows() != n || lagrangian.cols() != n / 2)
            throw std::invalid_argument("Lagrangian basis must have g columns of dimension 2g");
        if (rank(lagrangian) != n / 2) throw std::domain_error("Lagrangian basis is degenerate");
        const RatMat q = lagrangian.transpose() * space.intersection * lagrangian;
        if (!q.is_zero()) throw std::domain_error("Lagrangian subspace is not isotropic");
    }
};

/// Candidate complement of L; columns span the subspace.
struct EssentialSubspace {
    std::string name;
    RatMat basis;  // 2g x k columns

    bool is_isotropic(const SymplecticSpace& s) const {
        return (basis.transpose() * s.intersection * basis).is_zero();
    }
};

/// Linking form expressed in the basis of its tagged essential subspace
/// (identified with H_1 of the body).
struct LinkingForm {
    RatMat mat;
    std::string subspace_tag;
};

inline bool is_essential(const SurgeryClass& cls, const EssentialSubspace& e) {
    const std::size_t n = cls.space.dim();
    if (e.basis.rows() != n) throw std::invalid_argument("subspace dimension mismatch");
    if (e.basis.cols() != n / 2) return false;
    RatMat joint(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n / 2; ++j) {
            joint(i, j) = cls.lagrangian(i, j);
            joint(i, n / 2 + j) = e.basis(i, j);
        }
    }
    return rank(joint) == n;
}

namespace detail {

/// Projections onto L and E along the splitting H = L ⊕ E, in ambient coords.
struct Splitting {
    RatMat pl, pe;        // 2g x 2g ambient projections
    RatMat coords_l, coords_e;  // coordinates maps: 2g-vector -> g coefficients
};

inline Splitting splitting_of(const SurgeryClass& cls, const EssentialSubspace& e) {
    if (!is_essential(cls, e))
        throw std::domain_error("subspace '" + e.name + "' is not essential for the class");
    const std::size_t n = cls.space.dim(), gsz = n / 2;
    RatMat joint(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < gsz; ++j) {
            joint(i, j) = cls.lagrangian(i, j);
            joint(i, gsz + j) = e.basis(i, j);
        }
    const RatMat inv = *inverse(joint);
    Splitting s;
    s.coords_l = inv.block(0, 0, gsz, n);
    s.coords_e = inv.block(gsz, 0, gsz, n);
    s.pl = cls.lagrangian * s.coords_l;
    s.pe = e.basis * s.coords_e;
    return s;
}

}  // namespace detail

/// Generalized Seifert form: theta(x, y) = (L-part of y) • (E-part of x), as a
/// matrix T with theta(x, y) = x^T T y in the ambient basis. Left radical L,
/// right radical E, and theta = -intersection on E x L.
inline RatMat theta_form(const SurgeryClass& cls, const EssentialSubspace& e) {
    const auto s = detail::splitting_of(cls, e);
    // theta(x,y) = (pl y)^T J (pe x) = x^T [pe^T J^T pl] y
    return s.pe.transpose() * cls.space.intersection.transpose() * s.pl;
}

/// Transport of a linking form between essential subspaces:
/// Lk^F = Lk^E ∘ (coords along E) - theta^E on F x F, expressed in F's basis.
inline LinkingForm transport_linking(const SurgeryClass& cls, const EssentialSubspace& e,
                                     const EssentialSubspace& f, const LinkingForm& ell_e) {
    if (ell_e.subspace_tag != e.name)
        throw std::domain_error("linking form tagged '" + ell_e.subspace_tag +
                                "', expected '" + e.name + "'");
    const std::size_t gsz = cls.space.dim() / 2;
    if (ell_e.mat.rows() != gsz || ell_e.mat.cols() != gsz)
        throw std::invalid_argument("linking form has the wrong size");
    const auto se = detail::splitting_of(cls, e);
    detail::splitting_of(cls, f);  // validates essentiality
    const RatMat theta = theta_form(cls, e);
    const RatMat c = se.coords_e * f.basis;  // E-coordinates of classes of F's basis
    LinkingForm out;
    out.mat = c.transpose() * ell_e.mat * c - f.basis.transpose() * theta * f.basis;
    out.subspace_tag = f.name;
    return out;
}

/// The kappa map A^Y(src) -> A^Y(dst): sum over partial gluings of legs with
/// theta^dst evaluated on src colors, then recoloring by projection to dst
/// along L. Element colors must be the src labels "<name>1".."<name>g".
inline std::vector<std::string> subspace_labels(const EssentialSubspace& s) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < s.basis.cols(); ++i)
        labels.push_back(s.name + std::to_string(i + 1));
    return labels;
}

inline DiagramElement kappa(const SurgeryClass& cls, const EssentialSubspace& src,
                            const EssentialSubspace& dst, const DiagramElement& d) {
    if (!src.is_isotropic(cls.space))
        throw std::domain_error("kappa source subspace is not isotropic");
    if (!dst.is_isotropic(cls.space))
        throw std::domain_error("kappa target subspace is not isotropic");
    if (has_strut_component(d)) throw std::domain_error("kappa input must be strut-free");
    const ColorSet src_colors{subspace_labels(src)};
    if (d.colors() != src_colors)
        throw std::domain_error("kappa input must be colored by the source subspace basis");

    const auto sd = detail::splitting_of(cls, dst);
    detail::splitting_of(cls, src);  // validates essentiality
    const RatMat theta = theta_form(cls, dst);
    const std::size_t gsz = cls.space.dim() / 2;

    // theta^dst evaluated on src basis vectors; symmetric since src isotropic
    RatMat form = src.basis.transpose() * theta * src.basis;
    for (std::size_t i = 0; i < gsz; ++i)
        for (std::size_t j = i + 1; j < gsz; ++j) {
            const Rat sym = (form(i, j) + form(j, i)) / 2;
            form(i, j) = sym;
            form(j, i) = sym;
        }

    DiagramElement glued = glue_legs_with_form(d, form, GlueMode::some);

    // rho: src_i |-> dst-coordinates of P_dst(src_i)
    const RatMat coords = sd.coords_e * src.basis;  // g x g
    std::vector<ColorCombo> rho(gsz);
    for (std::size_t i = 0; i < gsz; ++i)
        for (std::size_t j = 0; j < gsz; ++j)
            if (coords(j, i) != 0) rho[i].emplace_back(static_cast<int>(j), coords(j, i));

    const ColorSet dst_colors{subspace_labels(dst)};
    DiagramElement out(dst_colors, d.idegree_cap());
    if (glued.truncated()) out.mark_truncated();
    for (const auto& [k, t] : glued.terms()) {
        std::vector<ColorCombo> combos(static_cast<std::size_t>(t.diagram.n_legs()));
        for (int l = 0; l < t.diagram.n_legs(); ++l)
            combos[static_cast<std::size_t>(l)] =
                rho[static_cast<std::size_t>(t.diagram.leg_color[static_cast<std::size_t>(l)])];
        expand_legs_into(out, t.diagram, t.coeff, combos);
    }
    return out;
}

/// Completes a Lagrangian subgroup basis to an integer symplectic basis.
/// Returns the 2g x 2g matrix whose first g columns are the input and whose
/// intersection matrix is exactly [[0, I], [-I, 0]].
inline IntMat symplectic_completion(const IntMat& lagrangian, const IntMat& intersection) {
    const std::size_t n = intersection.rows();
    if (intersection.cols() != n || lagrangian.rows() != n || n % 2 != 0)
        throw std::invalid_argument("bad shapes for symplectic completion");
    const std::size_t gsz = n / 2;
    if (lagrangian.cols() != gsz)
        throw std::invalid_argument("Lagrangian subgroup basis must have g columns");
    if (!intersection.is_antisymmetric())
        throw std::domain_error("intersection form must be antisymmetric");
    {
        const Int det = int_determinant(intersection);
        if (det != 1 && det != -1) throw std::domain_error("intersection form must be unimodular");
    }

    // isotropy, with the violating pairing as certificate
    const IntMat q0 = lagrangian.transpose() * intersection * lagrangian;
    for (std::size_t i = 0; i < gsz; ++i)
        for (std::size_t j = 0; j < gsz; ++j)
            if (q0(i, j) != 0)
                throw std::domain_error("input is not isotropic: <m" + std::to_string(i + 1) +
                                        ", m" + std::to_string(j + 1) + "> = " + q0(i, j).str());

    // primitivity: Smith diagonal must be all ones (else the quotient has torsion)
    auto snf = smith_diagonalize(lagrangian);
    for (std::size_t i = 0; i < gsz; ++i) {
        const Int dii = snf.s(i, i);
        if (dii == 0)
            throw std::domain_error("input vectors are linearly dependent");
        if (dii != 1)
            throw std::domain_error("input is not a Lagrangian subgroup: quotient has torsion Z/" +
                                    dii.str());
    }

    // complement: the lattice of the input equals the first g columns of U,
    // so the last g columns complete it to a basis of Z^2g
    IntMat p(n, gsz);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < gsz; ++j) p(i, j) = snf.u(i, gsz + j);

    const IntMat b = lagrangian.transpose() * intersection * p;  // = P^t
    const IntMat pt = b.transpose();                             // P
    const IntMat q = p.transpose() * intersection * p;
    IntMat r(gsz, gsz);
    for (std::size_t i = 0; i < gsz; ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = q(i, j);

    const RatMat pinv_r = *inverse(to_rat(pt));
    IntMat pinv(gsz, gsz);
    for (std::size_t i = 0; i < gsz; ++i)
        for (std::size_t j = 0; j < gsz; ++j) {
            if (denominator(pinv_r(i, j)) != 1)
                throw std::logic_error("unimodular inverse is not integral");
            pinv(i, j) = numerator(pinv_r(i, j));
        }

    // p' = m * (P^-1 R (P^-1)^t) + p * (P^-1)^t
    const IntMat corr = pinv * r * pinv.transpose();
    const IntMat pprime = lagrangian * corr + p * pinv.transpose();

    IntMat out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < gsz; ++j) {
            out(i, j) = lagrangian(i, j);
            out(i, gsz + j) = pprime(i, j);
        }

    // exact verification of the standard form
    const IntMat check = out.transpose() * intersection * out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Int want = 0;
            if (j == i + gsz) want = 1;
            if (i == j + gsz) want = -1;
            if (check(i, j) != want)
                throw std::logic_error("completion failed to reach the standard form");
        }
    return out;
}

/// Linking number of two knot diagrams in a cylinder from local crossing
/// counts: half the positive crossings minus half the negative ones.
inline Rat lk_cylinder_counts(long k_over_l_pos, long l_over_k_pos, long k_over_l_neg,
                              long l_over_k_neg) {
    return Rat(k_over_l_pos + l_over_k_pos, 2) - Rat(k_over_l_neg + l_over_k_neg, 2);
}

}  // namespace splitkit
