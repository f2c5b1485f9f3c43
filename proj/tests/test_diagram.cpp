#include <splitkit/diagram.hpp>
#include <splitkit/element.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

#include <random>

using namespace splitkit;
using namespace splitkit::testing;

TEST_CASE("tadpole is zero under AS") {
    CHECK(canonical_as(tadpole(0)).sign == 0);
}

TEST_CASE("reversing one vertex of theta gives a sign") {
    auto base = canonical_as(theta());
    auto flip = canonical_as(theta_flipped());
    REQUIRE(base.sign != 0);
    REQUIRE(flip.sign != 0);
    CHECK(base.key == flip.key);
    CHECK(base.sign == -flip.sign);
}

TEST_CASE("strut with equal colors carries no sign") {
    auto r = canonical_as(strut(0, 0));
    CHECK(r.sign == 1);
    auto swapped = canonical_as(JacobiDiagram::make(0, {0, 0}, {{1, 0}}));
    CHECK(swapped.sign == 1);
    CHECK(swapped.key == r.key);
}

TEST_CASE("tripod with a repeated color vanishes") {
    CHECK(canonical_as(tripod(0, 0, 1)).sign == 0);
    CHECK(canonical_as(tripod(0, 1, 2)).sign != 0);
}

TEST_CASE("tripod leg cyclic order and AS sign") {
    auto abc = canonical_as(tripod(0, 1, 2));
    auto bca = canonical_as(tripod(1, 2, 0));
    auto acb = canonical_as(tripod(0, 2, 1));
    REQUIRE(abc.sign != 0);
    CHECK(abc.key == bca.key);
    CHECK(abc.sign == bca.sign);
    CHECK(abc.key == acb.key);
    CHECK(abc.sign == -acb.sign);
}

TEST_CASE("canonicalization is idempotent") {
    for (const auto& d : {theta(), tripod(0, 1, 2), h_tree(0, 1, 2, 3), strut(2, 1)}) {
        auto r = canonical_as(d);
        REQUIRE(r.sign != 0);
        auto again = canonical_as(r.canonical);
        CHECK(again.sign == 1);
        CHECK(again.key == r.key);
    }
}

TEST_CASE("decode inverts the canonical key") {
    for (const auto& d : {theta(), tripod(0, 1, 2), h_tree(3, 1, 2, 0)}) {
        auto r = canonical_as(d);
        auto d2 = decode_diagram(r.key);
        auto r2 = canonical_as(d2);
        CHECK(r2.key == r.key);
        CHECK(r2.sign == 1);
    }
}

namespace {

// random relabeling of vertices, slots (by rotation/reflection), legs
JacobiDiagram shuffled(const JacobiDiagram& d, std::mt19937& rng) {
    std::vector<int> vperm(static_cast<std::size_t>(d.n_tri));
    for (int i = 0; i < d.n_tri; ++i) vperm[static_cast<std::size_t>(i)] = i;
    std::shuffle(vperm.begin(), vperm.end(), rng);
    std::vector<int> lperm(static_cast<std::size_t>(d.n_legs()));
    for (int i = 0; i < d.n_legs(); ++i) lperm[static_cast<std::size_t>(i)] = i;
    std::shuffle(lperm.begin(), lperm.end(), rng);
    // per-vertex rotation only (no reflections, so the class is unchanged)
    std::vector<int> rot(static_cast<std::size_t>(d.n_tri));
    for (auto& r : rot) r = static_cast<int>(rng() % 3);

    auto map_he = [&](int h) {
        if (d.is_leg_he(h))
            return 3 * d.n_tri + lperm[static_cast<std::size_t>(h - 3 * d.n_tri)];
        const int v = h / 3, s = h % 3;
        return 3 * vperm[static_cast<std::size_t>(v)] + (s + rot[static_cast<std::size_t>(v)]) % 3;
    };
    JacobiDiagram out;
    out.n_tri = d.n_tri;
    out.leg_color.resize(d.leg_color.size());
    for (int l = 0; l < d.n_legs(); ++l)
        out.leg_color[static_cast<std::size_t>(lperm[static_cast<std::size_t>(l)])] =
            d.leg_color[static_cast<std::size_t>(l)];
    out.mate.assign(d.mate.size(), -1);
    for (int h = 0; h < d.n_half_edges(); ++h)
        out.mate[static_cast<std::size_t>(map_he(h))] = map_he(d.mate[static_cast<std::size_t>(h)]);
    return out;
}

JacobiDiagram random_diagram(std::mt19937& rng, int t, int legs, int colors) {
    for (;;) {
        const int n = 3 * t + legs;
        if (n % 2) return random_diagram(rng, t, legs + 1, colors);
        std::vector<int> slots(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = i;
        std::shuffle(slots.begin(), slots.end(), rng);
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; i += 2) edges.emplace_back(slots[static_cast<std::size_t>(i)],
                                                          slots[static_cast<std::size_t>(i + 1)]);
        std::vector<int> lc(static_cast<std::size_t>(legs));
        for (auto& c : lc) c = static_cast<int>(rng() % static_cast<unsigned>(colors));
        JacobiDiagram d = JacobiDiagram::make(t, lc, edges);
        if (!d.has_tadpole()) return d;
    }
}

}  // namespace

TEST_CASE("canonical form is isomorphism invariant") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
        JacobiDiagram d = random_diagram(rng, 1 + static_cast<int>(rng() % 4),
                                         static_cast<int>(rng() % 4), 3);
        auto r = canonical_as(d);
        for (int k = 0; k < 3; ++k) {
            JacobiDiagram s = shuffled(d, rng);
            auto rs = canonical_as(s);
            CHECK(rs.sign == r.sign);
            if (r.sign != 0) CHECK(rs.key == r.key);
        }
    }
}

TEST_CASE("AS soundness: a single vertex flip negates") {
    std::mt19937 rng(99);
    const ColorSet colors({"x", "y", "z"});
    for (int trial = 0; trial < 60; ++trial) {
        JacobiDiagram d = random_diagram(rng, 1 + static_cast<int>(rng() % 3),
                                         static_cast<int>(rng() % 4), 3);
        // flip the cyclic order at one vertex by swapping two slots
        JacobiDiagram f = d;
        const int v = static_cast<int>(rng() % static_cast<unsigned>(d.n_tri));
        auto map_he = [&](int h) {
            if (h == 3 * v + 1) return 3 * v + 2;
            if (h == 3 * v + 2) return 3 * v + 1;
            return h;
        };
        f.mate.assign(d.mate.size(), -1);
        for (int h = 0; h < d.n_half_edges(); ++h)
            f.mate[static_cast<std::size_t>(map_he(h))] = map_he(d.mate[static_cast<std::size_t>(h)]);
        DiagramElement sum(colors);
        sum.add(d, Rat(1));
        sum.add(f, Rat(1));
        CHECK(sum.is_zero());
    }
}

TEST_CASE("element arithmetic and linearity") {
    const ColorSet colors({"x"});
    DiagramElement e(colors);
    e.add(theta(), Rat(3));
    e.add(theta(), Rat(-1));
    e.add(theta(), Rat(-2));
    CHECK(e.is_zero());

    DiagramElement a = elem_of(colors, theta(), Rat(2));
    DiagramElement b = elem_of(colors, theta_flipped(), Rat(2));
    CHECK((a + b).is_zero());
}

TEST_CASE("scale_color multiplies by r per leg") {
    const ColorSet colors = ColorSet::top_bottom(3, 0);
    DiagramElement e = elem_of(colors, tripod(0, 1, 2));
    CHECK(scale_color(e, "1+", Rat(3)) == e.scaled(Rat(3)));

    DiagramElement s = elem_of(colors, strut(0, 0));
    CHECK(scale_color(s, "1+", Rat(2)) == s.scaled(Rat(4)));

    DiagramElement mix = e + s;
    CHECK(scale_color(mix, "1+", Rat(1)) == mix);
}

TEST_CASE("multilinear expansion distributes legs") {
    const ColorSet basis({"a", "b", "c", "d"});
    // strut with legs (2a, b)
    DiagramElement r1 = multilinear_expand(strut(0, 0), {{{0, Rat(2)}}, {{1, Rat(1)}}}, basis);
    DiagramElement want1 = elem_of(basis, strut(0, 1), Rat(2));
    CHECK(r1 == want1);

    // tripod with legs (a+b, c, d)
    DiagramElement r2 = multilinear_expand(
        tripod(0, 0, 0), {{{0, Rat(1)}, {1, Rat(1)}}, {{2, Rat(1)}}, {{3, Rat(1)}}}, basis);
    DiagramElement want2 = elem_of(basis, tripod(0, 2, 3)) + elem_of(basis, tripod(1, 2, 3));
    CHECK(r2 == want2);

    // tripod with legs (a - a, c, d)
    DiagramElement r3 = multilinear_expand(
        tripod(0, 0, 0), {{{0, Rat(1)}, {0, Rat(-1)}}, {{2, Rat(1)}}, {{3, Rat(1)}}}, basis);
    CHECK(r3.is_zero());

    CHECK_THROWS_AS(multilinear_expand(strut(0, 0), {{{7, Rat(1)}}, {{1, Rat(1)}}}, basis),
                    std::domain_error);
}

TEST_CASE("malformed diagrams are rejected") {
    CHECK_THROWS_AS(JacobiDiagram::make(1, {0}, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiDiagram::make(0, {0, 0}, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(JacobiDiagram::make(0, {0, 0, 0}, {{0, 1}, {1, 2}}), std::invalid_argument);
}
