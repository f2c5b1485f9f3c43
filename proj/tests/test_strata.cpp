#include <splitkit/strata.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "support/builders.hpp"

using namespace splitkit;
using namespace splitkit::testing;

TEST_CASE("ihx_relators: no internal edge below i-degree 2") {
    const ColorSet colors({"1", "2", "3", "4"});
    CHECK(ihx_relators(colors, 1, {"1", "2", "3"}).empty());
    CHECK(ihx_relators(colors, 0, {"1", "2"}).empty());
}

TEST_CASE("ihx_relators: the 4-leg tree relator appears") {
    const ColorSet colors({"1", "2", "3", "4"});
    auto rels = ihx_relators(colors, 2, {"1", "2", "3", "4"});
    CHECK(!rels.empty());
    // every relator must contain tree terms and die under normal_form
    bool found_tree_relator = false;
    for (const auto& r : rels) {
        CHECK(normal_form(r).is_zero());
        bool all_trees = !r.terms().empty();
        for (const auto& [k, t] : r.terms())
            if (has_strut_component(t.diagram) || t.diagram.idegree() != 2) all_trees = false;
        int legs4 = 0;
        for (const auto& [k, t] : r.terms())
            if (t.diagram.n_legs() == 4) ++legs4;
        if (all_trees && legs4 == static_cast<int>(r.terms().size())) found_tree_relator = true;
    }
    CHECK(found_tree_relator);
}

TEST_CASE("closed i-degree 2 stratum reduces to theta") {
    const ColorSet colors(std::vector<std::string>{});
    CHECK(dim_stratum(colors, 2, {}, StratumFlavor::full) == 1);
    DiagramElement th = elem_of(colors, theta());
    CHECK(normal_form(th) == th);
    CHECK(!normal_form(th).is_zero());
}

TEST_CASE("dim_stratum examples") {
    const ColorSet colors({"1", "2", "3"});
    CHECK(dim_stratum(colors, 1, {"1", "2", "3"}, StratumFlavor::full) == 1);
    CHECK(dim_stratum(colors, 1, {"1", "1", "2"}, StratumFlavor::full) == 0);
}

TEST_CASE("normal_form kills every relator and is idempotent") {
    const ColorSet colors({"1", "2", "3"});
    for (int t = 2; t <= 3; ++t) {
        for (const auto& legs :
             std::vector<std::vector<std::string>>{{}, {"1", "2"}, {"1", "1"}, {"1", "2", "3"}}) {
            if ((3 * t + static_cast<int>(legs.size())) % 2 != 0) continue;
            for (const auto& r : ihx_relators(colors, t, legs)) {
                CHECK(normal_form(r).is_zero());
            }
        }
    }
    // idempotence on a non-trivial element
    DiagramElement e(colors);
    e.add(h_tree(0, 1, 2, 0), Rat(2));
    e.add(theta(), Rat(1));
    e.add(tripod(0, 1, 2), Rat(-3));
    DiagramElement n1 = normal_form(e);
    CHECK(normal_form(n1) == n1);
}

TEST_CASE("normal_form examples from the tripod family") {
    const ColorSet colors({"a", "b"});
    DiagramElement e(colors);
    e.add(tripod(0, 0, 1), Rat(1));
    CHECK(normal_form(e).is_zero());  // AS already kills it
    CHECK(e.is_zero());
}

TEST_CASE("normal_form preserves the bigrading") {
    const ColorSet colors({"1", "2"});
    DiagramElement e(colors);
    e.add(h_tree(0, 0, 1, 1), Rat(1));
    e.add(theta(), Rat(5));
    DiagramElement n = normal_form(e);
    for (const auto& [k, t] : n.terms()) {
        const int deg = t.diagram.idegree();
        std::vector<int> legs = t.diagram.leg_color;
        std::sort(legs.begin(), legs.end());
        const bool from_tree = deg == 2 && legs == std::vector<int>({0, 0, 1, 1});
        const bool from_theta = deg == 2 && legs.empty();
        CHECK((from_tree || from_theta));
    }
}

TEST_CASE("IHX relator reduction respects the Y subspace") {
    // strut-carrying diagrams never mix with strut-free ones in a relator
    const ColorSet colors({"1", "2"});
    for (const auto& r : ihx_relators(colors, 2, {"1", "2"})) {
        bool any_strut = false, all_strut = true;
        for (const auto& [k, t] : r.terms()) {
            if (has_strut_component(t.diagram)) any_strut = true;
            else all_strut = false;
        }
        CHECK((!any_strut || all_strut));
    }
}

TEST_CASE("dim_stratum Y flavor drops strut factors") {
    const ColorSet colors({"1", "2"});
    const int full = dim_stratum(colors, 2, {"1", "2"}, StratumFlavor::full);
    const int y = dim_stratum(colors, 2, {"1", "2"}, StratumFlavor::Y);
    CHECK(full >= y);
    CHECK(y >= 1);  // the 2-leg bubble survives
}

TEST_CASE("truncation notice carries through") {
    const ColorSet colors(std::vector<std::string>{});
    DiagramElement e(colors, 1);
    e.add(theta(), Rat(1));  // i-degree 2 over the cap
    CHECK(e.is_zero());
    CHECK(e.truncated());
    CHECK(normal_form(e).truncated());
}
