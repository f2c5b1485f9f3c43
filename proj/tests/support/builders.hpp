#pragma once

// Small diagram factories shared by the test suites.

#include <splitkit/element.hpp>

#include <vector>

namespace splitkit::testing {

inline JacobiDiagram strut(int c1, int c2) {
    return JacobiDiagram::make(0, {c1, c2}, {{0, 1}});
}

inline JacobiDiagram tripod(int c1, int c2, int c3) {
    return JacobiDiagram::make(1, {c1, c2, c3}, {{0, 3}, {1, 4}, {2, 5}});
}

// two trivalent vertices joined by three edges, slot i of u to slot i of v
inline JacobiDiagram theta() {
    return JacobiDiagram::make(2, {}, {{0, 3}, {1, 4}, {2, 5}});
}

// theta with the cyclic order at the second vertex reversed (slots 4,5 swapped)
inline JacobiDiagram theta_flipped() {
    return JacobiDiagram::make(2, {}, {{0, 3}, {1, 5}, {2, 4}});
}

// single trivalent vertex, one self-edge, one leg
inline JacobiDiagram tadpole(int color) {
    return JacobiDiagram::make(1, {color}, {{0, 1}, {2, 3}});
}

// H-shaped tree: two trivalent vertices joined by one edge, four legs.
// legs (c1, c2) hang on u (slots 1, 2), legs (c3, c4) on v (slots 4, 5).
inline JacobiDiagram h_tree(int c1, int c2, int c3, int c4) {
    return JacobiDiagram::make(2, {c1, c2, c3, c4}, {{0, 3}, {1, 6}, {2, 7}, {4, 8}, {5, 9}});
}

inline DiagramElement elem_of(const ColorSet& colors, const JacobiDiagram& d, const Rat& c = Rat(1)) {
    DiagramElement e(colors);
    e.add(d, c);
    return e;
}

}  // namespace splitkit::testing
