#include <catch2/catch_amalgamated.hpp>

#include "scatter/cone.hpp"

using namespace scatter;

namespace {

LabeledTree A() { return make_leaf(1, 1, 1); }
LabeledTree B() { return make_leaf(2, 1, 1); }

Cone orthant2() {
    Cone c;
    c.dim = 2;
    c.rays = {{1, 0}, {0, 1}};
    return c;
}

Cone orthant3() {
    Cone c;
    c.dim = 3;
    c.rays = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    return c;
}

// rotation built from seeded Givens angles, applied to all generators
Cone rotated(const Cone& c, unsigned seed) {
    std::mt19937_64 gen(seed);
    auto angle = [&] {
        return (static_cast<double>(gen() >> 11) * 0x1.0p-53) * 6.283185307179586;
    };
    Cone out = c;
    for (int i = 0; i < c.dim; ++i) {
        for (int j = i + 1; j < c.dim; ++j) {
            double a = angle(), ca = std::cos(a), sa = std::sin(a);
            auto spin = [&](std::vector<double>& v) {
                double vi = v[i], vj = v[j];
                v[i] = ca * vi - sa * vj;
                v[j] = sa * vi + ca * vj;
            };
            for (auto& v : out.rays) spin(v);
            for (auto& v : out.lines) spin(v);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("planar cone measures are angular fractions") {
    auto q = gaussian_cone_measure(orthant2(), MeasureMethod::Quadrature);
    REQUIRE(q.value == Catch::Approx(0.25).margin(1e-12));

    Cone half;
    half.dim = 2;
    half.rays = {{1, 0}, {-1, 0}, {0, 1}};
    REQUIRE(gaussian_cone_measure(half, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.5).margin(1e-12));

    Cone half_line;  // same half-plane described by a line and a ray
    half_line.dim = 2;
    half_line.lines = {{1, 0}};
    half_line.rays = {{0, 1}};
    REQUIRE(gaussian_cone_measure(half_line, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.5).margin(1e-12));

    Cone plane;
    plane.dim = 2;
    plane.lines = {{1, 0}, {0, 1}};
    REQUIRE(gaussian_cone_measure(plane, MeasureMethod::Quadrature).value ==
            Catch::Approx(1.0).margin(1e-12));

    Cone narrow;  // single ray carries no area
    narrow.dim = 2;
    narrow.rays = {{3, 4}};
    REQUIRE(gaussian_cone_measure(narrow, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.0).margin(1e-12));

    Cone redundant;  // interior ray changes nothing
    redundant.dim = 2;
    redundant.rays = {{1, 0}, {1, 1}, {0, 1}};
    REQUIRE(gaussian_cone_measure(redundant, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.25).margin(1e-12));

    Cone full;  // rays positively spanning the plane
    full.dim = 2;
    full.rays = {{1, 0}, {-1, 0}, {0, -1}, {1, 1}};
    REQUIRE(gaussian_cone_measure(full, MeasureMethod::Quadrature).value ==
            Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("orthant measures in higher dimension") {
    auto q3 = gaussian_cone_measure(orthant3(), MeasureMethod::Quadrature);
    REQUIRE(q3.value == Catch::Approx(0.125).margin(1e-12));

    Cone half3;  // one line, two rays: half of a quarter space
    half3.dim = 3;
    half3.lines = {{0, 0, 1}};
    half3.rays = {{1, 0, 0}, {0, 1, 0}};
    REQUIRE(gaussian_cone_measure(half3, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.25).margin(1e-12));

    Cone skew;  // correlated pair: angle 120 degrees between normals
    skew.dim = 3;
    skew.rays = {{1, 0, 0}, {1, 2, 0}};
    skew.lines = {{0, 0, 1}};
    auto sq = gaussian_cone_measure(skew, MeasureMethod::Quadrature);
    // P = 1/4 + asin(corr of inverse rows)/(2 pi); rows (1,-1/2,0),(0,1/2,0)
    double corr = -1.0 / std::sqrt(5.0);
    REQUIRE(sq.value == Catch::Approx(0.25 + std::asin(corr) / (2 * std::numbers::pi))
                            .margin(1e-12));
}

TEST_CASE("measures are rotation invariant") {
    for (unsigned seed = 1; seed <= 20; ++seed) {
        auto r3 = gaussian_cone_measure(rotated(orthant3(), seed), MeasureMethod::Quadrature);
        REQUIRE(r3.value == Catch::Approx(0.125).margin(1e-9));
        auto r2 = gaussian_cone_measure(rotated(orthant2(), seed), MeasureMethod::Quadrature);
        REQUIRE(r2.value == Catch::Approx(0.25).margin(1e-9));
    }
}

TEST_CASE("sampled measures agree with quadrature and refine monotonically") {
    auto mc = gaussian_cone_measure(orthant3(), MeasureMethod::MonteCarlo, 1 << 20, 2026);
    REQUIRE(std::abs(mc.value - 0.125) <= mc.error);

    // doubling the budget must keep the snapped value put
    auto mc2 = gaussian_cone_measure(orthant3(), MeasureMethod::MonteCarlo, 1 << 21, 2026);
    auto s1 = snap_to_rational(mc.value, 10 * mc.error, 64);
    auto s2 = snap_to_rational(mc2.value, 10 * mc2.error, 64);
    REQUIRE(s1.has_value());
    REQUIRE(s2.has_value());
    REQUIRE(*s1 == *s2);
    REQUIRE(*s1 == rat_of(1, 8));

    // fixed seed, fixed stream: repeat runs are bit identical
    auto again = gaussian_cone_measure(orthant3(), MeasureMethod::MonteCarlo, 1 << 20, 2026);
    REQUIRE(again.value == mc.value);
}

TEST_CASE("flow system of the basic two-leaf tree") {
    auto w = flow_wedge(make_node(A(), B()));
    REQUIRE(w.k == 2);
    REQUIRE(w.reachable);
    REQUIRE(w.active.empty());
    REQUIRE(w.solution[0] == 1);  // one unit of flow along the output edge
    REQUIRE(w.solution[1] == 0);  // path time at the wall itself

    auto c = cone_of_tree(make_node(A(), B()));
    REQUIRE(c.has_value());
    REQUIRE(c->dim == 2);
    REQUIRE(c->rays.empty());
    REQUIRE(c->lines.size() == 2);
    REQUIRE(gaussian_cone_measure(*c, MeasureMethod::Quadrature).value ==
            Catch::Approx(1.0).margin(1e-12));
    REQUIRE(tree_measure(make_node(A(), B())).value == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("caterpillar tree carries measure one half") {
    auto cat = make_node(make_node(A(), B()), A());
    auto w = flow_wedge(cat);
    REQUIRE(w.reachable);
    REQUIRE(w.active.size() == 1);
    auto m = tree_measure(cat);
    REQUIRE(m.value == Catch::Approx(0.5).margin(1e-12));

    auto c = cone_of_tree(cat);
    REQUIRE(c.has_value());
    REQUIRE(c->dim == 3);
    REQUIRE(c->rays.size() == 1);
    REQUIRE(c->lines.size() == 2);
    REQUIRE(gaussian_cone_measure(*c, MeasureMethod::Quadrature).value ==
            Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("tree measure census at order three") {
    auto w1 = standard_line(3, IVec{1, 0});
    auto w2 = standard_line(3, IVec{0, 1});
    auto trees = enumerate_trees(w1, w2, 3);
    REQUIRE(trees.size() == 19);
    int contributing = 0, halves = 0, ones = 0;
    for (const auto& t : trees) {
        auto ev = evaluate_tree(t, w1, w2);
        if (!ev.transversal) continue;
        double m = tree_measure(t).value;
        if (m > 0) ++contributing;
        if (std::abs(m - 0.5) < 1e-12) ++halves;
        if (std::abs(m - 1.0) < 1e-12) ++ones;
    }
    REQUIRE(contributing == 11);
    REQUIRE(halves == 2);  // the two order-three caterpillars
    REQUIRE(ones == 9);    // leaves and transversal two-leaf joins
}

TEST_CASE("tree measures are invariant under path reversal") {
    auto w1 = standard_line(4, IVec{1, 0}, 2);
    auto w2 = standard_line(4, IVec{0, 1}, 2);
    int checked = 0;
    for (const auto& t : enumerate_trees(w1, w2, 4)) {
        auto ev = evaluate_tree(t, w1, w2);
        if (!ev.transversal) continue;
        IVec a = *ev.ray;
        IVec forward{a.y, -a.x};
        double m1 = tree_measure(t, MeasureMethod::Quadrature, 1 << 20, 2026, forward).value;
        double m2 = tree_measure(t, MeasureMethod::Quadrature, 1 << 20, 2026, -forward).value;
        REQUIRE(m1 == Catch::Approx(m2).margin(1e-12));
        ++checked;
    }
    REQUIRE(checked > 20);
}

TEST_CASE("sampled tree measures agree with the closed forms") {
    auto cat = make_node(make_node(A(), B()), A());
    auto mc = tree_measure(cat, MeasureMethod::MonteCarlo, 1 << 18, 77);
    REQUIRE(std::abs(mc.value - 0.5) <= mc.error);
    REQUIRE(mc.error < 0.01);
}

TEST_CASE("degenerate generator sets are rejected") {
    Cone bad;
    bad.dim = 3;
    bad.rays = {{1, 0, 0}, {2, 0, 0}, {0, 1, 0}};  // dependent, not a basis
    REQUIRE_THROWS_AS(gaussian_cone_measure(bad, MeasureMethod::Quadrature),
                      std::runtime_error);

    Cone wrong;
    wrong.dim = 3;
    wrong.rays = {{1, 0, 0}};
    REQUIRE_THROWS_AS(gaussian_cone_measure(wrong, MeasureMethod::Quadrature),
                      std::invalid_argument);
}
