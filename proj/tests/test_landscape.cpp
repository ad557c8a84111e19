#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mmdp/landscape.hpp"

using namespace mmdp;

namespace {
ModelParams desk_params(int L) {
    ModelParams p;
    p.L = L;
    return p;  // U = 1, delta = 1.75
}
}  // namespace

TEST_CASE("stability level of small rectangles") {
    ModelParams p = desk_params(6);
    SearchBounds bounds{8, 3.0, 2000000};

    SiteConfig square = make_rectangle(6, Boundary::Periodic, 1, 1, 2, 2);
    auto r = stability_level(square, bounds, p);
    REQUIRE(r.has_value());
    CHECK(r->level == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r->path_length >= 2);

    SiteConfig wide = make_rectangle(6, Boundary::Periodic, 1, 1, 3, 2);
    auto rw = stability_level(wide, bounds, p);
    REQUIRE(rw.has_value());
    CHECK(rw->level == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a bar is not robust") {
    ModelParams p = desk_params(6);
    SearchBounds bounds{6, 3.0, 2000000};
    SiteConfig bar = make_rectangle(6, Boundary::Periodic, 1, 1, 3, 1);
    auto r = stability_level(bar, bounds, p);
    REQUIRE(r.has_value());
    CHECK(r->level == doctest::Approx(1.0).epsilon(1e-12));  // end particle detaches at U
    CHECK(!bar.classify_robust().has_value());
}

TEST_CASE("communication height basics") {
    ModelParams p = desk_params(6);
    SearchBounds bounds{8, 4.0, 2000000};
    SiteConfig a = make_rectangle(6, Boundary::Periodic, 1, 1, 2, 2);
    SiteConfig b = make_rectangle(6, Boundary::Periodic, 1, 1, 2, 2);
    b.set(3, 1, true);  // one attached extra particle

    auto self = communication_height(a, a, bounds, p);
    REQUIRE(self.has_value());
    CHECK(*self == doctest::Approx(a.hamiltonian().value(p)).epsilon(1e-12));

    auto ab = communication_height(a, b, bounds, p);
    auto ba = communication_height(b, a, bounds, p);
    REQUIRE(ab.has_value());
    REQUIRE(ba.has_value());
    CHECK(*ab == doctest::Approx(*ba).epsilon(1e-12));
    CHECK(*ab >= a.hamiltonian().value(p) - 1e-12);
    CHECK(*ab >= b.hamiltonian().value(p) - 1e-12);
}

TEST_CASE("cluster enumeration counts fixed shapes") {
    auto shapes = enumerate_single_clusters(6, 3);
    CHECK(shapes.size() == 9);  // 1 monomino + 2 dominoes + 6 trominoes
    auto shapes4 = enumerate_single_clusters(6, 4);
    CHECK(shapes4.size() == 9 + 19);
}

TEST_CASE("lemma dichotomy on small shapes") {
    ModelParams p = desk_params(6);
    SearchBounds bounds{5, 3.0, 2000000};
    VerificationReport rep = verify_lemma_small(6, bounds, p);
    CHECK(rep.all_passed());
}

TEST_CASE("a 2x4 bar grows past its shrink barrier") {
    // With U < delta < 2U, adding one particle and reshaping a 2x4 bar into a
    // 3x3 square lowers the energy (delta - 2U < 0), and the cheapest route
    // peaks at the creation cost delta, below the 2U detachment barrier.  The
    // bar is therefore a rectangle of minimal side 2 yet not stable at level
    // 2U: the classification and the level-based test disagree on it.
    ModelParams p = desk_params(6);
    SearchBounds bounds{10, 3.0, 2000000};
    SiteConfig bar = make_rectangle(6, Boundary::Periodic, 1, 1, 4, 2);
    auto r = stability_level(bar, bounds, p);
    REQUIRE(r.has_value());
    CHECK(r->level == doctest::Approx(p.delta).epsilon(1e-12));
    CHECK(r->final_config.particle_count() == 9);
    CHECK(bar.classify_robust().has_value());
}
