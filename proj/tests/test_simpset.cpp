#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "hoend/simpset.hpp"

using namespace hoend;

namespace {

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

GroupInvariants inv(int betti, std::vector<long long> tors = {}) {
    GroupInvariants g;
    g.betti = betti;
    for (long long t : tors) g.torsion.push_back(t);
    return g;
}

}  // namespace

TEST_CASE("monotone map calculus") {
    CHECK(mono_compose(mono_delta(1, 2), mono_sigma(0, 1)) ==
          Monotone{0, 0, 2});
    Monotone eta, pi;
    epi_mono_factor({0, 0, 2, 2, 3}, eta, pi);
    CHECK(eta == Monotone{0, 2, 3});
    CHECK(pi == Monotone{0, 0, 1, 1, 2});
    CHECK(all_surjections(3, 1).size() == 3);  // choose the step position
    CHECK(all_surjections(2, 2).size() == 1);
    CHECK(all_surjections(1, 2).empty());
}

TEST_CASE("standard simplices: counts, faces, action") {
    for (int n = 0; n <= 3; ++n) {
        auto dn = SimplicialSet::standard_simplex(n);
        dn.validate();
        for (int d = 0; d <= n; ++d)
            CHECK(long(dn.cells[d].size()) == binom(n + 1, d + 1));
        // total q-simplices = monotone maps [q] -> [n]
        for (int q = 0; q <= 3; ++q)
            CHECK(long(dn.simplices(q).size()) == binom(n + q + 1, q + 1));
    }
    // contravariant action: s.(theta o psi) == (s.theta).psi
    auto d2 = SimplicialSet::standard_simplex(2);
    for (const Sx& s : d2.simplices(2)) {
        for (const auto& theta : all_surjections(3, 2)) {
            Sx st = d2.act(s, theta);
            for (int i = 0; i <= 3; ++i) {
                Sx lhs = d2.act(s, mono_compose(theta, mono_delta(i, 3)));
                CHECK(lhs == d2.act(st, mono_delta(i, 3)));
            }
        }
    }
}

TEST_CASE("delta_simplex round trip") {
    for (int p = 1; p <= 3; ++p) {
        auto dp = SimplicialSet::standard_simplex(p);
        for (const Sx& s : dp.simplices(2)) {
            Monotone v = delta_vertices(dp, s);
            CHECK(delta_simplex(p, v) == s);
        }
    }
}

TEST_CASE("boundary and horn cell counts") {
    auto b2 = SimplicialSet::boundary(2);
    b2.validate();
    CHECK(b2.cells[0].size() == 3);
    CHECK(b2.cells[1].size() == 3);
    CHECK(b2.dim() == 1);
    auto h21 = SimplicialSet::horn(2, 1);
    h21.validate();
    CHECK(h21.cells[0].size() == 3);
    CHECK(h21.cells[1].size() == 2);
    auto h31 = SimplicialSet::horn(3, 1);
    h31.validate();
    CHECK(h31.cells[2].size() == 3);
}

TEST_CASE("products of simplices agree with strict chains in the poset") {
    auto d1 = SimplicialSet::standard_simplex(1);
    auto d2 = SimplicialSet::standard_simplex(2);
    auto sq = product({&d1, &d1});
    sq.ss.validate();
    CHECK(sq.ss.cells[0].size() == 4);
    CHECK(sq.ss.cells[1].size() == 5);
    CHECK(sq.ss.cells[2].size() == 2);

    auto prism = product({&d1, &d2});
    prism.ss.validate();
    // oracle: strictly increasing chains in the product poset [1] x [2]
    std::vector<std::pair<int, int>> pts;
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 2; ++b) pts.push_back({a, b});
    auto leq = [](std::pair<int, int> u, std::pair<int, int> v) {
        return u.first <= v.first && u.second <= v.second;
    };
    std::vector<long> chains(4, 0);
    for (size_t i = 0; i < pts.size(); ++i) {
        chains[0]++;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (pts[i] == pts[j] || !leq(pts[i], pts[j])) continue;
            chains[1]++;
            for (size_t l = 0; l < pts.size(); ++l) {
                if (pts[j] == pts[l] || !leq(pts[j], pts[l])) continue;
                chains[2]++;
                for (size_t m = 0; m < pts.size(); ++m)
                    if (pts[l] != pts[m] && leq(pts[l], pts[m])) chains[3]++;
            }
        }
    }
    for (int d = 0; d <= 3; ++d)
        CHECK(long(prism.ss.cells[d].size()) == chains[d]);

    // normal form round trip on every simplex of the square
    for (int q = 0; q <= 3; ++q)
        for (const Sx& s : sq.ss.simplices(q))
            CHECK(sq.from_components(sq.components(s)) == s);
    for (int f = 0; f < 2; ++f) {
        auto pr = sq.projection(f);
        std::string err;
        CHECK(pr.valid(&err));
    }
}

TEST_CASE("map enumeration matches monotone map counts") {
    auto d0 = SimplicialSet::standard_simplex(0);
    auto d1 = SimplicialSet::standard_simplex(1);
    auto d2 = SimplicialSet::standard_simplex(2);
    CHECK(enumerate_maps(d1, d2).size() == 6);   // monotone [1] -> [2]
    CHECK(enumerate_maps(d2, d1).size() == 4);   // monotone [2] -> [1]
    CHECK(enumerate_maps(d2, d0).size() == 1);
    CHECK(enumerate_maps(SimplicialSet::empty_set(), d2).size() == 1);
    CHECK(enumerate_maps(d1, SimplicialSet::empty_set()).empty());
    for (const auto& m : enumerate_maps(d2, d2)) {
        std::string err;
        CHECK(m.valid(&err));
    }
    // partial assignment pins the two endpoints of the edge
    PartialAssign pin(2);
    pin[0].resize(2);
    pin[1].resize(1);
    pin[0][0] = Sx{0, {0}};
    pin[0][1] = Sx{2, {0}};
    auto pinned = enumerate_maps(d1, d2, &pin);
    CHECK(pinned.size() == 1);  // only the edge 0.2 connects them
    CHECK(d2.simplex_name(pinned[0].image[1][0]) == "0.2");
}

TEST_CASE("simplicial homology with torsion") {
    auto b2 = SimplicialSet::boundary(2);
    auto h = homology(b2);
    REQUIRE(h.size() == 2);
    CHECK(h[0] == inv(1));
    CHECK(h[1] == inv(1));

    auto b3 = SimplicialSet::boundary(3);
    h = homology(b3);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == inv(1));
    CHECK(h[1] == inv(0));
    CHECK(h[2] == inv(1));

    // one vertex, one loop e, one 2-cell with faces (e, s0 v, e):
    // the boundary is 2e, so H_1 = Z/2
    SimplicialSet pp;
    pp.cells.resize(3);
    pp.cells[0].push_back({"v", {}});
    pp.cells[1].push_back({"e", {Sx{0, {0}}, Sx{0, {0}}}});
    pp.cells[2].push_back(
        {"U", {Sx{0, {0, 1}}, Sx{0, {0, 0}}, Sx{0, {0, 1}}}});
    pp.validate();
    h = homology(pp);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == inv(1));
    CHECK(h[1] == inv(0, {2}));
    CHECK(h[2] == inv(0));
}

TEST_CASE("mapping objects and the product adjunction") {
    auto d1 = SimplicialSet::standard_simplex(1);
    auto d2 = SimplicialSet::standard_simplex(2);
    auto mo = mapping_object(d1, d2, 2);
    mo.ss.validate();
    CHECK(mo.ss.cells[0].size() == 6);  // monotone maps [1] -> [2]

    // oracle: p-simplices of Map(D1,D2) = monotone maps [1]x[p] -> [2]
    long count1 = 0;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int c = 0; c <= 2; ++c)
                for (int d = 0; d <= 2; ++d)
                    if (a <= b && a <= c && b <= d && c <= d) ++count1;
    CHECK(long(mo.ss.simplices(1).size()) == count1);

    // adjunction: maps A -> Map(K,X) against maps A x K -> X
    auto square = product({&d1, &d1});
    CHECK(enumerate_maps(d1, mo.ss).size() ==
          enumerate_maps(square.ss, d2).size());

    // classify/realize round trip on every 1-simplex
    for (const Sx& s : mo.ss.simplices(1)) {
        auto m = mo.realize(s, 1);
        CHECK(mo.classify(m, 1) == s);
    }

    // Map(Delta[0], X) recovers X
    auto d0 = SimplicialSet::standard_simplex(0);
    auto mx = mapping_object(d0, d2, 2);
    for (int d = 0; d <= 2; ++d)
        CHECK(mx.ss.cells[d].size() == d2.cells[d].size());
}

TEST_CASE("induced maps between mapping objects") {
    auto d1 = SimplicialSet::standard_simplex(1);
    auto d2 = SimplicialSet::standard_simplex(2);
    auto ends = SimplicialSet::boundary(1);  // two points
    auto sub = subcomplex(d1, {{true, true}, {false}});
    auto mo_l = mapping_object(d1, d2, 1);
    auto mo_k = mapping_object(sub.ss, d2, 1);
    auto res = mapping_object_precompose(mo_l, mo_k, sub.inclusion);
    std::string err;
    CHECK(res.valid(&err));
    CHECK(mo_k.ss.cells[0].size() == 9);  // pairs of vertices of Delta[2]

    auto coll = enumerate_maps(d2, d1);  // pick a postcomposition target
    auto mo_y = mapping_object(d1, d1, 1);
    auto post = mapping_object_postcompose(mo_l, mo_y, coll[0]);
    CHECK(post.valid(&err));
    CHECK(ends.cells[0].size() == 2);
}

TEST_CASE("kan fibration verdicts") {
    auto pt = SimplicialSet::standard_simplex(0);
    auto two = SimplicialSet::discrete({"a", "b"});
    auto d2 = SimplicialSet::standard_simplex(2);

    auto maps = enumerate_maps(two, pt);
    REQUIRE(maps.size() == 1);
    auto v = is_kan_fibration(maps[0], 2);
    CHECK(v.pass);

    auto collapse = enumerate_maps(d2, pt);
    REQUIRE(collapse.size() == 1);
    auto bad = is_kan_fibration(collapse[0], 2);
    CHECK_FALSE(bad.pass);  // outer horn (2,0) has no filler in a nerve
    CHECK(bad.witness.find("2,0") != std::string::npos);
}

TEST_CASE("weak equivalence proxy") {
    auto d2 = SimplicialSet::standard_simplex(2);
    auto pt = SimplicialSet::standard_simplex(0);
    auto coll = enumerate_maps(d2, pt);
    auto good = weak_equivalence_proxy(coll[0]);
    CHECK(good.pass);
    CHECK(good.label == "proxy");

    // boundary inclusion changes H_1
    auto dn = SimplicialSet::standard_simplex(2);
    auto bd = subcomplex(dn, {{true, true, true}, {true, true, true}, {false}});
    auto bad = weak_equivalence_proxy(bd.inclusion);
    CHECK_FALSE(bad.pass);

    // inner horn inclusion is one
    std::vector<std::vector<bool>> keep = {
        {true, true, true}, {true, false, true}, {false}};
    auto horn = subcomplex(dn, keep);
    auto h = weak_equivalence_proxy(horn.inclusion);
    CHECK(h.pass);
}

TEST_CASE("path components") {
    auto two = SimplicialSet::discrete({"a", "b"});
    CHECK(path_components(two) == 2);
    auto b2 = SimplicialSet::boundary(2);
    CHECK(path_components(b2) == 1);
}

TEST_CASE("nerve of loop-free categories") {
    auto lin = FiniteCategory::linear_poset(2);
    std::vector<std::vector<Chain>> chains;
    auto n = nerve(lin, &chains);
    n.validate();
    auto d2 = SimplicialSet::standard_simplex(2);
    for (int d = 0; d <= 2; ++d)
        CHECK(n.cells[d].size() == d2.cells[d].size());
    auto h = homology(n);
    CHECK(h[0] == inv(1));
    CHECK(chains[2].size() == 1);

    CHECK_THROWS_AS(nerve(FiniteCategory::cyclic_group(2)), ContractViolation);
}

TEST_CASE("enrichment smoke checks") {
    auto d1 = SimplicialSet::standard_simplex(1);
    auto b2 = SimplicialSet::boundary(2);
    auto rep = check_enrichment_axioms({&d1, &b2});
    CHECK(rep.all_pass);
}
