#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hoend/fincat.hpp"

using namespace hoend;

TEST_CASE("builders validate") {
    FiniteCategory::terminal().validate();
    FiniteCategory::linear_poset(1).validate();
    FiniteCategory::linear_poset(2).validate();
    FiniteCategory::cyclic_group(2).validate();
    FiniteCategory::cyclic_group(3).validate();
}

TEST_CASE("subdivision of terminal category") {
    FiniteCategory sd = subdivision_category(FiniteCategory::terminal());
    CHECK(sd.objects.size() == 1);
    CHECK(sd.morphisms.size() == 1);
}

TEST_CASE("subdivision of poset 0<1") {
    // Oracle by brute force: the factorization squares of the 3 morphisms.
    FiniteCategory k = FiniteCategory::linear_poset(1);
    FiniteCategory sd = subdivision_category(k);
    CHECK(sd.objects.size() == 3);
    int obj_arrow = sd.object_index("0<1");
    int in_from_id0 = 0, in_from_id1 = 0;
    for (const auto& m : sd.morphisms) {
        if (m.dst != obj_arrow) continue;
        if (sd.objects[m.src] == "id:0") ++in_from_id0;
        if (sd.objects[m.src] == "id:1") ++in_from_id1;
    }
    CHECK(in_from_id0 == 1);
    CHECK(in_from_id1 == 1);
}

TEST_CASE("subdivision of Z/2") {
    // Pairs (a,b) with b f a = f': every object of Sd receives 4 morphisms
    // total (2 choices of a, 2 of b); Sd has 2 objects.
    FiniteCategory g = FiniteCategory::cyclic_group(2);
    FiniteCategory sd = subdivision_category(g);
    CHECK(sd.objects.size() == 2);
    for (int o = 0; o < 2; ++o) {
        int out = 0;
        for (const auto& m : sd.morphisms)
            if (m.src == o) ++out;
        CHECK(out == 4);
    }
}

TEST_CASE("subdivision object count equals morphism count") {
    for (const auto& k : {FiniteCategory::terminal(), FiniteCategory::linear_poset(1),
                          FiniteCategory::linear_poset(2), FiniteCategory::cyclic_group(2),
                          FiniteCategory::cyclic_group(3)}) {
        FiniteCategory sd = subdivision_category(k);
        CHECK(sd.objects.size() == k.morphisms.size());
    }
}

TEST_CASE("comma categories under objects") {
    FiniteCategory t = FiniteCategory::terminal();
    CommaCategory c0 = comma_under(t, 0);
    CHECK(c0.cat.objects.size() == 1);
    CHECK(c0.initial_object == 0);

    FiniteCategory k = FiniteCategory::linear_poset(1);
    CommaCategory u0 = comma_under(k, k.object_index("0"));
    CHECK(u0.cat.objects.size() == 2);
    CHECK(u0.initial_object >= 0);
    CommaCategory u1 = comma_under(k, k.object_index("1"));
    CHECK(u1.cat.objects.size() == 1);

    CHECK_THROWS_AS(comma_under(k, 99), ContractViolation);
}

TEST_CASE("comma categories always have an initial object") {
    for (const auto& k : {FiniteCategory::linear_poset(2), FiniteCategory::cyclic_group(3)}) {
        for (int x = 0; x < int(k.objects.size()); ++x) {
            CommaCategory c = comma_under(k, x);
            REQUIRE(c.initial_object >= 0);
            // exhaustive: exactly one morphism from the initial object to each object
            for (int o = 0; o < int(c.cat.objects.size()); ++o) {
                int count = 0;
                for (const auto& m : c.cat.morphisms)
                    if (m.src == c.initial_object && m.dst == o) ++count;
                CHECK(count == 1);
            }
        }
    }
}

TEST_CASE("chain enumeration on poset 0<1") {
    FiniteCategory k = FiniteCategory::linear_poset(1);
    CHECK(enumerate_chains(k, 0).size() == 2);
    CHECK(enumerate_chains(k, 1).size() == 3);
    CHECK(enumerate_chains(k, 2).size() == 4);  // brute force: id,id / id,f / f,id / id1,id1
}

TEST_CASE("chain count recursion") {
    for (const auto& k : {FiniteCategory::linear_poset(2), FiniteCategory::cyclic_group(2)}) {
        for (int p = 0; p < 4; ++p) {
            auto cp = enumerate_chains(k, p);
            size_t expect = 0;
            for (const auto& c : cp) {
                int tail = chain_target(k, c);
                for (const auto& m : k.morphisms)
                    if (m.src == tail) ++expect;
            }
            CHECK(enumerate_chains(k, p + 1).size() == expect);
        }
    }
}

TEST_CASE("chain faces and degeneracies satisfy simplicial identities") {
    FiniteCategory k = FiniteCategory::linear_poset(2);
    for (const Chain& c : enumerate_chains(k, 3)) {
        for (int i = 0; i <= 2; ++i)
            for (int j = i + 1; j <= 3; ++j) {
                Chain lhs = chain_face(k, chain_face(k, c, j), i);
                Chain rhs = chain_face(k, chain_face(k, c, i), j - 1);
                CHECK(lhs == rhs);
            }
        for (int j = 0; j <= 3; ++j) {
            Chain s = chain_degeneracy(k, c, j);
            CHECK(chain_face(k, s, j) == c);
            CHECK(chain_face(k, s, j + 1) == c);
        }
    }
}

TEST_CASE("loop freeness certificates") {
    CHECK(loop_free_certificate(FiniteCategory::linear_poset(2)).loop_free);
    LoopFreeCertificate bad = loop_free_certificate(FiniteCategory::cyclic_group(2));
    CHECK(!bad.loop_free);
    CHECK(!bad.reason.empty());
}

TEST_CASE("chain induced map along functors") {
    FiniteCategory l = FiniteCategory::linear_poset(1);
    FiniteCategory k = FiniteCategory::linear_poset(2);
    // inclusion 0<1 into 0<1<2
    Functor phi;
    phi.src = &l;
    phi.dst = &k;
    phi.obj_map = {k.object_index("0"), k.object_index("1")};
    phi.mor_map.assign(l.morphisms.size(), -1);
    phi.mor_map[l.morphism_index("id:0")] = k.morphism_index("id:0");
    phi.mor_map[l.morphism_index("id:1")] = k.morphism_index("id:1");
    phi.mor_map[l.morphism_index("0<1")] = k.morphism_index("0<1");
    phi.validate();
    Chain c;
    c.mors = {l.morphism_index("0<1")};
    Chain img = chain_induced_map(phi, c);
    CHECK(img.mors == std::vector<int>{k.morphism_index("0<1")});

    // identity functor maps chains to themselves
    Functor id;
    id.src = &k;
    id.dst = &k;
    for (int o = 0; o < int(k.objects.size()); ++o) id.obj_map.push_back(o);
    for (int m = 0; m < int(k.morphisms.size()); ++m) id.mor_map.push_back(m);
    for (const Chain& ch : enumerate_chains(k, 2)) CHECK(chain_induced_map(id, ch) == ch);

    // constant functor sends chains to identity chains
    Functor cst;
    cst.src = &k;
    cst.dst = &k;
    cst.obj_map.assign(k.objects.size(), k.object_index("0"));
    cst.mor_map.assign(k.morphisms.size(), k.identity[k.object_index("0")]);
    cst.validate();
    Chain two;
    two.mors = {k.morphism_index("0<1"), k.morphism_index("1<2")};
    Chain cimg = chain_induced_map(cst, two);
    for (int m : cimg.mors) CHECK(k.is_identity(m));

    // invalid functor data rejected
    Functor bad = cst;
    bad.mor_map[k.morphism_index("0<1")] = k.morphism_index("0<1");
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("chain_act composes segments") {
    FiniteCategory k = FiniteCategory::linear_poset(2);
    Chain c;
    c.mors = {k.morphism_index("0<1"), k.morphism_index("1<2")};
    Chain whole = chain_act(k, c, {0, 2});
    CHECK(whole.mors == std::vector<int>{k.morphism_index("0<2")});
    Chain pt = chain_act(k, c, {1});
    CHECK(pt.object == k.object_index("1"));
    Chain degen = chain_act(k, c, {0, 0, 1, 2});
    CHECK(degen.mors.size() == 3);
    CHECK(k.is_identity(degen.mors[0]));
}
