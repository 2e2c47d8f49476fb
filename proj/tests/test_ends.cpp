#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hoend/ends.hpp"

using namespace hoend;

namespace {

// F(a,b) = Map(S_a, T_b) for set-valued functors S, T on the shape;
// functions are encoded in base |T_b| with |S_a| digits.
struct HomBifunctor {
    SetBifunctor f;
    std::vector<int> s_size, t_size;
    std::vector<std::vector<int>> s_act, t_act;  // per morphism

    static long long pow_ll(int b, int e) {
        long long r = 1;
        while (e--) r *= b;
        return r;
    }
    static std::vector<int> decode(long long code, int digits, int base) {
        std::vector<int> f(digits);
        for (int i = digits - 1; i >= 0; --i) {
            f[i] = int(code % base);
            code /= base;
        }
        return f;
    }
    static long long encode(const std::vector<int>& f, int base) {
        long long c = 0;
        for (int v : f) c = c * base + v;
        return c;
    }

    void build(const FiniteCategory& k) {
        f.k = &k;
        int n = int(k.objects.size());
        f.size.assign(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                f.size[a][b] = int(pow_ll(t_size[b], s_size[a]));
        int nm = int(k.morphisms.size());
        f.left.assign(nm, std::vector<std::vector<int>>(n));
        f.right.assign(nm, std::vector<std::vector<int>>(n));
        for (int u = 0; u < nm; ++u) {
            int x = k.morphisms[u].src, y = k.morphisms[u].dst;
            for (int b = 0; b < n; ++b) {
                // precompose with S(u): Map(S_y,T_b) -> Map(S_x,T_b)
                for (long long c = 0; c < pow_ll(t_size[b], s_size[y]); ++c) {
                    auto g = decode(c, s_size[y], t_size[b]);
                    std::vector<int> h(s_size[x]);
                    for (int e = 0; e < s_size[x]; ++e) h[e] = g[s_act[u][e]];
                    f.left[u][b].push_back(int(encode(h, t_size[b])));
                }
            }
            for (int a = 0; a < n; ++a) {
                // postcompose with T(u): Map(S_a,T_x) -> Map(S_a,T_y)
                for (long long c = 0; c < pow_ll(t_size[x], s_size[a]); ++c) {
                    auto g = decode(c, s_size[a], t_size[x]);
                    std::vector<int> h(s_size[a]);
                    for (int e = 0; e < s_size[a]; ++e) h[e] = t_act[u][g[e]];
                    f.right[u][a].push_back(int(encode(h, t_size[y])));
                }
            }
        }
        f.validate();
    }
};

HomBifunctor random_hom_bifunctor(const FiniteCategory& k, std::mt19937_64& rng) {
    HomBifunctor h;
    int n = int(k.objects.size());
    std::uniform_int_distribution<int> sz(1, 3);
    for (int a = 0; a < n; ++a) {
        h.s_size.push_back(sz(rng));
        h.t_size.push_back(sz(rng));
    }
    for (const auto& m : k.morphisms) {
        std::vector<int> sa(h.s_size[m.src]), ta(h.t_size[m.src]);
        if (k.is_identity(int(&m - k.morphisms.data()))) {
            for (int i = 0; i < int(sa.size()); ++i) sa[i] = i;
            for (int i = 0; i < int(ta.size()); ++i) ta[i] = i;
        } else {
            for (auto& v : sa)
                v = std::uniform_int_distribution<int>(0, h.s_size[m.dst] - 1)(rng);
            for (auto& v : ta)
                v = std::uniform_int_distribution<int>(0, h.t_size[m.dst] - 1)(rng);
        }
        h.s_act.push_back(sa);
        h.t_act.push_back(ta);
    }
    h.build(k);
    return h;
}

}  // namespace

TEST_CASE("end over the terminal category is the value") {
    auto k = FiniteCategory::terminal();
    SetBifunctor f;
    f.k = &k;
    f.size = {{4}};
    f.left = {{{0, 1, 2, 3}}};
    f.right = {{{0, 1, 2, 3}}};
    f.validate();
    CHECK(end_of(f).families.size() == 4);
    CHECK(end_equals_equalizer(f));
}

TEST_CASE("ends of hom bifunctors are natural transformation sets") {
    auto k = FiniteCategory::linear_poset(1);
    int u = -1;
    for (int m = 0; m < int(k.morphisms.size()); ++m)
        if (!k.is_identity(m)) u = m;
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        auto h = random_hom_bifunctor(k, rng);
        // oracle: pairs (f0: S0->T0, f1: S1->T1) with T(u) f0 = f1 S(u)
        int x = k.morphisms[u].src, y = k.morphisms[u].dst;
        long long expect = 0;
        long long n0 = HomBifunctor::pow_ll(h.t_size[x], h.s_size[x]);
        long long n1 = HomBifunctor::pow_ll(h.t_size[y], h.s_size[y]);
        for (long long c0 = 0; c0 < n0; ++c0)
            for (long long c1 = 0; c1 < n1; ++c1) {
                auto f0 = HomBifunctor::decode(c0, h.s_size[x], h.t_size[x]);
                auto f1 = HomBifunctor::decode(c1, h.s_size[y], h.t_size[y]);
                bool ok = true;
                for (int e = 0; e < h.s_size[x] && ok; ++e)
                    ok = h.t_act[u][f0[e]] == f1[h.s_act[u][e]];
                if (ok) ++expect;
            }
        auto e = end_of(h.f);
        CHECK(static_cast<long long>(e.families.size()) == expect);
        CHECK(e.legs_compatible);
        CHECK(end_equals_equalizer(h.f));
    }
}

TEST_CASE("simplicial end computed degreewise") {
    // terminal shape: the end of a one-object diagram is its value
    auto k = FiniteCategory::terminal();
    auto d1 = SimplicialSet::standard_simplex(1);
    SSetBifunctor f;
    f.k = &k;
    f.value = {{d1}};
    f.left = {{SimplicialMap::identity(f.value[0][0])}};
    f.right = {{SimplicialMap::identity(f.value[0][0])}};
    auto e = end_of_sset(f, 1);
    CHECK(e.cells[0].size() == 2);
    CHECK(e.cells[1].size() == 1);
}

TEST_CASE("simplex category over a poset") {
    auto k = FiniteCategory::linear_poset(1);
    auto dk = delta_over_category(k, 2);
    dk.cat.validate();
    // chains: 2 + 3 + 4
    CHECK(dk.chain_of.size() == 9);
    // every object receives an identity and the face/degeneracy maps exist
    for (int p = 1; p <= 2; ++p)
        for (const Chain& c : enumerate_chains(k, p))
            for (int i = 0; i <= p; ++i) {
                Chain fc = chain_face(k, c, i);
                CHECK(dk.find_morphism(dk.object_of(fc), dk.object_of(c),
                                       mono_delta(i, p)) >= 0);
            }
}

TEST_CASE("cosimplicial replacement level sizes and identities") {
    auto k = FiniteCategory::linear_poset(1);
    auto sd = subdivision_category(k);

    // natural-system flavor over the arrow poset: levels indexed by
    // chains, so 2 / 3 / 4 factors in degrees 0..2
    auto spec = cosimplicial_spec(k, Flavor::natural_system, 2, &sd, nullptr);
    CHECK(spec.factor_obj[0].size() == 2);
    CHECK(spec.factor_obj[1].size() == 3);
    CHECK(spec.factor_obj[2].size() == 4);

    // hom-end flavor produces the identical skeleton
    auto spec2 = cosimplicial_spec(k, Flavor::hom_end, 2, &sd, nullptr);
    CHECK(spec.factor_obj == spec2.factor_obj);
    for (size_t p = 0; p < spec.coface.size(); ++p)
        for (size_t i = 0; i < spec.coface[p].size(); ++i)
            for (size_t c = 0; c < spec.coface[p][i].size(); ++c) {
                CHECK(spec.coface[p][i][c].src == spec2.coface[p][i][c].src);
                CHECK(spec.coface[p][i][c].mor == spec2.coface[p][i][c].mor);
            }

    // a hom bifunctor restricted along Sd K -> K^op x K
    std::mt19937_64 rng(7);
    auto h = random_hom_bifunctor(k, rng);
    auto diag = over_subdivision(h.f, sd);
    auto x = cosimplicial_replacement(diag, spec);  // validates identities
    CHECK(x.n == 2);
    CHECK(x.factor_size[0].size() == 2);
    CHECK(x.factor_size[1].size() == 3);
    CHECK(x.factor_size[2].size() == 4);

    // terminal category: constant cosimplicial object
    auto t = FiniteCategory::terminal();
    auto sdt = subdivision_category(t);
    auto tspec = cosimplicial_spec(t, Flavor::natural_system, 2, &sdt, nullptr);
    SetDiagram c;
    c.shape = &sdt;
    c.size = {3};
    c.action = {{0, 1, 2}};
    c.validate();
    auto cx = cosimplicial_replacement(c, tspec);
    for (int p = 0; p <= 2; ++p) CHECK(cx.size[p] == 3);
    for (auto& lvl : cx.coface)
        for (auto& m : lvl) CHECK(m == std::vector<long long>{0, 1, 2});
}

TEST_CASE("delta-flavor replacement with the subset diagram") {
    auto k = FiniteCategory::linear_poset(1);
    auto dk = delta_over_category(k, 3);
    // F(chain) = subsets of its vertex set, action = direct image
    SetDiagram f;
    f.shape = &dk.cat;
    for (const Chain& c : dk.chain_of)
        f.size.push_back(1 << (c.length() + 1));
    for (int m = 0; m < int(dk.cat.morphisms.size()); ++m) {
        const auto& theta = dk.theta_of[m];
        int srclen = dk.chain_of[dk.cat.morphisms[m].src].length();
        std::vector<int> act;
        for (int sub = 0; sub < (1 << (srclen + 1)); ++sub) {
            int img = 0;
            for (int v = 0; v <= srclen; ++v)
                if (sub & (1 << v)) img |= 1 << theta[v];
            act.push_back(img);
        }
        f.action.push_back(std::move(act));
    }
    f.validate();
    auto spec = cosimplicial_spec(k, Flavor::delta_over_k, 2, nullptr, &dk);
    auto x = cosimplicial_replacement(f, spec);  // identities checked inside
    CHECK(x.factor_size[0] == std::vector<long long>{2, 2});
    CHECK(x.factor_size[1] == std::vector<long long>{4, 4, 4});
}

namespace {

// natural system on the arrow poset: A -> C <- B at (id0, u, id1)
SSetDiagram cospan_system(const FiniteCategory& sd, const FiniteCategory& k,
                          std::vector<SimplicialSet>& store,
                          const SimplicialSet& a, const SimplicialSet& b,
                          const SimplicialSet& c, const SimplicialMap& ac,
                          const SimplicialMap& bc) {
    SSetDiagram d;
    d.shape = &sd;
    store.clear();
    store.reserve(sd.objects.size());
    std::vector<int> which(sd.objects.size());
    for (int o = 0; o < int(sd.objects.size()); ++o) {
        int g = sd_object_to_mor(k, sd, o);
        if (k.is_identity(g))
            store.push_back(k.morphisms[g].src == 0 ? a : b);
        else
            store.push_back(c);
    }
    d.value = store;
    for (int m = 0; m < int(sd.morphisms.size()); ++m) {
        int so = sd.morphisms[m].src, to = sd.morphisms[m].dst;
        SimplicialMap f;
        if (so == to) {
            f = SimplicialMap::identity(d.value[so]);
        } else {
            int g = sd_object_to_mor(k, sd, so);
            f = k.morphisms[g].src == 0 ? ac : bc;
        }
        f.src = &d.value[so];
        f.tgt = &d.value[to];
        d.action.push_back(f);
    }
    d.validate();
    return d;
}

}  // namespace

TEST_CASE("tot of constant cosimplicial objects") {
    auto t = FiniteCategory::terminal();
    auto sdt = subdivision_category(t);
    auto tspec = cosimplicial_spec(t, Flavor::natural_system, 3, &sdt, nullptr);

    SSetDiagram point;
    point.shape = &sdt;
    point.value = {SimplicialSet::standard_simplex(0)};
    point.action = {SimplicialMap::identity(point.value[0])};
    auto xp = formal_replacement(point, tspec);
    auto rp = tot(xp, 1, 1);
    CHECK(rp.ss.cell_count() == 1);
    CHECK(rp.stabilized);

    SSetDiagram edge;
    edge.shape = &sdt;
    edge.value = {SimplicialSet::standard_simplex(1)};
    edge.action = {SimplicialMap::identity(edge.value[0])};
    auto xe = formal_replacement(edge, tspec);
    auto re = tot(xe, 2, 1);
    CHECK(re.stabilized);
    CHECK(re.ss.cells[0].size() == 2);
    CHECK(re.ss.cells[1].size() == 1);

    SSetDiagram two;
    two.shape = &sdt;
    two.value = {SimplicialSet::discrete({"a", "b"})};
    two.action = {SimplicialMap::identity(two.value[0])};
    auto xt = formal_replacement(two, tspec);
    auto rt = tot(xt, 1, 1);
    CHECK(rt.stabilized);
    CHECK(rt.ss.cells[0].size() == 2);
    CHECK(rt.ss.dim() == 0);
}

TEST_CASE("tot of the cospan natural system is a point") {
    auto k = FiniteCategory::linear_poset(1);
    auto sd = subdivision_category(k);
    auto spec = cosimplicial_spec(k, Flavor::natural_system, 3, &sd, nullptr);
    auto pt = SimplicialSet::standard_simplex(0);
    auto d1 = SimplicialSet::standard_simplex(1);
    // endpoints 0 and 1 of the edge
    SimplicialMap v0, v1;
    v0.image = {{Sx{0, {0}}}};
    v1.image = {{Sx{1, {0}}}};
    std::vector<SimplicialSet> store;
    auto diag = cospan_system(sd, k, store, pt, pt, d1, v0, v1);
    auto x = formal_replacement(diag, spec);
    auto r = tot(x, 2, 1);
    CHECK(r.stabilized);
    // the homotopy pullback of * -> D1 <- * along the two endpoints:
    // one vertex (the edge itself) and no nondegenerate higher cells
    CHECK(r.ss.cells[0].size() == 1);
    CHECK(r.ss.dim() == 0);
}

TEST_CASE("matching objects and the Reedy condition") {
    auto two = SimplicialSet::discrete({"a", "b"});
    auto pt = SimplicialSet::standard_simplex(0);
    auto cx = constant_cosimplicial(two, 2);
    cx.validate();
    auto cy = constant_cosimplicial(pt, 2);

    auto m0 = matching_object(cx, 0);
    CHECK(m0.ss.cell_count() == 1);  // terminal by convention
    auto m1 = matching_object(cx, 1);
    CHECK(m1.ss.cells[0].size() == 2);  // M^1 = X^0
    auto m2 = matching_object(cx, 2);
    CHECK(m2.ss.cells[0].size() == 2);  // constant diagonal tuples only
    std::string err;
    CHECK(m1.comparison.valid(&err));
    CHECK(m2.comparison.valid(&err));

    CosimplicialMap f;
    f.src = &cx;
    f.tgt = &cy;
    for (int p = 0; p <= 2; ++p) {
        SimplicialMap lvl;
        lvl.src = &cx.level[p];
        lvl.tgt = &cy.level[p];
        lvl.image = {{Sx{0, {0}}, Sx{0, {0}}}};
        f.level.push_back(lvl);
    }
    auto verdict = is_reedy_fibration(f, 2);
    CHECK(verdict.pass);

    // a collapse with a non-fibration at level 0
    auto d2 = SimplicialSet::standard_simplex(2);
    auto cz = constant_cosimplicial(d2, 1);
    auto cw = constant_cosimplicial(pt, 1);
    CosimplicialMap g;
    g.src = &cz;
    g.tgt = &cw;
    for (int p = 0; p <= 1; ++p) {
        auto maps = enumerate_maps(cz.level[p], cw.level[p]);
        g.level.push_back(maps[0]);
    }
    auto bad = is_reedy_fibration(g, 2);
    CHECK_FALSE(bad.pass);
    CHECK(bad.failed_level == 0);
}
