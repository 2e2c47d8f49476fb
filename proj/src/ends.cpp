#include "hoend/ends.hpp"

#include <algorithm>
#include <numeric>

namespace hoend {

// ---------------------------------------------------------------------------
// diagram validation

void SetBifunctor::validate() const {
    const FiniteCategory& K = *k;
    int nobj = int(K.objects.size());
    auto check_fun = [&](const std::vector<int>& f, int from, int to) {
        if (int(f.size()) != from) throw ContractViolation("action size mismatch");
        for (int v : f)
            if (v < 0 || v >= to) throw ContractViolation("action out of range");
    };
    for (int u = 0; u < int(K.morphisms.size()); ++u) {
        int x = K.morphisms[size_t(u)].src, y = K.morphisms[size_t(u)].dst;
        for (int b = 0; b < nobj; ++b) check_fun(left[size_t(u)][size_t(b)], size[size_t(y)][size_t(b)], size[size_t(x)][size_t(b)]);
        for (int a = 0; a < nobj; ++a) check_fun(right[size_t(u)][size_t(a)], size[size_t(a)][size_t(x)], size[size_t(a)][size_t(y)]);
    }
    for (int o = 0; o < nobj; ++o) {
        int e = K.identity[size_t(o)];
        for (int b = 0; b < nobj; ++b)
            for (int v = 0; v < size[size_t(o)][size_t(b)]; ++v)
                if (left[size_t(e)][size_t(b)][size_t(v)] != v)
                    throw ContractViolation("left identity action not identity");
        for (int a = 0; a < nobj; ++a)
            for (int v = 0; v < size[size_t(a)][size_t(o)]; ++v)
                if (right[size_t(e)][size_t(a)][size_t(v)] != v)
                    throw ContractViolation("right identity action not identity");
    }
    for (const auto& [pair, w] : K.compose_table) {
        auto [u, v] = pair;  // u then v
        for (int b = 0; b < nobj; ++b)
            for (int e = 0; e < size[size_t(K.morphisms[size_t(v)].dst)][size_t(b)]; ++e)
                if (left[size_t(w)][size_t(b)][size_t(e)] !=
                    left[size_t(u)][size_t(b)][size_t(left[size_t(v)][size_t(b)][size_t(e)])])
                    throw ContractViolation("left action not functorial");
        for (int a = 0; a < nobj; ++a)
            for (int e = 0; e < size[size_t(a)][size_t(K.morphisms[size_t(u)].src)]; ++e)
                if (right[size_t(w)][size_t(a)][size_t(e)] !=
                    right[size_t(v)][size_t(a)][size_t(right[size_t(u)][size_t(a)][size_t(e)])])
                    throw ContractViolation("right action not functorial");
    }
    // bifunctor squares
    for (int u = 0; u < int(K.morphisms.size()); ++u)
        for (int v = 0; v < int(K.morphisms.size()); ++v) {
            int x = K.morphisms[size_t(u)].src, y = K.morphisms[size_t(u)].dst;
            int a = K.morphisms[size_t(v)].src;
            for (int e = 0; e < size[size_t(y)][size_t(a)]; ++e)
                if (right[size_t(v)][size_t(x)][size_t(left[size_t(u)][size_t(a)][size_t(e)])] !=
                    left[size_t(u)][size_t(K.morphisms[size_t(v)].dst)]
                        [size_t(right[size_t(v)][size_t(y)][size_t(e)])])
                    throw ContractViolation("bifunctor square does not commute");
        }
}

void SetDiagram::validate() const {
    const FiniteCategory& K = *shape;
    for (int m = 0; m < int(K.morphisms.size()); ++m) {
        const auto& mor = K.morphisms[size_t(m)];
        if (int(action[size_t(m)].size()) != size[size_t(mor.src)])
            throw ContractViolation("action size mismatch");
        for (int v : action[size_t(m)])
            if (v < 0 || v >= size[size_t(mor.dst)])
                throw ContractViolation("action out of range");
    }
    for (int o = 0; o < int(K.objects.size()); ++o)
        for (int v = 0; v < size[size_t(o)]; ++v)
            if (action[size_t(K.identity[size_t(o)])][size_t(v)] != v)
                throw ContractViolation("identity acts nontrivially");
    for (const auto& [pair, w] : K.compose_table)
        for (int v = 0; v < size[size_t(K.morphisms[size_t(pair.first)].src)]; ++v)
            if (action[size_t(w)][size_t(v)] !=
                action[size_t(pair.second)][size_t(action[size_t(pair.first)][size_t(v)])]
                )
                throw ContractViolation("action not functorial");
}

void SSetDiagram::validate() const {
    const FiniteCategory& K = *shape;
    for (int m = 0; m < int(K.morphisms.size()); ++m) {
        std::string err;
        if (!action[size_t(m)].valid(&err))
            throw ContractViolation("bad action at " + K.morphisms[size_t(m)].name +
                                    ": " + err);
    }
    for (int o = 0; o < int(K.objects.size()); ++o)
        if (action[size_t(K.identity[size_t(o)])].image !=
            SimplicialMap::identity(value[size_t(o)]).image)
            throw ContractViolation("identity acts nontrivially");
    for (const auto& [pair, w] : K.compose_table)
        if (action[size_t(pair.first)].then(action[size_t(pair.second)]).image !=
            action[size_t(w)].image)
            throw ContractViolation("action not functorial");
}

SetDiagram over_subdivision(const SetBifunctor& f, const FiniteCategory& sd) {
    const FiniteCategory& K = *f.k;
    SetDiagram d;
    d.shape = &sd;
    for (int o = 0; o < int(sd.objects.size()); ++o) {
        int g = sd_object_to_mor(K, sd, o);
        d.size.push_back(f.size[size_t(K.morphisms[size_t(g)].src)]
                               [size_t(K.morphisms[size_t(g)].dst)]);
    }
    for (int m = 0; m < int(sd.morphisms.size()); ++m) {
        auto [a, b] = sd_morphism_parts(K, sd, m);
        int g = sd_object_to_mor(K, sd, sd.morphisms[size_t(m)].src);
        int g2 = sd_object_to_mor(K, sd, sd.morphisms[size_t(m)].dst);
        int src2 = K.morphisms[size_t(g2)].src, dstg = K.morphisms[size_t(g)].dst;
        std::vector<int> act;
        for (int e = 0; e < d.size[size_t(sd.morphisms[size_t(m)].src)]; ++e)
            act.push_back(f.right[size_t(b)][size_t(src2)]
                              [size_t(f.left[size_t(a)][size_t(dstg)][size_t(e)])]);
        d.action.push_back(std::move(act));
    }
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// ends

SetEnd end_of(const SetBifunctor& f) {
    const FiniteCategory& K = *f.k;
    int nobj = int(K.objects.size());
    SetEnd e;
    std::vector<int> fam(size_t(nobj), 0);
    auto rec = [&](auto&& self, int a) -> void {
        if (a == nobj) {
            for (int u = 0; u < int(K.morphisms.size()); ++u) {
                int x = K.morphisms[size_t(u)].src, y = K.morphisms[size_t(u)].dst;
                if (f.right[size_t(u)][size_t(x)][size_t(fam[size_t(x)])] !=
                    f.left[size_t(u)][size_t(y)][size_t(fam[size_t(y)])])
                    return;
            }
            e.families.push_back(fam);
            return;
        }
        for (int v = 0; v < f.size[size_t(a)][size_t(a)]; ++v) {
            fam[size_t(a)] = v;
            self(self, a + 1);
        }
    };
    if (nobj == 0)
        e.families.push_back({});
    else
        rec(rec, 0);
    e.legs_compatible = true;
    return e;
}

bool end_equals_equalizer(const SetBifunctor& f) {
    const FiniteCategory& K = *f.k;
    int nobj = int(K.objects.size());
    std::vector<std::vector<int>> eq;
    std::vector<int> fam(size_t(std::max(nobj, 0)), 0);
    auto rec = [&](auto&& self, int a) -> void {
        if (a == nobj) {
            // the two maps prod^0 F -> prod^1 F, compared per 1-chain
            for (int u = 0; u < int(K.morphisms.size()); ++u) {
                int x = K.morphisms[size_t(u)].src, y = K.morphisms[size_t(u)].dst;
                if (f.right[size_t(u)][size_t(x)][size_t(fam[size_t(x)])] !=
                    f.left[size_t(u)][size_t(y)][size_t(fam[size_t(y)])])
                    return;
            }
            eq.push_back(fam);
            return;
        }
        for (int v = 0; v < f.size[size_t(a)][size_t(a)]; ++v) {
            fam[size_t(a)] = v;
            self(self, a + 1);
        }
    };
    if (nobj == 0)
        eq.push_back({});
    else
        rec(rec, 0);
    return eq == end_of(f).families;
}

SimplicialSet end_of_sset(const SSetBifunctor& f, int dim_bound) {
    const FiniteCategory& K = *f.k;
    int nobj = int(K.objects.size());
    auto elements = std::function<std::vector<std::vector<Sx>>(int)>(
        [&f, &K, nobj](int q) {
            std::vector<std::vector<Sx>> out;
            std::vector<std::vector<Sx>> lists;
            for (int a = 0; a < nobj; ++a)
                lists.push_back(f.value[size_t(a)][size_t(a)].simplices(q));
            std::vector<Sx> cur(static_cast<size_t>(nobj));
            auto rec = [&](auto&& self, int a) -> void {
                if (a == nobj) {
                    for (int u = 0; u < int(K.morphisms.size()); ++u) {
                        int x = K.morphisms[size_t(u)].src;
                        int y = K.morphisms[size_t(u)].dst;
                        if (!(f.right[size_t(u)][size_t(x)].apply(cur[size_t(x)]) ==
                              f.left[size_t(u)][size_t(y)].apply(cur[size_t(y)])))
                            return;
                    }
                    out.push_back(cur);
                    return;
                }
                for (const Sx& s : lists[size_t(a)]) {
                    cur[size_t(a)] = s;
                    self(self, a + 1);
                }
            };
            if (nobj == 0)
                out.push_back({});
            else
                rec(rec, 0);
            return out;
        });
    auto act = std::function<std::vector<Sx>(const std::vector<Sx>&, int,
                                             const Monotone&)>(
        [&f](const std::vector<Sx>& e, int, const Monotone& theta) {
            std::vector<Sx> out;
            for (size_t a = 0; a < e.size(); ++a)
                out.push_back(f.value[a][a].act(e[a], theta));
            return out;
        });
    return sset_from_functor<std::vector<Sx>>(dim_bound, elements, act);
}

// ---------------------------------------------------------------------------
// the simplex category over K

namespace {

std::vector<Monotone> all_monotone(int q, int p) {
    std::vector<Monotone> out;
    Monotone cur;
    auto rec = [&](auto&& self) -> void {
        if (int(cur.size()) == q + 1) {
            out.push_back(cur);
            return;
        }
        int lo = cur.empty() ? 0 : cur.back();
        for (int v = lo; v <= p; ++v) {
            cur.push_back(v);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

std::string chain_label(const FiniteCategory& k, const Chain& c) {
    if (c.mors.empty()) return "[" + k.objects[size_t(c.object)] + "]";
    std::string s = "[";
    for (size_t i = 0; i < c.mors.size(); ++i) {
        if (i) s += '|';
        s += k.morphisms[size_t(c.mors[i])].name;
    }
    return s + "]";
}

std::string theta_label(const Monotone& t) {
    std::string s;
    for (int v : t) s += std::to_string(v);
    return s;
}

}  // namespace

int DeltaCat::object_of(const Chain& c) const {
    for (int o = 0; o < int(chain_of.size()); ++o)
        if (chain_of[size_t(o)] == c) return o;
    throw ContractViolation("chain not present in the simplex category");
}

int DeltaCat::find_morphism(int src_obj, int dst_obj, const Monotone& theta) const {
    for (int m = 0; m < int(cat.morphisms.size()); ++m)
        if (cat.morphisms[size_t(m)].src == src_obj &&
            cat.morphisms[size_t(m)].dst == dst_obj && theta_of[size_t(m)] == theta)
            return m;
    throw ContractViolation("missing simplex-category morphism");
}

DeltaCat delta_over_category(const FiniteCategory& k, int depth) {
    DeltaCat dk;
    dk.depth = depth;
    std::vector<std::string> names;
    for (int p = 0; p <= depth; ++p)
        for (const Chain& c : enumerate_chains(k, p)) {
            dk.chain_of.push_back(c);
            names.push_back(chain_label(k, c));
        }
    std::vector<FiniteCategory::Mor> mors;
    std::vector<Monotone> thetas;
    for (int oy = 0; oy < int(dk.chain_of.size()); ++oy)
        for (int oc = 0; oc < int(dk.chain_of.size()); ++oc) {
            const Chain& y = dk.chain_of[size_t(oy)];
            const Chain& c = dk.chain_of[size_t(oc)];
            for (const auto& theta : all_monotone(y.length(), c.length())) {
                if (!(chain_act(k, c, theta) == y)) continue;
                bool isid = oy == oc && mono_is_identity(theta);
                std::string name = isid ? "id:" + names[size_t(oy)]
                                        : names[size_t(oy)] + ">" +
                                              theta_label(theta) + ">" +
                                              names[size_t(oc)];
                mors.push_back({name, oy, oc});
                thetas.push_back(theta);
            }
        }
    std::map<std::pair<int, int>, int> comp;
    auto find = [&](int s, int d, const Monotone& t) {
        for (int m = 0; m < int(mors.size()); ++m)
            if (mors[size_t(m)].src == s && mors[size_t(m)].dst == d &&
                thetas[size_t(m)] == t)
                return m;
        throw ContractViolation("simplex category not closed under composition");
    };
    for (int m1 = 0; m1 < int(mors.size()); ++m1)
        for (int m2 = 0; m2 < int(mors.size()); ++m2) {
            if (mors[size_t(m1)].dst != mors[size_t(m2)].src) continue;
            comp[{m1, m2}] = find(mors[size_t(m1)].src, mors[size_t(m2)].dst,
                                  mono_compose(thetas[size_t(m2)], thetas[size_t(m1)]));
        }
    dk.theta_of = std::move(thetas);
    dk.cat = FiniteCategory::build(std::move(names), std::move(mors), std::move(comp));
    return dk;
}

// ---------------------------------------------------------------------------
// cosimplicial skeleton

namespace {

int composite_of(const FiniteCategory& k, const Chain& c) {
    int m = k.identity[size_t(chain_source(k, c))];
    for (int f : c.mors) m = k.compose(m, f);
    return m;
}

int find_sd_mor(const FiniteCategory& k, const FiniteCategory& sd, int src_obj,
                int dst_obj, int a, int b) {
    for (int m = 0; m < int(sd.morphisms.size()); ++m)
        if (sd.morphisms[size_t(m)].src == src_obj &&
            sd.morphisms[size_t(m)].dst == dst_obj &&
            sd_morphism_parts(k, sd, m) == std::make_pair(a, b))
            return m;
    throw ContractViolation("missing subdivision morphism");
}

}  // namespace

CoSpec cosimplicial_spec(const FiniteCategory& k, Flavor flavor, int n,
                         const FiniteCategory* sd, const DeltaCat* dk) {
    bool is_sd = flavor != Flavor::delta_over_k;
    if (is_sd && !sd) throw ContractViolation("subdivision category required");
    if (!is_sd && !dk) throw ContractViolation("simplex category required");
    CoSpec s;
    s.n = n;
    s.flavor = flavor;
    s.chains.resize(size_t(n) + 1);
    s.factor_obj.resize(size_t(n) + 1);
    std::vector<std::map<Chain, int>> index(size_t(n) + 1);
    for (int p = 0; p <= n; ++p) {
        s.chains[size_t(p)] = enumerate_chains(k, p);
        for (int c = 0; c < int(s.chains[size_t(p)].size()); ++c) {
            const Chain& ch = s.chains[size_t(p)][size_t(c)];
            index[size_t(p)][ch] = c;
            s.factor_obj[size_t(p)].push_back(
                is_sd ? sd_object_of(k, *sd, composite_of(k, ch))
                      : dk->object_of(ch));
        }
    }
    s.coface.resize(size_t(std::max(n, 0)));
    s.codeg.resize(size_t(std::max(n, 0)));
    for (int p = 0; p + 1 <= n; ++p) {
        s.coface[size_t(p)].resize(size_t(p) + 2);
        for (int i = 0; i <= p + 1; ++i) {
            for (int cc = 0; cc < int(s.chains[size_t(p) + 1].size()); ++cc) {
                const Chain& c = s.chains[size_t(p) + 1][size_t(cc)];
                Chain fc = chain_face(k, c, i);
                int src = index[size_t(p)].at(fc);
                int mor;
                if (is_sd) {
                    int a = (i == 0) ? c.mors[0] : k.identity[size_t(chain_source(k, c))];
                    int b = (i == p + 1) ? c.mors[size_t(p)]
                                         : k.identity[size_t(chain_target(k, c))];
                    mor = find_sd_mor(k, *sd, s.factor_obj[size_t(p)][size_t(src)],
                                      s.factor_obj[size_t(p) + 1][size_t(cc)], a, b);
                } else {
                    mor = dk->find_morphism(dk->object_of(fc), dk->object_of(c),
                                            mono_delta(i, p + 1));
                }
                s.coface[size_t(p)][size_t(i)].push_back({src, mor});
            }
        }
        s.codeg[size_t(p)].resize(size_t(p) + 1);
        for (int j = 0; j <= p; ++j) {
            for (int cc = 0; cc < int(s.chains[size_t(p)].size()); ++cc) {
                const Chain& c = s.chains[size_t(p)][size_t(cc)];
                Chain dc = chain_degeneracy(k, c, j);
                int src = index[size_t(p) + 1].at(dc);
                int mor;
                if (is_sd) {
                    int obj = s.factor_obj[size_t(p)][size_t(cc)];
                    mor = sd->identity[size_t(obj)];
                } else {
                    mor = dk->find_morphism(dk->object_of(dc), dk->object_of(c),
                                            mono_sigma(j, p));
                }
                s.codeg[size_t(p)][size_t(j)].push_back({src, mor});
            }
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// finite-set replacement

CosimplicialSets cosimplicial_replacement(const SetDiagram& f, const CoSpec& spec) {
    CosimplicialSets x;
    x.n = spec.n;
    x.factor_size.resize(size_t(spec.n) + 1);
    for (int p = 0; p <= spec.n; ++p) {
        long long total = 1;
        for (int obj : spec.factor_obj[size_t(p)]) {
            x.factor_size[size_t(p)].push_back(f.size[size_t(obj)]);
            total *= f.size[size_t(obj)];
            if (total > 2'000'000)
                throw ContractViolation("cosimplicial level too large to materialize");
        }
        x.size.push_back(total);
    }
    auto decode = [&](int p, long long e) {
        const auto& fs = x.factor_size[size_t(p)];
        std::vector<long long> t(fs.size());
        for (int c = int(fs.size()) - 1; c >= 0; --c) {
            t[size_t(c)] = e % fs[size_t(c)];
            e /= fs[size_t(c)];
        }
        return t;
    };
    auto encode = [&](int p, const std::vector<long long>& t) {
        const auto& fs = x.factor_size[size_t(p)];
        long long e = 0;
        for (size_t c = 0; c < fs.size(); ++c) e = e * fs[c] + t[c];
        return e;
    };
    x.coface.resize(size_t(std::max(spec.n, 0)));
    x.codeg.resize(size_t(std::max(spec.n, 0)));
    for (int p = 0; p + 1 <= spec.n; ++p) {
        for (int i = 0; i <= p + 1; ++i) {
            std::vector<long long> m(size_t(x.size[size_t(p)]));
            for (long long e = 0; e < x.size[size_t(p)]; ++e) {
                auto t = decode(p, e);
                std::vector<long long> t2;
                for (const CompSpec& cs : spec.coface[size_t(p)][size_t(i)])
                    t2.push_back(
                        f.action[size_t(cs.mor)][size_t(t[size_t(cs.src)])]);
                m[size_t(e)] = encode(p + 1, t2);
            }
            x.coface[size_t(p)].push_back(std::move(m));
        }
        for (int j = 0; j <= p; ++j) {
            std::vector<long long> m(size_t(x.size[size_t(p) + 1]));
            for (long long e = 0; e < x.size[size_t(p) + 1]; ++e) {
                auto t = decode(p + 1, e);
                std::vector<long long> t2;
                for (const CompSpec& cs : spec.codeg[size_t(p)][size_t(j)])
                    t2.push_back(
                        f.action[size_t(cs.mor)][size_t(t[size_t(cs.src)])]);
                m[size_t(e)] = encode(p, t2);
            }
            x.codeg[size_t(p)].push_back(std::move(m));
        }
    }
    x.validate();
    return x;
}

void CosimplicialSets::validate() const {
    auto comp = [](const std::vector<long long>& f, const std::vector<long long>& g) {
        std::vector<long long> h(f.size());
        for (size_t e = 0; e < f.size(); ++e) h[e] = g[size_t(f[e])];
        return h;
    };
    for (int p = 0; p + 2 <= n; ++p)
        for (int i = 0; i <= p + 1; ++i)
            for (int j = i + 1; j <= p + 2; ++j)
                if (comp(coface[size_t(p)][size_t(i)], coface[size_t(p) + 1][size_t(j)]) !=
                    comp(coface[size_t(p)][size_t(j) - 1], coface[size_t(p) + 1][size_t(i)]))
                    throw ContractViolation("coface identity fails");
    for (int p = 0; p + 2 <= n; ++p)
        for (int j = 0; j <= p; ++j)
            for (int i = 0; i <= j; ++i)
                if (comp(codeg[size_t(p) + 1][size_t(i)], codeg[size_t(p)][size_t(j)]) !=
                    comp(codeg[size_t(p) + 1][size_t(j) + 1], codeg[size_t(p)][size_t(i)]))
                    throw ContractViolation("codegeneracy identity fails");
    for (int p = 0; p + 1 <= n; ++p)
        for (int i = 0; i <= p + 1; ++i)
            for (int j = 0; j <= p; ++j) {
                auto m = comp(coface[size_t(p)][size_t(i)], codeg[size_t(p)][size_t(j)]);
                if (i == j || i == j + 1) {
                    for (size_t e = 0; e < m.size(); ++e)
                        if (m[e] != (long long)(e))
                            throw ContractViolation("mixed identity (unit) fails");
                } else if (i < j) {
                    if (p == 0) continue;
                    if (m != comp(codeg[size_t(p) - 1][size_t(j) - 1],
                                  coface[size_t(p) - 1][size_t(i)]))
                        throw ContractViolation("mixed identity fails");
                } else {
                    if (p == 0) continue;
                    if (m != comp(codeg[size_t(p) - 1][size_t(j)],
                                  coface[size_t(p) - 1][size_t(i) - 1]))
                        throw ContractViolation("mixed identity fails");
                }
            }
}

FormalCoSSet formal_replacement(const SSetDiagram& f, CoSpec spec) {
    FormalCoSSet x;
    x.f = &f;
    x.spec = std::move(spec);
    return x;
}

// ---------------------------------------------------------------------------
// Tot

namespace {

Sx apply_images(const MapImages& img, const Sx& s) {
    const Sx& t = img[size_t(s.base_dim())][size_t(s.base)];
    return {t.base, mono_compose(t.sigma, s.sigma)};
}

// Precompose a map (P = Delta[a] x Delta[b] -> F) with theta acting on
// one factor: result lives on `to`, the source product on `from`.
MapImages precompose_factor(const ProductSSet& to, const ProductSSet& from,
                            int factor, int target_level, const Monotone& theta,
                            const MapImages& img) {
    MapImages out(to.ss.cells.size());
    for (size_t d = 0; d < to.ss.cells.size(); ++d)
        for (const auto& tuple : to.comp[d]) {
            std::vector<Sx> comps = tuple;
            Monotone w = mono_compose(
                theta, delta_vertices(*to.factors[size_t(factor)], tuple[size_t(factor)]));
            comps[size_t(factor)] = delta_simplex(target_level, w);
            out[d].push_back(apply_images(img, from.from_components(comps)));
        }
    return out;
}

struct TotCtx {
    const FormalCoSSet* x = nullptr;
    int top_level = 0;  // products built for p <= top_level
    int out_dim = 0;
    std::vector<SimplicialSet> deltas;
    std::vector<std::vector<ProductSSet>> prods;  // prods[p][q]
};

TotCtx make_ctx(const FormalCoSSet& x, int stage, int out_dim) {
    TotCtx ctx;
    ctx.x = &x;
    ctx.top_level = std::min(stage + 1, x.spec.n);
    ctx.out_dim = out_dim;
    int dmax = std::max(ctx.top_level, out_dim);
    ctx.deltas.reserve(size_t(dmax) + 1);
    for (int m = 0; m <= dmax; ++m)
        ctx.deltas.push_back(SimplicialSet::standard_simplex(m));
    ctx.prods.resize(size_t(ctx.top_level) + 1);
    for (int p = 0; p <= ctx.top_level; ++p) {
        ctx.prods[size_t(p)].reserve(size_t(out_dim) + 1);
        for (int q = 0; q <= out_dim; ++q)
            ctx.prods[size_t(p)].push_back(
                product({&ctx.deltas[size_t(p)], &ctx.deltas[size_t(q)]}));
    }
    return ctx;
}

// all compatible families for levels 0..s at simplicial degree q
std::vector<TotFamily> tot_families(const TotCtx& ctx, int s, int q) {
    const CoSpec& spec = ctx.x->spec;
    std::vector<TotFamily> result;
    TotFamily cur(size_t(s) + 1);
    auto rec = [&](auto&& self, int p, int c) -> void {
        if (p > s) {
            result.push_back(cur);
            return;
        }
        int ncomp = int(spec.chains[size_t(p)].size());
        if (c == 0) cur[size_t(p)].assign(size_t(ncomp), {});
        if (c == ncomp) {
            self(self, p + 1, 0);
            return;
        }
        const SimplicialSet& target = ctx.x->factor(p, c);
        const ProductSSet& ppq = ctx.prods[size_t(p)][size_t(q)];
        // pin cells forced by the coface constraints
        PartialAssign pin(ppq.ss.cells.size());
        for (size_t d = 0; d < ppq.ss.cells.size(); ++d)
            pin[d].resize(ppq.ss.cells[d].size());
        bool consistent = true;
        for (int i = 0; i <= p && p > 0 && consistent; ++i) {
            const CompSpec& cs = spec.coface[size_t(p) - 1][size_t(i)][size_t(c)];
            const SimplicialMap& act = ctx.x->f->action[size_t(cs.mor)];
            const ProductSSet& below = ctx.prods[size_t(p) - 1][size_t(q)];
            for (size_t d = 0; d < ppq.ss.cells.size() && consistent; ++d)
                for (size_t b = 0; b < ppq.ss.cells[d].size() && consistent; ++b) {
                    const auto& tuple = ppq.comp[d][b];
                    Monotone vu = delta_vertices(ctx.deltas[size_t(p)], tuple[0]);
                    bool misses = std::find(vu.begin(), vu.end(), i) == vu.end();
                    if (!misses) continue;
                    Monotone down;
                    for (int v : vu) down.push_back(v > i ? v - 1 : v);
                    Sx t = below.from_components(
                        {delta_simplex(p - 1, down), tuple[1]});
                    Sx want = act.apply(
                        apply_images(cur[size_t(p) - 1][size_t(cs.src)], t));
                    auto& slot = pin[d][b];
                    if (slot && !(*slot == want))
                        consistent = false;
                    else
                        slot = want;
                }
        }
        if (!consistent) return;
        auto cands = enumerate_maps(ppq.ss, target, p > 0 ? &pin : nullptr);
        for (const auto& cand : cands) {
            // codegeneracy constraints landing on this component
            bool ok = true;
            if (p > 0)
                for (int j = 0; j <= p - 1 && ok; ++j)
                    for (int c2 = 0;
                         c2 < int(spec.chains[size_t(p) - 1].size()) && ok; ++c2) {
                        const CompSpec& cs =
                            spec.codeg[size_t(p) - 1][size_t(j)][size_t(c2)];
                        if (cs.src != c) continue;
                        const SimplicialMap& act = ctx.x->f->action[size_t(cs.mor)];
                        MapImages lhs = cand.image;
                        for (auto& lvl : lhs)
                            for (auto& t : lvl) t = act.apply(t);
                        MapImages rhs = precompose_factor(
                            ctx.prods[size_t(p)][size_t(q)],
                            ctx.prods[size_t(p) - 1][size_t(q)], 0, p - 1,
                            mono_sigma(j, p - 1), cur[size_t(p) - 1][size_t(c2)]);
                        ok = lhs == rhs;
                    }
            if (!ok) continue;
            cur[size_t(p)][size_t(c)] = cand.image;
            self(self, p, c + 1);
        }
    };
    rec(rec, 0, 0);
    return result;
}

TotFamily act_family(const TotCtx& ctx, const TotFamily& fam, int q,
                     const Monotone& theta) {
    int q2 = int(theta.size()) - 1;
    TotFamily out(fam.size());
    for (size_t p = 0; p < fam.size(); ++p)
        for (const MapImages& img : fam[p])
            out[p].push_back(precompose_factor(ctx.prods[p][size_t(q2)],
                                               ctx.prods[p][size_t(q)], 1, q,
                                               theta, img));
    return out;
}

}  // namespace

TotResult tot(const FormalCoSSet& x, int stage, int out_dim) {
    TotResult r;
    r.stage = stage;
    r.out_dim = out_dim;
    int s = std::min(stage, x.spec.n);
    int s1 = std::min(stage + 1, x.spec.n);
    TotCtx ctx = make_ctx(x, stage, out_dim);
    std::vector<std::vector<TotFamily>> fam(size_t(out_dim) + 1);
    r.stabilized = true;
    for (int q = 0; q <= out_dim; ++q) {
        fam[size_t(q)] = tot_families(ctx, s, q);
        if (s1 > s) {
            auto next = tot_families(ctx, s1, q);
            std::vector<TotFamily> restricted;
            for (auto f : next) {
                f.resize(size_t(s) + 1);
                restricted.push_back(std::move(f));
            }
            std::sort(restricted.begin(), restricted.end());
            auto sorted = fam[size_t(q)];
            std::sort(sorted.begin(), sorted.end());
            if (restricted != sorted) r.stabilized = false;
        }
    }
    auto elements = std::function<std::vector<TotFamily>(int)>(
        [&fam](int q) { return fam[size_t(q)]; });
    auto act = std::function<TotFamily(const TotFamily&, int, const Monotone&)>(
        [&ctx](const TotFamily& e, int q, const Monotone& theta) {
            return act_family(ctx, e, q, theta);
        });
    r.ss = sset_from_functor<TotFamily>(out_dim, elements, act, &r.cell_families,
                                        nullptr, &r.lookup);
    return r;
}

// ---------------------------------------------------------------------------
// matching objects and the Reedy condition

void CosimplicialSSet::validate() const {
    for (int p = 0; p + 1 <= n; ++p) {
        for (const auto& d : coface[size_t(p)]) {
            std::string err;
            if (!d.valid(&err)) throw ContractViolation("bad coface: " + err);
        }
        for (const auto& sj : codeg[size_t(p)]) {
            std::string err;
            if (!sj.valid(&err)) throw ContractViolation("bad codegeneracy: " + err);
        }
    }
    for (int p = 0; p + 1 <= n; ++p)
        for (int i = 0; i <= p + 1; ++i)
            for (int j = 0; j <= p; ++j)
                if (i == j || i == j + 1)
                    if (coface[size_t(p)][size_t(i)].then(codeg[size_t(p)][size_t(j)]).image !=
                        SimplicialMap::identity(level[size_t(p)]).image)
                        throw ContractViolation("cosimplicial unit identity fails");
}

CosimplicialSSet constant_cosimplicial(const SimplicialSet& x, int n) {
    CosimplicialSSet c;
    c.n = n;
    c.level.assign(size_t(n) + 1, x);
    c.coface.resize(size_t(std::max(n, 0)));
    c.codeg.resize(size_t(std::max(n, 0)));
    for (int p = 0; p + 1 <= n; ++p) {
        for (int i = 0; i <= p + 1; ++i) {
            auto m = SimplicialMap::identity(c.level[size_t(p)]);
            m.tgt = &c.level[size_t(p) + 1];
            c.coface[size_t(p)].push_back(std::move(m));
        }
        for (int j = 0; j <= p; ++j) {
            auto m = SimplicialMap::identity(c.level[size_t(p) + 1]);
            m.tgt = &c.level[size_t(p)];
            c.codeg[size_t(p)].push_back(std::move(m));
        }
    }
    return c;
}

namespace {

using Tuple = std::vector<Sx>;

// normal form of an arbitrary element in a functor-built simplicial set
template <class Elem>
Sx functor_normal_form(const SimplicialSet& ss,
                       const std::vector<std::vector<Elem>>& cell_elems,
                       const std::function<Elem(const Elem&, int, const Monotone&)>& act,
                       const Elem& e, int q) {
    for (int j = 0; j < q; ++j) {
        Monotone collapse = mono_compose(mono_delta(j, q), mono_sigma(j, q - 1));
        if (act(e, q, collapse) == e)
            return SimplicialSet::degeneracy(
                functor_normal_form(ss, cell_elems, act, act(e, q, mono_delta(j, q)),
                                    q - 1),
                j);
    }
    for (int b = 0; b < int(cell_elems[size_t(q)].size()); ++b)
        if (cell_elems[size_t(q)][size_t(b)] == e) return {b, mono_identity(q)};
    throw ContractViolation("element not recognized in functor-built set");
}

}  // namespace

MatchingObject matching_object(const CosimplicialSSet& x, int p) {
    MatchingObject m;
    if (p == 0) {
        m.ss = SimplicialSet::standard_simplex(0);
        m.comparison.src = &x.level[0];
        m.comparison.tgt = &m.ss;
        m.comparison.image.resize(x.level[0].cells.size());
        for (size_t d = 0; d < x.level[0].cells.size(); ++d)
            for (size_t b = 0; b < x.level[0].cells[d].size(); ++b) {
                Sx pt{0, {0}};
                for (int j = 0; j < int(d); ++j)
                    pt = SimplicialSet::degeneracy(pt, 0);
                m.comparison.image[d].push_back(pt);
            }
        return m;
    }
    if (p > x.n) throw ContractViolation("matching level beyond the truncation");
    const SimplicialSet& lvl = x.level[size_t(p) - 1];
    int bound = std::max(1, p * std::max(lvl.dim(), 0));
    auto elements = std::function<std::vector<Tuple>(int)>([&x, &lvl, p](int q) {
        std::vector<Tuple> out;
        auto sims = lvl.simplices(q);
        Tuple cur(static_cast<size_t>(p));
        auto rec = [&](auto&& self, int slot) -> void {
            if (slot == p) {
                for (int i = 1; i < p; ++i)
                    for (int j = 0; j < i; ++j)
                        if (!(x.codeg[size_t(p) - 2][size_t(j)].apply(cur[size_t(i)]) ==
                              x.codeg[size_t(p) - 2][size_t(i) - 1].apply(cur[size_t(j)])))
                            return;
                out.push_back(cur);
                return;
            }
            for (const Sx& s : sims) {
                cur[size_t(slot)] = s;
                self(self, slot + 1);
            }
        };
        rec(rec, 0);
        return out;
    });
    auto act = std::function<Tuple(const Tuple&, int, const Monotone&)>(
        [&lvl](const Tuple& e, int, const Monotone& theta) {
            Tuple out;
            for (const Sx& s : e) out.push_back(lvl.act(s, theta));
            return out;
        });
    m.ss = sset_from_functor<Tuple>(bound, elements, act, &m.tuples);
    m.comparison.src = &x.level[size_t(p)];
    m.comparison.tgt = &m.ss;
    m.comparison.image.resize(x.level[size_t(p)].cells.size());
    for (int d = 0; d < int(x.level[size_t(p)].cells.size()); ++d)
        for (int b = 0; b < int(x.level[size_t(p)].cells[size_t(d)].size()); ++b) {
            Tuple t;
            Sx top{b, mono_identity(d)};
            for (int j = 0; j < p; ++j)
                t.push_back(x.codeg[size_t(p) - 1][size_t(j)].apply(top));
            if (d > bound)
                throw ContractViolation("matching object built too shallow");
            m.comparison.image[size_t(d)].push_back(
                functor_normal_form<Tuple>(m.ss, m.tuples, act, t, d));
        }
    return m;
}

ReedyVerdict is_reedy_fibration(const CosimplicialMap& f, int horn_bound) {
    ReedyVerdict v;
    for (int p = 0; p <= f.src->n; ++p) {
        if (p == 0) {
            auto kv = is_kan_fibration(f.level[0], horn_bound);
            if (!kv.pass) {
                v.pass = false;
                v.failed_level = 0;
                v.witness = kv.witness;
                return v;
            }
            continue;
        }
        auto mx = matching_object(*f.src, p);
        auto my = matching_object(*f.tgt, p);
        const SimplicialSet& yp = f.tgt->level[size_t(p)];
        auto mact = std::function<Tuple(const Tuple&, int, const Monotone&)>(
            [&f, p](const Tuple& e, int, const Monotone& theta) {
                Tuple out;
                for (const Sx& s : e)
                    out.push_back(f.tgt->level[size_t(p) - 1].act(s, theta));
                return out;
            });
        auto induced = [&](const Tuple& t) {
            Tuple img;
            for (const Sx& s : t) img.push_back(f.level[size_t(p) - 1].apply(s));
            return img;
        };
        // pullback Y^p x_{M^pY} M^pX
        using Pair = std::pair<Sx, Tuple>;
        auto elements = std::function<std::vector<Pair>(int)>([&](int q) {
            std::vector<Pair> out;
            for (const Sx& y : yp.simplices(q))
                for (const Tuple& t : [&] {
                         std::vector<Tuple> ts;
                         for (const Sx& s : mx.ss.simplices(q)) {
                             Tuple base = mx.tuples[size_t(s.base_dim())][size_t(s.base)];
                             Tuple tt;
                             for (const Sx& c : base)
                                 tt.push_back({c.base, mono_compose(c.sigma, s.sigma)});
                             ts.push_back(tt);
                         }
                         return ts;
                     }()) {
                    Sx lhs = my.comparison.apply(y);
                    Sx rhs = functor_normal_form<Tuple>(my.ss, my.tuples, mact,
                                                        induced(t), q);
                    if (lhs == rhs) out.push_back({y, t});
                }
            return out;
        });
        auto pact = std::function<Pair(const Pair&, int, const Monotone&)>(
            [&yp, &f, p](const Pair& e, int, const Monotone& theta) {
                Tuple out;
                for (const Sx& s : e.second)
                    out.push_back(f.src->level[size_t(p) - 1].act(s, theta));
                return Pair{yp.act(e.first, theta), out};
            });
        std::vector<std::vector<Pair>> pb_elems;
        int bound = std::max({1, f.src->level[size_t(p)].dim(), yp.dim(),
                              mx.ss.dim()});
        SimplicialSet pb = sset_from_functor<Pair>(bound, elements, pact, &pb_elems);
        // relative matching map X^p -> pullback
        SimplicialMap rel;
        rel.src = &f.src->level[size_t(p)];
        rel.tgt = &pb;
        rel.image.resize(f.src->level[size_t(p)].cells.size());
        for (int d = 0; d < int(f.src->level[size_t(p)].cells.size()); ++d)
            for (int b = 0; b < int(f.src->level[size_t(p)].cells[size_t(d)].size());
                 ++b) {
                Sx top{b, mono_identity(d)};
                Tuple t;
                for (int j = 0; j < p; ++j)
                    t.push_back(f.src->codeg[size_t(p) - 1][size_t(j)].apply(top));
                Pair e{f.level[size_t(p)].apply(top), t};
                rel.image[size_t(d)].push_back(
                    functor_normal_form<Pair>(pb, pb_elems, pact, e, d));
            }
        auto kv = is_kan_fibration(rel, horn_bound);
        if (!kv.pass) {
            v.pass = false;
            v.failed_level = p;
            v.witness = kv.witness;
            return v;
        }
    }
    return v;
}

}  // namespace hoend
