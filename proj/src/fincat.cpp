#include "hoend/fincat.hpp"

#include <algorithm>
#include <set>

namespace hoend {

int FiniteCategory::object_index(const std::string& name) const {
    for (int i = 0; i < int(objects.size()); ++i)
        if (objects[i] == name) return i;
    throw ContractViolation("unknown object: " + name);
}

int FiniteCategory::morphism_index(const std::string& name) const {
    for (int i = 0; i < int(morphisms.size()); ++i)
        if (morphisms[i].name == name) return i;
    throw ContractViolation("unknown morphism: " + name);
}

int FiniteCategory::compose(int f, int g) const {
    auto it = compose_table.find({f, g});
    if (it == compose_table.end())
        throw ContractViolation("composition undefined for " + morphisms[f].name +
                                " then " + morphisms[g].name);
    return it->second;
}

void FiniteCategory::validate() const {
    int nm = int(morphisms.size());
    if (int(identity.size()) != int(objects.size()))
        throw ContractViolation("identity table size mismatch");
    for (int o = 0; o < int(objects.size()); ++o) {
        int id = identity[o];
        if (morphisms[id].src != o || morphisms[id].dst != o)
            throw ContractViolation("identity of " + objects[o] + " is not an endomorphism");
    }
    // composition defined exactly on composable pairs
    for (int f = 0; f < nm; ++f)
        for (int g = 0; g < nm; ++g) {
            bool composable = morphisms[f].dst == morphisms[g].src;
            bool defined = compose_table.count({f, g}) > 0;
            if (composable != defined)
                throw ContractViolation("composition table does not match composability");
            if (defined) {
                int h = compose_table.at({f, g});
                if (morphisms[h].src != morphisms[f].src ||
                    morphisms[h].dst != morphisms[g].dst)
                    throw ContractViolation("composite has wrong endpoints");
            }
        }
    // two-sided units
    for (int f = 0; f < nm; ++f) {
        if (compose(identity[morphisms[f].src], f) != f ||
            compose(f, identity[morphisms[f].dst]) != f)
            throw ContractViolation("identity is not a unit at " + morphisms[f].name);
    }
    // associativity on all composable triples
    for (int f = 0; f < nm; ++f)
        for (int g = 0; g < nm; ++g) {
            if (morphisms[f].dst != morphisms[g].src) continue;
            for (int h = 0; h < nm; ++h) {
                if (morphisms[g].dst != morphisms[h].src) continue;
                if (compose(compose(f, g), h) != compose(f, compose(g, h)))
                    throw ContractViolation("composition not associative");
            }
        }
}

FiniteCategory FiniteCategory::build(std::vector<std::string> objs,
                                     std::vector<Mor> mors,
                                     std::map<std::pair<int, int>, int> compose) {
    FiniteCategory k;
    k.objects = std::move(objs);
    k.morphisms = std::move(mors);
    k.compose_table = std::move(compose);
    k.identity.assign(k.objects.size(), -1);
    for (int i = 0; i < int(k.morphisms.size()); ++i) {
        const Mor& m = k.morphisms[i];
        if (m.name == "id:" + k.objects[m.src] && m.src == m.dst)
            k.identity[m.src] = i;
    }
    for (int o = 0; o < int(k.objects.size()); ++o)
        if (k.identity[o] < 0)
            throw ContractViolation("missing identity for object " + k.objects[o]);
    k.validate();
    return k;
}

FiniteCategory FiniteCategory::terminal() {
    return build({"*"}, {{"id:*", 0, 0}}, {{{0, 0}, 0}});
}

FiniteCategory FiniteCategory::linear_poset(int n) {
    std::vector<std::string> objs;
    for (int i = 0; i <= n; ++i) objs.push_back(std::to_string(i));
    std::vector<Mor> mors;
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            mors.push_back({i == j ? "id:" + std::to_string(i)
                                   : std::to_string(i) + "<" + std::to_string(j),
                            i, j});
    std::sort(mors.begin(), mors.end(), [](const Mor& a, const Mor& b) { return a.name < b.name; });
    auto find = [&](int i, int j) {
        std::string want = i == j ? "id:" + std::to_string(i)
                                  : std::to_string(i) + "<" + std::to_string(j);
        for (int m = 0; m < int(mors.size()); ++m)
            if (mors[m].name == want) return m;
        return -1;
    };
    std::map<std::pair<int, int>, int> comp;
    for (int f = 0; f < int(mors.size()); ++f)
        for (int g = 0; g < int(mors.size()); ++g)
            if (mors[f].dst == mors[g].src)
                comp[{f, g}] = find(mors[f].src, mors[g].dst);
    return build(objs, mors, comp);
}

FiniteCategory FiniteCategory::cyclic_group(int n) {
    std::vector<Mor> mors;
    for (int i = 0; i < n; ++i)
        mors.push_back({i == 0 ? "id:*" : "g" + std::to_string(i), 0, 0});
    std::sort(mors.begin(), mors.end(), [](const Mor& a, const Mor& b) { return a.name < b.name; });
    std::vector<int> elem_of(n);  // group element of morphism index
    for (int m = 0; m < n; ++m)
        elem_of[m] = mors[m].name == "id:*" ? 0 : std::stoi(mors[m].name.substr(1));
    std::vector<int> mor_of(n);
    for (int m = 0; m < n; ++m) mor_of[elem_of[m]] = m;
    std::map<std::pair<int, int>, int> comp;
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g)
            comp[{f, g}] = mor_of[(elem_of[f] + elem_of[g]) % n];
    return build({"*"}, mors, comp);
}

FiniteCategory FiniteCategory::opposite() const {
    FiniteCategory op;
    op.objects = objects;
    op.identity = identity;
    op.morphisms = morphisms;
    for (auto& m : op.morphisms) std::swap(m.src, m.dst);
    for (const auto& [pair, h] : compose_table) op.compose_table[{pair.second, pair.first}] = h;
    op.validate();
    return op;
}

int chain_source(const FiniteCategory& k, const Chain& c) {
    return c.mors.empty() ? c.object : k.morphisms[c.mors.front()].src;
}

int chain_target(const FiniteCategory& k, const Chain& c) {
    return c.mors.empty() ? c.object : k.morphisms[c.mors.back()].dst;
}

Chain chain_face(const FiniteCategory& k, const Chain& c, int i) {
    int p = c.length();
    if (p == 0) throw ContractViolation("face of a 0-chain");
    if (i < 0 || i > p) throw ContractViolation("face index out of range");
    Chain out;
    if (p == 1) {
        out.object = i == 0 ? k.morphisms[c.mors[0]].dst : k.morphisms[c.mors[0]].src;
        return out;
    }
    if (i == 0) {
        out.mors.assign(c.mors.begin() + 1, c.mors.end());
    } else if (i == p) {
        out.mors.assign(c.mors.begin(), c.mors.end() - 1);
    } else {
        out.mors.assign(c.mors.begin(), c.mors.begin() + (i - 1));
        out.mors.push_back(k.compose(c.mors[i - 1], c.mors[i]));
        out.mors.insert(out.mors.end(), c.mors.begin() + i + 1, c.mors.end());
    }
    return out;
}

Chain chain_degeneracy(const FiniteCategory& k, const Chain& c, int j) {
    int p = c.length();
    if (j < 0 || j > p) throw ContractViolation("degeneracy index out of range");
    std::vector<int> objs;  // K_0..K_p
    if (p == 0) {
        objs = {c.object};
    } else {
        objs.push_back(k.morphisms[c.mors[0]].src);
        for (int m : c.mors) objs.push_back(k.morphisms[m].dst);
    }
    Chain out;
    out.mors = c.mors;
    out.mors.insert(out.mors.begin() + j, k.identity[objs[j]]);
    return out;
}

Chain chain_act(const FiniteCategory& k, const Chain& c, const std::vector<int>& theta) {
    int q = int(theta.size()) - 1;
    std::vector<int> objs;
    if (c.mors.empty()) {
        objs = {c.object};
    } else {
        objs.push_back(k.morphisms[c.mors[0]].src);
        for (int m : c.mors) objs.push_back(k.morphisms[m].dst);
    }
    auto segment = [&](int a, int b) {  // composite K_a -> K_b
        int m = k.identity[objs[a]];
        for (int i = a; i < b; ++i) m = k.compose(m, c.mors[i]);
        return m;
    };
    Chain out;
    if (q == 0) {
        out.object = objs[theta[0]];
        return out;
    }
    for (int i = 0; i < q; ++i) out.mors.push_back(segment(theta[i], theta[i + 1]));
    return out;
}

bool chain_has_identity(const Chain& c, const FiniteCategory& k) {
    for (int m : c.mors)
        if (k.is_identity(m)) return true;
    return false;
}

std::vector<Chain> enumerate_chains(const FiniteCategory& k, int p) {
    if (p < 0) throw ContractViolation("negative chain length");
    std::vector<Chain> out;
    if (p == 0) {
        for (int o = 0; o < int(k.objects.size()); ++o) {
            Chain c;
            c.object = o;
            out.push_back(c);
        }
        return out;
    }
    std::vector<Chain> prev = enumerate_chains(k, p - 1);
    for (const Chain& c : prev) {
        int tail = chain_target(k, c);
        for (int m = 0; m < int(k.morphisms.size()); ++m) {
            if (k.morphisms[m].src != tail) continue;
            Chain e = c;
            e.object = -1;
            e.mors.push_back(m);
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

LoopFreeCertificate loop_free_certificate(const FiniteCategory& k) {
    LoopFreeCertificate cert;
    for (int m = 0; m < int(k.morphisms.size()); ++m)
        if (k.morphisms[m].src == k.morphisms[m].dst && !k.is_identity(m)) {
            cert.reason = "nonidentity endomorphism " + k.morphisms[m].name;
            return cert;
        }
    // Kahn topological sort of the object digraph
    int n = int(k.objects.size());
    std::vector<std::set<int>> succ(n);
    for (const auto& m : k.morphisms)
        if (m.src != m.dst) succ[m.src].insert(m.dst);
    std::vector<int> indeg(n, 0);
    for (int o = 0; o < n; ++o)
        for (int d : succ[o]) ++indeg[d];
    std::vector<int> order;
    std::set<int> ready;
    for (int o = 0; o < n; ++o)
        if (indeg[o] == 0) ready.insert(o);
    while (!ready.empty()) {
        int o = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(o);
        for (int d : succ[o])
            if (--indeg[d] == 0) ready.insert(d);
    }
    if (int(order.size()) != n) {
        cert.reason = "morphism digraph has a cycle";
        return cert;
    }
    cert.loop_free = true;
    cert.topological_order = order;
    return cert;
}

FiniteCategory subdivision_category(const FiniteCategory& k) {
    int nm = int(k.morphisms.size());
    std::vector<std::string> objs;
    for (const auto& m : k.morphisms) objs.push_back(m.name);
    std::vector<FiniteCategory::Mor> mors;
    // a morphism from f:A->B to f':A'->B' is (a: A'->A, b: B->B') with b f a = f'
    struct Part { int f, fp, a, b; };
    std::vector<Part> parts;
    for (int f = 0; f < nm; ++f)
        for (int a = 0; a < nm; ++a) {
            if (k.morphisms[a].dst != k.morphisms[f].src) continue;
            for (int b = 0; b < nm; ++b) {
                if (k.morphisms[f].dst != k.morphisms[b].src) continue;
                int fp = k.compose(k.compose(a, f), b);
                std::string name;
                if (k.is_identity(a) && k.is_identity(b) && f == fp)
                    name = "id:" + k.morphisms[f].name;
                else
                    name = k.morphisms[f].name + "~" + k.morphisms[a].name + "|" +
                           k.morphisms[b].name;
                mors.push_back({name, f, fp});
                parts.push_back({f, fp, a, b});
            }
        }
    // sort morphisms by name, keeping parts aligned
    std::vector<int> perm(mors.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
    std::sort(perm.begin(), perm.end(),
              [&](int x, int y) { return mors[x].name < mors[y].name; });
    std::vector<FiniteCategory::Mor> smors;
    std::vector<Part> sparts;
    for (int i : perm) {
        smors.push_back(mors[i]);
        sparts.push_back(parts[i]);
    }
    auto find = [&](int f, int a, int b) {
        for (int i = 0; i < int(sparts.size()); ++i)
            if (sparts[i].f == f && sparts[i].a == a && sparts[i].b == b) return i;
        throw ContractViolation("internal: missing factorization morphism");
    };
    std::map<std::pair<int, int>, int> comp;
    for (int x = 0; x < int(smors.size()); ++x)
        for (int y = 0; y < int(smors.size()); ++y) {
            if (smors[x].dst != smors[y].src) continue;
            // (a,b): f->f', (a',b'): f'->f''; composite = (a∘a', b'∘b)
            comp[{x, y}] = find(sparts[x].f, k.compose(sparts[y].a, sparts[x].a),
                                k.compose(sparts[x].b, sparts[y].b));
        }
    return FiniteCategory::build(objs, smors, comp);
}

int sd_object_of(const FiniteCategory& k, const FiniteCategory& sd, int mor) {
    return sd.object_index(k.morphisms[mor].name);
}

int sd_object_to_mor(const FiniteCategory& k, const FiniteCategory& sd, int sd_obj) {
    return k.morphism_index(sd.objects[sd_obj]);
}

std::pair<int, int> sd_morphism_parts(const FiniteCategory& k, const FiniteCategory& sd,
                                      int sd_mor) {
    if (sd.is_identity(sd_mor)) {
        int f = sd_object_to_mor(k, sd, sd.morphisms[sd_mor].src);
        return {k.identity[k.morphisms[f].src], k.identity[k.morphisms[f].dst]};
    }
    // name is f.name + "~" + a.name + "|" + b.name; a and b may themselves
    // contain separators (nested subdivisions), so validate candidate splits
    const std::string& name = sd.morphisms[sd_mor].name;
    int f = sd_object_to_mor(k, sd, sd.morphisms[sd_mor].src);
    int fp = sd_object_to_mor(k, sd, sd.morphisms[sd_mor].dst);
    size_t tilde = sd.objects[sd.morphisms[sd_mor].src].size();
    std::string rest = name.substr(tilde + 1);
    auto lookup = [&](const std::string& n) {
        for (int m = 0; m < int(k.morphisms.size()); ++m)
            if (k.morphisms[m].name == n) return m;
        return -1;
    };
    std::pair<int, int> found(-1, -1);
    int matches = 0;
    for (size_t bar = rest.find('|'); bar != std::string::npos;
         bar = rest.find('|', bar + 1)) {
        int a = lookup(rest.substr(0, bar));
        int b = lookup(rest.substr(bar + 1));
        if (a < 0 || b < 0) continue;
        if (k.morphisms[a].dst != k.morphisms[f].src) continue;
        if (k.morphisms[f].dst != k.morphisms[b].src) continue;
        if (k.compose(k.compose(a, f), b) != fp) continue;
        found = {a, b};
        ++matches;
    }
    if (matches != 1)
        throw ContractViolation("cannot decompose subdivision morphism " + name);
    return found;
}

CommaCategory comma_under(const FiniteCategory& k, int x) {
    if (x < 0 || x >= int(k.objects.size())) throw ContractViolation("unknown object");
    CommaCategory out;
    std::vector<int> obj_mor;
    std::vector<std::string> objs;
    for (int m = 0; m < int(k.morphisms.size()); ++m)
        if (k.morphisms[m].src == x) {
            obj_mor.push_back(m);
            objs.push_back(k.morphisms[m].name);
        }
    auto comma_obj = [&](int m) {
        for (int i = 0; i < int(obj_mor.size()); ++i)
            if (obj_mor[i] == m) return i;
        return -1;
    };
    std::vector<FiniteCategory::Mor> mors;
    std::vector<int> under;
    for (int i = 0; i < int(obj_mor.size()); ++i)
        for (int u = 0; u < int(k.morphisms.size()); ++u) {
            if (k.morphisms[u].src != k.morphisms[obj_mor[i]].dst) continue;
            int g = k.compose(obj_mor[i], u);
            int j = comma_obj(g);
            std::string name;
            if (k.is_identity(u))
                name = "id:" + objs[i];
            else
                name = objs[i] + ">" + k.morphisms[u].name;
            mors.push_back({name, i, j});
            under.push_back(u);
        }
    std::vector<int> perm(mors.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = int(i);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return mors[a].name < mors[b].name; });
    std::vector<FiniteCategory::Mor> smors;
    std::vector<int> sunder;
    for (int i : perm) {
        smors.push_back(mors[i]);
        sunder.push_back(under[i]);
    }
    auto find = [&](int src_obj, int u) {
        for (int i = 0; i < int(smors.size()); ++i)
            if (smors[i].src == src_obj && sunder[i] == u) return i;
        throw ContractViolation("internal: missing comma morphism");
    };
    std::map<std::pair<int, int>, int> comp;
    for (int a = 0; a < int(smors.size()); ++a)
        for (int b = 0; b < int(smors.size()); ++b) {
            if (smors[a].dst != smors[b].src) continue;
            comp[{a, b}] = find(smors[a].src, k.compose(sunder[a], sunder[b]));
        }
    out.cat = FiniteCategory::build(objs, smors, comp);
    out.object_mor = obj_mor;
    out.morphism_mor = sunder;
    out.initial_object = comma_obj(k.identity[x]);
    return out;
}

void Functor::validate() const {
    if (!src || !dst) throw ContractViolation("functor missing categories");
    if (int(obj_map.size()) != int(src->objects.size()) ||
        int(mor_map.size()) != int(src->morphisms.size()))
        throw ContractViolation("functor table size mismatch");
    for (int m = 0; m < int(src->morphisms.size()); ++m) {
        const auto& sm = src->morphisms[m];
        const auto& dm = dst->morphisms[mor_map[m]];
        if (dm.src != obj_map[sm.src] || dm.dst != obj_map[sm.dst])
            throw ContractViolation("functor does not preserve endpoints");
    }
    for (int o = 0; o < int(src->objects.size()); ++o)
        if (mor_map[src->identity[o]] != dst->identity[obj_map[o]])
            throw ContractViolation("functor does not preserve identities");
    for (const auto& [pair, h] : src->compose_table)
        if (dst->compose(mor_map[pair.first], mor_map[pair.second]) != mor_map[h])
            throw ContractViolation("functor does not preserve composition");
}

Chain chain_induced_map(const Functor& phi, const Chain& c) {
    phi.validate();
    Chain out;
    if (c.mors.empty()) {
        out.object = phi.obj_map[c.object];
        return out;
    }
    for (int m : c.mors) out.mors.push_back(phi.mor_map[m]);
    return out;
}

}  // namespace hoend
