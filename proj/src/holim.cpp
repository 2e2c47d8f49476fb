#include "hoend/holim.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

namespace hoend {

namespace {

Sx apply_images(const MapImages& img, const Sx& s) {
    const Sx& t = img[size_t(s.base_dim())][size_t(s.base)];
    return {t.base, mono_compose(t.sigma, s.sigma)};
}

SimplicialMap remap(std::vector<std::vector<Sx>> image, const SimplicialSet* s,
                    const SimplicialSet* t) {
    SimplicialMap m;
    m.src = s;
    m.tgt = t;
    m.image = std::move(image);
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("induced map invalid: " + err);
    return m;
}

// Delta[theta]: Delta[q] -> Delta[p] for theta: [q] -> [p]
SimplicialMap delta_map(const SimplicialSet& dq, const SimplicialSet& dp,
                        const Monotone& theta) {
    SimplicialMap m;
    m.src = &dq;
    m.tgt = &dp;
    m.image.resize(dq.cells.size());
    int p = int(dp.cells.size()) - 1;
    for (size_t d = 0; d < dq.cells.size(); ++d)
        for (size_t cell = 0; cell < dq.cells[d].size(); ++cell) {
            Monotone v = delta_vertices(dq, Sx{int(cell), mono_identity(int(d))});
            m.image[d].push_back(delta_simplex(p, mono_compose(theta, v)));
        }
    return m;
}

int chain_index(const std::vector<Chain>& chains, const Chain& c) {
    for (size_t i = 0; i < chains.size(); ++i)
        if (chains[i] == c) return int(i);
    throw ContractViolation("chain not found in replacement skeleton");
}

int find_sd_morphism(const FiniteCategory& k, const FiniteCategory& sd, int src_obj,
                     int dst_obj, int a, int b) {
    for (int m = 0; m < int(sd.morphisms.size()); ++m) {
        if (sd.morphisms[size_t(m)].src != src_obj ||
            sd.morphisms[size_t(m)].dst != dst_obj)
            continue;
        auto [x, y] = sd_morphism_parts(k, sd, m);
        if (x == a && y == b) return m;
    }
    throw ContractViolation("missing factorization morphism");
}

// simplex of the nerve for an arbitrary chain (identities allowed)
Sx nerve_simplex(const FiniteCategory& cat,
                 const std::vector<std::vector<Chain>>& chains, const Chain& c) {
    Chain core;
    Monotone sigma{0};
    if (c.mors.empty()) {
        core = c;
    } else {
        int src = chain_source(cat, c);
        for (int m : c.mors) {
            if (!cat.is_identity(m)) core.mors.push_back(m);
            sigma.push_back(sigma.back() + (cat.is_identity(m) ? 0 : 1));
        }
        if (core.mors.empty()) core.object = src;
    }
    int d = core.length();
    for (size_t i = 0; i < chains[size_t(d)].size(); ++i)
        if (chains[size_t(d)][i] == core) return Sx{int(i), sigma};
    throw ContractViolation("chain not found in nerve");
}

struct OverCat {
    FiniteCategory cat;  // C/x
    std::vector<int> object_mor;    // object -> morphism into x
    std::vector<int> morphism_mor;  // morphism -> underlying morphism of C
};

OverCat over_category(const FiniteCategory& c, const FiniteCategory& cop, int x) {
    CommaCategory un = comma_under(cop, x);
    OverCat out;
    out.cat = un.cat.opposite();
    out.object_mor = un.object_mor;    // same index (a morphism into x in c)
    out.morphism_mor = un.morphism_mor;
    return out;
}

// functor C/a -> C/a' induced by u: a -> a' (post-composition)
Functor over_functor(const FiniteCategory& c, const OverCat& from, const OverCat& to,
                     int u) {
    Functor phi;
    phi.src = &from.cat;
    phi.dst = &to.cat;
    auto to_obj = [&](int mor) {
        for (size_t i = 0; i < to.object_mor.size(); ++i)
            if (to.object_mor[i] == mor) return int(i);
        throw ContractViolation("missing over-category object");
    };
    for (int o = 0; o < int(from.cat.objects.size()); ++o)
        phi.obj_map.push_back(to_obj(c.compose(from.object_mor[size_t(o)], u)));
    for (int m = 0; m < int(from.cat.morphisms.size()); ++m) {
        const auto& mor = from.cat.morphisms[size_t(m)];
        int want = from.morphism_mor[size_t(m)];
        int found = -1;
        for (int m2 = 0; m2 < int(to.cat.morphisms.size()); ++m2)
            if (to.cat.morphisms[size_t(m2)].src == phi.obj_map[size_t(mor.src)] &&
                to.cat.morphisms[size_t(m2)].dst == phi.obj_map[size_t(mor.dst)] &&
                to.morphism_mor[size_t(m2)] == want)
                found = m2;
        if (found < 0) throw ContractViolation("missing over-category morphism");
        phi.mor_map.push_back(found);
    }
    phi.validate();
    return phi;
}

// functor m/Sd K -> m'/Sd K induced by v: m' -> m in Sd K (pre-composition)
Functor comma_functor(const FiniteCategory& sd, const CommaCategory& from,
                      const CommaCategory& to, int v) {
    Functor phi;
    phi.src = &from.cat;
    phi.dst = &to.cat;
    auto to_obj = [&](int mor) {
        for (size_t i = 0; i < to.object_mor.size(); ++i)
            if (to.object_mor[i] == mor) return int(i);
        throw ContractViolation("missing comma object");
    };
    for (int o = 0; o < int(from.cat.objects.size()); ++o)
        phi.obj_map.push_back(to_obj(sd.compose(v, from.object_mor[size_t(o)])));
    for (int m = 0; m < int(from.cat.morphisms.size()); ++m) {
        const auto& mor = from.cat.morphisms[size_t(m)];
        int want = from.morphism_mor[size_t(m)];
        int found = -1;
        for (int m2 = 0; m2 < int(to.cat.morphisms.size()); ++m2)
            if (to.cat.morphisms[size_t(m2)].src == phi.obj_map[size_t(mor.src)] &&
                to.cat.morphisms[size_t(m2)].dst == phi.obj_map[size_t(mor.dst)] &&
                to.morphism_mor[size_t(m2)] == want)
                found = m2;
        if (found < 0) throw ContractViolation("missing comma morphism");
        phi.mor_map.push_back(found);
    }
    phi.validate();
    return phi;
}

// restriction of a diagram along the projection of a comma category
SSetDiagram comma_restriction(const SSetDiagram& f, const FiniteCategory& shape,
                              const CommaCategory& cm) {
    SSetDiagram d;
    d.shape = &cm.cat;
    for (int o = 0; o < int(cm.cat.objects.size()); ++o)
        d.value.push_back(
            f.value[size_t(shape.morphisms[size_t(cm.object_mor[size_t(o)])].dst)]);
    for (int m = 0; m < int(cm.cat.morphisms.size()); ++m)
        d.action.push_back(f.action[size_t(cm.morphism_mor[size_t(m)])]);
    rebind_diagram(d);
    d.validate();
    return d;
}

void require_stabilized(const TotResult& r, const std::string& what) {
    if (!r.stabilized)
        throw ContractViolation(what + ": Tot not stabilized at stage " +
                                std::to_string(r.stage) +
                                "; rerun with a higher stage");
}

long long simplex_count(const SimplicialSet& x, int q) {
    return (long long)(x.simplices(q).size());
}

}  // namespace

// ---------------------------------------------------------------------------
// diagram plumbing

void rebind_diagram(SSetDiagram& d) {
    const FiniteCategory& K = *d.shape;
    for (int m = 0; m < int(K.morphisms.size()); ++m) {
        d.action[size_t(m)].src = &d.value[size_t(K.morphisms[size_t(m)].src)];
        d.action[size_t(m)].tgt = &d.value[size_t(K.morphisms[size_t(m)].dst)];
    }
}

SSetDiagram sset_over_subdivision(const SSetBifunctor& f, const FiniteCategory& sd) {
    const FiniteCategory& K = *f.k;
    SSetDiagram d;
    d.shape = &sd;
    for (int o = 0; o < int(sd.objects.size()); ++o) {
        int g = sd_object_to_mor(K, sd, o);
        d.value.push_back(f.value[size_t(K.morphisms[size_t(g)].src)]
                                 [size_t(K.morphisms[size_t(g)].dst)]);
    }
    for (int m = 0; m < int(sd.morphisms.size()); ++m) {
        auto [a, b] = sd_morphism_parts(K, sd, m);
        int g = sd_object_to_mor(K, sd, sd.morphisms[size_t(m)].src);
        int g2 = sd_object_to_mor(K, sd, sd.morphisms[size_t(m)].dst);
        int src2 = K.morphisms[size_t(g2)].src, dstg = K.morphisms[size_t(g)].dst;
        SimplicialMap comp =
            f.left[size_t(a)][size_t(dstg)].then(f.right[size_t(b)][size_t(src2)]);
        d.action.push_back(std::move(comp));
    }
    rebind_diagram(d);
    d.validate();
    return d;
}

SSetDiagram restrict_diagram(const SSetDiagram& d, const Functor& phi) {
    phi.validate();
    SSetDiagram out;
    out.shape = phi.src;
    for (int o = 0; o < int(phi.src->objects.size()); ++o)
        out.value.push_back(d.value[size_t(phi.obj_map[size_t(o)])]);
    for (int m = 0; m < int(phi.src->morphisms.size()); ++m)
        out.action.push_back(d.action[size_t(phi.mor_map[size_t(m)])]);
    rebind_diagram(out);
    out.validate();
    return out;
}

Functor sd_functor(const Functor& phi, const FiniteCategory& sdl,
                   const FiniteCategory& sdk) {
    phi.validate();
    const FiniteCategory& L = *phi.src;
    const FiniteCategory& K = *phi.dst;
    Functor out;
    out.src = &sdl;
    out.dst = &sdk;
    for (int o = 0; o < int(sdl.objects.size()); ++o)
        out.obj_map.push_back(
            sd_object_of(K, sdk, phi.mor_map[size_t(sd_object_to_mor(L, sdl, o))]));
    for (int m = 0; m < int(sdl.morphisms.size()); ++m) {
        auto [a, b] = sd_morphism_parts(L, sdl, m);
        out.mor_map.push_back(find_sd_morphism(
            K, sdk, out.obj_map[size_t(sdl.morphisms[size_t(m)].src)],
            out.obj_map[size_t(sdl.morphisms[size_t(m)].dst)],
            phi.mor_map[size_t(a)], phi.mor_map[size_t(b)]));
    }
    out.validate();
    return out;
}

SSetDiagram natural_system_of(const SSetDiagram& d, const FiniteCategory& sd) {
    const FiniteCategory& C = *d.shape;
    SSetDiagram out;
    out.shape = &sd;
    for (int o = 0; o < int(sd.objects.size()); ++o) {
        int g = sd_object_to_mor(C, sd, o);
        out.value.push_back(d.value[size_t(C.morphisms[size_t(g)].dst)]);
    }
    for (int m = 0; m < int(sd.morphisms.size()); ++m) {
        auto [a, b] = sd_morphism_parts(C, sd, m);
        (void)a;
        out.action.push_back(d.action[size_t(b)]);
    }
    rebind_diagram(out);
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// the tower

TotResult homotopy_end(const SSetBifunctor& d, const FiniteCategory& sd, int stage,
                       int out_dim) {
    SSetDiagram over_sd = sset_over_subdivision(d, sd);
    CoSpec spec =
        cosimplicial_spec(*d.k, Flavor::hom_end, stage + 1, &sd, nullptr);
    TotResult r = tot(formal_replacement(over_sd, spec), stage, out_dim);
    require_stabilized(r, "homotopy end");
    return r;
}

TotResult holim_bw(const SSetDiagram& f, const FiniteCategory& k,
                   const FiniteCategory& sd, int stage, int out_dim) {
    CoSpec spec =
        cosimplicial_spec(k, Flavor::natural_system, stage + 1, &sd, nullptr);
    TotResult r = tot(formal_replacement(f, spec), stage, out_dim);
    require_stabilized(r, "natural-system holim");
    return r;
}

HolimT holim_t(const SSetDiagram& f, const FiniteCategory& k, const DeltaCat& dk,
               int stage, int out_dim) {
    if (stage + 1 > dk.depth)
        throw ContractViolation(
            "chain-level holim needs chains of length " + std::to_string(stage + 1) +
            " but the diagram is only declared up to depth " +
            std::to_string(dk.depth));
    HolimT h;
    CoSpec spec =
        cosimplicial_spec(k, Flavor::delta_over_k, stage + 1, nullptr, &dk);
    h.tot = tot(formal_replacement(f, spec), stage, out_dim);
    require_stabilized(h.tot, "chain-level holim");

    // independent route: the end of Map(Delta[#K], F K) over the chain category
    const FiniteCategory& D = dk.cat;
    int nobj = int(D.objects.size());
    std::vector<SimplicialSet> deltas;
    deltas.reserve(size_t(dk.depth) + 1);
    for (int p = 0; p <= dk.depth; ++p)
        deltas.push_back(SimplicialSet::standard_simplex(p));
    std::vector<std::vector<MappingObject>> mo(static_cast<size_t>(nobj));
    SSetBifunctor bif;
    bif.k = &D;
    bif.value.resize(size_t(nobj));
    for (int a = 0; a < nobj; ++a) {
        int pa = dk.chain_of[size_t(a)].length();
        for (int b = 0; b < nobj; ++b)
            mo[size_t(a)].push_back(
                mapping_object(deltas[size_t(pa)], f.value[size_t(b)], out_dim));
        for (int b = 0; b < nobj; ++b)
            bif.value[size_t(a)].push_back(mo[size_t(a)][size_t(b)].ss);
    }
    int nmor = int(D.morphisms.size());
    bif.left.resize(size_t(nmor));
    bif.right.resize(size_t(nmor));
    for (int u = 0; u < nmor; ++u) {
        int a = D.morphisms[size_t(u)].src, a2 = D.morphisms[size_t(u)].dst;
        int pa = dk.chain_of[size_t(a)].length(), pa2 = dk.chain_of[size_t(a2)].length();
        SimplicialMap dm =
            delta_map(deltas[size_t(pa)], deltas[size_t(pa2)], dk.theta_of[size_t(u)]);
        for (int b = 0; b < nobj; ++b) {
            SimplicialMap pre = mapping_object_precompose(mo[size_t(a2)][size_t(b)],
                                                          mo[size_t(a)][size_t(b)], dm);
            bif.left[size_t(u)].push_back(remap(pre.image,
                                                &bif.value[size_t(a2)][size_t(b)],
                                                &bif.value[size_t(a)][size_t(b)]));
        }
        for (int c = 0; c < nobj; ++c) {
            SimplicialMap post =
                mapping_object_postcompose(mo[size_t(c)][size_t(a)],
                                           mo[size_t(c)][size_t(a2)], f.action[size_t(u)]);
            bif.right[size_t(u)].push_back(remap(post.image,
                                                 &bif.value[size_t(c)][size_t(a)],
                                                 &bif.value[size_t(c)][size_t(a2)]));
        }
    }
    h.end_form = end_of_sset(bif, out_dim);
    for (int q = 0; q <= out_dim; ++q)
        if (simplex_count(h.tot.ss, q) != simplex_count(h.end_form, q))
            throw ContractViolation(
                "chain-level holim disagrees with its end formula in degree " +
                std::to_string(q));
    return h;
}

SimplicialSet over_nerve(const FiniteCategory& c, int x) {
    FiniteCategory cop = c.opposite();
    return nerve(over_category(c, cop, x).cat);
}

BkHolim bk_holim(const SSetDiagram& d, int stage, int out_dim) {
    const FiniteCategory& C = *d.shape;
    FiniteCategory sd = subdivision_category(C);
    SSetDiagram system = natural_system_of(d, sd);
    BkHolim h;
    h.spec = cosimplicial_spec(C, Flavor::natural_system, stage + 1, &sd, nullptr);
    h.tot = tot(formal_replacement(system, h.spec), stage, out_dim);
    require_stabilized(h.tot, "homotopy limit");

    // independent route: the nerve-weighted end
    FiniteCategory cop = C.opposite();
    int nobj = int(C.objects.size());
    std::vector<OverCat> overs;
    std::vector<SimplicialSet> nerves(static_cast<size_t>(nobj));
    std::vector<std::vector<std::vector<Chain>>> nerve_chains(static_cast<size_t>(nobj));
    for (int x = 0; x < nobj; ++x) overs.push_back(over_category(C, cop, x));
    for (int x = 0; x < nobj; ++x)
        nerves[size_t(x)] = nerve(overs[size_t(x)].cat, &nerve_chains[size_t(x)]);
    std::vector<std::vector<MappingObject>> mo(static_cast<size_t>(nobj));
    SSetBifunctor bif;
    bif.k = &C;
    bif.value.resize(size_t(nobj));
    for (int a = 0; a < nobj; ++a)
        for (int b = 0; b < nobj; ++b) {
            mo[size_t(a)].push_back(
                mapping_object(nerves[size_t(a)], d.value[size_t(b)], out_dim));
            bif.value[size_t(a)].push_back(mo[size_t(a)][size_t(b)].ss);
        }
    int nmor = int(C.morphisms.size());
    bif.left.resize(size_t(nmor));
    bif.right.resize(size_t(nmor));
    for (int u = 0; u < nmor; ++u) {
        int a = C.morphisms[size_t(u)].src, a2 = C.morphisms[size_t(u)].dst;
        // N(C/u): N(C/a) -> N(C/a')
        Functor phi = over_functor(C, overs[size_t(a)], overs[size_t(a2)], u);
        SimplicialMap nmap;
        nmap.src = &nerves[size_t(a)];
        nmap.tgt = &nerves[size_t(a2)];
        nmap.image.resize(nerves[size_t(a)].cells.size());
        for (size_t dd = 0; dd < nerves[size_t(a)].cells.size(); ++dd)
            for (size_t cell = 0; cell < nerves[size_t(a)].cells[dd].size(); ++cell)
                nmap.image[dd].push_back(nerve_simplex(
                    overs[size_t(a2)].cat, nerve_chains[size_t(a2)],
                    chain_induced_map(phi, nerve_chains[size_t(a)][dd][cell])));
        std::string err;
        if (!nmap.valid(&err))
            throw ContractViolation("nerve functoriality broke: " + err);
        for (int b = 0; b < nobj; ++b) {
            SimplicialMap pre = mapping_object_precompose(mo[size_t(a2)][size_t(b)],
                                                          mo[size_t(a)][size_t(b)],
                                                          nmap);
            bif.left[size_t(u)].push_back(remap(pre.image,
                                                &bif.value[size_t(a2)][size_t(b)],
                                                &bif.value[size_t(a)][size_t(b)]));
        }
        for (int c = 0; c < nobj; ++c) {
            SimplicialMap post = mapping_object_postcompose(
                mo[size_t(c)][size_t(a)], mo[size_t(c)][size_t(a2)],
                d.action[size_t(u)]);
            bif.right[size_t(u)].push_back(remap(post.image,
                                                 &bif.value[size_t(c)][size_t(a)],
                                                 &bif.value[size_t(c)][size_t(a2)]));
        }
    }
    h.end_route = end_of_sset(bif, out_dim);
    for (int q = 0; q <= out_dim; ++q)
        if (simplex_count(h.tot.ss, q) != simplex_count(h.end_route, q))
            throw ContractViolation(
                "homotopy limit routes disagree in degree " + std::to_string(q));
    return h;
}

// ---------------------------------------------------------------------------
// functoriality

SimplicialMap tot_projection(const TotResult& tk, const CoSpec& speck,
                             const TotResult& tl, const CoSpec& specl,
                             const Functor& phi) {
    SimplicialMap m;
    m.src = &tk.ss;
    m.tgt = &tl.ss;
    m.image.resize(tk.ss.cells.size());
    for (size_t q = 0; q < tk.ss.cells.size(); ++q)
        for (size_t cell = 0; cell < tk.ss.cells[q].size(); ++cell) {
            const TotFamily& fam = tk.cell_families[q][cell];
            TotFamily out(fam.size());
            for (size_t p = 0; p < fam.size(); ++p) {
                out[p].resize(specl.chains[p].size());
                for (size_t c = 0; c < specl.chains[p].size(); ++c)
                    out[p][c] = fam[p][size_t(chain_index(
                        speck.chains[p],
                        chain_induced_map(phi, specl.chains[p][c])))];
            }
            auto it = tl.lookup[q].find(out);
            if (it == tl.lookup[q].end())
                throw ContractViolation("restricted family is not a simplex");
            m.image[q].push_back(it->second);
        }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("projection map invalid: " + err);
    return m;
}

SimplicialMap ComparisonCell::as_map() const {
    SimplicialMap m;
    m.src = &source.ss;
    m.tgt = &target.ss;
    m.image = image;
    return m;
}

ComparisonCell functoriality_cell(const Functor& phi, const SSetDiagram& f,
                                  const FiniteCategory& k, const FiniteCategory& sdk,
                                  const FiniteCategory& l, const FiniteCategory& sdl,
                                  int stage, int out_dim) {
    Functor sphi = sd_functor(phi, sdl, sdk);
    SSetDiagram fl = restrict_diagram(f, sphi);
    ComparisonCell cell;
    cell.source_spec =
        cosimplicial_spec(k, Flavor::natural_system, stage + 1, &sdk, nullptr);
    cell.target_spec =
        cosimplicial_spec(l, Flavor::natural_system, stage + 1, &sdl, nullptr);
    cell.source = tot(formal_replacement(f, cell.source_spec), stage, out_dim);
    cell.target = tot(formal_replacement(fl, cell.target_spec), stage, out_dim);
    cell.image = tot_projection(cell.source, cell.source_spec, cell.target,
                                cell.target_spec, phi)
                     .image;
    return cell;
}

ComparisonCell holim_cell(const Functor& phi, const SSetDiagram& d,
                          const FiniteCategory& l, int stage, int out_dim) {
    (void)l;
    BkHolim hk = bk_holim(d, stage, out_dim);
    SSetDiagram dl = restrict_diagram(d, phi);
    BkHolim hl = bk_holim(dl, stage, out_dim);
    ComparisonCell cell;
    cell.source = std::move(hk.tot);
    cell.source_spec = std::move(hk.spec);
    cell.target = std::move(hl.tot);
    cell.target_spec = std::move(hl.spec);
    cell.image = tot_projection(cell.source, cell.source_spec, cell.target,
                                cell.target_spec, phi)
                     .image;
    return cell;
}

SimplicialMap holim_evaluation(const BkHolim& h, const SSetDiagram& d, int obj) {
    Chain want;
    want.object = obj;
    int c0 = chain_index(h.spec.chains[0], want);
    SimplicialMap m;
    m.src = &h.tot.ss;
    m.tgt = &d.value[size_t(obj)];
    m.image.resize(h.tot.ss.cells.size());
    SimplicialSet d0 = SimplicialSet::standard_simplex(0);
    for (size_t q = 0; q < h.tot.ss.cells.size(); ++q) {
        SimplicialSet dq = SimplicialSet::standard_simplex(int(q));
        ProductSSet prod = product({&d0, &dq});
        Sx top = prod.from_components(
            {Sx{0, Monotone(q + 1, 0)}, Sx{0, mono_identity(int(q))}});
        for (size_t cell = 0; cell < h.tot.ss.cells[q].size(); ++cell)
            m.image[q].push_back(
                apply_images(h.tot.cell_families[q][cell][0][size_t(c0)], top));
    }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("evaluation map invalid: " + err);
    return m;
}

SimplicialMap tot_postcompose(const TotResult& tf, const CoSpec& spec,
                              const TotResult& tg,
                              const std::vector<SimplicialMap>& eta) {
    SimplicialMap m;
    m.src = &tf.ss;
    m.tgt = &tg.ss;
    m.image.resize(tf.ss.cells.size());
    for (size_t q = 0; q < tf.ss.cells.size(); ++q)
        for (size_t cell = 0; cell < tf.ss.cells[q].size(); ++cell) {
            TotFamily out = tf.cell_families[q][cell];
            for (size_t p = 0; p < out.size(); ++p)
                for (size_t c = 0; c < out[p].size(); ++c) {
                    const SimplicialMap& comp =
                        eta[size_t(spec.factor_obj[p][c])];
                    for (auto& lvl : out[p][c])
                        for (auto& t : lvl) t = comp.apply(t);
                }
            auto it = tg.lookup[q].find(out);
            if (it == tg.lookup[q].end())
                throw ContractViolation("image family is not a simplex");
            m.image[q].push_back(it->second);
        }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("induced map invalid: " + err);
    return m;
}

// ---------------------------------------------------------------------------
// the kernel formula

KernelVerdict derived_kernel_check(const SSetDiagram& f, const FiniteCategory& k,
                                   const FiniteCategory& sd, int stage, int out_dim) {
    KernelVerdict v;
    TotResult lhs = holim_bw(f, k, sd, stage, out_dim);
    for (int q = 0; q <= out_dim; ++q)
        v.left_counts.push_back(simplex_count(lhs.ss, q));

    int nobj = int(k.objects.size());
    int nmor = int(k.morphisms.size());
    std::vector<CommaCategory> obj_comma, mor_comma;
    std::vector<SSetDiagram> obj_diag, mor_diag;
    std::vector<BkHolim> ha, hb;
    for (int x = 0; x < nobj; ++x)
        obj_comma.push_back(comma_under(sd, sd_object_of(k, sd, k.identity[size_t(x)])));
    for (int m = 0; m < nmor; ++m)
        mor_comma.push_back(comma_under(sd, sd_object_of(k, sd, m)));
    for (int x = 0; x < nobj; ++x) {
        obj_diag.push_back(comma_restriction(f, sd, obj_comma[size_t(x)]));
        ha.push_back(bk_holim(obj_diag[size_t(x)], stage, out_dim));
    }
    for (int m = 0; m < nmor; ++m) {
        mor_diag.push_back(comma_restriction(f, sd, mor_comma[size_t(m)]));
        hb.push_back(bk_holim(mor_diag[size_t(m)], stage, out_dim));
    }
    std::vector<SimplicialMap> alpha, beta;
    for (int m = 0; m < nmor; ++m) {
        int x = k.morphisms[size_t(m)].src, y = k.morphisms[size_t(m)].dst;
        int mobj = sd_object_of(k, sd, m);
        int v0 = find_sd_morphism(k, sd, sd_object_of(k, sd, k.identity[size_t(x)]),
                                  mobj, k.identity[size_t(x)], m);
        int v1 = find_sd_morphism(k, sd, sd_object_of(k, sd, k.identity[size_t(y)]),
                                  mobj, m, k.identity[size_t(y)]);
        Functor phi0 = comma_functor(sd, mor_comma[size_t(m)], obj_comma[size_t(x)], v0);
        Functor phi1 = comma_functor(sd, mor_comma[size_t(m)], obj_comma[size_t(y)], v1);
        alpha.push_back(tot_projection(ha[size_t(x)].tot, ha[size_t(x)].spec,
                                       hb[size_t(m)].tot, hb[size_t(m)].spec, phi0));
        beta.push_back(tot_projection(ha[size_t(y)].tot, ha[size_t(y)].spec,
                                      hb[size_t(m)].tot, hb[size_t(m)].spec, phi1));
    }
    for (int q = 0; q <= out_dim; ++q) {
        std::vector<std::vector<Sx>> lists;
        for (int x = 0; x < nobj; ++x)
            lists.push_back(ha[size_t(x)].tot.ss.simplices(q));
        long long count = 0;
        std::vector<Sx> cur(static_cast<size_t>(nobj));
        auto rec = [&](auto&& self, int x) -> void {
            if (x == nobj) {
                for (int m = 0; m < nmor; ++m) {
                    int a = k.morphisms[size_t(m)].src, b = k.morphisms[size_t(m)].dst;
                    if (!(alpha[size_t(m)].apply(cur[size_t(a)]) ==
                          beta[size_t(m)].apply(cur[size_t(b)])))
                        return;
                }
                ++count;
                return;
            }
            for (const Sx& s : lists[size_t(x)]) {
                cur[size_t(x)] = s;
                self(self, x + 1);
            }
        };
        rec(rec, 0);
        v.right_counts.push_back(count);
    }
    v.pass = v.left_counts == v.right_counts;
    if (!v.pass) v.detail = "degreewise cardinalities differ";
    return v;
}

// ---------------------------------------------------------------------------
// hom simplicial sets

HomSSet hom_sset(const SimplicialSet& b, const SimplicialSet& c, int bound) {
    HomSSet h;
    h.b = &b;
    h.c = &c;
    h.bound = bound;
    int bdim = std::max(b.dim(), 0);
    h.deltas.reserve(size_t(bound) + 1);
    for (int p = 0; p <= bound; ++p)
        h.deltas.push_back(SimplicialSet::standard_simplex(p));
    h.maps.reserve(size_t(bound) + 1);
    for (int p = 0; p <= bound; ++p)
        h.maps.push_back(mapping_object(h.deltas[size_t(p)], c, bdim));
    using Elem = std::vector<std::vector<Sx>>;
    auto elements = std::function<std::vector<Elem>(int)>([&](int p) {
        std::vector<Elem> out;
        for (const SimplicialMap& m : enumerate_maps(b, h.maps[size_t(p)].ss))
            out.push_back(m.image);
        return out;
    });
    auto act = std::function<Elem(const Elem&, int, const Monotone&)>(
        [&](const Elem& e, int p, const Monotone& theta) {
            int q = int(theta.size()) - 1;
            SimplicialMap dm = delta_map(h.deltas[size_t(q)], h.deltas[size_t(p)], theta);
            SimplicialMap pre =
                mapping_object_precompose(h.maps[size_t(p)], h.maps[size_t(q)], dm);
            Elem out(e.size());
            for (size_t d = 0; d < e.size(); ++d)
                for (const Sx& s : e[d]) out[d].push_back(pre.apply(s));
            return out;
        });
    h.ss = sset_from_functor<Elem>(bound, elements, act, &h.cell_elems, nullptr,
                                   &h.table);
    return h;
}

SimplicialMap hom_precompose(const HomSSet& from, const HomSSet& to,
                             const SimplicialMap& g) {
    SimplicialMap m;
    m.src = &from.ss;
    m.tgt = &to.ss;
    m.image.resize(from.ss.cells.size());
    for (size_t p = 0; p < from.ss.cells.size(); ++p)
        for (size_t cell = 0; cell < from.ss.cells[p].size(); ++cell) {
            const auto& e = from.cell_elems[p][cell];
            std::vector<std::vector<Sx>> out(to.b->cells.size());
            for (size_t d = 0; d < to.b->cells.size(); ++d)
                for (size_t bc = 0; bc < to.b->cells[d].size(); ++bc)
                    out[d].push_back(
                        apply_images(e, g.apply(Sx{int(bc), mono_identity(int(d))})));
            m.image[p].push_back(to.table[p].at(out));
        }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("hom precompose invalid: " + err);
    return m;
}

SimplicialMap hom_postcompose(const HomSSet& from, const HomSSet& to,
                              const SimplicialMap& g) {
    SimplicialMap m;
    m.src = &from.ss;
    m.tgt = &to.ss;
    m.image.resize(from.ss.cells.size());
    for (size_t p = 0; p < from.ss.cells.size(); ++p) {
        SimplicialMap post =
            mapping_object_postcompose(from.maps[p], to.maps[p], g);
        for (size_t cell = 0; cell < from.ss.cells[p].size(); ++cell) {
            const auto& e = from.cell_elems[p][cell];
            std::vector<std::vector<Sx>> out(e.size());
            for (size_t d = 0; d < e.size(); ++d)
                for (const Sx& s : e[d]) out[d].push_back(post.apply(s));
            m.image[p].push_back(to.table[p].at(out));
        }
    }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("hom postcompose invalid: " + err);
    return m;
}

// ---------------------------------------------------------------------------
// chain-complex cotensor

namespace {

struct CotensorIndex {
    // basis of degree n: (cell dimension m, cell, coordinate of C_{m+n})
    const ChainComplex* c = nullptr;
    const SimplicialSet* k = nullptr;
    int lo = 0, hi = -1;

    int dim(int n) const {
        int total = 0;
        for (int m = 0; m <= k->dim(); ++m)
            total += int(k->cells[size_t(m)].size()) * c->dim(m + n);
        return total;
    }
    int offset(int n, int m, int cell, int j) const {
        int off = 0;
        for (int m2 = 0; m2 < m; ++m2)
            off += int(k->cells[size_t(m2)].size()) * c->dim(m2 + n);
        return off + cell * c->dim(m + n) + j;
    }
};

CotensorIndex cotensor_index(const ChainComplex& c, const SimplicialSet& k) {
    CotensorIndex ix;
    ix.c = &c;
    ix.k = &k;
    if (c.hi < c.lo || k.dim() < 0) return ix;
    ix.lo = c.lo - k.dim();
    ix.hi = c.hi;
    return ix;
}

}  // namespace

ChainComplex cotensor_complex(const ChainComplex& c, const SimplicialSet& k) {
    CotensorIndex ix = cotensor_index(c, k);
    ChainComplex out;
    out.p = c.p;
    if (ix.hi < ix.lo) return out;
    out.lo = ix.lo;
    out.hi = ix.hi;
    for (int n = ix.lo; n <= ix.hi; ++n) out.dims.push_back(ix.dim(n));
    for (int n = ix.lo + 1; n <= ix.hi; ++n) {
        FieldMatrix d(c.p, ix.dim(n - 1), ix.dim(n));
        long long sign_n = (n % 2 == 0) ? 1 : c.p - 1;  // (-1)^n
        for (int m = 0; m <= k.dim(); ++m)
            for (int cell = 0; cell < int(k.cells[size_t(m)].size()); ++cell)
                for (int j = 0; j < c.dim(m + n); ++j) {
                    int col = ix.offset(n, m, cell, j);
                    // d_C after the hom
                    FieldMatrix dc = c.diff(m + n);
                    for (int r = 0; r < dc.rows(); ++r)
                        if (dc.at(r, j) != 0)
                            d.at(ix.offset(n - 1, m, cell, r), col) = dc.at(r, j);
                    // minus (-1)^n times the hom after the boundary
                    if (m + 1 > k.dim()) continue;
                    for (int cell2 = 0; cell2 < int(k.cells[size_t(m) + 1].size());
                         ++cell2) {
                        const auto& faces = k.cells[size_t(m) + 1][size_t(cell2)].faces;
                        long long coeff = 0;
                        for (int i = 0; i <= m + 1; ++i) {
                            const Sx& fc = faces[size_t(i)];
                            if (!fc.nondeg() || fc.base != cell) continue;
                            long long s = (i % 2 == 0) ? 1 : c.p - 1;
                            coeff = (coeff + s) % c.p;
                        }
                        if (coeff == 0) continue;
                        long long val =
                            (c.p - sign_n * coeff % c.p) % c.p;  // minus sign
                        int row = ix.offset(n - 1, m + 1, cell2, j);
                        d.at(row, col) = (d.at(row, col) + val) % c.p;
                    }
                }
        out.d.push_back(std::move(d));
    }
    out.validate();
    return out;
}

ChainMap cotensor_restrict(const ChainComplex& c, const SimplicialSet& kk,
                           const SimplicialSet& ll, const SimplicialMap& f) {
    ChainComplex src = cotensor_complex(c, ll), tgt = cotensor_complex(c, kk);
    CotensorIndex ixl = cotensor_index(c, ll), ixk = cotensor_index(c, kk);
    ChainMap out = ChainMap::zero(src, tgt);
    for (int n = out.lo; n < out.lo + int(out.mats.size()); ++n) {
        FieldMatrix& m = out.mats[size_t(n - out.lo)];
        for (int md = 0; md <= kk.dim(); ++md)
            for (int cell = 0; cell < int(kk.cells[size_t(md)].size()); ++cell) {
                Sx img = f.apply(Sx{cell, mono_identity(md)});
                if (!img.nondeg()) continue;  // degenerate image kills the slot
                for (int j = 0; j < c.dim(md + n); ++j)
                    m.at(ixk.offset(n, md, cell, j),
                         ixl.offset(n, md, img.base, j)) = 1;
            }
    }
    out.validate();
    return out;
}

namespace {

std::vector<long long> encode_chain_map(const ChainMap& g) {
    std::vector<long long> out;
    for (int n = g.src.lo; n <= g.src.hi; ++n) {
        FieldMatrix mn = g.mat(n);
        for (int r = 0; r < mn.rows(); ++r)
            for (int cc = 0; cc < mn.cols(); ++cc) out.push_back(mn.at(r, cc));
    }
    return out;
}

ChainMap decode_chain_map(const std::vector<long long>& e, const ChainComplex& b,
                          const ChainComplex& t) {
    ChainMap g = ChainMap::zero(b, t);
    size_t pos = 0;
    for (int n = b.lo; n <= b.hi; ++n) {
        FieldMatrix mn(b.p, t.dim(n), b.dim(n));
        for (int r = 0; r < mn.rows(); ++r)
            for (int cc = 0; cc < mn.cols(); ++cc) mn.at(r, cc) = e[pos++];
        g.mats[size_t(n - g.lo)] = mn;
    }
    return g;
}

}  // namespace

HomChain hom_chain(const ChainComplex& b, const ChainComplex& c, int bound,
                   long long budget) {
    HomChain h;
    h.b = b;
    h.c = c;
    h.bound = bound;
    h.deltas.reserve(size_t(bound) + 1);
    for (int p = 0; p <= bound; ++p)
        h.deltas.push_back(SimplicialSet::standard_simplex(p));
    for (int p = 0; p <= bound; ++p)
        h.cotensors.push_back(cotensor_complex(c, h.deltas[size_t(p)]));
    std::vector<std::vector<ChainMap>> bases;
    for (int p = 0; p <= bound; ++p) {
        bases.push_back(hom_basis(b, h.cotensors[size_t(p)]));
        long long total = 1;
        for (size_t i = 0; i < bases.back().size(); ++i) {
            total *= b.p;
            if (total > budget)
                throw ContractViolation(
                    "hom enumeration would exceed the budget at level " +
                    std::to_string(p));
        }
    }
    using Elem = std::vector<long long>;
    auto elements = std::function<std::vector<Elem>(int)>([&](int p) {
        const auto& basis = bases[size_t(p)];
        std::vector<Elem> out;
        std::vector<long long> coeff(basis.size(), 0);
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == basis.size()) {
                ChainMap g = ChainMap::zero(b, h.cotensors[size_t(p)]);
                for (size_t j = 0; j < basis.size(); ++j) {
                    if (coeff[j] == 0) continue;
                    for (size_t n = 0; n < g.mats.size(); ++n) {
                        FieldMatrix add = basis[j].mat(int(n) + g.lo);
                        for (int r = 0; r < add.rows(); ++r)
                            for (int cc = 0; cc < add.cols(); ++cc)
                                g.mats[n].at(r, cc) =
                                    (g.mats[n].at(r, cc) + coeff[j] * add.at(r, cc)) %
                                    b.p;
                    }
                }
                out.push_back(encode_chain_map(g));
                return;
            }
            for (long long v = 0; v < b.p; ++v) {
                coeff[i] = v;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
        std::sort(out.begin(), out.end());
        return out;
    });
    auto act = std::function<Elem(const Elem&, int, const Monotone&)>(
        [&](const Elem& e, int p, const Monotone& theta) {
            int q = int(theta.size()) - 1;
            ChainMap g = decode_chain_map(e, b, h.cotensors[size_t(p)]);
            ChainMap psi = cotensor_restrict(c, h.deltas[size_t(q)],
                                             h.deltas[size_t(p)],
                                             delta_map(h.deltas[size_t(q)],
                                                       h.deltas[size_t(p)], theta));
            return encode_chain_map(compose(psi, g));
        });
    h.ss = sset_from_functor<Elem>(bound, elements, act, &h.cell_elems, nullptr,
                                   &h.table);
    return h;
}

ChainMap HomChain::realize(const Sx& s) const {
    int p = s.base_dim();
    ChainMap g = decode_chain_map(cell_elems[size_t(p)][size_t(s.base)], b,
                                  cotensors[size_t(p)]);
    if (s.nondeg()) return g;
    int q = s.dim();
    ChainMap psi = cotensor_restrict(c, deltas[size_t(q)], deltas[size_t(p)],
                                     delta_map(deltas[size_t(q)], deltas[size_t(p)],
                                               s.sigma));
    return compose(psi, g);
}

SimplicialMap hom_chain_precompose(const HomChain& from, const HomChain& to,
                                   const ChainMap& i) {
    SimplicialMap m;
    m.src = &from.ss;
    m.tgt = &to.ss;
    m.image.resize(from.ss.cells.size());
    for (size_t p = 0; p < from.ss.cells.size(); ++p)
        for (size_t cell = 0; cell < from.ss.cells[p].size(); ++cell) {
            ChainMap g = decode_chain_map(from.cell_elems[p][cell], from.b,
                                          from.cotensors[p]);
            m.image[p].push_back(to.table[p].at(encode_chain_map(compose(g, i))));
        }
    std::string err;
    if (!m.valid(&err)) throw ContractViolation("hom precompose invalid: " + err);
    return m;
}

// ---------------------------------------------------------------------------
// the objectwise holim and the enumeration bijection

ObjectwiseHolim objectwise_holim(const SSetDiagram& f, const FiniteCategory& k,
                                 int stage, int out_dim) {
    ObjectwiseHolim o;
    int nobj = int(k.objects.size());
    std::vector<SSetDiagram> diag;
    for (int x = 0; x < nobj; ++x) {
        o.commas.push_back(comma_under(k, x));
        diag.push_back(comma_restriction(f, k, o.commas[size_t(x)]));
        o.holims.push_back(bk_holim(diag[size_t(x)], stage, out_dim));
    }
    o.diagram.shape = &k;
    for (int x = 0; x < nobj; ++x) o.diagram.value.push_back(o.holims[size_t(x)].tot.ss);
    for (int u = 0; u < int(k.morphisms.size()); ++u) {
        int x = k.morphisms[size_t(u)].src, y = k.morphisms[size_t(u)].dst;
        Functor phi = comma_functor(k, o.commas[size_t(y)], o.commas[size_t(x)], u);
        o.diagram.action.push_back(
            tot_projection(o.holims[size_t(x)].tot, o.holims[size_t(x)].spec,
                           o.holims[size_t(y)].tot, o.holims[size_t(y)].spec, phi));
    }
    rebind_diagram(o.diagram);
    o.diagram.validate();
    return o;
}

SimplicialSet limit_of(const SSetDiagram& d, int dim_bound) {
    const FiniteCategory& K = *d.shape;
    int nobj = int(K.objects.size());
    using Elem = std::vector<Sx>;
    auto elements = std::function<std::vector<Elem>(int)>([&](int q) {
        std::vector<Elem> out;
        std::vector<std::vector<Sx>> lists;
        for (int x = 0; x < nobj; ++x)
            lists.push_back(d.value[size_t(x)].simplices(q));
        Elem cur(static_cast<size_t>(nobj));
        auto rec = [&](auto&& self, int x) -> void {
            if (x == nobj) {
                for (int u = 0; u < int(K.morphisms.size()); ++u)
                    if (!(d.action[size_t(u)].apply(
                              cur[size_t(K.morphisms[size_t(u)].src)]) ==
                          cur[size_t(K.morphisms[size_t(u)].dst)]))
                        return;
                out.push_back(cur);
                return;
            }
            for (const Sx& s : lists[size_t(x)]) {
                cur[size_t(x)] = s;
                self(self, x + 1);
            }
        };
        if (nobj == 0)
            out.push_back({});
        else
            rec(rec, 0);
        return out;
    });
    auto act = std::function<Elem(const Elem&, int, const Monotone&)>(
        [&](const Elem& e, int, const Monotone& theta) {
            Elem out;
            for (size_t x = 0; x < e.size(); ++x)
                out.push_back(d.value[x].act(e[x], theta));
            return out;
        });
    return sset_from_functor<Elem>(dim_bound, elements, act);
}

bool end_reconstruction_check(const SetDiagram& g, int i0) {
    const FiniteCategory& I = *g.shape;
    int nobj = int(I.objects.size());
    std::vector<std::vector<int>> homs(static_cast<size_t>(nobj));  // morphisms i0 -> i
    for (int m = 0; m < int(I.morphisms.size()); ++m)
        if (I.morphisms[size_t(m)].src == i0)
            homs[size_t(I.morphisms[size_t(m)].dst)].push_back(m);
    auto tuple_size = [&](int i, int j) {
        long long total = 1;
        for (size_t t = 0; t < homs[size_t(i)].size(); ++t)
            total *= g.size[size_t(j)];
        return int(total);
    };
    auto decode = [&](int i, int j, int code) {
        std::vector<int> vals(homs[size_t(i)].size());
        for (size_t t = 0; t < vals.size(); ++t) {
            vals[t] = code % g.size[size_t(j)];
            code /= g.size[size_t(j)];
        }
        return vals;
    };
    auto encode = [&](int j, const std::vector<int>& vals) {
        int code = 0;
        for (size_t t = vals.size(); t-- > 0;)
            code = code * g.size[size_t(j)] + vals[t];
        return code;
    };
    SetBifunctor bif;
    bif.k = &I;
    bif.size.assign(size_t(nobj), std::vector<int>(size_t(nobj)));
    for (int i = 0; i < nobj; ++i)
        for (int j = 0; j < nobj; ++j) bif.size[size_t(i)][size_t(j)] = tuple_size(i, j);
    int nmor = int(I.morphisms.size());
    bif.left.resize(size_t(nmor));
    bif.right.resize(size_t(nmor));
    for (int w = 0; w < nmor; ++w) {
        int a = I.morphisms[size_t(w)].src, a2 = I.morphisms[size_t(w)].dst;
        for (int j = 0; j < nobj; ++j) {
            std::vector<int> out;
            for (int e = 0; e < tuple_size(a2, j); ++e) {
                std::vector<int> t2 = decode(a2, j, e);
                std::vector<int> t(homs[size_t(a)].size());
                for (size_t u = 0; u < homs[size_t(a)].size(); ++u) {
                    int wu = I.compose(homs[size_t(a)][u], w);
                    size_t pos =
                        size_t(std::find(homs[size_t(a2)].begin(),
                                         homs[size_t(a2)].end(), wu) -
                               homs[size_t(a2)].begin());
                    t[u] = t2[pos];
                }
                out.push_back(encode(j, t));
            }
            bif.left[size_t(w)].push_back(std::move(out));
        }
        for (int i = 0; i < nobj; ++i) {
            std::vector<int> out;
            for (int e = 0; e < tuple_size(i, a); ++e) {
                std::vector<int> t = decode(i, a, e);
                for (int& vv : t) vv = g.action[size_t(w)][size_t(vv)];
                out.push_back(encode(a2, t));
            }
            bif.right[size_t(w)].push_back(std::move(out));
        }
    }
    bif.validate();
    SetEnd e = end_of(bif);
    if (int(e.families.size()) != g.size[size_t(i0)]) return false;
    // the diagonal and the identity-coordinate projection are inverse
    size_t id_pos = size_t(std::find(homs[size_t(i0)].begin(), homs[size_t(i0)].end(),
                                     I.identity[size_t(i0)]) -
                           homs[size_t(i0)].begin());
    for (int x = 0; x < g.size[size_t(i0)]; ++x) {
        std::vector<int> fam(static_cast<size_t>(nobj));
        for (int i = 0; i < nobj; ++i) {
            std::vector<int> t(homs[size_t(i)].size());
            for (size_t u = 0; u < t.size(); ++u)
                t[u] = g.action[size_t(homs[size_t(i)][u])][size_t(x)];
            fam[size_t(i)] = encode(i, t);
        }
        if (std::find(e.families.begin(), e.families.end(), fam) == e.families.end())
            return false;
        if (decode(i0, i0, fam[size_t(i0)])[id_pos] != x) return false;
    }
    return true;
}

BijectionVerdict natural_map_bijection(const SSetDiagram& b, const SSetDiagram& f,
                                       const FiniteCategory& k, int stage,
                                       int out_dim) {
    BijectionVerdict v;
    ObjectwiseHolim oh = objectwise_holim(f, k, stage, out_dim);
    int nobj = int(k.objects.size());

    // left side: natural transformations B => holim F
    std::vector<std::vector<SimplicialMap>> cand;
    for (int x = 0; x < nobj; ++x)
        cand.push_back(enumerate_maps(b.value[size_t(x)], oh.diagram.value[size_t(x)]));
    long long lhs = 0;
    std::vector<const SimplicialMap*> pick(size_t(nobj), nullptr);
    auto rec = [&](auto&& self, int x) -> void {
        if (x == nobj) {
            ++lhs;
            return;
        }
        for (const SimplicialMap& eta : cand[size_t(x)]) {
            bool ok = true;
            pick[size_t(x)] = &eta;
            for (int u = 0; u < int(k.morphisms.size()) && ok; ++u) {
                int a = k.morphisms[size_t(u)].src, a2 = k.morphisms[size_t(u)].dst;
                if (a > x || a2 > x) continue;
                if (!(b.action[size_t(u)].then(*pick[size_t(a2)]).image ==
                      pick[size_t(a)]->then(oh.diagram.action[size_t(u)]).image))
                    ok = false;
            }
            if (ok) self(self, x + 1);
        }
    };
    if (nobj == 0)
        lhs = 1;
    else
        rec(rec, 0);
    v.lhs = lhs;

    // right side: 0-simplices of the homotopy end of hom(B K', F K)
    int bound = stage + 1;
    std::vector<std::vector<HomSSet>> homs(static_cast<size_t>(nobj));
    for (int x = 0; x < nobj; ++x)
        for (int y = 0; y < nobj; ++y)
            homs[size_t(x)].push_back(
                hom_sset(b.value[size_t(x)], f.value[size_t(y)], bound));
    SSetBifunctor bif;
    bif.k = &k;
    bif.value.resize(size_t(nobj));
    for (int x = 0; x < nobj; ++x)
        for (int y = 0; y < nobj; ++y)
            bif.value[size_t(x)].push_back(homs[size_t(x)][size_t(y)].ss);
    int nmor = int(k.morphisms.size());
    bif.left.resize(size_t(nmor));
    bif.right.resize(size_t(nmor));
    for (int u = 0; u < nmor; ++u) {
        int a = k.morphisms[size_t(u)].src, a2 = k.morphisms[size_t(u)].dst;
        for (int y = 0; y < nobj; ++y)
            bif.left[size_t(u)].push_back(
                remap(hom_precompose(homs[size_t(a2)][size_t(y)],
                                     homs[size_t(a)][size_t(y)], b.action[size_t(u)])
                          .image,
                      &bif.value[size_t(a2)][size_t(y)],
                      &bif.value[size_t(a)][size_t(y)]));
        for (int x = 0; x < nobj; ++x)
            bif.right[size_t(u)].push_back(
                remap(hom_postcompose(homs[size_t(x)][size_t(a)],
                                      homs[size_t(x)][size_t(a2)], f.action[size_t(u)])
                          .image,
                      &bif.value[size_t(x)][size_t(a)],
                      &bif.value[size_t(x)][size_t(a2)]));
    }
    FiniteCategory sd = subdivision_category(k);
    TotResult he = homotopy_end(bif, sd, stage, 0);
    v.rhs = (long long)(he.ss.cells[0].size());

    // internal step: the identity-coordinate reconstruction of hom(B x, F -)
    v.reconstruction_ok = true;
    for (int x = 0; x < nobj && v.reconstruction_ok; ++x) {
        SetDiagram g;
        g.shape = &k;
        for (int j = 0; j < nobj; ++j)
            g.size.push_back(int(homs[size_t(x)][size_t(j)].ss.cells[0].size()));
        for (int w = 0; w < nmor; ++w) {
            int a = k.morphisms[size_t(w)].src, a2 = k.morphisms[size_t(w)].dst;
            SimplicialMap post = hom_postcompose(homs[size_t(x)][size_t(a)],
                                                 homs[size_t(x)][size_t(a2)],
                                                 f.action[size_t(w)]);
            std::vector<int> act;
            for (const Sx& s : post.image[0]) act.push_back(s.base);
            g.action.push_back(std::move(act));
        }
        g.validate();
        v.reconstruction_ok = end_reconstruction_check(g, x);
    }

    v.pass = (v.lhs == v.rhs) && v.reconstruction_ok;
    if (!v.pass)
        v.detail = "lhs=" + std::to_string(v.lhs) + " rhs=" + std::to_string(v.rhs) +
                   (v.reconstruction_ok ? "" : " (reconstruction failed)");
    return v;
}

}  // namespace hoend
