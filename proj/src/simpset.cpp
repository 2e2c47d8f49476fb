#include "hoend/simpset.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hoend {

// ---------------------------------------------------------------------------
// monotone maps

Monotone mono_identity(int n) {
    Monotone v(n + 1);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Monotone mono_delta(int i, int n) {
    Monotone v;
    v.reserve(n);
    for (int t = 0; t < n; ++t) v.push_back(t < i ? t : t + 1);
    return v;
}

Monotone mono_sigma(int j, int n) {
    Monotone v;
    v.reserve(n + 2);
    for (int t = 0; t <= n + 1; ++t) v.push_back(t <= j ? t : t - 1);
    return v;
}

Monotone mono_compose(const Monotone& outer, const Monotone& inner) {
    Monotone v;
    v.reserve(inner.size());
    for (int t : inner) v.push_back(outer.at(size_t(t)));
    return v;
}

bool mono_is_identity(const Monotone& m) {
    for (size_t t = 0; t < m.size(); ++t)
        if (m[t] != int(t)) return false;
    return true;
}

void epi_mono_factor(const Monotone& tau, Monotone& eta, Monotone& pi) {
    eta.clear();
    pi.clear();
    for (int v : tau) {
        if (eta.empty() || eta.back() != v) eta.push_back(v);
        pi.push_back(int(eta.size()) - 1);
    }
}

std::vector<Monotone> all_surjections(int n, int m) {
    std::vector<Monotone> out;
    Monotone cur;
    cur.push_back(0);
    // extend by steps of 0 or 1, must end at m
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            if (cur.back() == m) out.push_back(cur);
            return;
        }
        for (int step = 0; step <= 1; ++step) {
            int next = cur.back() + step;
            if (next > m) break;
            if (m - next > n - pos - 1) continue;  // cannot still reach m
            cur.push_back(next);
            self(self, pos + 1);
            cur.pop_back();
        }
    };
    if (m >= 0 && n >= m) rec(rec, 0);
    return out;
}

// ---------------------------------------------------------------------------
// simplicial sets

int SimplicialSet::dim() const {
    for (int d = int(cells.size()) - 1; d >= 0; --d)
        if (!cells[d].empty()) return d;
    return -1;
}

size_t SimplicialSet::cell_count() const {
    size_t n = 0;
    for (const auto& lvl : cells) n += lvl.size();
    return n;
}

std::string SimplicialSet::simplex_name(const Sx& s) const {
    std::string nm = cell(s).name;
    if (!s.nondeg()) {
        nm += '@';
        for (int v : s.sigma) nm += char('0' + v % 10);
    }
    return nm;
}

Sx SimplicialSet::face(const Sx& s, int i) const {
    if (s.dim() < 1) throw ContractViolation("face of a 0-simplex");
    if (s.nondeg()) return cell(s).faces[size_t(i)];
    return act(s, mono_delta(i, s.dim()));
}

Sx SimplicialSet::degeneracy(const Sx& s, int j) {
    return {s.base, mono_compose(s.sigma, mono_sigma(j, s.dim()))};
}

Sx SimplicialSet::act(const Sx& s, const Monotone& theta) const {
    Monotone tau = mono_compose(s.sigma, theta);
    Monotone eta, pi;
    epi_mono_factor(tau, eta, pi);
    int m = s.base_dim();
    Sx cur{s.base, mono_identity(m)};
    std::vector<bool> hit(size_t(m) + 1, false);
    for (int v : eta) hit[size_t(v)] = true;
    for (int j = m; j >= 0; --j)
        if (!hit[size_t(j)]) cur = face(cur, j);
    return {cur.base, mono_compose(cur.sigma, pi)};
}

std::vector<Sx> SimplicialSet::simplices(int n) const {
    std::vector<Sx> out;
    for (int m = 0; m <= n && m < int(cells.size()); ++m)
        for (int b = 0; b < int(cells[size_t(m)].size()); ++b)
            for (auto& s : all_surjections(n, m)) out.push_back({b, s});
    return out;
}

int SimplicialSet::find_cell(int d, const std::string& name) const {
    if (d < 0 || d >= int(cells.size())) return -1;
    for (int b = 0; b < int(cells[size_t(d)].size()); ++b)
        if (cells[size_t(d)][size_t(b)].name == name) return b;
    return -1;
}

void SimplicialSet::validate() const {
    for (int d = 0; d < int(cells.size()); ++d) {
        for (const auto& c : cells[size_t(d)]) {
            if (int(c.faces.size()) != (d == 0 ? 0 : d + 1))
                throw ContractViolation("cell " + c.name + ": wrong face count");
            for (const auto& f : c.faces) {
                if (f.dim() != d - 1 || f.base_dim() < 0 ||
                    f.base_dim() >= int(cells.size()) ||
                    f.base < 0 || f.base >= int(cells[size_t(f.base_dim())].size()))
                    throw ContractViolation("cell " + c.name + ": bad face");
            }
        }
        if (d < 2) continue;
        for (int b = 0; b < int(cells[size_t(d)].size()); ++b) {
            Sx top{b, mono_identity(d)};
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i)
                    if (face(face(top, j), i) != face(face(top, i), j - 1))
                        throw ContractViolation("simplicial identity fails at " +
                                                cells[size_t(d)][size_t(b)].name);
        }
    }
}

SimplicialSet SimplicialSet::empty_set() { return {}; }

SimplicialSet SimplicialSet::discrete(const std::vector<std::string>& points) {
    SimplicialSet x;
    x.cells.resize(1);
    for (const auto& p : points) x.cells[0].push_back({p, {}});
    return x;
}

namespace {

// increasing (d+1)-subsets of {0..n} in lexicographic order
std::vector<std::vector<int>> combos(int n, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (int(cur.size()) == d + 1) {
            out.push_back(cur);
            return;
        }
        for (int v = next; v <= n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

int combo_index(int n, const std::vector<int>& c) {
    auto all = combos(n, int(c.size()) - 1);
    auto it = std::lower_bound(all.begin(), all.end(), c);
    return int(it - all.begin());
}

std::string vertex_label(const std::vector<int>& c) {
    std::string s;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(c[i]);
    }
    return s;
}

}  // namespace

SimplicialSet SimplicialSet::standard_simplex(int n) {
    SimplicialSet x;
    x.cells.resize(size_t(n) + 1);
    for (int d = 0; d <= n; ++d) {
        auto cs = combos(n, d);
        for (const auto& c : cs) {
            Cell cell{vertex_label(c), {}};
            if (d > 0) {
                for (int i = 0; i <= d; ++i) {
                    std::vector<int> f = c;
                    f.erase(f.begin() + i);
                    cell.faces.push_back({combo_index(n, f), mono_identity(d - 1)});
                }
            }
            x.cells[size_t(d)].push_back(std::move(cell));
        }
    }
    return x;
}

Sx delta_simplex(int p, const Monotone& v) {
    Monotone eta, pi;
    epi_mono_factor(v, eta, pi);
    return {combo_index(p, eta), pi};
}

Monotone delta_vertices(const SimplicialSet& delta_p, const Sx& s) {
    // vertex labels of the base cell give the injection
    std::istringstream in(delta_p.cell(s).name);
    Monotone eta;
    std::string tok;
    while (std::getline(in, tok, '.')) eta.push_back(std::stoi(tok));
    return mono_compose(eta, s.sigma);
}

Subcomplex subcomplex(const SimplicialSet& ambient,
                      const std::vector<std::vector<bool>>& keep) {
    Subcomplex sub;
    sub.back.resize(ambient.cells.size());
    sub.ss.cells.resize(ambient.cells.size());
    sub.inclusion.src = &sub.ss;
    sub.inclusion.tgt = &ambient;
    sub.inclusion.image.resize(ambient.cells.size());
    for (int d = 0; d < int(ambient.cells.size()); ++d) {
        sub.back[size_t(d)].assign(ambient.cells[size_t(d)].size(), -1);
        for (int b = 0; b < int(ambient.cells[size_t(d)].size()); ++b) {
            if (!keep[size_t(d)][size_t(b)]) continue;
            const auto& c = ambient.cells[size_t(d)][size_t(b)];
            SimplicialSet::Cell copy{c.name, {}};
            for (const auto& f : c.faces) {
                int fb = sub.back[size_t(f.base_dim())][size_t(f.base)];
                if (fb < 0)
                    throw ContractViolation("subcomplex not face closed at " + c.name);
                copy.faces.push_back({fb, f.sigma});
            }
            sub.back[size_t(d)][size_t(b)] = int(sub.ss.cells[size_t(d)].size());
            sub.ss.cells[size_t(d)].push_back(std::move(copy));
            sub.inclusion.image[size_t(d)].push_back({b, mono_identity(d)});
        }
    }
    while (!sub.ss.cells.empty() && sub.ss.cells.back().empty()) {
        sub.ss.cells.pop_back();
        sub.inclusion.image.pop_back();
    }
    return sub;
}

SimplicialSet SimplicialSet::boundary(int n) {
    auto dn = standard_simplex(n);
    std::vector<std::vector<bool>> keep(size_t(n) + 1);
    for (int d = 0; d <= n; ++d)
        keep[size_t(d)].assign(dn.cells[size_t(d)].size(), d < n);
    return subcomplex(dn, keep).ss;
}

SimplicialSet SimplicialSet::horn(int n, int k) {
    auto dn = standard_simplex(n);
    std::vector<std::vector<bool>> keep(size_t(n) + 1);
    for (int d = 0; d <= n; ++d)
        keep[size_t(d)].assign(dn.cells[size_t(d)].size(), d < n);
    keep[size_t(n) - 1][size_t(dn.cells[size_t(n)][0].faces[size_t(k)].base)] = false;
    return subcomplex(dn, keep).ss;
}

// ---------------------------------------------------------------------------
// maps

Sx SimplicialMap::apply(const Sx& s) const {
    const Sx& t = image[size_t(s.base_dim())][size_t(s.base)];
    return {t.base, mono_compose(t.sigma, s.sigma)};
}

bool SimplicialMap::valid(std::string* err) const {
    auto fail = [&](const std::string& m) {
        if (err) *err = m;
        return false;
    };
    if (image.size() < src->cells.size()) return fail("missing dimensions");
    for (int d = 0; d < int(src->cells.size()); ++d) {
        if (image[size_t(d)].size() != src->cells[size_t(d)].size())
            return fail("missing cells in dimension " + std::to_string(d));
        for (int b = 0; b < int(src->cells[size_t(d)].size()); ++b) {
            const Sx& t = image[size_t(d)][size_t(b)];
            if (t.dim() != d || t.base_dim() >= int(tgt->cells.size()) ||
                t.base < 0 || t.base >= int(tgt->cells[size_t(t.base_dim())].size()))
                return fail("bad image simplex for " +
                            src->cells[size_t(d)][size_t(b)].name);
            if (d == 0) continue;
            Sx top{b, mono_identity(d)};
            for (int i = 0; i <= d; ++i)
                if (tgt->face(t, i) != apply(src->face(top, i)))
                    return fail("faces do not commute at " +
                                src->cells[size_t(d)][size_t(b)].name);
        }
    }
    return true;
}

SimplicialMap SimplicialMap::identity(const SimplicialSet& x) {
    SimplicialMap f;
    f.src = f.tgt = &x;
    f.image.resize(x.cells.size());
    for (int d = 0; d < int(x.cells.size()); ++d)
        for (int b = 0; b < int(x.cells[size_t(d)].size()); ++b)
            f.image[size_t(d)].push_back({b, mono_identity(d)});
    return f;
}

SimplicialMap SimplicialMap::then(const SimplicialMap& g) const {
    if (tgt != g.src) throw ContractViolation("composing incompatible maps");
    SimplicialMap h;
    h.src = src;
    h.tgt = g.tgt;
    h.image.resize(image.size());
    for (size_t d = 0; d < image.size(); ++d)
        for (const Sx& t : image[d]) h.image[d].push_back(g.apply(t));
    return h;
}

// ---------------------------------------------------------------------------
// products

Sx ProductSSet::from_components(const std::vector<Sx>& comps) const {
    int n = comps.at(0).dim();
    std::vector<bool> collapse(n > 0 ? size_t(n) : 0, false);
    for (int j = 0; j < n; ++j) {
        bool all = true;
        for (const Sx& c : comps)
            if (c.sigma[size_t(j)] != c.sigma[size_t(j) + 1]) {
                all = false;
                break;
            }
        collapse[size_t(j)] = all;
    }
    Monotone pi;
    int cur = 0;
    pi.push_back(0);
    for (int t = 1; t <= n; ++t) {
        if (!collapse[size_t(t) - 1]) ++cur;
        pi.push_back(cur);
    }
    std::vector<Sx> reduced;
    for (const Sx& c : comps) {
        Monotone r;
        for (int t = 0; t <= n; ++t)
            if (t == 0 || pi[size_t(t)] != pi[size_t(t) - 1])
                r.push_back(c.sigma[size_t(t)]);
        reduced.push_back({c.base, std::move(r)});
    }
    auto it = index_.find(reduced);
    if (it == index_.end())
        throw ContractViolation("product tuple outside the built range");
    return {it->second.second, pi};
}

std::vector<Sx> ProductSSet::components(const Sx& s) const {
    std::vector<Sx> out;
    for (const Sx& c : comp[size_t(s.base_dim())][size_t(s.base)])
        out.push_back({c.base, mono_compose(c.sigma, s.sigma)});
    return out;
}

SimplicialMap ProductSSet::projection(int factor) const {
    SimplicialMap f;
    f.src = &ss;
    f.tgt = factors[size_t(factor)];
    f.image.resize(ss.cells.size());
    for (size_t d = 0; d < ss.cells.size(); ++d)
        for (const auto& tuple : comp[d]) f.image[d].push_back(tuple[size_t(factor)]);
    return f;
}

ProductSSet product(const std::vector<const SimplicialSet*>& factors, int dim_bound) {
    if (factors.empty()) throw ContractViolation("product needs a factor");
    if (dim_bound < 0) {
        dim_bound = 0;
        for (const auto* f : factors) dim_bound += std::max(f->dim(), 0);
    }
    ProductSSet prod;
    prod.factors = factors;
    prod.ss.cells.resize(size_t(dim_bound) + 1);
    prod.comp.resize(size_t(dim_bound) + 1);
    for (int n = 0; n <= dim_bound; ++n) {
        std::vector<std::vector<Sx>> lists;
        bool any_empty = false;
        for (const auto* f : factors) {
            lists.push_back(f->simplices(n));
            any_empty = any_empty || lists.back().empty();
        }
        if (any_empty) continue;
        std::vector<size_t> idx(factors.size(), 0);
        while (true) {
            std::vector<Sx> tuple;
            for (size_t i = 0; i < factors.size(); ++i) tuple.push_back(lists[i][idx[i]]);
            bool nondeg = true;
            for (int j = 0; j + 1 <= n && nondeg; ++j) {
                bool all = true;
                for (const Sx& c : tuple)
                    if (c.sigma[size_t(j)] != c.sigma[size_t(j) + 1]) {
                        all = false;
                        break;
                    }
                if (all) nondeg = false;
            }
            if (nondeg) {
                std::string name = "(";
                for (size_t i = 0; i < tuple.size(); ++i) {
                    if (i) name += ',';
                    name += factors[i]->simplex_name(tuple[i]);
                }
                name += ')';
                prod.index_[tuple] = {n, int(prod.ss.cells[size_t(n)].size())};
                prod.comp[size_t(n)].push_back(tuple);
                prod.ss.cells[size_t(n)].push_back({std::move(name), {}});
            }
            size_t i = factors.size();
            while (i > 0) {
                --i;
                if (++idx[i] < lists[i].size()) break;
                idx[i] = 0;
                if (i == 0) goto done_level;
            }
        }
    done_level:;
    }
    for (int n = 1; n <= dim_bound; ++n) {
        for (int b = 0; b < int(prod.comp[size_t(n)].size()); ++b) {
            const auto& tuple = prod.comp[size_t(n)][size_t(b)];
            auto& cell = prod.ss.cells[size_t(n)][size_t(b)];
            for (int i = 0; i <= n; ++i) {
                std::vector<Sx> fcomps;
                for (size_t t = 0; t < tuple.size(); ++t)
                    fcomps.push_back(factors[t]->face(tuple[t], i));
                cell.faces.push_back(prod.from_components(fcomps));
            }
        }
    }
    while (!prod.ss.cells.empty() && prod.ss.cells.back().empty()) {
        prod.ss.cells.pop_back();
        prod.comp.pop_back();
    }
    return prod;
}

// ---------------------------------------------------------------------------
// map enumeration

namespace {

Sx apply_assign(const std::vector<std::vector<Sx>>& assign, const Sx& s) {
    const Sx& t = assign[size_t(s.base_dim())][size_t(s.base)];
    return {t.base, mono_compose(t.sigma, s.sigma)};
}

}  // namespace

void for_each_map(const SimplicialSet& a, const SimplicialSet& b,
                  const PartialAssign* partial,
                  const std::function<bool(const SimplicialMap&)>& visit) {
    int dims = int(a.cells.size());
    if (dims == 0 || a.cell_count() == 0) {
        SimplicialMap m;
        m.src = &a;
        m.tgt = &b;
        m.image.assign(size_t(std::max(dims, 0)), {});
        visit(m);
        return;
    }
    std::vector<std::vector<Sx>> cand(static_cast<size_t>(dims));
    for (int d = 0; d < dims; ++d)
        if (!a.cells[size_t(d)].empty()) cand[size_t(d)] = b.simplices(d);
    SimplicialMap m;
    m.src = &a;
    m.tgt = &b;
    m.image.resize(size_t(dims));
    for (int d = 0; d < dims; ++d) m.image[size_t(d)].resize(a.cells[size_t(d)].size());

    auto rec = [&](auto&& self, int d, int idx) -> bool {
        while (d < dims && idx >= int(a.cells[size_t(d)].size())) {
            ++d;
            idx = 0;
        }
        if (d >= dims) return visit(m);
        const std::optional<Sx>* pinned = nullptr;
        if (partial) pinned = &(*partial)[size_t(d)][size_t(idx)];
        for (const Sx& t : cand[size_t(d)]) {
            if (pinned && *pinned && !(**pinned == t)) continue;
            bool ok = true;
            if (d > 0) {
                Sx top{idx, mono_identity(d)};
                for (int i = 0; i <= d && ok; ++i)
                    ok = b.face(t, i) == apply_assign(m.image, a.face(top, i));
            }
            if (!ok) continue;
            m.image[size_t(d)][size_t(idx)] = t;
            if (self(self, d, idx + 1)) return true;
        }
        return false;
    };
    rec(rec, 0, 0);
}

std::vector<SimplicialMap> enumerate_maps(const SimplicialSet& a, const SimplicialSet& b,
                                          const PartialAssign* partial, long long limit) {
    std::vector<SimplicialMap> out;
    for_each_map(a, b, partial, [&](const SimplicialMap& m) {
        out.push_back(m);
        return limit >= 0 && int(out.size()) >= limit;
    });
    return out;
}

// ---------------------------------------------------------------------------
// mapping objects

namespace {

// m composed with 1 x theta, theta: [q] -> [p]
SimplicialMap mo_precompose(const MappingObject& mo, const SimplicialMap& m, int p,
                            int q, const Monotone& theta) {
    const ProductSSet& pq = mo.prods[size_t(q)];
    const ProductSSet& pp = mo.prods[size_t(p)];
    SimplicialMap out;
    out.src = &pq.ss;
    out.tgt = mo.x;
    out.image.resize(pq.ss.cells.size());
    for (size_t d = 0; d < pq.ss.cells.size(); ++d) {
        for (const auto& tuple : pq.comp[d]) {
            Monotone w = mono_compose(theta, delta_vertices(*pq.factors[1], tuple[1]));
            Sx t = pp.from_components({tuple[0], delta_simplex(p, w)});
            out.image[d].push_back(m.apply(t));
        }
    }
    return out;
}

}  // namespace

Sx MappingObject::classify(const SimplicialMap& m, int p) const {
    auto it = tables[size_t(p)].find(m.image);
    if (it == tables[size_t(p)].end())
        throw ContractViolation("map not recognized by the mapping object");
    return it->second;
}

SimplicialMap MappingObject::realize(const Sx& s, int p) const {
    if (s.nondeg()) return cell_maps[size_t(p)][size_t(s.base)];
    return mo_precompose(*this, cell_maps[size_t(s.base_dim())][size_t(s.base)],
                         s.base_dim(), p, s.sigma);
}

MappingObject mapping_object(const SimplicialSet& k, const SimplicialSet& x, int bound) {
    MappingObject mo;
    mo.k = &k;
    mo.x = &x;
    mo.bound = bound;
    mo.ss.cells.resize(size_t(bound) + 1);
    mo.cell_maps.resize(size_t(bound) + 1);
    mo.tables.resize(size_t(bound) + 1);
    mo.deltas.reserve(size_t(bound) + 1);
    mo.prods.reserve(size_t(bound) + 1);
    for (int p = 0; p <= bound; ++p)
        mo.deltas.push_back(SimplicialSet::standard_simplex(p));
    for (int p = 0; p <= bound; ++p)
        mo.prods.push_back(product({&k, &mo.deltas[size_t(p)]}));
    for (int p = 0; p <= bound; ++p) {
        auto maps = enumerate_maps(mo.prods[size_t(p)].ss, x);
        for (const auto& m : maps) {
            Sx nf;
            bool degen = false;
            for (int j = 0; j < p && !degen; ++j) {
                Monotone collapse = mono_compose(mono_delta(j, p), mono_sigma(j, p - 1));
                auto mj = mo_precompose(mo, m, p, p, collapse);
                if (mj.image == m.image) {
                    auto dj = mo_precompose(mo, m, p, p - 1, mono_delta(j, p));
                    nf = SimplicialSet::degeneracy(
                        mo.tables[size_t(p) - 1].at(dj.image), j);
                    degen = true;
                }
            }
            if (!degen) {
                int idx = int(mo.ss.cells[size_t(p)].size());
                SimplicialSet::Cell cell{"m" + std::to_string(p) + "_" +
                                             std::to_string(idx),
                                         {}};
                for (int i = 0; i <= p && p > 0; ++i) {
                    auto di = mo_precompose(mo, m, p, p - 1, mono_delta(i, p));
                    cell.faces.push_back(mo.tables[size_t(p) - 1].at(di.image));
                }
                mo.ss.cells[size_t(p)].push_back(std::move(cell));
                mo.cell_maps[size_t(p)].push_back(m);
                nf = {idx, mono_identity(p)};
            }
            mo.tables[size_t(p)][m.image] = nf;
        }
    }
    return mo;
}

SimplicialMap mapping_object_precompose(const MappingObject& from_l,
                                        const MappingObject& from_k,
                                        const SimplicialMap& i) {
    if (from_k.bound < from_l.bound)
        throw ContractViolation("target mapping object built too shallow");
    SimplicialMap out;
    out.src = &from_l.ss;
    out.tgt = &from_k.ss;
    out.image.resize(from_l.ss.cells.size());
    for (int p = 0; p < int(from_l.ss.cells.size()); ++p) {
        for (const auto& m : from_l.cell_maps[size_t(p)]) {
            const ProductSSet& pk = from_k.prods[size_t(p)];
            const ProductSSet& pl = from_l.prods[size_t(p)];
            SimplicialMap comp;
            comp.src = &pk.ss;
            comp.tgt = from_l.x;
            comp.image.resize(pk.ss.cells.size());
            for (size_t d = 0; d < pk.ss.cells.size(); ++d)
                for (const auto& tuple : pk.comp[d]) {
                    Sx t = pl.from_components({i.apply(tuple[0]), tuple[1]});
                    comp.image[d].push_back(m.apply(t));
                }
            out.image[size_t(p)].push_back(from_k.classify(comp, p));
        }
    }
    return out;
}

SimplicialMap mapping_object_postcompose(const MappingObject& from_x,
                                         const MappingObject& from_y,
                                         const SimplicialMap& g) {
    if (from_y.bound < from_x.bound)
        throw ContractViolation("target mapping object built too shallow");
    SimplicialMap out;
    out.src = &from_x.ss;
    out.tgt = &from_y.ss;
    out.image.resize(from_x.ss.cells.size());
    for (int p = 0; p < int(from_x.ss.cells.size()); ++p) {
        for (const auto& m : from_x.cell_maps[size_t(p)]) {
            SimplicialMap comp = m;
            comp.tgt = from_y.x;
            comp.src = &from_y.prods[size_t(p)].ss;
            for (auto& lvl : comp.image)
                for (auto& t : lvl) t = g.apply(t);
            out.image[size_t(p)].push_back(from_y.classify(comp, p));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kan conditions

KanVerdict is_kan_fibration(const SimplicialMap& f, int horn_bound) {
    KanVerdict v;
    if (horn_bound < 0)
        horn_bound = std::min(3, std::max({f.src->dim(), f.tgt->dim(), 1}) + 1);
    v.bound = horn_bound;
    for (int n = 1; n <= horn_bound; ++n) {
        auto dn = SimplicialSet::standard_simplex(n);
        // every candidate filler, with its faces and its image downstairs
        std::vector<Sx> zs = f.src->simplices(n);
        std::vector<std::vector<Sx>> zface(zs.size());
        std::vector<Sx> zimg(zs.size());
        for (size_t z = 0; z < zs.size(); ++z) {
            for (int i = 0; i <= n; ++i) zface[z].push_back(f.src->face(zs[z], i));
            zimg[z] = f.apply(zs[z]);
        }
        const auto& topfaces = dn.cells[size_t(n)][0].faces;
        for (int k = 0; k <= n; ++k) {
            // a lift of a horn map exists iff some filler matches the horn's
            // face images (all but the k-th) and the prescribed image downstairs
            std::set<std::vector<Sx>> index;
            for (size_t z = 0; z < zs.size(); ++z) {
                std::vector<Sx> key;
                for (int i = 0; i <= n; ++i)
                    if (i != k) key.push_back(zface[z][size_t(i)]);
                key.push_back(zimg[z]);
                index.insert(std::move(key));
            }
            std::vector<std::vector<bool>> keep(size_t(n) + 1);
            for (int d = 0; d <= n; ++d)
                keep[size_t(d)].assign(dn.cells[size_t(d)].size(), d < n);
            keep[size_t(n) - 1][size_t(topfaces[size_t(k)].base)] = false;
            auto horn = subcomplex(dn, keep);
            for_each_map(horn.ss, *f.src, nullptr, [&](const SimplicialMap& u) {
                // pin the horn cells inside Delta[n]
                PartialAssign pin_y(dn.cells.size());
                for (int d = 0; d <= n; ++d)
                    pin_y[size_t(d)].resize(dn.cells[size_t(d)].size());
                for (int d = 0; d < int(horn.ss.cells.size()); ++d)
                    for (int b = 0; b < int(horn.ss.cells[size_t(d)].size()); ++b) {
                        Sx amb = horn.inclusion.image[size_t(d)][size_t(b)];
                        pin_y[size_t(d)][size_t(amb.base)] =
                            f.apply(u.image[size_t(d)][size_t(b)]);
                    }
                auto fills_y = enumerate_maps(dn, *f.tgt, &pin_y);
                if (fills_y.empty()) return false;
                std::vector<Sx> key;
                for (int i = 0; i <= n; ++i) {
                    if (i == k) continue;
                    int sub = horn.back[size_t(n) - 1][size_t(topfaces[size_t(i)].base)];
                    key.push_back(u.image[size_t(n) - 1][size_t(sub)]);
                }
                key.push_back(Sx{});
                for (const auto& fill : fills_y) {
                    key.back() = fill.image[size_t(n)][0];
                    if (!index.count(key)) {
                        v.pass = false;
                        v.witness = "horn (" + std::to_string(n) + "," +
                                    std::to_string(k) + ") with no lift";
                        return true;
                    }
                }
                return false;
            });
            if (!v.pass) return v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// homology

IntMatrix boundary_matrix(const SimplicialSet& x, int n) {
    int rows = (n - 1 >= 0 && n - 1 < int(x.cells.size()))
                   ? int(x.cells[size_t(n) - 1].size())
                   : 0;
    int cols = (n >= 0 && n < int(x.cells.size())) ? int(x.cells[size_t(n)].size()) : 0;
    IntMatrix d(rows, cols);
    if (n < 1) return d;
    for (int b = 0; b < cols; ++b)
        for (int i = 0; i <= n; ++i) {
            const Sx& f = x.cells[size_t(n)][size_t(b)].faces[size_t(i)];
            if (!f.nondeg()) continue;
            d.at(f.base, b) += (i % 2 == 0) ? 1 : -1;
        }
    return d;
}

std::vector<GroupInvariants> homology(const SimplicialSet& x) {
    std::vector<GroupInvariants> out;
    for (int d = 0; d <= x.dim(); ++d)
        out.push_back(integer_homology(boundary_matrix(x, d), boundary_matrix(x, d + 1)));
    return out;
}

int path_components(const SimplicialSet& x, std::vector<int>* label) {
    int n0 = x.cells.empty() ? 0 : int(x.cells[0].size());
    std::vector<int> parent(static_cast<size_t>(n0));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[size_t(a)] != a) a = parent[size_t(a)] = parent[size_t(parent[size_t(a)])];
        return a;
    };
    if (x.cells.size() > 1)
        for (const auto& e : x.cells[1]) {
            int a = find(e.faces[0].base), b = find(e.faces[1].base);
            if (a != b) parent[size_t(std::max(a, b))] = std::min(a, b);
        }
    std::map<int, int> roots;
    std::vector<int> lab(static_cast<size_t>(n0));
    for (int v = 0; v < n0; ++v) {
        int r = find(v);
        auto [it, fresh] = roots.try_emplace(r, int(roots.size()));
        lab[size_t(v)] = it->second;
    }
    if (label) *label = lab;
    return int(roots.size());
}

ProxyVerdict weak_equivalence_proxy(const SimplicialMap& f) {
    ProxyVerdict v;
    std::vector<int> la, lb;
    int ca = path_components(*f.src, &la);
    int cb = path_components(*f.tgt, &lb);
    if (ca != cb) {
        v.detail = "component counts differ";
        return v;
    }
    std::vector<int> seen(size_t(cb), -1);
    for (int a = 0; a < int(la.size()); ++a) {
        int img = lb[size_t(f.image[0][size_t(a)].base)];
        int& s = seen[size_t(img)];
        if (s >= 0 && s != la[size_t(a)]) {
            v.detail = "components merge under the map";
            return v;
        }
        s = la[size_t(a)];
    }
    for (int c = 0; c < cb; ++c)
        if (seen[size_t(c)] < 0) {
            v.detail = "a component is missed";
            return v;
        }
    int top = std::max(f.src->dim(), f.tgt->dim());
    for (int d = 0; d <= top; ++d) {
        auto ha = integer_homology(boundary_matrix(*f.src, d), boundary_matrix(*f.src, d + 1));
        auto hb = integer_homology(boundary_matrix(*f.tgt, d), boundary_matrix(*f.tgt, d + 1));
        if (!(ha == hb)) {
            v.detail = "homology differs in degree " + std::to_string(d);
            return v;
        }
        // surjectivity of the induced map onto H_d of the target
        int na = (d < int(f.src->cells.size())) ? int(f.src->cells[size_t(d)].size()) : 0;
        int nb = (d < int(f.tgt->cells.size())) ? int(f.tgt->cells[size_t(d)].size()) : 0;
        IntMatrix fm(nb, na);
        for (int b = 0; b < na; ++b) {
            const Sx& t = f.image[size_t(d)][size_t(b)];
            if (t.nondeg()) fm.at(t.base, b) += 1;
        }
        IntMatrix ka = int_kernel_basis(boundary_matrix(*f.src, d));
        IntMatrix din_b = boundary_matrix(*f.tgt, d + 1);
        // columns generating f(ker) + im(d), a sublattice of ker(d) in the
        // target; it is all of that kernel iff its rank is the full nullity
        // and its elementary divisors are all 1 (the kernel is a pure
        // submodule, so divisors agree whether computed there or ambiently)
        IntMatrix gen(nb, ka.cols() + din_b.cols());
        IntMatrix fk = fm * ka;
        for (int j = 0; j < ka.cols(); ++j)
            for (int r = 0; r < nb; ++r) gen.at(r, j) = fk.at(r, j);
        for (int j = 0; j < din_b.cols(); ++j)
            for (int r = 0; r < nb; ++r) gen.at(r, ka.cols() + j) = din_b.at(r, j);
        auto gr = rank_and_divisors(gen);
        int nullity_b = nb - rank_and_divisors(boundary_matrix(*f.tgt, d)).first;
        bool onto = gr.first == nullity_b;
        for (const auto& dv : gr.second)
            if (dv != 1) onto = false;
        if (!onto) {
            v.detail = "induced map not surjective on homology in degree " +
                       std::to_string(d);
            return v;
        }
    }
    v.pass = true;
    v.detail = "pi0 bijection and homology isomorphism in all degrees";
    return v;
}

// ---------------------------------------------------------------------------
// enrichment axioms (checked on a finite corpus, documented as such)

EnrichmentReport check_enrichment_axioms(const std::vector<const SimplicialSet*>& corpus) {
    EnrichmentReport rep;
    auto pt = SimplicialSet::standard_simplex(0);
    auto empty = SimplicialSet::empty_set();
    for (const auto* c : corpus) {
        int bound = std::max(1, c->dim());
        // Map(X, point) is a point
        auto to_pt = mapping_object(*c, pt, bound);
        rep.add("Map(X,*) singular",
                to_pt.ss.cell_count() == 1 && to_pt.ss.dim() == 0);
        // Map(empty, X) is a point
        auto from_empty = mapping_object(empty, *c, bound);
        rep.add("Map(0,X) singular", from_empty.ss.cell_count() == 1 &&
                                          from_empty.ss.dim() == 0);
        // evaluation at the 0-level recovers the maps X -> X at least for id
        auto self0 = mapping_object(pt, *c, bound);
        rep.add("Map(*,X) vertices = vertices",
                self0.ss.cells.empty() ||
                    self0.ss.cells[0].size() ==
                        (c->cells.empty() ? 0 : c->cells[0].size()));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// nerve

SimplicialSet nerve(const FiniteCategory& k,
                    std::vector<std::vector<Chain>>* chains_out) {
    auto cert = loop_free_certificate(k);
    if (!cert.loop_free)
        throw ContractViolation("nerve requires a loop-free category");
    SimplicialSet x;
    std::vector<std::vector<Chain>> levels;
    std::vector<std::map<Chain, int>> index;
    for (int p = 0;; ++p) {
        std::vector<Chain> here;
        for (const auto& ch : enumerate_chains(k, p))
            if (!chain_has_identity(ch, k)) here.push_back(ch);
        if (here.empty() && p > 0) break;
        index.emplace_back();
        x.cells.emplace_back();
        for (const auto& ch : here) {
            index.back()[ch] = int(x.cells.back().size());
            std::string name;
            if (p == 0) {
                name = k.objects[size_t(ch.object)];
            } else {
                for (size_t i = 0; i < ch.mors.size(); ++i) {
                    if (i) name += '|';
                    name += k.morphisms[size_t(ch.mors[i])].name;
                }
            }
            SimplicialSet::Cell cell{name, {}};
            for (int i = 0; i <= p && p > 0; ++i) {
                Chain f = chain_face(k, ch, i);
                cell.faces.push_back({index[size_t(p) - 1].at(f),
                                      mono_identity(p - 1)});
            }
            x.cells.back().push_back(std::move(cell));
        }
        levels.push_back(std::move(here));
    }
    if (chains_out) *chains_out = levels;
    return x;
}

}  // namespace hoend
