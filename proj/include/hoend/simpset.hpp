#pragma once

// Finite simplicial sets via nondegenerate simplices and explicit face
// maps.  Degenerate simplices are handled symbolically: every simplex
// is a pair (nondegenerate cell, monotone surjection), the Eilenberg-
// Zilber normal form.  On top of that: standard simplices, horns,
// products, mapping objects Map(K,X), Kan-fibration checking by horn
// enumeration, homology, and the documented weak-equivalence proxy.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hoend/exactalg.hpp"
#include "hoend/fincat.hpp"

namespace hoend {

// Monotone maps [q] -> [n] as value vectors of length q+1.
using Monotone = std::vector<int>;

Monotone mono_identity(int n);
Monotone mono_delta(int i, int n);   // [n-1] -> [n] skipping i
Monotone mono_sigma(int j, int n);   // [n+1] -> [n] repeating j
Monotone mono_compose(const Monotone& outer, const Monotone& inner);
bool mono_is_identity(const Monotone& m);
// tau = eta ∘ pi with pi surjective and eta injective.
void epi_mono_factor(const Monotone& tau, Monotone& eta, Monotone& pi);
// All monotone surjections [n] ->> [m].
std::vector<Monotone> all_surjections(int n, int m);

// A simplex in normal form: nondegenerate cell index plus surjection.
// The cell's dimension is sigma.back(), the simplex dimension is
// sigma.size()-1; the simplex is nondegenerate iff they agree.
struct Sx {
    int base = -1;
    Monotone sigma;
    int dim() const { return int(sigma.size()) - 1; }
    int base_dim() const { return sigma.back(); }
    bool nondeg() const { return base_dim() == dim(); }
    auto operator<=>(const Sx&) const = default;
};

struct SimplicialSet {
    struct Cell {
        std::string name;
        std::vector<Sx> faces;  // size dim+1 (empty in dimension 0)
    };
    std::vector<std::vector<Cell>> cells;  // cells[d]

    int dim() const;  // largest d with a nondegenerate cell, -1 if empty
    size_t cell_count() const;
    bool empty() const { return cell_count() == 0; }
    const Cell& cell(const Sx& s) const { return cells[s.base_dim()][s.base]; }
    std::string simplex_name(const Sx& s) const;

    Sx face(const Sx& s, int i) const;
    static Sx degeneracy(const Sx& s, int j);
    // Action of an arbitrary monotone theta: [q] -> [dim s].
    Sx act(const Sx& s, const Monotone& theta) const;

    std::vector<Sx> simplices(int n) const;  // all n-simplices, degenerate included
    int find_cell(int d, const std::string& name) const;

    // simplicial identities + closure, throws on violation
    void validate() const;

    static SimplicialSet empty_set();
    static SimplicialSet discrete(const std::vector<std::string>& points);
    static SimplicialSet standard_simplex(int n);
    static SimplicialSet boundary(int n);
    static SimplicialSet horn(int n, int k);
};

// The simplex of Delta[p] given by a monotone map [n] -> [p], and back.
Sx delta_simplex(int p, const Monotone& v);
Monotone delta_vertices(const SimplicialSet& delta_p, const Sx& s);

struct SimplicialMap {
    const SimplicialSet* src = nullptr;
    const SimplicialSet* tgt = nullptr;
    std::vector<std::vector<Sx>> image;  // image[d][cell]

    Sx apply(const Sx& s) const;
    bool valid(std::string* err = nullptr) const;
    bool operator==(const SimplicialMap& o) const { return image == o.image; }

    static SimplicialMap identity(const SimplicialSet& x);
    SimplicialMap then(const SimplicialMap& g) const;  // this followed by g
};

// Sub-simplicial-set spanned by the kept cells (must be face closed).
struct Subcomplex {
    SimplicialSet ss;
    SimplicialMap inclusion;            // ss -> ambient
    std::vector<std::vector<int>> back; // ambient cell -> sub cell or -1
};
Subcomplex subcomplex(const SimplicialSet& ambient,
                      const std::vector<std::vector<bool>>& keep);

// Degreewise product with componentwise structure maps; nondegenerate
// simplices are the jointly nondegenerate tuples (shuffles).
struct ProductSSet {
    SimplicialSet ss;
    std::vector<const SimplicialSet*> factors;
    std::vector<std::vector<std::vector<Sx>>> comp;  // comp[d][cell][factor]

    Sx from_components(const std::vector<Sx>& comps) const;
    std::vector<Sx> components(const Sx& s) const;
    SimplicialMap projection(int factor) const;

private:
    std::map<std::vector<Sx>, std::pair<int, int>> index_;
    friend ProductSSet product(const std::vector<const SimplicialSet*>&, int);
};
ProductSSet product(const std::vector<const SimplicialSet*>& factors,
                    int dim_bound = -1);  // -1: sum of factor dimensions

// Map enumeration A -> B, deterministic order, optional partial
// assignment (constraints per nondegenerate cell) and result limit.
using PartialAssign = std::vector<std::vector<std::optional<Sx>>>;
std::vector<SimplicialMap> enumerate_maps(const SimplicialSet& a, const SimplicialSet& b,
                                          const PartialAssign* partial = nullptr,
                                          long long limit = -1);
// Same enumeration order, one map at a time without storing them all;
// the visitor returns true to stop early.
void for_each_map(const SimplicialSet& a, const SimplicialSet& b,
                  const PartialAssign* partial,
                  const std::function<bool(const SimplicialMap&)>& visit);

// Map(K, X): p-simplices are simplicial maps K x Delta[p] -> X.
struct MappingObject {
    SimplicialSet ss;
    const SimplicialSet* k = nullptr;
    const SimplicialSet* x = nullptr;
    int bound = 0;  // built for p = 0..bound
    // underlying map K x Delta[p] -> X for each nondegenerate cell
    std::vector<std::vector<SimplicialMap>> cell_maps;
    std::vector<SimplicialSet> deltas;
    std::vector<ProductSSet> prods;  // K x Delta[p] for each p <= bound
    // normal form of every map K x Delta[p] -> X, keyed by its images
    std::vector<std::map<std::vector<std::vector<Sx>>, Sx>> tables;

    // Normal form of an arbitrary map K x Delta[p] -> X, p <= bound.
    Sx classify(const SimplicialMap& m, int p) const;
    // The map underlying any simplex (degenerate allowed).
    SimplicialMap realize(const Sx& s, int p) const;
};
MappingObject mapping_object(const SimplicialSet& k, const SimplicialSet& x, int bound);

// Induced map Map(L,C) -> Map(K,C) along i: K -> L (contravariance).
SimplicialMap mapping_object_precompose(const MappingObject& from_l,
                                        const MappingObject& from_k,
                                        const SimplicialMap& i);
// Induced map Map(K,X) -> Map(K,Y) along g: X -> Y.
SimplicialMap mapping_object_postcompose(const MappingObject& from_x,
                                         const MappingObject& from_y,
                                         const SimplicialMap& g);

struct KanVerdict {
    bool pass = true;
    int bound = 0;
    std::string witness;  // description of a failing lifting problem
};
KanVerdict is_kan_fibration(const SimplicialMap& f, int horn_bound = -1);

// Homology of the normalized chain complex.
std::vector<GroupInvariants> homology(const SimplicialSet& x);
// Boundary matrix C_n -> C_{n-1} of the normalized complex.
IntMatrix boundary_matrix(const SimplicialSet& x, int n);

int path_components(const SimplicialSet& x, std::vector<int>* label = nullptr);

struct ProxyVerdict {
    bool pass = false;
    std::string label = "proxy";
    std::string detail;
};
// pi0 bijection + isomorphism on integral homology in all degrees.
ProxyVerdict weak_equivalence_proxy(const SimplicialMap& f);

struct EnrichmentReport {
    bool all_pass = true;
    std::vector<std::pair<std::string, bool>> checks;
    void add(const std::string& what, bool ok) {
        checks.emplace_back(what, ok);
        all_pass = all_pass && ok;
    }
};
EnrichmentReport check_enrichment_axioms(const std::vector<const SimplicialSet*>& corpus);

// Builds a simplicial set in normal form out of level-wise element
// lists with a right action of monotone maps: elements(q) lists the
// q-simplices, act(e, q, theta) is e.theta for theta: [q'] -> [q].
// Optionally reports which element each nondegenerate cell came from.
template <class Elem>
SimplicialSet sset_from_functor(
    int bound, const std::function<std::vector<Elem>(int)>& elements,
    const std::function<Elem(const Elem&, int, const Monotone&)>& act,
    std::vector<std::vector<Elem>>* cell_elems = nullptr,
    const std::function<std::string(int, int)>& namer = nullptr,
    std::vector<std::map<Elem, Sx>>* table_out = nullptr) {
    SimplicialSet x;
    x.cells.resize(size_t(bound) + 1);
    std::vector<std::map<Elem, Sx>> table(size_t(bound) + 1);
    if (cell_elems) cell_elems->assign(size_t(bound) + 1, {});
    for (int q = 0; q <= bound; ++q) {
        for (const Elem& e : elements(q)) {
            Sx nf;
            bool degen = false;
            for (int j = 0; j < q && !degen; ++j) {
                Monotone collapse =
                    mono_compose(mono_delta(j, q), mono_sigma(j, q - 1));
                if (act(e, q, collapse) == e) {
                    nf = SimplicialSet::degeneracy(
                        table[size_t(q) - 1].at(act(e, q, mono_delta(j, q))), j);
                    degen = true;
                }
            }
            if (!degen) {
                int idx = int(x.cells[size_t(q)].size());
                SimplicialSet::Cell cell{
                    namer ? namer(q, idx)
                          : "c" + std::to_string(q) + "_" + std::to_string(idx),
                    {}};
                for (int i = 0; i <= q && q > 0; ++i)
                    cell.faces.push_back(
                        table[size_t(q) - 1].at(act(e, q, mono_delta(i, q))));
                x.cells[size_t(q)].push_back(std::move(cell));
                if (cell_elems) (*cell_elems)[size_t(q)].push_back(e);
                nf = {idx, mono_identity(q)};
            }
            table[size_t(q)][e] = nf;
        }
    }
    if (table_out) *table_out = std::move(table);
    return x;
}

// Nerve of a loop-free category: nondegenerate p-cells are the
// identity-free length-p chains.  Optionally reports which chain each
// cell came from.
SimplicialSet nerve(const FiniteCategory& k,
                    std::vector<std::vector<Chain>>* chains_out = nullptr);

}  // namespace hoend
