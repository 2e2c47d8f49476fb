#pragma once

// Ends of finite diagrams, the chain-indexed cosimplicial replacements
// (one skeleton, three flavors), Tot with truncation and a runtime
// stabilization certificate, and cosimplicial matching objects with
// the Reedy fibration check.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hoend/fincat.hpp"
#include "hoend/simpset.hpp"

namespace hoend {

// ---------------------------------------------------------------------------
// diagrams

// F: K^op x K -> FinSet.  Sets are {0..size-1}; left[u][b] is the
// contravariant action F(dst u, b) -> F(src u, b), right[u][a] the
// covariant one F(a, src u) -> F(a, dst u).
struct SetBifunctor {
    const FiniteCategory* k = nullptr;
    std::vector<std::vector<int>> size;
    std::vector<std::vector<std::vector<int>>> left;
    std::vector<std::vector<std::vector<int>>> right;
    void validate() const;  // functoriality + bifunctor squares
};

// covariant finite-set diagram over an arbitrary finite shape
struct SetDiagram {
    const FiniteCategory* shape = nullptr;
    std::vector<int> size;                    // per object
    std::vector<std::vector<int>> action;     // per morphism
    void validate() const;
};

// covariant simplicial-set diagram
struct SSetDiagram {
    const FiniteCategory* shape = nullptr;
    std::vector<SimplicialSet> value;
    std::vector<SimplicialMap> action;
    void validate() const;
};

// restriction of a bifunctor along Sd K -> K^op x K, (A -> B) => (A, B)
SetDiagram over_subdivision(const SetBifunctor& f, const FiniteCategory& sd);

// ---------------------------------------------------------------------------
// ends

struct SetEnd {
    std::vector<std::vector<int>> families;  // each: one element per object
    bool legs_compatible = false;
};
SetEnd end_of(const SetBifunctor& f);
bool end_equals_equalizer(const SetBifunctor& f);

// F: K^op x K -> SSet, values/action indexed like SetBifunctor
struct SSetBifunctor {
    const FiniteCategory* k = nullptr;
    std::vector<std::vector<SimplicialSet>> value;
    std::vector<std::vector<SimplicialMap>> left;
    std::vector<std::vector<SimplicialMap>> right;
};
// computed degreewise as ends of finite sets
SimplicialSet end_of_sset(const SSetBifunctor& f, int dim_bound);

// ---------------------------------------------------------------------------
// the simplex category over K, truncated

struct DeltaCat {
    FiniteCategory cat;
    std::vector<Chain> chain_of;      // object -> chain
    std::vector<Monotone> theta_of;   // morphism -> monotone map
    int depth = 0;
    int object_of(const Chain& c) const;
    int find_morphism(int src_obj, int dst_obj, const Monotone& theta) const;
};
DeltaCat delta_over_category(const FiniteCategory& k, int depth);

// ---------------------------------------------------------------------------
// cosimplicial replacement

enum class Flavor { hom_end, natural_system, delta_over_k };

// Chain-indexed skeleton shared by all flavors: which diagram object
// sits at each chain, and the componentwise coface/codegeneracy wiring.
struct CompSpec {
    int src = -1;  // component index at the source level
    int mor = -1;  // shape morphism applied to it
};
struct CoSpec {
    int n = 0;
    Flavor flavor = Flavor::natural_system;
    std::vector<std::vector<Chain>> chains;               // chains[p]
    std::vector<std::vector<int>> factor_obj;             // [p][chain]
    std::vector<std::vector<std::vector<CompSpec>>> coface;  // [p][i][c@p+1]
    std::vector<std::vector<std::vector<CompSpec>>> codeg;   // [p][j][c@p]
};
// Sd-flavors need sd = subdivision_category(k); delta flavor needs dk.
CoSpec cosimplicial_spec(const FiniteCategory& k, Flavor flavor, int n,
                         const FiniteCategory* sd, const DeltaCat* dk);

// finite-set universe, levels materialized as tuple spaces
struct CosimplicialSets {
    int n = 0;
    std::vector<std::vector<long long>> factor_size;
    std::vector<long long> size;                              // |X^p|
    std::vector<std::vector<std::vector<long long>>> coface;  // [p][i]: X^p->X^{p+1}
    std::vector<std::vector<std::vector<long long>>> codeg;   // [p][j]: X^{p+1}->X^p
    void validate() const;  // cosimplicial identities on stored levels
};
CosimplicialSets cosimplicial_replacement(const SetDiagram& f, const CoSpec& spec);

// simplicial-set universe, levels kept as formal products of factors
struct FormalCoSSet {
    const SSetDiagram* f = nullptr;
    CoSpec spec;
    const SimplicialSet& factor(int p, int c) const {
        return f->value[size_t(spec.factor_obj[size_t(p)][size_t(c)])];
    }
};
FormalCoSSet formal_replacement(const SSetDiagram& f, CoSpec spec);

// ---------------------------------------------------------------------------
// Tot

// a q-simplex of Tot_s: per level p <= s, per component c, the cell
// images of a map Delta[p] x Delta[q] -> factor(p, c)
using MapImages = std::vector<std::vector<Sx>>;
using TotFamily = std::vector<std::vector<MapImages>>;

struct TotResult {
    SimplicialSet ss;
    bool stabilized = false;
    int stage = 0;
    int out_dim = 0;
    std::vector<std::vector<TotFamily>> cell_families;  // per dim, per cell
    // normal form of every family (degenerate simplices included), per dim
    std::vector<std::map<TotFamily, Sx>> lookup;
};
TotResult tot(const FormalCoSSet& x, int stage, int out_dim);

// ---------------------------------------------------------------------------
// matching objects and the Reedy condition (materialized levels)

struct CosimplicialSSet {
    int n = 0;
    std::vector<SimplicialSet> level;
    std::vector<std::vector<SimplicialMap>> coface;  // [p][i]: level p -> p+1
    std::vector<std::vector<SimplicialMap>> codeg;   // [p][j]: level p+1 -> p
    void validate() const;
};
CosimplicialSSet constant_cosimplicial(const SimplicialSet& x, int n);

struct MatchingObject {
    SimplicialSet ss;  // convention: M^0 = terminal (empty limit)
    std::vector<std::vector<std::vector<Sx>>> tuples;  // per dim, per cell
    SimplicialMap comparison;                          // X^p -> M^p
};
MatchingObject matching_object(const CosimplicialSSet& x, int p);

struct CosimplicialMap {
    const CosimplicialSSet* src = nullptr;
    const CosimplicialSSet* tgt = nullptr;
    std::vector<SimplicialMap> level;
};
struct ReedyVerdict {
    bool pass = true;
    int failed_level = -1;
    std::string witness;
};
ReedyVerdict is_reedy_fibration(const CosimplicialMap& f, int horn_bound = -1);

}  // namespace hoend
