#pragma once

// The homotopy-limit tower over a finite loop-free shape: the homotopy
// end of a bifunctor, the Baues-Wirsching holim of a natural system,
// the chain-indexed holim over the simplex category of K, and the
// classical homotopy limit of a covariant diagram.  All four are Tot of
// one shared cosimplicial skeleton, so the pairwise compatibilities are
// literal equalities of the computed simplicial sets; independent
// cross-checks (the end formula over Delta/K, the nerve-weighted end,
// the kernel formula) are computed separately and certified.

#include <map>
#include <string>
#include <vector>

#include "hoend/chmodel.hpp"
#include "hoend/ends.hpp"
#include "hoend/fincat.hpp"
#include "hoend/simpset.hpp"

namespace hoend {

// ---------------------------------------------------------------------------
// diagram plumbing

// re-aim action endpoints at the diagram's own value slots (needed
// after copying a diagram; moves keep the endpoints valid)
void rebind_diagram(SSetDiagram& d);

// restriction of a simplicial bifunctor along Sd K -> K^op x K
SSetDiagram sset_over_subdivision(const SSetBifunctor& f, const FiniteCategory& sd);

// d composed with phi: value[x] = d(phi x); phi maps into d's shape
SSetDiagram restrict_diagram(const SSetDiagram& d, const Functor& phi);

// Sd(phi): Sd L -> Sd K for phi: L -> K
Functor sd_functor(const Functor& phi, const FiniteCategory& sdl, const FiniteCategory& sdk);

// the natural system of a covariant diagram: value at (g: X -> Y) is
// d(Y), a factorization morphism (a, b) acts through d(b)
SSetDiagram natural_system_of(const SSetDiagram& d, const FiniteCategory& sd);

// ---------------------------------------------------------------------------
// the tower

enum class HolimFlavor { ho_end, bw, t, bk };

struct HolimRequest {
    HolimFlavor flavor = HolimFlavor::bw;
    int stage = 2;
    int out_dim = 1;
};

// Tot of the hom-end replacement of F: K^op x K -> SSet.
// Throws if the stabilization certificate fails at the given stage.
TotResult homotopy_end(const SSetBifunctor& d, const FiniteCategory& sd, int stage,
                       int out_dim);

// Tot of the natural-system replacement of F: Sd K -> SSet.
TotResult holim_bw(const SSetDiagram& f, const FiniteCategory& k,
                   const FiniteCategory& sd, int stage, int out_dim);

// Tot of the chain-indexed replacement of F: Delta/K -> SSet, supplied
// degreewise up to the declared depth of dk; requests that would need
// chains beyond that depth are refused.  The end formula over Delta/K
// is computed independently and certified degreewise.
struct HolimT {
    TotResult tot;
    SimplicialSet end_form;  // the end of Map(Delta[#K], F K) over Delta/K
};
HolimT holim_t(const SSetDiagram& f, const FiniteCategory& k, const DeltaCat& dk,
               int stage, int out_dim);

// nerve of the over category C/x (objects: morphisms into x)
SimplicialSet over_nerve(const FiniteCategory& c, int x);

// Homotopy limit of a covariant diagram, computed two ways: as the Tot
// of the induced natural system and as the nerve-weighted end
// int_x Map(N(C/x), d x).  Degreewise disagreement throws (bug sentinel).
struct BkHolim {
    TotResult tot;
    SimplicialSet end_route;
    CoSpec spec;
};
BkHolim bk_holim(const SSetDiagram& d, int stage, int out_dim);

// ---------------------------------------------------------------------------
// functoriality

// The projection-induced map between two Tots whose level-p factors are
// indexed by chains of shapeK resp. shapeL, with the L-diagram the
// restriction of the K-diagram along phi: L -> K.
SimplicialMap tot_projection(const TotResult& tk, const CoSpec& speck,
                             const TotResult& tl, const CoSpec& specl,
                             const Functor& phi);

struct ComparisonCell {
    TotResult source, target;
    CoSpec source_spec, target_spec;
    std::vector<std::vector<Sx>> image;  // source cell -> target simplex
    SimplicialMap as_map() const;        // pointers into this cell
};

// natural-system flavor: F over Sd K restricted along Sd(phi)
ComparisonCell functoriality_cell(const Functor& phi, const SSetDiagram& f,
                                  const FiniteCategory& k, const FiniteCategory& sdk,
                                  const FiniteCategory& l, const FiniteCategory& sdl,
                                  int stage, int out_dim);

// covariant flavor: holim of d over C restricted along phi: L -> C
ComparisonCell holim_cell(const Functor& phi, const SSetDiagram& d,
                          const FiniteCategory& l, int stage, int out_dim);

// evaluation of a covariant holim at an object: the level-0 component
SimplicialMap holim_evaluation(const BkHolim& h, const SSetDiagram& d, int obj);

// map of Tots induced by a pointwise natural transformation eta (one
// simplicial map per object of the shared shape)
SimplicialMap tot_postcompose(const TotResult& tf, const CoSpec& spec,
                              const TotResult& tg,
                              const std::vector<SimplicialMap>& eta);

// ---------------------------------------------------------------------------
// the kernel formula

// holim^BW(F) against the equalizer of
//   prod_{objects} holim_{id/Sd K} F  =>  prod_{morphisms} holim_{k/Sd K} F
// with both sides computed independently, compared degreewise.
struct KernelVerdict {
    bool pass = false;
    std::vector<long long> left_counts, right_counts;  // per degree
    std::string detail;
};
KernelVerdict derived_kernel_check(const SSetDiagram& f, const FiniteCategory& k,
                                   const FiniteCategory& sd, int stage, int out_dim);

// ---------------------------------------------------------------------------
// hom simplicial sets

// hom(B, C) for simplicial sets: p-simplices are the simplicial maps
// B -> Map(Delta[p], C).
struct HomSSet {
    SimplicialSet ss;
    const SimplicialSet* b = nullptr;
    const SimplicialSet* c = nullptr;
    int bound = 0;
    std::vector<SimplicialSet> deltas;
    std::vector<MappingObject> maps;  // Map(Delta[p], C)
    // underlying image table of each nondegenerate cell, and the normal
    // form of every table (degenerate simplices included)
    std::vector<std::vector<std::vector<std::vector<Sx>>>> cell_elems;
    std::vector<std::map<std::vector<std::vector<Sx>>, Sx>> table;
};
HomSSet hom_sset(const SimplicialSet& b, const SimplicialSet& c, int bound);

// contravariant action along g: B -> B', covariant along g: C -> C'
SimplicialMap hom_precompose(const HomSSet& from, const HomSSet& to,
                             const SimplicialMap& g);
SimplicialMap hom_postcompose(const HomSSet& from, const HomSSet& to,
                              const SimplicialMap& g);

// chain-complex cotensor Hom(N(K), C), with N the normalized chains
ChainComplex cotensor_complex(const ChainComplex& c, const SimplicialSet& k);
// induced map Hom(N(L), C) -> Hom(N(K), C) along f: K -> L
ChainMap cotensor_restrict(const ChainComplex& c, const SimplicialSet& kk,
                           const SimplicialSet& ll, const SimplicialMap& f);

// hom(B, C) for chain complexes: p-simplices are the chain maps
// B -> Hom(N(Delta[p]), C).  Refuses if a level would exceed budget.
struct HomChain {
    SimplicialSet ss;
    ChainComplex b, c;
    int bound = 0;
    std::vector<SimplicialSet> deltas;
    std::vector<ChainComplex> cotensors;
    std::vector<std::vector<std::vector<long long>>> cell_elems;
    std::vector<std::map<std::vector<long long>, Sx>> table;
    ChainMap realize(const Sx& s) const;
};
HomChain hom_chain(const ChainComplex& b, const ChainComplex& c, int bound,
                   long long budget = 200000);
SimplicialMap hom_chain_precompose(const HomChain& from, const HomChain& to,
                                   const ChainMap& i);

// ---------------------------------------------------------------------------
// the objectwise holim and the enumeration bijection

// (holim F)(x) = holim of F restricted to x/K; actions are the
// comma-functor projections.
struct ObjectwiseHolim {
    SSetDiagram diagram;                 // over K
    std::vector<BkHolim> holims;         // per object
    std::vector<CommaCategory> commas;   // per object
};
ObjectwiseHolim objectwise_holim(const SSetDiagram& f, const FiniteCategory& k,
                                 int stage, int out_dim);

// limit of a covariant simplicial diagram, degreewise
SimplicialSet limit_of(const SSetDiagram& d, int dim_bound);

// G(i0) against the end of (i, j) |-> prod_{i0 -> i} G(j), with the
// diagonal and the identity-coordinate projection checked inverse.
bool end_reconstruction_check(const SetDiagram& g, int i0);

// |Hom_{C^K}(B, holim F)| against the 0-simplex count of the homotopy
// end of hom(B K', F K); the end reconstruction above is run for every
// object as an internal step.
struct BijectionVerdict {
    bool pass = false;
    long long lhs = -1, rhs = -1;
    bool reconstruction_ok = false;
    std::string detail;
};
BijectionVerdict natural_map_bijection(const SSetDiagram& b, const SSetDiagram& f,
                                       const FiniteCategory& k, int stage,
                                       int out_dim);

}  // namespace hoend
