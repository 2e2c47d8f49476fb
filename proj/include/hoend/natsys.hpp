#pragma once

// Baues-Wirsching cohomology of a finite category with coefficients in
// a natural system of finitely generated abelian groups.  The cochain
// complex is the one associated to the chain-indexed cosimplicial
// replacement; cohomology is read off with Smith normal form.

#include <string>
#include <vector>

#include "hoend/ends.hpp"
#include "hoend/exactalg.hpp"
#include "hoend/fincat.hpp"

namespace hoend {

// finitely generated abelian group Z^rank + sum Z/t_i, generators
// ordered free part first
struct AbGroup {
    int rank = 0;
    std::vector<long long> torsion;  // each > 1
    int dim() const { return rank + int(torsion.size()); }
};

// coefficient system: one group per morphism of the base (= object of
// its subdivision category), one matrix per subdivision morphism
struct NaturalSystem {
    const FiniteCategory* k = nullptr;
    const FiniteCategory* sd = nullptr;
    std::vector<AbGroup> value;      // per sd object
    std::vector<IntMatrix> action;   // per sd morphism, tgt-dim x src-dim
    void validate() const;  // identities, functoriality, torsion respected
};

NaturalSystem constant_system(const FiniteCategory& k, const FiniteCategory& sd,
                              const AbGroup& g);

// degree p: product of F(K_0 -> K_p) over length-p chains, presented
// as Z^{dims[p]} modulo the diagonal torsion relations
struct BWComplex {
    int n = 0;
    CoSpec spec;
    std::vector<int> dims;
    std::vector<std::vector<int>> offset;  // [p][chain] -> first generator
    std::vector<IntMatrix> rel;            // relation columns per degree
    std::vector<IntMatrix> delta;          // delta[p]: C^p -> C^{p+1}
    void validate() const;                 // delta^2 = 0 modulo relations
};

BWComplex bw_cochain_complex(const NaturalSystem& ns, int top_degree);

// subcomplex of families supported on identity-free chains
BWComplex normalized_complex(const NaturalSystem& ns, const BWComplex& c);

// H^n = ker(delta^n)/im(delta^{n-1}) in the presented sense; requires
// n < top degree of the complex
GroupInvariants bw_cohomology(const BWComplex& c, int n);
GroupInvariants bw_cohomology(const NaturalSystem& ns, int n, int top_degree = 5);

// H^0 against the kernel of the parallel pair C^0 => C^1 computed
// directly from the two bottom cofaces
bool h0_is_end(const NaturalSystem& ns);

}  // namespace hoend
