#pragma once

// Bounded chain complexes over a prime field with the model structure
// whose cofibrations are the degreewise injections, fibrations the
// degreewise surjections, and weak equivalences the quasi-isomorphisms.
// Includes the cylinder/path factorizations, axiom spot-checks, and the
// homotopy category with computable hom-sets.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hoend/exactalg.hpp"
#include "hoend/fincat.hpp"  // ContractViolation

namespace hoend {

struct ChainComplex {
    long long p = 2;
    int lo = 0, hi = -1;         // empty complex when hi < lo
    std::vector<int> dims;       // per degree lo..hi
    std::vector<FieldMatrix> d;  // d[i]: degree lo+1+i -> lo+i

    int dim(int n) const;
    FieldMatrix diff(int n) const;  // C_n -> C_{n-1}, zero outside range
    int betti(int n) const;
    void validate() const;
    bool operator==(const ChainComplex& o) const;

    static ChainComplex zero(long long p);
    static ChainComplex sphere(long long p, int n);  // one copy in degree n
    static ChainComplex disk(long long p, int n);    // id: degree n -> n-1
};

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

struct ChainMap {
    ChainComplex src, tgt;  // owned by value; maps stay self-contained
    int lo = 0;
    std::vector<FieldMatrix> mats;  // per degree from lo

    FieldMatrix mat(int n) const;
    void validate() const;

    static ChainMap zero(const ChainComplex& a, const ChainComplex& b);
    static ChainMap identity(const ChainComplex& a);
};

ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f
ChainMap direct_sum_map(const ChainMap& f, const ChainMap& g);
bool maps_equal(const ChainMap& f, const ChainMap& g);

struct StructureVerdict {
    bool is_cof = false, is_fib = false, is_we = false;
    std::string witness;  // first degree where a predicate fails
};
StructureVerdict classify(const ChainMap& f);

// f = second . first
struct Factorization {
    ChainMap first, second;
};
Factorization factor_cylinder(const ChainMap& f);  // cof then quasi-iso
Factorization factor_path(const ChainMap& f);      // quasi-iso then fib

struct PushoutResult {
    ChainComplex obj;
    ChainMap from_b, from_c;  // legs of B -> P <- C
};
PushoutResult pushout(const ChainMap& f, const ChainMap& g);  // B <- A -> C

struct PullbackResult {
    ChainComplex obj;
    ChainMap to_x, to_y;  // legs of X <- P -> Y
};
PullbackResult pullback(const ChainMap& f, const ChainMap& g);  // X -> Z <- Y

// chain map F: B -> X with F i = f and p F = g, lexicographically least
// solution vector; empty when the lifting problem is unsolvable
std::optional<ChainMap> fillin(const ChainMap& i, const ChainMap& p,
                               const ChainMap& f, const ChainMap& g);

struct Cylinder {
    ChainComplex cyl;
    ChainMap i0, i1, q;  // two ends and the collapse, q i0 = q i1 = id
};
Cylinder cylinder_object(const ChainComplex& a);

// decided on the standard cylinder and cross-checked against chain
// homotopy (ds + sd = f - g); a disagreement throws
bool left_homotopic(const ChainMap& f, const ChainMap& g);

std::vector<ChainMap> hom_basis(const ChainComplex& a, const ChainComplex& b);

// Hom(a,b) modulo homotopy, kept as a complement basis of the homotopy
// subspace inside the chain-map space
struct PiSet {
    ChainComplex a, b;
    std::vector<ChainMap> hom;         // basis of the chain-map space
    std::vector<ChainMap> complement;  // basis of the quotient
    FieldMatrix reduction;             // columns: homotopy gens | complement
    int subspace_rank = 0;
    long long count() const;
    std::vector<long long> class_coords(const ChainMap& f) const;
    long long class_index(const ChainMap& f) const;  // mixed radix
    ChainMap representative(long long index) const;
};
PiSet pi(const ChainComplex& a, const ChainComplex& b);

struct AxiomReport {
    int instances = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};
AxiomReport check_axioms(const std::vector<ChainMap>& corpus);

// seeded corpus: sums of spheres and disks twisted by a random change
// of basis in every degree
ChainComplex random_complex(long long p, std::mt19937_64& rng, int max_deg = 3,
                            int max_blocks = 4);
ChainMap random_map(const ChainComplex& a, const ChainComplex& b,
                    std::mt19937_64& rng);

std::optional<FieldMatrix> invert(const FieldMatrix& m);

}  // namespace hoend
