#pragma once

// Finite categories given by explicit composition tables, and the
// indexing constructions built on them: the subdivision (factorization)
// category, under-comma categories, composable-chain enumeration and
// loop-freeness certificates.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hoend {

struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FiniteCategory {
    struct Mor {
        std::string name;
        int src = 0, dst = 0;  // object indices
    };

    std::vector<std::string> objects;  // sorted lexicographically
    std::vector<Mor> morphisms;        // sorted by name; identities included
    std::vector<int> identity;         // identity[obj] = morphism index
    // compose[{f,g}] = g after f, defined exactly when dst(f) == src(g)
    std::map<std::pair<int, int>, int> compose_table;

    int object_index(const std::string& name) const;
    int morphism_index(const std::string& name) const;
    int compose(int f, int g) const;  // g∘f for f then g
    bool is_identity(int f) const { return identity[morphisms[f].src] == f; }

    // Exhaustive axiom check: units, associativity, composability domain.
    void validate() const;

    // Builds indices/identities from raw data; identities named "id:<obj>".
    static FiniteCategory build(std::vector<std::string> objects,
                                std::vector<Mor> morphisms,
                                std::map<std::pair<int, int>, int> compose);

    static FiniteCategory terminal();
    // Poset 0 < 1 < ... < n as a category (objects named "0".."n",
    // morphisms "i<j").
    static FiniteCategory linear_poset(int n);
    // One-object category with cyclic group Z/n; morphisms "g0".."g(n-1)".
    static FiniteCategory cyclic_group(int n);

    FiniteCategory opposite() const;
};

// A composable p-tuple K_0 -> K_1 -> ... -> K_p; p=0 is a bare object.
struct Chain {
    int object = -1;            // used when mors is empty
    std::vector<int> mors;      // morphism indices, consecutive composable
    int length() const { return int(mors.size()); }
    bool operator==(const Chain& o) const { return object == o.object && mors == o.mors; }
    bool operator<(const Chain& o) const {
        if (mors.size() != o.mors.size()) return mors.size() < o.mors.size();
        if (mors.empty()) return object < o.object;
        return mors < o.mors;
    }
};

int chain_source(const FiniteCategory& k, const Chain& c);
int chain_target(const FiniteCategory& k, const Chain& c);

// d_i: drop K_i (composing or truncating); result has length p-1.
Chain chain_face(const FiniteCategory& k, const Chain& c, int i);
// s_j: insert the identity at K_j; result has length p+1.
Chain chain_degeneracy(const FiniteCategory& k, const Chain& c, int j);
// Action of an arbitrary monotone map theta: [q] -> [p] on a p-chain,
// giving the q-chain (K_{theta(0)} -> ... -> K_{theta(q)}).
Chain chain_act(const FiniteCategory& k, const Chain& c, const std::vector<int>& theta);

bool chain_has_identity(const Chain& c, const FiniteCategory& k);

// All composable p-tuples, in deterministic (lexicographic) order.
std::vector<Chain> enumerate_chains(const FiniteCategory& k, int p);

struct LoopFreeCertificate {
    bool loop_free = false;
    std::vector<int> topological_order;  // object indices, only if loop_free
    std::string reason;                  // explanation when not loop free
};
LoopFreeCertificate loop_free_certificate(const FiniteCategory& k);

// Sd K: objects are the morphisms of k; a morphism f -> f' is a pair
// (a, b) with b∘f∘a = f'.  Morphism names are "a|b".
FiniteCategory subdivision_category(const FiniteCategory& k);
// Object index in Sd K of a morphism of k, and back.
int sd_object_of(const FiniteCategory& k, const FiniteCategory& sd, int mor);
int sd_object_to_mor(const FiniteCategory& k, const FiniteCategory& sd, int sd_obj);
// Decompose a morphism of Sd K into its (a, b) components in k.
std::pair<int, int> sd_morphism_parts(const FiniteCategory& k, const FiniteCategory& sd,
                                      int sd_mor);

// x/k: objects are morphisms x -> k', morphisms induced by post-composition.
struct CommaCategory {
    FiniteCategory cat;
    std::vector<int> object_mor;   // comma object -> morphism x->k' in k
    std::vector<int> morphism_mor; // comma morphism -> underlying k'->k'' in k
    int initial_object = -1;       // the identity at x
};
CommaCategory comma_under(const FiniteCategory& k, int x);

struct Functor {
    const FiniteCategory* src = nullptr;
    const FiniteCategory* dst = nullptr;
    std::vector<int> obj_map;
    std::vector<int> mor_map;
    void validate() const;
};

Chain chain_induced_map(const Functor& phi, const Chain& c);

}  // namespace hoend
