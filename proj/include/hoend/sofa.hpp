#pragma once

// Budget-truncated small object argument for finite simplicial sets:
// factor X -> Y as an iterated horn-pushout inclusion X -> T followed
// by a candidate fibration T -> Y.  Stages attach one cell pair per
// unsolvable horn lifting square; when no unsolvable square remains at
// the horn bound the second map is certified, otherwise the trace is
// returned honestly non-certified.

#include <vector>

#include "hoend/simpset.hpp"

namespace hoend {

// A lifting square: the horn Lambda[n,k] mapped into T, the whole
// simplex mapped into Y, commuting over T -> Y.  Images are indexed by
// the cells of Delta[n]; the two cells outside the horn (the top cell
// and face k) carry placeholder entries in horn_to_t.
struct TestSquare {
    int n = 0, k = 0;
    std::vector<std::vector<Sx>> horn_to_t;
    std::vector<std::vector<Sx>> simplex_to_y;
    auto operator<=>(const TestSquare&) const = default;
};

// All unsolvable squares with n <= horn_bound, in deterministic order.
std::vector<TestSquare> unsolved_squares(const SimplicialSet& t,
                                         const SimplicialMap& onto_y, int horn_bound);
// Whether a lift Delta[n] -> T exists extending the horn over Y.
bool square_solvable(const SimplicialSet& t, const SimplicialMap& onto_y,
                     const TestSquare& s);

struct FactorizationTrace {
    std::vector<SimplicialSet> spaces;            // T_0 = X, ..., T_final
    std::vector<std::vector<TestSquare>> attached;  // squares filled per stage
    std::vector<std::vector<Sx>> into_final;      // X -> T_final, cellwise
    std::vector<std::vector<Sx>> onto_y;          // T_final -> Y, cellwise
    bool certified = false;    // no unsolvable square at the horn bound
    bool injective = false;    // X -> T_final is an inclusion
    ProxyVerdict anodyne;      // weak-equivalence proxy of X -> T_final
    KanVerdict fibration;      // final horn check of T_final -> Y
    int budget = 0, horn_bound = 0, stages_used = 0;

    SimplicialMap first_map(const SimplicialSet& x) const;   // X -> T_final
    SimplicialMap second_map(const SimplicialSet& y) const;  // T_final -> Y
};

FactorizationTrace small_object_factor(const SimplicialMap& f, int budget,
                                       int horn_bound);

}  // namespace hoend
