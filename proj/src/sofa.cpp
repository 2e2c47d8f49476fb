#include "hoend/sofa.hpp"

#include <set>
#include <string>

namespace hoend {

namespace {

struct HornShape {
    SimplicialSet delta;  // Delta[n]
    Subcomplex horn;      // Lambda[n,k] inside it
    int face_cell = 0;    // index of face k among the (n-1)-cells
};

HornShape horn_shape(int n, int k) {
    HornShape h;
    h.delta = SimplicialSet::standard_simplex(n);
    h.face_cell = delta_simplex(n, mono_delta(k, n)).base;
    std::vector<std::vector<bool>> keep(h.delta.cells.size());
    for (size_t d = 0; d < h.delta.cells.size(); ++d)
        keep[d].assign(h.delta.cells[d].size(), true);
    keep[size_t(n)][0] = false;
    keep[size_t(n) - 1][size_t(h.face_cell)] = false;
    h.horn = subcomplex(h.delta, keep);
    return h;
}

// images over the ambient Delta[n] cell grid; the two free cells get
// placeholders
std::vector<std::vector<Sx>> ambient_table(const HornShape& hs, const SimplicialMap& g) {
    std::vector<std::vector<Sx>> out(hs.delta.cells.size());
    for (size_t d = 0; d < hs.delta.cells.size(); ++d)
        for (size_t c = 0; c < hs.delta.cells[d].size(); ++c) {
            int sub = hs.horn.back[d][c];
            out[d].push_back(sub < 0 ? Sx{} : g.image[d][size_t(sub)]);
        }
    return out;
}

PartialAssign as_partial(const std::vector<std::vector<Sx>>& table) {
    PartialAssign p(table.size());
    for (size_t d = 0; d < table.size(); ++d)
        for (const Sx& s : table[d])
            p[d].push_back(s.base < 0 ? std::nullopt : std::optional<Sx>(s));
    return p;
}

// A lift of a square exists iff some n-simplex of t (degenerate ones
// included) has the horn's face images in positions other than k and the
// prescribed image over the base; indexing those keys makes each
// solvability test a lookup instead of a search.
std::set<std::vector<Sx>> filler_index(const SimplicialSet& t,
                                       const SimplicialMap& onto_y, int n, int k) {
    std::set<std::vector<Sx>> index;
    for (const Sx& z : t.simplices(n)) {
        std::vector<Sx> key;
        for (int i = 0; i <= n; ++i)
            if (i != k) key.push_back(t.face(z, i));
        key.push_back(onto_y.apply(z));
        index.insert(std::move(key));
    }
    return index;
}

bool index_solvable(const HornShape& hs, const std::set<std::vector<Sx>>& index,
                    const TestSquare& s) {
    const auto& topfaces = hs.delta.cells[size_t(s.n)][0].faces;
    std::vector<Sx> key;
    for (int i = 0; i <= s.n; ++i)
        if (i != s.k)
            key.push_back(s.horn_to_t[size_t(s.n) - 1][size_t(topfaces[size_t(i)].base)]);
    key.push_back(s.simplex_to_y[size_t(s.n)][0]);
    return index.count(key) != 0;
}

std::vector<TestSquare> stage_squares(const SimplicialSet& t,
                                      const SimplicialMap& onto_y, int horn_bound,
                                      bool unsolved_only) {
    std::vector<TestSquare> out;
    std::set<TestSquare> seen;
    for (int n = 1; n <= horn_bound; ++n)
        for (int k = 0; k <= n; ++k) {
            HornShape hs = horn_shape(n, k);
            std::set<std::vector<Sx>> index;
            if (unsolved_only) index = filler_index(t, onto_y, n, k);
            for_each_map(hs.horn.ss, t, nullptr, [&](const SimplicialMap& g) {
                TestSquare s;
                s.n = n;
                s.k = k;
                s.horn_to_t = ambient_table(hs, g);
                // the bottom map is constrained on the horn image
                std::vector<std::vector<Sx>> forced(s.horn_to_t.size());
                for (size_t d = 0; d < s.horn_to_t.size(); ++d)
                    for (const Sx& img : s.horn_to_t[d])
                        forced[d].push_back(img.base < 0 ? Sx{} : onto_y.apply(img));
                PartialAssign partial = as_partial(forced);
                for (const SimplicialMap& h :
                     enumerate_maps(hs.delta, *onto_y.tgt, &partial)) {
                    s.simplex_to_y = h.image;
                    if (unsolved_only && index_solvable(hs, index, s)) continue;
                    if (seen.insert(s).second) out.push_back(s);
                }
                return false;
            });
        }
    return out;
}

// certification only needs emptiness, so stop at the first unsolved square
bool has_unsolved(const SimplicialSet& t, const SimplicialMap& onto_y,
                  int horn_bound) {
    for (int n = 1; n <= horn_bound; ++n)
        for (int k = 0; k <= n; ++k) {
            HornShape hs = horn_shape(n, k);
            std::set<std::vector<Sx>> index = filler_index(t, onto_y, n, k);
            bool found = false;
            for_each_map(hs.horn.ss, t, nullptr, [&](const SimplicialMap& g) {
                TestSquare s;
                s.n = n;
                s.k = k;
                s.horn_to_t = ambient_table(hs, g);
                std::vector<std::vector<Sx>> forced(s.horn_to_t.size());
                for (size_t d = 0; d < s.horn_to_t.size(); ++d)
                    for (const Sx& img : s.horn_to_t[d])
                        forced[d].push_back(img.base < 0 ? Sx{} : onto_y.apply(img));
                PartialAssign partial = as_partial(forced);
                for (const SimplicialMap& h :
                     enumerate_maps(hs.delta, *onto_y.tgt, &partial)) {
                    s.simplex_to_y = h.image;
                    if (!index_solvable(hs, index, s)) {
                        found = true;
                        return true;
                    }
                }
                return false;
            });
            if (found) return true;
        }
    return false;
}

}  // namespace

bool square_solvable(const SimplicialSet& t, const SimplicialMap& onto_y,
                     const TestSquare& s) {
    HornShape hs = horn_shape(s.n, s.k);
    return index_solvable(hs, filler_index(t, onto_y, s.n, s.k), s);
}

std::vector<TestSquare> unsolved_squares(const SimplicialSet& t,
                                         const SimplicialMap& onto_y, int horn_bound) {
    return stage_squares(t, onto_y, horn_bound, true);
}

SimplicialMap FactorizationTrace::first_map(const SimplicialSet& x) const {
    SimplicialMap m;
    m.src = &x;
    m.tgt = &spaces.back();
    m.image = into_final;
    return m;
}

SimplicialMap FactorizationTrace::second_map(const SimplicialSet& y) const {
    SimplicialMap m;
    m.src = &spaces.back();
    m.tgt = &y;
    m.image = onto_y;
    return m;
}

FactorizationTrace small_object_factor(const SimplicialMap& f, int budget,
                                       int horn_bound) {
    std::string err;
    if (!f.valid(&err)) throw ContractViolation("cannot factor an invalid map: " + err);
    FactorizationTrace tr;
    tr.budget = budget;
    tr.horn_bound = horn_bound;

    SimplicialSet t = *f.src;
    std::vector<std::vector<Sx>> ty = f.image;
    tr.spaces.push_back(t);
    tr.into_final.resize(f.src->cells.size());
    for (size_t d = 0; d < f.src->cells.size(); ++d)
        for (size_t c = 0; c < f.src->cells[d].size(); ++c)
            tr.into_final[d].push_back(Sx{int(c), mono_identity(int(d))});

    auto ty_map = [&]() {
        SimplicialMap m;
        m.src = &t;
        m.tgt = f.tgt;
        m.image = ty;
        return m;
    };

    for (int mu = 0; mu < budget; ++mu) {
        SimplicialMap onto = ty_map();
        std::vector<TestSquare> squares = unsolved_squares(t, onto, horn_bound);
        if (squares.empty()) {
            tr.certified = true;
            break;
        }
        for (size_t q = 0; q < squares.size(); ++q) {
            const TestSquare& s = squares[q];
            HornShape hs = horn_shape(s.n, s.k);
            auto amb_to_t = [&](const Sx& amb) {
                const Sx& base = s.horn_to_t[size_t(amb.base_dim())][size_t(amb.base)];
                return Sx{base.base, mono_compose(base.sigma, amb.sigma)};
            };
            std::string tag = "sofa" + std::to_string(mu) + "_" + std::to_string(q);
            while (int(t.cells.size()) <= s.n) t.cells.emplace_back();
            while (ty.size() < t.cells.size()) ty.emplace_back();
            // the missing face of the horn
            int w = -1;
            {
                SimplicialSet::Cell cell{tag + "_w", {}};
                Sx fk{hs.face_cell, mono_identity(s.n - 1)};
                for (int i = 0; i < s.n && s.n > 1; ++i)
                    cell.faces.push_back(amb_to_t(hs.delta.face(fk, i)));
                w = int(t.cells[size_t(s.n) - 1].size());
                t.cells[size_t(s.n) - 1].push_back(std::move(cell));
                ty[size_t(s.n) - 1].push_back(
                    s.simplex_to_y[size_t(s.n) - 1][size_t(hs.face_cell)]);
            }
            // the filler cell
            {
                SimplicialSet::Cell cell{tag + "_c", {}};
                Sx top{0, mono_identity(s.n)};
                for (int i = 0; i <= s.n; ++i)
                    cell.faces.push_back(i == s.k
                                             ? Sx{w, mono_identity(s.n - 1)}
                                             : amb_to_t(hs.delta.face(top, i)));
                t.cells[size_t(s.n)].push_back(std::move(cell));
                ty[size_t(s.n)].push_back(s.simplex_to_y[size_t(s.n)][0]);
            }
        }
        t.validate();
        {
            SimplicialMap onto2 = ty_map();
            if (!onto2.valid(&err))
                throw ContractViolation("pushout broke the map to the base: " + err);
        }
        tr.attached.push_back(std::move(squares));
        tr.spaces.push_back(t);
        ++tr.stages_used;
    }
    tr.onto_y = ty;
    if (!tr.certified) {
        SimplicialMap onto = ty_map();
        tr.certified = !has_unsolved(t, onto, horn_bound);
    }

    // final verdicts on the stored spaces
    SimplicialMap second = tr.second_map(*f.tgt);
    second.src = &tr.spaces.back();
    tr.fibration = is_kan_fibration(second, horn_bound);
    SimplicialMap first = tr.first_map(*f.src);
    tr.injective = true;
    for (size_t d = 0; d < f.src->cells.size() && tr.injective; ++d)
        if (f.src->cells[d].size() > tr.spaces.back().cells[d].size())
            tr.injective = false;
    if (!first.valid(&err)) throw ContractViolation("inclusion invalid: " + err);
    tr.anodyne = weak_equivalence_proxy(first);
    return tr;
}

}  // namespace hoend
