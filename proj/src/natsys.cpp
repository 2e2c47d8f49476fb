#include "hoend/natsys.hpp"

#include <algorithm>

namespace hoend {

namespace {

// x == 0 in the group (free rows vanish, torsion rows divisible)
bool zero_in_group(const AbGroup& g, const IntMatrix& m, int col) {
    for (int r = 0; r < g.rank; ++r)
        if (m.at(r, col) != 0) return false;
    for (int r = g.rank; r < g.dim(); ++r)
        if (m.at(r, col) % BigInt(g.torsion[size_t(r) - size_t(g.rank)]) != 0)
            return false;
    return true;
}

bool equal_in_group(const AbGroup& g, const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    IntMatrix d(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) d.at(r, c) = a.at(r, c) - b.at(r, c);
    for (int c = 0; c < a.cols(); ++c)
        if (!zero_in_group(g, d, c)) return false;
    return true;
}

}  // namespace

void NaturalSystem::validate() const {
    if (!k || !sd) throw ContractViolation("natural system missing shape");
    if (int(value.size()) != int(sd->objects.size()) ||
        int(action.size()) != int(sd->morphisms.size()))
        throw ContractViolation("natural system size mismatch");
    for (auto& g : value)
        for (long long t : g.torsion)
            if (t <= 1) throw ContractViolation("torsion coefficients must exceed 1");
    for (int m = 0; m < int(sd->morphisms.size()); ++m) {
        const AbGroup& s = value[size_t(sd->morphisms[size_t(m)].src)];
        const AbGroup& t = value[size_t(sd->morphisms[size_t(m)].dst)];
        const IntMatrix& a = action[size_t(m)];
        if (a.rows() != t.dim() || a.cols() != s.dim())
            throw ContractViolation("action matrix has wrong shape");
        // torsion generators must map to elements of matching order
        for (int j = 0; j < int(s.torsion.size()); ++j) {
            IntMatrix col(t.dim(), 1);
            for (int r = 0; r < t.dim(); ++r)
                col.at(r, 0) = a.at(r, s.rank + j) * BigInt(s.torsion[size_t(j)]);
            if (!zero_in_group(t, col, 0))
                throw ContractViolation("action does not respect torsion");
        }
        if (sd->is_identity(m) && !equal_in_group(t, a, IntMatrix::identity(t.dim())))
            throw ContractViolation("identity acts nontrivially");
    }
    for (int x = 0; x < int(sd->morphisms.size()); ++x)
        for (int y = 0; y < int(sd->morphisms.size()); ++y) {
            if (sd->morphisms[size_t(x)].dst != sd->morphisms[size_t(y)].src) continue;
            int xy = sd->compose(x, y);
            const AbGroup& t = value[size_t(sd->morphisms[size_t(y)].dst)];
            if (!equal_in_group(t, action[size_t(xy)],
                                action[size_t(y)] * action[size_t(x)]))
                throw ContractViolation("action is not functorial");
        }
}

NaturalSystem constant_system(const FiniteCategory& k, const FiniteCategory& sd,
                              const AbGroup& g) {
    NaturalSystem ns;
    ns.k = &k;
    ns.sd = &sd;
    ns.value.assign(sd.objects.size(), g);
    ns.action.assign(sd.morphisms.size(), IntMatrix::identity(g.dim()));
    return ns;
}

void BWComplex::validate() const {
    for (int p = 0; p + 2 <= n; ++p) {
        IntMatrix sq = delta[size_t(p) + 1] * delta[size_t(p)];
        for (int c = 0; c < sq.cols(); ++c) {
            std::vector<BigInt> b(static_cast<size_t>(sq.rows()));
            for (int r = 0; r < sq.rows(); ++r) b[size_t(r)] = sq.at(r, c);
            bool zero = std::all_of(b.begin(), b.end(),
                                    [](const BigInt& v) { return v == 0; });
            if (!zero && !int_solve(rel[size_t(p) + 2], b))
                throw ContractViolation("delta squared is nonzero");
        }
    }
}

BWComplex bw_cochain_complex(const NaturalSystem& ns, int top_degree) {
    if (top_degree < 1) throw ContractViolation("top degree must be at least 1");
    ns.validate();
    BWComplex c;
    c.n = top_degree;
    c.spec = cosimplicial_spec(*ns.k, Flavor::natural_system, top_degree, ns.sd, nullptr);
    for (int p = 0; p <= top_degree; ++p) {
        std::vector<int> off;
        int d = 0;
        for (int obj : c.spec.factor_obj[size_t(p)]) {
            off.push_back(d);
            d += ns.value[size_t(obj)].dim();
        }
        c.offset.push_back(off);
        c.dims.push_back(d);
        int ncols = 0;
        for (int obj : c.spec.factor_obj[size_t(p)])
            ncols += int(ns.value[size_t(obj)].torsion.size());
        IntMatrix rel(d, ncols);
        int col = 0;
        for (int cc = 0; cc < int(c.spec.factor_obj[size_t(p)].size()); ++cc) {
            const AbGroup& g = ns.value[size_t(c.spec.factor_obj[size_t(p)][size_t(cc)])];
            for (int i = 0; i < int(g.torsion.size()); ++i)
                rel.at(off[size_t(cc)] + g.rank + i, col++) = g.torsion[size_t(i)];
        }
        c.rel.push_back(rel);
    }
    for (int p = 0; p < top_degree; ++p) {
        IntMatrix d(c.dims[size_t(p) + 1], c.dims[size_t(p)]);
        for (int i = 0; i <= p + 1; ++i) {
            int sign = (i % 2 == 0) ? 1 : -1;
            const auto& comps = c.spec.coface[size_t(p)][size_t(i)];
            for (int cc = 0; cc < int(comps.size()); ++cc) {
                const IntMatrix& a = ns.action[size_t(comps[size_t(cc)].mor)];
                int r0 = c.offset[size_t(p) + 1][size_t(cc)];
                int c0 = c.offset[size_t(p)][size_t(comps[size_t(cc)].src)];
                for (int r = 0; r < a.rows(); ++r)
                    for (int cl = 0; cl < a.cols(); ++cl)
                        d.at(r0 + r, c0 + cl) += sign * a.at(r, cl);
            }
        }
        c.delta.push_back(d);
    }
    c.validate();
    return c;
}

BWComplex normalized_complex(const NaturalSystem& ns, const BWComplex& c) {
    BWComplex out;
    out.n = c.n;
    out.spec = c.spec;
    // keep generators sitting over identity-free chains
    std::vector<std::vector<int>> keep(size_t(c.n) + 1);  // old chain -> new, or -1
    for (int p = 0; p <= c.n; ++p) {
        std::vector<int> off, gen_map(static_cast<size_t>(c.dims[size_t(p)]), -1);
        int d = 0;
        keep[size_t(p)].assign(c.spec.chains[size_t(p)].size(), -1);
        std::vector<long long> tors;
        std::vector<int> tor_row;
        for (int cc = 0; cc < int(c.spec.chains[size_t(p)].size()); ++cc) {
            const Chain& ch = c.spec.chains[size_t(p)][size_t(cc)];
            if (chain_has_identity(ch, *ns.k)) continue;
            keep[size_t(p)][size_t(cc)] = int(off.size());
            off.push_back(d);
            const AbGroup& g = ns.value[size_t(c.spec.factor_obj[size_t(p)][size_t(cc)])];
            for (int j = 0; j < g.dim(); ++j)
                gen_map[size_t(c.offset[size_t(p)][size_t(cc)] + j)] = d + j;
            for (int i = 0; i < int(g.torsion.size()); ++i) {
                tors.push_back(g.torsion[size_t(i)]);
                tor_row.push_back(d + g.rank + i);
            }
            d += g.dim();
        }
        out.offset.push_back(off);
        out.dims.push_back(d);
        IntMatrix rel(d, int(tors.size()));
        for (int i = 0; i < int(tors.size()); ++i)
            rel.at(tor_row[size_t(i)], i) = tors[size_t(i)];
        out.rel.push_back(rel);
        if (p > 0) {
            IntMatrix nd(out.dims[size_t(p)], out.dims[size_t(p) - 1]);
            const IntMatrix& full = c.delta[size_t(p) - 1];
            // the normalized part is a direct summand; restrict the matrix
            std::vector<int> prev;  // new gen -> old gen at level p-1
            prev.assign(static_cast<size_t>(out.dims[size_t(p) - 1]), -1);
            // rebuild the previous level's generator map
            {
                int pd = 0;
                for (int cc = 0; cc < int(c.spec.chains[size_t(p) - 1].size()); ++cc) {
                    if (keep[size_t(p) - 1][size_t(cc)] < 0) continue;
                    const AbGroup& g =
                        ns.value[size_t(c.spec.factor_obj[size_t(p) - 1][size_t(cc)])];
                    for (int j = 0; j < g.dim(); ++j)
                        prev[size_t(pd + j)] = c.offset[size_t(p) - 1][size_t(cc)] + j;
                    pd += g.dim();
                }
            }
            for (int r = 0; r < full.rows(); ++r) {
                if (gen_map[size_t(r)] < 0) continue;
                for (int cl = 0; cl < out.dims[size_t(p) - 1]; ++cl)
                    nd.at(gen_map[size_t(r)], cl) = full.at(r, prev[size_t(cl)]);
            }
            out.delta.push_back(nd);
        }
    }
    out.validate();
    return out;
}

namespace {

// columns spanning {x : d x lies in the relation lattice rel}
IntMatrix preimage_lattice(const IntMatrix& d, const IntMatrix& rel) {
    IntMatrix stacked(d.rows(), d.cols() + rel.cols());
    for (int r = 0; r < d.rows(); ++r) {
        for (int c = 0; c < d.cols(); ++c) stacked.at(r, c) = d.at(r, c);
        for (int c = 0; c < rel.cols(); ++c)
            stacked.at(r, d.cols() + c) = -rel.at(r, c);
    }
    IntMatrix ker = int_kernel_basis(stacked);
    IntMatrix out(d.cols(), ker.cols());
    for (int r = 0; r < d.cols(); ++r)
        for (int c = 0; c < ker.cols(); ++c) out.at(r, c) = ker.at(r, c);
    return out;
}

}  // namespace

GroupInvariants bw_cohomology(const BWComplex& c, int n) {
    if (n < 0 || n >= c.n)
        throw ContractViolation("degree exceeds the truncation; rebuild deeper");
    IntMatrix kernel = preimage_lattice(c.delta[size_t(n)], c.rel[size_t(n) + 1]);
    int bcols = (n > 0 ? c.delta[size_t(n) - 1].cols() : 0) + c.rel[size_t(n)].cols();
    IntMatrix bound(c.dims[size_t(n)], bcols);
    int col = 0;
    if (n > 0)
        for (int cc = 0; cc < c.delta[size_t(n) - 1].cols(); ++cc, ++col)
            for (int r = 0; r < c.dims[size_t(n)]; ++r)
                bound.at(r, col) = c.delta[size_t(n) - 1].at(r, cc);
    for (int cc = 0; cc < c.rel[size_t(n)].cols(); ++cc, ++col)
        for (int r = 0; r < c.dims[size_t(n)]; ++r)
            bound.at(r, col) = c.rel[size_t(n)].at(r, cc);
    return lattice_quotient(kernel, bound);
}

GroupInvariants bw_cohomology(const NaturalSystem& ns, int n, int top_degree) {
    return bw_cohomology(bw_cochain_complex(ns, top_degree), n);
}

bool h0_is_end(const NaturalSystem& ns) {
    auto c = bw_cochain_complex(ns, 1);
    // the two cofaces C^0 => C^1, assembled without the alternating sum
    IntMatrix d0(c.dims[1], c.dims[0]), d1(c.dims[1], c.dims[0]);
    for (int i = 0; i <= 1; ++i) {
        const auto& comps = c.spec.coface[0][size_t(i)];
        IntMatrix& d = i == 0 ? d0 : d1;
        for (int cc = 0; cc < int(comps.size()); ++cc) {
            const IntMatrix& a = ns.action[size_t(comps[size_t(cc)].mor)];
            int r0 = c.offset[1][size_t(cc)];
            int c0 = c.offset[0][size_t(comps[size_t(cc)].src)];
            for (int r = 0; r < a.rows(); ++r)
                for (int cl = 0; cl < a.cols(); ++cl) d.at(r0 + r, c0 + cl) = a.at(r, cl);
        }
    }
    IntMatrix diff(c.dims[1], c.dims[0]);
    for (int r = 0; r < c.dims[1]; ++r)
        for (int cl = 0; cl < c.dims[0]; ++cl)
            diff.at(r, cl) = d0.at(r, cl) - d1.at(r, cl);
    IntMatrix kernel = preimage_lattice(diff, c.rel[1]);
    GroupInvariants direct = lattice_quotient(kernel, c.rel[0]);
    return direct == bw_cohomology(c, 0);
}

}  // namespace hoend
