// Batch front door: parse interchange JSON, dispatch to the library,
// emit deterministic machine-readable reports.
//
// Exit codes: 0 success, 2 parse failure, 3 invariant violation in the
// input (or a failed check suite), 4 honest non-certification
// (stabilization certificate or budget).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hoend/chmodel.hpp"
#include "hoend/ends.hpp"
#include "hoend/exactalg.hpp"
#include "hoend/fincat.hpp"
#include "hoend/holim.hpp"
#include "hoend/natsys.hpp"
#include "hoend/simpset.hpp"
#include "hoend/sofa.hpp"

using json = nlohmann::ordered_json;
using namespace hoend;

namespace {

constexpr const char* kSchema = "hoend-report/1";

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotCertified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseFailure("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const std::exception& e) {
        throw ParseFailure(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// categories

FiniteCategory parse_category(const json& j) {
    if (!j.contains("objects") || !j.contains("morphisms"))
        throw ParseFailure("category needs \"objects\" and \"morphisms\"");
    std::vector<std::string> objs = j.at("objects").get<std::vector<std::string>>();
    std::sort(objs.begin(), objs.end());
    auto oidx = [&](const std::string& n) {
        auto it = std::lower_bound(objs.begin(), objs.end(), n);
        if (it == objs.end() || *it != n) throw ParseFailure("unknown object " + n);
        return int(it - objs.begin());
    };
    std::vector<FiniteCategory::Mor> mors;
    for (const auto& m : j.at("morphisms"))
        mors.push_back({m.at("name").get<std::string>(),
                        oidx(m.at("src").get<std::string>()),
                        oidx(m.at("dst").get<std::string>())});
    for (int o = 0; o < int(objs.size()); ++o) {
        std::string id = "id:" + objs[size_t(o)];
        bool have = false;
        for (const auto& m : mors) have = have || m.name == id;
        if (!have) mors.push_back({id, o, o});
    }
    std::sort(mors.begin(), mors.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    auto midx = [&](const std::string& n) {
        for (int i = 0; i < int(mors.size()); ++i)
            if (mors[size_t(i)].name == n) return i;
        throw ParseFailure("unknown morphism " + n);
    };
    auto is_id = [&](int m) {
        return mors[size_t(m)].name == "id:" + objs[size_t(mors[size_t(m)].src)];
    };
    std::map<std::pair<int, int>, int> comp;
    for (int f = 0; f < int(mors.size()); ++f)
        for (int g = 0; g < int(mors.size()); ++g) {
            if (mors[size_t(f)].dst != mors[size_t(g)].src) continue;
            if (is_id(f)) comp[{f, g}] = g;
            else if (is_id(g)) comp[{f, g}] = f;
        }
    if (j.contains("compose"))
        for (const auto& c : j.at("compose"))
            comp[{midx(c.at("first").get<std::string>()),
                  midx(c.at("second").get<std::string>())}] =
                midx(c.at("result").get<std::string>());
    return FiniteCategory::build(std::move(objs), std::move(mors), std::move(comp));
}

json dump_category(const FiniteCategory& k) {
    json j;
    j["objects"] = k.objects;
    j["morphisms"] = json::array();
    for (const auto& m : k.morphisms)
        j["morphisms"].push_back({{"name", m.name},
                                  {"src", k.objects[size_t(m.src)]},
                                  {"dst", k.objects[size_t(m.dst)]}});
    j["compose"] = json::array();
    for (const auto& [fg, r] : k.compose_table) {
        if (k.is_identity(fg.first) || k.is_identity(fg.second)) continue;
        j["compose"].push_back({{"first", k.morphisms[size_t(fg.first)].name},
                                {"second", k.morphisms[size_t(fg.second)].name},
                                {"result", k.morphisms[size_t(r)].name}});
    }
    return j;
}

// ---------------------------------------------------------------------------
// simplicial sets

// Simplex expressions: a cell name, optionally followed by degeneracy
// operators applied left to right, e.g. "v.s0.s1" = s1(s0(v)).
Sx parse_simplex(const SimplicialSet& x, const std::string& expr, int dim) {
    std::vector<int> ops;
    std::string name = expr;
    // operators are the trailing ".s<j>" suffixes
    for (;;) {
        size_t dot = name.rfind('.');
        if (dot == std::string::npos || dot + 2 > name.size() ||
            name[dot + 1] != 's')
            break;
        bool digits = dot + 2 < name.size();
        for (size_t i = dot + 2; i < name.size(); ++i)
            digits = digits && std::isdigit(name[i]);
        if (!digits) break;
        ops.push_back(std::stoi(name.substr(dot + 2)));
        name = name.substr(0, dot);
    }
    std::reverse(ops.begin(), ops.end());
    int base_dim = dim - int(ops.size());
    if (base_dim < 0 || base_dim >= int(x.cells.size()))
        throw ParseFailure("simplex " + expr + " has no dimension-" +
                           std::to_string(base_dim) + " base");
    int cell = x.find_cell(base_dim, name);
    if (cell < 0) throw ParseFailure("unknown cell " + name);
    Sx s{cell, mono_identity(base_dim)};
    for (int j : ops) s = SimplicialSet::degeneracy(s, j);
    return s;
}

std::string dump_simplex(const SimplicialSet& x, Sx s) {
    std::vector<int> ops;
    while (!s.nondeg()) {
        int j = 0;
        while (s.sigma[size_t(j)] != s.sigma[size_t(j) + 1]) ++j;
        ops.push_back(j);
        Monotone m(s.sigma);
        m.erase(m.begin() + j + 1);
        s.sigma = m;
    }
    std::string out = x.cells[size_t(s.base_dim())][size_t(s.base)].name;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
        out += ".s" + std::to_string(*it);
    return out;
}

SimplicialSet parse_sset(const json& j) {
    if (!j.contains("simplices")) throw ParseFailure("simplicial set needs \"simplices\"");
    SimplicialSet x;
    for (const auto& level : j.at("simplices")) {
        x.cells.emplace_back();
        for (const auto& c : level)
            x.cells.back().push_back({c.at("name").get<std::string>(), {}});
    }
    int d = 0;
    for (const auto& level : j.at("simplices")) {
        int b = 0;
        for (const auto& c : level) {
            if (d > 0)
                for (const auto& f : c.at("faces"))
                    x.cells[size_t(d)][size_t(b)].faces.push_back(
                        parse_simplex(x, f.get<std::string>(), d - 1));
            ++b;
        }
        ++d;
    }
    x.validate();
    return x;
}

json dump_sset(const SimplicialSet& x) {
    json j;
    j["simplices"] = json::array();
    for (size_t d = 0; d < x.cells.size(); ++d) {
        json level = json::array();
        for (const auto& c : x.cells[d]) {
            json cell;
            cell["name"] = c.name;
            if (d > 0) {
                cell["faces"] = json::array();
                for (const Sx& f : c.faces) cell["faces"].push_back(dump_simplex(x, f));
            }
            level.push_back(cell);
        }
        j["simplices"].push_back(level);
    }
    return j;
}

std::vector<std::vector<Sx>> parse_image(const SimplicialSet& src,
                                         const SimplicialSet& tgt, const json& j) {
    std::vector<std::vector<Sx>> image(src.cells.size());
    if (j.size() != src.cells.size())
        throw ParseFailure("image table has wrong number of dimensions");
    for (size_t d = 0; d < src.cells.size(); ++d) {
        if (j[d].size() != src.cells[d].size())
            throw ParseFailure("image table has wrong dimension-" + std::to_string(d) +
                               " row length");
        for (const auto& e : j[d])
            image[d].push_back(parse_simplex(tgt, e.get<std::string>(), int(d)));
    }
    return image;
}

json cell_counts(const SimplicialSet& x) {
    json counts = json::array();
    for (const auto& row : x.cells) counts.push_back(row.size());
    return counts;
}

// ---------------------------------------------------------------------------
// diagrams

struct ParsedDiagram {
    FiniteCategory shape;
    SSetDiagram d;
};

// {"category": ..., "values": {object -> sset},
//  "actions": {morphism -> image table}}; identity actions implicit.
// Fills a caller-owned struct so the diagram's internal pointers stay
// valid.
void parse_diagram(const json& j, ParsedDiagram& pd) {
    pd.shape = parse_category(j.at("category"));
    pd.d.shape = &pd.shape;
    for (const auto& o : pd.shape.objects)
        pd.d.value.push_back(parse_sset(j.at("values").at(o)));
    for (const auto& m : pd.shape.morphisms) {
        SimplicialMap f;
        const SimplicialSet& src = pd.d.value[size_t(m.src)];
        const SimplicialSet& tgt = pd.d.value[size_t(m.dst)];
        if (j.contains("actions") && j.at("actions").contains(m.name)) {
            f.image = parse_image(src, tgt, j.at("actions").at(m.name));
        } else if (m.src == m.dst) {
            f = SimplicialMap::identity(src);
        } else {
            throw ParseFailure("missing action for morphism " + m.name);
        }
        pd.d.action.push_back(f);
    }
    rebind_diagram(pd.d);
    pd.d.validate();
}

// {"category": ..., "size": [[...]], "left"/"right": {morphism -> tables}}
struct ParsedBifunctor {
    FiniteCategory shape;
    SetBifunctor f;
};

void parse_bifunctor(const json& j, ParsedBifunctor& pb) {
    pb.shape = parse_category(j.at("category"));
    pb.f.k = &pb.shape;
    pb.f.size = j.at("size").get<std::vector<std::vector<int>>>();
    size_t nm = pb.shape.morphisms.size();
    pb.f.left.resize(nm);
    pb.f.right.resize(nm);
    for (size_t u = 0; u < nm; ++u) {
        const auto& m = pb.shape.morphisms[u];
        auto identity_tables = [&](int fixed_is_left) {
            std::vector<std::vector<int>> t;
            for (size_t o = 0; o < pb.shape.objects.size(); ++o) {
                int sz = fixed_is_left ? pb.f.size[size_t(m.src)][o]
                                       : pb.f.size[o][size_t(m.src)];
                std::vector<int> id(static_cast<size_t>(sz));
                for (int i = 0; i < sz; ++i) id[size_t(i)] = i;
                t.push_back(id);
            }
            return t;
        };
        if (j.contains("left") && j.at("left").contains(m.name))
            pb.f.left[u] = j.at("left").at(m.name).get<std::vector<std::vector<int>>>();
        else if (pb.shape.is_identity(int(u)))
            pb.f.left[u] = identity_tables(1);
        else
            throw ParseFailure("missing left action for " + m.name);
        if (j.contains("right") && j.at("right").contains(m.name))
            pb.f.right[u] = j.at("right").at(m.name).get<std::vector<std::vector<int>>>();
        else if (pb.shape.is_identity(int(u)))
            pb.f.right[u] = identity_tables(0);
        else
            throw ParseFailure("missing right action for " + m.name);
    }
    pb.f.validate();
}

// ---------------------------------------------------------------------------
// chain complexes

ChainComplex parse_complex(const json& j) {
    ChainComplex c;
    c.p = j.at("prime").get<long long>();
    c.lo = j.at("lo").get<int>();
    c.hi = j.at("hi").get<int>();
    c.dims = j.at("dims").get<std::vector<int>>();
    const json& ds = j.at("differentials");
    for (size_t i = 0; i + 1 < c.dims.size(); ++i) {
        int rows = c.dims[i], cols = c.dims[i + 1];
        FieldMatrix m(c.p, rows, cols);
        if (rows > 0 && cols > 0) {
            auto t = ds.at(i).get<std::vector<std::vector<long long>>>();
            if (int(t.size()) != rows || int(t.at(0).size()) != cols)
                throw ParseFailure("differential " + std::to_string(i) +
                                   " has the wrong shape");
            for (int r = 0; r < rows; ++r)
                for (int cc = 0; cc < cols; ++cc)
                    m.at(r, cc) = ((t[size_t(r)][size_t(cc)] % c.p) + c.p) % c.p;
        }
        c.d.push_back(m);
    }
    c.validate();
    return c;
}

json dump_complex(const ChainComplex& c) {
    json j;
    j["prime"] = c.p;
    j["lo"] = c.lo;
    j["hi"] = c.hi;
    j["dims"] = c.dims;
    j["differentials"] = json::array();
    for (const auto& m : c.d) {
        json mat = json::array();
        for (int r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (int col = 0; col < m.cols(); ++col)
                row.push_back(m.at(r, col));
            mat.push_back(row);
        }
        j["differentials"].push_back(mat);
    }
    return j;
}

ChainMap parse_chain_map(const json& j) {
    ChainMap f;
    f.src = parse_complex(j.at("src"));
    f.tgt = parse_complex(j.at("tgt"));
    f.lo = j.at("lo").get<int>();
    for (size_t i = 0; i < j.at("mats").size(); ++i) {
        auto rows = j.at("mats").at(i).get<std::vector<std::vector<long long>>>();
        int n = f.lo + int(i);
        FieldMatrix m(f.src.p, f.tgt.dim(n), f.src.dim(n));
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                m.at(r, c) = ((rows.at(size_t(r)).at(size_t(c)) % f.src.p) + f.src.p) %
                             f.src.p;
        f.mats.push_back(m);
    }
    f.validate();
    return f;
}

json dump_group(const GroupInvariants& g) {
    json j;
    j["rank"] = g.betti;
    j["torsion"] = json::array();
    for (const auto& t : g.torsion) j["torsion"].push_back(t.convert_to<long long>());
    return j;
}

json dump_structure(const StructureVerdict& v) {
    return {{"cofibration", v.is_cof},
            {"fibration", v.is_fib},
            {"weak_equivalence", v.is_we},
            {"witness", v.witness}};
}

// ---------------------------------------------------------------------------
// report plumbing

int emit(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseFailure("cannot write " + out_path);
        out << text;
    }
    return 0;
}

json report_base(const std::string& verb, json config) {
    json r;
    r["schema"] = kSchema;
    r["verb"] = verb;
    r["config"] = std::move(config);
    r["tags"] = json::array();
    return r;
}

unsigned long long env_seed() {
    const char* s = std::getenv("HOEND_SEED");
    if (!s) return 0;
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ParseFailure("HOEND_SEED is not a decimal integer");
    }
}

// a covariant diagram as a bifunctor that ignores the contravariant slot
SSetBifunctor constant_left_bifunctor(const SSetDiagram& d,
                                      std::vector<std::vector<SimplicialSet>>& vstore,
                                      std::vector<std::vector<SimplicialMap>>& lstore,
                                      std::vector<std::vector<SimplicialMap>>& rstore) {
    const FiniteCategory& k = *d.shape;
    size_t no = k.objects.size(), nm = k.morphisms.size();
    vstore.assign(no, {});
    for (size_t a = 0; a < no; ++a)
        for (size_t b = 0; b < no; ++b) vstore[a].push_back(d.value[b]);
    lstore.assign(nm, {});
    rstore.assign(nm, {});
    for (size_t u = 0; u < nm; ++u) {
        const auto& m = k.morphisms[u];
        for (size_t b = 0; b < no; ++b) {
            SimplicialMap id = SimplicialMap::identity(vstore[size_t(m.dst)][b]);
            id.src = &vstore[size_t(m.dst)][b];
            id.tgt = &vstore[size_t(m.src)][b];
            lstore[u].push_back(id);
        }
        for (size_t a = 0; a < no; ++a) {
            SimplicialMap f = d.action[u];
            f.src = &vstore[a][size_t(m.src)];
            f.tgt = &vstore[a][size_t(m.dst)];
            rstore[u].push_back(f);
        }
    }
    SSetBifunctor bf;
    bf.k = &k;
    bf.value = vstore;
    // the stored copies above are only for building; the bifunctor must
    // point at its own value array
    for (size_t u = 0; u < nm; ++u) {
        const auto& m = k.morphisms[u];
        for (size_t b = 0; b < no; ++b) {
            lstore[u][b].src = &bf.value[size_t(m.dst)][b];
            lstore[u][b].tgt = &bf.value[size_t(m.src)][b];
        }
        for (size_t a = 0; a < no; ++a) {
            rstore[u][a].src = &bf.value[a][size_t(m.src)];
            rstore[u][a].tgt = &bf.value[a][size_t(m.dst)];
        }
    }
    bf.left = lstore;
    bf.right = rstore;
    return bf;
}

// ---------------------------------------------------------------------------
// check suites

json run_suite(const std::string& suite, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    json result;
    std::vector<std::string> failures;
    int instances = 0;
    if (suite == "axioms") {
        for (long long p : {2LL, 3LL}) {
            std::vector<ChainComplex> objs;
            std::vector<ChainMap> corpus;
            for (int i = 0; i < std::max(count, 4); ++i)
                objs.push_back(random_complex(p, rng));
            for (size_t i = 0; i + 1 < objs.size(); ++i)
                corpus.push_back(random_map(objs[i], objs[i + 1], rng));
            AxiomReport r = check_axioms(corpus);
            instances += r.instances;
            failures.insert(failures.end(), r.failures.begin(), r.failures.end());
        }
    } else if (suite == "enrichment") {
        SimplicialSet pt = SimplicialSet::standard_simplex(0);
        SimplicialSet edge = SimplicialSet::standard_simplex(1);
        for (int i = 0; i < count; ++i) {
            ChainComplex c = random_complex(2, rng);
            ++instances;
            if (!(cotensor_complex(c, pt) == c))
                failures.push_back("cotensor by a point is not the identity");
            SimplicialMap v;
            v.src = &pt;
            v.tgt = &edge;
            v.image = {{Sx{0, Monotone{0}}}};
            ChainMap r = cotensor_restrict(c, pt, edge, v);
            if (!classify(r).is_we)
                failures.push_back("edge-cotensor restriction is not a quasi-iso");
        }
    } else if (suite == "compat") {
        FiniteCategory k = FiniteCategory::linear_poset(1);
        SimplicialSet pt = SimplicialSet::standard_simplex(0);
        SimplicialSet edge = SimplicialSet::standard_simplex(1);
        for (int i = 0; i < count; ++i) {
            SSetDiagram d;
            d.shape = &k;
            bool src_edge = rng() % 2, tgt_edge = rng() % 2;
            d.value = {src_edge ? edge : pt, tgt_edge ? edge : pt};
            for (const auto& m : k.morphisms) {
                SimplicialMap f;
                const SimplicialSet& s = d.value[size_t(m.src)];
                const SimplicialSet& t = d.value[size_t(m.dst)];
                if (m.src == m.dst || src_edge == tgt_edge) {
                    f = SimplicialMap::identity(s);
                } else {
                    // collapse onto vertex 0 of the target
                    (void)t;
                    f.image.resize(s.cells.size());
                    for (size_t dd = 0; dd < s.cells.size(); ++dd)
                        for (size_t c = 0; c < s.cells[dd].size(); ++c)
                            f.image[dd].push_back(Sx{0, Monotone(dd + 1, 0)});
                }
                d.action.push_back(f);
            }
            rebind_diagram(d);
            d.validate();
            ++instances;
            int stage = 1, out_dim = 1;
            BkHolim bk = bk_holim(d, stage, out_dim);  // route check inside
            FiniteCategory sd = subdivision_category(k);
            SSetDiagram ns = natural_system_of(d, sd);
            TotResult bw = holim_bw(ns, k, sd, stage, out_dim);
            DeltaCat dk = delta_over_category(k, stage + 1);
            SSetDiagram dt;
            dt.shape = &dk.cat;
            for (const Chain& c : dk.chain_of)
                dt.value.push_back(d.value[size_t(chain_target(k, c))]);
            for (size_t u = 0; u < dk.cat.morphisms.size(); ++u) {
                const auto& m = dk.cat.morphisms[u];
                const Chain& cs = dk.chain_of[size_t(m.src)];
                const Chain& ct = dk.chain_of[size_t(m.dst)];
                int a = chain_target(k, cs), b = chain_target(k, ct);
                SimplicialMap f;
                if (a == b) {
                    f = SimplicialMap::identity(dt.value[size_t(m.src)]);
                } else {
                    // the connecting morphism a -> b in the poset
                    int cm = -1;
                    for (int w = 0; w < int(k.morphisms.size()); ++w)
                        if (k.morphisms[size_t(w)].src == a &&
                            k.morphisms[size_t(w)].dst == b)
                            cm = w;
                    f = d.action[size_t(cm)];
                }
                dt.action.push_back(f);
            }
            rebind_diagram(dt);
            dt.validate();
            HolimT ht = holim_t(dt, k, dk, stage, out_dim);  // end check inside
            for (int q = 0; q <= out_dim; ++q) {
                size_t nbk = q < int(bk.tot.ss.cells.size())
                                 ? bk.tot.ss.cells[size_t(q)].size()
                                 : 0;
                size_t nbw =
                    q < int(bw.ss.cells.size()) ? bw.ss.cells[size_t(q)].size() : 0;
                size_t nt = q < int(ht.tot.ss.cells.size())
                                ? ht.tot.ss.cells[size_t(q)].size()
                                : 0;
                if (nbk != nbw || nbw != nt)
                    failures.push_back("flavors disagree in degree " +
                                       std::to_string(q) + " on instance " +
                                       std::to_string(i));
            }
        }
    } else if (suite == "thm75") {
        FiniteCategory k = FiniteCategory::linear_poset(1);
        for (int i = 0; i < count; ++i) {
            auto mk_discrete = [&](int n) {
                std::vector<std::string> pts;
                for (int t = 0; t < n; ++t) pts.push_back("p" + std::to_string(t));
                return SimplicialSet::discrete(pts);
            };
            SSetDiagram b, f;
            b.shape = &k;
            f.shape = &k;
            int nb0 = 1 + int(rng() % 2), nb1 = 1 + int(rng() % 2);
            int nf0 = 1 + int(rng() % 3), nf1 = 1 + int(rng() % 3);
            b.value = {mk_discrete(nb0), mk_discrete(nb1)};
            f.value = {mk_discrete(nf0), mk_discrete(nf1)};
            auto rand_map = [&](const SimplicialSet& s, const SimplicialSet& t) {
                SimplicialMap m;
                m.image.resize(s.cells.size());
                for (size_t c = 0; c < s.cells[0].size(); ++c)
                    m.image[0].push_back(
                        Sx{int(rng() % t.cells[0].size()), mono_identity(0)});
                return m;
            };
            for (const auto& m : k.morphisms) {
                if (m.src == m.dst) {
                    b.action.push_back(SimplicialMap::identity(b.value[size_t(m.src)]));
                    f.action.push_back(SimplicialMap::identity(f.value[size_t(m.src)]));
                } else {
                    b.action.push_back(rand_map(b.value[size_t(m.src)],
                                                b.value[size_t(m.dst)]));
                    f.action.push_back(rand_map(f.value[size_t(m.src)],
                                                f.value[size_t(m.dst)]));
                }
            }
            rebind_diagram(b);
            rebind_diagram(f);
            b.validate();
            f.validate();
            ++instances;
            BijectionVerdict v = natural_map_bijection(b, f, k, 1, 1);
            if (!v.pass)
                failures.push_back("bijection fails on instance " + std::to_string(i) +
                                   ": " + std::to_string(v.lhs) + " vs " +
                                   std::to_string(v.rhs));
        }
    } else {
        throw ParseFailure("unknown suite " + suite);
    }
    result["instances"] = instances;
    result["failures"] = failures;
    result["pass"] = failures.empty();
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale homotopy-limit toolkit"};
    app.require_subcommand(1);

    std::string category_path, coeff_path, diagram_path, map_path, space_path;
    std::string domain_path, a_path, b_path, out_path, flavor = "BK", kind, suite;
    int truncate = 2, out_dim = 1, max_degree = 4, horn_bound = -1, budget = 3;
    int bound = 1, count = 10;

    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write the report here instead of stdout");
    };

    auto* c_nerve = app.add_subcommand("nerve", "nerve of a finite loop-free category");
    c_nerve->add_option("--category", category_path)->required();
    add_out(c_nerve);

    auto* c_sd = app.add_subcommand("sd", "subdivision category");
    c_sd->add_option("--category", category_path)->required();
    add_out(c_sd);

    auto* c_end = app.add_subcommand("end", "end of a finite-set bifunctor");
    c_end->add_option("--bifunctor", diagram_path)->required();
    add_out(c_end);

    auto* c_holim = app.add_subcommand("holim", "homotopy limit of a diagram");
    c_holim->add_option("--diagram", diagram_path)->required();
    c_holim->add_option("--flavor", flavor)
        ->check(CLI::IsMember({"hoend", "BW", "T", "BK"}));
    c_holim->add_option("--truncate", truncate);
    c_holim->add_option("--out-dim", out_dim);
    add_out(c_holim);

    auto* c_tot = app.add_subcommand("tot", "Tot of the chain-indexed replacement");
    c_tot->add_option("--diagram", diagram_path)->required();
    c_tot->add_option("--stage", truncate);
    c_tot->add_option("--out-dim", out_dim);
    add_out(c_tot);

    auto* c_bw = app.add_subcommand("bw-cohomology", "cohomology with natural-system coefficients");
    c_bw->add_option("--category", category_path)->required();
    c_bw->add_option("--coeff", coeff_path)->required();
    c_bw->add_option("--max-degree", max_degree);
    add_out(c_bw);

    auto* c_kan = app.add_subcommand("kan-check", "horn lifting check of a simplicial map");
    c_kan->add_option("--map", map_path)->required();
    c_kan->add_option("--horn-bound", horn_bound);
    add_out(c_kan);

    auto* c_hom = app.add_subcommand("homology", "integral homology of a simplicial set");
    c_hom->add_option("--space", space_path)->required();
    add_out(c_hom);

    auto* c_mo = app.add_subcommand("map-object", "mapping object Map(K, X)");
    c_mo->add_option("--domain", domain_path)->required();
    c_mo->add_option("--space", space_path)->required();
    c_mo->add_option("--bound", bound);
    add_out(c_mo);

    auto* c_factor = app.add_subcommand("factor", "factor a map through the model structure");
    c_factor->add_option("--kind", kind)
        ->required()
        ->check(CLI::IsMember({"cylinder", "path", "small-object"}));
    c_factor->add_option("--map", map_path)->required();
    c_factor->add_option("--budget", budget);
    c_factor->add_option("--horn-bound", horn_bound);
    add_out(c_factor);

    auto* c_pi = app.add_subcommand("pi", "homotopy classes of chain maps");
    c_pi->add_option("--a", a_path)->required();
    c_pi->add_option("--b", b_path)->required();
    add_out(c_pi);

    auto* c_hh = app.add_subcommand("ho-hom", "hom set in the homotopy category");
    c_hh->add_option("--a", a_path)->required();
    c_hh->add_option("--b", b_path)->required();
    add_out(c_hh);

    auto* c_check = app.add_subcommand("check", "seeded property suites");
    c_check->add_option("--suite", suite)
        ->required()
        ->check(CLI::IsMember({"axioms", "enrichment", "compat", "thm75"}));
    c_check->add_option("--count", count);
    add_out(c_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*c_nerve) {
            FiniteCategory k = parse_category(load_file(category_path));
            SimplicialSet n = nerve(k);
            json r = report_base("nerve", {{"category", category_path}});
            r["tags"].push_back("nerve-of-loop-free-category");
            r["result"]["cells"] = cell_counts(n);
            r["result"]["space"] = dump_sset(n);
            return emit(r, out_path);
        }
        if (*c_sd) {
            FiniteCategory k = parse_category(load_file(category_path));
            FiniteCategory sd = subdivision_category(k);
            json r = report_base("sd", {{"category", category_path}});
            r["tags"].push_back("subdivision-category");
            r["result"]["objects"] = sd.objects.size();
            r["result"]["morphisms"] = sd.morphisms.size();
            r["result"]["category"] = dump_category(sd);
            return emit(r, out_path);
        }
        if (*c_end) {
            ParsedBifunctor pb;
            parse_bifunctor(load_file(diagram_path), pb);
            SetEnd e = end_of(pb.f);
            bool agree = end_equals_equalizer(pb.f);
            json r = report_base("end", {{"bifunctor", diagram_path}});
            r["tags"].push_back("end-equals-equalizer");
            r["result"]["families"] = e.families.size();
            r["result"]["legs_compatible"] = e.legs_compatible;
            r["result"]["equalizer_agrees"] = agree;
            if (!agree) throw ContractViolation("end disagrees with the equalizer");
            return emit(r, out_path);
        }
        if (*c_holim || *c_tot) {
            ParsedDiagram pd;
            parse_diagram(load_file(diagram_path), pd);
            std::string fl = *c_tot ? "BW" : flavor;
            std::string verb = *c_tot ? "tot" : "holim";
            json r = report_base(verb, {{"diagram", diagram_path},
                                        {"flavor", fl},
                                        {"truncate", truncate},
                                        {"out_dim", out_dim}});
            const SimplicialSet* ss = nullptr;
            TotResult tr;
            BkHolim bk;
            HolimT ht;
            if (fl == "BK") {
                bk = bk_holim(pd.d, truncate, out_dim);
                r["tags"].push_back("nerve-weighted-end-agrees");
                ss = &bk.tot.ss;
                r["result"]["stabilized"] = bk.tot.stabilized;
            } else if (fl == "BW") {
                FiniteCategory sd = subdivision_category(pd.shape);
                SSetDiagram ns = natural_system_of(pd.d, sd);
                tr = holim_bw(ns, pd.shape, sd, truncate, out_dim);
                ss = &tr.ss;
                r["result"]["stabilized"] = tr.stabilized;
            } else if (fl == "T") {
                DeltaCat dk = delta_over_category(pd.shape, truncate + 1);
                SSetDiagram dt;
                dt.shape = &dk.cat;
                for (const Chain& c : dk.chain_of)
                    dt.value.push_back(pd.d.value[size_t(chain_target(pd.shape, c))]);
                for (const auto& m : dk.cat.morphisms) {
                    int a = chain_target(pd.shape, dk.chain_of[size_t(m.src)]);
                    int b = chain_target(pd.shape, dk.chain_of[size_t(m.dst)]);
                    if (a == b) {
                        dt.action.push_back(
                            SimplicialMap::identity(dt.value[size_t(m.src)]));
                    } else {
                        int cm = -1;
                        for (int w = 0; w < int(pd.shape.morphisms.size()); ++w)
                            if (pd.shape.morphisms[size_t(w)].src == a &&
                                pd.shape.morphisms[size_t(w)].dst == b)
                                cm = w;
                        if (cm < 0)
                            throw ContractViolation(
                                "diagram does not factor through the target "
                                "projection: no morphism " +
                                pd.shape.objects[size_t(a)] + " -> " +
                                pd.shape.objects[size_t(b)]);
                        dt.action.push_back(pd.d.action[size_t(cm)]);
                    }
                }
                rebind_diagram(dt);
                dt.validate();
                ht = holim_t(dt, pd.shape, dk, truncate, out_dim);
                r["tags"].push_back("end-formula-agrees");
                ss = &ht.tot.ss;
                r["result"]["stabilized"] = ht.tot.stabilized;
            } else {  // hoend
                std::vector<std::vector<SimplicialSet>> vs;
                std::vector<std::vector<SimplicialMap>> ls, rs;
                SSetBifunctor bf = constant_left_bifunctor(pd.d, vs, ls, rs);
                FiniteCategory sd = subdivision_category(pd.shape);
                tr = homotopy_end(bf, sd, truncate, out_dim);
                ss = &tr.ss;
                r["result"]["stabilized"] = tr.stabilized;
            }
            r["tags"].push_back("tot-stabilized");
            r["result"]["cells"] = cell_counts(*ss);
            r["result"]["space"] = dump_sset(*ss);
            return emit(r, out_path);
        }
        if (*c_bw) {
            FiniteCategory k = parse_category(load_file(category_path));
            FiniteCategory sd = subdivision_category(k);
            json cj = load_file(coeff_path);
            NaturalSystem ns;
            if (cj.contains("constant")) {
                AbGroup g;
                g.rank = cj.at("constant").at("rank").get<int>();
                if (cj.at("constant").contains("torsion"))
                    g.torsion =
                        cj.at("constant").at("torsion").get<std::vector<long long>>();
                ns = constant_system(k, sd, g);
            } else {
                ns.k = &k;
                ns.sd = &sd;
                for (const auto& name : sd.objects) {
                    const json& gv = cj.at("values").at(name);
                    AbGroup g;
                    g.rank = gv.at("rank").get<int>();
                    if (gv.contains("torsion"))
                        g.torsion = gv.at("torsion").get<std::vector<long long>>();
                    ns.value.push_back(g);
                }
                for (size_t u = 0; u < sd.morphisms.size(); ++u) {
                    const auto& m = sd.morphisms[u];
                    int rows = ns.value[size_t(m.dst)].dim();
                    int cols = ns.value[size_t(m.src)].dim();
                    IntMatrix a(rows, cols);
                    if (cj.contains("matrices") &&
                        cj.at("matrices").contains(m.name)) {
                        auto t = cj.at("matrices")
                                     .at(m.name)
                                     .get<std::vector<std::vector<long long>>>();
                        for (int i = 0; i < rows; ++i)
                            for (int jj = 0; jj < cols; ++jj)
                                a.at(i, jj) = t.at(size_t(i)).at(size_t(jj));
                    } else if (sd.is_identity(int(u)) && rows == cols) {
                        for (int i = 0; i < rows; ++i) a.at(i, i) = 1;
                    } else {
                        throw ParseFailure("missing matrix for " + m.name);
                    }
                    ns.action.push_back(a);
                }
                ns.validate();
            }
            json r = report_base("bw-cohomology", {{"category", category_path},
                                                   {"coeff", coeff_path},
                                                   {"max_degree", max_degree}});
            r["tags"].push_back("cochain-of-cosimplicial-replacement");
            r["result"]["degrees"] = json::array();
            for (int n = 0; n <= max_degree; ++n)
                r["result"]["degrees"].push_back(
                    dump_group(bw_cohomology(ns, n, max_degree + 1)));
            return emit(r, out_path);
        }
        if (*c_kan) {
            json mj = load_file(map_path);
            SimplicialSet src = parse_sset(mj.at("src"));
            SimplicialSet tgt = parse_sset(mj.at("tgt"));
            SimplicialMap f;
            f.src = &src;
            f.tgt = &tgt;
            f.image = parse_image(src, tgt, mj.at("image"));
            std::string err;
            if (!f.valid(&err)) throw ContractViolation("invalid map: " + err);
            KanVerdict v = is_kan_fibration(f, horn_bound);
            json r = report_base("kan-check",
                                 {{"map", map_path}, {"horn_bound", v.bound}});
            r["tags"].push_back("horn-filler-search-exhaustive");
            r["result"]["pass"] = v.pass;
            r["result"]["witness"] = v.witness;
            return emit(r, out_path);
        }
        if (*c_hom) {
            SimplicialSet x = parse_sset(load_file(space_path));
            json r = report_base("homology", {{"space", space_path}});
            r["tags"].push_back("smith-normal-form-homology");
            r["result"]["degrees"] = json::array();
            for (const auto& g : homology(x))
                r["result"]["degrees"].push_back(dump_group(g));
            return emit(r, out_path);
        }
        if (*c_mo) {
            SimplicialSet k = parse_sset(load_file(domain_path));
            SimplicialSet x = parse_sset(load_file(space_path));
            MappingObject mo = mapping_object(k, x, bound);
            json r = report_base("map-object", {{"domain", domain_path},
                                                {"space", space_path},
                                                {"bound", bound}});
            r["tags"].push_back("mapping-object-classified");
            r["result"]["cells"] = cell_counts(mo.ss);
            r["result"]["space"] = dump_sset(mo.ss);
            return emit(r, out_path);
        }
        if (*c_factor) {
            json r = report_base("factor", {{"kind", kind}, {"map", map_path}});
            if (kind == "small-object") {
                if (horn_bound < 0) horn_bound = 2;
                json mj = load_file(map_path);
                SimplicialSet src = parse_sset(mj.at("src"));
                SimplicialSet tgt = parse_sset(mj.at("tgt"));
                SimplicialMap f;
                f.src = &src;
                f.tgt = &tgt;
                f.image = parse_image(src, tgt, mj.at("image"));
                FactorizationTrace t = small_object_factor(f, budget, horn_bound);
                r["config"]["budget"] = budget;
                r["config"]["horn_bound"] = horn_bound;
                r["tags"].push_back("budget-truncated-small-object");
                r["result"]["certified"] = t.certified;
                r["result"]["stages_used"] = t.stages_used;
                r["result"]["injective"] = t.injective;
                r["result"]["first_map_we_proxy"] = t.anodyne.pass;
                r["result"]["second_map_kan"] = t.fibration.pass;
                json stages = json::array();
                for (size_t s = 0; s < t.attached.size(); ++s)
                    stages.push_back({{"attached_squares", t.attached[s].size()},
                                      {"cells", cell_counts(t.spaces[s + 1])}});
                r["result"]["stages"] = stages;
                int rc = emit(r, out_path);
                if (!t.certified) return 4;
                return rc;
            }
            ChainMap f = parse_chain_map(load_file(map_path));
            Factorization fac =
                kind == "cylinder" ? factor_cylinder(f) : factor_path(f);
            r["tags"].push_back(kind == "cylinder" ? "cofibration-then-quasi-iso"
                                                   : "quasi-iso-then-fibration");
            r["result"]["middle"] = dump_complex(fac.first.tgt);
            r["result"]["first"] = dump_structure(classify(fac.first));
            r["result"]["second"] = dump_structure(classify(fac.second));
            bool ok = kind == "cylinder"
                          ? classify(fac.first).is_cof && classify(fac.second).is_we
                          : classify(fac.first).is_we && classify(fac.second).is_fib;
            if (!ok) throw ContractViolation("factorization verdicts are wrong");
            return emit(r, out_path);
        }
        if (*c_pi || *c_hh) {
            ChainComplex a = parse_complex(load_file(a_path));
            ChainComplex b = parse_complex(load_file(b_path));
            PiSet ps = pi(a, b);
            std::string verb = *c_pi ? "pi" : "ho-hom";
            json r = report_base(verb, {{"a", a_path}, {"b", b_path}});
            r["tags"].push_back("homotopy-classes-of-chain-maps");
            r["result"]["hom_dimension"] = ps.hom.size();
            r["result"]["homotopy_subspace_rank"] = ps.subspace_rank;
            r["result"]["classes"] = ps.count();
            if (*c_hh) {
                // over a field every object is both fibrant and cofibrant, so
                // homotopy classes are exactly the homotopy-category hom set
                r["tags"].push_back("all-objects-bifibrant");
            }
            return emit(r, out_path);
        }
        if (*c_check) {
            unsigned long long seed = env_seed();
            json r = report_base(
                "check", {{"suite", suite}, {"count", count}, {"seed", seed}});
            r["tags"].push_back("seeded-property-suite");
            r["result"] = run_suite(suite, count, seed);
            int rc = emit(r, out_path);
            if (!r["result"]["pass"].get<bool>()) return 3;
            return rc;
        }
    } catch (const ParseFailure& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NotCertified& e) {
        std::cerr << "not certified: " << e.what() << "\n";
        return 4;
    } catch (const ContractViolation& e) {
        std::string msg = e.what();
        if (msg.find("not stabilized") != std::string::npos ||
            msg.find("refus") != std::string::npos) {
            std::cerr << "not certified: " << msg << "\n";
            return 4;
        }
        std::cerr << "invariant violation: " << msg << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
