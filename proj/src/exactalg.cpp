#include "hoend/exactalg.hpp"

#include <algorithm>
#include <cassert>

namespace hoend {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    int r = int(rows.size());
    int c = r ? int(rows[0].size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (int(rows[i].size()) != c) throw std::invalid_argument("ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("dimension mismatch");
    IntMatrix out(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const BigInt& a = at(i, k);
            if (a == 0) continue;
            for (int j = 0; j < other.cols_; ++j) out.at(i, j) += a * other.at(k, j);
        }
    return out;
}

bool IntMatrix::operator==(const IntMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

bool IntMatrix::is_zero() const {
    for (const auto& e : entries_)
        if (e != 0) return false;
    return true;
}

BigInt IntMatrix::det() const {
    if (rows_ != cols_) throw std::invalid_argument("det of nonsquare matrix");
    int n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { swap = i; break; }
            if (swap < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(swap, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                BigInt num = a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j);
                a.at(i, j) = num / prev;
            }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

namespace {

struct SnfState {
    IntMatrix a, u, v;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < a.cols(); ++c) std::swap(a.at(i, c), a.at(j, c));
        for (int c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < a.rows(); ++r) std::swap(a.at(r, i), a.at(r, j));
        for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    }
    void add_row(int dst, int src, const BigInt& q) {  // row dst += q * row src
        if (q == 0) return;
        for (int c = 0; c < a.cols(); ++c) a.at(dst, c) += q * a.at(src, c);
        for (int c = 0; c < u.cols(); ++c) u.at(dst, c) += q * u.at(src, c);
    }
    void add_col(int dst, int src, const BigInt& q) {
        if (q == 0) return;
        for (int r = 0; r < a.rows(); ++r) a.at(r, dst) += q * a.at(r, src);
        for (int r = 0; r < v.rows(); ++r) v.at(r, dst) += q * v.at(r, src);
    }
    void negate_row(int i) {
        for (int c = 0; c < a.cols(); ++c) a.at(i, c) = -a.at(i, c);
        for (int c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    }
};

BigInt babs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    SnfState s{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.cols())};
    int n = std::min(m.rows(), m.cols());
    int t = 0;
    for (; t < n; ++t) {
        // smallest-absolute-value nonzero pivot in the remaining block
        int pr = -1, pc = -1;
        BigInt best = 0;
        for (int i = t; i < m.rows(); ++i)
            for (int j = t; j < m.cols(); ++j) {
                const BigInt& e = s.a.at(i, j);
                if (e == 0) continue;
                BigInt ae = babs(e);
                if (pr < 0 || ae < best) { pr = i; pc = j; best = ae; }
            }
        if (pr < 0) break;
        s.swap_rows(t, pr);
        s.swap_cols(t, pc);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < m.rows(); ++i) {
                BigInt q = s.a.at(i, t) / s.a.at(t, t);
                s.add_row(i, t, -q);
                if (s.a.at(i, t) != 0) {
                    s.swap_rows(t, i);  // remainder is strictly smaller
                    clean = false;
                }
            }
            for (int j = t + 1; j < m.cols(); ++j) {
                BigInt q = s.a.at(t, j) / s.a.at(t, t);
                s.add_col(j, t, -q);
                if (s.a.at(t, j) != 0) {
                    s.swap_cols(t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // divisibility: d_t must divide the rest of the block
            for (int i = t + 1; i < m.rows() && clean; ++i)
                for (int j = t + 1; j < m.cols() && clean; ++j)
                    if (s.a.at(i, j) % s.a.at(t, t) != 0) {
                        s.add_row(t, i, 1);
                        clean = false;
                    }
        }
        if (s.a.at(t, t) < 0) s.negate_row(t);
    }
    SmithResult out;
    out.u = s.u;
    out.d = s.a;
    out.v = s.v;
    out.rank = t;
    for (int i = 0; i < t; ++i) out.divisors.push_back(s.a.at(i, i));
    return out;
}

IntMatrix int_kernel_basis(const IntMatrix& m) {
    SmithResult snf = smith_normal_form(m);
    int free = m.cols() - snf.rank;
    IntMatrix out(m.cols(), free);
    for (int j = 0; j < free; ++j)
        for (int i = 0; i < m.cols(); ++i) out.at(i, j) = snf.v.at(i, snf.rank + j);
    return out;
}

std::optional<std::vector<BigInt>> int_solve(const IntMatrix& m,
                                             const std::vector<BigInt>& b) {
    if (int(b.size()) != m.rows()) throw std::invalid_argument("dimension mismatch");
    SmithResult snf = smith_normal_form(m);
    // m x = b  <=>  D y = U b, x = V y
    std::vector<BigInt> ub(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.rows(); ++j) ub[i] += snf.u.at(i, j) * b[j];
    std::vector<BigInt> y(m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        if (i < snf.rank) {
            if (ub[i] % snf.d.at(i, i) != 0) return std::nullopt;
            y[i] = ub[i] / snf.d.at(i, i);
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<BigInt> x(m.cols());
    for (int i = 0; i < m.cols(); ++i)
        for (int j = 0; j < m.cols(); ++j) x[i] += snf.v.at(i, j) * y[j];
    return x;
}

GroupInvariants lattice_quotient(const IntMatrix& k_basis, const IntMatrix& l) {
    // Express every column of l in the basis k: k_basis * C = l.
    int k = k_basis.cols();
    IntMatrix c(k, l.cols());
    for (int j = 0; j < l.cols(); ++j) {
        std::vector<BigInt> col(l.rows());
        for (int i = 0; i < l.rows(); ++i) col[i] = l.at(i, j);
        auto sol = int_solve(k_basis, col);
        if (!sol) throw std::invalid_argument("l not contained in span(k)");
        for (int i = 0; i < k; ++i) c.at(i, j) = (*sol)[i];
    }
    SmithResult snf = smith_normal_form(c);
    GroupInvariants g;
    g.betti = k - snf.rank;
    for (const auto& d : snf.divisors)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

// Unit pivots chosen by Markowitz cost are eliminated cheaply on sparse
// rows, and whatever small block remains goes through the dense routine.
// The divisibility chain is preserved because every early divisor is 1.
std::pair<int, std::vector<BigInt>> rank_and_divisors(const IntMatrix& m) {
    int R = m.rows(), C = m.cols();
    std::vector<std::map<int, BigInt>> row(static_cast<size_t>(std::max(R, 0)));
    std::vector<std::set<int>> colrows(static_cast<size_t>(std::max(C, 0)));
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j)
            if (m.at(i, j) != 0) {
                row[size_t(i)][j] = m.at(i, j);
                colrows[size_t(j)].insert(i);
            }
    int unit_pivots = 0;
    for (;;) {
        int pr = -1, pc = -1;
        long long best = -1;
        for (int i = 0; i < R; ++i)
            for (const auto& [j, v] : row[size_t(i)]) {
                if (!(v == 1 || v == -1)) continue;
                long long cost = (long long)(row[size_t(i)].size() - 1) *
                                 (long long)(colrows[size_t(j)].size() - 1);
                if (pr < 0 || cost < best) { pr = i; pc = j; best = cost; }
            }
        if (pr < 0) break;
        BigInt pv = row[size_t(pr)].at(pc);
        std::vector<int> touched(colrows[size_t(pc)].begin(), colrows[size_t(pc)].end());
        for (int r : touched) {
            if (r == pr) continue;
            BigInt q = row[size_t(r)].at(pc) * pv;  // pv is +-1
            for (const auto& [j, v] : row[size_t(pr)]) {
                auto it = row[size_t(r)].find(j);
                BigInt nv = (it == row[size_t(r)].end() ? BigInt(0) : it->second) - q * v;
                if (nv == 0) {
                    if (it != row[size_t(r)].end()) {
                        row[size_t(r)].erase(it);
                        colrows[size_t(j)].erase(r);
                    }
                } else {
                    if (it == row[size_t(r)].end()) colrows[size_t(j)].insert(r);
                    row[size_t(r)][j] = nv;
                }
            }
        }
        for (const auto& [j, v] : row[size_t(pr)]) colrows[size_t(j)].erase(pr);
        row[size_t(pr)].clear();
        ++unit_pivots;
    }
    // leftover block with no unit entries
    std::vector<int> rs, cs;
    std::map<int, int> cidx;
    for (int i = 0; i < R; ++i)
        if (!row[size_t(i)].empty()) rs.push_back(i);
    for (int j = 0; j < C; ++j)
        if (!colrows[size_t(j)].empty()) {
            cidx[j] = int(cs.size());
            cs.push_back(j);
        }
    IntMatrix rest(int(rs.size()), int(cs.size()));
    for (size_t i = 0; i < rs.size(); ++i)
        for (const auto& [j, v] : row[size_t(rs[i])]) rest.at(int(i), cidx.at(j)) = v;
    SmithResult snf = smith_normal_form(rest);
    std::vector<BigInt> divisors(static_cast<size_t>(unit_pivots), BigInt(1));
    divisors.insert(divisors.end(), snf.divisors.begin(), snf.divisors.end());
    return {unit_pivots + snf.rank, divisors};
}

GroupInvariants integer_homology(const IntMatrix& d_out, const IntMatrix& d_in) {
    // The image of d_in lies in ker(d_out), and the kernel of an integer
    // matrix is a pure submodule of the chain group, so the elementary
    // divisors of d_in computed in the whole group are exactly the torsion
    // coefficients of ker/im; the free rank follows from the two ranks.
    auto in = rank_and_divisors(d_in);
    int rank_out = rank_and_divisors(d_out).first;
    GroupInvariants g;
    g.betti = d_out.cols() - rank_out - in.first;
    for (const auto& d : in.second)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

// ---------------------------------------------------------------------------

FieldMatrix::FieldMatrix(long long p, int rows, int cols)
    : p_(p), rows_(rows), cols_(cols), entries_(size_t(rows) * size_t(cols), 0) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
}

FieldMatrix FieldMatrix::identity(long long p, int n) {
    FieldMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FieldMatrix FieldMatrix::from_rows(long long p,
                                   const std::vector<std::vector<long long>>& rows) {
    int r = int(rows.size());
    int c = r ? int(rows[0].size()) : 0;
    FieldMatrix m(p, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = ((rows[i][j] % p) + p) % p;
    return m;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& other) const {
    if (cols_ != other.rows_ || p_ != other.p_)
        throw std::invalid_argument("dimension/prime mismatch");
    FieldMatrix out(p_, rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            long long a = at(i, k);
            if (!a) continue;
            for (int j = 0; j < other.cols_; ++j)
                out.at(i, j) = (out.at(i, j) + a * other.at(k, j)) % p_;
        }
    return out;
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_ || p_ != other.p_)
        throw std::invalid_argument("dimension/prime mismatch");
    FieldMatrix out(p_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = (entries_[i] + other.entries_[i]) % p_;
    return out;
}

FieldMatrix FieldMatrix::operator-(const FieldMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_ || p_ != other.p_)
        throw std::invalid_argument("dimension/prime mismatch");
    FieldMatrix out(p_, rows_, cols_);
    for (size_t i = 0; i < entries_.size(); ++i)
        out.entries_[i] = ((entries_[i] - other.entries_[i]) % p_ + p_) % p_;
    return out;
}

bool FieldMatrix::operator==(const FieldMatrix& other) const {
    return p_ == other.p_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           entries_ == other.entries_;
}

bool FieldMatrix::is_zero() const {
    for (long long e : entries_)
        if (e) return false;
    return true;
}

long long field_inv(long long a, long long p) {
    long long t = 0, newt = 1, r = p, newr = ((a % p) + p) % p;
    while (newr != 0) {
        long long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw std::invalid_argument("not invertible");
    return ((t % p) + p) % p;
}

namespace {

// Row reduction; returns pivot columns.  Optionally carries b along.
std::vector<int> rref(FieldMatrix& m, std::vector<long long>* b) {
    long long p = m.prime();
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pr = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m.at(i, col)) { pr = i; break; }
        if (pr < 0) continue;
        if (pr != row) {
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(row, j), m.at(pr, j));
            if (b) std::swap((*b)[row], (*b)[pr]);
        }
        long long inv = field_inv(m.at(row, col), p);
        for (int j = 0; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv % p;
        if (b) (*b)[row] = (*b)[row] * inv % p;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || !m.at(i, col)) continue;
            long long f = m.at(i, col);
            for (int j = 0; j < m.cols(); ++j)
                m.at(i, j) = ((m.at(i, j) - f * m.at(row, j)) % p + p) % p;
            if (b) (*b)[i] = (((*b)[i] - f * (*b)[row]) % p + p) % p;
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

int FieldMatrix::rank() const {
    FieldMatrix m = *this;
    return int(rref(m, nullptr).size());
}

std::vector<std::vector<long long>> kernel_basis(const FieldMatrix& m) {
    FieldMatrix r = m;
    std::vector<int> pivots = rref(r, nullptr);
    long long p = m.prime();
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<long long>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<long long> v(m.cols(), 0);
        v[free] = 1;
        for (size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = ((-r.at(int(i), free)) % p + p) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<AffineSolutions> solve_affine(const FieldMatrix& m,
                                            const std::vector<long long>& b) {
    if (int(b.size()) != m.rows()) throw std::invalid_argument("dimension mismatch");
    FieldMatrix r = m;
    std::vector<long long> rb = b;
    for (auto& x : rb) x = ((x % m.prime()) + m.prime()) % m.prime();
    std::vector<int> pivots = rref(r, &rb);
    for (int i = int(pivots.size()); i < m.rows(); ++i)
        if (rb[i]) return std::nullopt;
    AffineSolutions s;
    s.particular.assign(m.cols(), 0);
    for (size_t i = 0; i < pivots.size(); ++i) s.particular[pivots[i]] = rb[i];
    s.kernel = kernel_basis(m);
    return s;
}

std::optional<std::vector<long long>> solve(const FieldMatrix& m,
                                            const std::vector<long long>& b) {
    auto s = solve_affine(m, b);
    if (!s) return std::nullopt;
    return s->particular;
}

}  // namespace hoend
