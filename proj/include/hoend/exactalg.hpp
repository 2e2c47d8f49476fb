#pragma once

// Exact linear algebra over Z and prime fields: Smith normal form,
// kernels, images and solving. Everything is arbitrary precision on
// the integer side; prime fields use machine words.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hoend {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(size_t(rows) * size_t(cols)) {}

    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    BigInt& at(int r, int c) { return entries_[size_t(r) * cols_ + c]; }
    const BigInt& at(int r, int c) const { return entries_[size_t(r) * cols_ + c]; }

    IntMatrix operator*(const IntMatrix& other) const;
    bool operator==(const IntMatrix& other) const;

    IntMatrix transpose() const;
    bool is_zero() const;

    // Determinant by fraction-free Gaussian elimination (Bareiss).
    BigInt det() const;

private:
    int rows_, cols_;
    std::vector<BigInt> entries_;
};

struct SmithResult {
    IntMatrix u;  // unimodular, rows x rows
    IntMatrix d;  // diagonal with divisibility chain
    IntMatrix v;  // unimodular, cols x cols
    int rank = 0;
    std::vector<BigInt> divisors;  // nonzero diagonal entries d_1 | d_2 | ...
};

// U * m * V = D with U, V unimodular; d_1 | d_2 | ... | d_r.
// Pivoting picks the smallest nonzero absolute value.
SmithResult smith_normal_form(const IntMatrix& m);

// Basis for {x in Z^cols : m x = 0}, columns of the result.
IntMatrix int_kernel_basis(const IntMatrix& m);

// Rank and elementary divisors without the transform matrices; works on
// sparse rows, so it handles much larger matrices than smith_normal_form.
std::pair<int, std::vector<BigInt>> rank_and_divisors(const IntMatrix& m);

// One integer solution of m x = b, if any.
std::optional<std::vector<BigInt>> int_solve(const IntMatrix& m,
                                             const std::vector<BigInt>& b);

// Invariants of a finitely generated abelian group given as
// span(K) / span(L) in Z^n, where the columns of L lie in the column
// span of K (checked).  Returns free rank and torsion coefficients > 1.
struct GroupInvariants {
    int betti = 0;
    std::vector<BigInt> torsion;
    bool operator==(const GroupInvariants& o) const {
        return betti == o.betti && torsion == o.torsion;
    }
};
GroupInvariants lattice_quotient(const IntMatrix& k_basis, const IntMatrix& l);

// Quotient ker(d_out) / im(d_in) for integer matrices with d_out * d_in = 0.
GroupInvariants integer_homology(const IntMatrix& d_out, const IntMatrix& d_in);

// ---------------------------------------------------------------------------
// Prime fields.

class FieldMatrix {
public:
    FieldMatrix() : p_(2), rows_(0), cols_(0) {}
    FieldMatrix(long long p, int rows, int cols);

    static FieldMatrix identity(long long p, int n);
    static FieldMatrix from_rows(long long p, const std::vector<std::vector<long long>>& rows);

    long long prime() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    long long& at(int r, int c) { return entries_[size_t(r) * cols_ + c]; }
    long long at(int r, int c) const { return entries_[size_t(r) * cols_ + c]; }

    FieldMatrix operator*(const FieldMatrix& other) const;
    FieldMatrix operator+(const FieldMatrix& other) const;
    FieldMatrix operator-(const FieldMatrix& other) const;
    bool operator==(const FieldMatrix& other) const;
    bool is_zero() const;

    int rank() const;

private:
    long long p_;
    int rows_, cols_;
    std::vector<long long> entries_;
};

long long field_inv(long long a, long long p);

// Independent vectors spanning {v : m v = 0}; size = cols - rank.
std::vector<std::vector<long long>> kernel_basis(const FieldMatrix& m);

// x with m x = b, or nullopt.  The solution returned is the one from
// back substitution with free variables set to zero (deterministic).
std::optional<std::vector<long long>> solve(const FieldMatrix& m,
                                            const std::vector<long long>& b);

// Particular solution plus kernel basis of the homogeneous system,
// for enumerating the full solution set.
struct AffineSolutions {
    std::vector<long long> particular;
    std::vector<std::vector<long long>> kernel;
};
std::optional<AffineSolutions> solve_affine(const FieldMatrix& m,
                                            const std::vector<long long>& b);

}  // namespace hoend
