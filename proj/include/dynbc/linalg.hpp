#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>
#include <string>

namespace dynbc {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Compressed matrix from triplets; duplicate (row, col) pairs are summed in
/// input order, so equal input gives bitwise-equal output.
SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

/// Reusable direct factorization of a square sparse matrix.
///
/// `Spd` uses a simplicial LDL^T without pivoting and is meant for symmetric
/// positive definite matrices. `Indefinite` uses a supernodal LU with partial
/// pivoting and handles the symmetric saddle-point systems of the monolithic
/// scheme. After construction the object is immutable; concurrent `solve`
/// calls are safe.
class Factorization {
public:
    enum class Kind { Spd, Indefinite };

    Factorization();
    explicit Factorization(const SparseMatrix& a, Kind kind = Kind::Spd);
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;

    /// Numeric refactorization for a matrix with the same sparsity pattern.
    void refactor(const SparseMatrix& a);

    Vector solve(const Vector& b) const;

    int rows() const noexcept { return n_; }
    Kind kind() const noexcept { return kind_; }
    bool empty() const noexcept { return n_ < 0; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Kind kind_ = Kind::Spd;
    int n_ = -1;
};

Factorization factorize(const SparseMatrix& a, Factorization::Kind kind = Factorization::Kind::Spd);

/// sqrt(x^T M x), with tiny negative round-off clamped to zero.
double weighted_norm(const Vector& x, const SparseMatrix& m);

/// Coordinate-format dump "row col value" for debugging.
std::string format_coordinates(const SparseMatrix& m);

/// Contiguous sub-block [r0, r0+nr) x [c0, c0+nc).
SparseMatrix block(const SparseMatrix& m, int r0, int c0, int nr, int nc);

/// Largest |a_ij - a_ji|.
double asymmetry(const SparseMatrix& m);

}  // namespace dynbc
