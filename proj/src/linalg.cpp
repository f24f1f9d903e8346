#include "dynbc/linalg.hpp"

#include "dynbc/errors.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>

namespace dynbc {

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

/// First column without any stored nonzero, or -1.
int first_empty_column(const SparseMatrix& a) {
    for (int j = 0; j < a.outerSize(); ++j) {
        bool any = false;
        for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
            if (it.value() != 0.0) {
                any = true;
                break;
            }
        }
        if (!any) return j;
    }
    return -1;
}

}  // namespace

struct Factorization::Impl {
    std::variant<Ldlt, Lu> solver;
    Eigen::Index analyzed_nnz = -1;

    explicit Impl(Kind kind) {
        if (kind == Kind::Indefinite) solver.emplace<Lu>();
    }
};

Factorization::Factorization() = default;
Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Factorization::Factorization(const SparseMatrix& a, Kind kind) : impl_(std::make_unique<Impl>(kind)), kind_(kind) {
    if (a.rows() != a.cols()) {
        throw DimensionError("factorize: matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    n_ = static_cast<int>(a.rows());
    refactor(a);
}

void Factorization::refactor(const SparseMatrix& a) {
    if (!impl_) {
        throw FactorizationError("refactor called on an empty factorization");
    }
    if (a.rows() != n_ || a.cols() != n_) {
        throw DimensionError("refactor: dimension changed");
    }
    if (const int j = first_empty_column(a); j >= 0) {
        throw FactorizationError("zero pivot: column " + std::to_string(j) + " is structurally empty");
    }
    if (a.nonZeros() != impl_->analyzed_nnz) {
        std::visit([&](auto& s) { s.analyzePattern(a); }, impl_->solver);
        impl_->analyzed_nnz = a.nonZeros();
    }
    if (auto* ldlt = std::get_if<Ldlt>(&impl_->solver)) {
        ldlt->factorize(a);
        if (ldlt->info() != Eigen::Success) {
            throw FactorizationError("zero pivot in LDL^T factorization (matrix singular or not definite)");
        }
        const Vector d = ldlt->vectorD();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (!(d[i] != 0.0) || !std::isfinite(d[i])) {
                throw FactorizationError("zero pivot at permuted index " + std::to_string(i));
            }
        }
    } else {
        auto& lu = std::get<Lu>(impl_->solver);
        lu.factorize(a);
        if (lu.info() != Eigen::Success) {
            throw FactorizationError("zero pivot in LU factorization: " + lu.lastErrorMessage());
        }
    }
}

Vector Factorization::solve(const Vector& b) const {
    if (!impl_) {
        throw FactorizationError("solve called on an empty factorization");
    }
    if (b.size() != n_) {
        throw DimensionError("solve: rhs has size " + std::to_string(b.size()) + ", expected " + std::to_string(n_));
    }
    return std::visit([&](const auto& s) -> Vector { return s.solve(b); }, impl_->solver);
}

Factorization factorize(const SparseMatrix& a, Factorization::Kind kind) {
    return Factorization(a, kind);
}

double weighted_norm(const Vector& x, const SparseMatrix& m) {
    if (m.rows() != x.size() || m.cols() != x.size()) {
        throw DimensionError("weighted_norm: vector size " + std::to_string(x.size()) + " vs matrix " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const double q = x.dot(m * x);
    return std::sqrt(std::max(q, 0.0));
}

std::string format_coordinates(const SparseMatrix& m) {
    std::ostringstream os;
    char buf[96];
    for (int j = 0; j < m.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()),
                          it.value());
            os << buf;
        }
    }
    return os.str();
}

SparseMatrix block(const SparseMatrix& m, int r0, int c0, int nr, int nc) {
    SparseMatrix b = m.block(r0, c0, nr, nc);
    b.makeCompressed();
    return b;
}

double asymmetry(const SparseMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const SparseMatrix d = SparseMatrix(m.transpose()) - m;
    double out = 0.0;
    for (int j = 0; j < d.outerSize(); ++j) {
        for (SparseMatrix::InnerIterator it(d, j); it; ++it) out = std::max(out, std::abs(it.value()));
    }
    return out;
}

}  // namespace dynbc
