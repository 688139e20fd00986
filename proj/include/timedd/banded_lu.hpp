#pragma once

#include "timedd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace timedd {

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
///
/// Rows are stored in a window of width 2*lower + upper + 1 starting at
/// column i - lower, which leaves room for the fill-in created by row
/// interchanges during partial pivoting (same trick as LAPACK's gbtrf).
template <class Real>
class BandMatrix {
public:
    BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
        : n_(n), lower_(lower), upper_(upper), width_(2 * lower + upper + 1),
          data_(n * width_, Real{0}) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return lower_; }
    std::size_t upper() const noexcept { return upper_; }

    /// True if (i, j) lies inside the declared band.
    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + lower_ >= i && j <= i + upper_;
    }

    Real& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    Real operator()(std::size_t i, std::size_t j) const {
        return in_window(i, j) ? data_[index(i, j)] : Real{0};
    }

private:
    template <class>
    friend class BandLU;

    bool in_window(std::size_t i, std::size_t j) const noexcept {
        return j + lower_ >= i && j <= i + lower_ + upper_;
    }
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * width_ + (j + lower_ - i);
    }

    std::size_t n_;
    std::size_t lower_;
    std::size_t upper_;
    std::size_t width_;
    std::vector<Real> data_;
};

/// LU factorization with partial pivoting of a BandMatrix.
///
/// Multipliers are kept in the rows where they were produced; solve()
/// replays the interchanges step by step, so L is never permuted.
template <class Real>
class BandLU {
public:
    explicit BandLU(BandMatrix<Real> a) : lu_(std::move(a)), pivots_(lu_.size()) {
        const std::size_t n = lu_.size();
        const std::size_t kl = lu_.lower_;
        const std::size_t span = lu_.lower_ + lu_.upper_;

        Real scale{0};
        for (Real v : lu_.data_) scale = std::max(scale, std::abs(v));
        const Real tiny = scale * std::numeric_limits<Real>::epsilon() * static_cast<Real>(n);

        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t last_row = std::min(n - 1, k + kl);
            const std::size_t last_col = std::min(n - 1, k + span);

            std::size_t p = k;
            for (std::size_t i = k + 1; i <= last_row; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
            pivots_[k] = p;

            if (!(std::abs(lu_(p, k)) > tiny))
                throw SingularSystem("band LU: zero pivot in column " + std::to_string(k));

            if (p != k)
                for (std::size_t j = k; j <= last_col; ++j) std::swap(lu_(k, j), lu_(p, j));

            const Real pivot = lu_(k, k);
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                const Real m = lu_(i, k) / pivot;
                lu_(i, k) = m;
                if (m == Real{0}) continue;
                for (std::size_t j = k + 1; j <= last_col; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    std::size_t size() const noexcept { return lu_.size(); }

    /// Overwrites `rhs` with the solution of A x = rhs.
    void solve_in_place(std::span<Real> rhs) const {
        const std::size_t n = lu_.size();
        if (rhs.size() != n) throw InvalidConfig("band LU: right-hand side has wrong length");
        const std::size_t kl = lu_.lower_;
        const std::size_t span = lu_.lower_ + lu_.upper_;

        for (std::size_t k = 0; k < n; ++k) {
            if (pivots_[k] != k) std::swap(rhs[k], rhs[pivots_[k]]);
            const std::size_t last_row = std::min(n - 1, k + kl);
            for (std::size_t i = k + 1; i <= last_row; ++i) rhs[i] -= lu_(i, k) * rhs[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            const std::size_t last_col = std::min(n - 1, k + span);
            Real acc = rhs[k];
            for (std::size_t j = k + 1; j <= last_col; ++j) acc -= lu_(k, j) * rhs[j];
            rhs[k] = acc / lu_(k, k);
        }
    }

    std::vector<Real> solve(std::span<const Real> rhs) const {
        std::vector<Real> x(rhs.begin(), rhs.end());
        solve_in_place(x);
        return x;
    }

private:
    BandMatrix<Real> lu_;
    std::vector<std::size_t> pivots_;
};

}  // namespace timedd
