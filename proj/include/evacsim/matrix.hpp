#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "evacsim/errors.hpp"

namespace evacsim {

/// Sentinel for unreachable / forbidden entries. Compares greater than any
/// finite cost and serializes as the literal string "inf".
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Dense square matrix of doubles, row-major. Every network-level matrix
/// (connectivity, distance, train time, evacuation cost, flow) is indexed by
/// the canonical station index of the NetworkModel it was built from.
class SquareMatrix {
  public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), values_(n * n, fill) {}

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

    bool operator==(const SquareMatrix&) const = default;

    const std::vector<double>& data() const { return values_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

inline void require_same_size(const SquareMatrix& a, const SquareMatrix& b, const char* what) {
    if (a.size() != b.size()) {
        throw ContractError(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

/// Comma-separated n x n dump, row i = origin i, 6 decimal places,
/// "inf" for unreachable entries.
inline void write_matrix_csv(std::ostream& out, const SquareMatrix& m) {
    char buf[64];
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j > 0) out << ',';
            const double v = m(i, j);
            if (std::isinf(v)) {
                out << "inf";
            } else {
                std::snprintf(buf, sizeof(buf), "%.6f", v);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace evacsim
