#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace varharm {

/// Uniform cell-centered grid on the box [-L, L]^n, n in {1, 2}.
/// Points per axis N, spacing h = 2L/N, node k at -L + (k + 1/2) h.
class Grid {
public:
    Grid(int dim, double half_width, int points_per_axis);

    int dim() const { return dim_; }
    double half_width() const { return half_width_; }
    int points_per_axis() const { return n_axis_; }
    double spacing() const { return h_; }
    std::size_t size() const { return size_; }

    double axis_coord(int k) const { return -half_width_ + (k + 0.5) * h_; }

    std::array<double, 2> point(std::size_t flat) const {
        if (dim_ == 1) return {axis_coord(static_cast<int>(flat)), 0.0};
        return {axis_coord(static_cast<int>(flat / n_axis_)),
                axis_coord(static_cast<int>(flat % n_axis_))};
    }

    std::size_t index(int i, int j = 0) const {
        return dim_ == 1 ? static_cast<std::size_t>(i)
                         : static_cast<std::size_t>(i) * n_axis_ + j;
    }

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && half_width_ == o.half_width_ && n_axis_ == o.n_axis_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int dim_;
    double half_width_;
    int n_axis_;
    double h_;
    std::size_t size_;
};

/// Real-valued samples on a Grid; all entries finite. Row-major for n = 2.
class GridFunction {
public:
    explicit GridFunction(const Grid& g) : grid_(g), values_(g.size(), 0.0) {}
    GridFunction(const Grid& g, std::vector<double> values);

    static GridFunction from_fn(const Grid& g,
                                const std::function<double(std::array<double, 2>)>& fn);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double max_abs() const;
    void check_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Euclidean ball; |B| = 2r (n=1) or pi r^2 (n=2).
struct Ball {
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;

    Ball(double cx, double r) : center{cx, 0.0}, radius(r) {}
    Ball(double cx, double cy, double r) : center{cx, cy}, radius(r) {}
    Ball(std::array<double, 2> c, double r) : center(c), radius(r) {}

    double volume(int dim) const;
    bool contains(std::array<double, 2> x, int dim) const;
};

/// n x n orthogonal matrix, validated on construction
/// (A^T A = I and |det A| = 1, entrywise within 1e-12).
class OrthogonalMatrix {
public:
    OrthogonalMatrix(int dim, std::vector<double> row_major);

    static OrthogonalMatrix identity(int dim);
    static OrthogonalMatrix reflection_1d();                 // x -> -x
    static OrthogonalMatrix scalar_1d(double s);             // s = +-1
    static OrthogonalMatrix rotation_2d(double theta);
    static OrthogonalMatrix reflection_2d(double axis_angle);

    int dim() const { return dim_; }
    double entry(int i, int j) const { return a_[i * dim_ + j]; }
    const std::vector<double>& row_major() const { return a_; }

    std::array<double, 2> apply(std::array<double, 2> x) const;
    std::array<double, 2> apply_transpose(std::array<double, 2> x) const;

    OrthogonalMatrix transpose() const;
    bool operator==(const OrthogonalMatrix& o) const {
        return dim_ == o.dim_ && a_ == o.a_;
    }

private:
    int dim_;
    std::vector<double> a_;
};

/// Deterministic pairwise-tree sum; independent of thread count by construction.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

/// Characteristic function of `ball` sampled by the cell-center rule.
/// Throws std::domain_error if no grid point lies in the ball.
GridFunction indicator(const Grid& g, const Ball& ball);

/// Midpoint quadrature h^n * sum over `region` (whole box if absent).
double integrate(const GridFunction& f, const std::optional<Ball>& region = std::nullopt);

/// x -> f(A^{-1} x) by multilinear interpolation; zero outside the box.
GridFunction pullback(const GridFunction& f, const OrthogonalMatrix& A);

}  // namespace varharm
