#include "varharm/grid.hpp"

#include <cmath>
#include <numbers>

namespace varharm {

Grid::Grid(int dim, double half_width, int points_per_axis)
    : dim_(dim), half_width_(half_width), n_axis_(points_per_axis) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("Grid: half-width must be positive");
    if (points_per_axis < 16) throw std::invalid_argument("Grid: need at least 16 points per axis");
    h_ = 2.0 * half_width_ / n_axis_;
    size_ = 1;
    for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_axis_);
}

GridFunction::GridFunction(const Grid& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("GridFunction: value count does not match grid");
    check_finite();
}

GridFunction GridFunction::from_fn(const Grid& g,
                                   const std::function<double(std::array<double, 2>)>& fn) {
    GridFunction out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = fn(g.point(i));
    out.check_finite();
    return out;
}

void GridFunction::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Ball::volume(int dim) const {
    return dim == 1 ? 2.0 * radius : std::numbers::pi * radius * radius;
}

bool Ball::contains(std::array<double, 2> x, int dim) const {
    double d2 = (x[0] - center[0]) * (x[0] - center[0]);
    if (dim == 2) d2 += (x[1] - center[1]) * (x[1] - center[1]);
    return d2 <= radius * radius;
}

OrthogonalMatrix::OrthogonalMatrix(int dim, std::vector<double> row_major)
    : dim_(dim), a_(std::move(row_major)) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("OrthogonalMatrix: dim must be 1 or 2");
    if (a_.size() != static_cast<std::size_t>(dim * dim))
        throw std::invalid_argument("OrthogonalMatrix: entry count mismatch");
    const double tol = 1e-12;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            double dot = 0.0;
            for (int k = 0; k < dim_; ++k) dot += entry(k, i) * entry(k, j);
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("OrthogonalMatrix: A^T A != I");
        }
    double det = dim_ == 1 ? a_[0] : a_[0] * a_[3] - a_[1] * a_[2];
    if (std::abs(std::abs(det) - 1.0) > tol)
        throw std::invalid_argument("OrthogonalMatrix: |det| != 1");
}

OrthogonalMatrix OrthogonalMatrix::identity(int dim) {
    return dim == 1 ? OrthogonalMatrix(1, {1.0})
                    : OrthogonalMatrix(2, {1.0, 0.0, 0.0, 1.0});
}

OrthogonalMatrix OrthogonalMatrix::reflection_1d() { return OrthogonalMatrix(1, {-1.0}); }

OrthogonalMatrix OrthogonalMatrix::scalar_1d(double s) { return OrthogonalMatrix(1, {s}); }

OrthogonalMatrix OrthogonalMatrix::rotation_2d(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return OrthogonalMatrix(2, {c, -s, s, c});
}

OrthogonalMatrix OrthogonalMatrix::reflection_2d(double axis_angle) {
    double c = std::cos(2.0 * axis_angle), s = std::sin(2.0 * axis_angle);
    return OrthogonalMatrix(2, {c, s, s, -c});
}

std::array<double, 2> OrthogonalMatrix::apply(std::array<double, 2> x) const {
    if (dim_ == 1) return {a_[0] * x[0], 0.0};
    return {a_[0] * x[0] + a_[1] * x[1], a_[2] * x[0] + a_[3] * x[1]};
}

std::array<double, 2> OrthogonalMatrix::apply_transpose(std::array<double, 2> x) const {
    if (dim_ == 1) return {a_[0] * x[0], 0.0};
    return {a_[0] * x[0] + a_[2] * x[1], a_[1] * x[0] + a_[3] * x[1]};
}

OrthogonalMatrix OrthogonalMatrix::transpose() const {
    if (dim_ == 1) return *this;
    return OrthogonalMatrix(2, {a_[0], a_[2], a_[1], a_[3]});
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

GridFunction indicator(const Grid& g, const Ball& ball) {
    if (!(ball.radius > 0.0)) throw std::invalid_argument("indicator: radius must be positive");
    GridFunction out(g);
    std::size_t support = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (ball.contains(g.point(i), g.dim())) {
            out[i] = 1.0;
            ++support;
        }
    }
    if (support == 0) throw std::domain_error("indicator: ball has empty support on the grid");
    return out;
}

double integrate(const GridFunction& f, const std::optional<Ball>& region) {
    const Grid& g = f.grid();
    double hn = g.dim() == 1 ? g.spacing() : g.spacing() * g.spacing();
    if (!region) return hn * pairwise_sum(f.values());
    std::vector<double> masked;
    masked.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        if (region->contains(g.point(i), g.dim())) masked.push_back(f[i]);
    return hn * pairwise_sum(masked);
}

namespace {

// Multilinear interpolation of the zero-extension of f at an arbitrary point.
double interpolate(const GridFunction& f, std::array<double, 2> x) {
    const Grid& g = f.grid();
    const int N = g.points_per_axis();
    const double h = g.spacing();
    const double L = g.half_width();
    auto sample = [&](int i, int j) -> double {
        if (i < 0 || i >= N) return 0.0;
        if (g.dim() == 2 && (j < 0 || j >= N)) return 0.0;
        return f[g.index(i, j)];
    };
    double t0 = (x[0] + L) / h - 0.5;
    int i0 = static_cast<int>(std::floor(t0));
    double w0 = t0 - i0;
    if (g.dim() == 1) {
        if (x[0] < -L || x[0] > L) return 0.0;
        return (1.0 - w0) * sample(i0, 0) + w0 * sample(i0 + 1, 0);
    }
    if (x[0] < -L || x[0] > L || x[1] < -L || x[1] > L) return 0.0;
    double t1 = (x[1] + L) / h - 0.5;
    int i1 = static_cast<int>(std::floor(t1));
    double w1 = t1 - i1;
    return (1.0 - w0) * ((1.0 - w1) * sample(i0, i1) + w1 * sample(i0, i1 + 1)) +
           w0 * ((1.0 - w1) * sample(i0 + 1, i1) + w1 * sample(i0 + 1, i1 + 1));
}

}  // namespace

GridFunction pullback(const GridFunction& f, const OrthogonalMatrix& A) {
    const Grid& g = f.grid();
    if (A.dim() != g.dim()) throw std::invalid_argument("pullback: dimension mismatch");
    GridFunction out(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = interpolate(f, A.apply_transpose(g.point(i)));
    return out;
}

}  // namespace varharm
