#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qnucleus/errors.hpp"

namespace qnucleus {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// A point of C^n stored in real chart coordinates (x1, y1, ..., xn, yn).
class CPoint {
public:
    CPoint() = default;
    explicit CPoint(int n) : coords_(2 * static_cast<std::size_t>(n), 0.0) {}
    explicit CPoint(std::vector<double> coords);
    static CPoint from_complex(const CVector& z);
    static CPoint from_complex(std::initializer_list<Complex> z);

    int dim() const { return static_cast<int>(coords_.size() / 2); }
    double x(int j) const { return coords_[2 * j]; }
    double y(int j) const { return coords_[2 * j + 1]; }
    Complex z(int j) const { return {coords_[2 * j], coords_[2 * j + 1]}; }
    void set_z(int j, Complex v) { coords_[2 * j] = v.real(); coords_[2 * j + 1] = v.imag(); }

    double operator[](std::size_t a) const { return coords_[a]; }
    double& operator[](std::size_t a) { return coords_[a]; }
    const std::vector<double>& coords() const { return coords_; }
    std::size_t size() const { return coords_.size(); }

    CVector to_complex() const;
    double norm() const;
    double norm_squared() const;

    bool operator==(const CPoint&) const = default;

private:
    std::vector<double> coords_;
};

CPoint operator+(const CPoint& a, const CPoint& b);
CPoint operator-(const CPoint& a, const CPoint& b);
double distance(const CPoint& a, const CPoint& b);

// z -> A z + b with A invertible.
class AffineMap {
public:
    AffineMap(CMatrix linear, CVector offset);
    static AffineMap identity(int n);
    static AffineMap translation(const CVector& offset);

    int dim() const { return static_cast<int>(offset_.size()); }
    const CMatrix& linear() const { return linear_; }
    const CVector& offset() const { return offset_; }
    const CMatrix& inverse_linear() const { return inverse_; }
    double sigma_min() const { return sigma_min_; }
    double sigma_max() const { return sigma_max_; }

    CVector apply(const CVector& z) const { return linear_ * z + offset_; }
    CVector apply_inverse(const CVector& w) const { return inverse_ * (w - offset_); }
    CPoint apply(const CPoint& p) const;
    CPoint apply_inverse(const CPoint& p) const;

    // (this o other)(z) = this(other(z))
    AffineMap compose(const AffineMap& other) const;
    AffineMap inverse() const;

private:
    CMatrix linear_;
    CVector offset_;
    CMatrix inverse_;
    double sigma_min_ = 0.0;
    double sigma_max_ = 0.0;
};

// Axis-aligned box in R^{2n} split into a regular grid of cells.
// Linear cell indices are row-major with axis 0 fastest.
class ChartBox {
public:
    ChartBox(std::vector<double> lower, std::vector<double> upper, std::vector<int> resolution);
    static ChartBox cube(int n, double half_width, int cells_per_axis);

    int dim() const { return static_cast<int>(lower_.size() / 2); }
    int axes() const { return static_cast<int>(lower_.size()); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<int>& resolution() const { return resolution_; }
    std::int64_t cell_count() const { return count_; }
    std::int64_t stride(int axis) const { return strides_[axis]; }
    double width(int axis) const { return widths_[axis]; }
    double diagonal() const { return diagonal_; }

    std::vector<int> multi_index(std::int64_t index) const;
    std::int64_t linear_index(const std::vector<int>& multi) const;
    CPoint center(std::int64_t index) const;
    void center(std::int64_t index, double* out) const;
    std::optional<std::int64_t> cell_of(const CPoint& p) const;
    bool contains(const CPoint& p) const;
    std::vector<CPoint> corners(std::int64_t index) const;

    bool operator==(const ChartBox& other) const;

private:
    std::vector<double> lower_, upper_, widths_;
    std::vector<int> resolution_;
    std::vector<std::int64_t> strides_;
    std::int64_t count_ = 0;
    double diagonal_ = 0.0;
};

class VoxelSet {
public:
    explicit VoxelSet(ChartBox box);
    static VoxelSet full(ChartBox box);

    const ChartBox& box() const { return box_; }
    std::int64_t size() const { return box_.cell_count(); }

    bool test(std::int64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::int64_t i, bool v = true) {
        const std::uint64_t m = std::uint64_t{1} << (i & 63);
        if (v) bits_[i >> 6] |= m; else bits_[i >> 6] &= ~m;
    }
    std::int64_t count() const;
    bool empty() const;
    bool contains_point(const CPoint& p) const;

    template <class F> void for_each(F&& f) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                const int b = __builtin_ctzll(word);
                f(static_cast<std::int64_t>(w * 64 + b));
                word &= word - 1;
            }
        }
    }
    std::vector<std::int64_t> indices() const;

    const std::vector<std::uint64_t>& words() const { return bits_; }
    bool operator==(const VoxelSet& other) const;

    VoxelSet& operator&=(const VoxelSet& o);
    VoxelSet& operator|=(const VoxelSet& o);
    VoxelSet& operator-=(const VoxelSet& o);

private:
    void require_same_box(const VoxelSet& o) const;
    ChartBox box_;
    std::vector<std::uint64_t> bits_;
};

enum class SetOp { Union, Intersection, Difference };

VoxelSet set_op(const VoxelSet& a, const VoxelSet& b, SetOp op);
VoxelSet operator&(const VoxelSet& a, const VoxelSet& b);
VoxelSet operator|(const VoxelSet& a, const VoxelSet& b);
VoxelSet operator-(const VoxelSet& a, const VoxelSet& b);
bool is_subset(const VoxelSet& a, const VoxelSet& b);

using Predicate = std::function<bool(const CPoint&)>;

enum class VoxelizeMode { Centers, Conservative };

VoxelSet voxelize(const Predicate& predicate, const ChartBox& box, VoxelizeMode mode);

// Occupied voxels with a face neighbour that is unoccupied or outside the box.
VoxelSet boundary(const VoxelSet& set);
VoxelSet dilate(const VoxelSet& set, int steps = 1);
VoxelSet erode(const VoxelSet& set, int steps = 1);

struct AmbientDomain {
    ChartBox box;
    VoxelSet allowed;
    std::optional<Predicate> exact;

    static AmbientDomain full(const ChartBox& box);
    static AmbientDomain from_predicate(const ChartBox& box, Predicate p);
    bool everything() const { return !exact && allowed.count() == allowed.size(); }
};

}  // namespace qnucleus
