#include "qnucleus/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnucleus {

CPoint::CPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty() || coords_.size() % 2 != 0)
        throw InputError("CPoint needs an even, nonzero number of real coordinates");
}

CPoint CPoint::from_complex(const CVector& z) {
    CPoint p(static_cast<int>(z.size()));
    for (int j = 0; j < z.size(); ++j) p.set_z(j, z[j]);
    return p;
}

CPoint CPoint::from_complex(std::initializer_list<Complex> z) {
    CPoint p(static_cast<int>(z.size()));
    int j = 0;
    for (const auto& v : z) p.set_z(j++, v);
    return p;
}

CVector CPoint::to_complex() const {
    CVector z(dim());
    for (int j = 0; j < dim(); ++j) z[j] = this->z(j);
    return z;
}

double CPoint::norm_squared() const {
    double s = 0.0;
    for (double c : coords_) s += c * c;
    return s;
}

double CPoint::norm() const { return std::sqrt(norm_squared()); }

CPoint operator+(const CPoint& a, const CPoint& b) {
    std::vector<double> c(a.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
    return CPoint(std::move(c));
}

CPoint operator-(const CPoint& a, const CPoint& b) {
    std::vector<double> c(a.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] - b[i];
    return CPoint(std::move(c));
}

double distance(const CPoint& a, const CPoint& b) { return (a - b).norm(); }

// ---------------------------------------------------------------------------

AffineMap::AffineMap(CMatrix linear, CVector offset)
    : linear_(std::move(linear)), offset_(std::move(offset)) {
    if (linear_.rows() != linear_.cols() || linear_.rows() != offset_.size() || offset_.size() == 0)
        throw InputError("affine map dimensions disagree");
    Eigen::JacobiSVD<CMatrix> svd(linear_);
    const auto& s = svd.singularValues();
    sigma_max_ = s[0];
    sigma_min_ = s[s.size() - 1];
    if (!(sigma_min_ > 1e-9)) throw SingularMap("affine map is singular (smallest singular value <= 1e-9)");
    inverse_ = linear_.inverse();
}

AffineMap AffineMap::identity(int n) {
    return AffineMap(CMatrix::Identity(n, n), CVector::Zero(n));
}

AffineMap AffineMap::translation(const CVector& offset) {
    const auto n = offset.size();
    return AffineMap(CMatrix::Identity(n, n), offset);
}

CPoint AffineMap::apply(const CPoint& p) const { return CPoint::from_complex(apply(p.to_complex())); }

CPoint AffineMap::apply_inverse(const CPoint& p) const {
    return CPoint::from_complex(apply_inverse(p.to_complex()));
}

AffineMap AffineMap::compose(const AffineMap& other) const {
    return AffineMap(linear_ * other.linear_, linear_ * other.offset_ + offset_);
}

AffineMap AffineMap::inverse() const { return AffineMap(inverse_, -(inverse_ * offset_)); }

// ---------------------------------------------------------------------------

ChartBox::ChartBox(std::vector<double> lower, std::vector<double> upper, std::vector<int> resolution)
    : lower_(std::move(lower)), upper_(std::move(upper)), resolution_(std::move(resolution)) {
    const std::size_t a = lower_.size();
    if (a == 0 || a % 2 != 0 || upper_.size() != a || resolution_.size() != a)
        throw InvalidBox("box arrays must all have length 2n");
    widths_.resize(a);
    strides_.resize(a);
    count_ = 1;
    double d2 = 0.0;
    for (std::size_t i = 0; i < a; ++i) {
        if (!(lower_[i] < upper_[i])) throw InvalidBox("box axis has nonpositive width");
        if (resolution_[i] < 1) throw InvalidBox("box resolution must be positive");
        widths_[i] = (upper_[i] - lower_[i]) / resolution_[i];
        strides_[i] = count_;
        count_ *= resolution_[i];
        d2 += widths_[i] * widths_[i];
    }
    diagonal_ = std::sqrt(d2);
}

ChartBox ChartBox::cube(int n, double half_width, int cells_per_axis) {
    return ChartBox(std::vector<double>(2 * n, -half_width), std::vector<double>(2 * n, half_width),
                    std::vector<int>(2 * n, cells_per_axis));
}

std::vector<int> ChartBox::multi_index(std::int64_t index) const {
    std::vector<int> m(axes());
    for (int a = 0; a < axes(); ++a) {
        m[a] = static_cast<int>(index % resolution_[a]);
        index /= resolution_[a];
    }
    return m;
}

std::int64_t ChartBox::linear_index(const std::vector<int>& multi) const {
    std::int64_t idx = 0;
    for (int a = 0; a < axes(); ++a) idx += strides_[a] * multi[a];
    return idx;
}

void ChartBox::center(std::int64_t index, double* out) const {
    for (int a = 0; a < axes(); ++a) {
        const int k = static_cast<int>(index % resolution_[a]);
        index /= resolution_[a];
        out[a] = lower_[a] + (k + 0.5) * widths_[a];
    }
}

CPoint ChartBox::center(std::int64_t index) const {
    CPoint p(dim());
    std::vector<double> c(axes());
    center(index, c.data());
    for (int a = 0; a < axes(); ++a) p[a] = c[a];
    return p;
}

std::optional<std::int64_t> ChartBox::cell_of(const CPoint& p) const {
    std::int64_t idx = 0;
    for (int a = 0; a < axes(); ++a) {
        if (!(p[a] >= lower_[a] && p[a] <= upper_[a])) return std::nullopt;
        int k = static_cast<int>(std::floor((p[a] - lower_[a]) / widths_[a]));
        k = std::clamp(k, 0, resolution_[a] - 1);
        idx += strides_[a] * k;
    }
    return idx;
}

bool ChartBox::contains(const CPoint& p) const {
    for (int a = 0; a < axes(); ++a)
        if (!(p[a] >= lower_[a] && p[a] <= upper_[a])) return false;
    return true;
}

std::vector<CPoint> ChartBox::corners(std::int64_t index) const {
    const auto m = multi_index(index);
    const int na = axes();
    std::vector<CPoint> out;
    out.reserve(std::size_t{1} << na);
    for (std::uint32_t mask = 0; mask < (1u << na); ++mask) {
        CPoint p(dim());
        for (int a = 0; a < na; ++a) p[a] = lower_[a] + (m[a] + ((mask >> a) & 1u)) * widths_[a];
        out.push_back(std::move(p));
    }
    return out;
}

bool ChartBox::operator==(const ChartBox& o) const {
    return lower_ == o.lower_ && upper_ == o.upper_ && resolution_ == o.resolution_;
}

// ---------------------------------------------------------------------------

VoxelSet::VoxelSet(ChartBox box)
    : box_(std::move(box)), bits_(static_cast<std::size_t>((box_.cell_count() + 63) / 64), 0) {}

VoxelSet VoxelSet::full(ChartBox box) {
    VoxelSet s(std::move(box));
    std::fill(s.bits_.begin(), s.bits_.end(), ~std::uint64_t{0});
    const auto tail = s.size() & 63;
    if (tail) s.bits_.back() = (std::uint64_t{1} << tail) - 1;
    return s;
}

std::int64_t VoxelSet::count() const {
    std::int64_t c = 0;
    for (auto w : bits_) c += __builtin_popcountll(w);
    return c;
}

bool VoxelSet::empty() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
}

bool VoxelSet::contains_point(const CPoint& p) const {
    const auto c = box_.cell_of(p);
    return c && test(*c);
}

std::vector<std::int64_t> VoxelSet::indices() const {
    std::vector<std::int64_t> out;
    for_each([&](std::int64_t i) { out.push_back(i); });
    return out;
}

bool VoxelSet::operator==(const VoxelSet& o) const { return box_ == o.box_ && bits_ == o.bits_; }

void VoxelSet::require_same_box(const VoxelSet& o) const {
    if (!(box_ == o.box_)) throw BoxMismatch("voxel sets live on different boxes");
}

VoxelSet& VoxelSet::operator&=(const VoxelSet& o) {
    require_same_box(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
}

VoxelSet& VoxelSet::operator|=(const VoxelSet& o) {
    require_same_box(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
}

VoxelSet& VoxelSet::operator-=(const VoxelSet& o) {
    require_same_box(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
    return *this;
}

VoxelSet set_op(const VoxelSet& a, const VoxelSet& b, SetOp op) {
    VoxelSet r = a;
    switch (op) {
        case SetOp::Union: r |= b; break;
        case SetOp::Intersection: r &= b; break;
        case SetOp::Difference: r -= b; break;
    }
    return r;
}

VoxelSet operator&(const VoxelSet& a, const VoxelSet& b) { return set_op(a, b, SetOp::Intersection); }
VoxelSet operator|(const VoxelSet& a, const VoxelSet& b) { return set_op(a, b, SetOp::Union); }
VoxelSet operator-(const VoxelSet& a, const VoxelSet& b) { return set_op(a, b, SetOp::Difference); }

bool is_subset(const VoxelSet& a, const VoxelSet& b) {
    if (!(a.box() == b.box())) throw BoxMismatch("voxel sets live on different boxes");
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        if (wa[i] & ~wb[i]) return false;
    return true;
}

VoxelSet voxelize(const Predicate& predicate, const ChartBox& box, VoxelizeMode mode) {
    VoxelSet out(box);
    const int na = box.axes();
    for (std::int64_t i = 0; i < box.cell_count(); ++i) {
        CPoint c = box.center(i);
        if (!predicate(c)) continue;
        if (mode == VoxelizeMode::Conservative) {
            bool all = true;
            for (const auto& corner : box.corners(i)) {
                if (!predicate(corner)) { all = false; break; }
            }
            (void)na;
            if (!all) continue;
        }
        out.set(i);
    }
    return out;
}

namespace {

template <class F>
void for_each_neighbour(const ChartBox& box, std::int64_t i, F&& f) {
    std::int64_t rest = i;
    for (int a = 0; a < box.axes(); ++a) {
        const int r = box.resolution()[a];
        const int k = static_cast<int>(rest % r);
        rest /= r;
        const auto s = box.stride(a);
        f(k > 0 ? std::optional<std::int64_t>(i - s) : std::nullopt);
        f(k + 1 < r ? std::optional<std::int64_t>(i + s) : std::nullopt);
    }
}

}  // namespace

VoxelSet boundary(const VoxelSet& set) {
    VoxelSet out(set.box());
    set.for_each([&](std::int64_t i) {
        bool edge = false;
        for_each_neighbour(set.box(), i, [&](std::optional<std::int64_t> nb) {
            if (!nb || !set.test(*nb)) edge = true;
        });
        if (edge) out.set(i);
    });
    return out;
}

VoxelSet dilate(const VoxelSet& set, int steps) {
    VoxelSet cur = set;
    for (int s = 0; s < steps; ++s) {
        VoxelSet next = cur;
        cur.for_each([&](std::int64_t i) {
            for_each_neighbour(cur.box(), i, [&](std::optional<std::int64_t> nb) {
                if (nb) next.set(*nb);
            });
        });
        cur = std::move(next);
    }
    return cur;
}

VoxelSet erode(const VoxelSet& set, int steps) {
    VoxelSet cur = set;
    for (int s = 0; s < steps; ++s) cur -= boundary(cur);
    return cur;
}

AmbientDomain AmbientDomain::full(const ChartBox& box) {
    return AmbientDomain{box, VoxelSet::full(box), std::nullopt};
}

AmbientDomain AmbientDomain::from_predicate(const ChartBox& box, Predicate p) {
    auto allowed = voxelize(p, box, VoxelizeMode::Conservative);
    return AmbientDomain{box, std::move(allowed), std::move(p)};
}

}  // namespace qnucleus
