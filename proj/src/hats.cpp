#include "qnucleus/hats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "qnucleus/sampling.hpp"

namespace qnucleus {

namespace {

constexpr double kPi = 3.14159265358979323846;

double head_norm2(const CVector& w, int k) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += std::norm(w[j]);
    return s;
}

// Distance in R^2 from (x, rho), rho >= 0, to the arc of radius R with angle in [0, theta_max].
double arc_distance(double x, double rho, double R, double cos_max) {
    const double nrm = std::hypot(x, rho);
    if (nrm > 0.0 && x >= cos_max * nrm) return std::abs(nrm - R);
    if (nrm == 0.0) return R;
    const double ex = R * cos_max;
    const double ey = R * std::sqrt(std::max(0.0, 1.0 - cos_max * cos_max));
    return std::hypot(x - ex, rho - ey);
}

double polydisc_distance2(const CVector& w, int k, double radius) {
    double s = 0.0;
    for (int j = k; j < w.size(); ++j) {
        const double e = std::abs(w[j]) - radius;
        if (e > 0.0) s += e * e;
    }
    return s;
}

Complex box_muller(double u1, double u2) {
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return {rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
}

}  // namespace

void HartogsFigure::validate() const {
    if (k < 1 || m < 1) throw InputError("Hartogs figure needs k, m >= 1");
    if (!(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0)) throw InputError("Hartogs figure needs 0 < r, s < 1");
}

bool hartogs_membership(const HartogsFigure& fig, const CPoint& p) {
    if (p.dim() != fig.k + fig.m) throw InputError("point dimension does not match the Hartogs figure");
    double head = 0.0, tail = 0.0;
    for (int j = 0; j < p.dim(); ++j) {
        const double a = std::abs(p.z(j));
        if (!(a < 1.0)) return false;
        if (j < fig.k) head = std::max(head, a); else tail = std::max(tail, a);
    }
    return head < fig.r || tail > fig.s;
}

// ---------------------------------------------------------------------------

void HatPair::validate() const {
    if (k < 1 || k > n()) throw InputError("hat order must lie in [1, n]");
    if (!(r > 0.0 && r < 1.0)) throw InputError("hat cap parameter must lie in (0, 1)");
    if (!(mu > 0.0)) throw InputError("hat margin must be positive");
}

HatPair HatPair::make(int k, double r, AffineMap embedding, double mu) {
    HatPair p{k, r, mu, std::move(embedding)};
    p.validate();
    return p;
}

HatPair HatPair::oriented(int k, double r, const CVector& center, const CMatrix& unitary, double scale,
                          double mu) {
    return make(k, r, AffineMap(scale * unitary, center), mu);
}

const char* to_string(HatRegion r) {
    switch (r) {
        case HatRegion::InS: return "in_S";
        case HatRegion::FlatBoundary: return "in_filled_boundary_flat";
        case HatRegion::Interior: return "in_interior";
        case HatRegion::Outside: return "outside";
    }
    return "?";
}

HatRegion model_membership(int k, double r, const CVector& w) {
    for (int j = k; j < w.size(); ++j)
        if (!(std::abs(w[j]) < 1.0)) return HatRegion::Outside;
    const double nrm = std::sqrt(head_norm2(w, k));
    const double x1 = w[0].real();
    if (std::abs(nrm - 1.0) <= kHatTolerance && x1 >= r) return HatRegion::InS;
    if (nrm < 1.0 - kHatTolerance && x1 > r + kHatTolerance) return HatRegion::Interior;
    if (std::abs(x1 - r) <= kHatTolerance && nrm <= 1.0 + kHatTolerance) return HatRegion::FlatBoundary;
    return HatRegion::Outside;
}

HatRegion hat_membership(const HatPair& pair, const CPoint& p) {
    return model_membership(pair.k, pair.r, pair.embedding.apply_inverse(p.to_complex()));
}

double model_distance_to_cap(int k, double r, const CVector& w) {
    const double x = w[0].real();
    const double rho = std::sqrt(std::max(0.0, head_norm2(w, k) - x * x));
    const double d = arc_distance(x, rho, 1.0, r);
    return std::sqrt(d * d + polydisc_distance2(w, k, 1.0));
}

double model_distance_to_neighbourhood(int k, double r, double mu, const CVector& w) {
    const double R = 1.0 + mu;
    const double t = r - mu;
    const double x = w[0].real();
    const double rho = std::sqrt(std::max(0.0, head_norm2(w, k) - x * x));
    double d = 0.0;
    if (!(x >= t && x * x + rho * rho <= R * R)) {
        const double d_arc = arc_distance(x, rho, R, t / R);
        const double rho_max = std::sqrt(std::max(0.0, R * R - t * t));
        const double d_seg = std::hypot(x - t, rho - std::clamp(rho, 0.0, rho_max));
        d = std::min(d_arc, d_seg);
    }
    return std::sqrt(d * d + polydisc_distance2(w, k, R));
}

double distance_to_S_lower_bound(const HatPair& pair, const CPoint& p) {
    const CVector w = pair.embedding.apply_inverse(p.to_complex());
    return pair.embedding.sigma_min() * model_distance_to_cap(pair.k, pair.r, w);
}

// ---------------------------------------------------------------------------

namespace {

void fill_polydisc(CVector& w, int k, const std::vector<double>& u, std::size_t offset) {
    for (int j = k; j < w.size(); ++j) {
        const double rad = std::sqrt(u[offset]) * (1.0 - 1e-12);
        const double ang = 2.0 * kPi * u[offset + 1];
        w[j] = std::polar(rad, ang);
        offset += 2;
    }
}

}  // namespace

std::vector<CPoint> sample_S(const HatPair& pair, int count, std::uint64_t seed) {
    if (count < 1) throw InputError("sample count must be >= 1");
    const int n = pair.n(), k = pair.k;
    std::vector<CPoint> out;
    out.reserve(count);
    CVector apex = CVector::Zero(n);
    apex[0] = 1.0;
    out.push_back(CPoint::from_complex(pair.embedding.apply(apex)));
    Halton h(2 * n, seed);
    const std::int64_t max_draws = std::int64_t{count} * 100000;
    for (std::int64_t draw = 0; static_cast<int>(out.size()) < count && draw < max_draws; ++draw) {
        const auto u = h.next();
        CVector w(n);
        for (int j = 0; j < k; ++j) w[j] = box_muller(u[2 * j], u[2 * j + 1]);
        const double nrm = std::sqrt(head_norm2(w, k));
        if (nrm == 0.0) continue;
        for (int j = 0; j < k; ++j) w[j] /= nrm;
        if (w[0].real() < pair.r) continue;
        fill_polydisc(w, k, u, 2 * k);
        out.push_back(CPoint::from_complex(pair.embedding.apply(w)));
    }
    return out;
}

std::vector<CPoint> sample_filled(const HatPair& pair, int count, std::uint64_t seed) {
    if (count < 1) throw InputError("sample count must be >= 1");
    const int n = pair.n(), k = pair.k;
    std::vector<CPoint> out;
    out.reserve(count);
    CVector mid = CVector::Zero(n);
    mid[0] = pair.r + 0.5 * (1.0 - pair.r);
    out.push_back(CPoint::from_complex(pair.embedding.apply(mid)));
    Halton h(2 * n + 1, seed);
    const std::int64_t max_draws = std::int64_t{count} * 100000;
    for (std::int64_t draw = 0; static_cast<int>(out.size()) < count && draw < max_draws; ++draw) {
        const auto u = h.next();
        CVector w(n);
        for (int j = 0; j < k; ++j) w[j] = box_muller(u[2 * j], u[2 * j + 1]);
        const double nrm = std::sqrt(head_norm2(w, k));
        if (nrm == 0.0) continue;
        const double rad = std::pow(u[2 * n], 1.0 / (2.0 * k)) * (1.0 - 1e-12);
        for (int j = 0; j < k; ++j) w[j] *= rad / nrm;
        if (w[0].real() < pair.r) continue;
        fill_polydisc(w, k, u, 2 * k);
        out.push_back(CPoint::from_complex(pair.embedding.apply(w)));
    }
    return out;
}

// ---------------------------------------------------------------------------

HatGeometry::HatGeometry(const HatPair& pair, const ChartBox& box) : pair_(pair), box_(&box) {
    if (pair.n() != box.dim()) throw InputError("hat dimension does not match the box");
    const int na = box.axes(), n = box.dim();
    const CMatrix& B = pair.embedding.inverse_linear();
    const CVector& b = pair.embedding.offset();

    CVector first(n);
    for (int j = 0; j < n; ++j)
        first[j] = Complex(box.lower()[2 * j] + 0.5 * box.width(2 * j),
                           box.lower()[2 * j + 1] + 0.5 * box.width(2 * j + 1));
    w0_ = B * (first - b);
    scratch_ = w0_;
    corner_ = w0_;
    step_.resize(na);
    half_width_.resize(na);
    double rad = 0.0;
    for (int a = 0; a < na; ++a) {
        const int j = a / 2;
        const Complex unit = (a % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        step_[a] = B.col(j) * unit * box.width(a);
        half_width_[a] = 0.5 * step_[a];
        rad += std::sqrt(head_norm2(half_width_[a], pair.k));
    }
    corner_radius2_ = rad;

    dilation_threshold_ = 1.5 * box.diagonal();
    const double model_radius = (1.0 + pair.mu) * std::sqrt(1.0 + (n - pair.k));
    const double reach = pair.embedding.sigma_max() * model_radius + 1.5 * box.diagonal() + box.diagonal() / 8;
    lo_.resize(na);
    hi_.resize(na);
    for (int a = 0; a < na; ++a) {
        const double c = (a % 2 == 0) ? b[a / 2].real() : b[a / 2].imag();
        const double w = box.width(a);
        const int res = box.resolution()[a];
        lo_[a] = std::clamp(static_cast<int>(std::floor((c - reach - box.lower()[a]) / w)), 0, res - 1);
        hi_[a] = std::clamp(static_cast<int>(std::floor((c + reach - box.lower()[a]) / w)), 0, res - 1);
        if (c + reach < box.lower()[a] || c - reach > box.upper()[a]) { lo_[a] = 1; hi_[a] = 0; }
    }
}

bool HatGeometry::in_bounds(std::int64_t cell) const {
    for (int a = 0; a < box_->axes(); ++a) {
        const int m = static_cast<int>(cell % box_->resolution()[a]);
        cell /= box_->resolution()[a];
        if (m < lo_[a] || m > hi_[a]) return false;
    }
    return true;
}

std::int64_t HatGeometry::candidate_count() const {
    std::int64_t c = 1;
    for (int a = 0; a < box_->axes(); ++a) c *= std::max(0, hi_[a] - lo_[a] + 1);
    return c;
}

const CVector& HatGeometry::center_scratch(std::int64_t cell) const {
    scratch_ = w0_;
    for (int a = 0; a < box_->axes(); ++a) {
        const int m = static_cast<int>(cell % box_->resolution()[a]);
        cell /= box_->resolution()[a];
        if (m) scratch_.noalias() += static_cast<double>(m) * step_[a];
    }
    return scratch_;
}

CVector HatGeometry::model_center(std::int64_t cell) const { return center_scratch(cell); }

bool HatGeometry::near_S(std::int64_t cell) const {
    const CVector& w = center_scratch(cell);
    return pair_.embedding.sigma_min() * model_distance_to_cap(pair_.k, pair_.r, w) <= dilation_threshold_;
}

bool HatGeometry::near_neighbourhood(std::int64_t cell) const {
    const CVector& w = center_scratch(cell);
    return pair_.embedding.sigma_min() * model_distance_to_neighbourhood(pair_.k, pair_.r, pair_.mu, w) <=
           0.5 * box_->diagonal();
}

bool HatGeometry::interior_model(const CVector& w) const {
    return model_membership(pair_.k, pair_.r, w) == HatRegion::Interior;
}

bool HatGeometry::filled_center(std::int64_t cell) const {
    return model_membership(pair_.k, pair_.r, center_scratch(cell)) != HatRegion::Outside;
}

bool HatGeometry::interior_cell(std::int64_t cell) const {
    const CVector& c = center_scratch(cell);
    if (!interior_model(c)) return false;
    const int na = box_->axes(), k = pair_.k;
    // Quick accept from triangle-inequality bounds.
    double slack_x = 0.0;
    for (int a = 0; a < na; ++a) slack_x += std::abs(half_width_[a][0].real());
    bool sure = std::sqrt(head_norm2(c, k)) + corner_radius2_ < 1.0 - kHatTolerance &&
                c[0].real() - slack_x > pair_.r + kHatTolerance;
    for (int j = k; sure && j < c.size(); ++j) {
        double s = std::abs(c[j]);
        for (int a = 0; a < na; ++a) s += std::abs(half_width_[a][j]);
        sure = s < 1.0;
    }
    if (sure) return true;
    // The filling is convex, so the cell is inside iff every corner is.
    for (std::uint32_t mask = 0; mask < (1u << na); ++mask) {
        corner_ = c;
        for (int a = 0; a < na; ++a) {
            if ((mask >> a) & 1u) corner_ += half_width_[a]; else corner_ -= half_width_[a];
        }
        if (!interior_model(corner_)) return false;
    }
    return true;
}

VoxelSet voxelize_hat(const HatPair& pair, const ChartBox& box, HatVoxelization which) {
    HatGeometry g(pair, box);
    VoxelSet out(box);
    g.for_each_candidate([&](std::int64_t i) {
        bool mark = false;
        switch (which) {
            case HatVoxelization::SDilated: mark = g.near_S(i); break;
            case HatVoxelization::Filled: mark = g.filled_center(i); break;
            case HatVoxelization::InteriorConservative: mark = g.interior_cell(i); break;
        }
        if (mark) out.set(i);
    });
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// max over the mu-neighbourhood of Re(c^T w), w in model coordinates.
double support(const HatPair& pair, const Eigen::RowVectorXcd& c) {
    const int k = pair.k;
    const double R = 1.0 + pair.mu, t = pair.r - pair.mu;
    const double g1 = c[0].real();
    double rest2 = c[0].imag() * c[0].imag();
    for (int j = 1; j < k; ++j) rest2 += std::norm(c[j]);
    const double gnorm = std::sqrt(g1 * g1 + rest2);
    double head = 0.0;
    if (gnorm > 0.0) {
        if (R * g1 / gnorm >= t) head = R * gnorm;
        else head = g1 * t + std::sqrt(std::max(0.0, R * R - t * t)) * std::sqrt(rest2);
    } else {
        head = 0.0;
    }
    double tail = 0.0;
    for (int j = k; j < c.size(); ++j) tail += R * std::abs(c[j]);
    return head + tail;
}

std::vector<CVector> neighbourhood_boundary_samples(const HatPair& pair, int count) {
    const int n = pair.n(), k = pair.k;
    const double R = 1.0 + pair.mu, t = pair.r - pair.mu;
    std::vector<CVector> out;
    Halton h(2 * n + 1, 7);
    for (int draw = 0; static_cast<int>(out.size()) < count && draw < count * 1000; ++draw) {
        const auto u = h.next();
        CVector w(n);
        for (int j = 0; j < k; ++j) w[j] = box_muller(u[2 * j], u[2 * j + 1]);
        const double nrm = std::sqrt(head_norm2(w, k));
        if (nrm == 0.0) continue;
        for (int j = 0; j < k; ++j) w[j] *= R / nrm;
        if (w[0].real() < t) {
            // project onto the flat face
            const double rho_max = std::sqrt(std::max(0.0, R * R - t * t));
            double rest = std::sqrt(std::max(0.0, head_norm2(w, k) - w[0].real() * w[0].real()));
            const double scale = rest > 0 ? rho_max * u[2 * n] / rest : 0.0;
            w[0] = Complex(t, w[0].imag() * scale);
            for (int j = 1; j < k; ++j) w[j] *= scale;
        }
        for (int j = k; j < n; ++j) w[j] = std::polar(R, 2.0 * kPi * u[2 * j]);
        out.push_back(w);
    }
    return out;
}

}  // namespace

void neighbourhood_bounds(const HatPair& pair, std::vector<double>& lower, std::vector<double>& upper) {
    const int n = pair.n();
    const CMatrix& A = pair.embedding.linear();
    const CVector& b = pair.embedding.offset();
    lower.assign(2 * n, 0.0);
    upper.assign(2 * n, 0.0);
    for (int j = 0; j < n; ++j) {
        const Eigen::RowVectorXcd row = A.row(j);
        const Eigen::RowVectorXcd irow = Complex(0.0, -1.0) * A.row(j);
        upper[2 * j] = b[j].real() + support(pair, row);
        lower[2 * j] = b[j].real() - support(pair, -row);
        upper[2 * j + 1] = b[j].imag() + support(pair, irow);
        lower[2 * j + 1] = b[j].imag() - support(pair, -irow);
    }
}

bool valid_in_ambient(const HatPair& pair, const AmbientDomain& ambient) {
    const ChartBox& box = ambient.box;
    if (pair.n() != box.dim()) throw InputError("hat dimension does not match the ambient");
    std::vector<double> lo, hi;
    neighbourhood_bounds(pair, lo, hi);
    for (int a = 0; a < box.axes(); ++a)
        if (!(hi[a] < box.upper()[a] && lo[a] > box.lower()[a])) return false;
    if (ambient.exact) {
        thread_local std::map<std::tuple<int, int, double, double>, std::vector<CVector>> cache;
        auto key = std::make_tuple(pair.n(), pair.k, pair.r, pair.mu);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, neighbourhood_boundary_samples(pair, 256)).first;
        for (const auto& w : it->second)
            if (!(*ambient.exact)(CPoint::from_complex(pair.embedding.apply(w)))) return false;
    }
    if (!ambient.everything()) {
        HatGeometry g(pair, box);
        bool ok = true;
        g.for_each_candidate([&](std::int64_t i) {
            if (ok && !ambient.allowed.test(i) && g.near_neighbourhood(i)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::vector<HatDirection> default_directions(int n) {
    std::vector<HatDirection> d;
    for (int j = 0; j < n; ++j)
        for (bool im : {false, true})
            for (int s : {1, -1}) d.push_back({j, im, s});
    return d;
}

CMatrix direction_unitary(int n, const HatDirection& d) {
    if (d.axis < 0 || d.axis >= n) throw InputError("hat direction axis out of range");
    CMatrix U = CMatrix::Zero(n, n);
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;
    std::swap(perm[0], perm[d.axis]);
    for (int c = 0; c < n; ++c) U(perm[c], c) = 1.0;
    const Complex phase = Complex(d.sign, 0.0) * (d.imaginary ? Complex(0.0, 1.0) : Complex(1.0, 0.0));
    U.col(0) *= phase;
    return U;
}

std::vector<CPoint> family_centers(const ChartBox& box, int stride) {
    if (stride < 1) throw InputError("family stride must be >= 1");
    const int na = box.axes();
    std::vector<std::vector<double>> axis_values(na);
    for (int a = 0; a < na; ++a) {
        const double mid = 0.5 * (box.lower()[a] + box.upper()[a]);
        const int reach = box.resolution()[a] / (2 * stride);
        for (int j = -reach; j <= reach; ++j) axis_values[a].push_back(mid + j * stride * box.width(a));
    }
    std::vector<CPoint> out;
    std::vector<std::size_t> m(na, 0);
    while (true) {
        CPoint p(box.dim());
        for (int a = 0; a < na; ++a) p[a] = axis_values[a][m[a]];
        out.push_back(std::move(p));
        int a = 0;
        while (a < na && ++m[a] == axis_values[a].size()) { m[a] = 0; ++a; }
        if (a == na) break;
    }
    return out;
}

namespace {

CMatrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(M);
    CMatrix Q = qr.householderQ();
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(R(j, j));
        if (a > 0) Q.col(j) *= R(j, j) / a;
    }
    return Q;
}

}  // namespace

HatFamily generate_family(const HatFamilyConfig& config, const AmbientDomain& ambient) {
    const int n = ambient.box.dim();
    if (config.order < 1 || config.order > n) throw InputError("family order must lie in [1, n]");
    HatFamily fam;
    fam.config = config;
    std::vector<CMatrix> frames;
    for (const auto& d : config.directions.empty() ? default_directions(n) : config.directions)
        frames.push_back(direction_unitary(n, d));
    std::mt19937_64 rng(config.seed);
    for (int i = 0; i < config.random_unitaries; ++i) frames.push_back(random_unitary(n, rng));

    for (const auto& c : family_centers(ambient.box, config.stride)) {
        const CVector center = c.to_complex();
        for (const auto& U : frames) {
            for (double r : config.radii) {
                for (double s : config.scales) {
                    ++fam.candidates;
                    HatPair p = HatPair::oriented(config.order, r, center, U, s, config.mu);
                    if (valid_in_ambient(p, ambient)) fam.pairs.push_back(std::move(p));
                }
            }
        }
    }
    if (fam.pairs.empty()) fam.warnings.push_back("hat family is empty: no candidate fits the ambient");
    return fam;
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const HatPair& pair) {
    const int n = pair.n();
    nlohmann::json A = nlohmann::json::array();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex v = pair.embedding.linear()(i, j);
            A.push_back({v.real(), v.imag()});
        }
    nlohmann::json b = nlohmann::json::array();
    for (int j = 0; j < n; ++j) {
        b.push_back(pair.embedding.offset()[j].real());
        b.push_back(pair.embedding.offset()[j].imag());
    }
    return {{"k", pair.k}, {"r", pair.r}, {"mu", pair.mu}, {"A", A}, {"b", b}};
}

HatPair hat_from_json(const nlohmann::json& j) {
    try {
        const auto& b = j.at("b");
        const int n = static_cast<int>(b.size() / 2);
        const auto& A = j.at("A");
        if (n < 1 || b.size() != static_cast<std::size_t>(2 * n) || A.size() != static_cast<std::size_t>(n * n))
            throw FormatError("hat JSON has inconsistent A/b sizes");
        CMatrix M(n, n);
        CVector off(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                const auto& e = A.at(r * n + c);
                M(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        for (int c = 0; c < n; ++c) off[c] = Complex(b.at(2 * c).get<double>(), b.at(2 * c + 1).get<double>());
        return HatPair::make(j.at("k").get<int>(), j.at("r").get<double>(), AffineMap(M, off),
                             j.value("mu", 0.05));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed hat JSON: ") + e.what());
    }
}

nlohmann::json to_json(const HatFamilyConfig& c) {
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& d : c.directions) dirs.push_back({{"axis", d.axis}, {"imaginary", d.imaginary}, {"sign", d.sign}});
    return {{"order", c.order},   {"stride", c.stride}, {"radii", c.radii},
            {"scales", c.scales}, {"directions", dirs}, {"random_unitaries", c.random_unitaries},
            {"mu", c.mu},         {"seed", c.seed}};
}

HatFamilyConfig family_config_from_json(const nlohmann::json& j) {
    HatFamilyConfig c;
    try {
        c.order = j.value("order", c.order);
        c.stride = j.value("stride", c.stride);
        c.radii = j.value("radii", c.radii);
        c.scales = j.value("scales", c.scales);
        c.random_unitaries = j.value("random_unitaries", c.random_unitaries);
        c.mu = j.value("mu", c.mu);
        c.seed = j.value("seed", c.seed);
        if (j.contains("directions"))
            for (const auto& d : j.at("directions"))
                c.directions.push_back({d.at("axis").get<int>(), d.value("imaginary", false), d.value("sign", 1)});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed hat family config: ") + e.what());
    }
    return c;
}

}  // namespace qnucleus
