#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qnucleus/core.hpp"

namespace qnucleus {

// (k, m)-Hartogs figure inside the unit polydisc of C^{k+m}.
struct HartogsFigure {
    int k = 1;
    int m = 1;
    double r = 0.5;
    double s = 0.5;

    void validate() const;
};

bool hartogs_membership(const HartogsFigure& fig, const CPoint& p);

inline constexpr double kHatTolerance = 1e-9;

// Spherical hat pair of order k: the cap {|z'| = 1, Re z'_1 >= r} x polydisc^{n-k}
// and its filling, pushed forward by an invertible complex-affine embedding.
struct HatPair {
    int k = 1;
    double r = 0.5;
    double mu = 0.05;
    AffineMap embedding = AffineMap::identity(1);

    int n() const { return embedding.dim(); }
    void validate() const;

    static HatPair make(int k, double r, AffineMap embedding, double mu = 0.05);
    // Sphere of radius `scale` about `center`, cap normal U e_1.
    static HatPair oriented(int k, double r, const CVector& center, const CMatrix& unitary, double scale,
                            double mu = 0.05);
};

enum class HatRegion { InS, FlatBoundary, Interior, Outside };
const char* to_string(HatRegion r);

HatRegion model_membership(int k, double r, const CVector& w);
HatRegion hat_membership(const HatPair& pair, const CPoint& p);

// Model-coordinate Euclidean distances.
double model_distance_to_cap(int k, double r, const CVector& w);
// Neighbourhood {|z'| <= 1+mu, Re z'_1 >= r-mu} x closed polydisc of radius 1+mu.
double model_distance_to_neighbourhood(int k, double r, double mu, const CVector& w);

// Lower bound on the Euclidean distance from p to S (closure of the polydisc factor).
double distance_to_S_lower_bound(const HatPair& pair, const CPoint& p);

std::vector<CPoint> sample_S(const HatPair& pair, int count, std::uint64_t seed = 0);
std::vector<CPoint> sample_filled(const HatPair& pair, int count, std::uint64_t seed = 0);

enum class HatVoxelization { SDilated, Filled, InteriorConservative };

// Per-box precomputation for fast cell classification against one hat.
class HatGeometry {
public:
    HatGeometry(const HatPair& pair, const ChartBox& box);

    const HatPair& pair() const { return pair_; }
    bool in_bounds(std::int64_t cell) const;
    // Cells of the box's index range that can meet the hat's neighbourhood.
    template <class F> void for_each_candidate(F&& f) const;
    std::int64_t candidate_count() const;

    CVector model_center(std::int64_t cell) const;
    bool near_S(std::int64_t cell) const;          // cell may meet the diagonal-dilation of S
    bool interior_cell(std::int64_t cell) const;   // whole cell inside Int S-hat
    bool filled_center(std::int64_t cell) const;   // center in S-hat
    // cell may meet the mu-neighbourhood
    bool near_neighbourhood(std::int64_t cell) const;

    double dilation_threshold() const { return dilation_threshold_; }

private:
    bool interior_model(const CVector& w) const;
    // Writes the model center into scratch_ (one geometry per thread).
    const CVector& center_scratch(std::int64_t cell) const;

    HatPair pair_;
    const ChartBox* box_;
    std::vector<int> lo_, hi_;
    CVector w0_;
    std::vector<CVector> step_;         // model displacement per cell step along each axis
    std::vector<CVector> half_width_;   // model displacement to a face at half width
    double corner_radius2_ = 0.0;       // model-space radius of a cell around its center, z' part
    double dilation_threshold_ = 0.0;
    mutable CVector scratch_, corner_;
};

VoxelSet voxelize_hat(const HatPair& pair, const ChartBox& box, HatVoxelization which);

bool valid_in_ambient(const HatPair& pair, const AmbientDomain& ambient);
// Exact per-axis extent of the pushed-forward mu-neighbourhood, real chart coordinates.
void neighbourhood_bounds(const HatPair& pair, std::vector<double>& lower, std::vector<double>& upper);

struct HatDirection {
    int axis = 0;         // complex coordinate index
    bool imaginary = false;
    int sign = 1;
};

struct HatFamilyConfig {
    int order = 2;
    int stride = 3;                       // in cells of the experiment box
    std::vector<double> radii{0.1, 0.3, 0.6};  // cap parameters r
    std::vector<double> scales{0.75, 1.5};
    std::vector<HatDirection> directions;  // empty: all +-x_j, +-y_j
    int random_unitaries = 0;
    double mu = 0.05;
    std::uint64_t seed = 0;
};

struct HatFamily {
    HatFamilyConfig config;
    std::vector<HatPair> pairs;
    std::int64_t candidates = 0;
    std::vector<std::string> warnings;
};

std::vector<HatDirection> default_directions(int n);
CMatrix direction_unitary(int n, const HatDirection& d);
// Candidate centers in real chart coordinates, deterministic order.
std::vector<CPoint> family_centers(const ChartBox& box, int stride);
HatFamily generate_family(const HatFamilyConfig& config, const AmbientDomain& ambient);

nlohmann::json to_json(const HatPair& pair);
HatPair hat_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HatFamilyConfig& c);
HatFamilyConfig family_config_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------

template <class F>
void HatGeometry::for_each_candidate(F&& f) const {
    const int na = box_->axes();
    if (lo_.empty()) return;
    for (int a = 0; a < na; ++a)
        if (lo_[a] > hi_[a]) return;
    std::vector<int> m(lo_);
    while (true) {
        std::int64_t idx = 0;
        for (int a = 0; a < na; ++a) idx += box_->stride(a) * m[a];
        f(idx);
        int a = 0;
        while (a < na && ++m[a] > hi_[a]) { m[a] = lo_[a]; ++a; }
        if (a == na) break;
    }
}

}  // namespace qnucleus
