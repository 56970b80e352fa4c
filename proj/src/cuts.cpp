#include "qnucleus/cuts.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <thread>

namespace qnucleus {

std::vector<HatPair> CutSequence::pairs() const {
    std::vector<HatPair> out;
    for (const auto& r : records) out.push_back(r.pair);
    return out;
}

std::int64_t CutSequence::removed_total() const {
    std::int64_t s = 0;
    for (const auto& r : records) s += r.removed_count;
    return s;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QNUCLEUS_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

namespace {

bool geometry_misses(const VoxelSet& K, const HatGeometry& g) {
    bool hit = false;
    const auto& words = K.words();
    for (std::size_t w = 0; w < words.size() && !hit; ++w) {
        std::uint64_t word = words[w];
        while (word) {
            const int b = __builtin_ctzll(word);
            word &= word - 1;
            const std::int64_t i = static_cast<std::int64_t>(w * 64 + b);
            if (g.in_bounds(i) && g.near_S(i)) { hit = true; break; }
        }
    }
    return !hit;
}

VoxelSet geometry_removable(const VoxelSet& K, const HatGeometry& g) {
    VoxelSet out(K.box());
    K.for_each([&](std::int64_t i) {
        if (g.in_bounds(i) && g.interior_cell(i)) out.set(i);
    });
    return out;
}

void check_dims(const VoxelSet& K, const HatPair& pair) {
    if (K.box().dim() != pair.n()) throw InputError("hat dimension does not match the voxel set");
}

}  // namespace

bool misses_set(const VoxelSet& K, const HatPair& pair) {
    check_dims(K, pair);
    return geometry_misses(K, HatGeometry(pair, K.box()));
}

VoxelSet removable_cells(const VoxelSet& K, const HatPair& pair) {
    check_dims(K, pair);
    return geometry_removable(K, HatGeometry(pair, K.box()));
}

bool is_valid_cut(const VoxelSet& K, const HatPair& pair, const AmbientDomain& ambient) {
    if (!(K.box() == ambient.box)) throw BoxMismatch("voxel set and ambient use different boxes");
    check_dims(K, pair);
    return valid_in_ambient(pair, ambient) && misses_set(K, pair);
}

CutRecord apply_cut(const VoxelSet& K, const HatPair& pair, const AmbientDomain& ambient) {
    if (!is_valid_cut(K, pair, ambient)) throw InvalidCut("cut is not valid for this set and ambient");
    CutRecord rec{pair, K, K - removable_cells(K, pair), 0, false};
    rec.removed_count = K.count() - rec.after.count();
    return rec;
}

CutSequence apply_sequence(const VoxelSet& K, const std::vector<HatPair>& pairs, const AmbientDomain& ambient,
                           int q) {
    CutSequence seq{K, {}, q};
    for (const auto& p : pairs) {
        const VoxelSet& cur = seq.residual();
        if (is_valid_cut(cur, p, ambient)) {
            seq.records.push_back(apply_cut(cur, p, ambient));
        } else {
            seq.records.push_back(CutRecord{p, cur, cur, 0, true});
        }
    }
    return seq;
}

CutSequence intersect_in_family(const CutSequence& s1, const CutSequence& s2, const AmbientDomain& ambient) {
    if (!(s1.initial == s2.initial)) throw PreconditionError("sequences start from different sets");
    if (s1.q != s2.q) throw PreconditionError("sequences use different q");
    CutSequence out = s1;
    for (const auto& r : s2.records) {
        if (r.skipped) continue;
        const VoxelSet& cur = out.residual();
        // Validity is antitone in K, so this cannot fail for a valid s2.
        out.records.push_back(apply_cut(cur, r.pair, ambient));
    }
    return out;
}

NucleusResult approximate_nucleus(const VoxelSet& K, int q, const HatFamily& family, const AmbientDomain& ambient,
                                  const NucleusOptions& opt) {
    if (!(K.box() == ambient.box)) throw BoxMismatch("voxel set and ambient use different boxes");
    const int n = K.box().dim();
    if (q < 1 || q > n) throw PreconditionError("q must lie in [1, n]");
    for (const auto& p : family.pairs)
        if (p.k != n - q + 1) throw PreconditionError("family order must equal n - q + 1");

    NucleusResult res{K, CutSequence{K, {}, q}, 0, false};
    const ChartBox box = K.box();
    std::vector<std::unique_ptr<HatGeometry>> geo;
    geo.reserve(family.pairs.size());
    for (const auto& p : family.pairs) geo.push_back(std::make_unique<HatGeometry>(p, box));

    const int threads = resolve_threads(opt.threads);
    constexpr std::size_t kChunk = 256;
    std::vector<char> ok(kChunk);

    while (!res.residual.empty() && res.iterations < opt.max_iter) {
        ++res.iterations;
        bool productive = false;
        for (std::size_t start = 0; start < geo.size(); start += kChunk) {
            const std::size_t end = std::min(geo.size(), start + kChunk);
            const VoxelSet snapshot = res.residual;
            auto work = [&](std::size_t t) {
                for (std::size_t i = start + t; i < end; i += threads)
                    ok[i - start] = geometry_misses(snapshot, *geo[i]);
            };
            if (threads <= 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
                for (auto& th : pool) th.join();
            }
            for (std::size_t i = start; i < end; ++i) {
                if (!ok[i - start]) continue;
                VoxelSet gone = geometry_removable(res.residual, *geo[i]);
                if (gone.empty()) continue;
                CutRecord rec{family.pairs[i], res.residual, res.residual - gone, gone.count(), false};
                res.residual = rec.after;
                res.sequence.records.push_back(std::move(rec));
                productive = true;
            }
        }
        if (!productive) { res.converged = true; break; }
    }
    if (res.residual.empty()) res.converged = true;
    return res;
}

std::vector<ChartBox> exhaustion_boxes(const ChartBox& final_box, int stages, double growth) {
    if (stages < 1) throw InputError("exhaustion needs at least one stage");
    if (!(growth > 1.0)) throw InputError("exhaustion growth must exceed 1");
    std::vector<ChartBox> out;
    const int na = final_box.axes();
    for (int s = 0; s < stages; ++s) {
        const double f = std::pow(growth, -(stages - 1 - s));
        std::vector<double> lo(na), hi(na);
        std::vector<int> res(na);
        for (int a = 0; a < na; ++a) {
            const double mid = 0.5 * (final_box.lower()[a] + final_box.upper()[a]);
            const double half = 0.5 * (final_box.upper()[a] - final_box.lower()[a]) * f;
            lo[a] = mid - half;
            hi[a] = mid + half;
            res[a] = std::max(1, static_cast<int>(std::lround(final_box.resolution()[a] * f)));
        }
        out.emplace_back(lo, hi, res);
    }
    return out;
}

namespace {

bool box_inside(const ChartBox& a, const ChartBox& b) {
    if (a.axes() != b.axes()) return false;
    for (int i = 0; i < a.axes(); ++i)
        if (a.lower()[i] < b.lower()[i] - 1e-12 || a.upper()[i] > b.upper()[i] + 1e-12) return false;
    return true;
}

}  // namespace

ClosedNucleusResult nucleus_closed(const Predicate& A, const std::vector<ChartBox>& boxes, int q,
                                   const HatFamilyConfig& family, const AmbientDomain& ambient,
                                   const ClosedNucleusOptions& opt) {
    if (boxes.empty()) throw InvalidBox("exhaustion is empty");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (!box_inside(boxes[i], ambient.box)) throw InvalidBox("exhaustion box leaves the ambient grid");
        if (i > 0 && !box_inside(boxes[i - 1], boxes[i])) throw InvalidBox("exhaustion boxes are not nested");
    }
    const ChartBox& grid = ambient.box;
    ClosedNucleusResult out{VoxelSet(grid), boxes, {}, {}, {}};
    VoxelSet a_vox = voxelize(A, grid, VoxelizeMode::Centers) & ambient.allowed;
    const HatFamily fam = generate_family(family, ambient);
    for (const auto& b : boxes) {
        VoxelSet stage(grid);
        a_vox.for_each([&](std::int64_t i) {
            if (b.contains(grid.center(i))) stage.set(i);
        });
        const NucleusResult r = approximate_nucleus(stage, q, fam, ambient, opt.nucleus);
        out.stage_input_counts.push_back(stage.count());
        out.stage_residual_counts.push_back(r.residual.count());
        out.stage_converged.push_back(r.converged);
        out.residual |= r.residual;
    }
    return out;
}

MonotonicityVerdict monotonicity_check(const VoxelSet& K, const VoxelSet& L, int q, const HatFamily& family,
                                       const AmbientDomain& ambient, const NucleusOptions& opt) {
    if (!is_subset(K, L)) throw PreconditionError("monotonicity check needs K inside L");
    const NucleusResult rk = approximate_nucleus(K, q, family, ambient, opt);
    const NucleusResult rl = approximate_nucleus(L, q, family, ambient, opt);
    MonotonicityVerdict v;
    v.residual_K = rk.residual.count();
    v.residual_L = rl.residual.count();
    v.violations = (rk.residual - rl.residual).count();
    v.holds = v.violations == 0;
    return v;
}

nlohmann::json sequence_to_json(const CutSequence& s) {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : s.records)
        recs.push_back({{"hat", to_json(r.pair)}, {"removed_count", r.removed_count}, {"skipped", r.skipped}});
    return {{"q", s.q}, {"removed_total", s.removed_total()}, {"records", recs}};
}

std::vector<HatPair> pairs_from_json(const nlohmann::json& j) {
    try {
        const nlohmann::json* list = &j;
        if (j.is_object()) {
            if (j.contains("sequence")) list = &j.at("sequence");
            else if (j.contains("records")) list = &j.at("records");
            else if (j.contains("hats")) list = &j.at("hats");
            if (list->is_object() && list->contains("records")) list = &list->at("records");
        }
        if (!list->is_array()) throw FormatError("expected a list of hats");
        std::vector<HatPair> out;
        for (const auto& e : *list) out.push_back(hat_from_json(e.contains("hat") ? e.at("hat") : e));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed cut sequence: ") + e.what());
    }
}

}  // namespace qnucleus
