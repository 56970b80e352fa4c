#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnucleus/hats.hpp"

namespace qnucleus {

struct CutRecord {
    HatPair pair;
    VoxelSet before;
    VoxelSet after;
    std::int64_t removed_count = 0;
    bool skipped = false;  // invalid in apply_sequence; before == after
};

struct CutSequence {
    VoxelSet initial;
    std::vector<CutRecord> records;
    int q = 1;

    const VoxelSet& residual() const { return records.empty() ? initial : records.back().after; }
    std::vector<HatPair> pairs() const;
    std::int64_t removed_total() const;
};

struct NucleusResult {
    VoxelSet residual;
    CutSequence sequence;
    int iterations = 0;
    bool converged = false;
};

struct NucleusOptions {
    int max_iter = 50;
    int threads = 0;  // 0: QNUCLEUS_THREADS or 1
};

bool is_valid_cut(const VoxelSet& K, const HatPair& pair, const AmbientDomain& ambient);
// Same test assuming the pair is already known to be ambient-valid.
bool misses_set(const VoxelSet& K, const HatPair& pair);
// Cells of K inside Int S-hat.
VoxelSet removable_cells(const VoxelSet& K, const HatPair& pair);

CutRecord apply_cut(const VoxelSet& K, const HatPair& pair, const AmbientDomain& ambient);
CutSequence apply_sequence(const VoxelSet& K, const std::vector<HatPair>& pairs, const AmbientDomain& ambient,
                           int q = 1);
CutSequence intersect_in_family(const CutSequence& s1, const CutSequence& s2, const AmbientDomain& ambient);

NucleusResult approximate_nucleus(const VoxelSet& K, int q, const HatFamily& family, const AmbientDomain& ambient,
                                  const NucleusOptions& opt = {});

struct ClosedNucleusOptions {
    int stages = 4;
    double growth = 1.5;
    NucleusOptions nucleus;
};

struct ClosedNucleusResult {
    VoxelSet residual;
    std::vector<ChartBox> boxes;
    std::vector<std::int64_t> stage_input_counts;
    std::vector<std::int64_t> stage_residual_counts;
    std::vector<bool> stage_converged;
};

// Concentric boxes ending at `final_box`, each `growth` times the previous.
std::vector<ChartBox> exhaustion_boxes(const ChartBox& final_box, int stages, double growth);
// Every stage is computed on the ambient grid; boxes must be nested and lie in it.
ClosedNucleusResult nucleus_closed(const Predicate& A, const std::vector<ChartBox>& boxes, int q,
                                   const HatFamilyConfig& family, const AmbientDomain& ambient,
                                   const ClosedNucleusOptions& opt = {});

struct MonotonicityVerdict {
    bool holds = false;
    std::int64_t residual_K = 0;
    std::int64_t residual_L = 0;
    std::int64_t violations = 0;
};

MonotonicityVerdict monotonicity_check(const VoxelSet& K, const VoxelSet& L, int q, const HatFamily& family,
                                       const AmbientDomain& ambient, const NucleusOptions& opt = {});

int resolve_threads(int requested);

nlohmann::json sequence_to_json(const CutSequence& s);
std::vector<HatPair> pairs_from_json(const nlohmann::json& j);

}  // namespace qnucleus
