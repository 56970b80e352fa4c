#include "qnucleus/glue.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qnucleus/io.hpp"

namespace qnucleus {

GlueRegion GlueRegion::make(const VoxelSet& V1, const VoxelSet& V2, const VoxelSet& K) {
    return {V1, V2, K, boundary(V1) & V2 & K, boundary(V2) & V1 & K};
}

ConstructedFunction leaf_function(const ScalarField& field, double scale, const VoxelSet& support, Provenance prov,
                                  std::optional<HatPair> hat) {
    auto node = std::make_shared<ConstructedNode>();
    node->kind = ConstructedNode::Kind::Leaf;
    node->field = field;
    node->scale = scale;
    node->support = support;
    node->provenance = prov;
    node->hat = std::move(hat);
    return {node, support, {}, {}};
}

namespace {

double eval_node(const ConstructedNode& n, const CPoint& p, std::int64_t cell) {
    if (n.kind == ConstructedNode::Kind::Leaf) {
        if (!n.support.test(cell)) throw DomainError("point outside the leaf support");
        return n.scale * n.field.value(p);
    }
    const bool a = n.V1.test(cell), b = n.V2.test(cell);
    if (a && b) return std::max(eval_node(*n.first, p, cell), eval_node(*n.second, p, cell));
    if (a) return eval_node(*n.first, p, cell);
    if (b) return eval_node(*n.second, p, cell);
    throw DomainError("point outside both glued pieces");
}

void collect_active(const ConstructedNode& n, const CPoint& p, std::int64_t cell,
                    std::vector<const ConstructedNode*>& out) {
    if (n.kind == ConstructedNode::Kind::Leaf) {
        out.push_back(&n);
        return;
    }
    const bool a = n.V1.test(cell), b = n.V2.test(cell);
    if (a && b) {
        const double v1 = eval_node(*n.first, p, cell), v2 = eval_node(*n.second, p, cell);
        const double tol = 1e-12 * std::max(std::abs(v1), std::abs(v2));
        if (v1 >= v2 - tol) collect_active(*n.first, p, cell, out);
        if (v2 >= v1 - tol) collect_active(*n.second, p, cell, out);
    } else if (a) {
        collect_active(*n.first, p, cell, out);
    } else if (b) {
        collect_active(*n.second, p, cell, out);
    } else {
        throw DomainError("point outside both glued pieces");
    }
}

std::int64_t cell_in_W(const ConstructedFunction& f, const CPoint& p) {
    const auto cell = f.box().cell_of(p);
    if (!cell || !f.W.test(*cell)) throw DomainError("point outside the constructed function's domain");
    return *cell;
}

}  // namespace

double evaluate_constructed(const ConstructedFunction& f, const CPoint& p) {
    return eval_node(*f.root, p, cell_in_W(f, p));
}

std::vector<const ConstructedNode*> active_leaves(const ConstructedFunction& f, const CPoint& p) {
    std::vector<const ConstructedNode*> out;
    collect_active(*f.root, p, cell_in_W(f, p), out);
    return out;
}

double choose_scaling(const ConstructedFunction& psi, const ScalarField& phi, const VoxelSet& seam_in,
                      const VoxelSet& seam_out, double margin) {
    const ChartBox& box = seam_in.box();
    double c = 1.0;
    if (!seam_in.empty()) {
        double worst = -std::numeric_limits<double>::infinity();
        seam_in.for_each([&](std::int64_t i) {
            const CPoint p = box.center(i);
            const double f = phi(p);
            if (!(f > 1e-12)) throw CannotDominate("bump vanishes on an inner seam voxel", i);
            worst = std::max(worst, evaluate_constructed(psi, p) / f);
        });
        c = (1.0 + margin) * worst;
        if (!(c > 0.0)) c = 1.0;
    }
    seam_out.for_each([&](std::int64_t i) {
        const CPoint p = box.center(i);
        if (!(evaluate_constructed(psi, p) > c * phi(p)))
            throw SeamViolation("scaled bump dominates on an outer seam voxel", i);
    });
    return c;
}

ConstructedFunction glue_pair(const ConstructedFunction& f1, const ConstructedFunction& f2, const VoxelSet& K,
                              double tolerance) {
    const VoxelSet& V1 = f1.W;
    const VoxelSet& V2 = f2.W;
    const VoxelSet uncovered = K - (V1 | V2);
    if (!uncovered.empty()) throw CoverageError("K is not covered by the glued pieces", uncovered.indices().front());
    const GlueRegion reg = GlueRegion::make(V1, V2, K);
    const ChartBox& box = K.box();
    auto check = [&](const VoxelSet& seam, const ConstructedFunction& hi, const ConstructedFunction& lo,
                     const char* what) {
        seam.for_each([&](std::int64_t i) {
            const CPoint p = box.center(i);
            const double a = evaluate_constructed(hi, p), b = evaluate_constructed(lo, p);
            if (!(a - b >= tolerance * std::max(std::abs(a), std::abs(b)) && a > b)) throw GlueError(what, i);
        });
    };
    check(reg.seam_out, f1, f2, "first branch does not dominate on the boundary of the second piece");
    check(reg.seam_in, f2, f1, "second branch does not dominate on the boundary of the first piece");

    auto node = std::make_shared<ConstructedNode>();
    node->kind = ConstructedNode::Kind::Max;
    node->first = f1.root;
    node->second = f2.root;
    node->V1 = V1;
    node->V2 = V2;
    ConstructedFunction out{node, (dilate(K - V2) & V1) | (dilate(K - V1) & V2) | (V1 & V2), f1.scales, f1.notes};
    out.scales.insert(out.scales.end(), f2.scales.begin(), f2.scales.end());
    out.notes.insert(out.notes.end(), f2.notes.begin(), f2.notes.end());
    return out;
}

}  // namespace qnucleus

namespace qnucleus {

namespace {

ConstructedFunction restricted(const ConstructedFunction& f, const VoxelSet& domain) {
    ConstructedFunction out = f;
    out.W = f.W & domain;
    return out;
}

}  // namespace

ConstructedFunction build_q_convex(const VoxelSet& K, const CutSequence& seq, int q, const AmbientDomain& ambient,
                                   const BuildOptions& opt) {
    if (!(seq.initial == K)) throw PreconditionError("sequence does not start from K");
    if (!seq.residual().empty()) throw PreconditionError("residual nonempty: the sequence does not empty K");
    std::vector<const CutRecord*> steps;
    for (const auto& r : seq.records)
        if (!r.skipped && r.removed_count > 0) steps.push_back(&r);
    if (steps.empty()) {
        if (!K.empty()) throw PreconditionError("no productive cuts for a nonempty K");
        return leaf_function(ScalarField{"zero", K.box().dim(), [](const CPoint&) { return 1.0; }, {}, {}}, 1.0,
                             VoxelSet(K.box()));
    }
    for (const auto* r : steps)
        if (!valid_in_ambient(r->pair, ambient)) throw PreconditionError("sequence uses a hat that is not ambient-valid");

    const ChartBox& box = K.box();
    const int m1 = static_cast<int>(steps.size());  // m - 1
    auto bump_leaf = [&](int idx, double c, const VoxelSet& support) {
        return leaf_function(hat_bump(steps[idx]->pair, q, opt.params), c, support, Provenance{idx + 1, idx},
                             steps[idx]->pair);
    };

    // Base: the last cut's filling holds everything that is left.
    {
        const VoxelSet U = voxelize_hat(steps[m1 - 1]->pair, box, HatVoxelization::InteriorConservative);
        if (!is_subset(steps[m1 - 1]->before, U))
            throw CoverageError("last set is not inside the last filling", (steps[m1 - 1]->before - U).indices().front(), m1);
    }
    ConstructedFunction psi =
        bump_leaf(m1 - 1, 1.0, voxelize_hat(steps[m1 - 1]->pair, box, HatVoxelization::InteriorConservative));
    psi.scales.push_back(1.0);

    for (int j = m1 - 1; j >= 1; --j) {
        // glue psi (neighbourhood of K_{j+1}) with the bump of steps[j-1] over K_j
        const VoxelSet& Kprev = steps[j - 1]->before;
        const VoxelSet& Kcur = steps[j - 1]->after;
        const ScalarField phi = hat_bump(steps[j - 1]->pair, q, opt.params);
        VoxelSet V2full = voxelize_hat(steps[j - 1]->pair, box, HatVoxelization::InteriorConservative);
        bool done = false;
        for (int attempt = 0; attempt < 2 && !done; ++attempt) {
            const int d = opt.dilation + attempt;
            const VoxelSet V1 = dilate(Kcur, d) & psi.W;
            const VoxelSet V2 = attempt == 0 ? V2full : (erode(V2full) | (Kprev - V1));
            const ConstructedFunction psi1 = restricted(psi, V1);
            try {
                const GlueRegion reg = GlueRegion::make(V1, V2, Kprev);
                const double c = choose_scaling(psi1, phi, reg.seam_in, reg.seam_out, opt.margin);
                ConstructedFunction leaf = bump_leaf(j - 1, c, V2);
                leaf.scales = {c};
                ConstructedFunction next = glue_pair(psi1, leaf, Kprev, opt.tolerance);
                if (attempt > 0)
                    next.notes.push_back("step " + std::to_string(j) + ": shrink retry (dilation " + std::to_string(d) +
                                         ", eroded filling)");
                psi = std::move(next);
                done = true;
            } catch (const WitnessError& e) {
                if (attempt == 1) {
                    if (dynamic_cast<const SeamViolation*>(&e)) throw SeamViolation(e.what(), e.voxel, j);
                    if (dynamic_cast<const CannotDominate*>(&e)) throw CannotDominate(e.what(), e.voxel, j);
                    if (dynamic_cast<const CoverageError*>(&e)) throw CoverageError(e.what(), e.voxel, j);
                    throw GlueError(e.what(), e.voxel, j);
                }
            }
        }
    }
    if (!is_subset(K, psi.W)) throw CoverageError("constructed domain misses K", (K - psi.W).indices().front(), 0);
    return psi;
}

CertifyReport certify_constructed(const ConstructedFunction& f, const VoxelSet& K, int q, const CertifyOptions& opt) {
    CertifyReport rep;
    const VoxelSet region = dilate(K) & f.W;
    const auto cells = region.indices();
    if (cells.empty() || opt.samples < 1) return rep;
    const ChartBox& box = region.box();
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    std::uniform_real_distribution<double> uni(-0.5, 0.5);
    rep.min_value = std::numeric_limits<double>::infinity();
    const LeviOptions base{opt.tau, opt.step};
    for (int s = 0; s < opt.samples; ++s) {
        const std::int64_t cell = cells[pick(rng)];
        CPoint p = box.center(cell);
        for (int a = 0; a < box.axes(); ++a) p[a] += uni(rng) * box.width(a) * (1.0 - 1e-9);
        ++rep.samples;
        double v = 0.0;
        std::vector<const ConstructedNode*> act;
        try {
            v = evaluate_constructed(f, p);
            act = active_leaves(f, p);
        } catch (const DomainError&) {
            ++rep.positive_failures;
            if (static_cast<int>(rep.witnesses.size()) < opt.max_witnesses) rep.witnesses.push_back(p);
            continue;
        }
        rep.min_value = std::min(rep.min_value, v);
        if (!(v > 0.0)) {
            ++rep.positive_failures;
            if (static_cast<int>(rep.witnesses.size()) < opt.max_witnesses) rep.witnesses.push_back(p);
        }
        MaxField mf;
        for (const auto* leaf : act) mf.branches.push_back(leaf->field.scaled(leaf->scale));
        // Same scale-relative zero threshold as the bump validation.
        LeviOptions lo = base;
        lo.tau = opt.tau * std::clamp(std::abs(v), 1e-300, 1.0);
        const ConvexityClass cls = classify_max_point(mf, p, lo, std::numeric_limits<double>::infinity());
        rep.worst_q_min_strict = std::max(rep.worst_q_min_strict, cls.q_min_strict);
        if (cls.q_min_strict > q) {
            ++rep.convexity_failures;
            if (static_cast<int>(rep.witnesses.size()) < opt.max_witnesses) rep.witnesses.push_back(p);
        } else if (classify_max_point(mf, p, base, std::numeric_limits<double>::infinity()).q_min_strict > q) {
            ++rep.flagged_marginal;
        }
    }
    return rep;
}

namespace {

std::shared_ptr<const ConstructedNode> negate_node(const ConstructedNode& n) {
    auto out = std::make_shared<ConstructedNode>(n);
    if (n.kind == ConstructedNode::Kind::Leaf) {
        out->scale = -n.scale;
    } else {
        out->first = negate_node(*n.first);
        out->second = negate_node(*n.second);
    }
    return out;
}

}  // namespace

ConstructedFunction negated(const ConstructedFunction& f) {
    ConstructedFunction out = f;
    out.root = negate_node(*f.root);
    for (auto& c : out.scales) c = -c;
    return out;
}

}  // namespace qnucleus

namespace qnucleus {

namespace {

struct JsonWriter {
    nlohmann::json hats = nlohmann::json::array();
    nlohmann::json sets = nlohmann::json::array();

    int add_set(const VoxelSet& s) {
        sets.push_back(voxelset_to_json(s));
        return static_cast<int>(sets.size()) - 1;
    }

    nlohmann::json node(const ConstructedNode& n) {
        if (n.kind == ConstructedNode::Kind::Leaf) {
            nlohmann::json j{{"type", "leaf"},
                             {"scale", n.scale},
                             {"support", add_set(n.support)},
                             {"step", n.provenance.step},
                             {"field", n.field.name}};
            if (n.hat) {
                hats.push_back(to_json(*n.hat));
                j["hat"] = static_cast<int>(hats.size()) - 1;
            } else {
                j["hat"] = nullptr;
            }
            return j;
        }
        return {{"type", "max"}, {"V1", add_set(n.V1)}, {"V2", add_set(n.V2)}, {"children", {node(*n.first), node(*n.second)}}};
    }
};

std::shared_ptr<const ConstructedNode> read_node(const nlohmann::json& j, const std::vector<HatPair>& hats,
                                                 const std::vector<VoxelSet>& sets, int q, const BumpParams& params) {
    auto set_at = [&](const nlohmann::json& idx) -> const VoxelSet& {
        const auto i = idx.get<std::size_t>();
        if (i >= sets.size()) throw FormatError("set reference out of range");
        return sets[i];
    };
    auto out = std::make_shared<ConstructedNode>();
    const std::string type = j.at("type").get<std::string>();
    if (type == "leaf") {
        out->kind = ConstructedNode::Kind::Leaf;
        out->scale = j.at("scale").get<double>();
        out->support = set_at(j.at("support"));
        out->provenance.step = j.value("step", -1);
        if (j.at("hat").is_null()) throw FormatError("leaf without a hat cannot be rebuilt");
        const auto h = j.at("hat").get<std::size_t>();
        if (h >= hats.size()) throw FormatError("hat reference out of range");
        out->hat = hats[h];
        out->provenance.hat_index = static_cast<int>(h);
        out->field = hat_bump(hats[h], q, params);
    } else if (type == "max") {
        out->kind = ConstructedNode::Kind::Max;
        out->V1 = set_at(j.at("V1"));
        out->V2 = set_at(j.at("V2"));
        const auto& ch = j.at("children");
        if (ch.size() != 2) throw FormatError("max node needs two children");
        out->first = read_node(ch.at(0), hats, sets, q, params);
        out->second = read_node(ch.at(1), hats, sets, q, params);
    } else {
        throw FormatError("unknown node type " + type);
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const ConstructedFunction& f) {
    JsonWriter w;
    nlohmann::json root = w.node(*f.root);
    const int W = w.add_set(f.W);
    return {{"grid", to_json(f.box())}, {"hats", w.hats}, {"sets", w.sets}, {"root", root},
            {"W", W},                   {"scales", f.scales}, {"notes", f.notes}};
}

ConstructedFunction constructed_from_json(const nlohmann::json& j, int q, const BumpParams& params) {
    try {
        std::vector<HatPair> hats;
        for (const auto& h : j.at("hats")) hats.push_back(hat_from_json(h));
        std::vector<VoxelSet> sets;
        for (const auto& s : j.at("sets")) sets.push_back(voxelset_from_json(s));
        ConstructedFunction f{read_node(j.at("root"), hats, sets, q, params), sets.at(j.at("W").get<std::size_t>()),
                              j.value("scales", std::vector<double>{}), j.value("notes", std::vector<std::string>{})};
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed constructed function: ") + e.what());
    } catch (const std::out_of_range&) {
        throw FormatError("constructed function references a missing set");
    }
}

nlohmann::json to_json(const CertifyReport& r) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& p : r.witnesses) w.push_back(p.coords());
    return {{"pass", r.pass()},
            {"samples", r.samples},
            {"positive_failures", r.positive_failures},
            {"convexity_failures", r.convexity_failures},
            {"flagged_marginal", r.flagged_marginal},
            {"min_value", r.min_value},
            {"worst_q_min_strict", r.worst_q_min_strict},
            {"witnesses", w}};
}

}  // namespace qnucleus
