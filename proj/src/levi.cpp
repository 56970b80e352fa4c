#include "qnucleus/levi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace qnucleus {

HermitianForm finite_difference_hessian(const ScalarField& field, const CPoint& p, double step) {
    if (!(step > 0.0)) throw InputError("finite-difference step must be positive");
    const int na = static_cast<int>(p.size());
    const int n = na / 2;
    auto eval = [&](const CPoint& q) { return field(q); };

    // Real Hessian over (x1, y1, ..., xn, yn).
    Eigen::MatrixXd H(na, na);
    const double f0 = eval(p);
    for (int a = 0; a < na; ++a) {
        CPoint pp = p, pm = p;
        pp[a] += step;
        pm[a] -= step;
        H(a, a) = (eval(pp) - 2.0 * f0 + eval(pm)) / (step * step);
    }
    for (int a = 0; a < na; ++a) {
        for (int b = a + 1; b < na; ++b) {
            CPoint ppp = p, ppm = p, pmp = p, pmm = p;
            ppp[a] += step; ppp[b] += step;
            ppm[a] += step; ppm[b] -= step;
            pmp[a] -= step; pmp[b] += step;
            pmm[a] -= step; pmm[b] -= step;
            H(a, b) = H(b, a) = (eval(ppp) - eval(ppm) - eval(pmp) + eval(pmm)) / (4.0 * step * step);
        }
    }

    CMatrix L(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const double re = H(2 * j, 2 * k) + H(2 * j + 1, 2 * k + 1);
            const double im = H(2 * j, 2 * k + 1) - H(2 * j + 1, 2 * k);
            L(j, k) = Complex(0.25 * re, 0.25 * im);
        }
    }
    return HermitianForm(L);
}

HermitianForm complex_hessian(const ScalarField& field, const CPoint& p, double step,
                              bool force_finite_difference) {
    if (field.has_hessian() && !force_finite_difference) {
        if (!field.defined_at(p)) throw DomainError("field '" + field.name + "' evaluated outside its domain");
        return field.hessian(p);
    }
    return finite_difference_hessian(field, p, step);
}

Signature signature(const HermitianForm& form, double tau) {
    if (!(tau > 0.0)) throw InputError("signature tolerance must be positive");
    Signature s;
    s.tau = tau;
    const int n = form.dim();
    if (n == 1) {
        s.eigenvalues = {form(0, 0).real()};
    } else if (n > 1) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(form.matrix(), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    for (double l : s.eigenvalues) {
        if (std::abs(l) <= tau) ++s.n_zero;
        else if (l < 0) ++s.n_neg;
        else ++s.n_pos;
    }
    return s;
}

ConvexityClass convexity_class(const Signature& s) {
    return {s.n_neg + s.n_zero + 1, s.n_neg + 1};
}

ConvexityClass classify_point(const ScalarField& field, const CPoint& p, const LeviOptions& opt) {
    return convexity_class(signature(complex_hessian(field, p, opt.step), opt.tau));
}

namespace {

struct PointVerdict {
    ConvexityClass cls;
    Signature worst_signature;
};

PointVerdict max_point_verdict(const MaxField& mf, const CPoint& p, const LeviOptions& opt,
                               double eps_active) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> values(mf.branches.size(), best);
    bool any = false;
    for (std::size_t i = 0; i < mf.branches.size(); ++i) {
        if (!mf.branches[i].defined_at(p)) continue;
        values[i] = mf.branches[i].value(p);
        best = std::max(best, values[i]);
        any = true;
    }
    if (!any) throw DomainError("no branch of the max-field is defined here");
    PointVerdict v{{0, 0}, {}};
    bool first = true;
    for (std::size_t i = 0; i < mf.branches.size(); ++i) {
        if (!mf.branches[i].defined_at(p) || values[i] < best - eps_active) continue;
        const Signature s = signature(complex_hessian(mf.branches[i], p, opt.step), opt.tau);
        const ConvexityClass c = convexity_class(s);
        const bool worse = first || c.q_min_strict > v.cls.q_min_strict ||
                           (c.q_min_strict == v.cls.q_min_strict && c.q_min_weak > v.cls.q_min_weak);
        v.cls.q_min_strict = std::max(v.cls.q_min_strict, c.q_min_strict);
        v.cls.q_min_weak = std::max(v.cls.q_min_weak, c.q_min_weak);
        if (worse) v.worst_signature = s;
        first = false;
    }
    return v;
}

bool passes(const ConvexityClass& c, const ScanOptions& opt) {
    return (opt.strict ? c.q_min_strict : c.q_min_weak) <= opt.q;
}

// Larger is worse: class first, then the smallest eigenvalue.
bool worse_than(const ScanPoint& a, const ScanPoint& b, const ScanOptions& opt) {
    const auto ca = convexity_class(a.signature), cb = convexity_class(b.signature);
    const int qa = opt.strict ? ca.q_min_strict : ca.q_min_weak;
    const int qb = opt.strict ? cb.q_min_strict : cb.q_min_weak;
    if (qa != qb) return qa > qb;
    const double la = a.eigenvalues.empty() ? 0.0 : a.eigenvalues.front();
    const double lb = b.eigenvalues.empty() ? 0.0 : b.eigenvalues.front();
    return la < lb;
}

template <class Verdict>
ScanReport scan_impl(const VoxelSet& region, const ScanOptions& opt, Verdict&& verdict) {
    ScanReport report;
    if (region.empty()) throw PreconditionError("scan region is empty");
    const ChartBox& box = region.box();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    auto visit = [&](const CPoint& p) {
        ++report.points_scanned;
        ScanPoint sp;
        try {
            PointVerdict v = verdict(p);
            sp.point = p;
            sp.signature = v.worst_signature;
            sp.eigenvalues = v.worst_signature.eigenvalues;
            sp.pass = passes(v.cls, opt);
        } catch (const DomainError&) {
            ++report.domain_errors;
            return;
        }
        if (sp.pass) ++report.pass; else ++report.fail;
        if (!report.worst || worse_than(sp, *report.worst, opt)) report.worst = sp;
        if (opt.record_points) report.rows.push_back(std::move(sp));
    };
    region.for_each([&](std::int64_t i) {
        const CPoint c = box.center(i);
        visit(c);
        for (int s = 0; s < opt.jitter_per_voxel; ++s) {
            CPoint j = c;
            for (int a = 0; a < box.axes(); ++a) j[a] += u(rng) * box.width(a);
            visit(j);
        }
    });
    return report;
}

}  // namespace

ConvexityClass classify_max_point(const MaxField& mf, const CPoint& p, const LeviOptions& opt,
                                  double eps_active) {
    return max_point_verdict(mf, p, opt, eps_active).cls;
}

ScanReport scan_region(const ScalarField& field, const VoxelSet& region, const ScanOptions& opt) {
    return scan_impl(region, opt, [&](const CPoint& p) {
        const Signature s = signature(complex_hessian(field, p, opt.levi.step), opt.levi.tau);
        return PointVerdict{convexity_class(s), s};
    });
}

ScanReport scan_region(const MaxField& field, const VoxelSet& region, const ScanOptions& opt) {
    return scan_impl(region, opt, [&](const CPoint& p) { return max_point_verdict(field, p, opt.levi, 1e-6); });
}

nlohmann::json to_json(const Signature& s) {
    return {{"n_neg", s.n_neg}, {"n_zero", s.n_zero}, {"n_pos", s.n_pos}, {"tau", s.tau}};
}

nlohmann::json to_json(const ScanReport& r) {
    nlohmann::json j{{"points_scanned", r.points_scanned},
                     {"pass", r.pass},
                     {"fail", r.fail},
                     {"domain_errors", r.domain_errors}};
    if (r.worst) {
        j["worst"] = {{"point", r.worst->point.coords()},
                      {"eigenvalues", r.worst->eigenvalues},
                      {"signature", to_json(r.worst->signature)}};
    } else {
        j["worst"] = nullptr;
    }
    return j;
}

std::string scan_csv(const ScanReport& r) {
    std::string out;
    const int na = r.rows.empty() ? 0 : static_cast<int>(r.rows.front().point.size());
    const int n = na / 2;
    for (int a = 0; a < n; ++a) out += "x" + std::to_string(a + 1) + ",y" + std::to_string(a + 1) + ",";
    for (int a = 0; a < n; ++a) out += "lambda" + std::to_string(a + 1) + ",";
    out += "n_neg,n_zero,n_pos,pass\n";
    char buf[64];
    for (const auto& row : r.rows) {
        for (double c : row.point.coords()) {
            std::snprintf(buf, sizeof buf, "%.17g,", c);
            out += buf;
        }
        for (double l : row.eigenvalues) {
            std::snprintf(buf, sizeof buf, "%.17g,", l);
            out += buf;
        }
        out += std::to_string(row.signature.n_neg) + "," + std::to_string(row.signature.n_zero) + "," +
               std::to_string(row.signature.n_pos) + "," + (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace qnucleus
