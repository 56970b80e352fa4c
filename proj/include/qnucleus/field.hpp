#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qnucleus/core.hpp"

namespace qnucleus {

// Complex Hessian (d^2/dz_j dzbar_k). Symmetrized on construction.
class HermitianForm {
public:
    HermitianForm() = default;
    explicit HermitianForm(const CMatrix& m);
    static HermitianForm zero(int n) { return HermitianForm(CMatrix::Zero(n, n)); }
    static HermitianForm diagonal(const std::vector<double>& d);

    int dim() const { return static_cast<int>(m_.rows()); }
    const CMatrix& matrix() const { return m_; }
    Complex operator()(int j, int k) const { return m_(j, k); }

    HermitianForm scaled(double c) const { return HermitianForm(m_ * c); }
    double max_abs_difference(const HermitianForm& o) const;

private:
    CMatrix m_;
};

using Evaluator = std::function<double(const CPoint&)>;
using HessianEvaluator = std::function<HermitianForm(const CPoint&)>;

// Real function on (part of) C^n. `domain` defaults to everywhere.
struct ScalarField {
    std::string name;
    int n = 0;
    Evaluator value;
    HessianEvaluator hessian;  // empty when no analytic Hessian is known
    Predicate domain;          // empty means everywhere

    bool defined_at(const CPoint& p) const { return !domain || domain(p); }
    bool has_hessian() const { return static_cast<bool>(hessian); }
    // Throws DomainError outside the domain.
    double operator()(const CPoint& p) const;

    ScalarField scaled(double c) const;
    ScalarField negated() const { return scaled(-1.0); }
};

// Finite max of smooth branches; only branches defined at p take part.
struct MaxField {
    std::vector<ScalarField> branches;

    int dim() const { return branches.empty() ? 0 : branches.front().n; }
    double operator()(const CPoint& p) const;  // DomainError if no branch is defined
};

}  // namespace qnucleus
