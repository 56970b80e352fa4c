#include "qnucleus/field.hpp"

#include <algorithm>
#include <limits>

namespace qnucleus {

HermitianForm::HermitianForm(const CMatrix& m) {
    if (m.rows() != m.cols()) throw InputError("Hermitian form must be square");
    m_ = 0.5 * (m + m.adjoint());
}

HermitianForm HermitianForm::diagonal(const std::vector<double>& d) {
    CMatrix m = CMatrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return HermitianForm(m);
}

double HermitianForm::max_abs_difference(const HermitianForm& o) const {
    return (m_ - o.m_).cwiseAbs().maxCoeff();
}

double ScalarField::operator()(const CPoint& p) const {
    if (!defined_at(p)) throw DomainError("field '" + name + "' evaluated outside its domain");
    return value(p);
}

ScalarField ScalarField::scaled(double c) const {
    ScalarField f = *this;
    f.name = name + "*" + std::to_string(c);
    auto v = value;
    f.value = [v, c](const CPoint& p) { return c * v(p); };
    if (hessian) {
        auto h = hessian;
        f.hessian = [h, c](const CPoint& p) { return h(p).scaled(c); };
    }
    return f;
}

double MaxField::operator()(const CPoint& p) const {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& b : branches) {
        if (!b.defined_at(p)) continue;
        best = std::max(best, b.value(p));
        any = true;
    }
    if (!any) throw DomainError("no branch of the max-field is defined here");
    return best;
}

}  // namespace qnucleus
