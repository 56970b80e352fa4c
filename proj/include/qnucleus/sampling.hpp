#pragma once

#include <cstdint>
#include <vector>

namespace qnucleus {

// Halton points with a seeded Cranley-Patterson shift. Component values lie in (0, 1).
class Halton {
public:
    Halton(int dims, std::uint64_t seed);
    std::vector<double> next();
    int dims() const { return static_cast<int>(bases_.size()); }

private:
    std::vector<int> bases_;
    std::vector<double> shift_;
    std::uint64_t index_ = 0;
};

}  // namespace qnucleus
