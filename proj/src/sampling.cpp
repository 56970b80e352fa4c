#include "qnucleus/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qnucleus {

namespace {

std::vector<int> first_primes(int count) {
    std::vector<int> p;
    for (int c = 2; static_cast<int>(p.size()) < count; ++c) {
        bool prime = true;
        for (int d : p) {
            if (d * d > c) break;
            if (c % d == 0) { prime = false; break; }
        }
        if (prime) p.push_back(c);
    }
    return p;
}

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

}  // namespace

Halton::Halton(int dims, std::uint64_t seed) : bases_(first_primes(dims)), shift_(dims, 0.0) {
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& s : shift_) s = u(rng);
    }
}

std::vector<double> Halton::next() {
    ++index_;
    std::vector<double> v(bases_.size());
    for (std::size_t d = 0; d < bases_.size(); ++d) {
        double x = radical_inverse(index_, bases_[d]) + shift_[d];
        x -= std::floor(x);
        if (x <= 0.0) x = 0.5 / static_cast<double>(bases_[d] * (index_ + 1));
        v[d] = x;
    }
    return v;
}

}  // namespace qnucleus
