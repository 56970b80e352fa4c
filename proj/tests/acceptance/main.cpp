#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <vector>

#include "acceptance.hpp"

using namespace acceptance;

int main(int argc, char** argv) {
    // optional arguments: criterion numbers to run
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget_s;  // 0: no runtime bound
    };
    const std::vector<Entry> entries = {
        {1, "Levi oracle agreement", levi_oracle, 10},
        {2, "bump certification", bump_certification, 60},
        {3, "ball nucleus empty", ball_nucleus_empty, 300},
        {4, "tube graph voxels retained", tube_invariance, 0},
        {5, "monotonicity", monotonicity, 0},
        {6, "confluence", confluence, 0},
        {7, "affine equivariance", affine_equivariance, 0},
        {8, "construction round trip", round_trip, 600},
        {9, "local maximum principle", local_maximum, 0},
        {10, "continuity-principle probes", continuity_probes, 0},
        {11, "reproducibility", reproducibility, 0},
    };
    int failures = 0, ran = 0;
    for (const auto& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.summary = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.budget_s > 0 && secs >= e.budget_s) {
            o.pass = false;
            o.summary += " [over runtime budget]";
        }
        failures += !o.pass;
        std::printf("criterion %2d %s  %s: %s (%.1f s)\n", e.id, o.pass ? "PASS" : "FAIL", e.name, o.summary.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
