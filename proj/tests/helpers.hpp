#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "gcot/core.hpp"

namespace testing_util {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline gcot::DiscreteDensity line_density(std::vector<double> masses, double spacing = 1.0) {
    std::vector<gcot::Point> pts;
    for (std::size_t i = 0; i < masses.size(); ++i) pts.push_back({spacing * static_cast<double>(i)});
    return gcot::DiscreteDensity(1, pts, masses);
}

// Random plan on `sites` atoms whose occupations all stay at or below nmax;
// every atom is charged by at least one occupation.
inline gcot::GCPlan random_plan(std::mt19937_64& rng, std::size_t sites, int nmax, int entries) {
    std::uniform_int_distribution<int> count(0, nmax);
    std::uniform_real_distribution<double> U(0.05, 1.0);
    gcot::GCPlan p(sites, nmax);
    for (int e = 0; e < entries; ++e) {
        gcot::Occupation o(sites, 0);
        int budget = count(rng);
        for (int k = 0; k < budget; ++k) o[std::uniform_int_distribution<std::size_t>(0, sites - 1)(rng)] += 1;
        p.add(o, U(rng));
    }
    for (std::size_t i = 0; i < sites; ++i) {
        gcot::Occupation o(sites, 0);
        o[i] = 1;
        p.add(o, U(rng));
    }
    p.normalize();
    return p;
}

}  // namespace testing_util
