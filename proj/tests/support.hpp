#pragma once

#include "condent/pmf.hpp"
#include "condent/simulation.hpp"

#include <random>
#include <vector>

namespace testing {

inline condent::JointPmf zipf3x2() { return condent::zipf_joint({2.0, 6}, 3, 2); }

inline condent::JointPmf uniform(std::size_t r, std::size_t s) {
    return condent::JointPmf::validate(std::vector<double>(r * s, 1.0 / static_cast<double>(r * s)),
                                       r, s);
}

// Strictly positive pmf with cells bounded away from zero.
inline condent::JointPmf random_strict(std::mt19937_64& gen, std::size_t r, std::size_t s) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> w(r * s);
    double total = 0.0;
    for (double& v : w) total += (v = u(gen));
    for (double& v : w) v /= total;
    return condent::JointPmf::validate(std::move(w), r, s);
}

inline condent::JointPmf product(const std::vector<double>& px, const std::vector<double>& py) {
    std::vector<double> p;
    for (double a : px)
        for (double b : py) p.push_back(a * b);
    return condent::JointPmf::validate(std::move(p), px.size(), py.size());
}

}  // namespace testing
