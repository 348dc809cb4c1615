#pragma once

#include "dcm/exact.hpp"
#include "dcm/risk_model.hpp"
#include "dcm/scale.hpp"

#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace dcm::test {

// Small seeded generator for hand-rolled property checks.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(int_in(0, static_cast<std::int64_t>(v.size()) - 1))];
    }

    std::vector<std::int64_t> cards(std::size_t n, std::int64_t max_cards = 9) {
        std::vector<std::int64_t> out(n);
        for (auto& c : out) c = int_in(0, max_cards);
        return out;
    }

    // p/q with small numerator and denominator
    Exact ratio(std::int64_t lo, std::int64_t hi, std::int64_t max_den = 8) {
        std::int64_t den = int_in(1, max_den);
        return Exact(int_in(lo * den, hi * den), den);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Runs `body` for `cases` generated inputs. On the first failing case the
// seed and case index are printed so the case can be replayed.
inline bool for_all(const std::string& name, int cases, std::uint64_t seed,
                    const std::function<bool(Gen&, std::string&)>& body) {
    for (int i = 0; i < cases; ++i) {
        Gen g(seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
        std::string why;
        if (!body(g, why)) {
            std::cerr << "property '" << name << "' falsified at case " << i << " (seed " << seed << "): " << why
                      << "\n";
            return false;
        }
    }
    return true;
}

inline std::vector<ScaleLevel> plain_levels(std::size_t n) {
    std::vector<ScaleLevel> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({"l" + std::to_string(i), "", 0, std::nullopt});
    return out;
}

inline std::vector<ScaleLevel> anchored_levels(const std::vector<Exact>& anchors) {
    std::vector<ScaleLevel> out;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        out.push_back({"l" + std::to_string(i), "", 0, anchors[i]});
    }
    return out;
}

inline Exact abs(const Exact& x) { return x < 0 ? Exact(-x) : x; }

}  // namespace dcm::test
