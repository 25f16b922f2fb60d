#pragma once

#include <random>
#include <string>

#include "qfcount/qform.hpp"

namespace testing_forms {

// Random integral forms, redrawn until positive definite and primitive.
inline qfc::QuadraticForm random_form(std::mt19937_64& rng, int m, int spread = 3) {
    while (true) {
        std::vector<qfc::Coefficient> cs;
        for (int i = 1; i <= m; ++i) {
            cs.push_back({i, i, 1 + static_cast<qfc::i64>(rng() % (spread + 1))});
            for (int j = i + 1; j <= m; ++j) {
                qfc::i64 c = static_cast<qfc::i64>(rng() % (2 * spread + 1)) - spread;
                if (c && rng() % 2) cs.push_back({i, j, c});
            }
        }
        try {
            return qfc::build_form(m, cs, "random");
        } catch (const qfc::Error&) {
        }
    }
}

inline std::string describe(const qfc::QuadraticForm& q) {
    std::string s;
    for (const auto& c : q.coefficients())
        s += "(" + std::to_string(c.i) + "," + std::to_string(c.j) + "):" + std::to_string(c.c) + " ";
    return s;
}

} // namespace testing_forms
