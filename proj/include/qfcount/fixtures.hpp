#pragma once

#include <string>
#include <vector>

#include "qform.hpp"

namespace qfc::fixtures {

inline QuadraticForm sum_of_squares(int m) {
    std::vector<Coefficient> cs;
    for (int i = 1; i <= m; ++i) cs.push_back({i, i, 1});
    return build_form(m, cs, "sum_of_" + std::to_string(m) + "_squares");
}

inline QuadraticForm four_squares() { return sum_of_squares(4); }
inline QuadraticForm six_squares() { return sum_of_squares(6); }
inline QuadraticForm eight_squares() { return sum_of_squares(8); }

// y1^2 + 3y2^2 + y3^2 + y3y4 + y4^2
inline QuadraticForm example3() {
    return build_form(4, {{1, 1, 1}, {2, 2, 3}, {3, 3, 1}, {3, 4, 1}, {4, 4, 1}}, "example3");
}

// y1^2 + y2^2 + y3^2 + 3y4^2
inline QuadraticForm calibration() {
    return build_form(4, {{1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {4, 4, 3}}, "diag_1113");
}

// Cartan matrix of E8: chain 1-2-3-4-5-6-7 with node 8 on node 5.
inline QuadraticForm e8() {
    std::vector<Coefficient> cs;
    for (int i = 1; i <= 8; ++i) cs.push_back({i, i, 1});
    for (int i = 1; i <= 6; ++i) cs.push_back({i, i + 1, -1});
    cs.push_back({5, 8, -1});
    return build_form(8, cs, "e8");
}

inline std::vector<QuadraticForm> all() {
    return {four_squares(), six_squares(), eight_squares(), example3(), calibration(), e8()};
}

inline QuadraticForm by_name(const std::string& n) {
    for (auto& q : all())
        if (q.name() == n) return q;
    fail(ErrorKind::InvalidArgument, "unknown builtin form: " + n);
}

} // namespace qfc::fixtures
