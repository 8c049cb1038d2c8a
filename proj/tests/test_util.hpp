#pragma once

#include "isotypy/errors.hpp"
#include "isotypy/int_matrix.hpp"
#include "isotypy/pipeline.hpp"

#include <functional>
#include <random>
#include <string>

namespace testutil {

using isotypy::Int;
using isotypy::IntMatrix;

inline std::string fixture(const std::string& rel) { return std::string(ISOTYPY_FIXTURE_DIR) + "/" + rel; }

inline isotypy::BlockFixture block(const std::string& id) { return isotypy::load_fixture(fixture("blocks/" + id + ".json")); }

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// Product of random elementary operations: unimodular by construction.
inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 12) {
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2) {
        if (rng() % 2) u.negate_row(0);
        return u;
    }
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> f(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t a = idx(rng), b = idx(rng);
        if (a == b) {
            u.negate_row(a);
            continue;
        }
        u.add_row_multiple(a, b, Int(f(rng)));
    }
    return u;
}

// Code of the isotypy::Error thrown by f, or "" if none.
inline std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const isotypy::Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace testutil
