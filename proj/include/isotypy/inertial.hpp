#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace isotypy {

// [[a, b], [c, d]] over F_p, acting on column vectors.
struct Glp2Element {
    std::array<std::int32_t, 4> m{1, 0, 0, 1};

    std::int32_t a() const { return m[0]; }
    std::int32_t b() const { return m[1]; }
    std::int32_t c() const { return m[2]; }
    std::int32_t d() const { return m[3]; }
    auto operator<=>(const Glp2Element&) const = default;
};

using Vec2 = std::array<std::int32_t, 2>;

Glp2Element glp2(long a, long b, long c, long d, long p);  // reduces mod p, checks det
Glp2Element glp2_mul(const Glp2Element& x, const Glp2Element& y, long p);
Glp2Element glp2_inv(const Glp2Element& x, long p);
Vec2 glp2_act(const Glp2Element& g, const Vec2& v, long p);
long glp2_det(const Glp2Element& g, long p);

// Sorted element list of the subgroup generated by gens.
std::vector<Glp2Element> closure(const std::vector<Glp2Element>& gens, long p);

struct OrbitData {
    Vec2 rep{};                 // first vector of the orbit in row-major order
    long size = 0;
    long e = 0;                 // stabilizer order
    std::vector<Vec2> members;  // sorted
};

struct InertialCandidate {
    std::string name;
    long p = 0;
    std::vector<Glp2Element> generators;
    long order = 0;
    std::vector<OrbitData> orbit_data;

    std::vector<long> e_values() const;
};

// Orbits of the natural action on F_p^2 \ {0}; throws Error("not-p-prime") if p | |H|.
InertialCandidate orbit_analysis(const std::vector<Glp2Element>& subgroup, long p);

// Candidates with sum(e_u) == k - l and |R| <= k - l - n_p.
std::vector<InertialCandidate> sieve_candidates(const std::vector<InertialCandidate>& catalogue, long k, long l,
                                                long n_p);

// Index of v in row-major numbering of F_p^2: x * p + y.
inline long vec_index(const Vec2& v, long p) { return v[0] * p + v[1]; }
inline Vec2 index_vec(long i, long p) { return {static_cast<std::int32_t>(i / p), static_cast<std::int32_t>(i % p)}; }

struct CatalogueEntry {
    std::string name;
    long p = 0;
    std::vector<Glp2Element> gens;
};

// Builds the InertialCandidate (closure + orbit analysis) for each entry.
std::vector<InertialCandidate> build_catalogue(const std::vector<CatalogueEntry>& entries);

}  // namespace isotypy
