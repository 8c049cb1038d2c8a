#include "isotypy/inertial.hpp"

#include "isotypy/errors.hpp"

#include <algorithm>
#include <set>

namespace isotypy {

namespace {
std::int32_t md(long x, long p) { return static_cast<std::int32_t>(((x % p) + p) % p); }
}  // namespace

Glp2Element glp2(long a, long b, long c, long d, long p) {
    Glp2Element g{{md(a, p), md(b, p), md(c, p), md(d, p)}};
    if (glp2_det(g, p) == 0) throw Error("singular-element", "matrix is not invertible mod p");
    return g;
}

Glp2Element glp2_mul(const Glp2Element& x, const Glp2Element& y, long p) {
    return {{md(static_cast<long>(x.a()) * y.a() + static_cast<long>(x.b()) * y.c(), p),
             md(static_cast<long>(x.a()) * y.b() + static_cast<long>(x.b()) * y.d(), p),
             md(static_cast<long>(x.c()) * y.a() + static_cast<long>(x.d()) * y.c(), p),
             md(static_cast<long>(x.c()) * y.b() + static_cast<long>(x.d()) * y.d(), p)}};
}

long glp2_det(const Glp2Element& g, long p) {
    return md(static_cast<long>(g.a()) * g.d() - static_cast<long>(g.b()) * g.c(), p);
}

Glp2Element glp2_inv(const Glp2Element& x, long p) {
    long det = glp2_det(x, p), di = 1;
    for (long e = p - 2, b = det; e > 0; e >>= 1, b = b * b % p)
        if (e & 1) di = di * b % p;
    return {{md(x.d() * di, p), md(-x.b() * di, p), md(-x.c() * di, p), md(x.a() * di, p)}};
}

Vec2 glp2_act(const Glp2Element& g, const Vec2& v, long p) {
    return {md(static_cast<long>(g.a()) * v[0] + static_cast<long>(g.b()) * v[1], p),
            md(static_cast<long>(g.c()) * v[0] + static_cast<long>(g.d()) * v[1], p)};
}

std::vector<Glp2Element> closure(const std::vector<Glp2Element>& gens, long p) {
    std::set<Glp2Element> seen{Glp2Element{}};
    std::vector<Glp2Element> frontier{Glp2Element{}};
    while (!frontier.empty()) {
        std::vector<Glp2Element> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                Glp2Element y = glp2_mul(x, g, p);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

std::vector<long> InertialCandidate::e_values() const {
    std::vector<long> out;
    for (const auto& o : orbit_data) out.push_back(o.e);
    return out;
}

InertialCandidate orbit_analysis(const std::vector<Glp2Element>& subgroup, long p) {
    const long order = static_cast<long>(subgroup.size());
    if (order % p == 0) throw Error("not-p-prime", "subgroup order divisible by p");
    InertialCandidate out;
    out.p = p;
    out.order = order;
    std::vector<bool> seen(p * p, false);
    for (long i = 1; i < p * p; ++i) {
        if (seen[i]) continue;
        Vec2 v = index_vec(i, p);
        std::set<Vec2> orbit;
        long stab = 0;
        for (const auto& g : subgroup) {
            Vec2 w = glp2_act(g, v, p);
            orbit.insert(w);
            if (w == v) ++stab;
        }
        for (const auto& w : orbit) seen[vec_index(w, p)] = true;
        OrbitData od;
        od.rep = v;
        od.size = static_cast<long>(orbit.size());
        od.e = stab;
        od.members.assign(orbit.begin(), orbit.end());
        out.orbit_data.push_back(std::move(od));
    }
    return out;
}

std::vector<InertialCandidate> sieve_candidates(const std::vector<InertialCandidate>& catalogue, long k, long l,
                                                long n_p) {
    std::vector<InertialCandidate> out;
    for (const auto& c : catalogue) {
        long sum_e = 0, sum_sizes = 0;
        for (const auto& o : c.orbit_data) {
            sum_e += o.e;
            sum_sizes += o.size;
        }
        const long r = static_cast<long>(c.orbit_data.size());
        if (sum_e != k - l) continue;
        if (sum_sizes != c.p * c.p - 1) continue;
        if (r > k - l - n_p) continue;
        out.push_back(c);
    }
    return out;
}

std::vector<InertialCandidate> build_catalogue(const std::vector<CatalogueEntry>& entries) {
    std::vector<InertialCandidate> out;
    for (const auto& e : entries) {
        InertialCandidate c = orbit_analysis(closure(e.gens, e.p), e.p);
        c.name = e.name;
        c.generators = e.gens;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace isotypy
