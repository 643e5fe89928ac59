#include "fhgeo/sampling.hpp"

#include <cmath>

namespace fhgeo {

std::uint64_t splitmix64(std::uint64_t state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ (index * 0xda942042e4dd58b5ull + 1));
    return std::mt19937_64(mixed);
}

Vec unit_sphere_sample(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) v[i] = normal(rng);
        norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
}

Vec box_sample(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Vec x(lo.size());
    for (int i = 0; i < lo.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * uni(rng);
    return x;
}

Vec sample_interior(const ConvexBody& body, std::mt19937_64& rng, double margin_frac) {
    const int n = body.dimension();
    const double margin = margin_frac * body.diameter();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const Vec x = box_sample(rng, body.box_min(), body.box_max());
        if (!is_interior(body, x)) continue;
        bool clear = true;
        for (int k = 0; k < n && clear; ++k) {
            Vec e = Vec::Zero(n);
            e[k] = 1.0;
            if (solve_ray(body, x, e) < margin || solve_ray(body, x, -e) < margin) clear = false;
        }
        if (clear) return x;
    }
    raise(ErrorCode::NoConverge, "interior sampling failed (margin too large?)");
}

} // namespace fhgeo
