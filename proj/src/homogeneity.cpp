#include "pearl/homogeneity.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>

#include "pearl/error.hpp"
#include "pearl/orbit.hpp"

namespace pearl {

Point group_move(const Necklace& nk, std::span<const int> word, const Point& x) {
    return apply_word(nk, word, x);
}

Mat3 group_move_jacobian(const Necklace& nk, std::span<const int> word, const Point& x) {
    Mat3 jac = Mat3::identity();
    Point y = x;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it < 1 || *it > nk.size()) throw std::invalid_argument("letter out of range");
        const Sphere& m = nk.pearl(*it - 1);
        jac = inversion_jacobian(m, y) * jac;
        y = invert_point(m, y);
    }
    return jac;
}

LambdaHomeo lambda_homeo(const Necklace& nk, const Point& p, const Point& q, int depth, double tol) {
    const Coordinate from = coordinate_of(nk, p, depth, tol);
    const Coordinate to = coordinate_of(nk, q, depth, tol);
    return {p, q, to - from, depth};
}

Point apply(const Necklace& nk, const LambdaHomeo& h, const Point& x, double tol) {
    return point_from_coordinate(nk, coordinate_of(nk, x, h.depth, tol) + h.delta, h.depth);
}

LambdaHomeo compose(const LambdaHomeo& a, const LambdaHomeo& b) {
    if (a.depth != b.depth) throw std::invalid_argument("composed maps must share a resolution");
    return {a.source, b.target, a.delta + b.delta, a.depth};
}

Coordinate sample_coordinate(std::size_t i) {
    constexpr int kBits = 20;
    std::uint64_t v = 0;
    auto bits = static_cast<std::uint64_t>(i);
    for (int b = 0; b < kBits; ++b) {
        v = (v << 1) | (bits & 1u);
        bits >>= 1;
    }
    return {2 * v + 1, std::uint64_t{1} << (kBits + 1)};
}

namespace {

std::uint64_t cell_of(const Coordinate& theta, std::uint64_t count) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(theta.num()) * count / theta.den());
}

std::optional<std::uint64_t> image_cell(const Necklace& nk, const Point& y, int depth,
                                        std::uint64_t count, double tol) {
    try {
        return cell_of(coordinate_of(nk, y, depth, tol), count);
    } catch (const NotInLimit&) {
        return std::nullopt;
    }
}

}  // namespace

HomeoReport verify_map(const Necklace& nk, int depth, const LimitMap& map, const LimitMap& inverse,
                       std::size_t samples, double tol) {
    constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 16;
    HomeoReport report;
    report.depth = depth;
    report.samples = samples;
    const std::uint64_t count = stage_count(nk.size(), depth);
    report.intervals = count;

    struct Sample {
        Coordinate theta;
        std::uint64_t cell;
        std::optional<std::uint64_t> image;
    };
    std::vector<Sample> pts;
    pts.reserve(samples);
    std::map<std::uint64_t, std::uint64_t> forward;
    std::map<std::uint64_t, std::uint64_t> backward;
    for (std::size_t i = 0; i < samples; ++i) {
        const Coordinate theta = sample_coordinate(i);
        const Point x = point_from_coordinate(nk, theta, depth);
        const std::uint64_t cell = cell_of(coordinate_of(nk, x, depth, tol), count);
        const auto image = image_cell(nk, map(x), depth, count, tol);
        pts.push_back({theta, cell, image});
        if (!image) {
            ++report.in_limit_failures;
            continue;
        }
        const auto [f, fresh_f] = forward.emplace(cell, *image);
        const auto [b, fresh_b] = backward.emplace(*image, cell);
        if ((!fresh_f && f->second != *image) || (!fresh_b && b->second != cell)) {
            ++report.injectivity_failures;
        }
    }

    // Surjectivity: pull back the midpoint of every cell and push it forward.
    // Beyond kMaxCells the cells are visited with a uniform stride.
    const std::uint64_t stride = count > kMaxCells ? (count + kMaxCells - 1) / kMaxCells : 1;
    const std::uint64_t checked = (count + stride - 1) / stride;
    report.intervals_checked = checked;
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
    std::vector<std::uint64_t> misses(workers, 0);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t i = t; i < checked; i += workers) {
                    const std::uint64_t cell = i * stride;
                    std::optional<std::uint64_t> hit;
                    try {
                        const Point target =
                            point_from_coordinate(nk, CoordinateInterval{cell, count}.midpoint(), depth);
                        hit = image_cell(nk, map(inverse(target)), depth, count, tol);
                    } catch (const Error&) {
                        hit.reset();
                    }
                    if (!hit || *hit != cell) ++misses[t];
                }
            });
        }
    }
    for (std::uint64_t m : misses) report.surjectivity_failures += m;

    // Continuity at resolution: consecutive samples (cyclically, by coordinate)
    // must keep their cell offset under the map.
    std::sort(pts.begin(), pts.end(), [](const Sample& a, const Sample& b) { return a.theta < b.theta; });
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Sample& a = pts[i];
        const Sample& b = pts[(i + 1) % pts.size()];
        if (!a.image || !b.image) continue;
        const std::uint64_t src = (b.cell + count - a.cell) % count;
        const std::uint64_t dst = (*b.image + count - *a.image) % count;
        if (src != dst) ++report.adjacency_failures;
    }
    return report;
}

HomeoReport verify_homeo(const Necklace& nk, const LambdaHomeo& h, std::size_t samples, double tol) {
    const LambdaHomeo back{h.target, h.source, Coordinate{} - h.delta, h.depth};
    return verify_map(
        nk, h.depth, [&](const Point& x) { return apply(nk, h, x, tol); },
        [&](const Point& x) { return apply(nk, back, x, tol); }, samples, tol);
}

namespace {

struct Frame3 {
    Point e1, e2, e3;
};

std::optional<Frame3> frame_from(const Point& o, const Point& a, const Point& b, double sign) {
    const Point u = a - o;
    if (norm(u) == 0.0) return std::nullopt;
    const Point e1 = u / norm(u);
    Point v = (b - o) - e1 * dot(b - o, e1);
    const double nv = norm(v);
    if (nv <= 1e-9 * norm(b - o)) return std::nullopt;
    const Point e2 = v / nv;
    return Frame3{e1, e2, cross(e1, e2) * sign};
}

Mat3 outer_sum(const Frame3& to, const Frame3& from) {
    // sum_k to.e_k from.e_k^T
    Mat3 m;
    const Point t[3] = {to.e1, to.e2, to.e3};
    const Point f[3] = {from.e1, from.e2, from.e3};
    for (int k = 0; k < 3; ++k) {
        const double tk[3] = {t[k].x, t[k].y, t[k].z};
        const double fk[3] = {f[k].x, f[k].y, f[k].z};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) += tk[r] * fk[c];
    }
    return m;
}

}  // namespace

std::vector<RigidMap> stage_symmetries(const Necklace& nk, double tol) {
    const int n = nk.size();
    const double slack = tol * std::max(1.0, nk.extent());

    // Two further centres spanning a plane with pearl 0.
    int ia = 1;
    int ib = -1;
    for (int i = 2; i < n && ib < 0; ++i) {
        if (frame_from(nk.pearl(0).center(), nk.pearl(ia).center(), nk.pearl(i).center(), 1.0)) ib = i;
    }
    if (ib < 0) return {RigidMap{Mat3::identity(), Point{}, [&] {
                           std::vector<int> id(static_cast<std::size_t>(n));
                           for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
                           return id;
                       }()}};

    std::vector<RigidMap> out;
    for (int reflect = 0; reflect < 2; ++reflect) {
        for (int s = 0; s < n; ++s) {
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                perm[static_cast<std::size_t>(i)] = reflect ? ((s - i) % n + n) % n : (i + s) % n;
            }
            auto target = [&](int i) -> const Sphere& { return nk.pearl(perm[static_cast<std::size_t>(i)]); };
            const auto src = frame_from(nk.pearl(0).center(), nk.pearl(ia).center(), nk.pearl(ib).center(), 1.0);
            // Prefer orientation-preserving maps for cyclic shifts and
            // reversing ones for flips; fall back to the other handedness.
            const double preferred = reflect ? -1.0 : 1.0;
            for (double sign : {preferred, -preferred}) {
                const auto dst = frame_from(target(0).center(), target(ia).center(), target(ib).center(), sign);
                if (!src || !dst) continue;
                RigidMap g;
                g.linear = outer_sum(*dst, *src);
                g.shift = target(0).center() - g.linear * nk.pearl(0).center();
                g.permutation = perm;
                bool fits = true;
                for (int i = 0; i < n && fits; ++i) {
                    fits = distance(g(nk.pearl(i).center()), target(i).center()) <= slack &&
                           std::abs(nk.pearl(i).radius() - target(i).radius()) <= slack;
                }
                if (fits) {
                    out.push_back(std::move(g));
                    break;
                }
            }
        }
    }
    return out;
}

Address permute_address(const Address& w, std::span<const int> permutation) {
    Address out;
    out.letters.reserve(w.size());
    for (int letter : w.letters) {
        out.letters.push_back(permutation[static_cast<std::size_t>(letter - 1)] + 1);
    }
    return out;
}

}  // namespace pearl
