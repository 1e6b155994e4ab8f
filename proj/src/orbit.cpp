#include "pearl/orbit.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "orbit_tree.hpp"
#include "pearl/error.hpp"

namespace pearl {

Address Address::child(int letter) const {
    Address a = *this;
    a.letters.push_back(letter);
    return a;
}

Address Address::prefix(std::size_t length) const {
    Address a;
    a.letters.assign(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(std::min(length, size())));
    return a;
}

bool is_reduced(std::span<const int> word, int n) {
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word[i] < 1 || word[i] > n) return false;
        if (i > 0 && word[i] == word[i - 1]) return false;
    }
    return true;
}

std::string to_string(const Address& a) {
    if (a.empty()) return "()";
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(a[i]);
    }
    return s;
}

Address parse_address(const std::string& text) {
    Address a;
    if (text == "()" || text.empty()) return a;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find_first_of(".-,", pos);
        const auto token = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        std::size_t used = 0;
        int letter = 0;
        try {
            letter = std::stoi(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size()) {
            throw std::invalid_argument("malformed address '" + text + "'");
        }
        a.letters.push_back(letter);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return a;
}

Chirality pearl_chirality(std::size_t word_length) {
    return word_length >= 1 && (word_length - 1) % 2 == 1 ? Chirality::mirror : Chirality::plain;
}

std::uint64_t stage_count(int n, int k) {
    if (n < 3 || k < 1) throw std::invalid_argument("stage_count needs n >= 3 and k >= 1");
    unsigned __int128 count = static_cast<unsigned>(n);
    for (int i = 1; i < k; ++i) {
        count *= static_cast<unsigned>(n - 1);
        if (count > std::numeric_limits<std::uint64_t>::max()) {
            throw BudgetExceeded("stage " + std::to_string(k) + " pearl count overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(count);
}

namespace {

void require_address(const Necklace& nk, const Address& w) {
    if (!is_reduced(w.letters, nk.size())) {
        throw std::invalid_argument("address " + to_string(w) + " is not a reduced word in 1.." +
                                    std::to_string(nk.size()));
    }
}

void require_budget(std::uint64_t needed, std::uint64_t budget, const char* what) {
    if (needed > budget) {
        std::ostringstream os;
        os << what << " needs " << needed << " nodes, budget is " << budget;
        throw BudgetExceeded(os.str());
    }
}

// Total nodes of stages 1..k, saturating.
std::uint64_t tree_size(int n, int k) {
    std::uint64_t total = 0;
    for (int m = 1; m <= k; ++m) {
        std::uint64_t c = 0;
        try {
            c = stage_count(n, m);
        } catch (const BudgetExceeded&) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        if (total > std::numeric_limits<std::uint64_t>::max() - c) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total += c;
    }
    return total;
}

// Depth-first walk below `parent`. visit(address, sphere, parent_frame) returns
// whether to descend into the node.
template <class Visit>
void walk(const detail::Frame& parent, Address& address, Visit& visit) {
    const int n = static_cast<int>(parent.kids.size()) - 1;
    for (int j = 1; j <= n; ++j) {
        if (j == parent.last) continue;
        address.letters.push_back(j);
        if (visit(address, *parent.kids[static_cast<std::size_t>(j)], parent)) {
            const detail::Frame f = detail::expand(parent, j);
            walk(f, address, visit);
        }
        address.letters.pop_back();
    }
}

unsigned worker_count(unsigned requested, std::size_t tasks) {
    unsigned threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
}

}  // namespace

std::vector<PearlNode> children(const Necklace& nk, const Address& w) {
    require_address(nk, w);
    const detail::Frame f = detail::frame_of(nk, w);
    std::vector<PearlNode> out;
    for (int j = 1; j <= nk.size(); ++j) {
        if (j == f.last) continue;
        Address a = w.child(j);
        const auto parity = pearl_chirality(a.size());
        out.push_back({std::move(a), *f.kids[static_cast<std::size_t>(j)], parity});
    }
    return out;
}

std::vector<PearlNode> children(const Necklace& nk, const PearlNode& node) {
    return children(nk, node.address);
}

Sphere ball_of(const Necklace& nk, const Address& w) {
    if (w.empty()) throw std::invalid_argument("the root has no ball");
    require_address(nk, w);
    const detail::Frame parent = detail::frame_of(nk, w.prefix(w.size() - 1));
    return *parent.kids[static_cast<std::size_t>(w.last())];
}

Point apply_word(const Necklace& nk, std::span<const int> word, const Point& x) {
    Point y = x;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it < 1 || *it > nk.size()) throw std::invalid_argument("letter out of range");
        y = invert_point(nk.pearl(*it - 1), y);
    }
    return y;
}

StageNecklace stage(const Necklace& nk, int k, std::uint64_t budget) {
    if (k < 1) throw std::invalid_argument("stage index must be >= 1");
    require_budget(tree_size(nk.size(), k), budget, "stage enumeration");
    StageNecklace out;
    out.k = k;
    out.nodes.reserve(stage_count(nk.size(), k));
    const auto parity = pearl_chirality(static_cast<std::size_t>(k));
    auto visit = [&](const Address& a, const Sphere& s, const detail::Frame&) {
        if (static_cast<int>(a.size()) < k) return true;
        out.nodes.push_back({a, s, parity});
        return false;
    };
    Address a;
    walk(detail::root_frame(nk), a, visit);
    return out;
}

ParityCounts word_parity_counts(int n, int k) {
    if (n < 3) throw std::invalid_argument("parity counts need n >= 3");
    if (k < 0) throw std::invalid_argument("parity counts need k >= 0");
    ParityCounts pc;
    pc.plain = 1;  // empty word
    for (int m = 1; m <= k; ++m) {
        const std::uint64_t c = stage_count(n, m);
        std::uint64_t& bucket = (m % 2 == 0) ? pc.plain : pc.mirror;
        if (bucket > std::numeric_limits<std::uint64_t>::max() - c) {
            throw BudgetExceeded("parity counts overflow 64 bits");
        }
        bucket += c;
    }
    return pc;
}

ParityCounts parity_counts(const Necklace& nk, int k) {
    if (k < 1) throw std::invalid_argument("parity counts need k >= 1");
    return word_parity_counts(nk.size(), k);
}

LimitCloud enumerate_pruned(const Necklace& nk, const EnumerateOptions& options) {
    if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (options.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");

    struct Leaves {
        std::vector<Point> points;
        std::vector<Address> addresses;
        std::vector<double> radii;
        std::size_t capped = 0;
        std::exception_ptr error;
    };

    const int n = nk.size();
    const detail::Frame root = detail::root_frame(nk);
    std::vector<Leaves> per_letter(static_cast<std::size_t>(n));
    std::atomic<std::uint64_t> visited{0};
    std::atomic<int> next_letter{1};

    // Each stage-1 subtree is independent; results are stitched together in
    // letter order, so output does not depend on the schedule.
    auto work = [&] {
        for (int j = next_letter++; j <= n; j = next_letter++) {
            Leaves& out = per_letter[static_cast<std::size_t>(j - 1)];
            try {
                auto visit = [&](const Address& a, const Sphere& s, const detail::Frame&) {
                    if (++visited > options.budget) {
                        throw BudgetExceeded("pruned enumeration exceeded the budget of " +
                                             std::to_string(options.budget) + " nodes");
                    }
                    const bool small = s.radius() < options.epsilon;
                    const bool capped = static_cast<int>(a.size()) >= options.max_depth;
                    if (!small && !capped) return true;
                    out.points.push_back(s.center());
                    out.addresses.push_back(a);
                    out.radii.push_back(s.radius());
                    if (!small) ++out.capped;
                    return false;
                };
                Address a;
                a.letters.push_back(j);
                if (visit(a, *root.kids[static_cast<std::size_t>(j)], root)) {
                    const detail::Frame f = detail::expand(root, j);
                    walk(f, a, visit);
                }
            } catch (...) {
                out.error = std::current_exception();
            }
        }
    };

    const unsigned threads = worker_count(options.threads, static_cast<std::size_t>(n));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    for (const auto& l : per_letter) {
        if (l.error) std::rethrow_exception(l.error);
    }

    LimitCloud cloud;
    cloud.epsilon = options.epsilon;
    for (auto& l : per_letter) {
        cloud.points.insert(cloud.points.end(), l.points.begin(), l.points.end());
        cloud.addresses.insert(cloud.addresses.end(), std::make_move_iterator(l.addresses.begin()),
                               std::make_move_iterator(l.addresses.end()));
        cloud.radii.insert(cloud.radii.end(), l.radii.begin(), l.radii.end());
        cloud.depth_capped += l.capped;
    }
    return cloud;
}

namespace detail {

TangencyScan scan_tangencies(const std::vector<Sphere>& spheres, double tol) {
    TangencyScan scan;
    scan.degree.assign(spheres.size(), 0);
    std::vector<std::size_t> order(spheres.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto lo = [&](std::size_t i) { return spheres[i].center().x - spheres[i].radius(); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo(a) < lo(b); });
    for (std::size_t p = 0; p < order.size(); ++p) {
        const Sphere& a = spheres[order[p]];
        const double reach = a.center().x + a.radius();
        for (std::size_t q = p + 1; q < order.size(); ++q) {
            const Sphere& b = spheres[order[q]];
            const double sum = a.radius() + b.radius();
            if (lo(order[q]) > reach + tol * sum) break;
            const double d = distance(a.center(), b.center());
            if (std::abs(d - sum) <= tol * sum) {
                scan.tangent.emplace_back(std::min(order[p], order[q]), std::max(order[p], order[q]));
                ++scan.degree[order[p]];
                ++scan.degree[order[q]];
            } else if (d < sum) {
                ++scan.overlapping;
                scan.max_overlap = std::max(scan.max_overlap, sum - d);
            }
        }
    }
    std::sort(scan.tangent.begin(), scan.tangent.end());
    return scan;
}

}  // namespace detail

NestingReport nesting_check(const Necklace& nk, int k, double tol, std::uint64_t budget) {
    if (k < 1) throw std::invalid_argument("nesting check needs k >= 1");
    require_budget(tree_size(nk.size(), k + 1), budget, "nesting check");

    NestingReport report;
    report.k = k;
    std::vector<Sphere> stage_spheres;
    stage_spheres.reserve(stage_count(nk.size(), k));

    auto visit = [&](const Address& a, const Sphere& s, const detail::Frame& parent) {
        const int depth = static_cast<int>(a.size());
        if (depth == k) stage_spheres.push_back(s);
        if (depth == k + 1) {
            ++report.children_checked;
            const Sphere& up = *parent.sphere;
            const double excess = distance(s.center(), up.center()) + s.radius() - up.radius();
            if (excess > tol) ++report.containment_violations;
            report.max_containment_violation = std::max(report.max_containment_violation, excess);
            return false;
        }
        return true;
    };
    Address a;
    walk(detail::root_frame(nk), a, visit);
    report.max_containment_violation = std::max(report.max_containment_violation, 0.0);

    const detail::TangencyScan scan = detail::scan_tangencies(stage_spheres, tol);
    report.stage_pearls = stage_spheres.size();
    report.tangent_pairs = scan.tangent.size();
    report.overlapping_pairs = scan.overlapping;
    report.max_overlap = scan.max_overlap;
    for (int d : scan.degree) {
        if (d != 2) ++report.degree_violations;
    }
    return report;
}

double max_radius(const Necklace& nk, int k, std::uint64_t budget) {
    if (k < 1) throw std::invalid_argument("max_radius needs k >= 1");
    double best = 0.0;
    std::uint64_t visited = 0;

    // Child balls sit strictly inside their parent, so a subtree whose root is
    // no larger than the best stage-k radius found so far cannot improve it.
    auto descend = [&](auto&& self, const detail::Frame& frame, int depth) -> void {
        std::vector<int> order;
        for (int j = 1; j < static_cast<int>(frame.kids.size()); ++j) {
            if (j != frame.last) order.push_back(j);
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return frame.kids[static_cast<std::size_t>(a)]->radius() >
                   frame.kids[static_cast<std::size_t>(b)]->radius();
        });
        for (int j : order) {
            const double r = frame.kids[static_cast<std::size_t>(j)]->radius();
            if (r <= best) break;
            if (++visited > budget) {
                throw BudgetExceeded("max_radius exceeded the budget of " + std::to_string(budget) +
                                     " nodes");
            }
            if (depth + 1 == k) {
                best = r;
                continue;
            }
            self(self, detail::expand(frame, j), depth + 1);
        }
    };
    descend(descend, detail::root_frame(nk), 0);
    return best;
}

namespace {

// Uniform grid over a point set for exact nearest-neighbour distances.
class NearestGrid {
public:
    explicit NearestGrid(std::span<const Point> pts) : pts_(pts) {
        lo_ = hi_ = pts.front();
        for (const auto& p : pts) {
            lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
            hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y), std::max(hi_.z, p.z)};
        }
        const Point ext = hi_ - lo_;
        const double span = std::max({ext.x, ext.y, ext.z});
        const double per_axis = std::max(1.0, std::cbrt(static_cast<double>(pts.size())));
        cell_ = span > 0.0 ? span / per_axis : 1.0;
        for (int ax = 0; ax < 3; ++ax) {
            const double e = ax == 0 ? ext.x : ax == 1 ? ext.y : ext.z;
            dims_[ax] = static_cast<long>(e / cell_) + 1;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(cell_of(pts[i]))].push_back(i);
    }

    double nearest2(const Point& q) const {
        const auto c = cell_of_clamped(q);
        double best = std::numeric_limits<double>::infinity();
        const long max_shell = std::max({dims_[0], dims_[1], dims_[2]}) + 1;
        // Points beyond shell s are at least (s - 1) cells away along some axis
        // (one cell of slack for rounding), on top of the query's offset from
        // the bounding box.
        const double outside2 = box_distance2(q);
        for (long s = 0; s <= max_shell; ++s) {
            visit_shell(c, s, [&](std::size_t i) { best = std::min(best, norm2(pts_[i] - q)); });
            const double reach = static_cast<double>(std::max(0L, s - 1)) * cell_;
            if (best <= outside2 + reach * reach) break;
        }
        return best;
    }

private:
    using Cell = std::array<long, 3>;

    Cell cell_of(const Point& p) const {
        return {std::min(dims_[0] - 1, static_cast<long>((p.x - lo_.x) / cell_)),
                std::min(dims_[1] - 1, static_cast<long>((p.y - lo_.y) / cell_)),
                std::min(dims_[2] - 1, static_cast<long>((p.z - lo_.z) / cell_))};
    }
    Cell cell_of_clamped(const Point& p) const {
        const Point c{std::clamp(p.x, lo_.x, hi_.x), std::clamp(p.y, lo_.y, hi_.y),
                      std::clamp(p.z, lo_.z, hi_.z)};
        return cell_of(c);
    }
    double box_distance2(const Point& p) const {
        const double dx = std::max({lo_.x - p.x, 0.0, p.x - hi_.x});
        const double dy = std::max({lo_.y - p.y, 0.0, p.y - hi_.y});
        const double dz = std::max({lo_.z - p.z, 0.0, p.z - hi_.z});
        return dx * dx + dy * dy + dz * dz;
    }
    long key(const Cell& c) const { return (c[0] * dims_[1] + c[1]) * dims_[2] + c[2]; }

    template <class F>
    void visit_shell(const Cell& c, long s, F&& f) const {
        for (long i = c[0] - s; i <= c[0] + s; ++i) {
            if (i < 0 || i >= dims_[0]) continue;
            for (long j = c[1] - s; j <= c[1] + s; ++j) {
                if (j < 0 || j >= dims_[1]) continue;
                for (long k = c[2] - s; k <= c[2] + s; ++k) {
                    if (k < 0 || k >= dims_[2]) continue;
                    const bool on_shell = std::abs(i - c[0]) == s || std::abs(j - c[1]) == s ||
                                          std::abs(k - c[2]) == s;
                    if (!on_shell) continue;
                    const auto it = cells_.find(key({i, j, k}));
                    if (it == cells_.end()) continue;
                    for (std::size_t idx : it->second) f(idx);
                }
            }
        }
    }

    std::span<const Point> pts_;
    Point lo_, hi_;
    double cell_ = 1.0;
    std::array<long, 3> dims_{1, 1, 1};
    std::unordered_map<long, std::vector<std::size_t>> cells_;
};

}  // namespace

double directed_hausdorff(std::span<const Point> a, std::span<const Point> b) {
    if (a.empty() || b.empty()) throw EmptyCloud("Hausdorff distance of an empty point set");
    const NearestGrid grid(b);
    double worst = 0.0;
    for (const auto& p : a) worst = std::max(worst, grid.nearest2(p));
    return std::sqrt(worst);
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff(const LimitCloud& a, const LimitCloud& b) { return hausdorff(a.points, b.points); }

}  // namespace pearl
