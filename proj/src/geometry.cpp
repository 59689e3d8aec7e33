#include "anderson/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace anderson {

ConfigPoint::ConfigPoint(int n, int d, std::vector<int> coords)
    : n_(n), d_(d), coords_(std::move(coords)) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("ConfigPoint: n and d must be >= 1");
    if (coords_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d))
        throw std::invalid_argument("ConfigPoint: expected " + std::to_string(n * d) +
                                    " coordinates, got " + std::to_string(coords_.size()));
}

ConfigPoint ConfigPoint::origin(int n, int d) {
    return ConfigPoint(n, d, std::vector<int>(static_cast<std::size_t>(n * d), 0));
}

ConfigPoint ConfigPoint::from_particles(const std::vector<Site>& particles) {
    if (particles.empty())
        throw std::invalid_argument("ConfigPoint: need at least one particle");
    const auto d = particles.front().size();
    std::vector<int> coords;
    for (const auto& p : particles) {
        if (p.size() != d)
            throw std::invalid_argument("ConfigPoint: particles of different dimension");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return ConfigPoint(static_cast<int>(particles.size()), static_cast<int>(d), std::move(coords));
}

std::span<const int> ConfigPoint::particle(int j) const {
    return std::span<const int>(coords_).subspan(static_cast<std::size_t>(j * d_),
                                                 static_cast<std::size_t>(d_));
}

Site ConfigPoint::particle_site(int j) const {
    auto s = particle(j);
    return Site(s.begin(), s.end());
}

ConfigPoint ConfigPoint::shifted(std::size_t i, int delta) const {
    ConfigPoint out = *this;
    out.coords_.at(i) += delta;
    return out;
}

namespace {

void check_same_shape(const ConfigPoint& x, const ConfigPoint& y) {
    if (x.particles() != y.particles() || x.dim() != y.dim())
        throw std::invalid_argument("configuration points of different shape (n, d)");
}

}  // namespace

int sup_norm(const ConfigPoint& x, const ConfigPoint& y) {
    check_same_shape(x, y);
    int best = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        best = std::max(best, std::abs(x[i] - y[i]));
    return best;
}

int l1_norm(const ConfigPoint& x, const ConfigPoint& y) {
    check_same_shape(x, y);
    int total = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        total += std::abs(x[i] - y[i]);
    return total;
}

int site_distance(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("sites of different dimension");
    int best = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

// Rectangle

Rectangle::Rectangle(int n, int d, std::vector<int> lower, std::vector<int> upper)
    : n_(n), d_(d), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (n < 1 || d < 1)
        throw std::invalid_argument("Rectangle: n and d must be >= 1");
    const auto axes = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    if (lower_.size() != axes || upper_.size() != axes)
        throw std::invalid_argument("Rectangle: bounds must have n*d entries");
    for (std::size_t a = 0; a < axes; ++a)
        if (upper_[a] < lower_[a])
            throw std::invalid_argument("Rectangle: empty extent on axis " + std::to_string(a));
}

Rectangle Rectangle::from_cubes(const std::vector<Site>& centers, const std::vector<int>& radii) {
    if (centers.empty() || centers.size() != radii.size())
        throw std::invalid_argument("Rectangle: need one radius per particle center");
    const auto d = centers.front().size();
    std::vector<int> lower, upper;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (centers[j].size() != d)
            throw std::invalid_argument("Rectangle: particle centers of different dimension");
        if (radii[j] < 0)
            throw std::invalid_argument("Rectangle: negative radius");
        for (int c : centers[j]) {
            lower.push_back(c - radii[j]);
            upper.push_back(c + radii[j]);
        }
    }
    return Rectangle(static_cast<int>(centers.size()), static_cast<int>(d), std::move(lower),
                     std::move(upper));
}

Rectangle Rectangle::from_bounds(int n, int d, std::vector<int> lower, std::vector<int> upper) {
    return Rectangle(n, d, std::move(lower), std::move(upper));
}

Rectangle::Rectangle(const Cube& cube) : n_(cube.particles()), d_(cube.dim()) {
    for (int c : cube.center().coords()) {
        lower_.push_back(c - cube.radius());
        upper_.push_back(c + cube.radius());
    }
}

std::size_t Rectangle::size() const {
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes(); ++a)
        total *= static_cast<std::size_t>(extent(a));
    return total;
}

std::size_t Rectangle::stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < axes(); ++a)
        s *= static_cast<std::size_t>(extent(a));
    return s;
}

bool Rectangle::contains(const ConfigPoint& x) const {
    if (x.particles() != n_ || x.dim() != d_)
        return false;
    for (std::size_t a = 0; a < axes(); ++a)
        if (x[a] < lower_[a] || x[a] > upper_[a])
            return false;
    return true;
}

std::optional<std::size_t> Rectangle::index_of(const ConfigPoint& x) const {
    if (!contains(x))
        return std::nullopt;
    std::size_t index = 0;
    for (std::size_t a = 0; a < axes(); ++a)
        index = index * static_cast<std::size_t>(extent(a)) +
                static_cast<std::size_t>(x[a] - lower_[a]);
    return index;
}

ConfigPoint Rectangle::site(std::size_t index) const {
    if (index >= size())
        throw std::out_of_range("Rectangle::site: index out of range");
    std::vector<int> coords(axes());
    for (std::size_t a = axes(); a-- > 0;) {
        const auto e = static_cast<std::size_t>(extent(a));
        coords[a] = lower_[a] + static_cast<int>(index % e);
        index /= e;
    }
    return ConfigPoint(n_, d_, std::move(coords));
}

std::vector<Site> Rectangle::projection() const {
    std::vector<Site> out;
    const auto d = static_cast<std::size_t>(d_);
    for (int j = 0; j < n_; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * d;
        Site s(d);
        for (std::size_t k = 0; k < d; ++k)
            s[k] = lower_[base + k];
        // odometer over the d-dimensional box of particle j
        while (true) {
            out.push_back(s);
            std::size_t k = d;
            while (k-- > 0) {
                if (s[k] < upper_[base + k]) {
                    ++s[k];
                    break;
                }
                s[k] = lower_[base + k];
            }
            if (k == static_cast<std::size_t>(-1))
                break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Cube

Cube::Cube(ConfigPoint center, int radius) : center_(std::move(center)), radius_(radius) {
    if (radius < 0)
        throw std::invalid_argument("Cube: negative radius");
}

std::size_t Cube::cardinality() const {
    std::size_t total = 1;
    for (std::size_t a = 0; a < center_.size(); ++a)
        total *= static_cast<std::size_t>(2 * radius_ + 1);
    return total;
}

// Site sets

std::vector<ConfigPoint> sites(const Rectangle& r) {
    std::vector<ConfigPoint> out;
    out.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        out.push_back(r.site(i));
    return out;
}

std::vector<ConfigPoint> internal_boundary(const Rectangle& r) {
    // A site has an l1-neighbour outside exactly when one of its coordinates
    // sits on the lower or upper face of the box.
    std::vector<ConfigPoint> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        auto x = r.site(i);
        for (std::size_t a = 0; a < r.axes(); ++a) {
            if (x[a] == r.lower(a) || x[a] == r.upper(a)) {
                out.push_back(std::move(x));
                break;
            }
        }
    }
    return out;
}

std::vector<ConfigPoint> external_boundary(const Rectangle& r) {
    // Outside points at l1 distance 1 leave the box along exactly one axis,
    // by exactly one step.
    std::vector<ConfigPoint> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto x = r.site(i);
        for (std::size_t a = 0; a < r.axes(); ++a) {
            if (x[a] == r.lower(a))
                out.push_back(x.shifted(a, -1));
            if (x[a] == r.upper(a))
                out.push_back(x.shifted(a, +1));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_J_separable(const ConfigPoint& x, const ConfigPoint& y, int L, std::span<const int> J) {
    check_same_shape(x, y);
    if (J.empty())
        throw std::invalid_argument("is_J_separable: J must be nonempty");
    const int n = x.particles();
    std::vector<bool> in_J(static_cast<std::size_t>(n), false);
    for (int j : J) {
        if (j < 0 || j >= n)
            throw std::invalid_argument("is_J_separable: particle index out of range");
        in_J[static_cast<std::size_t>(j)] = true;
    }
    // Two single-particle cubes of radius L meet iff their centers are
    // within 2L in the sup norm.
    const auto overlaps = [L](std::span<const int> a, std::span<const int> b) {
        return site_distance(a, b) <= 2 * L;
    };
    for (int j = 0; j < n; ++j) {
        if (!in_J[static_cast<std::size_t>(j)])
            continue;
        for (int k = 0; k < n; ++k) {
            if (!in_J[static_cast<std::size_t>(k)] && overlaps(x.particle(j), x.particle(k)))
                return false;
            if (overlaps(x.particle(j), y.particle(k)))
                return false;
        }
    }
    return true;
}

bool is_separable_pair(const ConfigPoint& x, const ConfigPoint& y, int L, int N) {
    check_same_shape(x, y);
    if (sup_norm(x, y) <= 7 * N * L)
        return false;
    const int n = x.particles();
    std::vector<int> J;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        J.clear();
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j))
                J.push_back(j);
        if (is_J_separable(x, y, L, J) || is_J_separable(y, x, L, J))
            return true;
    }
    return false;
}

}  // namespace anderson
