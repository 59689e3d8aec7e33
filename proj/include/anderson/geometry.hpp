#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace anderson {

/// Position of a single particle in Z^d.
using Site = std::vector<int>;

/// A point x = (x_1, ..., x_n) of the n-particle lattice Z^{nd}, stored as
/// n consecutive blocks of d coordinates.
class ConfigPoint {
public:
    ConfigPoint(int n, int d, std::vector<int> coords);

    static ConfigPoint origin(int n, int d);
    static ConfigPoint from_particles(const std::vector<Site>& particles);

    int particles() const { return n_; }
    int dim() const { return d_; }
    std::size_t size() const { return coords_.size(); }

    std::span<const int> coords() const { return coords_; }
    std::span<const int> particle(int j) const;
    Site particle_site(int j) const;

    int operator[](std::size_t i) const { return coords_[i]; }

    /// Copy with coordinate i shifted by delta.
    ConfigPoint shifted(std::size_t i, int delta) const;

    friend bool operator==(const ConfigPoint&, const ConfigPoint&) = default;
    friend auto operator<=>(const ConfigPoint& a, const ConfigPoint& b) {
        return a.coords_ <=> b.coords_;
    }

private:
    int n_;
    int d_;
    std::vector<int> coords_;
};

/// max_i |x_i - y_i| over all n*d coordinates.
int sup_norm(const ConfigPoint& x, const ConfigPoint& y);
/// sum_i |x_i - y_i| over all n*d coordinates.
int l1_norm(const ConfigPoint& x, const ConfigPoint& y);

/// sup-norm distance between two single-particle sites.
int site_distance(std::span<const int> a, std::span<const int> b);

class Cube;

/// Product of axis-aligned boxes, one per particle, in Z^{nd}.
///
/// The usual construction takes a center u_i and a radius L_i per particle.
/// `from_bounds` additionally admits boxes with an even number of sites per
/// axis, which have no lattice center.
class Rectangle {
public:
    static Rectangle from_cubes(const std::vector<Site>& centers, const std::vector<int>& radii);
    static Rectangle from_bounds(int n, int d, std::vector<int> lower, std::vector<int> upper);

    Rectangle(const Cube& cube);  // NOLINT(google-explicit-constructor)

    int particles() const { return n_; }
    int dim() const { return d_; }
    std::size_t axes() const { return lower_.size(); }
    int lower(std::size_t axis) const { return lower_[axis]; }
    int upper(std::size_t axis) const { return upper_[axis]; }
    int extent(std::size_t axis) const { return upper_[axis] - lower_[axis] + 1; }

    /// Number of lattice sites.
    std::size_t size() const;
    /// Index offset between l1-neighbours along `axis` in the site order.
    /// stride(0) is the half-bandwidth of a nearest-neighbour operator.
    std::size_t stride(std::size_t axis) const;

    bool contains(const ConfigPoint& x) const;
    std::optional<std::size_t> index_of(const ConfigPoint& x) const;
    ConfigPoint site(std::size_t index) const;

    /// Union of the single-particle boxes, sorted and without duplicates.
    std::vector<Site> projection() const;

    friend bool operator==(const Rectangle&, const Rectangle&) = default;

private:
    Rectangle(int n, int d, std::vector<int> lower, std::vector<int> upper);

    int n_;
    int d_;
    std::vector<int> lower_;
    std::vector<int> upper_;
};

/// The n-particle cube { x : |x - center| <= radius } in the sup norm.
class Cube {
public:
    Cube(ConfigPoint center, int radius);

    const ConfigPoint& center() const { return center_; }
    int radius() const { return radius_; }
    int particles() const { return center_.particles(); }
    int dim() const { return center_.dim(); }
    /// (2L+1)^{nd}
    std::size_t cardinality() const;

private:
    ConfigPoint center_;
    int radius_;
};

/// All sites in lexicographic order of the full coordinate tuple.
std::vector<ConfigPoint> sites(const Rectangle& r);

/// Sites of r at l1 distance 1 from the complement.
std::vector<ConfigPoint> internal_boundary(const Rectangle& r);

/// Sites outside r at l1 distance 1 from r.
std::vector<ConfigPoint> external_boundary(const Rectangle& r);

/// Whether the single-particle cubes C_L(x_j), j in J, avoid every other
/// C_L(x_k), k not in J, and every C_L(y_k). J holds zero-based particle
/// indices and must be nonempty.
bool is_J_separable(const ConfigPoint& x, const ConfigPoint& y, int L, std::span<const int> J);

/// |x - y| > 7NL and one of the two cubes is J-separable from the other for
/// some nonempty J (the full index set included).
bool is_separable_pair(const ConfigPoint& x, const ConfigPoint& y, int L, int N);

}  // namespace anderson
