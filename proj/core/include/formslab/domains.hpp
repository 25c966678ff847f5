#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace formslab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// a . x <= b
struct HalfSpace {
    std::vector<double> a;
    double b = 0.0;
};

/// Compact body K: origin-centred ball, axis box, or bounded polytope.
/// All variants are closed sets with nonempty interior; violations are
/// rejected at construction.
class Domain {
public:
    enum class Kind { Ball, Box, Polytope };

    static Domain ball(std::size_t n, double radius);
    static Domain box(std::vector<Interval> intervals);
    static Domain cube(std::size_t n, double lo, double hi);
    // Throws InputError when the half-spaces do not cut out a bounded body
    // with nonempty interior.
    static Domain polytope(std::size_t n, std::vector<HalfSpace> faces);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return n_; }
    double radius() const { return radius_; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    const std::vector<HalfSpace>& faces() const { return faces_; }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }

    bool contains(std::span<const double> x) const;

    // T . K
    Domain dilate(double factor) const;

    std::vector<Interval> bounding_box() const;

    // Range of v . x over the body.
    Interval support(std::span<const double> v) const;

    // Centre and radius of a ball enclosing the body.
    std::vector<double> enclosing_center() const;
    double enclosing_radius() const;

    // True when the origin is an interior point and the body is star-shaped
    // about it (every variant here is convex).
    bool star_shaped_about_origin() const;

private:
    Domain() = default;

    Kind kind_ = Kind::Ball;
    std::size_t n_ = 0;
    double radius_ = 0.0;
    std::vector<Interval> intervals_;
    std::vector<HalfSpace> faces_;
    std::vector<std::vector<double>> vertices_;
};

/// Orthogonal matrix with det = 1, row-major.
class Rotation {
public:
    std::size_t dim() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
    void apply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> apply(std::span<const double> x) const;

    static Rotation identity(std::size_t n);

private:
    friend Rotation rotation_to(std::span<const double> v);
    Rotation(std::size_t n, std::vector<double> m) : n_(n), m_(std::move(m)) {}
    std::size_t n_ = 0;
    std::vector<double> m_;
};

// Rotation sending e_n to the unit vector v and fixing the orthogonal
// complement of span{e_n, v}; the identity when v = e_n.
Rotation rotation_to(std::span<const double> v);

// {"ball": r} | {"box": [[lo,hi],...]} | {"polytope": [{"a":[...],"b":...},...]}.
// A ball descriptor needs the dimension, given by `n` (or a "n" key).
Domain domain_from_json(const std::string& json, std::size_t n = 0);
std::string domain_to_json(const Domain& domain);

}  // namespace formslab
