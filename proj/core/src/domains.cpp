#include "formslab/domains.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>

#include "formslab/errors.hpp"

namespace formslab {

namespace {

void require_dim(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw InputError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                         ", got " + std::to_string(got) + ")");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Visit every k-subset of {0, ..., m-1} in lexicographic order.
void for_each_subset(std::size_t m, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            visit(idx);
            return;
        }
        for (std::size_t i = start; i + (k - pos) <= m; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

double face_tolerance(const HalfSpace& h) {
    double scale = std::abs(h.b);
    for (double a : h.a) scale = std::max(scale, std::abs(a));
    return 1e-12 * std::max(1.0, scale);
}

}  // namespace

Domain Domain::ball(std::size_t n, double radius) {
    if (n == 0) throw InputError("ball: dimension must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball: radius must be positive and finite");
    Domain d;
    d.kind_ = Kind::Ball;
    d.n_ = n;
    d.radius_ = radius;
    return d;
}

Domain Domain::box(std::vector<Interval> intervals) {
    if (intervals.empty()) throw InputError("box: dimension must be positive");
    for (const auto& iv : intervals)
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw InputError("box: every interval must be finite with lo < hi");
    Domain d;
    d.kind_ = Kind::Box;
    d.n_ = intervals.size();
    d.intervals_ = std::move(intervals);
    return d;
}

Domain Domain::cube(std::size_t n, double lo, double hi) {
    return box(std::vector<Interval>(n, Interval{lo, hi}));
}

Domain Domain::polytope(std::size_t n, std::vector<HalfSpace> faces) {
    if (n == 0) throw InputError("polytope: dimension must be positive");
    for (const auto& h : faces) {
        require_dim(n, h.a.size(), "polytope face");
        if (!std::isfinite(h.b)) throw InputError("polytope: non-finite offset");
    }
    const std::size_t m = faces.size();
    if (m < n + 1) throw InputError("polytope: a bounded body needs at least n + 1 faces");

    Eigen::MatrixXd A(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = faces[i].a[j];

    Eigen::FullPivLU<Eigen::MatrixXd> full(A);
    if (static_cast<std::size_t>(full.rank()) < n) throw InputError("polytope: unbounded (face normals do not span)");

    // Recession cone {d : A d <= 0} is trivial iff no extreme ray exists; an
    // extreme ray is the kernel of n - 1 independent face normals.
    auto is_recession_direction = [&](const Eigen::VectorXd& dir) {
        const Eigen::VectorXd ad = A * dir;
        return (ad.array() <= 1e-12 * dir.norm()).all();
    };
    bool unbounded = false;
    if (n == 1) {
        Eigen::VectorXd e = Eigen::VectorXd::Ones(1);
        unbounded = is_recession_direction(e) || is_recession_direction(-e);
    } else {
        for_each_subset(m, n - 1, [&](const std::vector<std::size_t>& rows) {
            if (unbounded) return;
            Eigen::MatrixXd sub(rows.size(), n);
            for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = A.row(static_cast<Eigen::Index>(rows[r]));
            Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
            if (static_cast<std::size_t>(lu.rank()) != n - 1) return;
            Eigen::VectorXd dir = lu.kernel().col(0).normalized();
            if (is_recession_direction(dir) || is_recession_direction(-dir)) unbounded = true;
        });
    }
    if (unbounded) throw InputError("polytope: unbounded");

    std::vector<std::vector<double>> vertices;
    for_each_subset(m, n, [&](const std::vector<std::size_t>& rows) {
        Eigen::MatrixXd sub(n, n);
        Eigen::VectorXd rhs(n);
        for (std::size_t r = 0; r < n; ++r) {
            sub.row(static_cast<Eigen::Index>(r)) = A.row(static_cast<Eigen::Index>(rows[r]));
            rhs(static_cast<Eigen::Index>(r)) = faces[rows[r]].b;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (static_cast<std::size_t>(lu.rank()) != n) return;
        const Eigen::VectorXd x = lu.solve(rhs);
        std::vector<double> v(x.data(), x.data() + n);
        for (const auto& h : faces) {
            const double scale = 1e-9 * std::max({1.0, std::abs(h.b), x.lpNorm<Eigen::Infinity>()});
            if (dot(h.a, v) > h.b + scale) return;
        }
        for (const auto& w : vertices) {
            double dist = 0.0;
            for (std::size_t j = 0; j < n; ++j) dist = std::max(dist, std::abs(w[j] - v[j]));
            if (dist <= 1e-9 * std::max(1.0, x.lpNorm<Eigen::Infinity>())) return;
        }
        vertices.push_back(std::move(v));
    });
    if (vertices.size() < n + 1) throw InputError("polytope: empty or without interior");

    Eigen::MatrixXd diffs(n, vertices.size() - 1);
    for (std::size_t k = 1; k < vertices.size(); ++k)
        for (std::size_t j = 0; j < n; ++j) diffs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k - 1)) = vertices[k][j] - vertices[0][j];
    Eigen::FullPivLU<Eigen::MatrixXd> hull(diffs);
    hull.setThreshold(1e-9);
    if (static_cast<std::size_t>(hull.rank()) < n) throw InputError("polytope: body has empty interior");

    Domain d;
    d.kind_ = Kind::Polytope;
    d.n_ = n;
    d.faces_ = std::move(faces);
    d.vertices_ = std::move(vertices);
    return d;
}

bool Domain::contains(std::span<const double> x) const {
    require_dim(n_, x.size(), "contains");
    switch (kind_) {
        case Kind::Ball:
            return dot(x, x) <= radius_ * radius_;
        case Kind::Box:
            for (std::size_t i = 0; i < n_; ++i)
                if (x[i] < intervals_[i].lo || x[i] > intervals_[i].hi) return false;
            return true;
        case Kind::Polytope:
            for (const auto& h : faces_)
                if (dot(h.a, x) > h.b + face_tolerance(h)) return false;
            return true;
    }
    return false;
}

Domain Domain::dilate(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("dilate: factor must be positive and finite");
    Domain d = *this;
    d.radius_ *= factor;
    for (auto& iv : d.intervals_) iv = {iv.lo * factor, iv.hi * factor};
    for (auto& h : d.faces_) h.b *= factor;
    for (auto& v : d.vertices_)
        for (auto& c : v) c *= factor;
    return d;
}

std::vector<Interval> Domain::bounding_box() const {
    switch (kind_) {
        case Kind::Ball:
            return std::vector<Interval>(n_, Interval{-radius_, radius_});
        case Kind::Box:
            return intervals_;
        case Kind::Polytope: {
            std::vector<Interval> box(n_, Interval{vertices_.front().front(), vertices_.front().front()});
            for (std::size_t j = 0; j < n_; ++j) box[j] = {vertices_.front()[j], vertices_.front()[j]};
            for (const auto& v : vertices_)
                for (std::size_t j = 0; j < n_; ++j) {
                    box[j].lo = std::min(box[j].lo, v[j]);
                    box[j].hi = std::max(box[j].hi, v[j]);
                }
            return box;
        }
    }
    return {};
}

Interval Domain::support(std::span<const double> v) const {
    require_dim(n_, v.size(), "support");
    switch (kind_) {
        case Kind::Ball: {
            const double r = radius_ * std::sqrt(dot(v, v));
            return {-r, r};
        }
        case Kind::Box: {
            Interval out{0.0, 0.0};
            for (std::size_t i = 0; i < n_; ++i) {
                const double a = v[i] * intervals_[i].lo;
                const double b = v[i] * intervals_[i].hi;
                out.lo += std::min(a, b);
                out.hi += std::max(a, b);
            }
            return out;
        }
        case Kind::Polytope: {
            Interval out{dot(v, vertices_.front()), dot(v, vertices_.front())};
            for (const auto& w : vertices_) {
                const double s = dot(v, w);
                out.lo = std::min(out.lo, s);
                out.hi = std::max(out.hi, s);
            }
            return out;
        }
    }
    return {};
}

std::vector<double> Domain::enclosing_center() const {
    if (kind_ == Kind::Ball) return std::vector<double>(n_, 0.0);
    std::vector<double> c(n_);
    const auto box = bounding_box();
    for (std::size_t i = 0; i < n_; ++i) c[i] = 0.5 * (box[i].lo + box[i].hi);
    return c;
}

double Domain::enclosing_radius() const {
    switch (kind_) {
        case Kind::Ball:
            return radius_;
        case Kind::Box: {
            double s = 0.0;
            for (const auto& iv : intervals_) s += 0.25 * iv.length() * iv.length();
            return std::sqrt(s);
        }
        case Kind::Polytope: {
            const auto c = enclosing_center();
            double r2 = 0.0;
            for (const auto& v : vertices_) {
                double s = 0.0;
                for (std::size_t j = 0; j < n_; ++j) s += (v[j] - c[j]) * (v[j] - c[j]);
                r2 = std::max(r2, s);
            }
            return std::sqrt(r2);
        }
    }
    return 0.0;
}

bool Domain::star_shaped_about_origin() const {
    switch (kind_) {
        case Kind::Ball:
            return true;
        case Kind::Box:
            return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& iv) { return iv.lo < 0.0 && iv.hi > 0.0; });
        case Kind::Polytope:
            return std::all_of(faces_.begin(), faces_.end(), [](const HalfSpace& h) { return h.b > 0.0; });
    }
    return false;
}

// ---------------------------------------------------------------- rotation

void Rotation::apply(std::span<const double> x, std::span<double> y) const {
    require_dim(n_, x.size(), "rotation apply");
    require_dim(n_, y.size(), "rotation apply");
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += m_[i * n_ + j] * x[j];
        y[i] = s;
    }
}

std::vector<double> Rotation::apply(std::span<const double> x) const {
    std::vector<double> y(n_);
    apply(x, y);
    return y;
}

Rotation Rotation::identity(std::size_t n) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
    return {n, std::move(m)};
}

Rotation rotation_to(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) throw InputError("rotation_to: empty vector");
    const double norm = std::sqrt(dot(v, v));
    if (!(std::abs(norm - 1.0) <= 1e-9)) throw InputError("rotation_to: vector is not a unit vector");

    // Plane spanned by e_n and u, where u is the unit part of v orthogonal to e_n.
    const double c = v[n - 1];
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += v[i] * v[i];
    s = std::sqrt(s);

    std::vector<double> u(n, 0.0);
    if (s > 0.0) {
        for (std::size_t i = 0; i + 1 < n; ++i) u[i] = v[i] / s;
    } else if (c > 0.0) {
        return Rotation::identity(n);
    } else {
        if (n == 1) throw InputError("rotation_to: no rotation of the line maps e_1 to -e_1");
        u[0] = 1.0;  // half turn in the (e_1, e_n) plane
    }

    // R = I + (c - 1)(e e^T + u u^T) + s (u e^T - e u^T)
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
    const std::size_t last = n - 1;
    m[last * n + last] += c - 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] += (c - 1.0) * u[i] * u[j];
    for (std::size_t i = 0; i < n; ++i) {
        m[i * n + last] += s * u[i];
        m[last * n + i] -= s * u[i];
    }
    return {n, std::move(m)};
}

// ---------------------------------------------------------------- JSON

Domain domain_from_json(const std::string& json, std::size_t n) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("domain JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("domain JSON: expected an object");
    try {
        if (doc.contains("n")) n = doc.at("n").get<std::size_t>();
        if (doc.contains("ball")) {
            if (n == 0) throw InputError("domain JSON: ball descriptor needs a dimension");
            return Domain::ball(n, doc.at("ball").get<double>());
        }
        if (doc.contains("box")) {
            std::vector<Interval> ivs;
            for (const auto& iv : doc.at("box")) {
                if (!iv.is_array() || iv.size() != 2) throw InputError("domain JSON: box entries are [lo, hi]");
                ivs.push_back({iv[0].get<double>(), iv[1].get<double>()});
            }
            if (n != 0 && n != ivs.size()) throw InputError("domain JSON: box dimension does not match n");
            return Domain::box(std::move(ivs));
        }
        if (doc.contains("polytope")) {
            std::vector<HalfSpace> faces;
            for (const auto& f : doc.at("polytope"))
                faces.push_back({f.at("a").get<std::vector<double>>(), f.at("b").get<double>()});
            if (faces.empty()) throw InputError("domain JSON: polytope without faces");
            const std::size_t dim = faces.front().a.size();
            if (n != 0 && n != dim) throw InputError("domain JSON: polytope dimension does not match n");
            return Domain::polytope(dim, std::move(faces));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("domain JSON: ") + e.what());
    }
    throw InputError("domain JSON: expected one of \"ball\", \"box\", \"polytope\"");
}

std::string domain_to_json(const Domain& domain) {
    nlohmann::json doc;
    switch (domain.kind()) {
        case Domain::Kind::Ball:
            doc["ball"] = domain.radius();
            doc["n"] = domain.dim();
            break;
        case Domain::Kind::Box: {
            auto arr = nlohmann::json::array();
            for (const auto& iv : domain.intervals()) arr.push_back({iv.lo, iv.hi});
            doc["box"] = arr;
            break;
        }
        case Domain::Kind::Polytope: {
            auto arr = nlohmann::json::array();
            for (const auto& h : domain.faces()) arr.push_back({{"a", h.a}, {"b", h.b}});
            doc["polytope"] = arr;
            break;
        }
    }
    return doc.dump();
}

}  // namespace formslab
