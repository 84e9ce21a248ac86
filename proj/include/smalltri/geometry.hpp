#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "smalltri/error.hpp"

namespace smalltri {

using Rational = mpq_class;
using Sign = int;  // -1, 0, +1

inline Sign sign_of(const Rational& r) { return sgn(r) > 0 ? 1 : (sgn(r) < 0 ? -1 : 0); }

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);

struct Vec3 {
    Rational x, y, z;

    Vec3() = default;
    Vec3(Rational a, Rational b, Rational c) : x(std::move(a)), y(std::move(b)), z(std::move(c)) {}
    Vec3(long a, long b, long c) : x(a), y(b), z(c) {}

    const Rational& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    Rational& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
    bool operator<(const Vec3& o) const;
    bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0 && sgn(z) == 0; }
};
using Point3 = Vec3;

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a);
Vec3 operator*(const Rational& s, const Vec3& a);
Vec3 operator/(const Vec3& a, const Rational& s);
Rational dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
Rational det3(const Vec3& a, const Vec3& b, const Vec3& c);
Point3 lerp(const Point3& p, const Point3& q, const Rational& t);
Point3 midpoint(const Point3& p, const Point3& q);
Point3 centroid(const std::vector<Point3>& pts);
std::string to_string(const Vec3& v);

// Sign of det(p2-p1, p3-p1, p4-p1); the standard simplex is positive.
Sign orient4(const Point3& p1, const Point3& p2, const Point3& p3, const Point3& p4);

// A three-term GP sign set is valid iff it is all zero or contains both signs.
bool gp_triple_ok(const std::array<Sign, 3>& t);
bool gp_holds(const Point3& a, const Point3& b, const Point3& x1, const Point3& x2,
              const Point3& x3, const Point3& x4);

struct Circuit {
    std::array<Sign, 5> sign{};
    std::vector<int> plus, minus;
};
std::optional<Circuit> circuit5(const std::array<Point3, 5>& x);

// Oriented plane a.x = b; side(x) = sign(a.x - b).
struct Plane {
    Vec3 a;
    Rational b;
    bool operator==(const Plane& o) const { return a == o.a && b == o.b; }
};

Plane plane_through(const Point3& p, const Point3& q, const Point3& r);
Plane canonical(const Plane& h);       // primitive integer coefficients, orientation kept
Plane unoriented_key(const Plane& h);  // canonical with first nonzero coefficient positive
Plane flipped(const Plane& h);
Plane parallel_through(const Plane& h, const Point3& p);
Sign side(const Plane& h, const Point3& x);
Rational eval(const Plane& h, const Point3& x);

struct Line3 {
    Point3 base;
    Vec3 dir;
};
Line3 line_through(const Point3& p, const Point3& q);
Point3 line_plane_point(const Line3& l, const Plane& h);
Line3 planes_line(const Plane& h1, const Plane& h2);
Point3 planes_point(const Plane& h1, const Plane& h2, const Plane& h3);
Vec3 primitive_direction(const Vec3& v);
// Solves M x = rhs with M given by rows; throws ParallelElements when singular.
Vec3 solve3(const Vec3& r0, const Vec3& r1, const Vec3& r2, const Vec3& rhs);

// Univariate polynomials in the small parameter epsilon.
struct UniPoly {
    std::vector<Rational> c;  // c[k] multiplies eps^k

    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }
    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    Rational operator()(const Rational& e) const;
    bool is_zero() const { return c.empty(); }
};
UniPoly operator+(const UniPoly& p, const UniPoly& q);
UniPoly operator-(const UniPoly& p, const UniPoly& q);
UniPoly operator*(const UniPoly& p, const UniPoly& q);

Rational eps_threshold(const UniPoly& p);
Rational eps_threshold_all(const std::vector<UniPoly>& ps);
// For conditions that may vanish at eps = 0: divides out the lowest power of eps
// and requires the remaining constant term to be positive.
Rational eps_threshold_leading(const UniPoly& p);
Rational eps_threshold_leading_all(const std::vector<UniPoly>& ps);
// Largest 2^-k not above r (r > 0); keeps later coordinates short.
Rational round_down_pow2(const Rational& r);
// Exact interpolation of a polynomial of known maximal degree from its values.
UniPoly interpolate(const std::function<Rational(const Rational&)>& f, int degree);

struct QuadCurve {
    Vec3 a, b, c;  // p(t) = a + b t + c t^2
    Point3 operator()(const Rational& t) const;
};
QuadCurve parabola_through(const Point3& p0, const Point3& p1, const Point3& p2,
                           const Rational& t0, const Rational& t1, const Rational& t2);

bool segment_meets_triangle_relint(const Point3& s0, const Point3& s1, const Point3& t0,
                                   const Point3& t1, const Point3& t2);

using Tet = std::array<Point3, 4>;
bool tetra_open_intersect(const Tet& t1, const Tet& t2);
// Closed tetrahedra share no point.
bool tetra_closed_disjoint(const Tet& t1, const Tet& t2);

// Separation tests between convex hulls of small point sets. Candidate axes are
// the normals of point triples in each set and crosses of point-pair directions.
bool hulls_strictly_separated(const std::vector<Point3>& A, const std::vector<Point3>& B);
bool hulls_weakly_separated(const std::vector<Point3>& A, const std::vector<Point3>& B);

// Closed point-in-simplex tests, dimension given by the number of vertices (1..4).
bool point_in_closed_simplex(const Point3& x, const std::vector<Point3>& simplex);

}  // namespace smalltri
