#pragma once

#include "porohdg/common.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace porohdg {

/// Boundary tags assigned by the structured generator.
namespace side {
inline constexpr int bottom = 1;
inline constexpr int right = 2;
inline constexpr int top = 3;
inline constexpr int left = 4;
}  // namespace side

struct Rectangle {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    double area() const { return (x1 - x0) * (y1 - y0); }
};

struct Triangle {
    std::array<int, 3> v{};
    int region = 0;
};

struct BoundaryEdge {
    std::array<int, 2> v{};
    int tag = 0;
};

/// Conforming triangulation of a polygonal domain.
///
/// Construction validates the input: clockwise triangles are flipped (and
/// counted), degenerate triangles, edges shared by more than two triangles,
/// untagged boundary edges and tagged interior edges are rejected with a
/// TopologyError. A Mesh is immutable afterwards.
class Mesh {
public:
    Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
         std::vector<BoundaryEdge> boundary);

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }

    double area(int t) const;
    /// Diameter h_K (longest edge).
    double diameter(int t) const;
    /// Mesh size h = max h_K.
    double max_diameter() const;
    double total_area() const;

    /// Number of triangles whose orientation was flipped on construction.
    int repaired_orientations() const { return repaired_; }

private:
    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<BoundaryEdge> boundary_;
    int repaired_ = 0;
};

enum class DiagonalRule {
    /// each square split along the (x0,y0)-(x1,y1) diagonal
    up,
    /// each square split along the (x1,y0)-(x0,y1) diagonal (mirror image of `up`)
    down,
};

/// Uniform n x n grid of squares, each split into two triangles.
Mesh generate_structured(int n, const Rectangle& domain = {},
                         DiagonalRule rule = DiagonalRule::up);

/// Reads the ASCII `$vertices / $triangles / $boundary` format.
Mesh read_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);
void write_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// Mesh edge seen from the skeleton. The vertex pair is ordered as the left
/// element traverses it counterclockwise, so `normal` is the outward normal
/// of the left element; the right element uses its negation.
struct Face {
    std::array<int, 2> v{};
    int left = -1;
    int right = -1;  ///< -1 on the boundary
    int left_local = -1;
    int right_local = -1;
    int tag = -1;  ///< boundary tag, -1 for interior faces
    double length = 0.0;
    Point normal = Point::Zero();
    Point tangent = Point::Zero();

    bool is_boundary() const { return right < 0; }
};

class Skeleton {
public:
    explicit Skeleton(const Mesh& mesh);

    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
    std::size_t num_faces() const { return faces_.size(); }
    std::size_t num_interior() const { return n_interior_; }
    std::size_t num_boundary() const { return faces_.size() - n_interior_; }

    /// Global face of local edge e of triangle t; local edge e joins local
    /// vertices e and (e+1)%3.
    int element_face(int t, int e) const { return elem_faces_[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)]; }
    /// True when triangle t is the left element of its local edge e.
    bool is_left(int t, int e) const;

    /// Smallest gamma with h_F <= h_K <= gamma h_F over all (K, F in K).
    double quasi_uniformity() const { return gamma_; }

private:
    std::vector<Face> faces_;
    std::vector<std::array<int, 3>> elem_faces_;
    std::size_t n_interior_ = 0;
    double gamma_ = 0.0;
};

}  // namespace porohdg
