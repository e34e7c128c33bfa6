#include "porohdg/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace porohdg;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("porohdg_test_" + name);
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(StructuredMesh, SingleSquare)
{
    const Mesh m = generate_structured(1);
    EXPECT_EQ(m.num_triangles(), 2u);
    EXPECT_EQ(m.num_vertices(), 4u);
    const Skeleton s(m);
    EXPECT_EQ(s.num_faces(), 5u);
    EXPECT_EQ(s.num_interior(), 1u);
    EXPECT_EQ(s.num_boundary(), 4u);
}

TEST(StructuredMesh, TwoByTwoSatisfiesEuler)
{
    const Mesh m = generate_structured(2);
    const Skeleton s(m);
    EXPECT_EQ(m.num_triangles(), 8u);
    EXPECT_EQ(m.num_vertices(), 9u);
    EXPECT_EQ(s.num_faces(), 16u);
    EXPECT_EQ(s.num_interior(), 8u);
    EXPECT_EQ(s.num_boundary(), 8u);
    // V - E + F = 2 with the outer face counted
    EXPECT_EQ(static_cast<long>(m.num_vertices()) - static_cast<long>(s.num_faces()) +
                  static_cast<long>(m.num_triangles()) + 1,
              2);
}

TEST(StructuredMesh, SizeAndArea)
{
    for (auto rule : {DiagonalRule::up, DiagonalRule::down}) {
        const Mesh m = generate_structured(16, Rectangle{}, rule);
        EXPECT_EQ(m.num_triangles(), 512u);
        EXPECT_NEAR(m.max_diameter(), std::sqrt(2.0) / 16.0, 1e-15);
        double sum = 0.0;
        for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
            EXPECT_GT(m.area(t), 0.0);
            sum += m.area(t);
        }
        EXPECT_NEAR(sum, 1.0, 1e-13);
        EXPECT_NEAR(m.total_area(), 1.0, 1e-13);
    }
}

TEST(StructuredMesh, RectangleDomainAndTags)
{
    const Rectangle r{0.0, 0.0, 4800.0, 4800.0};
    const Mesh m = generate_structured(3, r);
    EXPECT_NEAR(m.total_area(), r.area(), 1e-6);
    int counts[5] = {0, 0, 0, 0, 0};
    for (const auto& b : m.boundary_edges()) {
        ASSERT_GE(b.tag, side::bottom);
        ASSERT_LE(b.tag, side::left);
        ++counts[b.tag];
        const Point& a = m.vertex(b.v[0]);
        const Point& c = m.vertex(b.v[1]);
        if (b.tag == side::bottom) {
            EXPECT_TRUE(a.y() == 0.0 && c.y() == 0.0);
        }
        if (b.tag == side::top) {
            EXPECT_TRUE(a.y() == 4800.0 && c.y() == 4800.0);
        }
        if (b.tag == side::left) {
            EXPECT_TRUE(a.x() == 0.0 && c.x() == 0.0);
        }
        if (b.tag == side::right) {
            EXPECT_TRUE(a.x() == 4800.0 && c.x() == 4800.0);
        }
    }
    for (int t = 1; t <= 4; ++t) EXPECT_EQ(counts[t], 3);
}

// Brute-force oracle: max over all (K, F in K) of h_K / h_F.
TEST(Skeleton, QuasiUniformityBound)
{
    for (int n : {1, 2, 5, 8}) {
        const Mesh m = generate_structured(n);
        const Skeleton s(m);
        double worst = 0.0;
        for (int t = 0; t < static_cast<int>(m.num_triangles()); ++t) {
            for (int e = 0; e < 3; ++e) worst = std::max(worst, m.diameter(t) / s.face(s.element_face(t, e)).length);
        }
        EXPECT_NEAR(s.quasi_uniformity(), worst, 1e-14);
        EXPECT_LE(s.quasi_uniformity(), std::sqrt(2.0) + 1e-14);
    }
}

TEST(Skeleton, NormalsAndNeighbours)
{
    const Mesh m = generate_structured(3);
    const Skeleton s(m);
    for (int f = 0; f < static_cast<int>(s.num_faces()); ++f) {
        const Face& face = s.face(f);
        EXPECT_NEAR(face.normal.norm(), 1.0, 1e-14);
        EXPECT_NEAR(face.normal.dot(face.tangent), 0.0, 1e-14);
        const Point a = m.vertex(face.v[0]), b = m.vertex(face.v[1]);
        EXPECT_NEAR((b - a).norm(), face.length, 1e-14);
        // outward for the left element: points away from its centroid
        const auto& tv = m.triangle(face.left).v;
        const Point c = (m.vertex(tv[0]) + m.vertex(tv[1]) + m.vertex(tv[2])) / 3.0;
        EXPECT_GT(face.normal.dot(0.5 * (a + b) - c), 0.0);
        EXPECT_EQ(face.is_boundary(), face.tag >= 0);
        EXPECT_EQ(s.element_face(face.left, face.left_local), f);
        if (!face.is_boundary()) {
            EXPECT_EQ(s.element_face(face.right, face.right_local), f);
            EXPECT_FALSE(s.is_left(face.right, face.right_local));
        }
        EXPECT_TRUE(s.is_left(face.left, face.left_local));
    }
}

TEST(MeshFile, RoundTrip)
{
    const Mesh m = generate_structured(1);
    const auto path = std::filesystem::temp_directory_path() / "porohdg_test_roundtrip.mesh";
    write_mesh(m, path);
    const Mesh r = read_mesh(path);
    ASSERT_EQ(r.num_vertices(), m.num_vertices());
    ASSERT_EQ(r.num_triangles(), m.num_triangles());
    ASSERT_EQ(r.boundary_edges().size(), m.boundary_edges().size());
    for (std::size_t i = 0; i < m.num_vertices(); ++i) EXPECT_EQ(r.vertices()[i], m.vertices()[i]);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) EXPECT_EQ(r.triangles()[t].v, m.triangles()[t].v);
    for (std::size_t b = 0; b < m.boundary_edges().size(); ++b) {
        EXPECT_EQ(r.boundary_edges()[b].v, m.boundary_edges()[b].v);
        EXPECT_EQ(r.boundary_edges()[b].tag, m.boundary_edges()[b].tag);
    }
    EXPECT_EQ(r.repaired_orientations(), 0);
    std::filesystem::remove(path);
}

TEST(MeshFile, ClockwiseTriangleIsRepaired)
{
    const std::string text = "$vertices 4\n0 0\n1 0\n1 1\n0 1\n"
                             "$triangles 2\n0 2 1 0\n0 2 3 0\n"
                             "$boundary 4\n0 1 1\n1 2 2\n2 3 3\n3 0 4\n";
    const Mesh m = read_mesh(temp_file("cw.mesh", text));
    EXPECT_EQ(m.repaired_orientations(), 1);
    for (int t = 0; t < 2; ++t) EXPECT_NEAR(m.area(t), 0.5, 1e-15);
}

TEST(MeshFile, EdgeSharedByThreeTriangles)
{
    const std::string text = "$vertices 5\n0 0\n1 0\n0.5 1\n0.5 -1\n0.5 2\n"
                             "$triangles 3\n0 1 2 0\n1 0 3 0\n0 1 4 0\n"
                             "$boundary 0\n";
    EXPECT_THROW(parse_mesh(text), TopologyError);
}

TEST(MeshFile, Malformed)
{
    EXPECT_THROW(parse_mesh("$vertices 2\n0 0\n"), ParseError);
    EXPECT_THROW(read_mesh("/nonexistent/porohdg.mesh"), Error);
    // untagged boundary edge
    EXPECT_THROW(parse_mesh("$vertices 3\n0 0\n1 0\n0 1\n$triangles 1\n0 1 2 0\n$boundary 2\n0 1 1\n1 2 1\n"),
                 TopologyError);
    // degenerate triangle
    EXPECT_THROW(parse_mesh("$vertices 3\n0 0\n1 0\n2 0\n$triangles 1\n0 1 2 0\n$boundary 3\n0 1 1\n1 2 1\n2 0 1\n"),
                 TopologyError);
}
