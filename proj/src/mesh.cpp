#include "porohdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace porohdg {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey make_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

double signed_area(const Point& a, const Point& b, const Point& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

struct EdgeUse {
    int tri;
    int local;
};

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<BoundaryEdge> boundary)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_(std::move(boundary))
{
    const int nv = static_cast<int>(vertices_.size());
    if (triangles_.empty()) throw TopologyError("mesh has no triangles");

    double scale = 0.0;
    for (const auto& p : vertices_) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double area_tol = 1e-14 * std::max(scale * scale, 1e-300);

    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        auto& tri = triangles_[t];
        for (int i : tri.v) {
            if (i < 0 || i >= nv) {
                throw TopologyError("triangle " + std::to_string(t) + " references vertex " + std::to_string(i) +
                                    " out of range");
            }
        }
        if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2]) {
            throw TopologyError("triangle " + std::to_string(t) + " repeats a vertex");
        }
        const double a = signed_area(vertex(tri.v[0]), vertex(tri.v[1]), vertex(tri.v[2]));
        if (std::abs(a) <= area_tol) throw TopologyError("triangle " + std::to_string(t) + " is degenerate");
        if (a < 0.0) {
            std::swap(tri.v[1], tri.v[2]);
            ++repaired_;
        }
    }

    std::map<EdgeKey, std::vector<EdgeUse>> uses;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (int e = 0; e < 3; ++e) {
            const auto& v = triangles_[t].v;
            uses[make_key(v[e], v[(e + 1) % 3])].push_back({static_cast<int>(t), e});
        }
    }
    for (const auto& [key, list] : uses) {
        if (list.size() > 2) {
            throw TopologyError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") shared by " +
                                std::to_string(list.size()) + " triangles");
        }
        if (list.size() == 2) {
            // conforming neighbours traverse a shared edge in opposite directions
            const auto& a = triangles_[static_cast<std::size_t>(list[0].tri)].v;
            const auto& b = triangles_[static_cast<std::size_t>(list[1].tri)].v;
            if (a[list[0].local] == b[list[1].local]) {
                throw TopologyError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                    ") has overlapping neighbours");
            }
        }
    }

    std::map<EdgeKey, int> tagged;
    for (const auto& be : boundary_) {
        if (be.tag < 0) throw TopologyError("negative boundary tag");
        for (int i : be.v) {
            if (i < 0 || i >= nv) throw TopologyError("boundary edge references vertex out of range");
        }
        const auto key = make_key(be.v[0], be.v[1]);
        auto it = uses.find(key);
        if (it == uses.end()) {
            throw TopologyError("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                ") is not an edge of the mesh");
        }
        if (it->second.size() != 1) {
            throw TopologyError("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                ") is an interior edge");
        }
        if (!tagged.emplace(key, be.tag).second) {
            throw TopologyError("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                ") tagged twice");
        }
    }
    for (const auto& [key, list] : uses) {
        if (list.size() == 1 && !tagged.contains(key)) {
            throw TopologyError("boundary edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                ") has no tag (non-conforming mesh or hanging node?)");
        }
    }
}

double Mesh::area(int t) const
{
    const auto& v = triangle(t).v;
    return signed_area(vertex(v[0]), vertex(v[1]), vertex(v[2]));
}

double Mesh::diameter(int t) const
{
    const auto& v = triangle(t).v;
    double d = 0.0;
    for (int e = 0; e < 3; ++e) d = std::max(d, (vertex(v[(e + 1) % 3]) - vertex(v[e])).norm());
    return d;
}

double Mesh::max_diameter() const
{
    double h = 0.0;
    for (int t = 0; t < static_cast<int>(num_triangles()); ++t) h = std::max(h, diameter(t));
    return h;
}

double Mesh::total_area() const
{
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(num_triangles()); ++t) a += area(t);
    return a;
}

Mesh generate_structured(int n, const Rectangle& domain, DiagonalRule rule)
{
    if (n < 1) throw ValidationError("structured mesh needs n >= 1");
    const int np = n + 1;
    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>(np * np));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            // i == n is set exactly so mirrored meshes coincide bit for bit
            const double x = i == n ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * i / n;
            const double y = j == n ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * j / n;
            vertices.emplace_back(x, y);
        }
    }
    auto id = [np](int i, int j) { return j * np + i; };

    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
            if (rule == DiagonalRule::up) {
                triangles.push_back({{v00, v10, v11}, 0});
                triangles.push_back({{v00, v11, v01}, 0});
            } else {
                triangles.push_back({{v00, v10, v01}, 0});
                triangles.push_back({{v10, v11, v01}, 0});
            }
        }
    }

    std::vector<BoundaryEdge> boundary;
    for (int i = 0; i < n; ++i) {
        boundary.push_back({{id(i, 0), id(i + 1, 0)}, side::bottom});
        boundary.push_back({{id(n, i), id(n, i + 1)}, side::right});
        boundary.push_back({{id(i + 1, n), id(i, n)}, side::top});
        boundary.push_back({{id(0, i + 1), id(0, i)}, side::left});
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh parse_mesh(const std::string& text)
{
    std::istringstream in(text);
    std::vector<Point> vertices;
    std::vector<Triangle> triangles;
    std::vector<BoundaryEdge> boundary;
    bool seen_v = false, seen_t = false, seen_b = false;

    auto fail = [](const std::string& what) { throw ParseError("mesh file: " + what); };

    std::string word;
    while (in >> word) {
        long count = -1;
        if (!(in >> count) || count < 0) fail("expected a non-negative count after " + word);
        const auto n = static_cast<std::size_t>(count);
        if (word == "$vertices") {
            if (seen_v) fail("duplicate $vertices section");
            seen_v = true;
            vertices.resize(n);
            for (auto& p : vertices) {
                if (!(in >> p.x() >> p.y())) fail("truncated $vertices section");
            }
        } else if (word == "$triangles") {
            if (seen_t) fail("duplicate $triangles section");
            seen_t = true;
            triangles.resize(n);
            for (auto& t : triangles) {
                if (!(in >> t.v[0] >> t.v[1] >> t.v[2] >> t.region)) fail("truncated $triangles section");
            }
        } else if (word == "$boundary") {
            if (seen_b) fail("duplicate $boundary section");
            seen_b = true;
            boundary.resize(n);
            for (auto& b : boundary) {
                if (!(in >> b.v[0] >> b.v[1] >> b.tag)) fail("truncated $boundary section");
            }
        } else {
            fail("unknown section '" + word + "'");
        }
    }
    if (!seen_v || !seen_t || !seen_b) fail("missing section");
    return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

Mesh read_mesh(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_mesh(buf.str());
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file " + path.string());
    out.precision(17);
    out << "$vertices " << mesh.num_vertices() << '\n';
    for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
    out << "$triangles " << mesh.num_triangles() << '\n';
    for (const auto& t : mesh.triangles()) out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.region << '\n';
    out << "$boundary " << mesh.boundary_edges().size() << '\n';
    for (const auto& b : mesh.boundary_edges()) out << b.v[0] << ' ' << b.v[1] << ' ' << b.tag << '\n';
}

Skeleton::Skeleton(const Mesh& mesh)
{
    std::map<EdgeKey, int> index;
    std::map<EdgeKey, int> tags;
    for (const auto& be : mesh.boundary_edges()) tags[make_key(be.v[0], be.v[1])] = be.tag;

    const auto nt = static_cast<int>(mesh.num_triangles());
    elem_faces_.assign(static_cast<std::size_t>(nt), {-1, -1, -1});
    for (int t = 0; t < nt; ++t) {
        const auto& v = mesh.triangle(t).v;
        for (int e = 0; e < 3; ++e) {
            const int a = v[e], b = v[(e + 1) % 3];
            const auto key = make_key(a, b);
            auto [it, fresh] = index.emplace(key, static_cast<int>(faces_.size()));
            if (fresh) {
                Face f;
                f.v = {a, b};
                f.left = t;
                f.left_local = e;
                const Point d = mesh.vertex(b) - mesh.vertex(a);
                f.length = d.norm();
                f.tangent = d / f.length;
                f.normal = Point(f.tangent.y(), -f.tangent.x());
                faces_.push_back(f);
            } else {
                auto& f = faces_[static_cast<std::size_t>(it->second)];
                f.right = t;
                f.right_local = e;
            }
            elem_faces_[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = it->second;
        }
    }
    for (auto& f : faces_) {
        if (f.is_boundary()) {
            f.tag = tags.at(make_key(f.v[0], f.v[1]));
        } else {
            ++n_interior_;
        }
    }

    gamma_ = 0.0;
    for (int t = 0; t < nt; ++t) {
        const double hk = mesh.diameter(t);
        for (int e = 0; e < 3; ++e) gamma_ = std::max(gamma_, hk / face(element_face(t, e)).length);
    }
}

bool Skeleton::is_left(int t, int e) const
{
    const auto& f = face(element_face(t, e));
    return f.left == t && f.left_local == e;
}

}  // namespace porohdg
