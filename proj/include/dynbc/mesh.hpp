#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace dynbc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Triangle = std::array<int, 3>;

/// Triangulation of a 2D domain with one closed boundary loop.
///
/// Vertices are numbered interior-first: indices [0, n_interior) are interior,
/// and boundary_loop()[k] == n_interior() + k. This numbering is what makes the
/// trace operator take the block form [0 M_lambda] after assembly, so every
/// constructor enforces it.
class Mesh {
public:
    Mesh() = default;

    /// Throws ValidationError when indices are out of range or the boundary loop
    /// does not enumerate the trailing vertices in order.
    Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, std::vector<int> boundary_loop);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    const std::vector<int>& boundary_loop() const noexcept { return boundary_loop_; }

    std::size_t n_vertices() const noexcept { return vertices_.size(); }
    std::size_t n_triangles() const noexcept { return triangles_.size(); }
    std::size_t n_boundary() const noexcept { return boundary_loop_.size(); }
    std::size_t n_interior() const noexcept { return vertices_.size() - boundary_loop_.size(); }

    friend bool operator==(const Mesh&, const Mesh&);

private:
    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<int> boundary_loop_;
};

bool operator==(const Point& a, const Point& b);

struct MeshStats {
    double h = 0.0;  ///< maximum edge length
    double min_edge = 0.0;
    std::size_t n_vertices = 0;
    std::size_t n_boundary = 0;
    double polygon_area = 0.0;  ///< sum of signed triangle areas
};

MeshStats mesh_stats(const Mesh& mesh);

/// Quasi-uniform triangulation of the unit disk built from concentric rings.
///
/// Ring j (radius j/m) carries 6j equally spaced nodes, neighbouring rings are
/// joined by a fan sweep in angle, and m = round(1.4 / target_h). Requires
/// 0 < target_h < 1. Deterministic.
Mesh generate_disk_mesh(double target_h);

/// Number of rings used by generate_disk_mesh for a given target width.
int disk_ring_count(double target_h);

/// Human-readable list of violated disk-mesh invariants; empty when the mesh is
/// a valid unit-disk triangulation (boundary on the circle, positive
/// orientation, Euler characteristic 1, edge ratio <= 5).
std::vector<std::string> disk_mesh_violations(const Mesh& mesh);

void write_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

/// Throws ParseError (with line number) on malformed input and ValidationError
/// when the vertex numbering is not interior-first.
Mesh read_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);

}  // namespace dynbc
