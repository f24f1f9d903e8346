#include "dynbc/mesh.hpp"

#include "dynbc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

namespace dynbc {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double distance(const Point& a, const Point& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles, std::vector<int> boundary_loop)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_loop_(std::move(boundary_loop)) {
    const auto nv = static_cast<long>(vertices_.size());
    const auto nb = static_cast<long>(boundary_loop_.size());
    if (nb > nv) {
        throw ValidationError("boundary loop longer than vertex list");
    }
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (int v : triangles_[t]) {
            if (v < 0 || v >= nv) {
                throw ValidationError("triangle " + std::to_string(t) + " references vertex " + std::to_string(v) +
                                      " out of range");
            }
        }
    }
    const long n_interior = nv - nb;
    for (long k = 0; k < nb; ++k) {
        const int v = boundary_loop_[static_cast<std::size_t>(k)];
        if (v < 0 || v >= nv) {
            throw ValidationError("boundary loop references vertex " + std::to_string(v) + " out of range");
        }
        if (v != n_interior + k) {
            throw ValidationError("vertex numbering is not interior-first: boundary loop entry " + std::to_string(k) +
                                  " is vertex " + std::to_string(v) + ", expected " +
                                  std::to_string(n_interior + k));
        }
    }
}

bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
}

bool operator==(const Mesh& a, const Mesh& b) {
    return a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_ && a.boundary_loop_ == b.boundary_loop_;
}

MeshStats mesh_stats(const Mesh& mesh) {
    MeshStats s;
    s.n_vertices = mesh.n_vertices();
    s.n_boundary = mesh.n_boundary();
    s.min_edge = mesh.n_triangles() > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    const auto& v = mesh.vertices();
    for (const auto& t : mesh.triangles()) {
        for (int e = 0; e < 3; ++e) {
            const double len = distance(v[t[e]], v[t[(e + 1) % 3]]);
            s.h = std::max(s.h, len);
            s.min_edge = std::min(s.min_edge, len);
        }
        s.polygon_area += signed_area(v[t[0]], v[t[1]], v[t[2]]);
    }
    return s;
}

int disk_ring_count(double target_h) {
    if (!(target_h > 0.0 && target_h < 1.0)) {
        throw ParameterError("target_h must lie in (0, 1), got " + format_double(target_h));
    }
    return std::max(1, static_cast<int>(std::lround(1.4 / target_h)));
}

Mesh generate_disk_mesh(double target_h) {
    const int m = disk_ring_count(target_h);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    // ring_start[j] is the vertex index of node 0 on ring j; ring 0 is the centre.
    std::vector<int> ring_size(static_cast<std::size_t>(m) + 1);
    std::vector<int> ring_start(static_cast<std::size_t>(m) + 1);
    ring_size[0] = 1;
    int next = 0;
    for (int j = 0; j <= m; ++j) {
        if (j > 0) ring_size[j] = 6 * j;
        ring_start[j] = next;
        next += ring_size[j];
    }

    std::vector<Point> vertices(static_cast<std::size_t>(next));
    for (int j = 0; j <= m; ++j) {
        const double r = static_cast<double>(j) / m;
        for (int k = 0; k < ring_size[j]; ++k) {
            const double theta = two_pi * k / ring_size[j];
            auto& p = vertices[static_cast<std::size_t>(ring_start[j] + k)];
            if (j == 0) {
                p = {0.0, 0.0};
            } else if (j == m) {
                p = {std::cos(theta), std::sin(theta)};
            } else {
                p = {r * std::cos(theta), r * std::sin(theta)};
            }
        }
    }

    std::vector<Triangle> triangles;
    triangles.reserve(6 * static_cast<std::size_t>(m) * m);
    for (int k = 0; k < ring_size[1]; ++k) {
        triangles.push_back({0, ring_start[1] + k, ring_start[1] + (k + 1) % ring_size[1]});
    }
    for (int j = 2; j <= m; ++j) {
        const int na = ring_size[j - 1];
        const int nb = ring_size[j];
        const int a0 = ring_start[j - 1];
        const int b0 = ring_start[j];
        int ia = 0;
        int ib = 0;
        while (ia < na || ib < nb) {
            // Compare the angles of the next inner and outer node exactly:
            // (ib+1)/nb <= (ia+1)/na. Ties advance the outer ring.
            const bool advance_outer =
                ib < nb && (ia == na || static_cast<long>(ib + 1) * na <= static_cast<long>(ia + 1) * nb);
            const int a = a0 + ia % na;
            const int b = b0 + ib % nb;
            if (advance_outer) {
                triangles.push_back({a, b, b0 + (ib + 1) % nb});
                ++ib;
            } else {
                triangles.push_back({a, b, a0 + (ia + 1) % na});
                ++ia;
            }
        }
    }

    std::vector<int> loop(static_cast<std::size_t>(ring_size[m]));
    for (int k = 0; k < ring_size[m]; ++k) loop[static_cast<std::size_t>(k)] = ring_start[m] + k;
    return Mesh(std::move(vertices), std::move(triangles), std::move(loop));
}

std::vector<std::string> disk_mesh_violations(const Mesh& mesh) {
    std::vector<std::string> out;
    const auto& v = mesh.vertices();
    for (int b : mesh.boundary_loop()) {
        const double r = std::hypot(v[b].x, v[b].y);
        if (std::abs(r - 1.0) > 1e-12) {
            out.push_back("boundary vertex " + std::to_string(b) + " at radius " + format_double(r));
            break;
        }
    }
    std::set<std::pair<int, int>> edges;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        if (!(signed_area(v[tri[0]], v[tri[1]], v[tri[2]]) > 0.0)) {
            out.push_back("triangle " + std::to_string(t) + " is not positively oriented");
            break;
        }
    }
    for (const auto& tri : mesh.triangles()) {
        for (int e = 0; e < 3; ++e) {
            edges.insert(std::minmax(tri[e], tri[(e + 1) % 3]));
        }
    }
    const long euler = static_cast<long>(mesh.n_vertices()) - static_cast<long>(edges.size()) +
                       static_cast<long>(mesh.n_triangles());
    if (euler != 1) {
        out.push_back("Euler characteristic " + std::to_string(euler) + " != 1");
    }
    const MeshStats s = mesh_stats(mesh);
    if (s.min_edge <= 0.0 || s.h / s.min_edge > 5.0) {
        out.push_back("edge length ratio " + format_double(s.h / s.min_edge) + " exceeds 5");
    }
    return out;
}

std::string format_mesh(const Mesh& mesh) {
    std::ostringstream os;
    os << mesh.n_vertices() << ' ' << mesh.n_triangles() << ' ' << mesh.n_boundary() << '\n';
    for (const auto& p : mesh.vertices()) {
        os << format_double(p.x) << ' ' << format_double(p.y) << '\n';
    }
    for (const auto& t : mesh.triangles()) {
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    for (int b : mesh.boundary_loop()) {
        os << b << '\n';
    }
    return os.str();
}

void write_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << format_mesh(mesh);
    if (!out) {
        throw Error("write to " + path.string() + " failed");
    }
}

namespace {

/// Reads one line and splits it into exactly `count` whitespace-separated tokens.
template <typename T>
std::vector<T> read_fields(std::istream& in, std::size_t& line_no, std::size_t count, const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(std::string("unexpected end of file, expected ") + what, line_no + 1);
    }
    ++line_no;
    std::istringstream ls(line);
    std::vector<T> out(count);
    for (auto& f : out) {
        if (!(ls >> f)) {
            throw ParseError(std::string("malformed ") + what, line_no);
        }
    }
    std::string rest;
    if (ls >> rest) {
        throw ParseError(std::string("trailing data after ") + what, line_no);
    }
    return out;
}

}  // namespace

Mesh parse_mesh(const std::string& text) {
    std::istringstream in(text);
    std::size_t line_no = 0;
    const auto header = read_fields<long>(in, line_no, 3, "header 'NV NT NB'");
    if (header[0] < 0 || header[1] < 0 || header[2] < 0) {
        throw ParseError("negative count in header", line_no);
    }
    const auto nv = static_cast<std::size_t>(header[0]);
    const auto nt = static_cast<std::size_t>(header[1]);
    const auto nb = static_cast<std::size_t>(header[2]);

    std::vector<Point> vertices(nv);
    for (auto& p : vertices) {
        const auto xy = read_fields<double>(in, line_no, 2, "vertex 'x y'");
        p = {xy[0], xy[1]};
    }
    std::vector<Triangle> triangles(nt);
    for (auto& t : triangles) {
        const auto ijk = read_fields<int>(in, line_no, 3, "triangle 'i j k'");
        t = {ijk[0], ijk[1], ijk[2]};
    }
    std::vector<int> loop(nb);
    for (auto& b : loop) {
        b = read_fields<int>(in, line_no, 1, "boundary index")[0];
    }
    std::string rest;
    while (std::getline(in, rest)) {
        ++line_no;
        if (rest.find_first_not_of(" \t\r") != std::string::npos) {
            throw ParseError("unexpected trailing content", line_no);
        }
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(loop));
}

Mesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mesh(buf.str());
}

}  // namespace dynbc
