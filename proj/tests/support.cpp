#include "support.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <vector>

namespace ymddr::testing
{

  namespace
  {
    std::size_t grid_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k)
    {
      return i + (n + 1) * (j + (n + 1) * k);
    }

    std::vector<Vector3> grid_vertices(std::size_t n)
    {
      std::vector<Vector3> v;
      for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t j = 0; j <= n; ++j) {
          for (std::size_t i = 0; i <= n; ++i) {
            v.emplace_back(double(i) / n, double(j) / n, double(k) / n);
          }
        }
      }
      return v;
    }

    // Faces are shared through their sorted vertex set
    class FaceRegistry
    {
    public:
      std::size_t add(const std::vector<std::size_t> & loop)
      {
        std::vector<std::size_t> key = loop;
        std::sort(key.begin(), key.end());
        auto [it, inserted] = m_index.emplace(key, m_faces.size());
        if (inserted) {
          m_faces.push_back(loop);
        }
        return it->second;
      }
      std::vector<std::vector<std::size_t>> & faces() { return m_faces; }

    private:
      std::map<std::vector<std::size_t>, std::size_t> m_index;
      std::vector<std::vector<std::size_t>> m_faces;
    };
  } // namespace

  Mesh kuhn_tetrahedral_mesh(std::size_t n)
  {
    std::vector<Vector3> vertices = grid_vertices(n);
    FaceRegistry registry;
    std::vector<std::vector<std::size_t>> cells;
    const std::array<std::array<int, 3>, 6> orders{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          for (const auto & order : orders) {
            std::array<std::size_t, 3> ijk{i, j, k};
            std::array<std::size_t, 4> tet;
            tet[0] = grid_index(n, ijk[0], ijk[1], ijk[2]);
            for (int s = 0; s < 3; ++s) {
              ++ijk[order[s]];
              tet[s + 1] = grid_index(n, ijk[0], ijk[1], ijk[2]);
            }
            std::vector<std::size_t> cell;
            for (int skip = 0; skip < 4; ++skip) {
              std::vector<std::size_t> loop;
              for (int a = 0; a < 4; ++a) {
                if (a != skip) {
                  loop.push_back(tet[a]);
                }
              }
              cell.push_back(registry.add(loop));
            }
            cells.push_back(cell);
          }
        }
      }
    }
    return Mesh::from_polyhedra(std::move(vertices), std::move(registry.faces()), std::move(cells));
  }

  Mesh prism_mesh(std::size_t n)
  {
    std::vector<Vector3> vertices = grid_vertices(n);
    FaceRegistry registry;
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          auto at = [&](std::size_t a, std::size_t b, std::size_t c) { return grid_index(n, i + a, j + b, k + c); };
          // Triangles (00, 10, 11) and (00, 11, 01) in the xy plane
          const std::array<std::array<std::array<std::size_t, 2>, 3>, 2> triangles{
            {{{{0, 0}, {1, 0}, {1, 1}}}, {{{0, 0}, {1, 1}, {0, 1}}}}};
          for (const auto & tri : triangles) {
            std::vector<std::size_t> cell;
            std::vector<std::size_t> bottom, top;
            for (const auto & p : tri) {
              bottom.push_back(at(p[0], p[1], 0));
              top.push_back(at(p[0], p[1], 1));
            }
            cell.push_back(registry.add(bottom));
            cell.push_back(registry.add(top));
            for (int s = 0; s < 3; ++s) {
              const auto & p = tri[s];
              const auto & q = tri[(s + 1) % 3];
              cell.push_back(registry.add({at(p[0], p[1], 0), at(q[0], q[1], 0), at(q[0], q[1], 1), at(p[0], p[1], 1)}));
            }
            cells.push_back(cell);
          }
        }
      }
    }
    return Mesh::from_polyhedra(std::move(vertices), std::move(registry.faces()), std::move(cells));
  }

  Eigen::VectorXd random_vector(std::mt19937_64 & rng, Eigen::Index size)
  {
    std::uniform_real_distribution<double> unit(-1., 1.);
    Eigen::VectorXd v(size);
    for (auto & x : v) {
      x = unit(rng);
    }
    return v;
  }

  std::string data_path(const std::string & name)
  {
    return std::string(YMDDR_TEST_DATA_DIR) + "/" + name;
  }

} // namespace ymddr::testing
