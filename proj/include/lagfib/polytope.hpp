#ifndef LAGFIB_POLYTOPE_HPP
#define LAGFIB_POLYTOPE_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "lagfib/util.hpp"

namespace lagfib {

/// Local coordinates at a smooth (unimodular) vertex of the moment polytope:
/// chart coordinate z_k is the torus character of the k-th primitive edge
/// direction. Non-smooth vertices are rejected at construction.
struct VertexChart {
  int vertex = -1;
  Eigen::MatrixXi edge_basis;     // columns: primitive edge directions e_k
  Eigen::MatrixXi edge_inverse;   // integer inverse of edge_basis
  std::vector<int> facet_of_coordinate;  // z_k = 0 lies on this facet
};

/// Reflexive moment polytope Delta together with the anticanonical lattice
/// points Delta0 = Delta - m_o, the convex weight assignment, and the
/// unimodular vertex charts. Delta is given by vertices and facets
/// {<normal_i, m> <= offset_i}.
class ReflexivePolytopePair {
 public:
  ReflexivePolytopePair(std::vector<Eigen::VectorXi> delta_vertices,
                        std::vector<std::pair<Eigen::VectorXi, int>> facets,
                        Eigen::VectorXi m_o,
                        std::map<std::vector<int>, double> weights_delta0);

  int ambient_dim() const { return dim_; }  // n + 1
  const std::vector<Eigen::VectorXi>& vertices() const { return vertices_; }
  const Eigen::VectorXi& interior_point() const { return m_o_; }
  const std::vector<Eigen::VectorXi>& delta0_points() const { return delta0_; }
  double weight(const Eigen::VectorXi& m_delta0) const;
  const std::vector<VertexChart>& charts() const { return charts_; }
  std::size_t facet_count() const { return facets_.size(); }

  /// Chart-v exponent vector of the monomial for lattice point m of Delta:
  /// alpha = E_v^{-1} (m - v); entries are nonnegative for m in Delta.
  Eigen::VectorXi chart_exponents(int chart, const Eigen::VectorXi& m) const;

  /// Winding transition: a loop with winding vector a in chart `from` has
  /// winding T a in chart `to`; T = E_to^T E_from^{-T}, unimodular.
  Eigen::MatrixXi winding_transition(int from, int to) const;

  /// Moment-polytope point of a chart log-radius vector under the supplied
  /// ambient moment coordinates (gradient of the chart potential).
  Eigen::VectorXd embed_moment(int chart, const Eigen::VectorXd& rho) const;

  /// Distances on the base polytope (Euclidean in M_R).
  double distance_to_vertices(const Eigen::VectorXd& m) const;
  double distance_to_codim2_skeleton(const Eigen::VectorXd& m) const;
  double edge_length_scale() const;

  /// Codimension-2 faces (closures of the singular toric strata), each with
  /// an adjacent chart and the two chart coordinates that vanish on it.
  struct Codim2Face {
    std::vector<int> vertex_ids;  // vertices of Delta on the face
    int chart;                    // an adjacent vertex chart
    int coord_a, coord_b;         // vanishing coordinates in that chart
  };
  const std::vector<Codim2Face>& codim2_faces() const { return codim2_; }

  /// Facet ids adjacent to a vertex / containing a codim-2 face.
  const std::vector<int>& vertex_facets(int vertex) const {
    return vertex_facets_[vertex];
  }

  int nearest_vertex(const Eigen::VectorXd& m) const;

 private:
  void validate_weights() const;
  void build_charts();
  void build_codim2();

  int dim_;
  std::vector<Eigen::VectorXi> vertices_;
  std::vector<std::pair<Eigen::VectorXi, int>> facets_;
  Eigen::VectorXi m_o_;
  std::vector<Eigen::VectorXi> delta0_;
  std::map<std::vector<int>, double> weights_;
  std::vector<VertexChart> charts_;
  std::vector<std::vector<int>> vertex_facets_;
  std::vector<Codim2Face> codim2_;
};

/// Distance from a point to the convex hull of simplex vertices (exact,
/// recursive face projection; the preset polytopes are simplices).
double distance_to_simplex(const Eigen::VectorXd& p,
                           const std::vector<Eigen::VectorXd>& verts);

}  // namespace lagfib

#endif
