#pragma once
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "polylc/complex.hpp"
#include "polylc/freudenthal.hpp"

namespace polylc {

struct ManifoldSpec {
  enum class Kind { Sphere3, S2xS1, Torus3, VoxelFile, Constant };
  Kind kind = Kind::Sphere3;
  std::vector<Rational> params;  // R^2 | a,b | a,b,c | constant value
  std::string path;

  static ManifoldSpec sphere3(const Rational& R2 = 1);
  static ManifoldSpec s2xs1(const Rational& a = Rational(5, 8), const Rational& b = Rational(3, 8));
  static ManifoldSpec torus3(const Rational& a = Rational(7, 8), const Rational& b = Rational(1, 2),
                             const Rational& c = Rational(3, 8));
  static ManifoldSpec voxel_file(const std::string& path);
  static ManifoldSpec constant(const Rational& v);
  // "s3", "s3:R2", "s2xs1:a,b", "t3:a,b,c", "file:PATH"; ParseError / InvalidArgument
  static ManifoldSpec parse(const std::string& s);
  std::string str() const;

  // exact sign of the implicit function at a point of R^4
  int sign_at(const std::vector<Rational>& x) const;
  double value_at(const std::vector<double>& x) const;
};

struct VoxelSet {
  std::vector<Vec4> cubes;  // sorted base points
  int resolution = 1;
};

struct VoxelizeOptions {
  std::optional<double> epsilon;  // also include cubes where some sample has |f| < epsilon
};

VoxelSet voxelize(const ManifoldSpec& spec, int N, const VoxelizeOptions& opt = {});
VoxelSet read_voxel_file(const std::string& path);  // ParseError
void write_voxel_file(const std::string& path, const VoxelSet& V);
// connected through shared 3-faces
bool voxels_connected(const std::vector<Vec4>& cubes);

struct CellProvenance {
  FSimplex simplex;       // the Freudenthal simplex the cell is dual to
  std::uint8_t in_mask = 0;  // bit i: i-th vertex of simplex.vertices() lies in M
};

struct BoundaryComplex {
  PolyComplex complex;
  std::vector<CellProvenance> provenance;  // per cell
  int component = 0;
  int component_total = 1;  // components of the whole boundary
  std::size_t maximal_count() const;
};

struct BoundaryOptions {
  std::optional<Box> box;  // working box; IncompleteStar if a simplex leaves it
  std::optional<int> only_component;  // materialize just this component (index in sorted order, negative from the end)
};

// Components sorted by number of maximal cells (ascending), ties by least cell id.
// With only_component set the result holds that single component.
std::vector<BoundaryComplex> boundary_dual(const VoxelSet& V, const BoundaryOptions& opt = {});

struct Census {
  std::size_t truncated_octahedra = 0;
  std::size_t hexagonal_prisms = 0;
  std::size_t total() const { return truncated_octahedra + hexagonal_prisms; }
};
Census census(const BoundaryComplex& B);  // UnknownCellType

nlohmann::json boundary_to_json(const BoundaryComplex& B);
BoundaryComplex boundary_from_json(const nlohmann::json& j);  // provenance optional

}  // namespace polylc
