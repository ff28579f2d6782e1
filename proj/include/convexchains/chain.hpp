#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "convexchains/lattice.hpp"

namespace convexchains {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  auto operator<=>(const LatticePoint&) const = default;
};

// Finitely supported multiplicity function on the direction set. Zero
// multiplicities are never stored.
class VertexMap {
 public:
  using Storage = std::map<Direction, std::int64_t>;

  VertexMap() = default;
  VertexMap(std::initializer_list<std::pair<const Direction, std::int64_t>> init);

  // Sets the multiplicity of d; k = 0 removes it, k < 0 throws DomainError.
  void set(Direction d, std::int64_t k);
  void add(Direction d, std::int64_t k);
  std::int64_t operator[](const Direction& d) const;

  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  Storage::const_iterator begin() const noexcept { return entries_.begin(); }
  Storage::const_iterator end() const noexcept { return entries_.end(); }

  bool operator==(const VertexMap&) const = default;

 private:
  Storage entries_;
};

// Convex polygonal line from the origin with sides in [0, pi/2] taken in
// strictly increasing slope. Constructed only through the validating
// constructor.
class ConvexChain {
 public:
  ConvexChain();  // the single-vertex chain at the origin
  explicit ConvexChain(std::vector<LatticePoint> vertices);

  const std::vector<LatticePoint>& vertices() const noexcept { return vertices_; }
  LatticePoint endpoint() const noexcept { return vertices_.back(); }
  std::size_t side_count() const noexcept { return vertices_.size() - 1; }

  bool operator==(const ConvexChain&) const = default;

 private:
  std::vector<LatticePoint> vertices_;
};

struct ChainStats {
  LatticePoint endpoint;
  std::int64_t vertex_count = 0;  // number of distinct side directions
  double euclidean_length = 0.0;
};

ConvexChain decode(const VertexMap& nu);
VertexMap encode(const ConvexChain& chain);
ChainStats stats(const VertexMap& nu);

// Serialization: one "x,y" per line for chains; {"x1,x2": k} for maps.
std::string to_csv(const ConvexChain& chain);
ConvexChain chain_from_csv(std::string_view text);
nlohmann::json to_json(const VertexMap& nu);
VertexMap vertex_map_from_json(const nlohmann::json& j);

}  // namespace convexchains
