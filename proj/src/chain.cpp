#include "convexchains/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "convexchains/errors.hpp"

namespace convexchains {

VertexMap::VertexMap(std::initializer_list<std::pair<const Direction, std::int64_t>> init) {
  for (const auto& [d, k] : init) set(d, k);
}

void VertexMap::set(Direction d, std::int64_t k) {
  if (!is_direction(d.x1, d.x2)) throw DomainError("VertexMap: key is not a primitive direction");
  if (k < 0) throw DomainError("VertexMap: negative multiplicity");
  if (k == 0) {
    entries_.erase(d);
  } else {
    entries_[d] = k;
  }
}

void VertexMap::add(Direction d, std::int64_t k) { set(d, (*this)[d] + k); }

std::int64_t VertexMap::operator[](const Direction& d) const {
  const auto it = entries_.find(d);
  return it == entries_.end() ? 0 : it->second;
}

ConvexChain::ConvexChain() : vertices_{LatticePoint{0, 0}} {}

ConvexChain::ConvexChain(std::vector<LatticePoint> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty() || vertices_.front() != LatticePoint{0, 0}) {
    throw DomainError("ConvexChain: must start at (0,0)");
  }
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const std::int64_t dx = vertices_[i].x - vertices_[i - 1].x;
    const std::int64_t dy = vertices_[i].y - vertices_[i - 1].y;
    if (dx < 0 || dy < 0) throw DomainError("ConvexChain: coordinates must be nondecreasing");
    if (dx == 0 && dy == 0) throw DomainError("ConvexChain: zero-length side");
    if (i >= 2) {
      const std::int64_t px = vertices_[i - 1].x - vertices_[i - 2].x;
      const std::int64_t py = vertices_[i - 1].y - vertices_[i - 2].y;
      // slope(prev) < slope(cur)
      if (!(py * dx < dy * px)) throw DomainError("ConvexChain: side slopes must strictly increase");
    }
  }
}

ConvexChain decode(const VertexMap& nu) {
  std::vector<std::pair<Direction, std::int64_t>> sides(nu.begin(), nu.end());
  std::sort(sides.begin(), sides.end(),
            [](const auto& a, const auto& b) { return slope_less(a.first, b.first); });
  std::vector<LatticePoint> vertices{LatticePoint{0, 0}};
  vertices.reserve(sides.size() + 1);
  for (const auto& [d, k] : sides) {
    const LatticePoint last = vertices.back();
    vertices.push_back(LatticePoint{last.x + k * d.x1, last.y + k * d.x2});
  }
  return ConvexChain(std::move(vertices));
}

VertexMap encode(const ConvexChain& chain) {
  VertexMap nu;
  const auto& v = chain.vertices();
  for (std::size_t i = 1; i < v.size(); ++i) {
    const std::int64_t dx = v[i].x - v[i - 1].x;
    const std::int64_t dy = v[i].y - v[i - 1].y;
    const std::int64_t g = std::gcd(dx, dy);
    nu.set(Direction{dx / g, dy / g}, g);
  }
  return nu;
}

ChainStats stats(const VertexMap& nu) {
  ChainStats s;
  for (const auto& [d, k] : nu) {
    s.endpoint.x += k * d.x1;
    s.endpoint.y += k * d.x2;
    s.euclidean_length += static_cast<double>(k) *
                          std::hypot(static_cast<double>(d.x1), static_cast<double>(d.x2));
  }
  s.vertex_count = static_cast<std::int64_t>(nu.support_size());
  return s;
}

std::string to_csv(const ConvexChain& chain) {
  std::ostringstream os;
  for (const auto& p : chain.vertices()) os << p.x << ',' << p.y << '\n';
  return os.str();
}

ConvexChain chain_from_csv(std::string_view text) {
  std::vector<LatticePoint> pts;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("chain CSV: expected 'x,y', got '" + line + "'");
    try {
      std::size_t used_x = 0, used_y = 0;
      const std::string xs = line.substr(0, comma), ys = line.substr(comma + 1);
      const std::int64_t x = std::stoll(xs, &used_x);
      const std::int64_t y = std::stoll(ys, &used_y);
      if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("trailing");
      pts.push_back({x, y});
    } catch (const std::logic_error&) {
      throw DomainError("chain CSV: malformed line '" + line + "'");
    }
  }
  return ConvexChain(std::move(pts));
}

nlohmann::json to_json(const VertexMap& nu) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [d, k] : nu) j[std::to_string(d.x1) + "," + std::to_string(d.x2)] = k;
  return j;
}

VertexMap vertex_map_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("vertex map JSON: expected an object");
  VertexMap nu;
  for (const auto& [key, value] : j.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos || !value.is_number_integer()) {
      throw DomainError("vertex map JSON: bad entry '" + key + "'");
    }
    std::int64_t x1 = 0, x2 = 0;
    try {
      x1 = std::stoll(key.substr(0, comma));
      x2 = std::stoll(key.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw DomainError("vertex map JSON: bad key '" + key + "'");
    }
    const auto k = value.get<std::int64_t>();
    if (k <= 0) throw DomainError("vertex map JSON: multiplicities must be positive");
    nu.set(make_direction(x1, x2), k);
  }
  return nu;
}

}  // namespace convexchains
