#pragma once

// JSON renderings of groups and group ring elements (nlohmann::json).

#include <nlohmann/json.hpp>

#include "ybh/homology.hpp"
#include "ybh/links.hpp"

namespace ybh {

/// {"rank": r, "torsion": [2, 2, 4]}
inline nlohmann::json to_json(const AbelianGroupInvariants& g) {
  nlohmann::json torsion = nlohmann::json::array();
  for (const auto& d : g.torsion) {
    if (d <= Integer(std::numeric_limits<std::int64_t>::max())) torsion.push_back(static_cast<std::int64_t>(d));
    else torsion.push_back(d.str());
  }
  return {{"rank", g.free_rank}, {"torsion", torsion}};
}

inline AbelianGroupInvariants group_from_json(const nlohmann::json& j) {
  try {
    std::vector<Integer> orders;
    for (const auto& d : j.at("torsion")) {
      Integer v = d.is_string() ? Integer(d.get<std::string>()) : Integer(d.get<std::int64_t>());
      if (v < 2) throw ParseError("torsion coefficient must be >= 2");
      orders.push_back(v);
    }
    return AbelianGroupInvariants::from_cyclic_orders(j.at("rank").get<std::size_t>(), std::move(orders));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad group JSON: ") + e.what());
  }
}

/// {"0": 8, "1": 8}
inline nlohmann::json to_json(const GroupRingElement& g) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [v, c] : g.counts)
    if (c != 0) j[std::to_string(v)] = c;
  return j;
}

inline GroupRingElement group_ring_element_from_json(const nlohmann::json& j, std::uint64_t modulus) {
  if (!j.is_object()) throw ParseError("group ring element JSON must be an object");
  GroupRingElement g{modulus, {}};
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(key, &used);
    } catch (const std::exception&) {
      throw ParseError("bad group ring key '" + key + "'");
    }
    if (used != key.size() || v >= modulus) throw ParseError("bad group ring key '" + key + "'");
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0))
      throw ParseError("group ring count must be a non-negative integer");
    if (const auto c = value.get<std::uint64_t>(); c != 0) g.counts[v] = c;
  }
  return g;
}

}  // namespace ybh
