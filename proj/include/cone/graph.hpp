#pragma once

#include <string_view>

namespace cone {

/// Tree on which the process runs. Td: every vertex has d+1 neighbours.
/// TdPlus: Td with one neighbour's subtree of the origin removed, so the
/// origin has d neighbours and every vertex sees d children.
enum class Graph { Td, TdPlus };

constexpr std::string_view to_string(Graph g) {
  return g == Graph::Td ? "td" : "tdplus";
}

}  // namespace cone
