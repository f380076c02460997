#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace treecount {

// Edge directions of the binary encoding. FirstChild/NextSibling are the
// forward moves, Parent/PrevSibling their converses.
enum class Modality : std::uint8_t { FirstChild = 0, NextSibling = 1, Parent = 2, PrevSibling = 3 };

inline constexpr std::array<Modality, 4> kAllModalities = {
    Modality::FirstChild, Modality::NextSibling, Modality::Parent, Modality::PrevSibling};

constexpr Modality inverse(Modality m) {
  switch (m) {
    case Modality::FirstChild: return Modality::Parent;
    case Modality::NextSibling: return Modality::PrevSibling;
    case Modality::Parent: return Modality::FirstChild;
    case Modality::PrevSibling: return Modality::NextSibling;
  }
  return m;
}

constexpr bool is_forward(Modality m) {
  return m == Modality::FirstChild || m == Modality::NextSibling;
}

constexpr int index_of(Modality m) { return static_cast<int>(m); }

// Concrete-syntax names: fc, ns, pa, ps.
constexpr std::string_view keyword(Modality m) {
  switch (m) {
    case Modality::FirstChild: return "fc";
    case Modality::NextSibling: return "ns";
    case Modality::Parent: return "pa";
    case Modality::PrevSibling: return "ps";
  }
  return "?";
}

inline std::optional<Modality> modality_from_keyword(std::string_view s) {
  for (Modality m : kAllModalities)
    if (keyword(m) == s) return m;
  return std::nullopt;
}

}  // namespace treecount
