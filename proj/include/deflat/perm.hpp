#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace deflat {

// Kinds of permutations that extend the shifts: Q types B, C, S and the Z
// types that move d-lines forward, reflected, or with mixed signs.
enum class PermKind { Shift, QB, QC, QS, ZFirst, ZSecond, ZThird };

struct PermSpec {
  PermKind kind = PermKind::Shift;
  std::int64_t d = 1;  // step of the Z kinds
};

std::string to_string(PermKind k);
// Accepts shift, B, C, S, first, second, third (case-insensitive).
PermKind parse_perm_kind(std::string_view name);
bool is_q_kind(PermKind k);
bool is_z_kind(PermKind k);

}  // namespace deflat
