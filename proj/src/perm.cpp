#include "deflat/perm.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace deflat {

std::string to_string(PermKind k) {
  switch (k) {
    case PermKind::Shift: return "shift";
    case PermKind::QB: return "B";
    case PermKind::QC: return "C";
    case PermKind::QS: return "S";
    case PermKind::ZFirst: return "first";
    case PermKind::ZSecond: return "second";
    case PermKind::ZThird: return "third";
  }
  return "?";
}

PermKind parse_perm_kind(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  if (n == "shift" || n == "shifts") return PermKind::Shift;
  if (n == "b") return PermKind::QB;
  if (n == "c") return PermKind::QC;
  if (n == "s") return PermKind::QS;
  if (n == "first") return PermKind::ZFirst;
  if (n == "second") return PermKind::ZSecond;
  if (n == "third") return PermKind::ZThird;
  throw std::invalid_argument("unknown permutation kind '" + std::string(name) + "'");
}

bool is_q_kind(PermKind k) { return k == PermKind::Shift || k == PermKind::QB || k == PermKind::QC || k == PermKind::QS; }
bool is_z_kind(PermKind k) {
  return k == PermKind::Shift || k == PermKind::ZFirst || k == PermKind::ZSecond || k == PermKind::ZThird;
}

}  // namespace deflat
