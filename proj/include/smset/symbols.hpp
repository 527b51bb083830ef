#pragma once

#include <cstdint>
#include <string>

namespace smset {

/// Interned identifier. Comparisons that affect canonical term order always
/// go through the name string, never the numeric id, so results do not depend
/// on interning order.
using Sym = std::uint32_t;

Sym intern(const std::string& name);
const std::string& sym_name(Sym s);
bool sym_known(const std::string& name);

} // namespace smset
