#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "edgecert/types.hpp"

namespace edgecert {

/// Text record for kets and operators. Grammar (one field per line, in
/// this order, '#' lines and blank lines ignored before the data block):
///
///   locals: <d1> <d2> ... <dn>
///   cut: <c>                      (0 = no bipartite view)
///   kind: ket | operator
///   data:
///   <re> <im>                     ket: one "re im" pair per row, ambient rows
///   <re> <im> <re> <im> ...      operator: ambient pairs per row, ambient rows
///
/// Values are written with 17 significant digits, so write/read round-trips
/// are bit-exact.
using StateRecord = std::variant<Ket, Operator>;

void write_state(std::ostream& os, const Ket& psi);
void write_state(std::ostream& os, const Operator& op);
void write_state_file(const std::string& path, const StateRecord& record);

StateRecord read_state(std::istream& is);
StateRecord read_state_file(const std::string& path);

}  // namespace edgecert
