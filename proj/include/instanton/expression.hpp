#pragma once

// Space expressions for character queries:
//
//   expr   := factor ('*' factor)*
//   factor := 'S(' int ')' | 'V(' int ')'
//           | ('Sym2' | 'Wedge2' | 'Lambda2' | 'Dual') '(' expr ')'
//           | '(' expr ')'
//
// e.g. "S(0)*S(0)*Sym2(V(0))".

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "instanton/rep.hpp"

namespace instanton::rep {

class ExpressionError : public std::runtime_error {
 public:
  ExpressionError(std::size_t position, const std::string& message)
      : std::runtime_error("position " + std::to_string(position) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Character expression_character(std::string_view expr);

}  // namespace instanton::rep
