#include "treeshift/measures.hpp"

namespace treeshift {

AtomFunction AtomFunction::parse(std::string_view text) {
  if (text == "id" || text == "identity") return identity();
  if (text.starts_with("q:")) return psi(parse_rational(text.substr(2)));
  if (text.starts_with("const:")) return constant(parse_rational(text.substr(6)));
  throw std::invalid_argument("unknown atom function '" + std::string(text) +
                              "' (expected id, q:VALUE or const:VALUE)");
}

std::string AtomFunction::name() const {
  switch (kind_) {
    case Kind::identity: return "id";
    case Kind::scale: return "q:" + to_string(param_);
    case Kind::constant: return "const:" + to_string(param_);
  }
  return "?";
}

}  // namespace treeshift
