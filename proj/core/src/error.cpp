#include "shuttle/error.hpp"

namespace shuttle {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Escape:
      return 3;
    case ErrorKind::BoundaryContamination:
    case ErrorKind::IllConditioned:
    case ErrorKind::NumericalQuality:
      return 4;
  }
  return 1;
}

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace shuttle
