#include "relmaj/scalar.hpp"

#include "relmaj/errors.hpp"

namespace relmaj {

const Rational& Scalar::rational() const {
  if (!is_exact())
    throw_error(ErrorKind::IrrationalInput, "float-backend scalar where an exact rational is required");
  return std::get<Rational>(v_);
}

}  // namespace relmaj
