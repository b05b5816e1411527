#pragma once

#include <stdexcept>
#include <string>

namespace hallcond {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HALLCOND_ERROR(Name)                      \
  struct Name : Error {                           \
    explicit Name(const std::string& what)        \
        : Error(std::string(#Name ": ") + what) {} \
  }

HALLCOND_ERROR(RegionEmpty);
HALLCOND_ERROR(IndexError);
HALLCOND_ERROR(SizeError);
HALLCOND_ERROR(ModelError);
HALLCOND_ERROR(GeometryError);
HALLCOND_ERROR(DegenerateGroundState);
HALLCOND_ERROR(NumericalError);
HALLCOND_ERROR(GaplessError);
HALLCOND_ERROR(ParamError);
HALLCOND_ERROR(StateError);
HALLCOND_ERROR(IntegrationError);
HALLCOND_ERROR(ConfigError);

#undef HALLCOND_ERROR

}  // namespace hallcond
