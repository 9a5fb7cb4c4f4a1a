#include "conelab/bigfloat.hpp"

// Header-only for now; this TU pins the library symbol requirements.
namespace conelab {
namespace {
[[maybe_unused]] const BigFloat kZero{};
}
} // namespace conelab
