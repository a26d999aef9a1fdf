// The library is header-only; this unit keeps every header compiling on its own.
#include <rankone/rankone.hpp>

namespace rankone {
const char* version() { return "0.1.0"; }
}  // namespace rankone
