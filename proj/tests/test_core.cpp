#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include "maple/core/types.hpp"
TEST_CASE("smoke") { CHECK(maple::core::to_string(maple::core::Finding::stenosis) == "stenosis"); }
