#include <doctest.h>
#include "dsigma/scalar.hpp"
using namespace dsigma;
TEST_CASE("scalar smoke") {
    ScalarExpr x = ScalarExpr::variable(2, 0);
    ScalarExpr y = ScalarExpr::variable(2, 1);
    CHECK((x * y - y * x).is_zero());
}
