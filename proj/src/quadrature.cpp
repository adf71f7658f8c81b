#include "cbs/quadrature.hpp"
