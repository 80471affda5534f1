#include "subwave/quadrature.hpp"
