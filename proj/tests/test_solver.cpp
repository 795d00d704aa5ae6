#include "quintic/solver.hpp"
