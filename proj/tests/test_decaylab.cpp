#include "quintic/decaylab.hpp"
