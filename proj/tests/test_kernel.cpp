#include "quintic/kernel.hpp"
