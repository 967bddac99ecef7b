// placeholder
#include "doctest.h"
