#pragma once

#include "diophantine/integer.hpp"
#include "diophantine/equation.hpp"
#include "diophantine/parser.hpp"
#include "diophantine/count.hpp"
#include "diophantine/growth.hpp"
#include "diophantine/bounds.hpp"
#include "diophantine/families.hpp"
#include "diophantine/experiment.hpp"
