#pragma once

#include "ybh/common.hpp"
#include "ybh/finite_field.hpp"
#include "ybh/algebra.hpp"
#include "ybh/solution.hpp"
#include "ybh/sparse_matrix.hpp"
#include "ybh/complex.hpp"
#include "ybh/smith.hpp"
#include "ybh/homology.hpp"
#include "ybh/links.hpp"
#include "ybh/json.hpp"
