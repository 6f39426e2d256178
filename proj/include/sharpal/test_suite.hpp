#pragma once

#include "sharpal/problem.hpp"

#include <vector>

namespace sharpal {

/// Ids of the bundled small test problems, 501 through 514.
std::vector<int> suite_ids();

/// Returns one of the bundled problems with its start point and reference
/// solution. Throws NotFoundError for ids outside 501..514.
Problem get_problem(int id);

}  // namespace sharpal
