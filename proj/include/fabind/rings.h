//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_RINGS_H_
#define FABIND_RINGS_H_

#include <utility>
#include <vector>

namespace fabind {

// Smallest set of smallest rings of an undirected graph. Candidates are the
// shortest cycle through each edge; they are accepted smallest-first while
// linearly independent over GF(2), up to the cycle rank E - V + C. Each ring
// is returned as atoms in cycle order starting from its smallest index.
std::vector<std::vector<int>> find_sssr(int num_nodes,
                                        const std::vector<std::pair<int, int>> &edges);

}  // namespace fabind

#endif  // FABIND_RINGS_H_
