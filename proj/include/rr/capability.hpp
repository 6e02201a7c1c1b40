#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rr/ir.hpp"
#include "rr/tasks.hpp"

namespace rr {

struct CapabilityMatrix {
  std::map<std::pair<Level, TaskId>, Outcome> cells;
  std::vector<unsigned> seeds_used;
};

class MissingLevel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<unsigned> kDefaultSeeds{0, 1, 2};

// A cell is Solved iff the task is Solved for every seed; otherwise it holds
// the first unsolved outcome in seed order.
CapabilityMatrix build_matrix(const std::map<Level, UnitSet>& kb, const std::vector<unsigned>& seeds = kDefaultSeeds,
                              const RunOptions& options = {});

// Frozen expected outcome kind per cell.
OutcomeKind expected_outcome(Level level, TaskId task);

// One line per differing or missing cell: `level<TAB>task<TAB>expected<TAB>got`.
std::vector<std::string> compare_expected(const CapabilityMatrix& m);

std::string render_table(const CapabilityMatrix& m);
std::string render_tsv(const CapabilityMatrix& m);  // `level<TAB>task<TAB>outcome`

class NotE3 : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string verbalize(const ConceptUnit& unit);

}  // namespace rr
