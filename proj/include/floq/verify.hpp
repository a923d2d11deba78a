#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "floq/medium.hpp"
#include "floq/runner.hpp"

namespace floq {

struct criterion_result {
  int index;
  std::string name;
  bool pass;
  std::string detail;
};

// the reference structure all built-in checks run against:
// unit cell (0.5, eps 4) + (0.5, eps 1), defect layer 0.8 wide at eps 2.25
crystal_spec golden_crystal();

// criteria 1..12 (13 needs the CLI binary and lives in the acceptance runner)
std::vector<criterion_result> run_verification();

csv_table verification_table(const std::vector<criterion_result>& results);

// prints one line per criterion; returns true iff all passed
bool report_verification(const std::vector<criterion_result>& results, std::ostream& os);

}  // namespace floq
