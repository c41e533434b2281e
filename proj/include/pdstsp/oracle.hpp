#ifndef PDSTSP_ORACLE_HPP
#define PDSTSP_ORACLE_HPP

#include "pdstsp/core.hpp"

#include <stdexcept>

namespace pdstsp {

struct OracleLimits {
  int max_customers = 14;
  int max_eligible = 16;
};

struct OracleResult {
  Solution solution;
  double alpha = 0.0;
  bool proven = false;
};

/// Instance larger than the oracle limits.
class OracleLimitExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact optimum by enumerating drone sets in Gray-code order: Held-Karp for
/// the truck (one table for every subset) and exact P||Cmax for the drones.
OracleResult brute_force(const Instance& instance,
                         const OracleLimits& limits = {});

}  // namespace pdstsp

#endif  // PDSTSP_ORACLE_HPP
