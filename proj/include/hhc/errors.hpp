#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hhc {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dataset parsing
struct SchemaError : Error { using Error::Error; };
struct RefError : Error { using Error::Error; };
struct ValueError : Error { using Error::Error; };

// Precedence graph
struct CycleError : Error {
  std::vector<int> cycle;  // closed walk, first id repeated at the end
  CycleError(const std::string& msg, std::vector<int> c)
      : Error(msg), cycle(std::move(c)) {}
};

// Line balancing
struct InfeasibleError : Error {
  int task_id = 0;
  InfeasibleError(const std::string& msg, int id) : Error(msg), task_id(id) {}
};
struct BudgetError : Error { using Error::Error; };

// Simulation
struct ConfigError : Error { using Error::Error; };

// Safety queries
struct InvariantError : Error { using Error::Error; };

}  // namespace hhc
