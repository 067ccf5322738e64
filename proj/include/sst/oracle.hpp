#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "sst/core.hpp"
#include "sst/parallel.hpp"

namespace sst {

/// Words over an alphabet with min_len <= |w| <= max_len, indexed in
/// length-lexicographic order (letters ordered as declared).
class WordSpace {
 public:
  WordSpace(std::string alphabet, std::size_t min_len, std::size_t max_len);

  /// Number of words (saturates at 2^62).
  std::size_t size() const { return size_; }
  Word at(std::size_t index) const;

 private:
  std::string alphabet_;
  std::size_t min_len_;
  std::vector<std::size_t> level_start_;  // first index of each length
  std::size_t size_ = 0;
};

struct OracleReading {
  std::uint64_t maximum = 0;
  Word witness;  // length-lex first input reaching the maximum
  std::size_t inputs_scanned = 0;
};

/// Brute-force readings over every input 1 <= |u| <= max_len. The input
/// space and each per-input computation are checked against `budget`.
OracleReading valuedness_oracle(const Sst& sst, std::size_t max_len,
                                std::size_t budget = kDefaultBudget,
                                Exec exec = Exec::Parallel);
OracleReading ambiguity_oracle(const Sst& sst, std::size_t max_len,
                               std::size_t budget = kDefaultBudget,
                               Exec exec = Exec::Parallel);

/// Reference versions: nested loops over lengths and words, enumerating and
/// evaluating every accepting run. Kept for cross-checking the kernels.
OracleReading valuedness_oracle_reference(const Sst& sst, std::size_t max_len,
                                          std::size_t budget = kDefaultBudget);
OracleReading ambiguity_oracle_reference(const Sst& sst, std::size_t max_len,
                                         std::size_t budget = kDefaultBudget);

}  // namespace sst
