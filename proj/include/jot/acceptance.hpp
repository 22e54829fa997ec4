#ifndef JOT_ACCEPTANCE_HPP
#define JOT_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>

namespace jot {

// Runs the full acceptance battery, printing one pass/fail line per
// criterion; returns the number of failed criteria.
int run_acceptance(std::uint64_t seed, std::ostream& out);

}  // namespace jot

#endif
