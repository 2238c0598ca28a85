#pragma once

#include <gtest/gtest.h>

#include "kscatter/verify.hpp"

namespace kt {

using namespace kscatter;

inline Seed rank2_seed(std::int64_t s) { return Seed(SkewForm(2, {0, s, -s, 0}), {0, 1}); }
inline Seed a2() { return rank2_seed(1); }
inline Seed kronecker(std::int64_t s) { return rank2_seed(s); }

// Completed diagrams are reused across tests in one binary.
inline const ScatteringDiagram& completed(std::int64_t s, std::int64_t k) {
  static std::map<std::pair<std::int64_t, std::int64_t>, ScatteringDiagram> cache;
  auto it = cache.find({s, k});
  if (it == cache.end()) it = cache.emplace(std::pair{s, k}, complete(rank2_seed(s), k)).first;
  return it->second;
}

inline LatticeVector v2(std::int64_t a, std::int64_t b) { return LatticeVector{a, b}; }
inline RationalPoint q2(const char* text) { return parse_rational_point(text); }

inline const Wall* find_wall(const ScatteringDiagram& d, const LatticeVector& direction, bool initial) {
  for (const auto& w : d.walls())
    if (w.direction() == direction && w.is_initial() == initial) return &w;
  return nullptr;
}

#define EXPECT_CODE(stmt, expected)                              \
  do {                                                           \
    try {                                                        \
      stmt;                                                      \
      ADD_FAILURE() << "no exception from " #stmt;               \
    } catch (const ::kscatter::Error& e) {                       \
      EXPECT_EQ(e.code(), expected) << e.what();                 \
    }                                                            \
  } while (0)

}  // namespace kt
