#pragma once

// Root-count bounds for gradient systems of H-hidden-layer linear networks
// in n variables: the classical Bezout count (2H+1)^n, exact, and the
// Dedieu-Malajovich bound sqrt(2) * (2H+1)^((n+1)/2).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dln {

// Minimal arbitrary-precision unsigned integer: enough for exact powers and
// decimal printing.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  static BigUint from_u64(std::uint64_t v);

  BigUint& mul_small(std::uint32_t f);
  static BigUint pow(std::uint32_t base, unsigned exp);

  bool fits_u64() const;
  std::uint64_t to_u64() const;  // throws std::overflow_error if too large
  double to_double() const;
  std::string to_string() const;

  bool operator==(const BigUint&) const = default;
  // -1, 0, 1 comparison.
  int cmp(const BigUint& o) const;

 private:
  std::vector<std::uint32_t> limbs_;  // little-endian base 2^32
};

// Exact (2H+1)^n.
BigUint cbb(int H, int n);

// sqrt(2) * (2H+1)^((n+1)/2) as a double; throws std::range_error on
// overflow past the double range.
double dedieu_malajovich(int H, int n);
std::uint64_t dedieu_malajovich_rounded(int H, int n);

struct BoundReport {
  int H = 0;
  int n = 0;
  BigUint cbb;
  double ndm_raw = 0.0;
  std::uint64_t ndm_rounded = 0;
  // Published polyhedral (BKK) reference value, if supplied in config;
  // never computed here.
  std::optional<std::uint64_t> published_bkk;
};

BoundReport bound_report(int H, int n, std::optional<std::uint64_t> published_bkk = {});

// Aligned text rendering of one or more reports.
std::string bounds_table(const std::vector<BoundReport>& reports);

}  // namespace dln
