#include "dln/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dln {

BigUint BigUint::from_u64(std::uint64_t v) {
  BigUint b;
  b.limbs_.clear();
  b.limbs_.push_back(static_cast<std::uint32_t>(v & 0xFFFFFFFFULL));
  if (v >> 32) b.limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
  return b;
}

BigUint& BigUint::mul_small(std::uint32_t f) {
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t prod = static_cast<std::uint64_t>(limb) * f + carry;
    limb = static_cast<std::uint32_t>(prod & 0xFFFFFFFFULL);
    carry = prod >> 32;
  }
  while (carry) {
    limbs_.push_back(static_cast<std::uint32_t>(carry & 0xFFFFFFFFULL));
    carry >>= 32;
  }
  if (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  return *this;
}

BigUint BigUint::pow(std::uint32_t base, unsigned exp) {
  BigUint r = from_u64(1);
  for (unsigned i = 0; i < exp; ++i) r.mul_small(base);
  return r;
}

bool BigUint::fits_u64() const { return limbs_.size() <= 2; }

std::uint64_t BigUint::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("BigUint does not fit in 64 bits");
  std::uint64_t v = limbs_[0];
  if (limbs_.size() == 2) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
  return v;
}

double BigUint::to_double() const {
  double v = 0.0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it)
    v = v * 4294967296.0 + static_cast<double>(*it);
  return v;
}

std::string BigUint::to_string() const {
  std::vector<std::uint32_t> work = limbs_;
  std::string digits;
  auto all_zero = [&] {
    return std::all_of(work.begin(), work.end(), [](std::uint32_t l) { return l == 0; });
  };
  if (all_zero()) return "0";
  while (!all_zero()) {
    std::uint64_t rem = 0;
    for (auto it = work.rbegin(); it != work.rend(); ++it) {
      const std::uint64_t cur = (rem << 32) | *it;
      *it = static_cast<std::uint32_t>(cur / 10);
      rem = cur % 10;
    }
    digits.push_back(static_cast<char>('0' + rem));
  }
  return {digits.rbegin(), digits.rend()};
}

int BigUint::cmp(const BigUint& o) const {
  if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size() ? -1 : 1;
  for (size_t i = limbs_.size(); i-- > 0;)
    if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
  return 0;
}

namespace {

void validate_hn(int H, int n) {
  if (H < 1) throw std::invalid_argument("H must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

}  // namespace

BigUint cbb(int H, int n) {
  validate_hn(H, n);
  return BigUint::pow(static_cast<std::uint32_t>(2 * H + 1), static_cast<unsigned>(n));
}

double dedieu_malajovich(int H, int n) {
  validate_hn(H, n);
  const double log_value =
      0.5 * std::log(2.0) + 0.5 * (n + 1) * std::log(static_cast<double>(2 * H + 1));
  if (log_value > std::log(std::numeric_limits<double>::max()))
    throw std::range_error("Dedieu-Malajovich bound overflows double");
  return std::exp(log_value);
}

std::uint64_t dedieu_malajovich_rounded(int H, int n) {
  const double v = dedieu_malajovich(H, n);
  if (v >= 1.8446744073709552e19)
    throw std::range_error("rounded Dedieu-Malajovich bound overflows 64 bits");
  return static_cast<std::uint64_t>(std::llround(v));
}

BoundReport bound_report(int H, int n, std::optional<std::uint64_t> published_bkk) {
  BoundReport r;
  r.H = H;
  r.n = n;
  r.cbb = cbb(H, n);
  r.ndm_raw = dedieu_malajovich(H, n);
  r.ndm_rounded = dedieu_malajovich_rounded(H, n);
  r.published_bkk = published_bkk;
  return r;
}

std::string bounds_table(const std::vector<BoundReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"H", "n", "CBB", "N_DM", "BKK(published)"});
  for (const auto& r : reports) {
    rows.push_back({std::to_string(r.H), std::to_string(r.n), r.cbb.to_string(),
                    std::to_string(r.ndm_rounded),
                    r.published_bkk ? std::to_string(*r.published_bkk) : "-"});
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      if (c + 1 < row.size()) out += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace dln
