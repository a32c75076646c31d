#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace linkcomm {

// Resolution r as an exact fraction in (0, 1). A link set L is judged
// against every set within ceil(r |L|) link flips; the same count bounds
// how far a tunnel may climb before the search gives up.
class Resolution {
 public:
  Resolution() = default;
  // Throws std::invalid_argument outside (0, 1); warns when r is not one of
  // the standard schedule values.
  Resolution(std::int64_t num, std::int64_t den);

  // "1/3", "0.25".
  static Resolution parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_standard() const;

  // ceil(r * size), at least 1 for nonempty sets.
  std::int64_t radius(std::int64_t size) const { return (num_ * size + den_ - 1) / den_; }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  friend bool operator==(const Resolution& a, const Resolution& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Resolution& a, const Resolution& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 3;
};

// 1/20, 1/10, 1/5, 1/4, 1/3.
std::vector<Resolution> standard_schedule();
std::vector<Resolution> parse_schedule(std::string_view text);
std::string schedule_str(const std::vector<Resolution>& schedule);

}  // namespace linkcomm
