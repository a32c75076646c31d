#include "linkcomm/resolution.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "linkcomm/errors.hpp"

namespace linkcomm {

namespace {
std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}
}  // namespace

Resolution::Resolution(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num <= 0 || num >= den) throw std::invalid_argument("resolution must lie in (0, 1)");
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
  if (!is_standard()) warn("non-standard resolution " + str());
}

bool Resolution::is_standard() const {
  for (const auto& r : {std::pair{1, 20}, {1, 10}, {1, 5}, {1, 4}, {1, 3}})
    if (num_ == r.first && den_ == r.second) return true;
  return false;
}

Resolution Resolution::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Resolution(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) throw std::invalid_argument("resolution must be a fraction: " + std::string(text));
  const auto frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 12) throw std::invalid_argument("bad resolution: " + std::string(text));
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t whole = dot == 0 ? 0 : parse_int(text.substr(0, dot));
  return Resolution(whole * den + parse_int(frac), den);
}

std::vector<Resolution> standard_schedule() {
  return {Resolution(1, 20), Resolution(1, 10), Resolution(1, 5), Resolution(1, 4), Resolution(1, 3)};
}

std::vector<Resolution> parse_schedule(std::string_view text) {
  std::vector<Resolution> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(Resolution::parse(text.substr(start, comma - start)));
    start = comma + 1;
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i - 1] < out[i])) throw std::invalid_argument("schedule must be strictly increasing");
  return out;
}

std::string schedule_str(const std::vector<Resolution>& schedule) {
  std::string s;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i) s += ',';
    s += schedule[i].str();
  }
  return s;
}

}  // namespace linkcomm
