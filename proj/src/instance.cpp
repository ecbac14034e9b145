#include "fairalloc/instance.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace fairalloc {

Instance::Instance(std::vector<Value> values, std::vector<std::vector<ResourceId>> interest)
    : values_(std::move(values)), interest_(std::move(interest)) {
  for (std::size_t r = 0; r < values_.size(); ++r) {
    if (values_[r] < 0) throw std::invalid_argument("negative value for resource " + std::to_string(r));
  }
  interested_.assign(values_.size(), {});
  for (PlayerId p = 0; p < num_players(); ++p) {
    auto& list = interest_[p];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("duplicate resource in interest of player " + std::to_string(p));
    }
    for (ResourceId r : list) {
      if (r < 0 || r >= num_resources()) {
        throw std::invalid_argument("player " + std::to_string(p) + " references unknown resource " +
                                    std::to_string(r));
      }
      interested_[r].push_back(p);
    }
  }
}

bool Instance::interested(PlayerId p, ResourceId r) const {
  const auto& list = interest_[p];
  return std::binary_search(list.begin(), list.end(), r);
}

Value Instance::value_for(PlayerId p, std::span<const ResourceId> bundle) const {
  Value sum = 0;
  for (ResourceId r : bundle) {
    if (interested(p, r)) sum += values_[r];
  }
  return sum;
}

Value Instance::total_value() const { return std::accumulate(values_.begin(), values_.end(), Value{0}); }

namespace {

struct Line {
  int number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    auto t = trim(raw);
    if (!t.empty() && t.front() != '#') out.push_back({number, t});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, int line, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(tok) + "'");
  }
  return v;
}

/// Shared parser; `value_parser` turns one value token into a rational.
template <typename ValueParser>
std::pair<std::vector<Rational>, std::vector<std::vector<ResourceId>>> parse_raw(std::string_view text,
                                                                                  ValueParser value_parser) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "missing header");
  auto header = tokens(lines[0].text);
  if (header.size() != 2) throw ParseError(lines[0].number, "header must be '<players> <resources>'");
  auto n = to_int(header[0], lines[0].number, "player count");
  auto m = to_int(header[1], lines[0].number, "resource count");
  if (n < 0 || m < 0) throw ParseError(lines[0].number, "negative count");

  std::size_t next = 1;
  std::vector<Rational> values;
  bool has_values_line = next < lines.size() && lines[next].text.find(':') == std::string_view::npos;
  if (m > 0 || has_values_line) {
    if (!has_values_line) throw ParseError(next < lines.size() ? lines[next].number : lines[0].number + 1,
                                           "missing values line");
    const auto& vl = lines[next++];
    auto toks = tokens(vl.text);
    if (static_cast<std::int64_t>(toks.size()) != m) {
      throw ParseError(vl.number, "expected " + std::to_string(m) + " values, found " + std::to_string(toks.size()));
    }
    for (auto tok : toks) {
      Rational v = value_parser(tok, vl.number);
      if (v < 0) throw ParseError(vl.number, "negative value");
      values.push_back(v);
    }
  }

  std::vector<std::vector<ResourceId>> interest(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (; next < lines.size(); ++next) {
    const auto& line = lines[next];
    auto colon = line.text.find(':');
    if (colon == std::string_view::npos) throw ParseError(line.number, "malformed player line");
    auto pid = to_int(trim(line.text.substr(0, colon)), line.number, "player id");
    if (pid < 0 || pid >= n) throw ParseError(line.number, "unknown player " + std::to_string(pid));
    if (seen[pid]) throw ParseError(line.number, "duplicate player id " + std::to_string(pid));
    seen[pid] = true;
    auto& list = interest[pid];
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (auto tok : tokens(line.text.substr(colon + 1))) {
      auto r = to_int(tok, line.number, "resource id");
      if (r < 0 || r >= m) throw ParseError(line.number, "unknown resource " + std::to_string(r));
      if (used[r]) throw ParseError(line.number, "duplicate resource id " + std::to_string(r));
      used[r] = true;
      list.push_back(static_cast<ResourceId>(r));
    }
  }
  return {std::move(values), std::move(interest)};
}

}  // namespace

Instance parse_instance(std::string_view text) {
  auto [values, interest] = parse_raw(text, [](std::string_view tok, int line) {
    return Rational(to_int(tok, line, "value"));
  });
  std::vector<Value> ints;
  ints.reserve(values.size());
  for (const auto& v : values) ints.push_back(v.numerator());
  return Instance(std::move(ints), std::move(interest));
}

ScaledInstance parse_instance_scaled(std::string_view text) {
  auto [values, interest] = parse_raw(text, [](std::string_view tok, int line) {
    try {
      return parse_rational(tok);
    } catch (const std::invalid_argument&) {
      throw ParseError(line, "malformed value '" + std::string(tok) + "'");
    }
  });
  std::int64_t scale = 1;
  for (const auto& v : values) scale = std::lcm(scale, v.denominator());
  std::vector<Value> ints;
  ints.reserve(values.size());
  for (const auto& v : values) ints.push_back(v.numerator() * (scale / v.denominator()));
  return {Instance(std::move(ints), std::move(interest)), scale};
}

std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  out << inst.num_players() << ' ' << inst.num_resources() << '\n';
  for (ResourceId r = 0; r < inst.num_resources(); ++r) {
    if (r) out << ' ';
    out << inst.value(r);
  }
  out << '\n';
  for (PlayerId p = 0; p < inst.num_players(); ++p) {
    out << p << ':';
    for (ResourceId r : inst.interest(p)) out << ' ' << r;
    out << '\n';
  }
  return out.str();
}

Instance generate_random(int players, int resources, Value value_max, double interest_prob,
                         std::uint64_t seed) {
  if (players < 1 || resources < 1) throw std::invalid_argument("counts must be >= 1");
  if (value_max < 1) throw std::invalid_argument("value_max must be >= 1");
  if (!(interest_prob > 0.0 && interest_prob <= 1.0)) throw std::invalid_argument("interest_prob must be in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Value> values(resources);
  for (auto& v : values) v = 1 + static_cast<Value>(rng() % static_cast<std::uint64_t>(value_max));
  std::vector<std::vector<ResourceId>> interest(players);
  for (PlayerId p = 0; p < players; ++p) {
    for (ResourceId r = 0; r < resources; ++r) {
      double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (coin < interest_prob) interest[p].push_back(r);
    }
  }
  return Instance(std::move(values), std::move(interest));
}

void validate_allocation(const Instance& inst, const Allocation& alloc) {
  if (static_cast<int>(alloc.bundles.size()) != inst.num_players()) {
    throw AllocationError("allocation has " + std::to_string(alloc.bundles.size()) + " bundles for " +
                          std::to_string(inst.num_players()) + " players");
  }
  std::vector<PlayerId> owner(inst.num_resources(), -1);
  for (PlayerId p = 0; p < inst.num_players(); ++p) {
    for (ResourceId r : alloc.bundles[p]) {
      if (r < 0 || r >= inst.num_resources()) {
        throw AllocationError("unknown resource " + std::to_string(r) + " in bundle of player " + std::to_string(p));
      }
      if (owner[r] != -1) {
        throw AllocationError("resource " + std::to_string(r) + " assigned to players " + std::to_string(owner[r]) +
                              " and " + std::to_string(p));
      }
      if (!inst.interested(p, r)) {
        throw AllocationError("player " + std::to_string(p) + " is not interested in resource " + std::to_string(r));
      }
      owner[r] = p;
    }
  }
}

Value allocation_min_value(const Instance& inst, const Allocation& alloc) {
  validate_allocation(inst, alloc);
  Value best = std::numeric_limits<Value>::max();
  for (PlayerId p = 0; p < inst.num_players(); ++p) best = std::min(best, inst.value_for(p, alloc.bundles[p]));
  return inst.num_players() == 0 ? 0 : best;
}

bool verify_allocation(const Instance& inst, const Allocation& alloc, const Rational& threshold) {
  try {
    return at_least(allocation_min_value(inst, alloc), threshold);
  } catch (const AllocationError&) {
    return false;
  }
}

Allocation parse_allocation(std::string_view text, int num_players) {
  Allocation alloc;
  alloc.bundles.assign(num_players, {});
  std::vector<bool> seen(num_players, false);
  for (const auto& line : content_lines(text)) {
    auto colon = line.text.find(':');
    if (colon == std::string_view::npos) throw ParseError(line.number, "malformed allocation line");
    auto pid = to_int(trim(line.text.substr(0, colon)), line.number, "player id");
    if (pid < 0 || pid >= num_players) throw ParseError(line.number, "unknown player " + std::to_string(pid));
    if (seen[pid]) throw ParseError(line.number, "duplicate player id " + std::to_string(pid));
    seen[pid] = true;
    for (auto tok : tokens(line.text.substr(colon + 1))) {
      auto r = to_int(tok, line.number, "resource id");
      if (r < 0 || r > std::numeric_limits<ResourceId>::max()) {
        throw ParseError(line.number, "resource id out of range");
      }
      alloc.bundles[pid].push_back(static_cast<ResourceId>(r));
    }
  }
  return alloc;
}

std::string write_allocation(const Allocation& alloc) {
  std::ostringstream out;
  for (std::size_t p = 0; p < alloc.bundles.size(); ++p) {
    out << p << ':';
    for (ResourceId r : alloc.bundles[p]) out << ' ' << r;
    out << '\n';
  }
  return out.str();
}

}  // namespace fairalloc
