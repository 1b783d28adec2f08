#include "cone/environment.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace cone {

HeteroEnvironment::HeteroEnvironment(std::vector<RadiusDistribution> prefix,
                                     TailRule tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  if (prefix_.empty()) {
    throw std::invalid_argument("environment needs at least one depth");
  }
  if (tail_.kind == TailRule::Kind::ConstantLast) tail_.period = 1;
  if (tail_.period == 0 || tail_.period > prefix_.size()) {
    throw std::invalid_argument("periodic tail length must be in [1, prefix size]");
  }
  for (std::size_t z = 0; z < prefix_.size(); ++z) {
    if (!(prefix_[z].p0() < 1.0)) {
      throw std::invalid_argument("depth " + std::to_string(z) +
                                  ": P[R = 0] must be < 1");
    }
  }
}

HeteroEnvironment HeteroEnvironment::homogeneous(RadiusDistribution dist) {
  return HeteroEnvironment({std::move(dist)}, TailRule::constant());
}

std::size_t HeteroEnvironment::periodic_from() const {
  return prefix_.size() - tail_.period;
}

std::size_t HeteroEnvironment::period() const { return tail_.period; }

const RadiusDistribution& HeteroEnvironment::at(std::size_t depth) const {
  if (depth < prefix_.size()) return prefix_[depth];
  const std::size_t start = periodic_from();
  return prefix_[start + (depth - start) % tail_.period];
}

HeteroEnvironment parse_environment(std::istream& in) {
  std::vector<RadiusDistribution> prefix;
  TailRule tail;
  bool saw_tail = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (saw_tail) {
      throw std::invalid_argument(where() + "content after the tail line");
    }
    if (body.rfind("tail:", 0) == 0) {
      std::string rule = body.substr(5);
      rule.erase(0, rule.find_first_not_of(' '));
      if (rule == "constant") {
        tail = TailRule::constant();
      } else if (rule.rfind("periodic=", 0) == 0) {
        std::size_t used = 0;
        long k = 0;
        try {
          k = std::stol(rule.substr(9), &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != rule.size() - 9 || k < 1) {
          throw std::invalid_argument(where() + "bad periodic tail '" + rule + "'");
        }
        tail = TailRule::periodic(static_cast<std::size_t>(k));
      } else {
        throw std::invalid_argument(where() + "unknown tail rule '" + rule + "'");
      }
      saw_tail = true;
      continue;
    }
    try {
      prefix.push_back(parse_dist(body));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where() + e.what());
    }
  }
  return HeteroEnvironment(std::move(prefix), tail);
}

HeteroEnvironment parse_environment(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_environment(in);
}

}  // namespace cone
