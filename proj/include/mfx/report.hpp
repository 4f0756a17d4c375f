#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace mfx {

// deterministic key/value report tree; identical inputs yield byte-identical
// output apart from the timing line, which the determinism contract excludes
struct Report {
  std::string title;
  std::vector<std::pair<std::string, std::string>> kv;
  std::vector<Report> children;

  explicit Report(std::string t = "") : title(std::move(t)) {}

  void put(const std::string& k, const std::string& v) { kv.push_back({k, v}); }
  void put(const std::string& k, const char* v) { kv.push_back({k, std::string(v)}); }
  void put(const std::string& k, bool v) { kv.push_back({k, v ? "true" : "false"}); }
  void put(const std::string& k, long long v) { kv.push_back({k, std::to_string(v)}); }
  void put(const std::string& k, int v) { kv.push_back({k, std::to_string(v)}); }
  void put(const std::string& k, size_t v) { kv.push_back({k, std::to_string(v)}); }
  Report& child(const std::string& t) {
    children.emplace_back(t);
    return children.back();
  }

  bool all_pass() const {
    for (auto& [k, v] : kv)
      if (k == "pass" && v == "false") return false;
    for (auto& c : children)
      if (!c.all_pass()) return false;
    return true;
  }

  void render(std::ostream& os, int depth = 0) const {
    std::string ind(depth * 2, ' ');
    if (!title.empty()) os << ind << "[" << title << "]\n";
    for (auto& [k, v] : kv) os << ind << (title.empty() ? "" : "  ") << k << " = " << v << "\n";
    for (auto& c : children) c.render(os, depth + 1);
  }
  std::string str() const {
    std::ostringstream os;
    render(os);
    return os.str();
  }
};

}  // namespace mfx
