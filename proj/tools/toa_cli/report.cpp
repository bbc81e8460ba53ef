#include "toa_cli/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "toa/dynamics.hpp"

namespace toa::cli {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

long long now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string Check::threshold_text() const {
  switch (bound) {
    case Bound::Below: return "< " + sci(lo);
    case Bound::Above: return "> " + sci(lo);
    case Bound::Within: return "[" + sci(lo) + ", " + sci(hi) + "]";
    case Bound::Info: return "-";
  }
  return "-";
}

Check& Report::push(Check check) {
  checks_.push_back(std::move(check));
  return checks_.back();
}

Check& Report::below(std::string name, double value, double limit, std::string note) {
  return push({std::move(name), value, Bound::Below, limit, 0.0, value < limit, 0.0, std::move(note)});
}

Check& Report::above(std::string name, double value, double limit, std::string note) {
  return push({std::move(name), value, Bound::Above, limit, 0.0, value > limit, 0.0, std::move(note)});
}

Check& Report::within(std::string name, double value, double lo, double hi, std::string note) {
  return push({std::move(name), value, Bound::Within, lo, hi, value >= lo && value <= hi, 0.0,
               std::move(note)});
}

Check& Report::info(std::string name, double value, std::string note) {
  return push({std::move(name), value, Bound::Info, 0.0, 0.0, true, 0.0, std::move(note)});
}

Check& Report::failed(std::string name, std::string note) {
  return push({std::move(name), NAN, Bound::Below, 0.0, 0.0, false, 0.0, std::move(note)});
}

void Report::charge(double seconds) {
  if (!checks_.empty()) checks_.back().runtime_s += seconds;
}

bool Report::pass() const {
  for (const auto& c : checks_) {
    if (!c.pass) return false;
  }
  return true;
}

double Report::total_runtime() const {
  double sum = 0.0;
  for (const auto& c : checks_) sum += c.runtime_s;
  return sum;
}

void Report::print(std::ostream& out) const {
  out << "== " << command_ << " ==\n";
  for (const auto& c : checks_) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-44s %12s  %-26s %8.3fs", c.pass ? "ok" : "FAIL",
                  c.name.c_str(), sci(c.value).c_str(), c.threshold_text().c_str(), c.runtime_s);
    out << line;
    if (!c.note.empty()) out << "  " << c.note;
    out << "\n";
  }
  char tail[96];
  std::snprintf(tail, sizeof tail, "%s: %zu checks, %.3fs\n", pass() ? "PASS" : "FAIL",
                checks_.size(), total_runtime());
  out << tail;
}

std::string Report::to_json() const {
  nlohmann::ordered_json root;
  root["command"] = command_;
  root["pass"] = pass();
  auto& list = root["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(format_fixed17(c.value))
                                           : nlohmann::ordered_json(nullptr);
    item["threshold"] = c.threshold_text();
    item["pass"] = c.pass;
    if (!c.note.empty()) item["note"] = c.note;
    list.push_back(std::move(item));
  }
  return root.dump(2) + "\n";
}

void Report::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  out << to_json();
}

Stopwatch::Stopwatch() : start_ns_(now_ns()) {}

double Stopwatch::seconds() const { return static_cast<double>(now_ns() - start_ns_) * 1e-9; }

void Stopwatch::restart() { start_ns_ = now_ns(); }

}  // namespace toa::cli
